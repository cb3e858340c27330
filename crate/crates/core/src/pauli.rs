//! Pauli strings and the observables built from them.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        };
        f.write_str(s)
    }
}

/// A real-weighted tensor product of Pauli operators; identity on every
/// qubit absent from `paulis`.
///
/// Serializes as `{"coeff": c, "paulis": {"3": "X", "4": "Z"}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliString {
    pub coeff: f64,
    pub paulis: BTreeMap<usize, Pauli>,
}

impl PauliString {
    pub fn new(coeff: f64, factors: impl IntoIterator<Item = (usize, Pauli)>) -> Self {
        Self {
            coeff,
            paulis: factors.into_iter().collect(),
        }
    }

    pub fn identity(coeff: f64) -> Self {
        Self {
            coeff,
            paulis: BTreeMap::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.paulis.is_empty()
    }

    /// Highest qubit index touched, plus one.
    pub fn min_qubits(&self) -> usize {
        self.paulis.keys().next_back().map_or(0, |q| q + 1)
    }

    /// Bit masks `(flip, phase)` for an `n`-qubit register with qubit 0 as
    /// the most significant bit, and the number of `Y` factors.
    pub(crate) fn masks(&self, n_qubits: usize) -> (usize, usize, u32) {
        let mut flip = 0usize;
        let mut phase = 0usize;
        let mut n_y = 0;
        for (&q, &p) in &self.paulis {
            let bit = 1usize << (n_qubits - 1 - q);
            match p {
                Pauli::X => flip |= bit,
                Pauli::Z => phase |= bit,
                Pauli::Y => {
                    flip |= bit;
                    phase |= bit;
                    n_y += 1;
                }
            }
        }
        (flip, phase, n_y)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.coeff)?;
        if self.paulis.is_empty() {
            return f.write_str(" I");
        }
        for (q, p) in &self.paulis {
            write!(f, " {p}{q}")?;
        }
        Ok(())
    }
}

/// Weighted sum of Pauli strings with duplicates merged and zero terms
/// dropped.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PauliSum {
    terms: Vec<PauliString>,
}

impl PauliSum {
    pub fn new(terms: impl IntoIterator<Item = PauliString>) -> Self {
        let mut merged: BTreeMap<Vec<(usize, Pauli)>, f64> = BTreeMap::new();
        let mut order = Vec::new();
        for t in terms {
            let key: Vec<_> = t.paulis.iter().map(|(&q, &p)| (q, p)).collect();
            match merged.get_mut(&key) {
                Some(c) => *c += t.coeff,
                None => {
                    order.push(key.clone());
                    merged.insert(key, t.coeff);
                }
            }
        }
        let terms = order
            .into_iter()
            .filter_map(|key| {
                let c = merged[&key];
                (c != 0.0).then(|| PauliString::new(c, key))
            })
            .collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_qubits(&self) -> usize {
        self.terms.iter().map(PauliString::min_qubits).max().unwrap_or(0)
    }
}

impl std::ops::Add for PauliSum {
    type Output = PauliSum;

    fn add(self, rhs: PauliSum) -> PauliSum {
        PauliSum::new(self.terms.into_iter().chain(rhs.terms))
    }
}

/// Rank-one projector observable `-|target><target|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Projector {
    target: Vec<Complex64>,
}

impl Projector {
    pub fn new(target: Vec<Complex64>) -> Result<Self> {
        let len = target.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::config(format!(
                "projector target length {len} is not a power of two >= 2"
            )));
        }
        let norm_sqr: f64 = target.iter().map(Complex64::norm_sqr).sum();
        if (norm_sqr.sqrt() - 1.0).abs() > 1e-10 {
            return Err(Error::numeric(format!(
                "projector target has norm {} (expected 1)",
                norm_sqr.sqrt()
            )));
        }
        Ok(Self { target })
    }

    pub fn target(&self) -> &[Complex64] {
        &self.target
    }

    pub fn n_qubits(&self) -> usize {
        self.target.len().trailing_zeros() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    PauliSum(PauliSum),
    Projector(Projector),
}

impl Observable {
    /// Smallest register the observable can act on.
    pub fn min_qubits(&self) -> usize {
        match self {
            Observable::PauliSum(s) => s.min_qubits(),
            Observable::Projector(p) => p.n_qubits(),
        }
    }

    pub fn as_pauli_sum(&self) -> Option<&PauliSum> {
        match self {
            Observable::PauliSum(s) => Some(s),
            Observable::Projector(_) => None,
        }
    }
}

impl From<PauliSum> for Observable {
    fn from(s: PauliSum) -> Self {
        Observable::PauliSum(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_merge_and_zeros_drop() {
        let s = PauliSum::new([
            PauliString::new(1.0, [(0, Pauli::X), (1, Pauli::X)]),
            PauliString::new(0.5, [(1, Pauli::X), (0, Pauli::X)]),
            PauliString::new(2.0, [(2, Pauli::Z)]),
            PauliString::new(-2.0, [(2, Pauli::Z)]),
            PauliString::new(0.0, [(3, Pauli::Y)]),
        ]);
        assert_eq!(s.len(), 1);
        assert_eq!(s.terms()[0].coeff, 1.5);
        assert_eq!(s.min_qubits(), 2);
    }

    #[test]
    fn term_json_shape() {
        let t = PauliString::new(0.25, [(3, Pauli::X), (4, Pauli::Z)]);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"coeff":0.25,"paulis":{"3":"X","4":"Z"}}"#);
        let back: PauliString = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn projector_rejects_unnormalized_target() {
        let t = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(Projector::new(t), Err(Error::Numeric(_))));
    }
}
