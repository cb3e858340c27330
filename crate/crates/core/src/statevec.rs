//! Dense state-vector simulation.
//!
//! Qubit 0 is the most significant bit of the amplitude index, so on three
//! qubits `|q0 q1 q2> = |1 0 0>` is amplitude 4.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::circuit::{EntanglerKind, EntanglerSpec};
use crate::error::{Error, Result};
use crate::pauli::{Observable, PauliString, Projector};

pub const MAX_QUBITS: usize = 20;
const UNITARITY_TOL: f64 = 1e-10;

/// Row-major 2x2 complex matrix.
pub type Mat2 = [[Complex64; 2]; 2];

pub const IDENTITY: Mat2 = [
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
];

/// Largest entry of `|U^dagger U - I|`.
pub fn unitarity_defect(m: &Mat2) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..2 {
        for j in 0..2 {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                s += m[k][i].conj() * m[k][j];
            }
            if i == j {
                s -= 1.0;
            }
            worst = worst.max(s.norm());
        }
    }
    worst
}

/// How the cost is measured: exactly, or with a finite number of shots per
/// Hamiltonian term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NoiseSpec {
    #[default]
    Ideal,
    Shots(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::config(format!(
                "qubit count {n_qubits} outside 1..={MAX_QUBITS}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() || len > 1 << MAX_QUBITS {
            return Err(Error::config(format!("amplitude count {len} is not 2^n")));
        }
        let norm: f64 = amps.iter().map(Complex64::norm_sqr).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::numeric(format!("state has squared norm {norm}")));
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// `<other|self>`.
    pub fn inner(&self, other: &[Complex64]) -> Complex64 {
        other.iter().zip(&self.amps).map(|(a, b)| a.conj() * b).sum()
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::config(format!(
                "qubit {qubit} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    fn bit(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    /// Applies `matrix` to `qubit`; rejects matrices that are not unitary
    /// within 1e-10.
    pub fn apply_single_qubit(&mut self, qubit: usize, matrix: &Mat2) -> Result<()> {
        self.check_qubit(qubit)?;
        let defect = unitarity_defect(matrix);
        if defect > UNITARITY_TOL {
            return Err(Error::numeric(format!(
                "gate matrix is not unitary (defect {defect:.3e})"
            )));
        }
        self.apply_single_qubit_unchecked(qubit, matrix);
        Ok(())
    }

    pub(crate) fn apply_single_qubit_unchecked(&mut self, qubit: usize, m: &Mat2) {
        let bit = self.bit(qubit);
        let [[m00, m01], [m10, m11]] = *m;
        for base in 0..self.amps.len() {
            if base & bit != 0 {
                continue;
            }
            let a0 = self.amps[base];
            let a1 = self.amps[base | bit];
            self.amps[base] = m00 * a0 + m01 * a1;
            self.amps[base | bit] = m10 * a0 + m11 * a1;
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_pair(a, b)?;
        let mask = self.bit(a) | self.bit(b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_pair(control, target)?;
        let c = self.bit(control);
        let t = self.bit(target);
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
        Ok(())
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::config(format!("two-qubit gate on repeated qubit {a}")));
        }
        Ok(())
    }

    /// Applies every sub-layer of `spec` in order.
    pub fn apply_entangler(&mut self, spec: &EntanglerSpec) -> Result<()> {
        spec.validate(self.n_qubits)?;
        for sub in spec.sub_layers() {
            for &(c, t) in sub {
                match spec.kind() {
                    EntanglerKind::Cz => self.apply_cz(c, t)?,
                    EntanglerKind::Cnot => self.apply_cnot(c, t)?,
                }
            }
        }
        Ok(())
    }

    fn check_observable(&self, obs: &Observable) -> Result<()> {
        match obs {
            Observable::PauliSum(s) if s.min_qubits() > self.n_qubits => Err(Error::config(format!(
                "observable acts on {} qubits but state has {}",
                s.min_qubits(),
                self.n_qubits
            ))),
            Observable::Projector(p) if p.n_qubits() != self.n_qubits => Err(Error::config(format!(
                "projector is on {} qubits but state has {}",
                p.n_qubits(),
                self.n_qubits
            ))),
            _ => Ok(()),
        }
    }

    /// `<psi|P|psi>` for a single Pauli string, ignoring its coefficient.
    pub fn pauli_expectation(&self, term: &PauliString) -> f64 {
        let (flip, phase_mask, n_y) = term.masks(self.n_qubits);
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, &amp) in self.amps.iter().enumerate() {
            let v = self.amps[b ^ flip].conj() * amp;
            if (b & phase_mask).count_ones() % 2 == 1 {
                acc -= v;
            } else {
                acc += v;
            }
        }
        // i^{n_y}
        match n_y % 4 {
            0 => acc.re,
            1 => -acc.im,
            2 => -acc.re,
            _ => acc.im,
        }
    }

    fn overlap_probability(&self, p: &Projector) -> f64 {
        self.inner(p.target()).norm_sqr()
    }

    /// Exact `<psi|M|psi>`.
    pub fn exact_expectation(&self, obs: &Observable) -> Result<f64> {
        self.check_observable(obs)?;
        Ok(match obs {
            Observable::PauliSum(s) => s
                .terms()
                .iter()
                .map(|t| {
                    if t.is_identity() {
                        t.coeff
                    } else {
                        t.coeff * self.pauli_expectation(t)
                    }
                })
                .sum(),
            Observable::Projector(p) => -self.overlap_probability(p),
        })
    }

    /// Shot-noise estimate of `<psi|M|psi>` with independent binomial draws
    /// of `shots_per_term` outcomes for every non-identity term. A projector
    /// counts as a single term whose success probability is the overlap.
    pub fn estimate_expectation<R: Rng + ?Sized>(
        &self,
        obs: &Observable,
        shots_per_term: u64,
        rng: &mut R,
    ) -> Result<f64> {
        if shots_per_term == 0 {
            return Err(Error::config("shots per term must be at least 1"));
        }
        self.check_observable(obs)?;
        let shots = shots_per_term as f64;
        match obs {
            Observable::PauliSum(s) => {
                let mut total = 0.0;
                for t in s.terms() {
                    if t.is_identity() {
                        total += t.coeff;
                        continue;
                    }
                    let p = ((1.0 + self.pauli_expectation(t)) / 2.0).clamp(0.0, 1.0);
                    let k = sample_binomial(shots_per_term, p, rng)?;
                    total += t.coeff * (2.0 * k as f64 / shots - 1.0);
                }
                Ok(total)
            }
            Observable::Projector(p) => {
                let f = self.overlap_probability(p).clamp(0.0, 1.0);
                let k = sample_binomial(shots_per_term, f, rng)?;
                Ok(-(k as f64) / shots)
            }
        }
    }

    /// Exact or shot-estimated expectation depending on `noise`.
    pub fn measure<R: Rng + ?Sized>(&self, obs: &Observable, noise: NoiseSpec, rng: &mut R) -> Result<f64> {
        match noise {
            NoiseSpec::Ideal => self.exact_expectation(obs),
            NoiseSpec::Shots(s) => self.estimate_expectation(obs, s, rng),
        }
    }
}

fn sample_binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> Result<u64> {
    let dist = Binomial::new(n, p).map_err(|e| Error::numeric(format!("binomial({n}, {p}): {e}")))?;
    Ok(dist.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{Pauli, PauliSum};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rx(theta: f64) -> Mat2 {
        let (s, co) = (theta / 2.0).sin_cos();
        [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
    }

    fn rz(theta: f64) -> Mat2 {
        let (s, co) = (theta / 2.0).sin_cos();
        [[c(co, -s), c(0.0, 0.0)], [c(0.0, 0.0), c(co, s)]]
    }

    fn z(q: usize) -> Observable {
        PauliSum::new([PauliString::new(1.0, [(q, Pauli::Z)])]).into()
    }

    #[test]
    fn zero_state_shapes() {
        let s = StateVector::zero(1).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        let s = StateVector::zero(3).unwrap();
        assert_eq!(s.amplitudes().len(), 8);
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert!(matches!(StateVector::zero(0), Err(Error::Config(_))));
        assert!(matches!(StateVector::zero(21), Err(Error::Config(_))));
    }

    #[test]
    fn rz_zero_is_identity() {
        let mut s = StateVector::zero(2).unwrap();
        s.apply_single_qubit(0, &rx(0.7)).unwrap();
        let before = s.clone();
        s.apply_single_qubit(1, &rz(0.0)).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn rx_pi_flips_with_phase() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_single_qubit(0, &rx(PI)).unwrap();
        let a = s.amplitudes();
        assert!(a[0].norm() < 1e-15);
        assert!((a[1] - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_non_unitary_and_bad_index() {
        let mut s = StateVector::zero(2).unwrap();
        let bad = [[c(2.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(s.apply_single_qubit(0, &bad), Err(Error::Numeric(_))));
        assert!(matches!(s.apply_single_qubit(2, &IDENTITY), Err(Error::Config(_))));
    }

    #[test]
    fn cz_phases_only_the_all_ones_component() {
        let mut s = StateVector::zero(2).unwrap();
        s.apply_cz(0, 1).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));

        let mut s = StateVector::from_amplitudes(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        s.apply_cz(0, 1).unwrap();
        assert_eq!(s.amplitudes()[3], c(-1.0, 0.0));
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        // |10> -> |11>
        let mut s = StateVector::from_amplitudes(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert_eq!(s.amplitudes()[3], c(1.0, 0.0));
        // |01> unchanged
        let mut s = StateVector::from_amplitudes(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert_eq!(s.amplitudes()[1], c(1.0, 0.0));
    }

    #[test]
    fn z_on_zero_state_is_one_everywhere() {
        let s = StateVector::zero(4).unwrap();
        for q in 0..4 {
            assert_eq!(s.exact_expectation(&z(q)).unwrap(), 1.0);
        }
    }

    #[test]
    fn y_expectation_sign() {
        // RX(-pi/2)|0> = (|0> + i|1>)/sqrt2, the +1 eigenstate of Y.
        let mut s = StateVector::zero(1).unwrap();
        s.apply_single_qubit(0, &rx(-PI / 2.0)).unwrap();
        let y: Observable = PauliSum::new([PauliString::new(1.0, [(0, Pauli::Y)])]).into();
        assert!((s.exact_expectation(&y).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn projector_onto_self_is_minus_one() {
        let mut s = StateVector::zero(2).unwrap();
        s.apply_single_qubit(0, &rx(1.1)).unwrap();
        s.apply_single_qubit(1, &rx(-0.4)).unwrap();
        let p = Observable::Projector(Projector::new(s.amplitudes().to_vec()).unwrap());
        assert!((s.exact_expectation(&p).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn observable_wider_than_state_is_rejected() {
        let s = StateVector::zero(2).unwrap();
        assert!(matches!(s.exact_expectation(&z(2)), Err(Error::Config(_))));
    }

    #[test]
    fn degenerate_shot_estimates() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = StateVector::zero(1).unwrap();
        for shots in [1, 7, 8192] {
            assert_eq!(s.estimate_expectation(&z(0), shots, &mut rng).unwrap(), 1.0);
        }
        let mut s1 = StateVector::zero(1).unwrap();
        s1.apply_single_qubit(0, &rx(PI)).unwrap();
        assert_eq!(s1.estimate_expectation(&z(0), 100, &mut rng).unwrap(), -1.0);
        assert!(matches!(
            s.estimate_expectation(&z(0), 0, &mut rng),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn identity_terms_pass_through_shot_estimator() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = StateVector::zero(1).unwrap();
        let obs: Observable = PauliSum::new([PauliString::identity(2.5)]).into();
        assert_eq!(s.estimate_expectation(&obs, 10, &mut rng).unwrap(), 2.5);
    }
}
