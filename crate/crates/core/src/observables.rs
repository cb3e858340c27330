//! Cost-function builders: the cyclic Heisenberg chain, the 1-D
//! Fermi-Hubbard chain under Jordan-Wigner, and the fidelity projector,
//! plus a dense ground-state solver for small registers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Observable, Pauli, PauliString, PauliSum, Projector};

/// Largest register handled by [`exact_ground_energy`].
pub const MAX_DENSE_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergParams {
    pub n_sites: usize,
    pub coupling: f64,
    pub field: f64,
}

/// `J sum_i (X_i X_{i+1} + Y_i Y_{i+1} + Z_i Z_{i+1}) + h sum_i Z_i` on a
/// ring of `n_sites >= 3` spins.
pub fn heisenberg_hamiltonian(p: &HeisenbergParams) -> Result<Observable> {
    if p.n_sites < 3 {
        return Err(Error::config(format!(
            "cyclic Heisenberg chain needs at least 3 sites, got {}",
            p.n_sites
        )));
    }
    if !p.coupling.is_finite() || !p.field.is_finite() {
        return Err(Error::config("Heisenberg parameters must be finite"));
    }
    let n = p.n_sites;
    let mut terms = Vec::with_capacity(4 * n);
    for i in 0..n {
        let j = (i + 1) % n;
        for pauli in [Pauli::X, Pauli::Y, Pauli::Z] {
            terms.push(PauliString::new(p.coupling, [(i, pauli), (j, pauli)]));
        }
    }
    terms.extend((0..n).map(|i| PauliString::new(p.field, [(i, Pauli::Z)])));
    Ok(PauliSum::new(terms).into())
}

/// Assignment of spin-orbitals to qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinOrdering {
    /// Spin-up modes on qubits `0..n`, spin-down on `n..2n`.
    #[default]
    SpinBlocked,
    /// `up_0, down_0, up_1, down_1, ...`.
    Interleaved,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HubbardParams {
    pub n_sites: usize,
    pub hopping: f64,
    pub interaction: f64,
    #[serde(default)]
    pub ordering: SpinOrdering,
}

impl HubbardParams {
    pub fn n_qubits(&self) -> usize {
        2 * self.n_sites
    }

    fn mode(&self, site: usize, spin_down: bool) -> usize {
        match self.ordering {
            SpinOrdering::SpinBlocked => site + if spin_down { self.n_sites } else { 0 },
            SpinOrdering::Interleaved => 2 * site + usize::from(spin_down),
        }
    }
}

/// Fermi-Hubbard Hamiltonian on an open 1 x n chain,
/// `-t sum_<ij>,s (c+_is c_js + h.c.) + U sum_i n_i,up n_i,down`, mapped
/// to qubits with Jordan-Wigner (occupied mode = `|1>`).
pub fn hubbard_hamiltonian(p: &HubbardParams) -> Result<Observable> {
    if p.n_sites == 0 || p.n_qubits() > crate::statevec::MAX_QUBITS {
        return Err(Error::config(format!(
            "Hubbard chain of {} sites is outside the supported range",
            p.n_sites
        )));
    }
    if !p.hopping.is_finite() || !p.interaction.is_finite() {
        return Err(Error::config("Hubbard parameters must be finite"));
    }
    let mut terms = Vec::new();
    for spin_down in [false, true] {
        for i in 0..p.n_sites.saturating_sub(1) {
            let (a, b) = (p.mode(i, spin_down), p.mode(i + 1, spin_down));
            terms.extend(hopping_terms(a.min(b), a.max(b), p.hopping));
        }
    }
    let quarter = p.interaction / 4.0;
    for i in 0..p.n_sites {
        let (a, b) = (p.mode(i, false), p.mode(i, true));
        terms.push(PauliString::identity(quarter));
        terms.push(PauliString::new(-quarter, [(a, Pauli::Z)]));
        terms.push(PauliString::new(-quarter, [(b, Pauli::Z)]));
        terms.push(PauliString::new(quarter, [(a, Pauli::Z), (b, Pauli::Z)]));
    }
    Ok(PauliSum::new(terms).into())
}

/// `-t (c+_p c_q + c+_q c_p)` for modes `p < q`:
/// `-(t/2)(X_p Z...Z X_q + Y_p Z...Z Y_q)`.
fn hopping_terms(p: usize, q: usize, t: f64) -> [PauliString; 2] {
    let string = |end: Pauli| {
        let mut f: Vec<(usize, Pauli)> = vec![(p, end), (q, end)];
        f.extend((p + 1..q).map(|k| (k, Pauli::Z)));
        PauliString::new(-t / 2.0, f)
    };
    [string(Pauli::X), string(Pauli::Y)]
}

/// Observable `-|target><target|`; its expectation is minus the fidelity.
pub fn fidelity_projector(target: Vec<Complex64>) -> Result<Observable> {
    Ok(Observable::Projector(Projector::new(target)?))
}

/// Random pure state: independent standard-normal real and imaginary parts
/// for every amplitude, normalized to unit length.
pub fn sample_random_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<Vec<Complex64>> {
    if n_qubits == 0 || n_qubits > crate::statevec::MAX_QUBITS {
        return Err(Error::config(format!("cannot sample a {n_qubits}-qubit state")));
    }
    loop {
        let v: Vec<Complex64> = (0..1usize << n_qubits)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm > 0.0 {
            return Ok(v.into_iter().map(|z| z / norm).collect());
        }
    }
}

/// Dense `2^n x 2^n` matrix of an observable (qubit 0 = most significant
/// bit).
pub fn dense_matrix(obs: &Observable, n_qubits: usize) -> Result<DMatrix<Complex64>> {
    if n_qubits == 0 || n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::Capability(format!(
            "dense matrices are limited to {MAX_DENSE_QUBITS} qubits, requested {n_qubits}"
        )));
    }
    if obs.min_qubits() > n_qubits {
        return Err(Error::config(format!(
            "observable needs {} qubits, register has {n_qubits}",
            obs.min_qubits()
        )));
    }
    let dim = 1usize << n_qubits;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    match obs {
        Observable::PauliSum(sum) => {
            for t in sum.terms() {
                let (flip, phase_mask, n_y) = t.masks(n_qubits);
                let i_pow = [
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, 1.0),
                    Complex64::new(-1.0, 0.0),
                    Complex64::new(0.0, -1.0),
                ][(n_y % 4) as usize];
                for b in 0..dim {
                    let sign = if (b & phase_mask).count_ones() % 2 == 1 {
                        -1.0
                    } else {
                        1.0
                    };
                    m[(b ^ flip, b)] += i_pow * (t.coeff * sign);
                }
            }
        }
        Observable::Projector(p) => {
            if p.n_qubits() != n_qubits {
                return Err(Error::config("projector size does not match register"));
            }
            let phi = p.target();
            for i in 0..dim {
                for j in 0..dim {
                    m[(i, j)] = -phi[i] * phi[j].conj();
                }
            }
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundStateResult {
    pub energy: f64,
    pub degeneracy: usize,
}

/// Lowest eigenvalue of the observable's matrix on `n_qubits` qubits.
pub fn exact_ground_energy(obs: &Observable, n_qubits: usize) -> Result<GroundStateResult> {
    let m = dense_matrix(obs, n_qubits)?;
    let mut values: Vec<f64> = if m.iter().all(|z| z.im == 0.0) {
        m.map(|z| z.re).symmetric_eigenvalues().iter().copied().collect()
    } else {
        m.symmetric_eigenvalues().iter().copied().collect()
    };
    values.sort_by(f64::total_cmp);
    let energy = values[0];
    let tol = 1e-8 * energy.abs().max(1.0);
    let degeneracy = values.iter().take_while(|v| **v - energy <= tol).count();
    Ok(GroundStateResult { energy, degeneracy })
}
