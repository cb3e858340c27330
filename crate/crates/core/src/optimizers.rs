//! Closed-form single-gate minimizers and the sequential sweep.
//!
//! Each minimizer fixes every gate but one and reconstructs the cost as a
//! function of that gate's parameters from a handful of circuit
//! evaluations: a sinusoid for Rotosolve (3), a 3x3 quadratic form in the
//! rotation axis for Fraxis (6) and a 4x4 quadratic form in the unit
//! quaternion for FQS (10).

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{canonicalize_angle, canonicalize_sign, gate_unitary, Circuit, GateParam};
use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigen, min_eigvec_closest_to};
use crate::pauli::Observable;
use crate::statevec::{Mat2, NoiseSpec, StateVector};

const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Optimizer {
    Rotosolve,
    Fraxis,
    Fqs,
}

impl Optimizer {
    /// Circuit evaluations consumed by one gate update.
    pub fn evals_per_gate(self) -> u64 {
        match self {
            Optimizer::Rotosolve => 3,
            Optimizer::Fraxis => 6,
            Optimizer::Fqs => 10,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Optimizer::Rotosolve => "rotosolve",
            Optimizer::Fraxis => "fraxis",
            Optimizer::Fqs => "fqs",
        }
    }
}

impl std::fmt::Display for Optimizer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Optimizer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rotosolve" => Ok(Optimizer::Rotosolve),
            "fraxis" => Ok(Optimizer::Fraxis),
            "fqs" => Ok(Optimizer::Fqs),
            other => Err(Error::config(format!("unknown optimizer {other:?}"))),
        }
    }
}

/// Circuit-evaluation accounting against a fixed budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalLedger {
    used: u64,
    budget: u64,
}

impl EvalLedger {
    pub fn new(budget: u64) -> Self {
        Self { used: 0, budget }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn remaining(&self) -> u64 {
        self.budget - self.used
    }

    pub fn can_afford(&self, evals: u64) -> bool {
        self.remaining() >= evals
    }

    pub fn charge(&mut self, evals: u64) -> Result<()> {
        if !self.can_afford(evals) {
            return Err(Error::BudgetExhausted {
                used: self.used,
                budget: self.budget,
                requested: evals,
            });
        }
        self.used += evals;
        Ok(())
    }
}

/// Evaluation budget equal to `rotosolve_iters` Rotosolve sweeps over an
/// `n x L` circuit.
pub fn make_budget(n_qubits: usize, n_layers: usize, rotosolve_iters: usize) -> u64 {
    Optimizer::Rotosolve.evals_per_gate() * (rotosolve_iters * n_layers * n_qubits) as u64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateUpdateResult {
    pub new_param: GateParam,
    /// Post-update cost predicted by the fitted model; no extra evaluation.
    pub predicted_cost: f64,
    pub evals_spent: u64,
}

/// Minimizer of `C(theta) = a cos(theta - b) + m` from samples at
/// `phi`, `phi + pi/2`, `phi - pi/2`. Returns `(theta*, C(theta*))` with
/// `theta*` in `(-pi, pi]`.
pub fn rotosolve_minimize(phi: f64, c_phi: f64, c_plus: f64, c_minus: f64) -> (f64, f64) {
    let theta = phi - FRAC_PI_2 - (2.0 * c_phi - c_plus - c_minus).atan2(c_plus - c_minus);
    let mean = 0.5 * (c_plus + c_minus);
    let amplitude = ((c_phi - mean).powi(2) + (0.5 * (c_plus - c_minus)).powi(2)).sqrt();
    (canonicalize_angle(theta), mean - amplitude)
}

/// Reconstructs the symmetric matrix `A` of `C(x) = x^T A x` on the unit
/// sphere from `N(N+1)/2` samples: `C(e_k)` for the diagonal and
/// `C((e_j + e_k)/sqrt2)` for each `j < k`.
pub fn reconstruct_quadratic_form<const N: usize, F>(mut cost: F) -> Result<[[f64; N]; N]>
where
    F: FnMut(&[f64; N]) -> Result<f64>,
{
    let mut a = [[0.0; N]; N];
    for k in 0..N {
        let mut e = [0.0; N];
        e[k] = 1.0;
        a[k][k] = cost(&e)?;
    }
    for j in 0..N {
        for k in (j + 1)..N {
            let mut v = [0.0; N];
            v[j] = FRAC_1_SQRT_2;
            v[k] = FRAC_1_SQRT_2;
            let off = cost(&v)? - 0.5 * (a[j][j] + a[k][k]);
            a[j][k] = off;
            a[k][j] = off;
        }
    }
    Ok(a)
}

/// Unit minimizer of `x^T A x` and the minimum, preferring the direction
/// of `current` inside a degenerate lowest eigenspace.
pub fn quadratic_form_minimize<const N: usize>(a: &[[f64; N]; N], current: &[f64; N]) -> ([f64; N], f64) {
    let eig = jacobi_eigen(a);
    let scale = eig.values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let v = min_eigvec_closest_to(&eig, current, DEGENERACY_TOL * scale);
    (canonicalize_sign(v), eig.values[0])
}

/// Cost of the circuit as a function of gate `d` alone. The state just
/// before gate `d` is cached; every call is still one full circuit
/// evaluation.
struct GateLandscape<'a> {
    circuit: &'a Circuit,
    d: usize,
    prefix: StateVector,
    obs: &'a Observable,
    noise: NoiseSpec,
}

impl<'a> GateLandscape<'a> {
    fn new(circuit: &'a Circuit, d: usize, obs: &'a Observable, noise: NoiseSpec) -> Result<Self> {
        if d >= circuit.n_gates() {
            return Err(Error::config(format!(
                "gate index {d} out of range for {} gates",
                circuit.n_gates()
            )));
        }
        let mut prefix = StateVector::zero(circuit.n_qubits())?;
        circuit.apply_range(&mut prefix, 0..d)?;
        Ok(Self {
            circuit,
            d,
            prefix,
            obs,
            noise,
        })
    }

    fn eval<R: Rng + ?Sized>(&self, m: &Mat2, rng: &mut R) -> Result<f64> {
        let mut s = self.prefix.clone();
        self.circuit.apply_step(&mut s, self.d, m)?;
        self.circuit.apply_range(&mut s, self.d + 1..self.circuit.n_gates())?;
        s.measure(self.obs, self.noise, rng)
    }
}

fn wrong_family(d: usize, g: &GateParam, want: Optimizer) -> Error {
    Error::config(format!("gate {d} is {:?}, {want} requires its own family", g.family()))
}

pub fn rotosolve_update<R: Rng + ?Sized>(
    c: &Circuit,
    d: usize,
    obs: &Observable,
    noise: NoiseSpec,
    ledger: &mut EvalLedger,
    rng: &mut R,
) -> Result<GateUpdateResult> {
    let land = GateLandscape::new(c, d, obs, noise)?;
    let &GateParam::AxisAngle { axis, theta: phi } = c.gate(d) else {
        return Err(wrong_family(d, c.gate(d), Optimizer::Rotosolve));
    };
    let evals = Optimizer::Rotosolve.evals_per_gate();
    ledger.charge(evals)?;
    let mut at = |theta: f64| land.eval(&gate_unitary(&GateParam::AxisAngle { axis, theta }), rng);
    let c_phi = at(phi)?;
    let c_plus = at(phi + FRAC_PI_2)?;
    let c_minus = at(phi - FRAC_PI_2)?;
    let (theta, predicted_cost) = rotosolve_minimize(phi, c_phi, c_plus, c_minus);
    Ok(GateUpdateResult {
        new_param: GateParam::AxisAngle { axis, theta },
        predicted_cost,
        evals_spent: evals,
    })
}

/// Reconstructs the Fraxis matrix `R` with `C(n) = n^T R n` for gate `d`.
/// Charges 6 evaluations.
pub fn fraxis_matrix<R: Rng + ?Sized>(
    c: &Circuit,
    d: usize,
    obs: &Observable,
    noise: NoiseSpec,
    ledger: &mut EvalLedger,
    rng: &mut R,
) -> Result<[[f64; 3]; 3]> {
    let land = GateLandscape::new(c, d, obs, noise)?;
    ledger.charge(Optimizer::Fraxis.evals_per_gate())?;
    reconstruct_quadratic_form(|n: &[f64; 3]| land.eval(&gate_unitary(&GateParam::FraxisAxis { n: *n }), rng))
}

/// Reconstructs the FQS matrix `S` with `C(q) = q^T S q` for gate `d`.
/// Charges 10 evaluations.
pub fn fqs_matrix<R: Rng + ?Sized>(
    c: &Circuit,
    d: usize,
    obs: &Observable,
    noise: NoiseSpec,
    ledger: &mut EvalLedger,
    rng: &mut R,
) -> Result<[[f64; 4]; 4]> {
    let land = GateLandscape::new(c, d, obs, noise)?;
    ledger.charge(Optimizer::Fqs.evals_per_gate())?;
    reconstruct_quadratic_form(|q: &[f64; 4]| land.eval(&gate_unitary(&GateParam::Quaternion { q: *q }), rng))
}

pub fn fraxis_update<R: Rng + ?Sized>(
    c: &Circuit,
    d: usize,
    obs: &Observable,
    noise: NoiseSpec,
    ledger: &mut EvalLedger,
    rng: &mut R,
) -> Result<GateUpdateResult> {
    let &GateParam::FraxisAxis { n: current } = c.gate(d) else {
        return Err(wrong_family(d, c.gate(d), Optimizer::Fraxis));
    };
    let r = fraxis_matrix(c, d, obs, noise, ledger, rng)?;
    let (n, predicted_cost) = quadratic_form_minimize(&r, &current);
    Ok(GateUpdateResult {
        new_param: GateParam::FraxisAxis { n },
        predicted_cost,
        evals_spent: Optimizer::Fraxis.evals_per_gate(),
    })
}

pub fn fqs_update<R: Rng + ?Sized>(
    c: &Circuit,
    d: usize,
    obs: &Observable,
    noise: NoiseSpec,
    ledger: &mut EvalLedger,
    rng: &mut R,
) -> Result<GateUpdateResult> {
    let &GateParam::Quaternion { q: current } = c.gate(d) else {
        return Err(wrong_family(d, c.gate(d), Optimizer::Fqs));
    };
    let s = fqs_matrix(c, d, obs, noise, ledger, rng)?;
    let (q, predicted_cost) = quadratic_form_minimize(&s, &current);
    Ok(GateUpdateResult {
        new_param: GateParam::Quaternion { q },
        predicted_cost,
        evals_spent: Optimizer::Fqs.evals_per_gate(),
    })
}

/// Runs one update of gate `d` with `opt`.
pub fn update_gate<R: Rng + ?Sized>(
    opt: Optimizer,
    c: &Circuit,
    d: usize,
    obs: &Observable,
    noise: NoiseSpec,
    ledger: &mut EvalLedger,
    rng: &mut R,
) -> Result<GateUpdateResult> {
    match opt {
        Optimizer::Rotosolve => rotosolve_update(c, d, obs, noise, ledger, rng),
        Optimizer::Fraxis => fraxis_update(c, d, obs, noise, ledger, rng),
        Optimizer::Fqs => fqs_update(c, d, obs, noise, ledger, rng),
    }
}

/// One row of a run's cost trace, written after every gate update.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    /// Zero-based count of gate optimizations in the run.
    pub gate_opt_index: u64,
    pub gate: usize,
    /// Ledger total after this update.
    pub evals_used: u64,
    pub cost: f64,
    /// Switching statistic, when the run computes one.
    pub delta: Option<f64>,
    pub phase: Optimizer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepOutcome {
    Completed,
    /// The budget could not cover the next update; gates before it were
    /// updated.
    BudgetExhausted {
        next_gate: usize,
    },
}

/// Optimizes gates `start..L*n` in order, stopping at the first gate the
/// remaining budget cannot cover.
#[allow(clippy::too_many_arguments)]
pub fn sweep_from<R: Rng + ?Sized>(
    c: &mut Circuit,
    start: usize,
    opt: Optimizer,
    obs: &Observable,
    noise: NoiseSpec,
    ledger: &mut EvalLedger,
    rng: &mut R,
    trace: &mut Vec<TraceEntry>,
) -> Result<SweepOutcome> {
    for d in start..c.n_gates() {
        if !ledger.can_afford(opt.evals_per_gate()) {
            return Ok(SweepOutcome::BudgetExhausted { next_gate: d });
        }
        let r = update_gate(opt, c, d, obs, noise, ledger, rng)?;
        c.set_gate(d, r.new_param);
        trace.push(TraceEntry {
            gate_opt_index: trace.len() as u64,
            gate: d,
            evals_used: ledger.used(),
            cost: r.predicted_cost,
            delta: None,
            phase: opt,
        });
    }
    Ok(SweepOutcome::Completed)
}

/// One full sweep: every gate once, layer-major, qubit-ascending.
pub fn sweep<R: Rng + ?Sized>(
    c: &mut Circuit,
    opt: Optimizer,
    obs: &Observable,
    noise: NoiseSpec,
    ledger: &mut EvalLedger,
    rng: &mut R,
    trace: &mut Vec<TraceEntry>,
) -> Result<SweepOutcome> {
    sweep_from(c, 0, opt, obs, noise, ledger, rng, trace)
}
