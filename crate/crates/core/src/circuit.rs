//! Layered ansatz: `L` layers of single-qubit gates on `n` qubits, each
//! layer followed by a CZ/CNOT entangling block.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizers::{EvalLedger, Optimizer};
use crate::pauli::Observable;
use crate::statevec::{Mat2, NoiseSpec, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Axis {
        Axis::ALL[rng.random_range(0..3)]
    }
}

/// Parameterization of one single-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GateParam {
    /// `cos(theta/2) I - i sin(theta/2) sigma_axis`.
    AxisAngle { axis: Axis, theta: f64 },
    /// `-i (n . sigma)` for a unit 3-vector `n`.
    FraxisAxis { n: [f64; 3] },
    /// `q0 I - i (q1 X + q2 Y + q3 Z)` for a unit quaternion.
    Quaternion { q: [f64; 4] },
}

/// Maps an angle into `(-pi, pi]`.
pub fn canonicalize_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    if t <= -PI {
        t += 2.0 * PI;
    }
    t
}

/// Picks the representative of `{q, -q}` with `q0 >= 0`; on `q0 == 0` the
/// first nonzero component is made positive.
pub fn canonicalize_sign<const N: usize>(v: [f64; N]) -> [f64; N] {
    match v.iter().find(|x| **x != 0.0) {
        Some(&first) if first < 0.0 => v.map(|x| -x),
        _ => v,
    }
}

pub fn quaternion_unitary(q: &[f64; 4]) -> Mat2 {
    let [q0, q1, q2, q3] = *q;
    [
        [Complex64::new(q0, -q3), Complex64::new(-q2, -q1)],
        [Complex64::new(q2, -q1), Complex64::new(q0, q3)],
    ]
}

pub fn gate_unitary(g: &GateParam) -> Mat2 {
    match *g {
        GateParam::AxisAngle { axis, theta } => {
            let mut q = [(theta / 2.0).cos(), 0.0, 0.0, 0.0];
            q[1 + axis.index()] = (theta / 2.0).sin();
            quaternion_unitary(&q)
        }
        GateParam::FraxisAxis { n } => quaternion_unitary(&[0.0, n[0], n[1], n[2]]),
        GateParam::Quaternion { q } => quaternion_unitary(&q),
    }
}

/// Quaternion form of any gate, with an identical unitary. Canonical
/// angles in `(-pi, pi]` already give `q0 >= 0`.
pub fn to_quaternion(g: &GateParam) -> GateParam {
    let q = match *g {
        GateParam::AxisAngle { axis, theta } => {
            let mut q = [(theta / 2.0).cos(), 0.0, 0.0, 0.0];
            q[1 + axis.index()] = (theta / 2.0).sin();
            q
        }
        GateParam::FraxisAxis { n } => [0.0, n[0], n[1], n[2]],
        GateParam::Quaternion { q } => q,
    };
    GateParam::Quaternion { q }
}

/// Result of mapping a quaternion back onto a fixed-axis rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisApprox {
    pub gate: GateParam,
    /// False when the quaternion was not a rotation about a single basis
    /// axis and the angle is only the best approximation.
    pub exact: bool,
}

const EXACT_AXIS_TOL: f64 = 1e-12;

/// Converts a gate to axis-angle form.
///
/// If the quaternion is a rotation about one basis axis, that axis and
/// angle are returned exactly. Otherwise a fresh axis is drawn from `rng`
/// and the angle is the one whose quaternion `(cos t/2, sin t/2 e_a)` has
/// maximal overlap with `q`.
pub fn to_axis_angle<R: Rng + ?Sized>(g: &GateParam, rng: &mut R) -> AxisApprox {
    let q = match *g {
        GateParam::AxisAngle { .. } => return AxisApprox { gate: *g, exact: true },
        GateParam::FraxisAxis { n } => [0.0, n[0], n[1], n[2]],
        GateParam::Quaternion { q } => q,
    };
    let nonzero: Vec<usize> = (0..3).filter(|&k| q[1 + k].abs() > EXACT_AXIS_TOL).collect();
    let (axis, exact) = match nonzero.as_slice() {
        [] => (Axis::Z, true),
        [k] => (Axis::ALL[*k], true),
        _ => (Axis::sample(rng), false),
    };
    let theta = canonicalize_angle(2.0 * q[1 + axis.index()].atan2(q[0]));
    AxisApprox {
        gate: GateParam::AxisAngle { axis, theta },
        exact,
    }
}

impl GateParam {
    pub fn family(&self) -> Optimizer {
        match self {
            GateParam::AxisAngle { .. } => Optimizer::Rotosolve,
            GateParam::FraxisAxis { .. } => Optimizer::Fraxis,
            GateParam::Quaternion { .. } => Optimizer::Fqs,
        }
    }

    fn validate(&self) -> Result<()> {
        let norm_err = match self {
            GateParam::AxisAngle { theta, .. } => {
                return if theta.is_finite() {
                    Ok(())
                } else {
                    Err(Error::config("non-finite gate angle"))
                }
            }
            GateParam::FraxisAxis { n } => (n.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs(),
            GateParam::Quaternion { q } => (q.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs(),
        };
        if norm_err > 1e-10 {
            return Err(Error::numeric(format!("gate {self:?} is not unit-norm")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntanglerKind {
    #[default]
    Cz,
    Cnot,
}

/// Two-qubit gates of one entangling block, grouped into sub-layers that
/// are applied in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntanglerSpec {
    kind: EntanglerKind,
    sub_layers: Vec<Vec<(usize, usize)>>,
}

impl EntanglerSpec {
    pub fn new(kind: EntanglerKind, sub_layers: Vec<Vec<(usize, usize)>>) -> Self {
        Self { kind, sub_layers }
    }

    /// Brick pattern on a linear chain: `(0,1),(2,3),...` then
    /// `(1,2),(3,4),...`.
    pub fn brick(n_qubits: usize, kind: EntanglerKind) -> Self {
        let even = (0..n_qubits.saturating_sub(1)).step_by(2).map(|i| (i, i + 1)).collect();
        let odd = (1..n_qubits.saturating_sub(1)).step_by(2).map(|i| (i, i + 1)).collect();
        let sub_layers: Vec<Vec<_>> = vec![even, odd];
        Self {
            kind,
            sub_layers: sub_layers.into_iter().filter(|s| !s.is_empty()).collect(),
        }
    }

    pub fn kind(&self) -> EntanglerKind {
        self.kind
    }

    pub fn sub_layers(&self) -> &[Vec<(usize, usize)>] {
        &self.sub_layers
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for sub in &self.sub_layers {
            let mut used = vec![false; n_qubits];
            for &(a, b) in sub {
                if a >= n_qubits || b >= n_qubits || a == b {
                    return Err(Error::config(format!(
                        "entangler pair ({a},{b}) invalid on {n_qubits} qubits"
                    )));
                }
                for q in [a, b] {
                    if used[q] {
                        return Err(Error::config(format!(
                            "qubit {q} appears twice in one entangler sub-layer"
                        )));
                    }
                    used[q] = true;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    n_layers: usize,
    /// Layer-major: gate `d` sits on qubit `d % n` of layer `d / n`.
    gates: Vec<GateParam>,
    entangler: EntanglerSpec,
    #[serde(default)]
    entangle_last: bool,
}

impl Circuit {
    pub fn new(
        n_qubits: usize,
        n_layers: usize,
        gates: Vec<GateParam>,
        entangler: EntanglerSpec,
        entangle_last: bool,
    ) -> Result<Self> {
        let c = Self {
            n_qubits,
            n_layers,
            gates,
            entangler,
            entangle_last,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.n_qubits > crate::statevec::MAX_QUBITS || self.n_layers == 0 {
            return Err(Error::config(format!(
                "circuit shape {} qubits x {} layers is invalid",
                self.n_qubits, self.n_layers
            )));
        }
        if self.gates.len() != self.n_qubits * self.n_layers {
            return Err(Error::config(format!(
                "circuit has {} gates, expected {}",
                self.gates.len(),
                self.n_qubits * self.n_layers
            )));
        }
        self.entangler.validate(self.n_qubits)?;
        self.gates.iter().try_for_each(GateParam::validate)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Circuit = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization is infallible")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_layers(&self) -> usize {
        self.n_layers
    }

    pub fn n_gates(&self) -> usize {
        self.gates.len()
    }

    pub fn gates(&self) -> &[GateParam] {
        &self.gates
    }

    pub fn gate(&self, d: usize) -> &GateParam {
        &self.gates[d]
    }

    pub fn set_gate(&mut self, d: usize, g: GateParam) {
        self.gates[d] = g;
    }

    pub fn entangler(&self) -> &EntanglerSpec {
        &self.entangler
    }

    pub fn entangle_last(&self) -> bool {
        self.entangle_last
    }

    pub fn qubit_of(&self, d: usize) -> usize {
        d % self.n_qubits
    }

    /// Converts every gate to quaternion form.
    pub fn convert_to_quaternions(&mut self) {
        for g in &mut self.gates {
            *g = to_quaternion(g);
        }
    }

    /// Applies gate `d` with the given matrix, followed by the layer's
    /// entangler when `d` closes a layer that carries one.
    pub(crate) fn apply_step(&self, state: &mut StateVector, d: usize, m: &Mat2) -> Result<()> {
        state.apply_single_qubit_unchecked(self.qubit_of(d), m);
        let layer = d / self.n_qubits;
        let closes_layer = d % self.n_qubits == self.n_qubits - 1;
        if closes_layer && (layer + 1 < self.n_layers || self.entangle_last) {
            state.apply_entangler(&self.entangler)?;
        }
        Ok(())
    }

    pub(crate) fn apply_range(&self, state: &mut StateVector, gates: std::ops::Range<usize>) -> Result<()> {
        for d in gates {
            self.apply_step(state, d, &gate_unitary(&self.gates[d]))?;
        }
        Ok(())
    }

    /// `U(theta)|0...0>`.
    pub fn prepare_state(&self) -> Result<StateVector> {
        let mut s = StateVector::zero(self.n_qubits)?;
        self.apply_range(&mut s, 0..self.gates.len())?;
        Ok(s)
    }
}

/// Random initial circuit for the given optimizer family.
///
/// Rotosolve gates get a uniformly random axis and an angle uniform on
/// `(-pi, pi]`; Fraxis axes are uniform on the 2-sphere and FQS
/// quaternions uniform on the 3-sphere.
pub fn init_circuit<R: Rng + ?Sized>(
    n_qubits: usize,
    n_layers: usize,
    mode: Optimizer,
    entangler: EntanglerSpec,
    entangle_last: bool,
    rng: &mut R,
) -> Result<Circuit> {
    if n_qubits == 0 || n_layers == 0 {
        return Err(Error::config("circuit needs at least one qubit and one layer"));
    }
    let gates = (0..n_qubits * n_layers)
        .map(|_| match mode {
            Optimizer::Rotosolve => {
                let axis = Axis::sample(rng);
                let u: f64 = rng.random();
                GateParam::AxisAngle {
                    axis,
                    theta: PI - 2.0 * PI * u,
                }
            }
            Optimizer::Fraxis => GateParam::FraxisAxis {
                n: random_unit::<3, _>(rng),
            },
            Optimizer::Fqs => GateParam::Quaternion {
                q: canonicalize_sign(random_unit::<4, _>(rng)),
            },
        })
        .collect();
    Circuit::new(n_qubits, n_layers, gates, entangler, entangle_last)
}

/// Uniform point on the unit sphere in `N` dimensions.
pub fn random_unit<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> [f64; N] {
    loop {
        let v: [f64; N] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.map(|x| x / norm);
        }
    }
}

/// Prepares the circuit state and measures `obs`, charging one evaluation.
pub fn evaluate_circuit<R: Rng + ?Sized>(
    c: &Circuit,
    obs: &Observable,
    noise: NoiseSpec,
    rng: &mut R,
    ledger: &mut EvalLedger,
) -> Result<f64> {
    ledger.charge(1)?;
    c.prepare_state()?.measure(obs, noise, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{Pauli, PauliString, PauliSum};
    use crate::statevec::IDENTITY;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn frob(a: &Mat2, b: &Mat2) -> f64 {
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                s += (a[i][j] - b[i][j]).norm_sqr();
            }
        }
        s.sqrt()
    }

    #[test]
    fn identity_gates() {
        let g = GateParam::AxisAngle {
            axis: Axis::Z,
            theta: 0.0,
        };
        assert!(frob(&gate_unitary(&g), &IDENTITY) < 1e-15);
        let g = GateParam::Quaternion {
            q: [1.0, 0.0, 0.0, 0.0],
        };
        assert!(frob(&gate_unitary(&g), &IDENTITY) < 1e-15);
    }

    #[test]
    fn fraxis_z_is_minus_i_z() {
        let u = gate_unitary(&GateParam::FraxisAxis { n: [0.0, 0.0, 1.0] });
        let i = Complex64::new(0.0, 1.0);
        let expected = [[-i, Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), i]];
        assert!(frob(&u, &expected) < 1e-15);
    }

    #[test]
    fn quaternion_of_axis_angle() {
        let q = to_quaternion(&GateParam::AxisAngle {
            axis: Axis::Z,
            theta: 0.0,
        });
        assert_eq!(
            q,
            GateParam::Quaternion {
                q: [1.0, 0.0, 0.0, 0.0]
            }
        );
        let GateParam::Quaternion { q } = to_quaternion(&GateParam::AxisAngle {
            axis: Axis::X,
            theta: PI,
        }) else {
            unreachable!()
        };
        assert!((q[0]).abs() < 1e-15 && (q[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn angle_canonicalization() {
        assert_eq!(canonicalize_angle(-PI), PI);
        assert_eq!(canonicalize_angle(PI), PI);
        assert!((canonicalize_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((canonicalize_angle(-5.0 * PI / 2.0) + PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn sign_canonicalization() {
        assert_eq!(canonicalize_sign([-0.5, 0.5, 0.5, 0.5]), [0.5, -0.5, -0.5, -0.5]);
        assert_eq!(canonicalize_sign([0.0, -1.0, 0.0, 0.0]), [0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn axis_angle_recovery_is_exact_for_single_axis_quaternions() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let g = GateParam::AxisAngle {
            axis: Axis::Y,
            theta: -2.1,
        };
        let back = to_axis_angle(&to_quaternion(&g), &mut rng);
        assert!(back.exact);
        let GateParam::AxisAngle { axis, theta } = back.gate else {
            unreachable!()
        };
        assert_eq!(axis, Axis::Y);
        assert!((theta + 2.1).abs() < 1e-12);

        let general = GateParam::Quaternion {
            q: [0.5, 0.5, 0.5, 0.5],
        };
        assert!(!to_axis_angle(&general, &mut rng).exact);
    }

    #[test]
    fn brick_layout() {
        let spec = EntanglerSpec::brick(5, EntanglerKind::Cz);
        assert_eq!(spec.sub_layers(), &[vec![(0, 1), (2, 3)], vec![(1, 2), (3, 4)]]);
        assert_eq!(EntanglerSpec::brick(1, EntanglerKind::Cz).sub_layers().len(), 0);
        assert_eq!(EntanglerSpec::brick(2, EntanglerKind::Cz).sub_layers(), &[vec![(0, 1)]]);
    }

    #[test]
    fn overlapping_sub_layer_is_rejected() {
        let spec = EntanglerSpec::new(EntanglerKind::Cz, vec![vec![(0, 1), (1, 2)]]);
        assert!(matches!(spec.validate(3), Err(Error::Config(_))));
    }

    #[test]
    fn init_ranges() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let brick = EntanglerSpec::brick(2, EntanglerKind::Cz);
        let c = init_circuit(2, 1, Optimizer::Rotosolve, brick.clone(), false, &mut rng).unwrap();
        for g in c.gates() {
            let GateParam::AxisAngle { theta, .. } = g else {
                panic!("wrong family")
            };
            assert!(*theta > -PI && *theta <= PI);
        }
        let c = init_circuit(2, 3, Optimizer::Fqs, brick, false, &mut rng).unwrap();
        for g in c.gates() {
            let GateParam::Quaternion { q } = g else {
                panic!("wrong family")
            };
            assert!((q.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(q[0] >= 0.0);
        }
    }

    #[test]
    fn identity_circuit_and_pi_flips() {
        let z0: Observable = PauliSum::new([PauliString::new(1.0, [(0, Pauli::Z)])]).into();
        let mut ledger = EvalLedger::new(10);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let id = GateParam::Quaternion {
            q: [1.0, 0.0, 0.0, 0.0],
        };
        let c = Circuit::new(3, 2, vec![id; 6], EntanglerSpec::brick(3, EntanglerKind::Cz), true).unwrap();
        assert_eq!(
            evaluate_circuit(&c, &z0, NoiseSpec::Ideal, &mut rng, &mut ledger).unwrap(),
            1.0
        );

        let rx_pi = GateParam::AxisAngle {
            axis: Axis::X,
            theta: PI,
        };
        let c = Circuit::new(2, 1, vec![rx_pi; 2], EntanglerSpec::brick(2, EntanglerKind::Cz), false).unwrap();
        let v = evaluate_circuit(&c, &z0, NoiseSpec::Ideal, &mut rng, &mut ledger).unwrap();
        assert!((v + 1.0).abs() < 1e-14);
        assert_eq!(ledger.used(), 2);
    }

    #[test]
    fn json_roundtrip_validates() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let c = init_circuit(
            3,
            2,
            Optimizer::Fraxis,
            EntanglerSpec::brick(3, EntanglerKind::Cnot),
            false,
            &mut rng,
        )
        .unwrap();
        let back = Circuit::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        let bad = c.to_json().replace("\"n_layers\": 2", "\"n_layers\": 3");
        assert!(matches!(Circuit::from_json(&bad), Err(Error::Config(_))));
    }
}
