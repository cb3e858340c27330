//! Sequential single-qubit optimizers (Rotosolve, Fraxis, FQS) and
//! cost-driven optimizer-switching schedules for layered parameterized
//! quantum circuits, on top of a small dense state-vector simulator.

pub mod circuit;
pub mod error;
pub mod harness;
pub mod hybrid;
#[allow(clippy::needless_range_loop)]
pub mod linalg;
pub mod observables;
pub mod optimizers;
pub mod pauli;
pub mod rng;
#[allow(clippy::needless_range_loop)]
pub mod statevec;

pub use circuit::{Axis, Circuit, EntanglerKind, EntanglerSpec, GateParam};
pub use error::{Error, Result};
pub use hybrid::{RunRecord, Strategy};
pub use optimizers::{EvalLedger, Optimizer};
pub use pauli::{Observable, Pauli, PauliString, PauliSum};
pub use statevec::{NoiseSpec, StateVector};
