//! Per-run random streams.
//!
//! Every run derives four independent ChaCha streams from its seed so that
//! consuming randomness for one purpose never shifts another. In particular
//! a hybrid run and a pure Rotosolve run with the same seed see identical
//! initial circuits and identical shot noise until the hybrid switches.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type RngStream = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamKind {
    Init = 0,
    Axis = 1,
    Shots = 2,
    HybridChoice = 3,
}

/// Deterministic stream for `(seed, kind)`.
pub fn stream(seed: u64, kind: StreamKind) -> RngStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(kind as u64);
    rng
}

/// The four named streams of a single run.
#[derive(Debug, Clone)]
pub struct RunStreams {
    pub init: RngStream,
    pub axis: RngStream,
    pub shots: RngStream,
    pub hybrid: RngStream,
}

impl RunStreams {
    pub fn new(seed: u64) -> Self {
        Self {
            init: stream(seed, StreamKind::Init),
            axis: stream(seed, StreamKind::Axis),
            shots: stream(seed, StreamKind::Shots),
            hybrid: stream(seed, StreamKind::HybridChoice),
        }
    }
}
