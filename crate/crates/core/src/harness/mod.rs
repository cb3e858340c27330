//! Multi-run experiments: seeding, budgets, parallel execution, metrics,
//! and the on-disk result layout consumed by the plotting scripts.
//!
//! Layout of one experiment directory:
//!
//! ```text
//! config.json        resolved configuration
//! runs.jsonl         one RunRecord per line, ordered by seed
//! trace_<seed>.csv   gate_opt_index,evals_used,cost,delta_avg,phase
//! summary.json       ExperimentSummary
//! timings.jsonl      wall-clock seconds per run (not reproducible)
//! ```
//!
//! Experiments with several strategies write one such directory per
//! strategy label plus a `comparison.json` at the top.

mod config;
mod output;
mod stats;

pub use config::{ExperimentConfig, InitScheme, Problem};
pub use output::{write_comparison, write_experiment, write_scalability, TRACE_HEADER};
pub use stats::{compute_stats, quantile_sorted, relative_error, SummaryStats};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{init_circuit, EntanglerSpec};
use crate::error::{Error, Result};
use crate::hybrid::{run_strategy, RunRecord, RunSetup, Strategy};
use crate::observables::{
    exact_ground_energy, fidelity_projector, heisenberg_hamiltonian, hubbard_hamiltonian, sample_random_state,
    MAX_DENSE_QUBITS,
};
use crate::optimizers::{make_budget, Optimizer};
use crate::pauli::Observable;
use crate::rng::{stream, StreamKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub label: String,
    pub strategy: Strategy,
    pub n_qubits: usize,
    pub layers: usize,
    pub runs: usize,
    pub budget: u64,
    pub ground_energy: f64,
    pub relative_error: SummaryStats,
    pub final_energy: SummaryStats,
    /// Fraction of runs that switched optimizer.
    pub switch_rate: f64,
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub records: Vec<RunRecord>,
    pub summary: ExperimentSummary,
}

/// Ground energy used for relative errors. Fidelity targets always have
/// `-1`; Hamiltonians are solved densely up to the solver limit and need a
/// configured reference above it.
pub fn ground_energy(cfg: &ExperimentConfig) -> Result<f64> {
    let n = cfg.n_qubits();
    let size_key = match &cfg.problem {
        Problem::Hubbard { n_sites, .. } => n_sites.to_string(),
        _ => n.to_string(),
    };
    if let Some(e) = cfg
        .reference_energy
        .or_else(|| cfg.reference_energies.get(&size_key).copied())
    {
        return Ok(e);
    }
    match &cfg.problem {
        Problem::Fidelity { .. } => Ok(-1.0),
        _ if n > MAX_DENSE_QUBITS => Err(Error::Config(format!(
            "reference_energy is required for {n} qubits (dense solver limit is {MAX_DENSE_QUBITS})"
        ))),
        _ => Ok(exact_ground_energy(&hamiltonian(cfg)?, n)?.energy),
    }
}

/// The problem's Hamiltonian; fidelity problems have none, their target is
/// sampled per run.
pub fn hamiltonian(cfg: &ExperimentConfig) -> Result<Observable> {
    if let Some(p) = cfg.problem.heisenberg_params() {
        heisenberg_hamiltonian(&p)
    } else if let Some(p) = cfg.problem.hubbard_params() {
        hubbard_hamiltonian(&p)
    } else {
        Err(Error::config("fidelity problems sample their target per run"))
    }
}

/// Executes one run of `strategy` with `seed`.
///
/// The init stream first samples the fidelity target (if any), then the
/// circuit, so every strategy sees the same target and initial circuit for
/// a given seed.
pub fn execute_run(cfg: &ExperimentConfig, strategy: &Strategy, seed: u64) -> Result<RunRecord> {
    let n = cfg.n_qubits();
    let layers = cfg.effective_layers();
    let mut init_rng = stream(seed, StreamKind::Init);
    let obs = match &cfg.problem {
        Problem::Fidelity { n } => fidelity_projector(sample_random_state(*n, &mut init_rng)?)?,
        _ => hamiltonian(cfg)?,
    };
    let entangler = EntanglerSpec::brick(n, cfg.entangler);
    let family = strategy.initial_family();
    let circuit = match (cfg.init, family) {
        (InitScheme::Shared, Optimizer::Fqs) => {
            let mut c = init_circuit(
                n,
                layers,
                Optimizer::Rotosolve,
                entangler,
                cfg.entangle_last,
                &mut init_rng,
            )?;
            c.convert_to_quaternions();
            c
        }
        _ => init_circuit(n, layers, family, entangler, cfg.entangle_last, &mut init_rng)?,
    };
    let setup = RunSetup {
        obs: &obs,
        noise: cfg.noise,
        budget: make_budget(n, layers, cfg.rotosolve_iters),
        seed,
        delta_window: cfg.delta_window,
    };
    run_strategy(strategy, circuit, setup)
}

fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(Error::config("--jobs must be >= 1"));
        }
        b = b.num_threads(j);
    }
    b.build().map_err(|e| Error::config(format!("thread pool: {e}")))
}

/// Runs every configured strategy `cfg.runs` times with seeds
/// `base_seed + i`. Results are ordered by seed regardless of `jobs`.
pub fn run_experiment(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<Vec<ExperimentResult>> {
    cfg.validate()?;
    let ground = ground_energy(cfg)?;
    let pool = thread_pool(jobs)?;
    let seeds: Vec<u64> = (0..cfg.runs as u64).map(|i| cfg.base_seed + i).collect();
    let budget = make_budget(cfg.n_qubits(), cfg.effective_layers(), cfg.rotosolve_iters);

    cfg.strategies()
        .iter()
        .map(|strategy| {
            let records: Vec<RunRecord> = pool.install(|| {
                seeds
                    .par_iter()
                    .map(|&seed| execute_run(cfg, strategy, seed))
                    .collect::<Result<Vec<_>>>()
            })?;
            let finals: Vec<f64> = records.iter().map(|r| r.final_energy).collect();
            let rel = finals
                .iter()
                .map(|e| relative_error(*e, ground))
                .collect::<Result<Vec<_>>>()?;
            let summary = ExperimentSummary {
                label: strategy.label(),
                strategy: *strategy,
                n_qubits: cfg.n_qubits(),
                layers: cfg.effective_layers(),
                runs: cfg.runs,
                budget,
                ground_energy: ground,
                relative_error: compute_stats(&rel)?,
                final_energy: compute_stats(&finals)?,
                switch_rate: records.iter().filter(|r| r.switch.is_some()).count() as f64 / records.len() as f64,
                seeds: seeds.clone(),
            };
            Ok(ExperimentResult { records, summary })
        })
        .collect()
}
