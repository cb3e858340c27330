use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuit::EntanglerKind;
use crate::error::{Error, Result};
use crate::hybrid::Strategy;
use crate::observables::{HeisenbergParams, HubbardParams, SpinOrdering};
use crate::statevec::NoiseSpec;

fn one() -> f64 {
    1.0
}

fn default_iters() -> usize {
    100
}

fn default_runs() -> usize {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Problem {
    Heisenberg {
        n: usize,
        #[serde(default = "one")]
        coupling: f64,
        #[serde(default = "one")]
        field: f64,
    },
    Hubbard {
        n_sites: usize,
        hopping: f64,
        interaction: f64,
        #[serde(default)]
        ordering: SpinOrdering,
    },
    /// Maximize the fidelity with a fresh random `n`-qubit target per run.
    Fidelity { n: usize },
}

impl Problem {
    pub fn n_qubits(&self) -> usize {
        match self {
            Problem::Heisenberg { n, .. } | Problem::Fidelity { n } => *n,
            Problem::Hubbard { n_sites, .. } => 2 * n_sites,
        }
    }

    /// Same problem at a different system size (sites for Hubbard).
    pub fn with_size(&self, size: usize) -> Problem {
        let mut p = self.clone();
        match &mut p {
            Problem::Heisenberg { n, .. } | Problem::Fidelity { n } => *n = size,
            Problem::Hubbard { n_sites, .. } => *n_sites = size,
        }
        p
    }

    pub fn heisenberg_params(&self) -> Option<HeisenbergParams> {
        match *self {
            Problem::Heisenberg { n, coupling, field } => Some(HeisenbergParams {
                n_sites: n,
                coupling,
                field,
            }),
            _ => None,
        }
    }

    pub fn hubbard_params(&self) -> Option<HubbardParams> {
        match *self {
            Problem::Hubbard {
                n_sites,
                hopping,
                interaction,
                ordering,
            } => Some(HubbardParams {
                n_sites,
                hopping,
                interaction,
                ordering,
            }),
            _ => None,
        }
    }
}

/// How initial parameters are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitScheme {
    /// Each gate family samples its own uniform distribution.
    #[default]
    Native,
    /// Every run draws a Rotosolve circuit and standalone FQS starts from
    /// its quaternion form, so all strategies of one seed share the same
    /// initial unitary. Fraxis keeps its native initialization.
    Shared,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub layers: usize,
    /// Scalability protocol: use as many layers as qubits.
    #[serde(default)]
    pub layers_equal_qubits: bool,
    /// Single strategy; mutually exclusive with `optimizers`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<Strategy>,
    /// Several strategies compared at an identical budget.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub optimizers: Vec<Strategy>,
    #[serde(default)]
    pub noise: NoiseSpec,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default = "default_iters")]
    pub rotosolve_iters: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub init: InitScheme,
    #[serde(default)]
    pub entangler: EntanglerKind,
    #[serde(default)]
    pub entangle_last: bool,
    /// Log the windowed cost-average statistic with this window for
    /// strategies that do not compute one themselves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_window: Option<usize>,
    /// Ground energy for registers above the dense-solver limit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_energy: Option<f64>,
    /// Ground energies keyed by system size, for `sweep`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub reference_energies: BTreeMap<String, f64>,
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(s).map_err(|e| Error::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn n_qubits(&self) -> usize {
        self.problem.n_qubits()
    }

    pub fn effective_layers(&self) -> usize {
        if self.layers_equal_qubits {
            self.n_qubits()
        } else {
            self.layers
        }
    }

    pub fn strategies(&self) -> Vec<Strategy> {
        self.optimizer
            .iter()
            .copied()
            .chain(self.optimizers.iter().copied())
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits();
        if n == 0 || n > crate::statevec::MAX_QUBITS {
            return Err(Error::config(format!("problem needs {n} qubits, supported 1..=20")));
        }
        if self.effective_layers() == 0 {
            return Err(Error::config("layers must be >= 1"));
        }
        if self.runs == 0 {
            return Err(Error::config("runs must be >= 1"));
        }
        if self.rotosolve_iters == 0 {
            return Err(Error::config("rotosolve_iters must be >= 1"));
        }
        if let NoiseSpec::Shots(0) = self.noise {
            return Err(Error::config("noise.shots must be >= 1"));
        }
        match (self.optimizer.is_some(), self.optimizers.is_empty()) {
            (false, true) => return Err(Error::config("config needs `optimizer` or `optimizers`")),
            (true, false) => return Err(Error::config("set only one of `optimizer` and `optimizers`")),
            _ => {}
        }
        let labels: Vec<String> = self.strategies().iter().map(Strategy::label).collect();
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(Error::config("duplicate strategies in `optimizers`"));
        }
        self.strategies().iter().try_for_each(Strategy::validate)?;
        if let Problem::Heisenberg { n, .. } = self.problem {
            if n < 3 {
                return Err(Error::config("heisenberg n must be >= 3"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_defaults() {
        let cfg = ExperimentConfig::from_json(
            r#"{"problem":{"kind":"heisenberg","n":5},"layers":10,
                "optimizer":{"kind":"standalone","optimizer":"rotosolve"}}"#,
        )
        .unwrap();
        assert_eq!(cfg.runs, 20);
        assert_eq!(cfg.rotosolve_iters, 100);
        assert_eq!(cfg.noise, NoiseSpec::Ideal);
        assert_eq!(
            cfg.problem,
            Problem::Heisenberg {
                n: 5,
                coupling: 1.0,
                field: 1.0
            }
        );
    }

    #[test]
    fn shots_noise_parses() {
        let cfg = ExperimentConfig::from_json(
            r#"{"problem":{"kind":"fidelity","n":2},"layers":1,"noise":{"shots":8192},
                "optimizers":[{"kind":"gate_wise","p":0.25},{"kind":"iteration","n":2}]}"#,
        )
        .unwrap();
        assert_eq!(cfg.noise, NoiseSpec::Shots(8192));
        assert_eq!(cfg.strategies().len(), 2);
    }

    #[test]
    fn rejects_missing_or_duplicate_strategies() {
        let missing = r#"{"problem":{"kind":"fidelity","n":2},"layers":1}"#;
        assert!(matches!(ExperimentConfig::from_json(missing), Err(Error::Config(_))));
        let dup = r#"{"problem":{"kind":"fidelity","n":2},"layers":1,
            "optimizers":[{"kind":"iteration","n":2},{"kind":"iteration","n":2}]}"#;
        assert!(matches!(ExperimentConfig::from_json(dup), Err(Error::Config(_))));
        let bad = r#"{"problem":{"kind":"heisenberg","n":2},"layers":1,
            "optimizer":{"kind":"standalone","optimizer":"fqs"}}"#;
        assert!(matches!(ExperimentConfig::from_json(bad), Err(Error::Config(_))));
    }
}
