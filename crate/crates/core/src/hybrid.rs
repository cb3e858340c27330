//! Optimizer-switching schedules.
//!
//! The cost-driven schedules start with Rotosolve and switch once, for
//! good, to FQS:
//!
//! * early stopping counts gate updates whose cost changed by less than
//!   `E_t` and switches when the count reaches the patience `P`;
//! * cost average compares each new cost with the mean of the previous `w`
//!   costs and switches when they differ by less than `E_t`.
//!
//! The gate-wise (probability `p`) and iteration (every `N`-th sweep)
//! schedules are the baselines they are compared against.

use std::collections::VecDeque;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{to_axis_angle, to_quaternion, Circuit};
use crate::error::{Error, Result};
use crate::optimizers::{sweep_from, update_gate, EvalLedger, Optimizer, SweepOutcome, TraceEntry};
use crate::pauli::Observable;
use crate::rng::{RngStream, RunStreams};
use crate::statevec::NoiseSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EarlyStopConfig {
    pub threshold: f64,
    pub patience: u32,
    /// Reset the counter whenever a change reaches the threshold. The
    /// default keeps counting, so the counter never decreases.
    #[serde(default)]
    pub reset_on_improvement: bool,
}

impl EarlyStopConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return Err(Error::config("early-stopping threshold must be finite and > 0"));
        }
        if self.patience == 0 {
            return Err(Error::config("patience must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostAverageConfig {
    pub threshold: f64,
    pub window: usize,
}

impl CostAverageConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return Err(Error::config("cost-average threshold must be finite and > 0"));
        }
        if self.window == 0 {
            return Err(Error::config("window must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwitchTrigger {
    Patience,
    Average,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchEvent {
    /// Index of the gate optimization that triggered the switch.
    pub gate_optimization_index: u64,
    pub evaluations_at_switch: u64,
    pub trigger: SwitchTrigger,
}

/// How a run chooses its optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    Standalone { optimizer: Optimizer },
    EarlyStopping(EarlyStopConfig),
    CostAverage(CostAverageConfig),
    GateWise { p: f64 },
    Iteration { n: u32 },
}

impl Strategy {
    pub fn validate(&self) -> Result<()> {
        match self {
            Strategy::Standalone { .. } => Ok(()),
            Strategy::EarlyStopping(c) => c.validate(),
            Strategy::CostAverage(c) => c.validate(),
            Strategy::GateWise { p } if !(0.0..=1.0).contains(p) => {
                Err(Error::config(format!("gate-wise probability {p} outside [0, 1]")))
            }
            Strategy::Iteration { n: 0 } => Err(Error::config("iteration period N must be >= 1")),
            _ => Ok(()),
        }
    }

    /// Gate family the run's initial circuit must use.
    pub fn initial_family(&self) -> Optimizer {
        match self {
            Strategy::Standalone { optimizer } => *optimizer,
            _ => Optimizer::Rotosolve,
        }
    }

    /// Short label used for output directories and plots.
    pub fn label(&self) -> String {
        match self {
            Strategy::Standalone { optimizer } => optimizer.to_string(),
            Strategy::EarlyStopping(c) => format!("early_stop_P{}_Et{}", c.patience, c.threshold),
            Strategy::CostAverage(c) => format!("cost_avg_w{}_Et{}", c.window, c.threshold),
            Strategy::GateWise { p } => format!("gate_wise_p{p}"),
            Strategy::Iteration { n } => format!("iteration_N{n}"),
        }
    }
}

/// Everything one run needs besides its circuit.
#[derive(Debug, Clone, Copy)]
pub struct RunSetup<'a> {
    pub obs: &'a Observable,
    pub noise: NoiseSpec,
    pub budget: u64,
    pub seed: u64,
    /// Log `|mean(last w costs) - newest cost|` for strategies that do not
    /// compute a switching statistic of their own.
    pub delta_window: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub strategy: Strategy,
    pub trace: Vec<TraceEntry>,
    pub switch: Option<SwitchEvent>,
    pub budget: u64,
    pub evals_used: u64,
    /// Cost reported by the last gate update.
    pub final_cost: f64,
    /// Noiseless energy of the final circuit (not charged to the budget).
    pub final_energy: f64,
    /// Number of representation changes (whole-circuit or per gate).
    pub conversions: u64,
    /// Conversions that could only approximate the gate.
    pub lossy_conversions: u64,
    pub rotosolve_updates: u64,
    pub fqs_updates: u64,
    pub fraxis_updates: u64,
    pub final_circuit: Circuit,
    #[serde(skip)]
    pub wall_time_secs: f64,
}

/// `|mean(previous w costs) - newest cost|`, defined once `w` earlier costs
/// exist.
#[derive(Debug, Clone)]
pub struct WindowAverage {
    window: usize,
    history: VecDeque<f64>,
}

impl WindowAverage {
    pub fn new(window: usize) -> Self {
        Self {
            window,
            history: VecDeque::with_capacity(window + 1),
        }
    }

    pub fn push(&mut self, cost: f64) -> Option<f64> {
        let delta = (self.history.len() == self.window).then(|| {
            let mean = self.history.iter().sum::<f64>() / self.window as f64;
            (mean - cost).abs()
        });
        self.history.push_back(cost);
        if self.history.len() > self.window {
            self.history.pop_front();
        }
        delta
    }
}

/// Shared bookkeeping of a single run.
struct RunState<'a> {
    setup: RunSetup<'a>,
    circuit: Circuit,
    ledger: EvalLedger,
    streams: RunStreams,
    trace: Vec<TraceEntry>,
    conversions: u64,
    lossy_conversions: u64,
    window: Option<WindowAverage>,
    started: Instant,
}

impl<'a> RunState<'a> {
    fn new(circuit: Circuit, setup: RunSetup<'a>) -> Result<Self> {
        if setup.obs.min_qubits() > circuit.n_qubits() {
            return Err(Error::config("observable is wider than the circuit"));
        }
        Ok(Self {
            window: setup.delta_window.filter(|w| *w > 0).map(WindowAverage::new),
            setup,
            circuit,
            ledger: EvalLedger::new(setup.budget),
            streams: RunStreams::new(setup.seed),
            trace: Vec::new(),
            conversions: 0,
            lossy_conversions: 0,
            started: Instant::now(),
        })
    }

    /// Updates gate `d` and appends the trace row; `None` if the budget
    /// cannot cover it.
    fn step(&mut self, opt: Optimizer, d: usize) -> Result<Option<TraceEntry>> {
        if !self.ledger.can_afford(opt.evals_per_gate()) {
            return Ok(None);
        }
        let r = update_gate(
            opt,
            &self.circuit,
            d,
            self.setup.obs,
            self.setup.noise,
            &mut self.ledger,
            &mut self.streams.shots,
        )?;
        self.circuit.set_gate(d, r.new_param);
        let delta = self.window.as_mut().and_then(|w| w.push(r.predicted_cost));
        let entry = TraceEntry {
            gate_opt_index: self.trace.len() as u64,
            gate: d,
            evals_used: self.ledger.used(),
            cost: r.predicted_cost,
            delta,
            phase: opt,
        };
        self.trace.push(entry);
        Ok(Some(entry))
    }

    /// Full sweeps with `opt` from gate `start` until the budget runs out.
    fn sweeps_until_exhausted(&mut self, opt: Optimizer, mut start: usize) -> Result<()> {
        if self.window.is_some() {
            loop {
                for d in start..self.circuit.n_gates() {
                    if self.step(opt, d)?.is_none() {
                        return Ok(());
                    }
                }
                start = 0;
            }
        }
        loop {
            let out = sweep_from(
                &mut self.circuit,
                start,
                opt,
                self.setup.obs,
                self.setup.noise,
                &mut self.ledger,
                &mut self.streams.shots,
                &mut self.trace,
            )?;
            if let SweepOutcome::BudgetExhausted { .. } = out {
                return Ok(());
            }
            start = 0;
        }
    }

    fn convert_gate(&mut self, d: usize, target: Optimizer) -> Result<()> {
        let g = *self.circuit.gate(d);
        if g.family() == target {
            return Ok(());
        }
        let converted = match target {
            Optimizer::Fqs => to_quaternion(&g),
            Optimizer::Rotosolve => {
                let a = to_axis_angle(&g, &mut self.streams.axis);
                if !a.exact {
                    self.lossy_conversions += 1;
                }
                a.gate
            }
            Optimizer::Fraxis => {
                return Err(Error::config("hybrid schedules never convert into Fraxis form"));
            }
        };
        self.circuit.set_gate(d, converted);
        Ok(())
    }

    fn convert_all(&mut self, target: Optimizer) -> Result<()> {
        if self.circuit.gates().iter().all(|g| g.family() == target) {
            return Ok(());
        }
        for d in 0..self.circuit.n_gates() {
            self.convert_gate(d, target)?;
        }
        self.conversions += 1;
        Ok(())
    }

    fn finish(self, strategy: Strategy, switch: Option<SwitchEvent>) -> Result<RunRecord> {
        let final_energy = self.circuit.prepare_state()?.exact_expectation(self.setup.obs)?;
        let count = |o: Optimizer| self.trace.iter().filter(|t| t.phase == o).count() as u64;
        Ok(RunRecord {
            seed: self.setup.seed,
            strategy,
            switch,
            budget: self.ledger.budget(),
            evals_used: self.ledger.used(),
            final_cost: self.trace.last().map_or(final_energy, |t| t.cost),
            final_energy,
            conversions: self.conversions,
            lossy_conversions: self.lossy_conversions,
            rotosolve_updates: count(Optimizer::Rotosolve),
            fqs_updates: count(Optimizer::Fqs),
            fraxis_updates: count(Optimizer::Fraxis),
            wall_time_secs: self.started.elapsed().as_secs_f64(),
            final_circuit: self.circuit,
            trace: self.trace,
        })
    }
}

fn require_family(c: &Circuit, family: Optimizer) -> Result<()> {
    if c.gates().iter().any(|g| g.family() != family) {
        return Err(Error::config(format!("initial circuit must be in {family} form")));
    }
    Ok(())
}

/// A single optimizer swept until the budget is spent.
pub fn run_standalone(c: Circuit, opt: Optimizer, setup: RunSetup<'_>) -> Result<RunRecord> {
    require_family(&c, opt)?;
    let mut run = RunState::new(c, setup)?;
    run.sweeps_until_exhausted(opt, 0)?;
    run.finish(Strategy::Standalone { optimizer: opt }, None)
}

/// Switches to FQS once `P` consecutive-update cost changes fall below
/// `E_t`, then sweeps FQS from the first gate until the budget is spent.
pub fn run_early_stopping(c: Circuit, cfg: EarlyStopConfig, setup: RunSetup<'_>) -> Result<RunRecord> {
    cfg.validate()?;
    require_family(&c, Optimizer::Rotosolve)?;
    let mut run = RunState::new(
        c,
        RunSetup {
            delta_window: None,
            ..setup
        },
    )?;
    let mut patience = 0u32;
    let mut prev: Option<f64> = None;
    let mut switch = None;

    'rotosolve: loop {
        for d in 0..run.circuit.n_gates() {
            let Some(entry) = run.step(Optimizer::Rotosolve, d)? else {
                break 'rotosolve;
            };
            let delta = prev.map(|p| (p - entry.cost).abs());
            prev = Some(entry.cost);
            let Some(delta) = delta else { continue };
            if let Some(last) = run.trace.last_mut() {
                last.delta = Some(delta);
            }
            if delta < cfg.threshold {
                patience += 1;
                if patience == cfg.patience {
                    switch = Some(SwitchEvent {
                        gate_optimization_index: entry.gate_opt_index,
                        evaluations_at_switch: entry.evals_used,
                        trigger: SwitchTrigger::Patience,
                    });
                    break 'rotosolve;
                }
            } else if cfg.reset_on_improvement {
                patience = 0;
            }
        }
    }

    if switch.is_some() {
        run.convert_all(Optimizer::Fqs)?;
        run.sweeps_until_exhausted(Optimizer::Fqs, 0)?;
    }
    run.finish(Strategy::EarlyStopping(cfg), switch)
}

/// Switches to FQS at the first update whose cost lies within `E_t` of the
/// mean of the `w` preceding costs.
pub fn run_cost_average(c: Circuit, cfg: CostAverageConfig, setup: RunSetup<'_>) -> Result<RunRecord> {
    cfg.validate()?;
    require_family(&c, Optimizer::Rotosolve)?;
    let mut run = RunState::new(
        c,
        RunSetup {
            delta_window: Some(cfg.window),
            ..setup
        },
    )?;
    let mut switch = None;

    'rotosolve: loop {
        for d in 0..run.circuit.n_gates() {
            let Some(entry) = run.step(Optimizer::Rotosolve, d)? else {
                break 'rotosolve;
            };
            if entry.delta.is_some_and(|delta| delta < cfg.threshold) {
                switch = Some(SwitchEvent {
                    gate_optimization_index: entry.gate_opt_index,
                    evaluations_at_switch: entry.evals_used,
                    trigger: SwitchTrigger::Average,
                });
                break 'rotosolve;
            }
        }
    }

    if switch.is_some() {
        run.convert_all(Optimizer::Fqs)?;
        run.sweeps_until_exhausted(Optimizer::Fqs, 0)?;
    }
    run.finish(Strategy::CostAverage(cfg), switch)
}

fn choose_rotosolve(p: f64, rng: &mut RngStream) -> bool {
    rng.random::<f64>() < p
}

/// Each gate update independently uses Rotosolve with probability `p`,
/// FQS otherwise, converting the gate's representation as needed.
pub fn run_gate_wise(c: Circuit, p: f64, setup: RunSetup<'_>) -> Result<RunRecord> {
    let strategy = Strategy::GateWise { p };
    strategy.validate()?;
    let mut run = RunState::new(c, setup)?;
    'run: loop {
        for d in 0..run.circuit.n_gates() {
            let opt = if choose_rotosolve(p, &mut run.streams.hybrid) {
                Optimizer::Rotosolve
            } else {
                Optimizer::Fqs
            };
            if !run.ledger.can_afford(opt.evals_per_gate()) {
                break 'run;
            }
            if run.circuit.gate(d).family() != opt {
                run.convert_gate(d, opt)?;
                run.conversions += 1;
            }
            run.step(opt, d)?;
        }
    }
    run.finish(strategy, None)
}

/// Every `N`-th sweep uses FQS, the others Rotosolve; the whole circuit
/// changes representation at sweep boundaries.
pub fn run_iteration_hybrid(c: Circuit, n: u32, setup: RunSetup<'_>) -> Result<RunRecord> {
    let strategy = Strategy::Iteration { n };
    strategy.validate()?;
    let mut run = RunState::new(c, setup)?;
    for sweep_no in 1u64.. {
        let opt = if sweep_no % u64::from(n) == 0 {
            Optimizer::Fqs
        } else {
            Optimizer::Rotosolve
        };
        if !run.ledger.can_afford(opt.evals_per_gate()) {
            break;
        }
        run.convert_all(opt)?;
        let mut exhausted = false;
        for d in 0..run.circuit.n_gates() {
            if run.step(opt, d)?.is_none() {
                exhausted = true;
                break;
            }
        }
        if exhausted {
            break;
        }
    }
    run.finish(strategy, None)
}

/// Runs `strategy` from the given initial circuit.
pub fn run_strategy(strategy: &Strategy, c: Circuit, setup: RunSetup<'_>) -> Result<RunRecord> {
    strategy.validate()?;
    match *strategy {
        Strategy::Standalone { optimizer } => run_standalone(c, optimizer, setup),
        Strategy::EarlyStopping(cfg) => run_early_stopping(c, cfg, setup),
        Strategy::CostAverage(cfg) => run_cost_average(c, cfg, setup),
        Strategy::GateWise { p } => run_gate_wise(c, p, setup),
        Strategy::Iteration { n } => run_iteration_hybrid(c, n, setup),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_average_warm_up_and_linear_series() {
        let mut w = WindowAverage::new(3);
        assert_eq!(w.push(10.0), None);
        assert_eq!(w.push(9.0), None);
        assert_eq!(w.push(8.0), None);
        // mean(10, 9, 8) = 9, newest 7 -> slope 1 * (3 + 1) / 2 = 2
        assert_eq!(w.push(7.0), Some(2.0));
        assert_eq!(w.push(6.0), Some(2.0));
    }

    #[test]
    fn config_validation() {
        assert!(EarlyStopConfig {
            threshold: 0.0,
            patience: 1,
            reset_on_improvement: false
        }
        .validate()
        .is_err());
        assert!(EarlyStopConfig {
            threshold: 0.1,
            patience: 0,
            reset_on_improvement: false
        }
        .validate()
        .is_err());
        assert!(CostAverageConfig {
            threshold: 0.1,
            window: 0
        }
        .validate()
        .is_err());
        assert!(Strategy::GateWise { p: 1.5 }.validate().is_err());
        assert!(Strategy::Iteration { n: 0 }.validate().is_err());
    }

    #[test]
    fn strategy_json_shape() {
        let s: Strategy = serde_json::from_str(r#"{"kind":"early_stopping","threshold":0.1,"patience":5}"#).unwrap();
        assert_eq!(
            s,
            Strategy::EarlyStopping(EarlyStopConfig {
                threshold: 0.1,
                patience: 5,
                reset_on_improvement: false
            })
        );
        let s: Strategy = serde_json::from_str(r#"{"kind":"standalone","optimizer":"fqs"}"#).unwrap();
        assert_eq!(
            s,
            Strategy::Standalone {
                optimizer: Optimizer::Fqs
            }
        );
    }
}
