use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::{ExperimentConfig, ExperimentResult, ExperimentSummary};
use crate::error::{Error, Result};
use crate::hybrid::RunRecord;

pub const TRACE_HEADER: [&str; 5] = ["gate_opt_index", "evals_used", "cost", "delta_avg", "phase"];

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn write_trace(path: &Path, record: &RunRecord) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(TRACE_HEADER)?;
    for t in &record.trace {
        w.write_record([
            t.gate_opt_index.to_string(),
            t.evals_used.to_string(),
            t.cost.to_string(),
            t.delta.map(|d| d.to_string()).unwrap_or_default(),
            t.phase.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes one strategy's results into `dir` (created if missing).
pub fn write_experiment(dir: &Path, cfg: &ExperimentConfig, result: &ExperimentResult) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut resolved = cfg.clone();
    resolved.optimizer = Some(result.summary.strategy);
    resolved.optimizers.clear();
    resolved.layers = cfg.effective_layers();
    resolved.layers_equal_qubits = false;
    write_json(&dir.join("config.json"), &resolved)?;

    let mut runs = BufWriter::new(File::create(dir.join("runs.jsonl"))?);
    let mut timings = BufWriter::new(File::create(dir.join("timings.jsonl"))?);
    for r in &result.records {
        serde_json::to_writer(&mut runs, r)?;
        runs.write_all(b"\n")?;
        writeln!(
            timings,
            "{{\"seed\":{},\"wall_time_secs\":{}}}",
            r.seed, r.wall_time_secs
        )?;
        write_trace(&dir.join(format!("trace_{}.csv", r.seed)), r)?;
    }
    runs.flush()?;
    timings.flush()?;
    write_json(&dir.join("summary.json"), &result.summary)
}

#[derive(Debug, Serialize)]
struct ComparisonEntry<'a> {
    label: &'a str,
    dir: String,
    summary: &'a ExperimentSummary,
}

#[derive(Debug, Serialize)]
struct Comparison<'a> {
    budget: u64,
    /// Every strategy received exactly `budget` evaluations.
    budget_fair: bool,
    entries: Vec<ComparisonEntry<'a>>,
}

/// Writes results of one config. A single strategy goes straight into
/// `dir`; several strategies get a subdirectory each plus
/// `comparison.json`.
pub fn write_comparison(dir: &Path, cfg: &ExperimentConfig, results: &[ExperimentResult]) -> Result<()> {
    if let [single] = results {
        return write_experiment(dir, cfg, single);
    }
    let budget = results.first().map_or(0, |r| r.summary.budget);
    if results.iter().any(|r| r.summary.budget != budget) {
        return Err(Error::numeric(
            "strategies in one comparison received different budgets",
        ));
    }
    let mut entries = Vec::with_capacity(results.len());
    for r in results {
        let sub = dir.join(&r.summary.label);
        write_experiment(&sub, cfg, r)?;
        entries.push(ComparisonEntry {
            label: &r.summary.label,
            dir: r.summary.label.clone(),
            summary: &r.summary,
        });
    }
    fs::create_dir_all(dir)?;
    write_json(
        &dir.join("comparison.json"),
        &Comparison {
            budget,
            budget_fair: true,
            entries,
        },
    )
}

#[derive(Debug, Serialize)]
struct ScalabilityPoint<'a> {
    size: usize,
    dir: String,
    summaries: Vec<&'a ExperimentSummary>,
}

/// Index of a size sweep: one entry per system size.
pub fn write_scalability(dir: &Path, points: &[(usize, Vec<ExperimentResult>)]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let index: Vec<ScalabilityPoint<'_>> = points
        .iter()
        .map(|(size, results)| ScalabilityPoint {
            size: *size,
            dir: format!("n={size}"),
            summaries: results.iter().map(|r| &r.summary).collect(),
        })
        .collect();
    write_json(&dir.join("scalability.json"), &index)
}
