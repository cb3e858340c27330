use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use vqc_core::harness::{ground_energy, run_experiment, write_comparison, write_scalability, ExperimentConfig};
use vqc_core::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "vqc",
    version,
    about = "Sequential PQC optimizers and hybrid switching experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to $VQC_OUTDIR/<config name>.
    #[arg(long)]
    outdir: Option<PathBuf>,
    /// Worker threads; defaults to the number of logical CPUs.
    #[arg(long)]
    jobs: Option<usize>,
    /// Overrides `base_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `runs`.
    #[arg(long)]
    runs: Option<usize>,
    /// Root for default output directories.
    #[arg(long, env = "VQC_OUTDIR", default_value = "results", hide_env_values = true)]
    outroot: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment and write traces and statistics.
    Run(RunArgs),
    /// Print the exact ground energy of the configured problem.
    GroundState {
        #[arg(long)]
        config: PathBuf,
    },
    /// Scalability protocol: rerun the experiment per system size with L = n.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Sizes to visit, e.g. `n=7,9,11,13,15`.
        #[arg(long)]
        vary: String,
    },
}

fn load(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(s) = args.seed {
        cfg.base_seed = s;
    }
    if let Some(r) = args.runs {
        cfg.runs = r;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn outdir(args: &RunArgs) -> PathBuf {
    args.outdir.clone().unwrap_or_else(|| {
        let stem = args
            .config
            .file_stem()
            .map_or_else(|| "experiment".into(), |s| s.to_os_string());
        args.outroot.join(stem)
    })
}

fn parse_vary(spec: &str) -> Result<Vec<usize>> {
    let (key, values) = spec
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("--vary expects n=<list>, got {spec:?}")))?;
    if key.trim() != "n" {
        return Err(Error::Config(format!("only n can be varied, got {key:?}")));
    }
    values
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("bad size {v:?} in --vary")))
        })
        .collect()
}

fn run(args: &RunArgs) -> Result<()> {
    let cfg = load(args)?;
    let dir = outdir(args);
    let results = run_experiment(&cfg, args.jobs)?;
    write_comparison(&dir, &cfg, &results)?;
    for r in &results {
        let s = &r.summary;
        println!(
            "{:<28} budget={} mean_E={:.6} median_rel_err={:.4e} switch_rate={:.2}",
            s.label, s.budget, s.final_energy.mean, s.relative_error.median, s.switch_rate
        );
    }
    println!("results written to {}", dir.display());
    Ok(())
}

fn sweep(args: &RunArgs, vary: &str) -> Result<()> {
    let base = load(args)?;
    let sizes = parse_vary(vary)?;
    let root = outdir(args);
    let mut points = Vec::with_capacity(sizes.len());
    for size in sizes {
        let mut cfg = base.clone();
        cfg.problem = base.problem.with_size(size);
        cfg.layers_equal_qubits = true;
        cfg.validate()?;
        let results = run_experiment(&cfg, args.jobs)?;
        write_comparison(&root.join(format!("n={size}")), &cfg, &results)?;
        for r in &results {
            println!(
                "n={size:<3} {:<28} median_rel_err={:.4e}",
                r.summary.label, r.summary.relative_error.median
            );
        }
        points.push((size, results));
    }
    write_scalability(&root, &points)?;
    println!("results written to {}", root.display());
    Ok(())
}

fn ground_state(config: &Path) -> Result<()> {
    let cfg = ExperimentConfig::load(config)?;
    println!("{:.12}", ground_energy(&cfg)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Run(args) => run(args),
        Command::GroundState { config } => ground_state(config),
        Command::Sweep { run, vary } => sweep(run, vary),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
