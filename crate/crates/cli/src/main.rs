use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use smoothlearn::arena::LossParams;
use smoothlearn::bounds::{bound_value, BOUND_NAMES};
use smoothlearn::funcrep::Smoothness;
use smoothlearn_cli::config::{parse_smoothness, ExperimentConfig};
use smoothlearn_cli::{emit_report, run_experiment};

/// Learner-vs-adversary experiments for online prediction of smooth
/// functions.
#[derive(Parser)]
#[command(name = "smoothlearn", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named experiment and write its CSV summary.
    Run(RunArgs),
    /// Print a CSV table of named theorem bounds over a parameter grid.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment name: twopoint, pqlow, sandwich2q, holder, pq_exact,
    /// dyadic, grid, nnupper, boundedm, dlower, exp.
    experiment: String,
    /// JSON config file mirroring these flags; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Error exponent p.
    #[arg(long)]
    p: Option<f64>,
    /// Smoothness exponent q (a number, or "inf").
    #[arg(long, value_parser = parse_smoothness)]
    q: Option<Smoothness>,
    /// Input dimension d.
    #[arg(long)]
    d: Option<usize>,
    /// Budget of scored trials.
    #[arg(long)]
    m: Option<usize>,
    /// Stage amplitude parameter for dyadic/exp experiments.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Grid side count.
    #[arg(long)]
    n: Option<usize>,
    /// Dyadic stage count.
    #[arg(long)]
    stages: Option<usize>,
    /// Learner name: linint, nn, zero, random, midpoint (exp only).
    #[arg(long)]
    learner: Option<String>,
    /// Adversary name where selectable, e.g. lift:twopoint for dlower.
    #[arg(long)]
    adversary: Option<String>,
    /// Base seed; replicate r uses a seed derived from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Rows per parameter point.
    #[arg(long)]
    replicates: Option<usize>,
    /// Output directory (default: $SMOOTHLEARN_OUT or ./out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write per-game transcript and witness JSON.
    #[arg(long)]
    transcripts: bool,
}

#[derive(Args)]
struct BoundsArgs {
    /// Comma-separated p grid.
    #[arg(long, default_value = "1.1,1.5,2,3,4")]
    p_grid: String,
    /// Comma-separated q grid (numbers or "inf").
    #[arg(long, default_value = "1.1,1.25,1.5,1.9,2,inf")]
    q_grid: String,
    /// Dimension for the multivariate bounds.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Trial budget for the budgeted bounds.
    #[arg(long)]
    m: Option<usize>,
}

fn merge(args: RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            ExperimentConfig::from_json(&text)?
        }
        None => ExperimentConfig::new(args.experiment.clone()),
    };
    cfg.experiment = args.experiment;
    cfg.p = args.p.or(cfg.p);
    cfg.q = args.q.or(cfg.q);
    cfg.d = args.d.or(cfg.d);
    cfg.m = args.m.or(cfg.m);
    cfg.epsilon = args.epsilon.or(cfg.epsilon);
    cfg.n = args.n.or(cfg.n);
    cfg.stages = args.stages.or(cfg.stages);
    cfg.learner = args.learner.or(cfg.learner);
    cfg.adversary = args.adversary.or(cfg.adversary);
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(replicates) = args.replicates {
        cfg.replicates = replicates;
    }
    cfg.out = args.out.or(cfg.out);
    if args.transcripts {
        cfg.transcripts = true;
    }
    Ok(cfg)
}

fn out_dir(cfg: &ExperimentConfig) -> PathBuf {
    cfg.out.clone().unwrap_or_else(|| {
        std::env::var_os("SMOOTHLEARN_OUT")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("out"))
    })
}

fn run(args: RunArgs) -> Result<bool> {
    let cfg = merge(args)?;
    let output = run_experiment(&cfg)?;
    let dir = out_dir(&cfg);
    let written = emit_report(&cfg.experiment, &output.rows, &output.transcripts, &dir)
        .with_context(|| format!("writing report under {}", dir.display()))?;
    for path in &written {
        println!("wrote {}", path.display());
    }
    for failure in &output.failures {
        eprintln!("assertion failed: {failure}");
    }
    Ok(output.failures.is_empty())
}

fn bounds(args: BoundsArgs) -> Result<()> {
    let ps: Vec<f64> = args
        .p_grid
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("bad p {s:?}"))
        })
        .collect::<Result<_>>()?;
    let qs: Vec<Smoothness> = args
        .q_grid
        .split(',')
        .map(|s| parse_smoothness(s.trim()).map_err(|e| anyhow::anyhow!("bad q {s:?}: {e}")))
        .collect::<Result<_>>()?;
    println!("name,p,q,d,m,value,kind");
    for &p in &ps {
        for &q in &qs {
            let params = LossParams::new(p, q, args.d, args.m);
            for name in BOUND_NAMES {
                // names outside their hypothesis region are simply absent
                if let Ok(report) = bound_value(name, &params) {
                    let m = params.m.map_or(String::new(), |m| m.to_string());
                    println!(
                        "{name},{p},{q},{d},{m},{value},{kind}",
                        d = args.d,
                        value = report.value,
                        kind = report.kind
                    );
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Bounds(args) => bounds(args).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
