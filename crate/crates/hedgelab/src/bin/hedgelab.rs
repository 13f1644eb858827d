//! Thin benchmark CLI over the library. See `hedgelab --help`.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hedgelab::bench::{self, EtaSpec, ExperimentConfig, SweepPoint, VerifySuite};
use hedgelab::env::{self, DelayModel, LossModel};
use hedgelab::error::{HedgeError, Result};
use hedgelab::game::{run_game, AlgorithmKind, GameConfig};

#[derive(Parser)]
#[command(name = "hedgelab", about = "Hedging benchmarks under delayed feedback")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded sweep and write per-rep results (plus a .summary.csv).
    Run(RunArgs),
    /// Run one game and dump a weight-evolution window.
    Trace(TraceArgs),
    /// Run a self-check suite: oracle | bounds | lemmas | all.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Comma-separated ids: hedge,fs,bold-hedge,bold-fs
    #[arg(long, default_value = "hedge,bold-hedge")]
    algos: String,
    /// Number of experts (must match the loss spec)
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    horizon: usize,
    /// iid:q1 | iid:q2 | iid:<floats> | switch:<preset-or-floats>:k=K | file:PATH
    #[arg(long, default_value = "iid:q2")]
    loss: String,
    /// zero | fixed:D | poisson:L (L may be a comma list) | file:PATH
    #[arg(long, default_value = "zero")]
    delay: String,
    /// auto13 | auto14 | auto14-fs | VALUE
    #[arg(long, default_value = "auto14")]
    eta: String,
    #[arg(long, default_value_t = 250)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Switch budget for the regret_switch_k column
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long, default_value = "fs")]
    algo: String,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    horizon: usize,
    #[arg(long, default_value = "switch:q2:k=10")]
    loss: String,
    /// zero | fixed:D | poisson:L | file:PATH (single model)
    #[arg(long, default_value = "zero")]
    delay: String,
    #[arg(long, default_value = "auto14")]
    eta: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Round window A:B (inclusive, 1-based)
    #[arg(long)]
    window: String,
    #[arg(long)]
    out: PathBuf,
}

fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|e| HedgeError::parameter("loss", format!("bad float `{f}`: {e}")))
        })
        .collect()
}

fn parse_means(s: &str) -> Result<Vec<f64>> {
    match s {
        "q1" => Ok(env::Q1.to_vec()),
        "q2" => Ok(env::Q2.to_vec()),
        other => parse_floats(other),
    }
}

fn parse_loss(spec: &str, n: usize) -> Result<LossModel> {
    let model = if let Some(rest) = spec.strip_prefix("iid:") {
        LossModel::IidBernoulli {
            q: parse_means(rest)?,
        }
    } else if let Some(rest) = spec.strip_prefix("switch:") {
        let (means, k) = rest.rsplit_once(":k=").ok_or_else(|| {
            HedgeError::parameter("loss", format!("`{spec}`: expected switch:<means>:k=K"))
        })?;
        LossModel::SwitchingBernoulli {
            q: parse_means(means)?,
            switches: k
                .parse()
                .map_err(|e| HedgeError::parameter("loss", format!("bad k `{k}`: {e}")))?,
        }
    } else if let Some(path) = spec.strip_prefix("file:") {
        LossModel::FromFile { path: path.into() }
    } else {
        return Err(HedgeError::parameter(
            "loss",
            format!("`{spec}`: expected iid:..., switch:..., or file:PATH"),
        ));
    };
    if let LossModel::IidBernoulli { q } | LossModel::SwitchingBernoulli { q, .. } = &model {
        if q.len() != n {
            return Err(HedgeError::parameter(
                "n",
                format!("{n} experts but loss spec has {} means", q.len()),
            ));
        }
    }
    Ok(model)
}

fn parse_delay_points(spec: &str) -> Result<Vec<SweepPoint>> {
    if spec == "zero" {
        return Ok(vec![SweepPoint::new(DelayModel::Zero)]);
    }
    if let Some(rest) = spec.strip_prefix("fixed:") {
        let d = rest
            .parse()
            .map_err(|e| HedgeError::parameter("delay", format!("bad fixed delay: {e}")))?;
        return Ok(vec![SweepPoint::new(DelayModel::Fixed { delay: d })]);
    }
    if let Some(rest) = spec.strip_prefix("poisson:") {
        return rest
            .split(',')
            .map(|l| {
                let lambda = l.trim().parse().map_err(|e| {
                    HedgeError::parameter("delay", format!("bad lambda `{l}`: {e}"))
                })?;
                Ok(SweepPoint::new(DelayModel::Poisson { lambda }))
            })
            .collect();
    }
    if let Some(path) = spec.strip_prefix("file:") {
        return Ok(vec![SweepPoint::new(DelayModel::FromFile {
            path: path.into(),
        })]);
    }
    Err(HedgeError::parameter(
        "delay",
        format!("`{spec}`: expected zero, fixed:D, poisson:L, or file:PATH"),
    ))
}

fn parse_window(spec: &str) -> Result<(usize, usize)> {
    let (a, b) = spec
        .split_once(':')
        .ok_or_else(|| HedgeError::parameter("window", format!("`{spec}`: expected A:B")))?;
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|e| HedgeError::parameter("window", format!("bad bound `{s}`: {e}")))
    };
    Ok((parse(a)?, parse(b)?))
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let algos: Vec<AlgorithmKind> = args
        .algos
        .split(',')
        .map(|s| AlgorithmKind::parse(s.trim()))
        .collect::<Result<_>>()?;
    let mut config = ExperimentConfig::new(
        parse_loss(&args.loss, args.n)?,
        parse_delay_points(&args.delay)?,
    );
    config.algos = algos;
    config.horizon = args.horizon;
    config.reps = args.reps;
    config.seed = args.seed;
    config.eta = EtaSpec::parse(&args.eta)?;
    config.switch_budget = args.k;

    let result = bench::run_sweep(&config)?;
    let mut w = BufWriter::new(File::create(&args.out)?);
    bench::write_results_csv(&config, &result.rows, &mut w)?;
    let summary_path = args.out.with_extension("summary.csv");
    let mut w = BufWriter::new(File::create(&summary_path)?);
    bench::write_summary_csv(&config, &result.summary, &mut w)?;
    eprintln!(
        "wrote {} rows to {} (summary: {})",
        result.rows.len(),
        args.out.display(),
        summary_path.display()
    );
    Ok(())
}

fn cmd_trace(args: &TraceArgs) -> Result<()> {
    let algo = AlgorithmKind::parse(&args.algo)?;
    let loss_model = parse_loss(&args.loss, args.n)?;
    let points = parse_delay_points(&args.delay)?;
    if points.len() != 1 {
        return Err(HedgeError::parameter(
            "delay",
            "trace takes a single delay model",
        ));
    }
    let window = parse_window(&args.window)?;

    let losses = match &loss_model {
        LossModel::IidBernoulli { q } => env::gen_iid_losses(q, args.horizon, args.seed)?,
        LossModel::SwitchingBernoulli { q, switches } => {
            env::gen_switching_losses(q, *switches, args.horizon, args.seed)?.losses
        }
        LossModel::FromFile { path } => env::load_losses(path)?,
    };
    let delays = env::gen_delays(&points[0].delay, losses.len(), args.seed ^ 0x5eed)?;
    let eta = EtaSpec::parse(&args.eta)?;
    let policy = match eta {
        EtaSpec::Auto14 => EtaSpec::Auto14.policy(&points[0].delay)?,
        other => other.policy(&points[0].delay)?,
    };
    let cfg = GameConfig::new(1.0).with_eta(policy).with_seed(args.seed);
    let trace = run_game(algo, &losses, &delays, &cfg)?;
    let mut w = BufWriter::new(File::create(&args.out)?);
    bench::write_weight_trace(&trace, window, &mut w)?;
    eprintln!(
        "wrote weights for rounds {}..={} to {}",
        window.0,
        window.1,
        args.out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Run(args) => match cmd_run(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::Trace(args) => match cmd_trace(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::Verify { suite, seed } => {
            let suite = match VerifySuite::parse(suite) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let report = bench::run_verify(suite, *seed);
            for c in &report.checks {
                println!(
                    "{} {} — {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
