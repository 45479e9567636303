use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qcollapse::chart::emit_chart;
use qcollapse::config::{
    parse_pairs, tokenize, SweepPlan, VisibilityEstimator, DEFAULT_SEED, DEFAULT_SHOTS,
};
use qcollapse::csv_io::{fmt_sig9, write_csv};
use qcollapse::error::{Error, Result};
use qcollapse::noise::{
    NoiseLaw, NoisePlacement, NoiseScope, NoiseSpec, DEFAULT_ALPHA, DEFAULT_K, DEFAULT_P0,
};
use qcollapse::oracle::{
    grover_noiseless_success, predict_branch_visibility, predict_ghz_visibility,
};
use qcollapse::sweep::run_sweep;

const WORKERS_ENV: &str = "QCOLLAPSE_WORKERS";

/// Simulates how size-scaled dephasing suppresses quantum coherence in
/// three benchmark experiments: GHZ parity scans, branch-mass
/// interference, and Grover search.
#[derive(Parser)]
#[command(name = "qcollapse", version)]
struct Cli {
    /// Worker threads for sweep points (overrides QCOLLAPSE_WORKERS).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// GHZ parity-visibility sweep over qubit count.
    Ghz(SweepArgs),
    /// Branch-mass interference sweep over ancilla count.
    Branch(SweepArgs),
    /// Grover success sweep over width and iteration depth.
    Grover(SweepArgs),
    /// Run all three sweeps on their default grids and write the study
    /// artifacts (fig2/fig3/fig4 CSVs and charts).
    Reproduce(ReproduceArgs),
    /// Print closed-form predictions without running the engines.
    Predict(PredictArgs),
}

/// Flags mirror the config-file keys; a flag wins over the file.
#[derive(Args)]
struct SweepArgs {
    /// Config file of whitespace-separated key=value pairs.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Size grid, e.g. 2..8 or 3,4,5 (n for ghz/grover, m for branch).
    #[arg(long)]
    sizes: Option<String>,
    /// Grover iteration grid, e.g. 1..7.
    #[arg(long)]
    iterations: Option<String>,
    /// Mass-dependent law to compare against the constant baseline:
    /// power | exp; 'constant' runs the baseline alone.
    #[arg(long)]
    law: Option<String>,
    /// Scaling-law strength.
    #[arg(long)]
    k: Option<f64>,
    /// Scaling-law exponent.
    #[arg(long)]
    alpha: Option<f64>,
    /// Constant-baseline dephasing probability.
    #[arg(long)]
    p0: Option<f64>,
    #[arg(long)]
    shots: Option<usize>,
    /// Azimuth grid resolution for parity scans.
    #[arg(long = "phase-points")]
    phase_points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// trajectory | exact
    #[arg(long)]
    backend: Option<String>,
    /// Visibility estimator: fourier (default) | minmax.
    #[arg(long)]
    estimator: Option<String>,
    /// CSV destination (default <experiment>.csv).
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG chart destination (default <experiment>.svg).
    #[arg(long)]
    chart: Option<PathBuf>,
    /// Skip chart emission.
    #[arg(long)]
    no_chart: bool,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Directory receiving fig2/fig3/fig4 CSVs and charts.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    shots: usize,
}

#[derive(Args)]
struct PredictArgs {
    /// ghz | branch | grover
    #[arg(long)]
    experiment: String,
    /// Qubit count (ghz, grover) or ancilla count (branch).
    #[arg(long)]
    size: usize,
    /// Grover iteration count.
    #[arg(long)]
    iterations: Option<usize>,
    /// power | exp | constant
    #[arg(long, default_value = "power")]
    law: String,
    #[arg(long, default_value_t = DEFAULT_K)]
    k: f64,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = DEFAULT_P0)]
    p0: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    init_workers(cli.workers);
    let outcome = match cli.command {
        Command::Ghz(args) => run_sweep_command("ghz", args),
        Command::Branch(args) => run_sweep_command("branch", args),
        Command::Grover(args) => run_sweep_command("grover", args),
        Command::Reproduce(args) => run_reproduce(args),
        Command::Predict(args) => run_predict(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 1 } else { 2 })
        }
    }
}

fn init_workers(flag: Option<usize>) {
    let from_env = std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    if let Some(n) = flag.or(from_env) {
        if n >= 1 {
            // fails only if a pool already exists, which keeps that pool
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

fn build_plan(experiment: &str, args: &SweepArgs) -> Result<SweepPlan> {
    let mut pairs = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::config("config", format!("cannot read {}: {e}", path.display()))
            })?;
            tokenize(&text)?
        }
        None => Vec::new(),
    };
    // the subcommand and any flags override the file
    pairs.push(("experiment".into(), experiment.into()));
    let flag_pairs: [(&str, Option<String>); 10] = [
        ("sizes", args.sizes.clone()),
        ("iterations", args.iterations.clone()),
        ("law", args.law.clone()),
        ("k", args.k.map(|v| v.to_string())),
        ("alpha", args.alpha.map(|v| v.to_string())),
        ("p0", args.p0.map(|v| v.to_string())),
        ("shots", args.shots.map(|v| v.to_string())),
        ("phase_points", args.phase_points.map(|v| v.to_string())),
        ("seed", args.seed.map(|v| v.to_string())),
        ("backend", args.backend.clone()),
    ];
    for (key, value) in flag_pairs {
        if let Some(value) = value {
            pairs.push((key.into(), value));
        }
    }
    let mut plan = parse_pairs(&pairs)?;
    plan.estimator = match args.estimator.as_deref() {
        None | Some("fourier") => VisibilityEstimator::Fourier,
        Some("minmax") => VisibilityEstimator::MinMax,
        Some(other) => {
            return Err(Error::config(
                "estimator",
                format!("unknown estimator '{other}' (expected fourier or minmax)"),
            ))
        }
    };
    Ok(plan)
}

fn run_sweep_command(experiment: &str, args: SweepArgs) -> Result<()> {
    let plan = build_plan(experiment, &args)?;
    let rows = run_sweep(&plan)?;
    let out = args
        .out
        .unwrap_or_else(|| PathBuf::from(format!("{experiment}.csv")));
    write_csv(&rows, &out)?;
    println!(
        "{experiment}: {} sweep points -> {}",
        rows.len(),
        out.display()
    );
    if !args.no_chart {
        let chart = args
            .chart
            .unwrap_or_else(|| PathBuf::from(format!("{experiment}.svg")));
        emit_chart(&rows, &chart)?;
        println!("{experiment}: chart -> {}", chart.display());
    }
    Ok(())
}

fn run_reproduce(args: ReproduceArgs) -> Result<()> {
    std::fs::create_dir_all(&args.out_dir).map_err(|e| Error::Io {
        path: args.out_dir.display().to_string(),
        source: e,
    })?;
    let sweeps = [
        (
            "fig2",
            format!("experiment=ghz seed={} shots={}", args.seed, args.shots),
        ),
        (
            "fig3",
            format!("experiment=branch seed={} shots={}", args.seed, args.shots),
        ),
        (
            "fig4",
            format!(
                "experiment=grover sizes=3,4,5 iterations=1..7 seed={} shots={}",
                args.seed, args.shots
            ),
        ),
    ];
    for (name, config) in sweeps {
        let plan = qcollapse::config::parse_config(&config)?;
        let rows = run_sweep(&plan)?;
        let csv_path = args.out_dir.join(format!("{name}.csv"));
        let svg_path = args.out_dir.join(format!("{name}.svg"));
        write_csv(&rows, &csv_path)?;
        emit_chart(&rows, &svg_path)?;
        println!(
            "{name}: {} points -> {}, {}",
            rows.len(),
            csv_path.display(),
            svg_path.display()
        );
    }
    Ok(())
}

fn run_predict(args: PredictArgs) -> Result<()> {
    let law = match args.law.as_str() {
        "power" => NoiseLaw::PowerLaw {
            k: args.k,
            alpha: args.alpha,
        },
        "exp" => NoiseLaw::ExpSaturating {
            k: args.k,
            alpha: args.alpha,
        },
        "constant" => NoiseLaw::Constant { p0: args.p0 },
        other => {
            return Err(Error::config(
                "law",
                format!("unknown law '{other}' (expected power, exp, or constant)"),
            ))
        }
    };
    match args.experiment.as_str() {
        "ghz" => {
            let spec = NoiseSpec::new(law, NoisePlacement::AfterPrep, NoiseScope::AllQubits);
            let p = predict_ghz_visibility(&spec, args.size)?;
            println!(
                "ghz n={} law={}: predicted parity visibility = {}",
                args.size,
                law.label(),
                fmt_sig9(p.metric)
            );
        }
        "branch" => {
            let scope = match law {
                NoiseLaw::Constant { .. } => NoiseScope::AllQubits,
                _ => NoiseScope::BranchAncillasOnly,
            };
            let spec = NoiseSpec::new(law, NoisePlacement::AfterPrep, scope);
            let p = predict_branch_visibility(&spec, args.size)?;
            println!(
                "branch m={} law={}: predicted fringe visibility = {}",
                args.size,
                law.label(),
                fmt_sig9(p.metric)
            );
        }
        "grover" => {
            let t = args
                .iterations
                .ok_or_else(|| Error::config("iterations", "required for grover predictions"))?;
            let p = grover_noiseless_success(args.size, t)?;
            println!(
                "grover n={} t={t}: predicted noiseless success = {}",
                args.size,
                fmt_sig9(p.metric)
            );
        }
        other => {
            return Err(Error::config(
                "experiment",
                format!("unknown experiment '{other}' (expected ghz, branch, or grover)"),
            ));
        }
    }
    Ok(())
}
