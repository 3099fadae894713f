use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gmab_bench::aggregate::{aggregate, write_bands, DEFAULT_PERCENTILES};
use gmab_bench::fsc::{fsc_compare, mean_by_criterion, write_fsc};
use gmab_bench::runtime::{measure_iteration_runtime, write_runtime};
use gmab_bench::sweep::{sweep, write_sweep, SweepGrid};
use gmab_bench::{run_experiment, BenchError, ExperimentConfig, RawOptions};

#[derive(Parser)]
#[command(name = "gmab-bench", version, about = "Experiments with the GMAB solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Independent runs; writes trace.csv and summary.csv into --out (a directory).
    Run(Common),
    /// Full-factorial sweep; --m, --p-cr and --p-mu take comma-separated lists.
    Sweep(Common),
    /// Per-checkpoint mean and nearest-rank percentiles of a trace file.
    Aggregate(AggregateArgs),
    /// Per-iteration algorithm overhead against memory size.
    BenchRuntime(Common),
    /// Scores every run under all three final-selection criteria.
    FscCompare(Common),
}

#[derive(Args, Clone, Default)]
struct Common {
    /// key=value file with the same keys as the flags; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// tp1, tp3, tp4 or external.
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    dims: Option<String>,
    #[arg(long)]
    noise_std: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    p_cr: Option<String>,
    #[arg(long)]
    p_mu: Option<String>,
    #[arg(long)]
    budget_reps: Option<String>,
    #[arg(long)]
    budget_iters: Option<String>,
    #[arg(long)]
    runs: Option<String>,
    /// Base seed; run i uses seed + i.
    #[arg(long)]
    seed: Option<String>,
    /// Final selection criterion: 1, 2 or 3.
    #[arg(long)]
    fsc: Option<String>,
    /// Comma-separated cumulative replication counts.
    #[arg(long)]
    checkpoints: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// Simulator command line, split on whitespace.
    #[arg(long)]
    external_cmd: Option<String>,
    /// Replications of fresh Monte-Carlo true-value estimates.
    #[arg(long)]
    true_value_reps: Option<String>,
    /// Execute runs concurrently; results do not depend on scheduling.
    #[arg(long)]
    parallel: bool,
}

#[derive(Args)]
struct AggregateArgs {
    /// Trace CSV produced by `run`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated percentiles in [0, 100].
    #[arg(long, value_delimiter = ',')]
    percentiles: Option<Vec<f64>>,
    /// Trace column to aggregate.
    #[arg(long, default_value = "gap")]
    metric: String,
}

impl Common {
    fn options(&self) -> Result<RawOptions, BenchError> {
        let file = match &self.config {
            Some(path) => RawOptions::from_file(path)?,
            None => RawOptions::default(),
        };
        let mut flags = RawOptions::default();
        let pairs = [
            ("problem", &self.problem),
            ("dims", &self.dims),
            ("noise-std", &self.noise_std),
            ("m", &self.m),
            ("p-cr", &self.p_cr),
            ("p-mu", &self.p_mu),
            ("budget-reps", &self.budget_reps),
            ("budget-iters", &self.budget_iters),
            ("runs", &self.runs),
            ("seed", &self.seed),
            ("fsc", &self.fsc),
            ("checkpoints", &self.checkpoints),
            ("out", &self.out),
            ("external-cmd", &self.external_cmd),
            ("true-value-reps", &self.true_value_reps),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                flags.set(key, v.clone());
            }
        }
        if self.parallel {
            flags.set("parallel", "true");
        }
        Ok(file.merge(flags))
    }
}

fn output(path: Option<&str>) -> Result<Box<dyn Write>, BenchError> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cmd: Cmd) -> Result<bool, BenchError> {
    match cmd {
        Cmd::Run(common) => {
            let cfg = ExperimentConfig::from_options(&common.options()?)?;
            let out = run_experiment(&cfg);
            out.write_to_dir(&cfg.out)?;
            for (run_id, msg) in &out.failures {
                eprintln!("run {run_id}: {msg}");
            }
            if let Some(gap) = out.mean_final_gap() {
                eprintln!("{} runs, mean final gap {gap:.4}", cfg.runs);
            }
            Ok(out.failures.is_empty())
        }
        Cmd::Sweep(common) => {
            let opts = common.options()?;
            let grid = SweepGrid {
                p_cr: opts.parse_list("p-cr")?.unwrap_or_else(|| vec![1.0]),
                p_mu: opts.parse_list("p-mu")?.unwrap_or_else(|| vec![0.25]),
                m: opts.parse_list("m")?.unwrap_or_else(|| vec![20]),
            };
            let mut base_opts = opts.clone();
            for key in ["p-cr", "p-mu", "m"] {
                base_opts.remove(key);
            }
            let cfg = ExperimentConfig::from_options(&base_opts)?;
            let rows = sweep(&cfg, &grid)?;
            write_sweep(output(opts.get("out"))?, &rows)?;
            Ok(rows.iter().all(|r| r.failures == 0))
        }
        Cmd::Aggregate(args) => {
            let percentiles = args.percentiles.unwrap_or_else(|| DEFAULT_PERCENTILES.to_vec());
            let bands = aggregate(File::open(&args.input)?, &args.metric, &percentiles)?;
            let out = output(args.out.as_ref().and_then(|p| p.to_str()))?;
            write_bands(out, &percentiles, &bands)?;
            Ok(true)
        }
        Cmd::BenchRuntime(common) => {
            let opts = common.options()?;
            let iterations: u64 = opts.parse("budget-iters")?.unwrap_or(1000);
            let cfg = ExperimentConfig::from_options(&opts)?;
            let space = cfg.problem.build()?.space().clone();
            let rows = measure_iteration_runtime(&space, &cfg.params, iterations)?;
            write_runtime(output(opts.get("out"))?, &rows)?;
            Ok(true)
        }
        Cmd::FscCompare(common) => {
            let opts = common.options()?;
            let cfg = ExperimentConfig::from_options(&opts)?;
            let rows = fsc_compare(&cfg)?;
            write_fsc(output(opts.get("out"))?, &rows)?;
            for (c, mean) in mean_by_criterion(&rows) {
                eprintln!("{c}: mean gap {mean:.4}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
