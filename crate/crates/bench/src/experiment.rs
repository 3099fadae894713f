//! Independent multi-run experiments.

use std::fs;
use std::io::Write;
use std::path::Path;

use gmab_core::{Objective, RunResult, Solution, Solver};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::BenchError;
use crate::oracle::TrueValueOracle;

pub const TRACE_HEADER: [&str; 6] = ["run_id", "replications", "x_coords", "sample_mean", "true_value", "gap"];
pub const SUMMARY_HEADER: [&str; 9] = [
    "run_id",
    "final_x",
    "final_mean",
    "final_n",
    "true_value",
    "gap",
    "iterations",
    "replications",
    "wall_seconds",
];

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub run_id: u64,
    pub replications: u64,
    pub x: Solution,
    pub sample_mean: f64,
    pub true_value: Option<f64>,
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub run_id: u64,
    pub final_x: Option<Solution>,
    pub final_mean: Option<f64>,
    pub final_n: Option<u64>,
    pub true_value: Option<f64>,
    pub gap: Option<f64>,
    pub iterations: u64,
    pub replications: u64,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentOutput {
    pub traces: Vec<TraceRow>,
    pub summaries: Vec<SummaryRow>,
    /// `(run_id, message)` for runs that stopped on an error.
    pub failures: Vec<(u64, String)>,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl TraceRow {
    fn fields(&self) -> [String; 6] {
        [
            self.run_id.to_string(),
            self.replications.to_string(),
            self.x.to_string(),
            self.sample_mean.to_string(),
            opt(self.true_value),
            opt(self.gap),
        ]
    }
}

impl SummaryRow {
    fn fields(&self) -> [String; 9] {
        [
            self.run_id.to_string(),
            opt(self.final_x.as_ref()),
            opt(self.final_mean),
            opt(self.final_n),
            opt(self.true_value),
            opt(self.gap),
            self.iterations.to_string(),
            self.replications.to_string(),
            self.wall_seconds.to_string(),
        ]
    }
}

pub fn write_trace<W: Write>(out: W, rows: &[TraceRow]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary<W: Write>(out: W, rows: &[SummaryRow]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

impl ExperimentOutput {
    /// Writes `trace.csv` and `summary.csv` into `dir`.
    pub fn write_to_dir(&self, dir: &Path) -> Result<(), BenchError> {
        fs::create_dir_all(dir)?;
        write_trace(fs::File::create(dir.join("trace.csv"))?, &self.traces)?;
        write_summary(fs::File::create(dir.join("summary.csv"))?, &self.summaries)?;
        Ok(())
    }

    pub fn mean_final_gap(&self) -> Option<f64> {
        let gaps: Vec<f64> = self.summaries.iter().filter_map(|s| s.gap).collect();
        (!gaps.is_empty()).then(|| gaps.iter().sum::<f64>() / gaps.len() as f64)
    }
}

pub struct RunOutcome {
    pub traces: Vec<TraceRow>,
    pub summary: SummaryRow,
    pub error: Option<String>,
}

/// Runs `f(run_id)` for every run, in parallel when configured, and returns
/// the results in run order.
pub fn for_each_run<T: Send>(cfg: &ExperimentConfig, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    if cfg.parallel {
        (0..cfg.runs).into_par_iter().map(f).collect()
    } else {
        (0..cfg.runs).map(f).collect()
    }
}

fn trace_rows(
    run_id: u64,
    problem: &mut dyn Objective,
    result_trace: &gmab_core::RunTrace,
    oracle: &mut TrueValueOracle,
) -> Result<Vec<TraceRow>, BenchError> {
    let mut rows = Vec::with_capacity(result_trace.checkpoints.len());
    for c in &result_trace.checkpoints {
        let tv = oracle.value(problem, &c.incumbent)?;
        rows.push(TraceRow {
            run_id,
            replications: c.replications,
            x: c.incumbent.clone(),
            sample_mean: c.mean,
            true_value: Some(tv),
            gap: TrueValueOracle::gap(problem, tv),
        });
    }
    Ok(rows)
}

fn summary_row(
    run_id: u64,
    res: &RunResult,
    problem: &mut dyn Objective,
    oracle: &mut TrueValueOracle,
) -> Result<SummaryRow, BenchError> {
    let tv = oracle.value(problem, &res.best)?;
    Ok(SummaryRow {
        run_id,
        final_x: Some(res.best.clone()),
        final_mean: Some(res.best_mean),
        final_n: Some(res.best_n),
        true_value: Some(tv),
        gap: TrueValueOracle::gap(problem, tv),
        iterations: res.iterations,
        replications: res.replications,
        wall_seconds: res.wall_seconds,
    })
}

fn failed_summary(run_id: u64, iterations: u64, replications: u64) -> SummaryRow {
    SummaryRow {
        run_id,
        final_x: None,
        final_mean: None,
        final_n: None,
        true_value: None,
        gap: None,
        iterations,
        replications,
        wall_seconds: 0.0,
    }
}

pub fn run_single(cfg: &ExperimentConfig, run_id: u64) -> RunOutcome {
    let fail = |msg: String, iterations, replications| RunOutcome {
        traces: Vec::new(),
        summary: failed_summary(run_id, iterations, replications),
        error: Some(msg),
    };
    let mut problem = match cfg.problem.build() {
        Ok(p) => p,
        Err(e) => return fail(e.to_string(), 0, 0),
    };
    let solver = match Solver::new(&mut *problem, cfg.params_for_run(run_id)) {
        Ok(s) => s,
        Err(e) => return fail(e.to_string(), 0, 0),
    };
    let mut oracle = TrueValueOracle::new(cfg.true_value_reps, cfg.base_seed);
    match solver.run() {
        Ok(res) => {
            let rows = trace_rows(run_id, &mut *problem, &res.trace, &mut oracle)
                .and_then(|t| Ok((t, summary_row(run_id, &res, &mut *problem, &mut oracle)?)));
            match rows {
                Ok((traces, summary)) => RunOutcome { traces, summary, error: None },
                Err(e) => fail(e.to_string(), res.iterations, res.replications),
            }
        }
        Err(failure) => {
            let traces = trace_rows(run_id, &mut *problem, &failure.trace, &mut oracle).unwrap_or_default();
            RunOutcome {
                traces,
                summary: failed_summary(run_id, failure.iterations, failure.replications),
                error: Some(failure.to_string()),
            }
        }
    }
}

/// Runs `cfg.runs` independent solver runs with seeds `base_seed + i`.
pub fn run_experiment(cfg: &ExperimentConfig) -> ExperimentOutput {
    let mut out = ExperimentOutput::default();
    for (run_id, o) in for_each_run(cfg, |i| run_single(cfg, i)).into_iter().enumerate() {
        out.traces.extend(o.traces);
        out.summaries.push(o.summary);
        if let Some(e) = o.error {
            out.failures.push((run_id as u64, e));
        }
    }
    out
}
