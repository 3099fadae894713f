//! Full-factorial parameter sweeps over `p_cr x p_mu x m`.

use std::io::Write;

use crate::config::ExperimentConfig;
use crate::error::BenchError;
use crate::experiment::run_experiment;

pub const SWEEP_HEADER: [&str; 8] =
    ["p_cr", "p_mu", "m", "runs", "failures", "mean_gap", "mean_true_value", "mean_final_mean"];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub p_cr: Vec<f64>,
    pub p_mu: Vec<f64>,
    pub m: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p_cr: f64,
    pub p_mu: f64,
    pub m: usize,
    pub runs: u64,
    pub failures: usize,
    pub mean_gap: Option<f64>,
    pub mean_true_value: Option<f64>,
    pub mean_final_mean: Option<f64>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// One experiment per grid cell; a failing cell is recorded and the sweep
/// moves on.
pub fn sweep(base: &ExperimentConfig, grid: &SweepGrid) -> Result<Vec<SweepRow>, BenchError> {
    if grid.p_cr.is_empty() || grid.p_mu.is_empty() || grid.m.is_empty() {
        return Err(BenchError::Config("sweep grid is empty".into()));
    }
    let mut rows = Vec::new();
    for &p_cr in &grid.p_cr {
        for &p_mu in &grid.p_mu {
            for &m in &grid.m {
                let mut cfg = base.clone();
                cfg.params.p_cr = p_cr;
                cfg.params.p_mu = p_mu;
                cfg.params.m = m;
                let out = run_experiment(&cfg);
                let ok = || out.summaries.iter().filter(|s| s.final_x.is_some());
                rows.push(SweepRow {
                    p_cr,
                    p_mu,
                    m,
                    runs: cfg.runs,
                    failures: out.failures.len(),
                    mean_gap: mean(ok().filter_map(|s| s.gap)),
                    mean_true_value: mean(ok().filter_map(|s| s.true_value)),
                    mean_final_mean: mean(ok().filter_map(|s| s.final_mean)),
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_sweep<W: Write>(out: W, rows: &[SweepRow]) -> Result<(), BenchError> {
    let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([
            r.p_cr.to_string(),
            r.p_mu.to_string(),
            r.m.to_string(),
            r.runs.to_string(),
            r.failures.to_string(),
            opt(r.mean_gap),
            opt(r.mean_true_value),
            opt(r.mean_final_mean),
        ])?;
    }
    w.flush()?;
    Ok(())
}
