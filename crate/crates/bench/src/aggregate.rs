//! Per-checkpoint order statistics across runs.
//!
//! Percentiles use the nearest-rank definition: the `p`-th percentile of
//! `n` sorted values is the value of rank `max(1, ceil(p / 100 * n))`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use crate::error::BenchError;

pub const DEFAULT_PERCENTILES: [f64; 6] = [0.0, 5.0, 25.0, 75.0, 95.0, 100.0];

pub fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty() && (0.0..=100.0).contains(&p));
    let n = sorted.len();
    let rank = ((p * n as f64) / 100.0).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    pub replications: u64,
    pub runs: usize,
    pub mean: f64,
    pub percentiles: Vec<f64>,
}

/// Bands of `metric` (a trace column) at each checkpoint.
pub fn aggregate<R: Read>(trace: R, metric: &str, percentiles: &[f64]) -> Result<Vec<Band>, BenchError> {
    if let Some(p) = percentiles.iter().find(|p| !(0.0..=100.0).contains(*p)) {
        return Err(BenchError::Aggregate(format!("percentile {p} outside [0, 100]")));
    }
    let mut reader = csv::Reader::from_reader(trace);
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| BenchError::Aggregate(format!("trace has no {name} column")))
    };
    let (run_col, reps_col, value_col) = (col("run_id")?, col("replications")?, col(metric)?);

    let mut groups: BTreeMap<u64, Vec<(String, f64)>> = BTreeMap::new();
    let mut all_runs = BTreeSet::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let bad = |what: &str| BenchError::Aggregate(format!("row {}: bad {what}", line + 2));
        let run = record.get(run_col).ok_or_else(|| bad("run_id"))?.to_string();
        let reps: u64 = record.get(reps_col).and_then(|v| v.parse().ok()).ok_or_else(|| bad("replications"))?;
        let value: f64 = record.get(value_col).and_then(|v| v.parse().ok()).ok_or_else(|| bad(metric))?;
        all_runs.insert(run.clone());
        groups.entry(reps).or_default().push((run, value));
    }
    if groups.is_empty() {
        return Err(BenchError::Aggregate("trace has no rows".into()));
    }

    let mut bands = Vec::with_capacity(groups.len());
    for (reps, entries) in groups {
        let runs: BTreeSet<&String> = entries.iter().map(|e| &e.0).collect();
        if runs.len() != entries.len() || runs.len() != all_runs.len() {
            return Err(BenchError::Aggregate(format!("ragged checkpoints at {reps} replications")));
        }
        let mut values: Vec<f64> = entries.iter().map(|e| e.1).collect();
        values.sort_by(f64::total_cmp);
        bands.push(Band {
            replications: reps,
            runs: values.len(),
            mean: values.iter().sum::<f64>() / values.len() as f64,
            percentiles: percentiles.iter().map(|&p| nearest_rank(&values, p)).collect(),
        });
    }
    Ok(bands)
}

pub fn write_bands<W: Write>(out: W, percentiles: &[f64], bands: &[Band]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["replications".to_string(), "runs".to_string(), "mean".to_string()];
    header.extend(percentiles.iter().map(|p| format!("p{p}")));
    w.write_record(&header)?;
    for b in bands {
        let mut row = vec![b.replications.to_string(), b.runs.to_string(), b.mean.to_string()];
        row.extend(b.percentiles.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
