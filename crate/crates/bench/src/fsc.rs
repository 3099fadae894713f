//! Final-selection comparison: each run is scored under all three criteria,
//! with true values re-estimated by fresh independent simulation.

use std::io::Write;

use gmab_core::{FinalCriterion, Solution, Solver};

use crate::config::ExperimentConfig;
use crate::error::BenchError;
use crate::experiment::for_each_run;
use crate::oracle::TrueValueOracle;

pub const FSC_HEADER: [&str; 7] = ["run_id", "fsc", "x_coords", "sample_mean", "n", "true_value", "gap"];

#[derive(Debug, Clone, PartialEq)]
pub struct FscRow {
    pub run_id: u64,
    pub criterion: FinalCriterion,
    pub x: Solution,
    pub sample_mean: f64,
    pub n: u64,
    pub true_value: f64,
    pub gap: Option<f64>,
}

fn compare_one(cfg: &ExperimentConfig, run_id: u64) -> Result<Vec<FscRow>, BenchError> {
    let mut problem = cfg.problem.build()?;
    let mut solver = Solver::new(&mut *problem, cfg.params_for_run(run_id))?;
    solver.initialize()?;
    while !solver.should_stop() {
        solver.iterate()?;
    }
    let picks: Vec<_> = FinalCriterion::ALL
        .iter()
        .map(|&c| (c, solver.incumbent(c).expect("observed solutions exist")))
        .collect();
    drop(solver);
    let mut oracle = TrueValueOracle::monte_carlo(cfg.true_value_reps, cfg.base_seed);
    let mut rows = Vec::with_capacity(3);
    for (criterion, inc) in picks {
        let true_value = oracle.value(&mut *problem, &inc.solution)?;
        rows.push(FscRow {
            run_id,
            criterion,
            gap: TrueValueOracle::gap(&*problem, true_value),
            x: inc.solution,
            sample_mean: inc.mean,
            n: inc.n,
            true_value,
        });
    }
    Ok(rows)
}

pub fn fsc_compare(cfg: &ExperimentConfig) -> Result<Vec<FscRow>, BenchError> {
    let mut rows = Vec::new();
    for r in for_each_run(cfg, |i| compare_one(cfg, i)) {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Mean gap (or mean true value when no optimum is known) per criterion.
pub fn mean_by_criterion(rows: &[FscRow]) -> Vec<(FinalCriterion, f64)> {
    FinalCriterion::ALL
        .iter()
        .map(|&c| {
            let v: Vec<f64> = rows
                .iter()
                .filter(|r| r.criterion == c)
                .map(|r| r.gap.unwrap_or(r.true_value))
                .collect();
            (c, v.iter().sum::<f64>() / v.len().max(1) as f64)
        })
        .collect()
}

pub fn write_fsc<W: Write>(out: W, rows: &[FscRow]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FSC_HEADER)?;
    for r in rows {
        w.write_record([
            r.run_id.to_string(),
            r.criterion.to_string(),
            r.x.to_string(),
            r.sample_mean.to_string(),
            r.n.to_string(),
            r.true_value.to_string(),
            r.gap.map(|g| g.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
