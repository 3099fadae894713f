//! Per-iteration overhead of the algorithm itself.
//!
//! The objective is replaced by a constant-time noise stub over the same
//! search space, and the time spent inside the stub is subtracted, so
//! what remains is memory and operator work.

use std::io::Write;
use std::time::Instant;

use gmab_core::rng::Stream;
use gmab_core::{EvalError, GmabParams, Memory, Objective, SearchSpace, Solution, Solver, StoppingBudget};
use rand::Rng;

use crate::error::BenchError;

pub const RUNTIME_HEADER: [&str; 3] = ["iteration", "visited", "seconds"];

struct NoiseStub {
    space: SearchSpace,
    eval_seconds: f64,
}

impl Objective for NoiseStub {
    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn simulate(&mut self, _x: &Solution, rng: &mut Stream) -> Result<f64, EvalError> {
        let t = Instant::now();
        let v = rng.random::<f64>();
        self.eval_seconds += t.elapsed().as_secs_f64();
        Ok(v)
    }

    fn name(&self) -> String {
        "noise-stub".into()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuntimeRow {
    pub iteration: u64,
    /// `|V_k|` after the iteration.
    pub visited: usize,
    pub seconds: f64,
}

/// Times `iterations` iterations of the solver on `space`.
pub fn measure_iteration_runtime(
    space: &SearchSpace,
    params: &GmabParams,
    iterations: u64,
) -> Result<Vec<RuntimeRow>, BenchError> {
    let mut stub = NoiseStub { space: space.clone(), eval_seconds: 0.0 };
    let params = GmabParams { budget: StoppingBudget::iterations(iterations), ..params.clone() };
    let mut solver = Solver::new(&mut stub, params)?;
    solver.initialize()?;
    let mut rows = Vec::with_capacity(iterations as usize);
    for k in 1..=iterations {
        let eval_before = solver.problem().eval_seconds;
        let t = Instant::now();
        solver.iterate()?;
        let total = t.elapsed().as_secs_f64();
        let eval = solver.problem().eval_seconds - eval_before;
        rows.push(RuntimeRow { iteration: k, visited: solver.memory().len(), seconds: (total - eval).max(0.0) });
    }
    Ok(rows)
}

/// Median per-iteration time over iterations whose memory size lies within
/// `rel_tol` of `target`.
pub fn median_near(rows: &[RuntimeRow], target: usize, rel_tol: f64) -> Option<f64> {
    let lo = target as f64 * (1.0 - rel_tol);
    let hi = target as f64 * (1.0 + rel_tol);
    let mut times: Vec<f64> = rows
        .iter()
        .filter(|r| (lo..=hi).contains(&(r.visited as f64)))
        .map(|r| r.seconds)
        .collect();
    if times.is_empty() {
        return None;
    }
    times.sort_by(f64::total_cmp);
    Some(times[times.len() / 2])
}

pub fn write_runtime<W: Write>(out: W, rows: &[RuntimeRow]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RUNTIME_HEADER)?;
    for r in rows {
        w.write_record([r.iteration.to_string(), r.visited.to_string(), r.seconds.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
