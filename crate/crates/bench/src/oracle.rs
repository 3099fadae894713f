//! Ground-truth values for reporting optimality gaps.

use std::collections::HashMap;

use gmab_core::rng::{sub_stream, Stream};
use gmab_core::{EvalError, Objective, Solution};

const SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// Analytic true values where the problem has them, fresh Monte-Carlo
/// estimates otherwise. Estimates are memoized and depend only on the
/// solution and the oracle seed, never on query order.
#[derive(Debug, Clone)]
pub struct TrueValueOracle {
    reps: u64,
    seed: u64,
    force_mc: bool,
    memo: HashMap<Solution, f64>,
}

fn solution_id(x: &Solution) -> u64 {
    // FNV-1a over the coordinates.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in x.coords() {
        for b in v.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

impl TrueValueOracle {
    pub fn new(reps: u64, seed: u64) -> Self {
        TrueValueOracle { reps: reps.max(1), seed, force_mc: false, memo: HashMap::new() }
    }

    /// Always estimate by simulation, even when an analytic value exists.
    pub fn monte_carlo(reps: u64, seed: u64) -> Self {
        TrueValueOracle { force_mc: true, ..Self::new(reps, seed) }
    }

    fn stream_for(&self, x: &Solution) -> Stream {
        sub_stream(self.seed ^ SALT, solution_id(x))
    }

    pub fn value<O: Objective + ?Sized>(&mut self, problem: &mut O, x: &Solution) -> Result<f64, EvalError> {
        if !self.force_mc {
            if let Some(v) = problem.true_value(x) {
                return Ok(v);
            }
        }
        if let Some(&v) = self.memo.get(x) {
            return Ok(v);
        }
        let v = mc_mean(problem, x, self.reps, &mut self.stream_for(x))?;
        self.memo.insert(x.clone(), v);
        Ok(v)
    }

    /// `g(x) - optimum` when the optimum is known.
    pub fn gap<O: Objective + ?Sized>(problem: &O, true_value: f64) -> Option<f64> {
        problem.optimum_value().map(|opt| true_value - opt)
    }
}

pub fn mc_mean<O: Objective + ?Sized>(
    problem: &mut O,
    x: &Solution,
    reps: u64,
    rng: &mut Stream,
) -> Result<f64, EvalError> {
    let mut sum = 0.0;
    for _ in 0..reps {
        sum += problem.simulate(x, rng)?;
    }
    Ok(sum / reps as f64)
}
