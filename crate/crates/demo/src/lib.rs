//! Browser bindings for the GMAB solver on the two-dimensional TP3 surface.
//!
//! Every export is a thin wrapper over a plain Rust function so the logic
//! can be tested natively.

use gmab_core::genetic::{gaussian_mutate, MutationConfig};
use gmab_core::problems::{tp3_true, Tp3};
use gmab_core::rng::sub_stream;
use gmab_core::{GmabParams, Memory, SearchSpace, Solution, Solver, StoppingBudget};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Upper bound of each TP3 coordinate.
pub const TP3_MAX: i64 = 10_000;

/// Noise-free TP3 values on a `resolution x resolution` grid, row-major with
/// `x2` along rows. Cell `(i, j)` sits at the lattice point nearest to
/// `(j, i) * TP3_MAX / (resolution - 1)`.
pub fn surface(resolution: usize) -> Vec<f64> {
    let res = resolution.max(2);
    let at = |i: usize| ((i as f64) * TP3_MAX as f64 / (res - 1) as f64).round() as i64;
    let mut out = Vec::with_capacity(res * res);
    for i in 0..res {
        for j in 0..res {
            out.push(tp3_true(at(j), at(i)));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VisitedPoint {
    pub x: [i64; 2],
    pub n: u64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracePoint {
    pub replications: u64,
    pub x: [i64; 2],
    pub mean: f64,
    pub true_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoRun {
    pub best: [i64; 2],
    pub best_mean: f64,
    pub best_n: u64,
    pub true_value: f64,
    pub iterations: u64,
    pub replications: u64,
    pub visited: Vec<VisitedPoint>,
    pub trace: Vec<TracePoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoParams {
    pub m: usize,
    pub p_cr: f64,
    pub p_mu: f64,
    pub noise_std: f64,
    pub budget: u64,
    pub seed: u64,
}

impl Default for DemoParams {
    fn default() -> Self {
        DemoParams { m: 20, p_cr: 1.0, p_mu: 0.25, noise_std: 1.0, budget: 10_000, seed: 0 }
    }
}

fn pair(x: &Solution) -> [i64; 2] {
    [x.coords()[0], x.coords()[1]]
}

/// Replication counts at which the incumbent is sampled for the chart.
fn chart_grid(budget: u64) -> Vec<u64> {
    let step = (budget / 50).max(1);
    (1..=50).map(|i| i * step).filter(|&g| g <= budget).collect()
}

/// Runs the solver on noisy TP3 and returns every visited point.
pub fn run_tp3(p: &DemoParams) -> Result<DemoRun, String> {
    if !(p.noise_std.is_finite() && p.noise_std >= 0.0) {
        return Err(format!("noise std {} must be finite and non-negative", p.noise_std));
    }
    if p.budget == 0 || p.budget > 2_000_000 {
        return Err("budget must be between 1 and 2000000".into());
    }
    let mut problem = Tp3::with_noise(p.noise_std);
    let params = GmabParams {
        m: p.m,
        p_cr: p.p_cr,
        p_mu: p.p_mu,
        seed: p.seed,
        budget: StoppingBudget::replications(p.budget),
        checkpoints: chart_grid(p.budget),
        ..GmabParams::default()
    };
    let mut solver = Solver::new(&mut problem, params).map_err(|e| e.to_string())?;
    solver.initialize().map_err(|e| e.to_string())?;
    while !solver.should_stop() {
        solver.iterate().map_err(|e| e.to_string())?;
    }
    let visited = solver
        .memory()
        .records()
        .iter()
        .filter_map(|r| Some(VisitedPoint { x: pair(&r.solution), n: r.n, mean: r.mean()? }))
        .collect();
    let res = solver.finish();
    let trace = res
        .trace
        .checkpoints
        .iter()
        .map(|c| TracePoint {
            replications: c.replications,
            x: pair(&c.incumbent),
            mean: c.mean,
            true_value: tp3_true(c.incumbent.coords()[0], c.incumbent.coords()[1]),
        })
        .collect();
    Ok(DemoRun {
        best: pair(&res.best),
        best_mean: res.best_mean,
        best_n: res.best_n,
        true_value: tp3_true(res.best.coords()[0], res.best.coords()[1]),
        iterations: res.iterations,
        replications: res.replications,
        visited,
        trace,
    })
}

/// Counts of the value taken by one always-mutated component starting at
/// `value` in `[lower, upper]`; index `i` counts outcome `lower + i`.
pub fn mutation_counts(value: i64, lower: i64, upper: i64, samples: u32, seed: u64) -> Result<Vec<u32>, String> {
    let space = SearchSpace::new(vec![lower], vec![upper]).map_err(|e| e.to_string())?;
    if upper - lower > 100_000 {
        return Err("range too wide for a histogram".into());
    }
    let x = Solution::new(vec![value]);
    if !space.contains(&x) {
        return Err(format!("{value} is outside [{lower}, {upper}]"));
    }
    let cfg = MutationConfig::for_space(&space, 1.0);
    let mut rng = sub_stream(seed, 16);
    let mut counts = vec![0u32; (upper - lower + 1) as usize];
    for _ in 0..samples {
        let y = gaussian_mutate(&x, &space, &cfg, &mut rng);
        counts[(y.coords()[0] - lower) as usize] += 1;
    }
    Ok(counts)
}

#[wasm_bindgen(js_name = tp3Surface)]
pub fn tp3_surface(resolution: usize) -> Vec<f64> {
    surface(resolution)
}

/// JSON-encoded [`DemoRun`].
#[wasm_bindgen(js_name = runTp3)]
pub fn run_tp3_js(m: usize, p_cr: f64, p_mu: f64, noise_std: f64, budget: f64, seed: f64) -> Result<String, JsError> {
    let p = DemoParams { m, p_cr, p_mu, noise_std, budget: budget as u64, seed: seed as u64 };
    let run = run_tp3(&p).map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&run).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = mutationHistogram)]
pub fn mutation_histogram(value: i32, lower: i32, upper: i32, samples: u32, seed: f64) -> Result<Vec<u32>, JsError> {
    mutation_counts(value.into(), lower.into(), upper.into(), samples, seed as u64).map_err(|e| JsError::new(&e))
}
