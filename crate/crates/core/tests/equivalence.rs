use gmab_core::problems::NoisyQuadratic;
use gmab_core::{
    FinalCriterion, GmabParams, LinearMemory, Memory, SearchSpace, Solver, StoppingBudget,
};

fn params(seed: u64, m: usize) -> GmabParams {
    GmabParams { m, seed, budget: StoppingBudget::iterations(u64::MAX), ..Default::default() }
}

/// Steps both solvers in lockstep and compares every report bit for bit.
fn lockstep(noise_std: f64, seed: u64, m: usize, iterations: u64) {
    let space = SearchSpace::uniform(2, -10, 10).unwrap();
    let mut p1 = NoisyQuadratic::new(space.clone(), vec![3, -4], noise_std);
    let mut p2 = p1.clone();
    let mut fast = Solver::new(&mut p1, params(seed, m)).unwrap();
    let mut slow = Solver::with_memory(&mut p2, params(seed, m), LinearMemory::default()).unwrap();
    assert_eq!(fast.initialize().unwrap(), slow.initialize().unwrap());
    for _ in 0..iterations {
        let a = fast.iterate().unwrap();
        let b = slow.iterate().unwrap();
        assert_eq!(a, b, "seed {seed}");
        for c in FinalCriterion::ALL {
            assert_eq!(fast.incumbent(c), slow.incumbent(c));
        }
    }
    let (ra, rb) = (fast.memory().records(), slow.memory().records());
    assert_eq!(ra.len(), rb.len());
    for (x, y) in ra.iter().zip(rb) {
        assert_eq!(x.solution, y.solution);
        assert_eq!(x.n, y.n);
        assert_eq!(x.r.to_bits(), y.r.to_bits());
    }
    fast.memory().audit().unwrap();
}

#[test]
fn tree_memory_matches_linear_scan_with_noise() {
    for seed in 0..5 {
        lockstep(1.0, seed, 10, 200);
    }
}

#[test]
fn tree_memory_matches_linear_scan_with_heavy_ties() {
    // Noise-free integer objective: many equal sample means at the elite cut.
    for seed in 0..5 {
        lockstep(0.0, seed, 20, 200);
    }
}

#[test]
fn linear_memory_final_answer_matches() {
    let space = SearchSpace::uniform(1, 0, 20).unwrap();
    let run = |linear: bool| {
        let mut p = NoisyQuadratic::new(space.clone(), vec![7], 1.0);
        let params = GmabParams { m: 6, seed: 11, budget: StoppingBudget::replications(5_000), ..Default::default() };
        if linear {
            Solver::with_memory(&mut p, params, LinearMemory::default()).unwrap().run().unwrap()
        } else {
            Solver::new(&mut p, params).unwrap().run().unwrap()
        }
    };
    let (a, b) = (run(false), run(true));
    assert_eq!(a.best, b.best);
    assert_eq!(a.best_mean.to_bits(), b.best_mean.to_bits());
    assert_eq!(a.replications, b.replications);
}
