use std::collections::HashSet;

use gmab_core::genetic::{genetic_modification, MutationConfig};
use gmab_core::problems::{NoisyQuadratic, Tp4};
use gmab_core::rng::{stream, OperatorStreams, StreamKind};
use gmab_core::{GmabParams, Memory, SearchSpace, Solution, Solver, StoppingBudget};
use proptest::prelude::*;

fn boxes() -> impl Strategy<Value = SearchSpace> {
    proptest::collection::vec((-20i64..20, 1i64..30), 1..4).prop_map(|b| {
        SearchSpace::new(b.iter().map(|x| x.0).collect(), b.iter().map(|x| x.0 + x.1).collect()).unwrap()
    })
}

fn distinct_elites(space: &SearchSpace, m: usize, seed: u64) -> Vec<Solution> {
    let mut rng = stream(seed, StreamKind::InitialSample);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    while out.len() < m {
        let x = space.sample_uniform(&mut rng);
        if seen.insert(x.clone()) {
            out.push(x);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn offspring_stay_in_bounds_and_distinct(
        space in boxes(),
        half_m in 1usize..6,
        p_cr in 0.0f64..=1.0,
        p_mu in 0.01f64..=1.0,
        seed in any::<u64>(),
    ) {
        let m = 2 * half_m;
        prop_assume!(space.cardinality() > (m as u64).into());
        let elites = distinct_elites(&space, m, seed);
        let cfg = MutationConfig::for_space(&space, p_mu);
        let mut streams = OperatorStreams::new(seed);
        for _ in 0..20 {
            let off = genetic_modification(&elites, &space, p_cr, &cfg, &mut streams).unwrap();
            prop_assert!(!off.is_empty() && off.len() <= m);
            let unique: HashSet<_> = off.iter().collect();
            prop_assert_eq!(unique.len(), off.len());
            for x in &off {
                prop_assert!(space.contains(x));
            }
        }
    }

    #[test]
    fn solver_bookkeeping(
        space in boxes(),
        half_m in 1usize..5,
        iterations in 0u64..40,
        seed in any::<u64>(),
    ) {
        let m = 2 * half_m;
        prop_assume!(space.cardinality() > (m as u64).into());
        let center = space.lower().to_vec();
        let mut p = NoisyQuadratic::new(space.clone(), center, 2.0);
        let params = GmabParams { m, seed, budget: StoppingBudget::iterations(iterations), ..Default::default() };
        let mut s = Solver::new(&mut p, params).unwrap();
        s.initialize().unwrap();
        let mut total = m as u64;
        for _ in 0..iterations {
            let before: Vec<(u64, f64)> = s
                .memory()
                .records()
                .iter()
                .map(|r| (r.n, r.mean().unwrap()))
                .collect();
            let rep = s.iterate().unwrap();
            // E_k holds the m best means from before the iteration.
            let worst_elite = rep.elites.iter().map(|p| before[p.0].1).fold(f64::NEG_INFINITY, f64::max);
            for (i, (_, mean)) in before.iter().enumerate() {
                if !rep.elites.iter().any(|p| p.0 == i) {
                    prop_assert!(*mean >= worst_elite);
                }
            }
            prop_assert_eq!(rep.elites.len(), m);
            prop_assert!(rep.visited.len() >= m && rep.visited.len() <= 2 * m);
            prop_assert!(rep.visited.windows(2).all(|w| w[0] < w[1]));
            total += rep.visited.len() as u64;
        }
        let n_sum: u64 = s.memory().records().iter().map(|r| r.n).sum();
        prop_assert_eq!(n_sum, total);
        prop_assert_eq!(s.replications(), total);
        prop_assert!(s.memory().records().iter().all(|r| r.n >= 1 && space.contains(&r.solution)));
        prop_assert_eq!(s.memory().sat_len(), s.memory().len());
        s.memory().audit().map_err(TestCaseError::fail)?;
    }
}

#[test]
fn every_point_is_reachable_over_generations() {
    // Offspring become the next parents; every lattice point must show up.
    let space = SearchSpace::uniform(2, 0, 6).unwrap();
    let cfg = MutationConfig::for_space(&space, 0.25);
    let mut streams = OperatorStreams::new(1);
    let mut parents = vec![Solution::from([0, 0]), Solution::from([0, 1])];
    let mut seen: HashSet<Solution> = parents.iter().cloned().collect();
    for _ in 0..200_000 {
        let off = genetic_modification(&parents, &space, 1.0, &cfg, &mut streams).unwrap();
        seen.extend(off.iter().cloned());
        if off.len() == 2 {
            parents = off;
        }
        if seen.len() == 49 {
            break;
        }
    }
    assert_eq!(seen.len(), 49);
}

#[test]
fn budget_overshoot_bounded_on_tp4() {
    for (seed, budget) in [(1, 1_000), (2, 2_345), (3, 10_000)] {
        let mut p = Tp4::new(5, 1.0);
        let params = GmabParams { m: 50, seed, budget: StoppingBudget::replications(budget), ..Default::default() };
        let r = Solver::new(&mut p, params).unwrap().run().unwrap();
        assert!(r.replications >= budget && r.replications <= budget + 99);
    }
}

#[test]
fn identical_seeds_identical_runs() {
    let run = |seed: u64, noise_seed: Option<u64>| {
        let mut p = Tp4::new(5, 1.0);
        let params = GmabParams {
            m: 20,
            seed,
            noise_seed,
            budget: StoppingBudget::replications(5_000),
            checkpoints: vec![100, 1000, 5000],
            ..Default::default()
        };
        Solver::new(&mut p, params).unwrap().run().unwrap()
    };
    let a = run(42, None);
    let b = run(42, None);
    assert_eq!(a.best, b.best);
    assert_eq!(a.best_mean.to_bits(), b.best_mean.to_bits());
    assert_eq!(a.trace, b.trace);
    assert_eq!((a.iterations, a.replications, a.visited), (b.iterations, b.replications, b.visited));
    let c = run(43, None);
    assert_ne!(a.trace, c.trace);
    let d = run(42, Some(7));
    assert_ne!(a.trace, d.trace);
}

#[test]
fn wall_clock_budget_stops() {
    let mut p = Tp4::new(5, 1.0);
    let params = GmabParams { m: 20, budget: StoppingBudget::wall_seconds(0.05), ..Default::default() };
    let r = Solver::new(&mut p, params).unwrap().run().unwrap();
    assert!(r.wall_seconds >= 0.05 && r.iterations > 0);
}
