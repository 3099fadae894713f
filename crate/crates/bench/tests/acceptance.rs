//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Pass criterion numbers or name
//! fragments as arguments to run a subset.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use gmab_bench::config::{ExperimentConfig, ProblemSpec};
use gmab_bench::fsc::{fsc_compare, mean_by_criterion};
use gmab_bench::oracle::mc_mean;
use gmab_bench::run_experiment;
use gmab_bench::runtime::{measure_iteration_runtime, median_near};
use gmab_core::genetic::{genetic_modification, MutationConfig};
use gmab_core::memory::avl::AvlMap;
use gmab_core::memory::rbtree::RbTree;
use gmab_core::memory::CodeLayout;
use gmab_core::problems::{NoisyQuadratic, Tp1, TP1_REFERENCE_OPTIMUM};
use gmab_core::rng::{stream, sub_stream, OperatorStreams, StreamKind};
use gmab_core::{
    FinalCriterion, GmabParams, LinearMemory, Memory, SearchSpace, Solution, Solver, StoppingBudget,
};
use rand::Rng;
use rayon::prelude::*;

type Check = fn() -> (bool, String);

fn experiment(problem: ProblemSpec, m: usize, budget: u64, runs: u64, checkpoints: Vec<u64>) -> ExperimentConfig {
    ExperimentConfig {
        problem,
        params: GmabParams { m, budget: StoppingBudget::replications(budget), checkpoints, ..Default::default() },
        runs,
        base_seed: 1,
        out: ".".into(),
        true_value_reps: 10_000,
        parallel: true,
    }
}

fn oracle_equivalence() -> (bool, String) {
    let space = SearchSpace::uniform(2, -10, 10).unwrap();
    let mismatches: Vec<u64> = (0..25u64)
        .into_par_iter()
        .filter(|&seed| {
            let mut p1 = NoisyQuadratic::new(space.clone(), vec![4, -3], 2.0);
            let mut p2 = p1.clone();
            let params = GmabParams { m: 10, seed, budget: StoppingBudget::iterations(200), ..Default::default() };
            let mut fast = Solver::new(&mut p1, params.clone()).unwrap();
            let mut slow = Solver::with_memory(&mut p2, params, LinearMemory::default()).unwrap();
            if fast.initialize().unwrap() != slow.initialize().unwrap() {
                return true;
            }
            for _ in 0..200 {
                if fast.iterate().unwrap() != slow.iterate().unwrap() {
                    return true;
                }
            }
            let same_final = FinalCriterion::ALL.iter().all(|&c| fast.incumbent(c) == slow.incumbent(c));
            let same_records = fast
                .memory()
                .records()
                .iter()
                .zip(slow.memory().records())
                .all(|(a, b)| a.solution == b.solution && a.n == b.n && a.r.to_bits() == b.r.to_bits());
            !(same_final && same_records && fast.memory().len() == slow.memory().len())
        })
        .collect();
    (mismatches.is_empty(), format!("25 seeds x 200 iterations, mismatching seeds {mismatches:?}"))
}

fn tp3_basin() -> (bool, String) {
    let cfg = experiment(ProblemSpec::Tp3 { noise_std: 1.0 }, 20, 10_000, 50, vec![3_000, 10_000]);
    let out = run_experiment(&cfg);
    let final_ok = out.summaries.iter().filter(|s| s.gap.is_some_and(|g| g < 2.0)).count();
    let early_ok = out.traces.iter().filter(|t| t.replications == 3_000 && t.gap.is_some_and(|g| g < 2.0)).count();
    let pass = out.failures.is_empty() && final_ok >= 48 && early_ok >= 45;
    (pass, format!("gap < 2 at 1e4: {final_ok}/50 (need 48), at 3000: {early_ok}/50 (need 45)"))
}

fn tp4_mean_gap(dims: usize, m: usize) -> f64 {
    let cfg = experiment(ProblemSpec::Tp4 { dims, noise_std: 1.0 }, m, 100_000, 20, vec![]);
    let out = run_experiment(&cfg);
    assert!(out.failures.is_empty(), "{:?}", out.failures);
    out.mean_final_gap().unwrap()
}

fn tp4_table() -> (bool, String) {
    let d5_50 = tp4_mean_gap(5, 50);
    let d5_100 = tp4_mean_gap(5, 100);
    let d20_100 = tp4_mean_gap(20, 100);
    let pass = d5_50 <= 5.0 && d5_100 <= 1.0 && d20_100 <= 450.0;
    (
        pass,
        format!("mean gaps D05/m50 {d5_50:.2} (<= 5), D05/m100 {d5_100:.2} (<= 1), D20/m100 {d20_100:.2} (<= 450)"),
    )
}

fn tp4_monotone_m() -> (bool, String) {
    let g: Vec<f64> = [20, 50, 100].iter().map(|&m| tp4_mean_gap(10, m)).collect();
    (g[2] <= g[1] && g[1] <= g[0], format!("D10 mean gaps m=20 {:.2}, m=50 {:.2}, m=100 {:.2}", g[0], g[1], g[2]))
}

fn tp1_ground_truth() -> (bool, String) {
    let tp1 = Tp1::default();
    let at_ref = {
        let mut p = tp1.clone();
        mc_mean(&mut p, &Solution::from([17, 36]), 1_000_000, &mut stream(11, StreamKind::Oracle)).unwrap()
    };
    let grid: Vec<(i64, i64)> = (1..=100).step_by(5).flat_map(|a| (1..=100).step_by(5).map(move |b| (a, b))).collect();
    let values: Vec<f64> = grid
        .par_iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let mut p = tp1.clone();
            mc_mean(&mut p, &Solution::from([a, b]), 10_000, &mut sub_stream(12, 16 + i as u64)).unwrap()
        })
        .collect();
    let (best_i, best_v) = values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    let (ga, gb) = grid[best_i];
    let cheb = (ga - 17).abs().max((gb - 36).abs());

    let cfg = experiment(ProblemSpec::Tp1, 20, 2_000, 50, vec![]);
    let out = run_experiment(&cfg);
    let good = out.summaries.iter().filter(|s| s.true_value.is_some_and(|v| v <= 108.0)).count();

    let pass = (at_ref - TP1_REFERENCE_OPTIMUM).abs() <= 0.5 && cheb <= 5 && good >= 45 && out.failures.is_empty();
    (
        pass,
        format!(
            "MC(17,36) = {at_ref:.3}; grid argmin ({ga},{gb}) = {best_v:.3}, distance {cheb}; \
             true cost <= 108 in {good}/50 runs (need 45)"
        ),
    )
}

fn fsc_ordering() -> (bool, String) {
    let cfg = experiment(ProblemSpec::Tp3 { noise_std: 1.0 }, 20, 10_000, 50, vec![]);
    let rows = fsc_compare(&cfg).unwrap();
    let m = mean_by_criterion(&rows);
    let (f1, f2, f3) = (m[0].1, m[1].1, m[2].1);
    let pass = f1 <= f3 + 0.1 && f3 <= f2 + 0.1;
    (pass, format!("mean fresh-MC gaps fsc1 {f1:.4}, fsc3 {f3:.4}, fsc2 {f2:.4}"))
}

fn runtime_flatness() -> (bool, String) {
    // Best of three independent measurements per memory size.
    let space = SearchSpace::uniform(10, -100, 100).unwrap();
    let mut small = f64::INFINITY;
    let mut large = f64::INFINITY;
    let mut reached = usize::MAX;
    for seed in 0..3 {
        let params = GmabParams { m: 20, seed, ..Default::default() };
        let rows = measure_iteration_runtime(&space, &params, 5_600).unwrap();
        reached = reached.min(rows.last().unwrap().visited);
        small = small.min(median_near(&rows, 1_000, 0.2).unwrap_or(f64::NAN));
        large = large.min(median_near(&rows, 100_000, 0.1).unwrap_or(f64::NAN));
    }
    if !(small.is_finite() && large.is_finite()) {
        return (false, format!("memory only reached {reached} solutions"));
    }
    let ratio = large / small;
    (
        ratio <= 3.0,
        format!("median per-iteration {:.1} us at |V|~1e3, {:.1} us at |V|~1e5, ratio {ratio:.2}", small * 1e6, large * 1e6),
    )
}

fn convergence_smoke() -> (bool, String) {
    let space = SearchSpace::uniform(1, 0, 20).unwrap();
    let results: Vec<(bool, bool)> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let mut p = NoisyQuadratic::new(space.clone(), vec![13], 1.0);
            let params = GmabParams { seed, budget: StoppingBudget::replications(1_000_000), ..Default::default() };
            let r = Solver::new(&mut p, params).unwrap().run().unwrap();
            (r.visited == 21, r.best == Solution::from([13]))
        })
        .collect();
    let full = results.iter().filter(|r| r.0).count();
    let found = results.iter().filter(|r| r.1).count();
    (full == 100 && found >= 99, format!("V = Theta in {full}/100 runs, argmin found in {found}/100 (need 99)"))
}

fn property_suites() -> (bool, String) {
    let mut failures = Vec::new();

    // Genetic closure and multi-generation reachability.
    let space = SearchSpace::new(vec![0, -3], vec![6, 3]).unwrap();
    let cfg = MutationConfig::for_space(&space, 0.25);
    let mut streams = OperatorStreams::new(5);
    let mut parents = vec![Solution::from([0, -3]), Solution::from([0, -2])];
    let mut seen: HashSet<Solution> = parents.iter().cloned().collect();
    for _ in 0..200_000 {
        let off = genetic_modification(&parents, &space, 1.0, &cfg, &mut streams).unwrap();
        if off.iter().any(|x| !space.contains(x)) {
            failures.push("offspring out of bounds");
            break;
        }
        seen.extend(off.iter().cloned());
        if off.len() == 2 {
            parents = off;
        }
    }
    if seen.len() != 49 {
        failures.push("not every lattice point reached");
    }

    // Code injectivity on random samples of the TP4_D20 box.
    let big = SearchSpace::uniform(20, -100, 100).unwrap();
    let layout = CodeLayout::new(&big);
    let mut rng = stream(8, StreamKind::Oracle);
    let mut xs = HashSet::new();
    let mut codes = HashSet::new();
    for _ in 0..100_000 {
        let x = big.sample_uniform(&mut rng);
        let c = layout.encode(&x);
        if xs.insert(x) != codes.insert(c) {
            failures.push("code collision");
            break;
        }
    }

    // Tree invariants under random insert/remove.
    let mut avl = AvlMap::new();
    let mut rb = RbTree::new();
    for i in 0..20_000u64 {
        let k: u32 = rng.random_range(0..5_000);
        avl.get_or_insert_with(k, || i);
        if rng.random_bool(0.6) {
            rb.insert(k, i);
        } else {
            rb.remove(&k);
        }
        if i % 1_000 == 0 && (avl.audit().is_err() || rb.audit().is_err()) {
            failures.push("tree audit failed");
            break;
        }
    }

    // Bookkeeping identity and determinism.
    let run = |seed| {
        let mut p = NoisyQuadratic::new(SearchSpace::uniform(3, -20, 20).unwrap(), vec![1, 2, 3], 3.0);
        let params = GmabParams { m: 12, seed, budget: StoppingBudget::iterations(300), ..Default::default() };
        let mut s = Solver::new(&mut p, params).unwrap();
        s.initialize().unwrap();
        let mut expected = 12u64;
        for _ in 0..300 {
            expected += s.iterate().unwrap().visited.len() as u64;
        }
        let sum: u64 = s.memory().records().iter().map(|r| r.n).sum();
        let ok = sum == expected && s.replications() == expected && s.memory().audit().is_ok();
        (ok, s.finish())
    };
    let (ok_a, a) = run(21);
    let (ok_b, b) = run(21);
    if !(ok_a && ok_b) {
        failures.push("bookkeeping identity violated");
    }
    if a.best != b.best || a.best_mean.to_bits() != b.best_mean.to_bits() || a.replications != b.replications {
        failures.push("same seed gave different runs");
    }

    let pass = failures.is_empty();
    (pass, if pass { "closure, reachability, injectivity, tree audits, bookkeeping, determinism".into() } else { failures.join(", ") })
}

fn main() -> ExitCode {
    let checks: [(u32, &str, Check); 9] = [
        (1, "oracle equivalence", oracle_equivalence),
        (2, "tp3 basin identification", tp3_basin),
        (3, "tp4 table reproduction", tp4_table),
        (4, "tp4 monotone m", tp4_monotone_m),
        (5, "tp1 ground truth", tp1_ground_truth),
        (6, "final selection ordering", fsc_ordering),
        (7, "runtime flatness", runtime_flatness),
        (8, "convergence smoke", convergence_smoke),
        (9, "property suites", property_suites),
    ];
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, check) in checks {
        if !filters.is_empty() && !filters.iter().any(|f| *f == id.to_string() || name.contains(f.as_str())) {
            continue;
        }
        let t = Instant::now();
        let (pass, detail) = check();
        println!(
            "criterion {id} {name}: {} ({detail}) [{:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
        failed += usize::from(!pass);
    }
    if failed > 0 {
        println!("acceptance: {failed} criterion(s) failed");
        ExitCode::FAILURE
    } else {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    }
}
