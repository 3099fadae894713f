use gmab_core::problems::{
    parse_reply, tp3_true, tp4_component, tp4_true, ExternalSim, InitialInventory, Tp1, Tp1Config, Tp3, Tp4,
    TP1_REFERENCE_OPTIMUM,
};
use gmab_core::rng::{stream, StreamKind};
use gmab_core::{EvalError, GmabParams, Objective, SearchSpace, Solution, Solver, StoppingBudget};
use std::time::Duration;

#[test]
fn tp3_values() {
    assert!((tp3_true(9000, 9000) + 20.0).abs() < 1e-12);
    assert_eq!(tp3_true(0, 0), 0.0);
    // -10 * (1 + 2^-0.32)
    assert!((tp3_true(9000, 7000) + 18.01071).abs() < 1e-4);
    assert!((tp3_true(7000, 9000) + 18.01071).abs() < 1e-4);
}

#[test]
fn tp3_symmetric() {
    let mut rng = stream(4, StreamKind::Oracle);
    let space = SearchSpace::uniform(2, 0, 10_000).unwrap();
    for _ in 0..1000 {
        let x = space.sample_uniform(&mut rng);
        let c = x.coords();
        assert_eq!(tp3_true(c[0], c[1]), tp3_true(c[1], c[0]));
    }
}

#[test]
fn tp3_global_optimum_is_unique_on_lattice() {
    // Separable: scan one coordinate.
    let best = (0..=10_000).map(|v| tp3_true(v, 0)).fold(f64::INFINITY, f64::min);
    assert!((best + 10.0).abs() < 1e-12);
    let argmins: Vec<i64> = (0..=10_000).filter(|&v| tp3_true(v, 0) == best).collect();
    assert_eq!(argmins, vec![9000]);
}

#[test]
fn tp4_values() {
    assert!((tp4_true(&Solution::new(vec![56; 5])) + 2500.218).abs() < 1e-3);
    assert!((tp4_true(&Solution::new(vec![-38; 5])) + 1500.0).abs() < 1e-6);
    assert!((Tp4::new(20, 1.0).optimum_value().unwrap() + 10000.87).abs() < 0.01);
    assert!((Tp4::new(5, 1.0).optimum_value().unwrap() + 2500.218).abs() < 1e-3);
    assert_eq!(Tp4::new(5, 1.0).optimum_value(), Tp4::new(5, 1.0).true_value(&Solution::new(vec![56; 5])));
}

#[test]
fn tp4_local_optima_structure() {
    for dims in 1..=3usize {
        let problem = Tp4::new(dims, 0.0);
        let mut best = (f64::INFINITY, Vec::new());
        for mask in 0..(1u32 << dims) {
            let x: Vec<i64> = (0..dims).map(|d| if mask >> d & 1 == 1 { 56 } else { -38 }).collect();
            let g = tp4_true(&Solution::new(x.clone()));
            for d in 0..dims {
                for step in [-1, 1] {
                    let mut y = x.clone();
                    y[d] += step;
                    assert!(tp4_true(&Solution::new(y)) > g, "{x:?} is not a local minimum");
                }
            }
            if g < best.0 {
                best = (g, x);
            }
        }
        assert_eq!(best.1, vec![56; dims]);
        assert_eq!(Some(best.0), problem.optimum_value());
    }
    assert!(tp4_component(56) < tp4_component(-38));
}

fn mean_of<O: Objective>(problem: &mut O, x: &Solution, n: usize, seed: u64) -> f64 {
    let mut rng = stream(seed, StreamKind::Noise);
    (0..n).map(|_| problem.simulate(x, &mut rng).unwrap()).sum::<f64>() / n as f64
}

#[test]
fn noisy_problems_are_consistent() {
    let n = 10_000;
    let mut tp3 = Tp3::default();
    for x in [[9000, 9000], [1234, 5678], [0, 0]] {
        let x = Solution::from(x);
        let err = mean_of(&mut tp3, &x, n, 1) - tp3.true_value(&x).unwrap();
        assert!(err.abs() < 3.0 / (n as f64).sqrt(), "{err}");
    }
    for noise in [1.0, 500.0] {
        let mut tp4 = Tp4::new(5, noise);
        let x = Solution::new(vec![56, -38, 0, 10, -100]);
        let err = mean_of(&mut tp4, &x, n, 2) - tp4.true_value(&x).unwrap();
        assert!(err.abs() < 3.0 * noise / (n as f64).sqrt(), "{err}");
    }
}

#[test]
fn tp1_zero_demand_costs_holding_only() {
    let cfg = Tp1Config { demand_mean: 0.0, ..Default::default() };
    let mut tp1 = Tp1::new(cfg).unwrap();
    let mut rng = stream(0, StreamKind::Noise);
    for (s, gap) in [(17, 36), (1, 1), (100, 100)] {
        let v = tp1.simulate(&Solution::from([s, gap]), &mut rng).unwrap();
        assert_eq!(v, (s + gap) as f64);
    }
}

#[test]
fn tp1_costs_non_negative() {
    let mut tp1 = Tp1::default();
    let mut rng = stream(3, StreamKind::Noise);
    let space = tp1.space().clone();
    for _ in 0..2000 {
        let x = space.sample_uniform(&mut rng);
        assert!(tp1.simulate(&x, &mut rng).unwrap() >= 0.0);
    }
}

#[test]
fn tp1_reference_point_roughly_right() {
    let mut tp1 = Tp1::default();
    let est = mean_of(&mut tp1, &Solution::from([17, 36]), 50_000, 9);
    assert!((est - TP1_REFERENCE_OPTIMUM).abs() < 1.0, "{est}");
    assert_eq!(tp1.optimum_value(), Some(TP1_REFERENCE_OPTIMUM));
    let other = Tp1::new(Tp1Config { lead_time: 1, ..Default::default() }).unwrap();
    assert_eq!(other.optimum_value(), None);
}

#[test]
fn tp1_lead_time_and_initial_level() {
    // With a lead time nothing arrives in the first period, so starting empty
    // the first period is pure backlog.
    let cfg = Tp1Config {
        horizon: 1,
        demand_mean: 0.0,
        initial_inventory: InitialInventory::Level(-4),
        lead_time: 1,
        ..Default::default()
    };
    let tp1 = Tp1::new(cfg.clone()).unwrap();
    let mut rng = stream(0, StreamKind::Noise);
    // Order 10 - (-4) = 14 units: 32 + 3 * 14 fixed and variable, 5 * 4 shortage.
    assert_eq!(tp1.simulate_policy(5, 10, &mut rng), 32.0 + 42.0 + 20.0);
    let instant = Tp1::new(Tp1Config { lead_time: 0, ..cfg }).unwrap();
    assert_eq!(instant.simulate_policy(5, 10, &mut rng), 32.0 + 42.0 + 10.0);
    assert!(Tp1::new(Tp1Config { horizon: 0, ..Default::default() }).is_err());
    assert!(Tp1::new(Tp1Config { holding_cost: -1.0, ..Default::default() }).is_err());
}

const STUB: &str = r#"echo "GMAB/1 2 1 1 100 100"
while read cmd a b; do
  case "$cmd" in
    EVAL) if [ "$a" = 13 ]; then echo "OBS abc"; elif [ "$a" = 14 ]; then exit 3; else echo "OBS $((a + b)).25"; fi ;;
    END) exit 0 ;;
  esac
done"#;

fn stub() -> ExternalSim {
    ExternalSim::spawn("sh", &["-c".to_string(), STUB.to_string()], Duration::from_secs(10)).unwrap()
}

#[test]
fn external_round_trip() {
    let mut sim = stub();
    assert_eq!(sim.space(), &SearchSpace::uniform(2, 1, 100).unwrap());
    let mut rng = stream(0, StreamKind::Noise);
    assert_eq!(sim.simulate(&Solution::from([17, 36]), &mut rng).unwrap(), 53.25);
    assert!(matches!(
        sim.simulate(&Solution::from([13, 1]), &mut rng),
        Err(EvalError::Protocol { payload, .. }) if payload == "OBS abc"
    ));
    assert!(matches!(sim.simulate(&Solution::from([14, 1]), &mut rng), Err(EvalError::Exited(_))));
    assert!(parse_reply("OBS 104.2").is_ok());
}

#[test]
fn external_solver_run() {
    let mut sim = stub();
    let params = GmabParams { m: 4, budget: StoppingBudget::iterations(3), ..Default::default() };
    let res = Solver::new(&mut sim, params).map(|s| s.run());
    // Either finishes, or hits one of the scripted failure points.
    match res.unwrap() {
        Ok(r) => assert!(r.replications >= 4),
        Err(f) => assert!(matches!(f.error, gmab_core::GmabError::Eval(_))),
    }
}

#[test]
fn external_timeout_and_bad_handshake() {
    let slow = ExternalSim::spawn("sh", &["-c".into(), "sleep 5".into()], Duration::from_millis(200));
    assert!(matches!(slow, Err(EvalError::Timeout(_)) | Err(EvalError::Exited(_))));
    let bad = ExternalSim::spawn("sh", &["-c".into(), "echo HELLO".into()], Duration::from_secs(5));
    assert!(matches!(bad, Err(EvalError::Protocol { .. })));
    assert!(matches!(ExternalSim::from_command_line("   ", Duration::from_secs(1)), Err(EvalError::Io(_))));
    assert!(ExternalSim::from_command_line("/nonexistent/simulator", Duration::from_secs(1)).is_err());
}
