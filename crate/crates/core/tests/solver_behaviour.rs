use petrocheck_core::calculus::SpaceTimeFunction;
use petrocheck_core::domains::DomainProfile;
use petrocheck_core::solver::*;
use petrocheck_core::verify::*;

fn cusp() -> DomainProfile {
    DomainProfile::power(1.0, 0.5, -1.0).unwrap()
}

fn smooth_data() -> SpaceTimeFunction {
    SpaceTimeFunction::new("1 + r^2 + t/2", |r, t| 1.0 + r * r + 0.5 * t)
}

#[test]
fn restriction_reproduces_the_larger_run() {
    for &p in &[1.5, 3.0] {
        let cfg = SolverConfig { n_y: 32, eps_min: Some(1e-3), ..SolverConfig::default() };
        let big = solve_dirichlet(&cusp(), p, 2, &BoundaryData::new(smooth_data()), &cfg).unwrap();
        let half = cusp().with_t0(-0.5).unwrap();
        let start = big.row_at(-0.5).unwrap().to_vec();
        let sub_cfg = SolverConfig { checkpoints: Some(default_checkpoints(-1.0, -1e-3)), ..cfg.clone() };
        let small = solve_dirichlet(&half, p, 2, &BoundaryData::with_initial(smooth_data(), start), &sub_cfg).unwrap();
        let mut compared = 0;
        for (k, t) in small.t_nodes.iter().enumerate() {
            let row = big.row_at(*t).expect("shared time grid");
            for (a, b) in row.iter().zip(&small.values[k]) {
                assert!((a - b).abs() <= 1e-8, "p = {p}, t = {t}");
            }
            compared += 1;
        }
        assert!(compared > 10);
    }
}

#[test]
fn discrete_max_principle_holds() {
    let data = SpaceTimeFunction::new("oscillating", |r, t| (5.0 * r).sin() + (3.0 * t).cos());
    for &p in &[1.5, 2.0, 3.0] {
        let cfg = SolverConfig { n_y: 32, eps_min: Some(1e-2), ..SolverConfig::default() };
        let field = solve_dirichlet(&cusp(), p, 1, &BoundaryData::new(data.clone()), &cfg).unwrap();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (r, t) in boundary_samples(&cusp(), 2048, 1e-2) {
            lo = lo.min(data.eval(r, t));
            hi = hi.max(data.eval(r, t));
        }
        // the sampled boundary extremes bracket the data up to sampling error
        assert!(field.within(lo, hi, 1e-3), "p = {p}: {:?} vs [{lo}, {hi}]", field.min_max());
    }
}

#[test]
fn spatial_refinement_converges() {
    let mut values = Vec::new();
    for &n_y in &[16, 32, 64, 128] {
        let cfg = SolverConfig { n_y, eps_min: Some(1e-2), ..SolverConfig::default() };
        let field = solve_dirichlet(&cusp(), 3.0, 1, &BoundaryData::new(smooth_data()), &cfg).unwrap();
        values.push(field.final_axis_value());
    }
    let diffs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    assert!(diffs.windows(2).all(|w| w[1] < w[0]), "{diffs:?}");
    let order = (diffs[1] / diffs[2]).log2();
    assert!(order >= 0.9, "observed order {order}");
}

#[test]
fn regularization_is_immaterial() {
    for &p in &[1.5, 3.0] {
        let mut endpoints = Vec::new();
        for &eps in &[1e-7, 1e-8, 1e-9] {
            let cfg = SolverConfig { n_y: 32, eps_reg: eps, eps_min: Some(1e-3), ..SolverConfig::default() };
            let field = solve_dirichlet(&cusp(), p, 1, &BoundaryData::new(default_probe()), &cfg).unwrap();
            endpoints.push(field);
        }
        for other in &endpoints[1..] {
            let worst = endpoints[0]
                .values
                .iter()
                .flatten()
                .zip(other.values.iter().flatten())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(worst < 1e-4, "p = {p}: {worst}");
        }
    }
}

#[test]
fn zero_probe_attains() {
    let ladder = &default_ladder()[..2];
    let out = probe_origin(
        &cusp(),
        3.0,
        1,
        &SpaceTimeFunction::constant(0.0),
        ladder,
        &SolverConfig::default(),
        ProbeThresholds::default(),
    )
    .unwrap();
    assert_eq!(out.trend, Trend::Attains);
    assert!(out.runs.iter().all(|r| r.trace.iter().all(|(_, u)| *u == 0.0)));
}

#[test]
fn scaling_by_one_is_exact() {
    let cfg = SolverConfig { n_y: 16, eps_min: Some(1e-2), ..SolverConfig::default() };
    let rep = check_scaling_equivariance(&cusp(), 3.0, 1, 1.0, &smooth_data(), &cfg, 0.0).unwrap();
    assert_eq!(rep.worst_violation, 0.0);
    assert!(rep.pass);
}

#[test]
fn scaling_constants() {
    let cfg = SolverConfig { n_y: 16, eps_min: Some(1e-2), ..SolverConfig::default() };
    let rep = check_scaling_equivariance(&cusp(), 4.0, 2, 3.0, &SpaceTimeFunction::constant(0.4), &cfg, 1e-12).unwrap();
    assert!(rep.pass, "{}", rep.worst_violation);
}

#[test]
fn scaling_rejects_p_two() {
    let cfg = SolverConfig { n_y: 16, ..SolverConfig::default() };
    assert!(check_scaling_equivariance(&cusp(), 2.0, 1, 2.0, &smooth_data(), &cfg, 1e-3).is_err());
}

#[test]
fn comparison_cases() {
    let cfg = SolverConfig { n_y: 24, eps_min: Some(1e-2), ..SolverConfig::default() };
    let f = smooth_data();
    let (same, a, b) = check_comparison(&cusp(), 3.0, 1, &f, &f, &cfg, 0.0).unwrap();
    assert_eq!(same.worst_violation, 0.0);
    assert_eq!(a.values, b.values);

    let (rep, lo, hi) =
        check_comparison(&cusp(), 1.5, 2, &SpaceTimeFunction::constant(0.0), &SpaceTimeFunction::constant(1.0), &cfg, 1e-10)
            .unwrap();
    assert!(rep.pass);
    assert!(lo.within(0.0, 0.0, 1e-12) && hi.within(1.0, 1.0, 1e-12));

    let bump = SpaceTimeFunction::new("f + bump", |r, t| 1.0 + r * r + 0.5 * t + 0.1 * (1.0 + t));
    let (rep, u1, u2) = check_comparison(&cusp(), 3.0, 1, &f, &bump, &cfg, 1e-10).unwrap();
    assert!(rep.pass);
    // strictly ordered away from the initial slice
    for k in 1..u1.t_nodes.len() {
        for i in 0..u1.y_nodes.len() - 1 {
            assert!(u1.values[k][i] < u2.values[k][i] - 1e-10);
        }
    }

    let unordered = check_comparison(&cusp(), 3.0, 1, &bump, &f, &cfg, 1e-10);
    assert!(unordered.is_err());
}

#[test]
fn solver_config_rejects_nonsense() {
    let bad = [
        SolverConfig { n_y: 1, ..SolverConfig::default() },
        SolverConfig { c_step: 0.0, ..SolverConfig::default() },
        SolverConfig { rho_geo: 1.0, ..SolverConfig::default() },
        SolverConfig { eps_min: Some(-1.0), ..SolverConfig::default() },
        SolverConfig { store_every: 0, ..SolverConfig::default() },
    ];
    for cfg in bad {
        assert!(cfg.validate().is_err());
    }
}

#[test]
fn store_every_keeps_checkpoints() {
    let cfg = SolverConfig { n_y: 16, eps_min: Some(1e-3), store_every: 1000, ..SolverConfig::default() };
    let field = solve_dirichlet(&cusp(), 3.0, 1, &BoundaryData::new(smooth_data()), &cfg).unwrap();
    for t in [-0.5, -0.1, -0.01, -1e-3] {
        assert!(field.row_at(t).is_some());
    }
    assert!(field.t_nodes.len() < 10);
}

#[test]
fn unknown_cases_never_report_a_numeric_trend() {
    let outcome = ProbeOutcome {
        runs: Vec::new(),
        trend: Trend::Attains,
        thresholds: ProbeThresholds::default(),
    };
    let open = RegularityVerdict::from_table(1.5, 2.0 / 3.0).unwrap().with_probe(&outcome);
    assert_eq!(open.theorem_verdict, TheoremVerdict::Unknown);
    assert_eq!(open.numeric_trend, Some(Trend::Inconclusive));
    let settled = RegularityVerdict::from_table(3.0, 0.6).unwrap().with_probe(&outcome);
    assert_eq!(settled.numeric_trend, Some(Trend::Attains));
}
