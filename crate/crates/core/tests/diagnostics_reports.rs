use fracou::diagnostics::{
    check_cauchy_decay, check_l2_sup_convergence, check_mixing_condition_remark, check_pathwise_conditions,
    check_stationarity, check_tightness, ConvergenceReport, Verdict,
};
use fracou::kernels::MeanKernel;
use fracou::mixing::GammaMixing;
use fracou::simulator::TimeGrid;
use fracou::special::FractionalOrder;

fn mk(rho: f64, mu: f64) -> MeanKernel<f64> {
    MeanKernel::new(FractionalOrder::new(rho).unwrap(), GammaMixing::new(mu, 1.0).unwrap())
}

#[test]
fn reports_round_trip_through_json() {
    let grid = TimeGrid::new(0.0, 1.0, 100).unwrap();
    let r = check_tightness(&mk(1.5, 4.0), &grid, &[5, 50], 100, 2).unwrap();
    let s = serde_json::to_string(&r).unwrap();
    let back: ConvergenceReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back, r);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    for key in ["check_name", "parameters", "estimates", "criteria", "verdict", "runtime_seconds"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["parameters"]["n_list"], serde_json::json!([5, 50]));
}

#[test]
fn reports_are_reproducible() {
    let grid = TimeGrid::new(0.0, 1.0, 100).unwrap();
    let a = check_l2_sup_convergence(&mk(1.5, 4.0), &[5, 50], &grid, 200, 4).unwrap();
    let b = check_l2_sup_convergence(&mk(1.5, 4.0), &[5, 50], &grid, 200, 4).unwrap();
    assert_eq!(a.without_timing(), b.without_timing());
    let c = check_l2_sup_convergence(&mk(1.5, 4.0), &[5, 50], &grid, 200, 5).unwrap();
    assert_ne!(a.estimates, c.estimates);
}

#[test]
fn rejected_inputs() {
    let grid = TimeGrid::new(0.0, 1.0, 10).unwrap();
    assert!(check_pathwise_conditions(&mk(1.0, 4.0), &[10], &grid, 1).is_err());
    assert!(check_tightness(&mk(1.5, 4.0), &grid, &[10, 10], 10, 1).is_err());
    // mu <= 1/(2 rho)
    assert!(matches!(
        check_stationarity(&mk(1.0, 0.4), &grid, 10, 1, 1e-3, 1.0),
        Err(fracou::Error::Condition { .. })
    ));
    assert!(check_cauchy_decay(&mk(1.0, 0.4), &[1.0, 2.0], 0, 1, 0.1, 0.0).is_err());
}

#[test]
fn cauchy_slope_for_exponential_order() {
    let ts: Vec<f64> = (0..8).map(|k| 10.0 * 2f64.powi(k)).collect();
    let r = check_cauchy_decay(&mk(1.0, 0.7), &ts, 0, 1, 0.1, 0.0).unwrap();
    // mu < 1: G ~ t^{-mu}, increments ~ t^{1 - 2 mu}
    assert!((r.summary["slope"] - (1.0 - 1.4)).abs() < 0.1, "{}", r.summary["slope"]);
    assert_eq!(r.verdict, Verdict::Pass);
}

#[test]
fn remark_examples() {
    let run = |mu: f64| {
        check_mixing_condition_remark(&GammaMixing::new(mu, 1.0).unwrap(), FractionalOrder::new(1.9).unwrap())
            .unwrap()
    };
    assert_eq!(run(3.0).summary["moment_finite"], 1.0);
    assert_eq!(run(1.0).summary["moment_finite"], 0.0);
    assert!(run(3.0).notes.iter().any(|n| n.contains("mu > 2/rho")));
}
