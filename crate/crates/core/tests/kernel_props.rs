use fracou::kernels::{
    bound_constants, empirical_kernel, mean_kernel, resolvent, resolvent_l2_norm, stationary_variance,
    tail_variance_bound, truncation_horizon, variance_integral, MeanKernel, ResolventKernel,
};
use fracou::mixing::GammaMixing;
use fracou::special::{ml_one, FractionalOrder};
use proptest::prelude::*;

fn order(rho: f64) -> FractionalOrder<f64> {
    FractionalOrder::new(rho).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resolvent_starts_at_one(rho in 0.3f64..2.0, alpha in 0.0f64..50.0) {
        prop_assert_eq!(resolvent(&ResolventKernel::new(alpha, order(rho)).unwrap(), 0.0).unwrap(), 1.0);
    }

    #[test]
    fn equal_rates_give_the_resolvent(rho in 1.0f64..2.0, alpha in 0.1f64..10.0, t in 0.0f64..10.0) {
        let r = resolvent(&ResolventKernel::new(alpha, order(rho)).unwrap(), t).unwrap();
        let f = empirical_kernel(&[alpha; 7], order(rho), t).unwrap();
        prop_assert!((r - f).abs() <= 1e-14 * (1.0 + r.abs()) * 7.0);
    }

    #[test]
    fn exponential_order_mean_kernel_is_closed_form(mu in 0.1f64..10.0, lambda in 0.1f64..5.0, t in 0.0f64..100.0) {
        let mk = MeanKernel::new(order(1.0), GammaMixing::new(mu, lambda).unwrap());
        let want = (1.0 + t / lambda).powf(-mu);
        prop_assert!((mean_kernel(&mk, t).unwrap() - want).abs() <= 1e-13 * want.max(1e-300) + 1e-300);
    }

    #[test]
    fn mittag_leffler_respects_its_global_bound(rho in prop::sample::select(vec![1.1, 1.5, 1.9]), lx in -3.0f64..4.0) {
        let x = 10f64.powf(lx);
        let m = bound_constants(order(rho)).unwrap().m;
        let v = ml_one(order(rho), x).unwrap().value;
        prop_assert!(v.abs() * (1.0 + x) <= m);
    }

    #[test]
    fn mean_kernel_stays_in_unit_interval_for_completely_monotone_orders(rho in 0.3f64..1.0, t in 0.0f64..20.0) {
        let mk = MeanKernel::new(order(rho), GammaMixing::new(2.0, 1.0).unwrap());
        let g = mean_kernel(&mk, t).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&g));
    }
}

#[test]
fn variance_integral_is_nondecreasing() {
    let mk = MeanKernel::new(order(1.9), GammaMixing::new(4.0, 1.0).unwrap());
    let mut prev = 0.0;
    for i in 1..=20 {
        let v = variance_integral(&mk, 0.5 * i as f64).unwrap();
        assert!(v >= prev);
        prev = v;
    }
}

#[test]
fn tail_bound_decreases_and_dominates_computed_tails() {
    for (rho, mu) in [(1.0, 4.0), (1.5, 0.75), (1.9, 4.0), (1.9, 0.4), (1.2, 1.0)] {
        let mk = MeanKernel::new(order(rho), GammaMixing::new(mu, 1.0).unwrap());
        let mut prev = f64::INFINITY;
        for t in [5.0, 10.0, 40.0, 160.0] {
            let b = tail_variance_bound(&mk, t).unwrap();
            assert!(b < prev, "rho={rho} mu={mu} t={t}");
            prev = b;
        }
        let partial = variance_integral(&mk, 200.0).unwrap() - variance_integral(&mk, 10.0).unwrap();
        assert!(partial <= tail_variance_bound(&mk, 10.0).unwrap(), "rho={rho} mu={mu}");
    }
}

#[test]
fn stationary_variance_for_exponential_order() {
    for (mu, lambda) in [(4.0, 1.0), (1.5, 2.0), (2.5, 0.5)] {
        let mk = MeanKernel::new(order(1.0), GammaMixing::new(mu, lambda).unwrap());
        let sv = stationary_variance(&mk, 1e-6).unwrap();
        let want = lambda / (2.0 * mu - 1.0);
        assert!((sv.value - want).abs() <= sv.half_width + 1e-9, "mu={mu}: {} vs {want}", sv.value);
    }
    // tail ~ T^{1 - 2 mu}: 1e-6 needs a horizon beyond 1e9
    let slow = MeanKernel::new(order(1.0), GammaMixing::new(0.8, 0.5).unwrap());
    assert!(matches!(stationary_variance(&slow, 1e-6), Err(fracou::Error::Truncation { .. })));
}

#[test]
fn truncation_horizon_meets_its_tolerance() {
    let mk = MeanKernel::new(order(1.9), GammaMixing::new(4.0, 1.0).unwrap());
    let h = truncation_horizon(&mk, 1e-4, 1e9).unwrap();
    assert!(tail_variance_bound(&mk, h).unwrap() < 1e-4);
    assert!(tail_variance_bound(&mk, 0.98 * h).unwrap() >= 1e-4);
    let rough = MeanKernel::new(order(1.9), GammaMixing::new(0.3, 1.0).unwrap());
    assert!(truncation_horizon(&rough, 1e-4, 1e9).is_err());
}

#[test]
fn resolvent_norm_scales_with_rate() {
    let a = resolvent_l2_norm(&ResolventKernel::new(1.0, order(1.5)).unwrap()).unwrap();
    let b = resolvent_l2_norm(&ResolventKernel::new(8.0, order(1.5)).unwrap()).unwrap();
    assert!((b * 8f64.powf(1.0 / 1.5) - a).abs() < 1e-10 * a);
    // rho = 1: int exp(-2 alpha t) = 1 / (2 alpha)
    let e = resolvent_l2_norm(&ResolventKernel::new(3.0, order(1.0)).unwrap()).unwrap();
    assert!((e - 1.0 / 6.0).abs() < 1e-10);
}
