use fracou::kernels::{EmpiricalKernel, MeanKernel};
use fracou::mixing::{sample_alphas, GammaMixing};
use fracou::simulator::{
    convolve_direct, empirical_mean_path, forward_increments, read_csv, simulate_component_paths,
    simulate_kernel_paths, simulate_limit_path, simulate_limit_paths, simulate_stationary_paths, write_csv,
    Convolver, DriverKey, ProcessKind, StationaryOptions, TimeGrid,
};
use fracou::special::FractionalOrder;
use proptest::prelude::*;

fn mk(rho: f64, mu: f64) -> MeanKernel<f64> {
    MeanKernel::new(FractionalOrder::new(rho).unwrap(), GammaMixing::new(mu, 1.0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fft_and_direct_convolution_agree(lags in prop::collection::vec(-2.0f64..2.0, 2..300), seed in any::<u64>()) {
        let n = lags.len() - 1;
        let dw = forward_increments(DriverKey::new(seed, 0), 0.01, n);
        let direct = convolve_direct(&lags, &dw);
        let fast = Convolver::new(lags.clone()).unwrap().convolve(&dw);
        let scale: f64 = lags.iter().map(|l| l.abs()).sum::<f64>() * 0.1 + 1e-300;
        for (a, b) in direct.iter().zip(&fast) {
            prop_assert!((a - b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn drivers_depend_only_on_their_key(seed in any::<u64>(), replica in 0u64..1000, n in 1usize..500) {
        let a: Vec<f64> = forward_increments(DriverKey::new(seed, replica), 0.5, n);
        let b: Vec<f64> = forward_increments(DriverKey::new(seed, replica), 0.5, n + 10);
        prop_assert_eq!(&a[..], &b[..n]);
    }

    #[test]
    fn csv_round_trip_is_exact(seed in any::<u64>(), paths in 1usize..5) {
        let grid = TimeGrid::new(0.0, 0.7, 13).unwrap();
        let e = simulate_limit_paths(&mk(1.0, 3.0), &grid, seed, paths).unwrap();
        let mut buf = Vec::new();
        write_csv(&e, &mut buf).unwrap();
        let (t, p) = read_csv(&buf[..]).unwrap();
        prop_assert_eq!(t, grid.nodes());
        for (i, row) in p.iter().enumerate() {
            prop_assert_eq!(&row[..], e.path(i));
        }
    }
}

#[test]
fn one_sided_paths_start_at_zero_and_repeat() {
    let grid = TimeGrid::new(0.0, 1.0, 200).unwrap();
    let m = mk(1.5, 4.0);
    let a = simulate_limit_paths(&m, &grid, 3, 4).unwrap();
    let b = simulate_limit_paths(&m, &grid, 3, 4).unwrap();
    assert_eq!(a, b);
    assert!(a.paths().all(|p| p[0] == 0.0));
    assert_eq!(simulate_limit_path(&m, &grid, 3).unwrap(), a.path(0));
}

#[test]
fn empirical_mean_is_the_kernel_path_on_the_shared_driver() {
    let grid = TimeGrid::new(0.0, 1.0, 300).unwrap();
    let rho = FractionalOrder::new(1.9).unwrap();
    let alphas = sample_alphas(&GammaMixing::new(4.0, 1.0).unwrap(), 12, 5);
    let comps = simulate_component_paths(&alphas, rho, &grid, 5).unwrap();
    let mean: Vec<f64> = empirical_mean_path(&comps).unwrap();
    let k = EmpiricalKernel::new(alphas, rho).unwrap();
    let direct = simulate_kernel_paths(&k, &grid, 5, 1, ProcessKind::EmpiricalMean).unwrap();
    for (a, b) in mean.iter().zip(direct.path(0)) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn long_horizon_limit_paths_use_the_table_consistently() {
    // beyond t = 4 the kernel is tabulated; the early part must not change
    let short = TimeGrid::new(0.0, 2.0, 400).unwrap();
    let long = TimeGrid::new(0.0, 8.0, 1600).unwrap();
    let m = mk(1.9, 4.0);
    let a = simulate_limit_path(&m, &short, 9).unwrap();
    let b = simulate_limit_path(&m, &long, 9).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn stationary_paths_are_shift_consistent() {
    // the same replica on two grids sharing nodes sees the same driver
    let opts = StationaryOptions::new(1e-3);
    let m = mk(1.0, 4.0);
    let g1 = TimeGrid::new(0.0, 1.0, 100).unwrap();
    let e = simulate_stationary_paths(&m, &g1, 2, 2, &opts).unwrap();
    assert!(e.provenance.contains_key("truncation"));
    assert!(e.path(0)[0] != 0.0);
    let again = simulate_stationary_paths(&m, &g1, 2, 2, &opts).unwrap();
    assert_eq!(e, again);
}

#[test]
fn rough_orders_are_refused() {
    let grid = TimeGrid::new(0.0, 1.0, 10).unwrap();
    assert!(simulate_limit_paths(&mk(0.7, 4.0), &grid, 1, 1).is_err());
    let shifted = TimeGrid::new(1.0, 2.0, 10).unwrap();
    assert!(simulate_limit_paths(&mk(1.5, 4.0), &shifted, 1, 1).is_err());
}
