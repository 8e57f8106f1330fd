use rayon::prelude::*;

use super::base_parameters;
use super::report::{Bound, ConvergenceReport, Criterion, ReportBuilder};
use super::stats::{mean_se, second_moment_se, skew_kurtosis};
use crate::error::Result;
use crate::kernels::{stationary_variance, variance_integral, MeanKernel};
use crate::mixing::require_condition;
use crate::simulator::{
    forward_increments, mean_kernel_lags, Convolver, DriverKey, StationaryEngine, StationaryOptions, TimeGrid,
};

const PROBE_TIMES: usize = 10;

/// Stationarity of `eta` on `grid` and convergence in law of `Y(t)` to it.
///
/// `eta` is sampled on replicas `0..n_mc`; `Y` is sampled on `[0, y_time]`
/// with the cell width of `grid`, on replicas `n_mc..2 n_mc`, so that the two
/// samples are independent.
pub fn check_stationarity(
    mk: &MeanKernel<f64>,
    grid: &TimeGrid<f64>,
    n_mc: usize,
    seed: u64,
    tol: f64,
    y_time: f64,
) -> Result<ConvergenceReport> {
    require_condition(&mk.mixing, mk.rho)?;
    let mut params = base_parameters(mk, Some(grid), &[], Some(n_mc), Some(seed));
    params.extra.insert("tol".into(), serde_json::json!(tol));
    params.extra.insert("y_time".into(), serde_json::json!(y_time));
    let mut rb = ReportBuilder::new("stationarity", params);
    let sv = stationary_variance(mk, tol)?;
    let sigma2 = sv.value;
    rb.summary("sigma2", sigma2);
    rb.summary("sigma2_half_width", sv.half_width);
    rb.bound(Bound::Value(sigma2));

    let engine = StationaryEngine::for_mean_kernel(mk, grid, &StationaryOptions::new(tol))?;
    let plan = engine.plan();
    rb.summary("truncation_horizon", plan.horizon);
    rb.summary("truncation_tail_bound", plan.tail_bound);
    let probes: Vec<usize> = (0..PROBE_TIMES)
        .map(|i| i * grid.n_steps() / (PROBE_TIMES - 1).max(1))
        .collect();
    let eta: Vec<Vec<f64>> = (0..n_mc as u64)
        .into_par_iter()
        .map(|p| {
            let path = engine.sample(DriverKey::new(seed, p)).pop().expect("one kernel");
            probes.iter().map(|&j| path[j]).collect()
        })
        .collect();
    let col = |j: usize| -> Vec<f64> { eta.iter().map(|r| r[j]).collect() };

    // flatness: paired differences of squares against the first probe
    let first = col(0);
    let mut worst = (0.0f64, 0.0f64, f64::NEG_INFINITY);
    for (j, &node) in probes.iter().enumerate() {
        let c = col(j);
        let (v, se) = second_moment_se(&c);
        rb.estimate("eta_variance", grid.node(node), v, se, Some(sigma2));
        let d: Vec<f64> = c.iter().zip(&first).map(|(a, b)| a * a - b * b).collect();
        let (m, s) = mean_se(&d);
        if j > 0 && m.abs() - 4.0 * s > worst.2 {
            worst = (m.abs(), s, m.abs() - 4.0 * s);
        }
    }
    rb.criterion(Criterion::new("eta variance flat across grid times", worst.0, tol, worst.1, 4.0));

    let pooled: Vec<f64> = eta.iter().flatten().copied().collect();
    let (_, se_first) = second_moment_se(&first);
    let (v_pool, _) = second_moment_se(&pooled);
    rb.summary("eta_variance_pooled", v_pool);
    // pooled samples share drivers; the single-time SE is a conservative stand-in
    rb.criterion(Criterion::close("eta variance matches sigma^2", v_pool, sigma2, tol, se_first, 3.0));

    let (sk, ku, sk_se, ku_se) = skew_kurtosis(&first);
    rb.summary("eta_skewness", sk);
    rb.summary("eta_excess_kurtosis", ku);
    rb.criterion(Criterion::new("eta skewness", sk.abs(), 0.0, sk_se, 4.0));
    rb.criterion(Criterion::new("eta excess kurtosis", ku.abs(), 0.0, ku_se, 4.0));

    // Y(y_time)
    let dt = grid.dt();
    let n_y = (y_time / dt).round().max(1.0) as usize;
    let y_end = dt * n_y as f64;
    let conv = Convolver::new(mean_kernel_lags(mk, dt, n_y)?)?;
    let y: Vec<f64> = (0..n_mc as u64)
        .into_par_iter()
        .map(|p| {
            let dw = forward_increments(DriverKey::new(seed, n_mc as u64 + p), dt, n_y);
            *conv.convolve(&dw).last().expect("nonempty")
        })
        .collect();
    let (vy, sy) = second_moment_se(&y);
    rb.estimate("y_variance", y_end, vy, sy, Some(sigma2));
    rb.criterion(Criterion::close(format!("Var Y({y_end}) matches sigma^2"), vy, sigma2, 0.0, sy, 3.0));
    let (sk, ku, sk_se, ku_se) = skew_kurtosis(&y);
    rb.criterion(Criterion::new("Y skewness", sk.abs(), 0.0, sk_se, 4.0));
    rb.criterion(Criterion::new("Y excess kurtosis", ku.abs(), 0.0, ku_se, 4.0));

    let ts: Vec<f64> = (1..=PROBE_TIMES).map(|i| y_end * i as f64 / PROBE_TIMES as f64).collect();
    let vs: Vec<f64> = ts.par_iter().map(|&t| variance_integral(mk, t)).collect::<Result<_>>()?;
    for (t, v) in ts.iter().zip(&vs) {
        rb.estimate("sigma2_t", *t, *v, 0.0, Some(sigma2));
    }
    rb.criterion(Criterion::holds(
        "sigma_t^2 nondecreasing and below sigma^2",
        vs.windows(2).all(|w| w[0] <= w[1]) && vs.last().is_some_and(|&v| v <= sigma2 + sv.half_width),
    ));

    if mk.rho.value() == 1.0 {
        let closed = mk.mixing.lambda() / (2.0 * mk.mixing.mu() - 1.0);
        rb.summary("sigma2_closed_form", closed);
        rb.criterion(Criterion::close("sigma^2 matches closed form", sigma2, closed, sv.half_width + 1e-12, 0.0, 0.0));
        rb.criterion(Criterion::close(format!("Var Y({y_end}) matches closed form"), vy, closed, 0.0, sy, 3.0));
    }
    Ok(rb.finish())
}
