use rayon::prelude::*;

use super::report::{Bound, ConvergenceReport, Criterion, ReportBuilder};
use super::stats::{log_log_slope, mean_se};
use super::{base_parameters, sorted_increasing};
use crate::error::Result;
use crate::kernels::{kernel_square_integral, mean_kernel, EmpiricalKernel, FnKernel, Kernel, MeanKernel};
use crate::mixing::sample_alphas;
use crate::simulator::{forward_increments, mean_kernel_lags, refuse_rough_order, Convolver, DriverKey, TimeGrid};

const INDEPENDENT_PATHS: usize = 500;

/// `E sup_t |Y_n(t) - Y(t)|^2` on common drivers against
/// `4 int_0^T |f_n - G|^2`.
///
/// The rates are the first `n` draws of one sequence, so the `f_n` are nested.
pub fn check_l2_sup_convergence(
    mk: &MeanKernel<f64>,
    n_list: &[usize],
    grid: &TimeGrid<f64>,
    n_mc: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    sorted_increasing(n_list)?;
    refuse_rough_order(mk.rho)?;
    grid.require_origin()?;
    let mut rb = ReportBuilder::new("l2_sup_convergence", base_parameters(mk, Some(grid), n_list, Some(n_mc), Some(seed)));
    let (dt, n_steps) = (grid.dt(), grid.n_steps());
    let n_max = *n_list.last().expect("nonempty");
    let alphas = sample_alphas(&mk.mixing, n_max, seed);
    let g_lags = mean_kernel_lags(mk, dt, n_steps)?;

    let mut convolvers = Vec::with_capacity(n_list.len());
    let mut gaps = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let fk = EmpiricalKernel::new(alphas[..n].to_vec(), mk.rho)?;
        let lags: Vec<f64> = (0..=n_steps)
            .into_par_iter()
            .map(|m| Ok(fk.eval(dt * m as f64)? - g_lags[m]))
            .collect::<Result<_>>()?;
        convolvers.push(Convolver::new(lags)?);
        let diff = FnKernel(|t: f64| Ok(fk.eval(t)? - mean_kernel(mk, t)?));
        gaps.push(kernel_square_integral(&diff, 0.0, grid.t_end())?);
    }

    let sups: Vec<Vec<f64>> = (0..n_mc as u64)
        .into_par_iter()
        .map(|p| {
            let dw = forward_increments(DriverKey::new(seed, p), dt, n_steps);
            convolvers
                .iter()
                .map(|c| c.convolve(&dw).iter().fold(0.0f64, |m, x| m.max(x * x)))
                .collect()
        })
        .collect();

    let mut stats = Vec::with_capacity(n_list.len());
    let mut curve = Vec::with_capacity(n_list.len());
    for (i, &n) in n_list.iter().enumerate() {
        let col: Vec<f64> = sups.iter().map(|r| r[i]).collect();
        let (m, se) = mean_se(&col);
        let bound = 4.0 * gaps[i];
        rb.estimate("sup_sq_gap", n as f64, m, se, Some(bound));
        rb.estimate("kernel_gap_l2", n as f64, gaps[i], 0.0, None);
        rb.criterion(Criterion::new(format!("bound at n={n}"), m, bound, se, 3.0));
        curve.push((n as f64, bound));
        stats.push((m, se));
    }
    for w in 0..stats.len().saturating_sub(1) {
        let ((a, sa), (b, sb)) = (stats[w], stats[w + 1]);
        rb.criterion(Criterion::new(
            format!("decrease n={} -> n={}", n_list[w], n_list[w + 1]),
            b,
            a,
            (sa * sa + sb * sb).sqrt(),
            3.0,
        ));
    }

    // decoupled drivers for the largest n: Y_n on replica p, Y on replica n_mc + p
    let n_ind = n_mc.min(INDEPENDENT_PATHS);
    let g_conv = Convolver::new(g_lags)?;
    let last = convolvers.last().expect("nonempty");
    let ind: Vec<f64> = (0..n_ind as u64)
        .into_par_iter()
        .map(|p| {
            let dw = forward_increments(DriverKey::new(seed, p), dt, n_steps);
            let dw2 = forward_increments(DriverKey::new(seed, n_mc as u64 + p), dt, n_steps);
            let gap = last.convolve(&dw);
            let y2 = g_conv.convolve(&dw2);
            let y = g_conv.convolve(&dw);
            gap.iter()
                .zip(&y)
                .zip(&y2)
                .fold(0.0f64, |m, ((d, y), y2)| m.max((d + y - y2).powi(2)))
        })
        .collect();
    let (mi, si) = mean_se(&ind);
    let (mc, sc) = *stats.last().expect("nonempty");
    rb.summary("independent_driver_sup_sq_gap", mi);
    rb.criterion(Criterion::new("common drivers beat independent drivers", mc, mi, (sc * sc + si * si).sqrt(), 0.0));
    if n_list.len() >= 2 {
        let ns: Vec<f64> = n_list.iter().map(|&n| n as f64).collect();
        rb.summary("kernel_gap_slope_in_n", log_log_slope(&ns, &gaps));
    }
    rb.bound(Bound::Curve(curve));
    Ok(rb.finish())
}
