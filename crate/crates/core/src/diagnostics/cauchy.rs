use rayon::prelude::*;

use super::report::{Bound, ConvergenceReport, Criterion, ReportBuilder};
use super::stats::{mean_se, ols};
use super::base_parameters;
use crate::error::{Error, Result};
use crate::kernels::{kernel_square_integral, tail_variance_bound, FnKernel, MeanKernel};
use crate::mixing::{require_condition, GammaMixing};
use crate::simulator::{mean_kernel_lags, shifted_at_zero};
use crate::special::FractionalOrder;

const SLOPE_TOL: f64 = 0.1;
const MIN_FIT_POINTS: usize = 5;

/// Decay of `int_s^t G(u)^2 du = E|Y_{-t}(0) - Y_{-s}(0)|^2` over consecutive
/// pairs of `t_list`.
///
/// The deterministic increments are fitted on a log-log scale against the
/// left ends; with a geometric `t_list` the slope is `1 - 2 rho min(mu, 1)`.
/// For `mu = 1` the slope is replaced by an envelope check of the tail bound.
/// Pairs with right end `<= mc_max_t` are also estimated by Monte Carlo on
/// cells of width `mc_dt`.
pub fn check_cauchy_decay(
    mk: &MeanKernel<f64>,
    t_list: &[f64],
    n_mc: usize,
    seed: u64,
    mc_dt: f64,
    mc_max_t: f64,
) -> Result<ConvergenceReport> {
    require_condition(&mk.mixing, mk.rho)?;
    if t_list.len() < 2 || t_list[0] <= 0.0 || t_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("t_list must hold at least two increasing positive times"));
    }
    let mut params = base_parameters(mk, None, &[], Some(n_mc), Some(seed));
    params.extra.insert("t_list".into(), serde_json::json!(t_list));
    params.extra.insert("mc_dt".into(), serde_json::json!(mc_dt));
    params.extra.insert("mc_max_t".into(), serde_json::json!(mc_max_t));
    let mut rb = ReportBuilder::new("cauchy_decay", params);
    let (rho, mu) = (mk.rho.value(), mk.mixing.mu());

    let incs: Vec<f64> = t_list
        .par_windows(2)
        .map(|w| kernel_square_integral(mk, w[0], w[1]))
        .collect::<Result<_>>()?;
    for (w, d) in t_list.windows(2).zip(&incs) {
        rb.estimate("sq_increment", w[0], *d, 0.0, None);
    }

    if mu == 1.0 {
        mu_one_envelope(mk, &mut rb)?;
    } else {
        let expected = 1.0 - 2.0 * rho * mu.min(1.0);
        rb.summary("expected_slope", expected);
        if incs.len() < MIN_FIT_POINTS {
            rb.note(format!("slope fit needs at least {MIN_FIT_POINTS} increments"));
            rb.criterion(Criterion::holds("enough points for the slope fit", false));
        } else {
            let lx: Vec<f64> = t_list[..incs.len()].iter().map(|t| t.ln()).collect();
            let ly: Vec<f64> = incs.iter().map(|d| d.ln()).collect();
            let (_, slope) = ols(&lx, &ly);
            rb.summary("slope", slope);
            rb.criterion(Criterion::close("log-log slope", slope, expected, SLOPE_TOL, 0.0, 0.0));
        }
    }

    let mc_pairs: Vec<usize> = (0..incs.len()).filter(|&i| t_list[i + 1] <= mc_max_t).collect();
    if n_mc > 0 && !mc_pairs.is_empty() {
        let t_hi = t_list[*mc_pairs.last().expect("nonempty") + 1];
        let n_cells = (t_hi / mc_dt).round() as usize + 1;
        let lags = mean_kernel_lags(mk, mc_dt, n_cells)?;
        let table = FnKernel(|t: f64| Ok(lags[((t / mc_dt).round() as usize).min(n_cells)]));
        let shifts: Vec<f64> = t_list[..=mc_pairs.len()].to_vec();
        let samples = shifted_at_zero(&table, &shifts, mc_dt, n_mc, seed)?;
        for &i in &mc_pairs {
            let sq: Vec<f64> = samples[i + 1].iter().zip(&samples[i]).map(|(b, a)| (b - a).powi(2)).collect();
            let (m, se) = mean_se(&sq);
            rb.estimate("mc_sq_increment", t_list[i], m, se, Some(incs[i]));
            rb.criterion(Criterion::close(
                format!("MC increment on [{}, {}]", t_list[i], t_list[i + 1]),
                m,
                incs[i],
                0.0,
                se,
                3.0,
            ));
        }
    }
    Ok(rb.finish())
}

/// `mu = 1`: the tail bound at `rho = 1` stays within a factor 2 of
/// `(2 + log T)^2 / T` on `[10, 1e4]`, and dominates the true tail `1/(1+T)`.
fn mu_one_envelope(mk: &MeanKernel<f64>, rb: &mut ReportBuilder) -> Result<()> {
    let unit = MeanKernel::new(FractionalOrder::new(1.0)?, GammaMixing::new(1.0, 1.0)?);
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    let mut dominates = true;
    let mut curve = Vec::new();
    for k in 0..=30 {
        let t = 10f64 * 10f64.powf(k as f64 / 10.0);
        let b = tail_variance_bound(&unit, t)?;
        let env = (2.0 + t.ln()).powi(2) / t;
        lo = lo.min(b / env);
        hi = hi.max(b / env);
        dominates &= b >= 1.0 / (1.0 + t);
        curve.push((t, b));
        rb.estimate("envelope_ratio", t, b / env, 0.0, None);
    }
    rb.summary("envelope_ratio_min", lo);
    rb.summary("envelope_ratio_max", hi);
    rb.criterion(Criterion::new("envelope ratio <= 2", hi, 2.0, 0.0, 0.0));
    rb.criterion(Criterion::new("envelope ratio >= 1/2", 0.5, lo, 0.0, 0.0));
    rb.criterion(Criterion::holds("tail bound dominates the exact tail at rho = 1", dominates));
    // at the requested order, the bound must still dominate a computed partial tail
    let t0 = 10.0;
    let partial = kernel_square_integral(mk, t0, 1e3 * t0)?;
    let b = tail_variance_bound(mk, t0)?;
    rb.summary("partial_tail_10", partial);
    rb.summary("tail_bound_10", b);
    rb.criterion(Criterion::new("tail bound dominates the partial tail", partial, b, 0.0, 0.0));
    rb.bound(Bound::Curve(curve));
    Ok(())
}
