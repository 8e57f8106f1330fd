use rayon::prelude::*;

use super::report::{ConvergenceReport, Criterion, ReportBuilder};
use super::stats::mean_se;
use super::{base_parameters, sorted_increasing};
use crate::error::Result;
use crate::kernels::{bound_constants, empirical_kernel, MeanKernel};
use crate::mixing::{moment_frac, sample_alphas};
use crate::simulator::{forward_increments, refuse_rough_order, Convolver, DriverKey, TimeGrid};

const PAIRS_PER_LAG: usize = 5;
const LAGS: usize = 10;

/// Index pairs `(s, t)`: ten lags from `dt` to `T/2`, geometrically spaced,
/// each at five positions.
pub(crate) fn tightness_pairs(n_steps: usize) -> Vec<(usize, usize)> {
    let max_lag = (n_steps / 2).max(1);
    let mut pairs = Vec::with_capacity(LAGS * PAIRS_PER_LAG);
    let mut prev = 0;
    for l in 0..LAGS {
        let geometric = (max_lag as f64).powf(l as f64 / (LAGS - 1) as f64).round() as usize;
        let lag = geometric.max(prev + 1).min(max_lag);
        prev = lag;
        for q in 0..PAIRS_PER_LAG {
            let s = (n_steps - lag) * q / (PAIRS_PER_LAG - 1).max(1);
            pairs.push((s, s + lag));
        }
    }
    pairs
}

/// `E|Y_n(t) - Y_n(s)|^2 / (t - s)` on 50 pairs against
/// `K_n = 2 M3^2 T^2 mean(alpha^{2/rho}) + 2 M^2`, and `K_n -> K`.
pub fn check_tightness(
    mk: &MeanKernel<f64>,
    grid: &TimeGrid<f64>,
    n_list: &[usize],
    n_mc: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    sorted_increasing(n_list)?;
    refuse_rough_order(mk.rho)?;
    grid.require_origin()?;
    let mut rb = ReportBuilder::new("tightness", base_parameters(mk, Some(grid), n_list, Some(n_mc), Some(seed)));
    let rho = mk.rho.value();
    let bc = bound_constants(mk.rho)?;
    let big_t = grid.t_end();
    let (dt, n_steps) = (grid.dt(), grid.n_steps());
    let n_max = *n_list.last().expect("nonempty");
    let alphas = sample_alphas(&mk.mixing, n_max, seed);
    let powers: Vec<f64> = alphas.iter().map(|a| a.powf(2.0 / rho)).collect();
    let k_of = |mean_pow: f64| 2.0 * bc.m3 * bc.m3 * big_t * big_t * mean_pow + 2.0 * bc.m * bc.m;
    let k_bar = k_of(moment_frac(&mk.mixing, 2.0 / rho)?);
    rb.summary("M", bc.m);
    rb.summary("M3", bc.m3);
    rb.summary("K_bar", k_bar);
    let pairs = tightness_pairs(n_steps);

    for &n in n_list {
        let (mp, sp) = mean_se(&powers[..n]);
        let k_n = k_of(mp);
        let k_se = 2.0 * bc.m3 * bc.m3 * big_t * big_t * sp;
        rb.estimate("K_n", n as f64, k_n, k_se, Some(k_bar));

        let lags: Vec<f64> = (0..=n_steps)
            .into_par_iter()
            .map(|m| empirical_kernel(&alphas[..n], mk.rho, dt * m as f64))
            .collect::<Result<_>>()?;
        let conv = Convolver::new(lags)?;
        let sq: Vec<Vec<f64>> = (0..n_mc as u64)
            .into_par_iter()
            .map(|p| {
                let y = conv.convolve(&forward_increments(DriverKey::new(seed, p), dt, n_steps));
                pairs.iter().map(|&(s, t)| (y[t] - y[s]).powi(2) / (dt * (t - s) as f64)).collect()
            })
            .collect();
        let mut worst = (f64::NEG_INFINITY, 0.0);
        for (i, &(s, t)) in pairs.iter().enumerate() {
            let col: Vec<f64> = sq.iter().map(|r| r[i]).collect();
            let (m, se) = mean_se(&col);
            if n == n_max {
                rb.estimate("increment_ratio", dt * (t - s) as f64, m, se, Some(k_n));
            }
            if m > worst.0 {
                worst = (m, se);
            }
        }
        rb.summary(&format!("max_ratio_n{n}"), worst.0);
        rb.criterion(Criterion::new(format!("max ratio <= K_n at n={n}"), worst.0, k_n, worst.1, 3.0));
        if n == n_max {
            rb.criterion(Criterion::close(format!("K_n -> K_bar at n={n}"), k_n, k_bar, 0.0, k_se, 4.0));
        }
    }
    Ok(rb.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifty_distinct_pairs() {
        let p = tightness_pairs(400);
        assert_eq!(p.len(), 50);
        assert!(p.iter().all(|&(s, t)| s < t && t <= 400));
        assert_eq!(p[0].1 - p[0].0, 1);
        assert_eq!(p[49].1 - p[49].0, 200);
        let short = tightness_pairs(100);
        let mut lags: Vec<usize> = short.iter().map(|(s, t)| t - s).collect();
        lags.dedup();
        assert_eq!(lags.len(), 10);
    }
}
