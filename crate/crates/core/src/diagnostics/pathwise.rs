use rayon::prelude::*;

use super::report::{ConvergenceReport, Criterion, ReportBuilder};
use super::stats::mean_se;
use super::{base_parameters, sorted_increasing};
use crate::error::{Error, Result};
use crate::kernels::{
    bound_constants, empirical_kernel, mean_kernel, mean_kernel_deriv, resolvent_deriv, MeanKernel, ResolventKernel,
};
use crate::mixing::{moment_frac, sample_alphas};
use crate::simulator::TimeGrid;

const MAX_POINTS: usize = 100;

/// Deterministic check of the three sufficient conditions for pathwise
/// convergence of `f_n` to `G`: equal values at 0, derivatives converging,
/// derivatives bounded uniformly in `n`.
///
/// The standard errors are those of the sample means over the rates.
pub fn check_pathwise_conditions(
    mk: &MeanKernel<f64>,
    n_list: &[usize],
    grid: &TimeGrid<f64>,
    seed: u64,
) -> Result<ConvergenceReport> {
    sorted_increasing(n_list)?;
    let rho = mk.rho.value();
    if rho <= 1.0 {
        return Err(Error::domain(format!("pathwise conditions need rho > 1, got {rho}")));
    }
    let mut rb = ReportBuilder::new("pathwise_conditions", base_parameters(mk, Some(grid), n_list, None, Some(seed)));
    let bc = bound_constants(mk.rho)?;
    let n_max = *n_list.last().expect("nonempty");
    let alphas = sample_alphas(&mk.mixing, n_max, seed);

    let stride = grid.n_steps().div_ceil(MAX_POINTS).max(1);
    let mut times: Vec<f64> = (1..=grid.n_steps()).step_by(stride).map(|j| grid.node(j)).filter(|&t| t > 0.0).collect();
    if !times.contains(&1.0) {
        times.push(1.0);
    }
    let i_one = times.iter().position(|&t| t == 1.0).expect("pushed");
    let g_dot: Vec<f64> = times.par_iter().map(|&t| mean_kernel_deriv(mk, t)).collect::<Result<_>>()?;
    // per-rate derivative values, [time][rate]
    let terms: Vec<Vec<f64>> = times
        .par_iter()
        .map(|&t| {
            alphas
                .iter()
                .map(|&a| resolvent_deriv(&ResolventKernel::new(a, mk.rho)?, t))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let powers: Vec<f64> = alphas.iter().map(|a| a.powf(1.0 / rho)).collect();
    let limit_const = bc.m2 * moment_frac(&mk.mixing, 1.0 / rho)?;
    rb.summary("M2", bc.m2);
    rb.summary("derivative_bound_limit", limit_const);

    let exact_zero = mean_kernel(mk, 0.0)? == 1.0
        && n_list.iter().map(|&n| empirical_kernel(&alphas[..n], mk.rho, 0.0)).all(|v| matches!(v, Ok(x) if x == 1.0));
    rb.criterion(Criterion::holds("f_n(0) = G(0) = 1", exact_zero));

    let mut sup_gaps = Vec::new();
    let mut at_one = Vec::new();
    for &n in n_list {
        let mut sup = (0.0f64, 0.0f64);
        let mut sup_abs = 0.0f64;
        for (i, row) in terms.iter().enumerate() {
            let (m, se) = mean_se(&row[..n]);
            let gap = (m - g_dot[i]).abs();
            if gap > sup.0 {
                sup = (gap, se);
            }
            sup_abs = sup_abs.max(m.abs());
            if i == i_one {
                at_one.push((gap, se));
                rb.estimate("deriv_gap_t1", n as f64, gap, se, None);
            }
        }
        rb.estimate("sup_deriv_gap", n as f64, sup.0, sup.1, None);
        sup_gaps.push(sup);

        let (mp, sp) = mean_se(&powers[..n]);
        let bound = bc.m2 * mp;
        rb.estimate("sup_abs_deriv", n as f64, sup_abs, 0.0, Some(bound));
        rb.criterion(Criterion::new(format!("sup |f_n'| <= M2 mean(alpha^(1/rho)) at n={n}"), sup_abs, bound, 0.0, 0.0));
        if n == n_max {
            rb.criterion(Criterion::close(
                format!("derivative bound constant -> limit at n={n}"),
                bound,
                limit_const,
                0.0,
                bc.m2 * sp,
                4.0,
            ));
        }
    }
    for w in 1..n_list.len() {
        let ((a, sa), (b, sb)) = (sup_gaps[w - 1], sup_gaps[w]);
        rb.criterion(Criterion::new(
            format!("sup gap decreases n={} -> n={}", n_list[w - 1], n_list[w]),
            b,
            a,
            (sa * sa + sb * sb).sqrt(),
            3.0,
        ));
        let ((a, sa), (b, sb)) = (at_one[w - 1], at_one[w]);
        rb.criterion(Criterion::new(
            format!("gap at t=1 decreases n={} -> n={}", n_list[w - 1], n_list[w]),
            b,
            a,
            (sa * sa + sb * sb).sqrt(),
            3.0,
        ));
    }
    Ok(rb.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixing::GammaMixing;
    use crate::special::FractionalOrder;

    #[test]
    fn refuses_rho_one_and_passes_small_case() {
        let g = GammaMixing::new(4.0, 1.0).unwrap();
        let grid = TimeGrid::new(0.0, 2.0, 20).unwrap();
        let one = MeanKernel::new(FractionalOrder::new(1.0).unwrap(), g);
        assert!(check_pathwise_conditions(&one, &[10], &grid, 1).is_err());
        let mk = MeanKernel::new(FractionalOrder::new(1.5).unwrap(), g);
        let r = check_pathwise_conditions(&mk, &[10, 100], &grid, 1).unwrap();
        assert_eq!(r.criteria[0].verdict, crate::diagnostics::Verdict::Pass);
    }
}
