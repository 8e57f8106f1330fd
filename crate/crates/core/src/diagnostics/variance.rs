use rayon::prelude::*;

use super::base_parameters;
use super::report::{ConvergenceReport, Criterion, ReportBuilder};
use super::stats::second_moment_se;
use crate::error::Result;
use crate::kernels::{
    kernel_square_integral, resolvent_l2_norm, stationary_variance, variance_integral, EmpiricalKernel, Kernel,
    MeanKernel, ResolventKernel,
};
use crate::mixing::sample_alphas;
use crate::simulator::{
    mean_kernel_lags, refuse_rough_order, shifted_at_zero, ConvolutionEngine, DriverKey, StationaryEngine,
    StationaryOptions, TimeGrid,
};

const PROBE_TIMES: usize = 5;

struct Process {
    name: &'static str,
    /// `[probe][replica]`
    samples: Vec<Vec<f64>>,
    formula: Vec<f64>,
    tol: f64,
}

/// Marginal variances of `X_1`, `Y_n`, `Y`, `Y_{-s}(0)`, `xi_1` and `eta` at
/// five times against their integral formulas.
///
/// `X_1` and `xi_1` use the first of the `n_components` rates that define
/// `Y_n`. For `Y_{-s}(0)` the probe times play the role of `s`.
pub fn check_variance_law(
    mk: &MeanKernel<f64>,
    grid: &TimeGrid<f64>,
    n_mc: usize,
    seed: u64,
    tol: f64,
    n_components: usize,
) -> Result<ConvergenceReport> {
    refuse_rough_order(mk.rho)?;
    grid.require_origin()?;
    let mut params = base_parameters(mk, Some(grid), &[n_components], Some(n_mc), Some(seed));
    params.extra.insert("tol".into(), serde_json::json!(tol));
    let mut rb = ReportBuilder::new("variance_law", params);
    let (dt, n_steps) = (grid.dt(), grid.n_steps());
    let probes: Vec<usize> = (1..=PROBE_TIMES).map(|i| i * n_steps / PROBE_TIMES).collect();
    let times: Vec<f64> = probes.iter().map(|&j| grid.node(j)).collect();

    let alphas = sample_alphas(&mk.mixing, n_components, seed);
    let x1 = ResolventKernel::new(alphas[0], mk.rho)?;
    let fk = EmpiricalKernel::new(alphas.clone(), mk.rho)?;
    let g_lags = mean_kernel_lags(mk, dt, n_steps)?;
    let lag_of = |k: &dyn Kernel<f64>| -> Result<Vec<f64>> {
        (0..=n_steps).into_par_iter().map(|m| k.eval(dt * m as f64)).collect()
    };
    let engine = ConvolutionEngine::from_lags(vec![lag_of(&x1)?, lag_of(&fk)?, g_lags.clone()], *grid)?;
    let one_sided: Vec<Vec<Vec<f64>>> = (0..n_mc as u64)
        .into_par_iter()
        .map(|p| engine.sample(DriverKey::new(seed, p)))
        .collect();
    let pick = |k: usize| -> Vec<Vec<f64>> {
        probes.iter().map(|&j| one_sided.iter().map(|r| r[k][j]).collect()).collect()
    };

    let integral = |k: &dyn Kernel<f64>| -> Result<Vec<f64>> {
        times.par_iter().map(|&t| kernel_square_integral(k, 0.0, t)).collect()
    };
    let g_var: Vec<f64> = times.par_iter().map(|&t| variance_integral(mk, t)).collect::<Result<_>>()?;

    let table = crate::kernels::FnKernel(|t: f64| Ok(g_lags[((t / dt).round() as usize).min(n_steps)]));
    let shifted = shifted_at_zero(&table, &times, dt, n_mc, seed)?;

    let st_engine = StationaryEngine::for_mean_and_rates(mk, &alphas[..1], grid, &StationaryOptions::new(tol))?;
    let st: Vec<Vec<Vec<f64>>> = (0..n_mc as u64)
        .into_par_iter()
        .map(|p| st_engine.sample(DriverKey::new(seed, p)))
        .collect();
    let st_pick = |k: usize| -> Vec<Vec<f64>> { probes.iter().map(|&j| st.iter().map(|r| r[k][j]).collect()).collect() };
    let sv = stationary_variance(mk, tol)?;
    let xi_var = resolvent_l2_norm(&x1)?;
    rb.summary("alpha_1", alphas[0]);
    rb.summary("sigma2", sv.value);
    rb.summary("xi_variance", xi_var);

    let processes = [
        Process { name: "X_1", samples: pick(0), formula: integral(&x1)?, tol: 0.0 },
        Process { name: "Y_n", samples: pick(1), formula: integral(&fk)?, tol: 0.0 },
        Process { name: "Y", samples: pick(2), formula: g_var.clone(), tol: 0.0 },
        Process { name: "Y_-s(0)", samples: shifted, formula: g_var, tol: 0.0 },
        Process { name: "xi_1", samples: st_pick(1), formula: vec![xi_var; PROBE_TIMES], tol },
        Process { name: "eta", samples: st_pick(0), formula: vec![sv.value; PROBE_TIMES], tol: tol + sv.half_width },
    ];
    for pr in &processes {
        for (i, t) in times.iter().enumerate() {
            let (v, se) = second_moment_se(&pr.samples[i]);
            rb.estimate(pr.name, *t, v, se, Some(pr.formula[i]));
            rb.criterion(Criterion::close(format!("{} at t={t}", pr.name), v, pr.formula[i], pr.tol, se, 3.0));
        }
    }
    Ok(rb.finish())
}
