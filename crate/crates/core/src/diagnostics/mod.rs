//! Monte Carlo and deterministic checks of the convergence results, each
//! returning a [`ConvergenceReport`].

mod cauchy;
mod l2sup;
mod pathwise;
mod remark;
mod report;
mod stationarity;
pub mod stats;
mod tightness;
mod variance;

pub use cauchy::check_cauchy_decay;
pub use l2sup::check_l2_sup_convergence;
pub use pathwise::check_pathwise_conditions;
pub use remark::check_mixing_condition_remark;
pub use report::{Bound, ConvergenceReport, Criterion, Estimate, ReportParameters, Verdict};
pub use stationarity::check_stationarity;
pub use tightness::check_tightness;
pub use variance::check_variance_law;

use crate::error::{Error, Result};
use crate::kernels::MeanKernel;
use crate::simulator::TimeGrid;

pub(crate) fn base_parameters(
    mk: &MeanKernel<f64>,
    grid: Option<&TimeGrid<f64>>,
    n_list: &[usize],
    n_mc: Option<usize>,
    seed: Option<u64>,
) -> ReportParameters {
    ReportParameters {
        rho: mk.rho.value(),
        mu: Some(mk.mixing.mu()),
        lambda: Some(mk.mixing.lambda()),
        grid: grid.copied(),
        n_list: n_list.to_vec(),
        n_mc,
        seed,
        extra: Default::default(),
    }
}

pub(crate) fn sorted_increasing(n_list: &[usize]) -> Result<()> {
    if n_list.is_empty() || n_list[0] == 0 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("n_list must be nonempty, positive and strictly increasing"));
    }
    Ok(())
}
