//! Gaussian convolution paths on uniform grids.

mod convolve;
mod driver;
mod ensemble;
mod exact;
mod grid;
mod io;
mod one_sided;
mod stationary;

pub use convolve::{convolve_direct, Convolver};
pub use driver::{backward_normals, brownian_increments, forward_increments, DriverKey};
pub use ensemble::{pointwise_mean, PathEnsemble, PathLabel, ProcessKind, SimulationMethod};
pub use exact::{exact_covariance, jittered_cholesky, simulate_exact_gaussian};
pub use grid::TimeGrid;
pub use io::{read_csv, sidecar_path, write_csv, write_ensemble, Sidecar};
pub use one_sided::{
    empirical_mean_path, shifted_at_zero, simulate_component_paths, simulate_kernel_paths, simulate_limit_path,
    simulate_limit_paths, y_minus_s_at_zero, ConvolutionEngine,
};
pub(crate) use one_sided::{mean_kernel_lags, refuse_rough_order};
pub use stationary::{
    empirical_stationary_mean, simulate_stationary_paths, simulate_xi_paths, StationaryEngine, StationaryOptions,
    StationaryPlan,
};
