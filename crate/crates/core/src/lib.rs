//! Gamma-mixed fractional Ornstein-Uhlenbeck processes.
//!
//! The crate is organized bottom-up:
//!
//! * [`special`]: Mittag-Leffler functions `E_rho`, `E_{rho,rho}` and `G_rho`.
//! * [`mixing`]: the Gamma law of the mean-reversion rates.
//! * [`kernels`]: resolvent, empirical and mean kernels, norms and tail bounds.
//! * [`simulator`]: Gaussian convolution paths on a shared Brownian driver.
//! * [`diagnostics`]: Monte Carlo checks of the convergence results.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`.

pub mod diagnostics;
pub mod error;
pub mod kernels;
pub mod mixing;
pub mod quadrature;
pub mod rng;
pub mod scalar;
pub mod simulator;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Real;

pub type FractionalOrderF64 = special::FractionalOrder<f64>;
pub type EvalResultF64 = special::EvalResult<f64>;
pub type GammaMixingF64 = mixing::GammaMixing<f64>;
pub type MeanKernelF64 = kernels::MeanKernel<f64>;
pub type ResolventKernelF64 = kernels::ResolventKernel<f64>;
pub type EmpiricalKernelF64 = kernels::EmpiricalKernel<f64>;
pub type TimeGridF64 = simulator::TimeGrid<f64>;
pub type PathEnsembleF64 = simulator::PathEnsemble<f64>;
pub type StationaryOptionsF64 = simulator::StationaryOptions<f64>;
