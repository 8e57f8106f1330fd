//! Deterministic kernels: the resolvent `s_alpha(t) = E_rho(-alpha t^rho)`,
//! empirical means of resolvents, their Gamma-mixed expectation, and the
//! norms, variance integrals and tail bounds built on them.

mod bounds;
mod empirical;
mod mean;
mod resolvent;
mod table;

pub use bounds::{bound_constants, BoundConstants};
pub use empirical::{empirical_kernel, empirical_kernel_deriv, EmpiricalKernel};
pub use mean::{
    kernel_square_integral, mean_kernel, mean_kernel_deriv, stationary_variance, tail_variance_bound, truncation_horizon,
    variance_integral, MeanKernel, StationaryVariance,
};
pub use resolvent::{
    resolvent, resolvent_deriv, resolvent_l2_norm, resolvent_tail_bound, volterra_residual,
    ResolventKernel,
};
pub use table::TabulatedKernel;

use crate::error::Result;
use crate::scalar::Real;

/// A deterministic convolution kernel `K(t)`, `t >= 0`.
pub trait Kernel<T: Real>: Send + Sync {
    fn eval(&self, t: T) -> Result<T>;
}

/// Wraps a closure as a [`Kernel`].
pub struct FnKernel<F>(pub F);

impl<T, F> Kernel<T> for FnKernel<F>
where
    T: Real,
    F: Fn(T) -> Result<T> + Send + Sync,
{
    fn eval(&self, t: T) -> Result<T> {
        (self.0)(t)
    }
}

impl<T: Real, K: Kernel<T> + ?Sized> Kernel<T> for &K {
    fn eval(&self, t: T) -> Result<T> {
        (**self).eval(t)
    }
}

impl<T: Real, K: Kernel<T> + ?Sized> Kernel<T> for std::sync::Arc<K> {
    fn eval(&self, t: T) -> Result<T> {
        (**self).eval(t)
    }
}

/// Doubling break points `0, 1, 2, 4, ...` up to `t`, used for integrals of
/// kernels that decay algebraically.
pub(crate) fn doubling_breaks<T: Real>(a: T, b: T) -> Vec<T> {
    let mut pts = vec![a];
    let mut x = T::one().max(a * T::lit(2.0));
    while x < b {
        if x > a {
            pts.push(x);
        }
        x *= T::lit(2.0);
    }
    pts.push(b);
    pts
}
