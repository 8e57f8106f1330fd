use serde::{Deserialize, Serialize};

use super::bounds::bound_constants;
use super::resolvent::{resolvent_deriv, ResolventKernel};
use super::{doubling_breaks, Kernel};
use crate::error::{Error, Result};
use crate::mixing::{require_condition, GammaMixing};
use crate::quadrature::{integrate_with_breaks, QuadOptions};
use crate::scalar::{sin_pi, Real};
use crate::special::{g_rho_quadrature, g_rho_series, gamma, gamma_expectation, FractionalOrder};

/// `G(t) = E[s_alpha(t)] = G_rho(-t^rho / lambda)` with `alpha ~ Gamma(mu, lambda)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanKernel<T> {
    pub rho: FractionalOrder<T>,
    pub mixing: GammaMixing<T>,
}

impl<T: Real> MeanKernel<T> {
    pub fn new(rho: FractionalOrder<T>, mixing: GammaMixing<T>) -> Self {
        Self { rho, mixing }
    }
}

impl<T: Real> Kernel<T> for MeanKernel<T> {
    fn eval(&self, t: T) -> Result<T> {
        mean_kernel(self, t)
    }
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::domain(format!("time must be finite and >= 0, got {t}")));
    }
    Ok(())
}

pub fn mean_kernel<T: Real>(mk: &MeanKernel<T>, t: T) -> Result<T> {
    check_time(t)?;
    if t == T::zero() {
        return Ok(T::one());
    }
    let rho = mk.rho.value();
    let (mu, lambda) = (mk.mixing.mu(), mk.mixing.lambda());
    if rho == T::one() {
        return Ok((lambda / (t + lambda)).powf(mu));
    }
    if rho > T::one() {
        if let Ok(s) = g_rho_series(rho, mu, -t.powf(rho) / lambda) {
            if s.est_abs_error <= T::eval_target() {
                return Ok(s.value);
            }
        }
    }
    Ok(g_rho_quadrature(mk.rho, mu, lambda, t)?.value)
}

/// `G'(t) = E[-alpha t^{rho-1} E_{rho,rho}(-alpha t^rho)]`, for `rho >= 1`.
pub fn mean_kernel_deriv<T: Real>(mk: &MeanKernel<T>, t: T) -> Result<T> {
    if !(t > T::zero()) || !t.is_finite() {
        return Err(Error::domain(format!("derivative needs t > 0, got {t}")));
    }
    let rho = mk.rho.value();
    let (mu, lambda) = (mk.mixing.mu(), mk.mixing.lambda());
    if rho == T::one() {
        return Ok(-mu * lambda.powf(mu) * (t + lambda).powf(-mu - T::one()));
    }
    if rho < T::one() {
        return Err(Error::domain(format!(
            "mean kernel derivative is unbounded near 0 for rho = {rho} < 1"
        )));
    }
    let s = t.powf(rho) / lambda;
    let r = gamma_expectation(mu, s, |z| {
        let k = ResolventKernel::new(z / lambda, mk.rho)?;
        let v = resolvent_deriv(&k, t)?;
        Ok((v, T::eval_target() * (T::one() + v.abs())))
    })?;
    Ok(r.value)
}

/// `sigma_t^2 = int_0^t G(u)^2 du`.
pub fn variance_integral<T: Real>(mk: &MeanKernel<T>, t: T) -> Result<T> {
    check_time(t)?;
    if t == T::zero() {
        return Ok(T::zero());
    }
    kernel_square_integral(mk, T::zero(), t)
}

/// `int_a^b K(u)^2 du` by adaptive quadrature with doubling break points.
pub fn kernel_square_integral<T: Real, K: Kernel<T> + ?Sized>(k: &K, a: T, b: T) -> Result<T> {
    if b <= a {
        return Ok(T::zero());
    }
    let q = integrate_with_breaks(
        |u: T| Ok(k.eval(u)?.powi(2)),
        &doubling_breaks(a, b),
        &QuadOptions::absolute(T::lit(1e-9).max(T::eval_target())),
    )?
    .ensure_converged("squared kernel integral")?;
    Ok(q.value.max(T::zero()))
}

/// Upper bound for `int_T^inf G(u)^2 du`.
///
/// With `x = u^rho / lambda`, `|G(u)| <= M E[1/(1 + alpha u^rho)]` and the
/// expectation is split at `z = 1` of the standardized Gamma variable:
///
/// * `mu > 1`: `E[.] <= c_1 / x`, `c_1 = 1/((mu-1) Gamma(mu)) + 1`;
/// * `mu < 1`: `E[.] <= a x^{-mu} + 1/x`, `a = pi / (sin(pi mu) Gamma(mu))`;
/// * `mu = 1`: `E[.] <= (1 + log(1 + x)) / x`, and `E[.] <= 1` below `x = 1`.
///
/// The squared envelopes are integrated in closed form, which yields the rates
/// `T^{1-2rho}`, `T^{1-2 mu rho}` and `log(T)^2 / T^{2 rho - 1}` respectively.
pub fn tail_variance_bound<T: Real>(mk: &MeanKernel<T>, horizon: T) -> Result<T> {
    require_condition(&mk.mixing, mk.rho)?;
    if !(horizon > T::zero()) || !horizon.is_finite() {
        return Err(Error::domain(format!("tail horizon must be positive, got {horizon}")));
    }
    let rho = mk.rho.value();
    let (mu, lambda) = (mk.mixing.mu(), mk.mixing.lambda());
    if !(rho * mu.min(T::one()) > T::lit(0.5)) {
        return Err(Error::domain(format!(
            "tail envelope is not square integrable for rho = {rho}, mu = {mu}"
        )));
    }
    let m = bound_constants(mk.rho)?.m;
    let m2 = m * m;
    let two = T::lit(2.0);
    let t = horizon;
    if mu > T::one() {
        let c1 = T::one() / ((mu - T::one()) * gamma(mu)) + T::one();
        let q = two * rho - T::one();
        return Ok(m2 * c1 * c1 * lambda * lambda * t.powf(-q) / q);
    }
    if mu < T::one() {
        let a = T::PI() / (sin_pi(mu) * gamma(mu));
        // (a lambda^mu u^{-rho mu} + lambda u^{-rho})^2
        let p1 = two * rho * mu - T::one();
        let p2 = rho * (T::one() + mu) - T::one();
        let p3 = two * rho - T::one();
        let i1 = a * a * lambda.powf(two * mu) * t.powf(-p1) / p1;
        let i2 = two * a * lambda.powf(T::one() + mu) * t.powf(-p2) / p2;
        let i3 = lambda * lambda * t.powf(-p3) / p3;
        return Ok(m2 * (i1 + i2 + i3));
    }
    // mu = 1: below u_c = lambda^{1/rho} the expectation is at most 1
    let u_c = lambda.powf(rho.recip());
    let below = (u_c - t).max(T::zero());
    let u = t.max(u_c);
    // lambda (a + rho ln u) u^{-rho},  a = 1 + ln 2 - ln lambda
    let a = T::one() + two.ln() - lambda.ln();
    let b = rho;
    let q = two * rho - T::one();
    let l = a + b * u.ln();
    let closed = u.powf(-q) * (l * l / q + two * b * l / (q * q) + two * b * b / (q * q * q));
    Ok(m2 * (below + lambda * lambda * closed))
}

/// Smallest history length (to 1% relative) whose tail bound is below `tol`.
pub fn truncation_horizon<T: Real>(mk: &MeanKernel<T>, tol: T, max_horizon: T) -> Result<T> {
    if !(tol > T::zero()) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut hi = T::one();
    while tail_variance_bound(mk, hi)? >= tol {
        hi *= T::lit(2.0);
        if hi > max_horizon * T::lit(2.0) {
            return Err(Error::Truncation {
                tol: tol.to_f64_lossy(),
                max_horizon: max_horizon.to_f64_lossy(),
            });
        }
    }
    let mut lo = hi * T::lit(0.5);
    if tail_variance_bound(mk, lo)? < tol {
        return Ok(lo);
    }
    while (hi - lo) > T::lit(0.01) * hi {
        let mid = (lo + hi) * T::lit(0.5);
        if tail_variance_bound(mk, mid)? < tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if hi > max_horizon {
        return Err(Error::Truncation {
            tol: tol.to_f64_lossy(),
            max_horizon: max_horizon.to_f64_lossy(),
        });
    }
    Ok(hi)
}

/// Certified enclosure of `sigma^2 = int_0^inf G(u)^2 du`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationaryVariance<T> {
    /// Midpoint of `[V(T), V(T) + tail(T)]`.
    pub value: T,
    pub half_width: T,
    /// Horizon `T` at which the tail bound fell below the tolerance.
    pub horizon: T,
}

/// `sigma^2` to within `tol / 2`, doubling the horizon until the tail bound is
/// below `tol`.
pub fn stationary_variance<T: Real>(mk: &MeanKernel<T>, tol: T) -> Result<StationaryVariance<T>> {
    require_condition(&mk.mixing, mk.rho)?;
    if !(tol > T::zero()) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let max_horizon = T::lit(1e9);
    let mut horizon = T::lit(8.0);
    let mut v = variance_integral(mk, horizon)?;
    let mut tail = tail_variance_bound(mk, horizon)?;
    while tail >= tol {
        if horizon > max_horizon {
            return Err(Error::Truncation {
                tol: tol.to_f64_lossy(),
                max_horizon: max_horizon.to_f64_lossy(),
            });
        }
        let next = horizon * T::lit(2.0);
        v += kernel_square_integral(mk, horizon, next)?;
        horizon = next;
        tail = tail_variance_bound(mk, horizon)?;
    }
    Ok(StationaryVariance {
        value: v + tail * T::lit(0.5),
        half_width: tail * T::lit(0.5),
        horizon,
    })
}
