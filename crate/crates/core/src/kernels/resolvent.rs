use std::any::TypeId;
use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use super::{bound_constants, doubling_breaks, Kernel};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_with_breaks, QuadOptions};
use crate::scalar::Real;
use crate::special::{gamma, ml_one, ml_two, FractionalOrder};

/// `s_alpha(t) = E_rho(-alpha t^rho)`, the resolvent of
/// `s + alpha (g_rho * s) = 1` with `g_rho(t) = t^{rho-1} / Gamma(rho)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolventKernel<T> {
    pub alpha: T,
    pub rho: FractionalOrder<T>,
}

impl<T: Real> ResolventKernel<T> {
    pub fn new(alpha: T, rho: FractionalOrder<T>) -> Result<Self> {
        if !(alpha >= T::zero()) || !alpha.is_finite() {
            return Err(Error::domain(format!("rate alpha must be finite and >= 0, got {alpha}")));
        }
        Ok(Self { alpha, rho })
    }
}

impl<T: Real> Kernel<T> for ResolventKernel<T> {
    fn eval(&self, t: T) -> Result<T> {
        resolvent(self, t)
    }
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::domain(format!("time must be finite and >= 0, got {t}")));
    }
    Ok(())
}

pub fn resolvent<T: Real>(k: &ResolventKernel<T>, t: T) -> Result<T> {
    check_time(t)?;
    if k.alpha == T::zero() || t == T::zero() {
        return Ok(T::one());
    }
    Ok(ml_one(k.rho, k.alpha * t.powf(k.rho.value()))?.value)
}

/// `s_alpha(t) + alpha (g_rho * s_alpha)(t) - 1`, which vanishes for the exact
/// resolvent. The weak singularity of `g_rho` is removed by `v = (t - tau)^rho`.
pub fn volterra_residual<T: Real>(k: &ResolventKernel<T>, t: T) -> Result<T> {
    if !(t > T::zero()) || !t.is_finite() {
        return Err(Error::domain(format!("residual needs t > 0, got {t}")));
    }
    if k.alpha == T::zero() {
        return Ok(T::zero());
    }
    let rho = k.rho.value();
    let inv = rho.recip();
    let upper = t.powf(rho);
    let q = integrate(
        |v: T| {
            let tau = (t - v.powf(inv)).max(T::zero());
            resolvent(k, tau)
        },
        T::zero(),
        upper,
        &QuadOptions::absolute(T::eval_target()),
    )?
    .ensure_converged("Volterra residual")?;
    let conv = q.value / gamma(rho + T::one());
    Ok(resolvent(k, t)? + k.alpha * conv - T::one())
}

/// `s_alpha'(t) = -alpha t^{rho-1} E_{rho,rho}(-alpha t^rho)`.
pub fn resolvent_deriv<T: Real>(k: &ResolventKernel<T>, t: T) -> Result<T> {
    if !(t > T::zero()) || !t.is_finite() {
        return Err(Error::domain(format!("derivative needs t > 0, got {t}")));
    }
    if k.alpha == T::zero() {
        return Ok(T::zero());
    }
    let rho = k.rho.value();
    if rho == T::one() {
        return Ok(-k.alpha * (-k.alpha * t).exp());
    }
    let e = ml_two(k.rho, k.alpha * t.powf(rho))?;
    Ok(-k.alpha * t.powf(rho - T::one()) * e.value)
}

type NormCache = RwLock<HashMap<(TypeId, u64), f64>>;

fn norm_cache() -> &'static NormCache {
    static CACHE: OnceLock<NormCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Upper bound for `int_T^inf s_alpha(u)^2 du` from `|s_alpha| <= M / (1 + alpha u^rho)`.
pub fn resolvent_tail_bound<T: Real>(k: &ResolventKernel<T>, horizon: T) -> Result<T> {
    let rho = k.rho.value();
    if !(rho > T::lit(0.5)) {
        return Err(Error::domain(format!("square integrability needs rho > 1/2, got {rho}")));
    }
    if !(k.alpha > T::zero()) {
        return Err(Error::domain("resolvent tail needs alpha > 0"));
    }
    let m = bound_constants(k.rho)?.m;
    let q = T::lit(2.0) * rho - T::one();
    Ok(m * m * horizon.powf(-q) / (k.alpha * k.alpha * q))
}

fn unit_norm_squared<T: Real>(rho: FractionalOrder<T>) -> Result<T> {
    let key = (TypeId::of::<T>(), rho.value().to_f64_lossy().to_bits());
    if let Some(&v) = norm_cache().read().expect("norm cache poisoned").get(&key) {
        return Ok(T::lit(v));
    }
    let unit = ResolventKernel::new(T::one(), rho)?;
    let target = T::eval_target();
    let mut horizon = T::lit(16.0);
    let mut tail = resolvent_tail_bound(&unit, horizon)?;
    while tail > target && horizon < T::lit(1e12) {
        horizon *= T::lit(2.0);
        tail = resolvent_tail_bound(&unit, horizon)?;
    }
    let q = integrate_with_breaks(
        |u: T| Ok(resolvent(&unit, u)?.powi(2)),
        &doubling_breaks(T::zero(), horizon),
        &QuadOptions::absolute(target),
    )?
    .ensure_converged("resolvent L2 norm")?;
    let value = q.value + tail * T::lit(0.5);
    norm_cache()
        .write()
        .expect("norm cache poisoned")
        .entry(key)
        .or_insert(value.to_f64_lossy());
    Ok(value)
}

/// `||s_alpha||^2_{L^2(R+)} = alpha^{-1/rho} ||s_1||^2`.
pub fn resolvent_l2_norm<T: Real>(k: &ResolventKernel<T>) -> Result<T> {
    let rho = k.rho.value();
    if !(rho > T::lit(0.5)) {
        return Err(Error::domain(format!("square integrability needs rho > 1/2, got {rho}")));
    }
    if !(k.alpha > T::zero()) {
        return Err(Error::domain(format!("L2 norm needs alpha > 0, got {}", k.alpha)));
    }
    Ok(k.alpha.powf(-rho.recip()) * unit_norm_squared(k.rho)?)
}
