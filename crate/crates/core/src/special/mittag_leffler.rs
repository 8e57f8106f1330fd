//! One- and two-parameter Mittag-Leffler functions on the negative real axis.
//!
//! `E_rho(-x)` and `E_{rho,rho}(-x)` are evaluated by one of three routes:
//!
//! * the power series, compensated, for `x` up to a per-order crossover;
//! * for large `x`, the residue contribution of the two poles of the Laplace
//!   transform (present when `rho > 1`) plus the algebraic expansion in
//!   `1/x`, truncated at its smallest term;
//! * in between, a contour integral on `[0, 1]` evaluated by adaptive
//!   Gauss-Kronrod quadrature.
//!
//! Every result carries an a-posteriori absolute error estimate.

use std::any::TypeId;
use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::scalar::{cos_pi, sin_pi, Real};
use crate::special::gamma::{ln_gamma, recip_gamma};
use crate::special::summation::CompensatedSum;

/// Order `rho` of the Mittag-Leffler functions, `0 < rho <= 2`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FractionalOrder<T> {
    rho: T,
}

impl<T: Real> FractionalOrder<T> {
    pub fn new(rho: T) -> Result<Self> {
        if !(rho > T::zero() && rho <= T::lit(2.0)) {
            return Err(Error::domain(format!("order rho must lie in (0, 2], got {rho}")));
        }
        Ok(Self { rho })
    }

    #[inline]
    pub fn value(self) -> T {
        self.rho
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Series,
    Asymptotic,
    ClosedForm,
    Quadrature,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult<T> {
    pub value: T,
    pub method: Method,
    pub terms_used: usize,
    pub est_abs_error: T,
}

impl<T: Real> EvalResult<T> {
    fn closed(value: T) -> Self {
        Self {
            value,
            method: Method::ClosedForm,
            terms_used: 0,
            est_abs_error: T::epsilon() * value.abs() * T::lit(4.0),
        }
    }
}

/// Second parameter of the function: `E_{rho,1}` or `E_{rho,rho}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    One,
    Two,
}

impl Kind {
    fn beta<T: Real>(self, rho: T) -> T {
        match self {
            Kind::One => T::one(),
            Kind::Two => rho,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Kind::One => "E_rho",
            Kind::Two => "E_rho,rho",
        }
    }
}

fn check_arg<T: Real>(x: T) -> Result<()> {
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(Error::domain(format!(
            "Mittag-Leffler argument must be finite and x >= 0, got {x}"
        )));
    }
    Ok(())
}

/// `|x^k / Gamma(a)|` for `x > 0`, avoiding premature overflow.
fn power_over_gamma<T: Real>(x: T, k: i32, a: T) -> T {
    let kf = T::lit(f64::from(k));
    let log_pow = kf * x.ln();
    if a < T::lit(160.0) && log_pow.abs() < T::lit(600.0) {
        x.powi(k) * recip_gamma(a).abs()
    } else {
        (log_pow - ln_gamma(a)).exp()
    }
}

/// Compensated power series for `E_{rho,beta}(-x)`.
fn series<T: Real>(kind: Kind, rho: T, x: T) -> EvalResult<T> {
    let beta = kind.beta(rho);
    if x == T::zero() {
        let v = recip_gamma(beta);
        return EvalResult {
            value: v,
            method: Method::Series,
            terms_used: 1,
            est_abs_error: T::zero(),
        };
    }
    let eps = T::epsilon();
    let mut acc: CompensatedSum<T> = CompensatedSum::new();
    let mut rounding = T::zero();
    let mut prev = T::infinity();
    let mut k = 0i32;
    let neglected;
    loop {
        let a = rho * T::lit(f64::from(k)) + beta;
        let mag = power_over_gamma(x, k, a);
        let decreasing = mag < prev;
        let small = mag <= eps * T::lit(1e-3) * acc.value().abs() || mag < T::min_positive_value();
        if k > 0 && decreasing && small {
            neglected = mag;
            break;
        }
        if k >= 4000 {
            neglected = mag;
            break;
        }
        let term = if k % 2 == 0 { mag } else { -mag };
        acc.add(term);
        rounding += mag * (T::lit(16.0) + T::lit(2.0) * a);
        prev = mag;
        k += 1;
    }
    EvalResult {
        value: acc.value(),
        method: Method::Series,
        terms_used: k as usize,
        est_abs_error: T::lit(2.0) * neglected + eps * rounding,
    }
}

/// Residue contribution of the poles `s = x^{1/rho} e^{+-i pi/rho}`; zero for
/// `rho <= 1`. Returns `(value, magnitude bound)`.
fn residue_part<T: Real>(kind: Kind, rho: T, x: T) -> (T, T) {
    if rho <= T::one() {
        return (T::zero(), T::zero());
    }
    let y = x.powf(rho.recip());
    let theta = T::PI() / rho;
    let amp = T::lit(2.0) / rho * (y * theta.cos()).exp();
    match kind {
        Kind::One => (amp * (y * theta.sin()).cos(), amp),
        Kind::Two => {
            let scale = y.powf(T::one() - rho);
            let v = -amp * scale * (y * theta.sin() + theta).cos();
            (v, amp * scale)
        }
    }
}

/// k-th algebraic coefficient term of the large-`x` expansion as
/// `(signed term, envelope)`; the envelope bounds the term's magnitude.
fn algebraic_term<T: Real>(kind: Kind, rho: T, x: T, k: i32) -> (T, T) {
    let kf = T::lit(f64::from(k));
    let (g_arg, s, sign) = match kind {
        // -(-x)^{-k} / Gamma(1 - k rho) = -(-1)^k sin(pi k rho) Gamma(k rho) / (pi x^k)
        Kind::One => (kf * rho, sin_pi(kf * rho), if k % 2 == 0 { -T::one() } else { T::one() }),
        // -(-x)^{-k} / Gamma(rho - k rho)
        //   = (-1)^k sin(pi rho (k-1)) Gamma(1 + rho (k-1)) / (pi x^k)
        Kind::Two => {
            let m = kf - T::one();
            (
                T::one() + rho * m,
                sin_pi(rho * m),
                if k % 2 == 0 { T::one() } else { -T::one() },
            )
        }
    };
    let envelope = (ln_gamma(g_arg) - kf * x.ln()).exp() / T::PI();
    (sign * s * envelope, envelope)
}

/// Large-argument evaluation with optimal truncation of the algebraic part.
fn large_x<T: Real>(kind: Kind, rho: T, x: T) -> EvalResult<T> {
    let eps = T::epsilon();
    let (res, res_amp) = residue_part(kind, rho, x);
    let y = x.powf(rho.recip());
    let mut acc: CompensatedSum<T> = CompensatedSum::new();
    acc.add(res);
    let mut rounding = res_amp * (T::lit(4.0) + y);
    let mut prev_env = T::infinity();
    let mut k = 1i32;
    let mut used = 0usize;
    let neglected;
    loop {
        let (term, env) = algebraic_term(kind, rho, x, k);
        if env >= prev_env || k > 400 {
            neglected = prev_env.min(env);
            break;
        }
        if env <= eps * T::lit(1e-3) * acc.value().abs() || env < T::min_positive_value() {
            neglected = env;
            break;
        }
        acc.add(term);
        let kf = T::lit(f64::from(k));
        rounding += env * (T::lit(8.0) + kf * x.ln().abs() + ln_gamma(kf * rho + T::one()).abs());
        prev_env = env;
        used += 1;
        k += 1;
    }
    EvalResult {
        value: acc.value(),
        method: Method::Asymptotic,
        terms_used: used,
        est_abs_error: T::lit(2.0) * neglected + eps * rounding,
    }
}

/// Contour-integral representation evaluated by adaptive quadrature. Valid for
/// `0 < rho < 2`, `rho != 1`, `x > 0`.
fn quadrature_path<T: Real>(kind: Kind, rho: T, x: T, target: T) -> Result<EvalResult<T>> {
    let y = x.powf(rho.recip());
    let inv = rho.recip();
    let c = cos_pi(rho);
    let pref = sin_pi(rho) / (T::PI() * rho);
    let scale = match kind {
        Kind::One => T::one(),
        Kind::Two => y.powf(T::one() - rho),
    };
    let weight = (pref * scale).abs().max(T::min_positive_value());
    let opts = QuadOptions::absolute(target * T::lit(0.1) / weight).max_intervals(2000);
    let cutoff = T::lit(700.0).min(-T::min_positive_value().ln());
    let f = |u: T| -> Result<T> {
        let den = T::one() + T::lit(2.0) * u * c + u * u;
        let a = u.powf(inv);
        let b = u.powf(-inv);
        let ea = if y * a > cutoff { T::zero() } else { (-y * a).exp() };
        let eb = if y * b > cutoff || !b.is_finite() { T::zero() } else { (-y * b).exp() };
        let num = match kind {
            Kind::One => ea + eb,
            Kind::Two => a * ea + if eb == T::zero() { T::zero() } else { b * eb },
        };
        Ok(num / den)
    };
    let q = integrate(f, T::zero(), T::one(), &opts)?;
    let (res, res_amp) = residue_part(kind, rho, x);
    let value = pref * scale * q.value + res;
    let est = (pref * scale).abs() * q.abs_error
        + T::epsilon() * (T::lit(8.0) * value.abs() + res_amp * (T::lit(4.0) + y));
    Ok(EvalResult {
        value,
        method: Method::Quadrature,
        terms_used: q.evaluations,
        est_abs_error: est,
    })
}

type CrossoverCache = RwLock<HashMap<(TypeId, u64, bool), f64>>;

fn crossover_cache() -> &'static CrossoverCache {
    static CACHE: OnceLock<CrossoverCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn crossover<T: Real>(kind: Kind, rho: T) -> T {
    let key = (TypeId::of::<T>(), rho.to_f64_lossy().to_bits(), kind == Kind::Two);
    if let Some(&v) = crossover_cache().read().expect("crossover cache poisoned").get(&key) {
        return T::lit(v);
    }
    // scan y = x^{1/rho} upward until the series can no longer certify the target
    let target = T::eval_target();
    let mut best = T::zero();
    let mut i = 1;
    while i <= 200 {
        let y = T::lit(0.25 * f64::from(i));
        let x = y.powf(rho);
        let r = series(kind, rho, x);
        if !(r.est_abs_error <= target) {
            break;
        }
        best = x;
        i += 1;
    }
    crossover_cache()
        .write()
        .expect("crossover cache poisoned")
        .entry(key)
        .or_insert(best.to_f64_lossy());
    best
}

/// Series/asymptotic crossover `x*` for `E_rho(-x)`, calibrated once per order
/// and scalar type.
pub fn ml_crossover<T: Real>(rho: FractionalOrder<T>) -> T {
    crossover(Kind::One, rho.value())
}

/// Crossover `x*` for `E_{rho,rho}(-x)`.
pub fn ml2_crossover<T: Real>(rho: FractionalOrder<T>) -> T {
    crossover(Kind::Two, rho.value())
}

fn closed_form<T: Real>(kind: Kind, rho: T, x: T) -> Option<EvalResult<T>> {
    if x == T::zero() {
        return Some(EvalResult::closed(recip_gamma(kind.beta(rho))));
    }
    if rho == T::one() {
        return Some(EvalResult::closed((-x).exp()));
    }
    if rho == T::lit(2.0) {
        let r = x.sqrt();
        let v = match kind {
            Kind::One => r.cos(),
            Kind::Two => r.sin() / r,
        };
        let mut e = EvalResult::closed(v);
        // argument rounding of sqrt(x) shifts the phase by up to eps * r
        e.est_abs_error += T::epsilon() * r;
        return Some(e);
    }
    None
}

fn evaluate<T: Real>(kind: Kind, rho: FractionalOrder<T>, x: T) -> Result<EvalResult<T>> {
    check_arg(x)?;
    let r = rho.value();
    if let Some(e) = closed_form(kind, r, x) {
        return Ok(e);
    }
    let target = T::eval_target();
    let best = if x <= crossover(kind, r) {
        series(kind, r, x)
    } else {
        let asym = large_x(kind, r, x);
        if asym.est_abs_error <= target {
            asym
        } else {
            let quad = quadrature_path(kind, r, x, target)?;
            if quad.est_abs_error <= asym.est_abs_error {
                quad
            } else {
                asym
            }
        }
    };
    let limit = T::certify_limit();
    if !(best.est_abs_error <= limit) || !best.value.is_finite() {
        return Err(Error::accuracy(
            format!("{}(-{x}) with rho = {r}", kind.name()),
            best.est_abs_error.to_f64_lossy(),
            limit.to_f64_lossy(),
        ));
    }
    Ok(best)
}

/// `E_rho(-x)` for `x >= 0`.
pub fn ml_one<T: Real>(rho: FractionalOrder<T>, x: T) -> Result<EvalResult<T>> {
    evaluate(Kind::One, rho, x)
}

/// `E_{rho,rho}(-x)` for `x >= 0`.
pub fn ml_two<T: Real>(rho: FractionalOrder<T>, x: T) -> Result<EvalResult<T>> {
    evaluate(Kind::Two, rho, x)
}

/// `d/dx E_rho(-x) = -(1/rho) E_{rho,rho}(-x)`.
pub fn ml_one_deriv<T: Real>(rho: FractionalOrder<T>, x: T) -> Result<T> {
    Ok(-ml_two(rho, x)?.value / rho.value())
}

/// First `m` terms of the algebraic expansion
/// `-sum_{k=1}^m (-x)^{-k} / Gamma(1 - k rho)` of `E_rho(-x)`.
///
/// For `1 < rho < 2` the function also carries an exponentially damped
/// oscillation that this sum omits; see [`ml_residue_part`].
pub fn ml_asymptotic<T: Real>(rho: T, x: T, m: usize) -> Result<T> {
    if !(rho > T::zero() && rho < T::lit(2.0)) {
        return Err(Error::domain(format!("asymptotic expansion needs 0 < rho < 2, got {rho}")));
    }
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain(format!("asymptotic expansion needs x > 0, got {x}")));
    }
    let mut acc: CompensatedSum<T> = CompensatedSum::new();
    for k in 1..=m {
        let k = i32::try_from(k).map_err(|_| Error::domain("too many asymptotic terms"))?;
        acc.add(algebraic_term(Kind::One, rho, x, k).0);
    }
    Ok(acc.value())
}

/// Oscillating pole contribution `(2/rho) e^{y cos(pi/rho)} cos(y sin(pi/rho))`,
/// `y = x^{1/rho}`, of `E_rho(-x)`; zero for `rho <= 1`.
pub fn ml_residue_part<T: Real>(rho: FractionalOrder<T>, x: T) -> Result<T> {
    check_arg(x)?;
    Ok(residue_part(Kind::One, rho.value(), x).0)
}

/// Power series for `E_rho(-x)` regardless of the crossover.
pub fn ml_one_series<T: Real>(rho: FractionalOrder<T>, x: T) -> Result<EvalResult<T>> {
    check_arg(x)?;
    Ok(series(Kind::One, rho.value(), x))
}

/// Power series for `E_{rho,rho}(-x)` regardless of the crossover.
pub fn ml_two_series<T: Real>(rho: FractionalOrder<T>, x: T) -> Result<EvalResult<T>> {
    check_arg(x)?;
    Ok(series(Kind::Two, rho.value(), x))
}

fn check_open_order<T: Real>(rho: T) -> Result<()> {
    if rho == T::one() || rho == T::lit(2.0) {
        return Err(Error::domain("rho = 1 and rho = 2 use closed forms"));
    }
    Ok(())
}

/// Large-`x` route for `E_rho(-x)`: pole residue plus optimally truncated
/// algebraic expansion.
pub fn ml_one_large_x<T: Real>(rho: FractionalOrder<T>, x: T) -> Result<EvalResult<T>> {
    check_open_order(rho.value())?;
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain(format!("large-x route needs x > 0, got {x}")));
    }
    Ok(large_x(Kind::One, rho.value(), x))
}

/// Large-`x` route for `E_{rho,rho}(-x)`.
pub fn ml_two_large_x<T: Real>(rho: FractionalOrder<T>, x: T) -> Result<EvalResult<T>> {
    check_open_order(rho.value())?;
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain(format!("large-x route needs x > 0, got {x}")));
    }
    Ok(large_x(Kind::Two, rho.value(), x))
}

/// Contour-integral route for `E_rho(-x)`.
pub fn ml_one_quadrature<T: Real>(rho: FractionalOrder<T>, x: T) -> Result<EvalResult<T>> {
    check_open_order(rho.value())?;
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain(format!("quadrature route needs x > 0, got {x}")));
    }
    quadrature_path(Kind::One, rho.value(), x, T::eval_target())
}

/// Contour-integral route for `E_{rho,rho}(-x)`.
pub fn ml_two_quadrature<T: Real>(rho: FractionalOrder<T>, x: T) -> Result<EvalResult<T>> {
    check_open_order(rho.value())?;
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain(format!("quadrature route needs x > 0, got {x}")));
    }
    quadrature_path(Kind::Two, rho.value(), x, T::eval_target())
}
