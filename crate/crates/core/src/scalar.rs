//! Scalar abstraction shared by the numerical core.
//!
//! Everything below the diagnostics layer is written against [`Real`], so the
//! same code runs in `f32` and `f64`. Accuracy targets scale with the machine
//! epsilon of the chosen type.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, Signed, ToPrimitive};
use rustfft::FftNum;

pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Signed
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + FftNum
    + 'static
{
    /// Converts an `f64` constant into this type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal must be representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize must be representable")
    }

    /// Absolute error a series or quadrature path must certify to be chosen
    /// without further escalation (1e-10 in double precision).
    fn eval_target() -> Self {
        Self::lit(1e-10).max(Self::epsilon() * Self::lit(64.0))
    }

    /// Largest certified error accepted before an evaluation is reported as an
    /// accuracy failure (1e-8 in double precision).
    fn certify_limit() -> Self {
        Self::lit(1e-8).max(Self::epsilon() * Self::lit(1024.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi<T: Real>(x: T) -> T {
    let two = T::lit(2.0);
    let r = x - two * (x / two).round();
    // r in [-1, 1]
    if r == T::zero() || r.abs() == T::one() {
        return T::zero();
    }
    let half = T::lit(0.5);
    let pi = T::PI();
    if r > half {
        (pi * (T::one() - r)).sin()
    } else if r < -half {
        -(pi * (T::one() + r)).sin()
    } else {
        (pi * r).sin()
    }
}

/// `cos(pi x)` with exact zeros at the half integers.
pub fn cos_pi<T: Real>(x: T) -> T {
    sin_pi(x + T::lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_pi_is_exact_at_integers() {
        for k in -6..=6 {
            assert_eq!(sin_pi(k as f64), 0.0);
        }
        assert!((sin_pi(0.5f64) - 1.0).abs() < 1e-16);
        assert!((sin_pi(1.9f64) - (1.9 * std::f64::consts::PI).sin()).abs() < 1e-15);
        assert_eq!(cos_pi(0.5f64), 0.0);
    }

    #[test]
    fn targets_scale_with_epsilon() {
        assert_eq!(f64::eval_target(), 1e-10);
        assert!(f32::eval_target() > 1e-6);
        assert!(f32::certify_limit() > f32::eval_target());
    }
}
