//! Gamma function family on the real line.

use crate::error::{Error, Result};
use crate::scalar::{sin_pi, Real};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// Lanczos sum and shifted argument for x >= 0.5
fn lanczos<T: Real>(x: T) -> (T, T) {
    let xm1 = x - T::one();
    let mut a = T::lit(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += T::lit(c) / (xm1 + T::from_usize_lossy(i));
    }
    let t = xm1 + T::lit(LANCZOS_G + 0.5);
    (a, t)
}

fn is_nonpositive_integer<T: Real>(x: T) -> bool {
    x <= T::zero() && x == x.floor()
}

/// Gamma function. Returns NaN at the poles.
pub fn gamma<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if is_nonpositive_integer(x) {
        return T::nan();
    }
    if x < T::lit(0.5) {
        return T::PI() / (sin_pi(x) * gamma(T::one() - x));
    }
    if x == x.floor() && x <= T::lit(30.0) {
        let mut p = T::one();
        let mut k = T::lit(2.0);
        while k < x {
            p *= k;
            k += T::one();
        }
        return p;
    }
    let (a, t) = lanczos(x);
    let sqrt_2pi = (T::lit(2.0) * T::PI()).sqrt();
    // split the power so that large arguments overflow only when the result does
    let p = t.powf((x - T::lit(0.5)) / T::lit(2.0));
    sqrt_2pi * p * (p * (-t).exp()) * a
}

/// `ln |Gamma(x)|`. Infinite at the poles.
pub fn ln_gamma<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if is_nonpositive_integer(x) {
        return T::infinity();
    }
    if x < T::lit(0.5) {
        return (T::PI() / sin_pi(x).abs()).ln() - ln_gamma(T::one() - x);
    }
    if x < T::lit(20.0) {
        return gamma(x).abs().ln();
    }
    let (a, t) = lanczos(x);
    let half_ln_2pi = T::lit(0.918_938_533_204_672_8);
    half_ln_2pi + (x - T::lit(0.5)) * t.ln() - t + a.ln()
}

/// Sign of `Gamma(x)`; zero at the poles.
pub fn gamma_sign<T: Real>(x: T) -> T {
    if x > T::zero() {
        return T::one();
    }
    if is_nonpositive_integer(x) {
        return T::zero();
    }
    // Gamma(x) for -n-1 < x < -n has sign (-1)^(n+1)
    let n = (-x).floor().to_i64().unwrap_or(0);
    if n % 2 == 0 {
        -T::one()
    } else {
        T::one()
    }
}

/// `1 / Gamma(x)`, with the value 0 at the poles.
pub fn recip_gamma<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if is_nonpositive_integer(x) {
        return T::zero();
    }
    if x < T::lit(0.5) {
        return sin_pi(x) * gamma(T::one() - x) / T::PI();
    }
    let g = gamma(x);
    if g.is_infinite() {
        let ln = -ln_gamma(x);
        return ln.exp();
    }
    T::one() / g
}

/// Rising factorial `(mu)_k = Gamma(mu + k) / Gamma(mu)`.
pub fn pochhammer<T: Real>(mu: T, k: u32) -> Result<T> {
    if !(mu > T::zero()) {
        return Err(Error::domain(format!("pochhammer requires mu > 0, got {mu}")));
    }
    if k <= 32 {
        let mut p = T::one();
        for j in 0..k {
            p *= mu + T::lit(j as f64);
        }
        return Ok(p);
    }
    Ok(ln_pochhammer(mu, T::lit(k as f64)).exp())
}

/// `ln Gamma(mu + k) - ln Gamma(mu)` for `mu > 0`, `k >= 0`.
pub fn ln_pochhammer<T: Real>(mu: T, k: T) -> T {
    ln_gamma(mu + k) - ln_gamma(mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_at_known_points() {
        assert!(rel(gamma(1.0f64), 1.0) < 1e-15);
        assert!(rel(gamma(5.0f64), 24.0) < 1e-14);
        assert!(rel(gamma(0.5f64), std::f64::consts::PI.sqrt()) < 1e-14);
        assert!(rel(gamma(-0.5f64), -2.0 * std::f64::consts::PI.sqrt()) < 1e-14);
        assert!(rel(gamma(1.9f64), 0.961_765_831_907_387_4) < 1e-14);
        assert!(rel(gamma(171.0f64), 7.257_415_615_307_999e306) < 1e-12);
        assert!(gamma(-2.0f64).is_nan());
    }

    #[test]
    fn ln_gamma_matches_for_large_arguments() {
        // ln Gamma(100) = ln(99!)
        assert!(rel(ln_gamma(100.0f64), 359.134_205_369_575_4) < 1e-14);
        assert!(rel(ln_gamma(1000.5f64), 5_908.674_175_848_677) < 1e-14);
        assert!(rel(ln_gamma(-2.5f64), (0.945_308_720_482_941_9f64).ln()) < 1e-13);
    }

    #[test]
    fn reciprocal_gamma_vanishes_at_poles() {
        for n in 0..6 {
            assert_eq!(recip_gamma(-(n as f64)), 0.0);
        }
        // 1 / Gamma(-0.9)
        assert!(rel(recip_gamma(-0.9f64), -0.094_602_330_550_059_98) < 1e-13);
        let r = recip_gamma(150.0f64);
        assert!(r > 0.0 && r < 1e-260);
    }

    #[test]
    fn gamma_sign_alternates_on_negative_axis() {
        assert_eq!(gamma_sign(-0.5f64), -1.0);
        assert_eq!(gamma_sign(-1.5f64), 1.0);
        assert_eq!(gamma_sign(-2.5f64), -1.0);
        assert_eq!(gamma_sign(-3.0f64), 0.0);
    }

    #[test]
    fn pochhammer_small_and_large() {
        assert_eq!(pochhammer(4.0f64, 3).unwrap(), 120.0);
        assert_eq!(pochhammer(2.5f64, 0).unwrap(), 1.0);
        assert_eq!(pochhammer(0.5f64, 2).unwrap(), 0.75);
        let big = pochhammer(1.0f64, 40).unwrap();
        assert!(rel(big, 8.159_152_832_478_977e47) < 1e-12);
        assert!(pochhammer(0.0f64, 2).is_err());
        assert!(pochhammer(-1.0f64, 2).is_err());
    }

    #[test]
    fn single_precision_is_consistent() {
        assert!((gamma(4.5f32) - 11.631_728).abs() < 1e-4);
        assert_eq!(recip_gamma(-3.0f32), 0.0);
    }
}
