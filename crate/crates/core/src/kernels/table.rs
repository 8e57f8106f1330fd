use std::sync::Arc;

use rayon::prelude::*;

use super::Kernel;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A kernel tabulated on a logarithmic grid over `[lo, hi]` and interpolated
/// by four-point Lagrange polynomials in `ln t`; outside the grid the exact
/// kernel is evaluated.
#[derive(Clone)]
pub struct TabulatedKernel<T: Real> {
    exact: Arc<dyn Kernel<T>>,
    ln_lo: T,
    step: T,
    values: Vec<T>,
}

impl<T: Real> TabulatedKernel<T> {
    /// Tabulates `exact` with consecutive nodes in ratio `ratio > 1`.
    pub fn new(exact: Arc<dyn Kernel<T>>, lo: T, hi: T, ratio: T) -> Result<Self> {
        if !(lo > T::zero() && hi > lo && ratio > T::one()) {
            return Err(Error::domain("table needs 0 < lo < hi and ratio > 1"));
        }
        let step = ratio.ln();
        let ln_lo = lo.ln();
        let n = ((hi.ln() - ln_lo) / step).ceil().to_usize().unwrap_or(0) + 4;
        let values = (0..n)
            .into_par_iter()
            .map(|i| exact.eval((ln_lo + step * T::from_usize_lossy(i)).exp()))
            .collect::<Result<Vec<T>>>()?;
        Ok(Self {
            exact,
            ln_lo,
            step,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl<T: Real> Kernel<T> for TabulatedKernel<T> {
    fn eval(&self, t: T) -> Result<T> {
        if !(t > T::zero()) {
            return self.exact.eval(t);
        }
        let s = (t.ln() - self.ln_lo) / self.step;
        let n = self.values.len();
        if s < T::one() || s > T::from_usize_lossy(n - 3) {
            return self.exact.eval(t);
        }
        let i = s.floor().to_usize().unwrap_or(1).clamp(1, n - 3);
        let u = s - T::from_usize_lossy(i);
        // nodes at offsets -1, 0, 1, 2 relative to i
        let one = T::one();
        let two = T::lit(2.0);
        let six = T::lit(6.0);
        let w0 = -u * (u - one) * (u - two) / six;
        let w1 = (u + one) * (u - one) * (u - two) / two;
        let w2 = -(u + one) * u * (u - two) / two;
        let w3 = (u + one) * u * (u - one) / six;
        Ok(w0 * self.values[i - 1] + w1 * self.values[i] + w2 * self.values[i + 1] + w3 * self.values[i + 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::FnKernel;

    #[test]
    fn interpolates_a_power_law() {
        let exact: Arc<dyn Kernel<f64>> = Arc::new(FnKernel(|t: f64| Ok((1.0 + t).powf(-3.0))));
        let tab = TabulatedKernel::new(exact.clone(), 1.0, 1e4, 1.01).unwrap();
        for &t in &[0.5, 1.3, 17.7, 999.0, 5e4] {
            let e = exact.eval(t).unwrap();
            assert!((tab.eval(t).unwrap() - e).abs() < 1e-7 * e.abs().max(1e-12), "{t}");
        }
    }
}
