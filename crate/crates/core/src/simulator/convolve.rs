//! Discrete stochastic convolutions `X_j = sum_{i<j} K((j-i) dt) dW_i`.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Reference `O(n^2)` left-endpoint convolution. `lags[m] = K(m dt)` for
/// `m = 0..=n`; returns `n + 1` values with `out[0] = 0`.
pub fn convolve_direct<T: Real>(lags: &[T], increments: &[T]) -> Vec<T> {
    let n = increments.len();
    assert!(lags.len() > n, "need a kernel lag for every increment");
    let mut out = vec![T::zero(); n + 1];
    for (j, o) in out.iter_mut().enumerate().skip(1) {
        let mut acc = T::zero();
        for (i, &dw) in increments[..j].iter().enumerate() {
            acc += lags[j - i] * dw;
        }
        *o = acc;
    }
    out
}

/// Convolution of a fixed kernel with many increment vectors, by FFT for long
/// grids and directly for short ones.
#[derive(Clone)]
pub struct Convolver<T: Real> {
    lags: Vec<T>,
    n: usize,
    fft: Option<FftParts<T>>,
}

#[derive(Clone)]
struct FftParts<T: Real> {
    size: usize,
    spectrum: Vec<Complex<T>>,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

const FFT_THRESHOLD: usize = 64;

impl<T: Real> Convolver<T> {
    /// `lags[m] = K(m dt)`, `m = 0..=n`, where `n` is the number of increments.
    pub fn new(lags: Vec<T>) -> Result<Self> {
        if lags.len() < 2 {
            return Err(Error::domain("convolver needs at least one increment"));
        }
        let n = lags.len() - 1;
        let fft = (n >= FFT_THRESHOLD).then(|| {
            let size = (2 * n).next_power_of_two();
            let mut planner = FftPlanner::new();
            let forward = planner.plan_fft_forward(size);
            let inverse = planner.plan_fft_inverse(size);
            let mut spectrum = vec![Complex::new(T::zero(), T::zero()); size];
            for (m, s) in spectrum.iter_mut().take(n).enumerate() {
                *s = Complex::new(lags[m + 1], T::zero());
            }
            forward.process(&mut spectrum);
            FftParts {
                size,
                spectrum,
                forward,
                inverse,
            }
        });
        Ok(Self { lags, n, fft })
    }

    pub fn n_increments(&self) -> usize {
        self.n
    }

    pub fn lags(&self) -> &[T] {
        &self.lags
    }

    pub fn uses_fft(&self) -> bool {
        self.fft.is_some()
    }

    pub fn convolve(&self, increments: &[T]) -> Vec<T> {
        assert_eq!(increments.len(), self.n, "increment count must match the kernel");
        let Some(f) = &self.fft else {
            return convolve_direct(&self.lags, increments);
        };
        let mut buf = vec![Complex::new(T::zero(), T::zero()); f.size];
        for (b, &dw) in buf.iter_mut().zip(increments) {
            *b = Complex::new(dw, T::zero());
        }
        f.forward.process(&mut buf);
        for (b, s) in buf.iter_mut().zip(&f.spectrum) {
            *b *= *s;
        }
        f.inverse.process(&mut buf);
        let scale = T::one() / T::from_usize_lossy(f.size);
        let mut out = Vec::with_capacity(self.n + 1);
        out.push(T::zero());
        out.extend(buf[..self.n].iter().map(|c| c.re * scale));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_matches_direct() {
        let n = 1000;
        let lags: Vec<f64> = (0..=n).map(|m| (-(m as f64) * 0.003).exp() * (0.01 * m as f64).cos()).collect();
        let incr: Vec<f64> = (0..n).map(|i| ((i * 7919) % 101) as f64 / 50.0 - 1.0).collect();
        let c = Convolver::new(lags.clone()).unwrap();
        assert!(c.uses_fft());
        let a = c.convolve(&incr);
        let b = convolve_direct(&lags, &incr);
        let worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-10, "{worst}");
        assert_eq!(a[0], 0.0);
    }

    #[test]
    fn unit_kernel_gives_the_cumulative_sum() {
        let c = Convolver::new(vec![1.0f64; 6]).unwrap();
        assert!(!c.uses_fft());
        assert_eq!(c.convolve(&[1.0, 2.0, 3.0, 4.0, 5.0]), vec![0.0, 1.0, 3.0, 6.0, 10.0, 15.0]);
    }
}
