//! The Gamma law of the mean-reversion rates `alpha_k`.
//!
//! `lambda` is a rate: the density is
//! `lambda e^{-lambda x} (lambda x)^{mu-1} / Gamma(mu)`.

use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{stream, NS_ALPHA};
use crate::scalar::Real;
use crate::special::{ln_gamma, pochhammer, FractionalOrder};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaMixing<T> {
    mu: T,
    lambda: T,
}

impl<T: Real> GammaMixing<T> {
    pub fn new(mu: T, lambda: T) -> Result<Self> {
        if !(mu > T::zero() && mu.is_finite()) {
            return Err(Error::domain(format!("shape mu must be positive, got {mu}")));
        }
        if !(lambda > T::zero() && lambda.is_finite()) {
            return Err(Error::domain(format!("rate lambda must be positive, got {lambda}")));
        }
        Ok(Self { mu, lambda })
    }

    #[inline]
    pub fn mu(&self) -> T {
        self.mu
    }

    #[inline]
    pub fn lambda(&self) -> T {
        self.lambda
    }
}

/// `n` i.i.d. Gamma(mu, rate lambda) draws; draw `i` uses its own keystream so
/// the output is independent of the thread count.
pub fn sample_alphas<T: Real>(params: &GammaMixing<T>, n: usize, seed: u64) -> Vec<T> {
    let shape = params.mu.to_f64_lossy();
    let scale = 1.0 / params.lambda.to_f64_lossy();
    let law = Gamma::new(shape, scale).expect("validated Gamma parameters");
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, NS_ALPHA, i);
            loop {
                let v = T::lit(law.sample(&mut rng));
                if v > T::zero() && v.is_finite() {
                    break v;
                }
            }
        })
        .collect()
}

/// `E[alpha^n] = (mu)_n / lambda^n`.
pub fn moment_int<T: Real>(params: &GammaMixing<T>, n: u32) -> T {
    let p = pochhammer(params.mu, n).expect("mu validated positive");
    p / params.lambda.powi(n as i32)
}

/// `E[alpha^p] = Gamma(mu + p) / (lambda^p Gamma(mu))`, finite iff `p > -mu`.
pub fn moment_frac<T: Real>(params: &GammaMixing<T>, p: T) -> Result<T> {
    if !(params.mu + p > T::zero()) {
        return Err(Error::domain(format!(
            "moment of order {p} is infinite for shape mu = {}",
            params.mu
        )));
    }
    if p == T::zero() {
        return Ok(T::one());
    }
    Ok((ln_gamma(params.mu + p) - ln_gamma(params.mu) - p * params.lambda.ln()).exp())
}

/// The admissibility condition `mu > 1/(2 rho)`.
pub fn check_condition<T: Real>(params: &GammaMixing<T>, rho: FractionalOrder<T>) -> bool {
    params.mu > T::one() / (T::lit(2.0) * rho.value())
}

pub(crate) fn require_condition<T: Real>(params: &GammaMixing<T>, rho: FractionalOrder<T>) -> Result<()> {
    if check_condition(params, rho) {
        Ok(())
    } else {
        Err(Error::Condition {
            mu: params.mu.to_f64_lossy(),
            rho: rho.value().to_f64_lossy(),
        })
    }
}
