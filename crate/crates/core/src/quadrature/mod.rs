//! Numerical integration: adaptive Gauss-Kronrod on finite intervals and
//! generalized Gauss-Laguerre rules for Gamma-weighted expectations.

mod adaptive;
mod laguerre;

pub use adaptive::{integrate, integrate_with_breaks, QuadOptions, QuadResult};
pub use laguerre::{gamma_expectation_rule, GaussLaguerre};
