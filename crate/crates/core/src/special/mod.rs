//! Special functions: Gamma family, Mittag-Leffler functions and their
//! Gamma-mixed generalization.

pub(crate) mod gamma;
mod generalized;
mod mittag_leffler;
mod summation;

pub use gamma::{gamma, gamma_sign, ln_gamma, ln_pochhammer, pochhammer, recip_gamma};
pub use generalized::{g_rho_quadrature, g_rho_series, gamma_expectation};
pub use mittag_leffler::{
    ml2_crossover, ml_asymptotic, ml_crossover, ml_one, ml_one_deriv, ml_one_large_x,
    ml_one_quadrature, ml_one_series, ml_residue_part, ml_two, ml_two_large_x,
    ml_two_quadrature, ml_two_series, EvalResult, FractionalOrder, Method,
};
pub use summation::{compensated_sum, CompensatedSum};
