use super::resolvent::{resolvent, resolvent_deriv, ResolventKernel};
use super::Kernel;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{CompensatedSum, FractionalOrder};

/// `f_n(t) = (1/n) sum_k s_{alpha_k}(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalKernel<T> {
    alphas: Vec<T>,
    rho: FractionalOrder<T>,
}

impl<T: Real> EmpiricalKernel<T> {
    pub fn new(alphas: Vec<T>, rho: FractionalOrder<T>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::domain("empirical kernel needs at least one rate"));
        }
        if let Some(a) = alphas.iter().find(|a| !(**a >= T::zero()) || !a.is_finite()) {
            return Err(Error::domain(format!("rates must be finite and >= 0, got {a}")));
        }
        Ok(Self { alphas, rho })
    }

    pub fn alphas(&self) -> &[T] {
        &self.alphas
    }

    pub fn rho(&self) -> FractionalOrder<T> {
        self.rho
    }
}

impl<T: Real> Kernel<T> for EmpiricalKernel<T> {
    fn eval(&self, t: T) -> Result<T> {
        empirical_kernel(&self.alphas, self.rho, t)
    }
}

pub fn empirical_kernel<T: Real>(alphas: &[T], rho: FractionalOrder<T>, t: T) -> Result<T> {
    if alphas.is_empty() {
        return Err(Error::domain("empirical kernel needs at least one rate"));
    }
    let mut acc = CompensatedSum::new();
    for &a in alphas {
        acc.add(resolvent(&ResolventKernel::new(a, rho)?, t)?);
    }
    Ok(acc.value() / T::from_usize_lossy(alphas.len()))
}

/// `f_n'(t)`, the mean of the resolvent derivatives.
pub fn empirical_kernel_deriv<T: Real>(alphas: &[T], rho: FractionalOrder<T>, t: T) -> Result<T> {
    if alphas.is_empty() {
        return Err(Error::domain("empirical kernel needs at least one rate"));
    }
    let mut acc = CompensatedSum::new();
    for &a in alphas {
        acc.add(resolvent_deriv(&ResolventKernel::new(a, rho)?, t)?);
    }
    Ok(acc.value() / T::from_usize_lossy(alphas.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_rates_reduce_to_one_resolvent() {
        let rho = FractionalOrder::new(1.5f64).unwrap();
        let f = empirical_kernel(&[0.7; 5], rho, 1.3).unwrap();
        let s = resolvent(&ResolventKernel::new(0.7, rho).unwrap(), 1.3).unwrap();
        assert!((f - s).abs() < 1e-15);
        assert_eq!(empirical_kernel(&[0.1, 4.0], rho, 0.0).unwrap(), 1.0);
        assert!(empirical_kernel::<f64>(&[], rho, 1.0).is_err());
        assert!(EmpiricalKernel::new(vec![-1.0], rho).is_err());
    }
}
