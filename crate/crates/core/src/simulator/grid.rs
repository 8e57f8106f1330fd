use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform grid `t_j = t0 + j dt`, `j = 0..=n_steps`, on `[t0, t_end]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid<T> {
    t0: T,
    t_end: T,
    n_steps: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t0: T, t_end: T, n_steps: usize) -> Result<Self> {
        if !(t0.is_finite() && t_end.is_finite() && t_end > t0) {
            return Err(Error::domain(format!("grid needs finite t0 < T, got [{t0}, {t_end}]")));
        }
        if n_steps == 0 {
            return Err(Error::domain("grid needs at least one step"));
        }
        Ok(Self { t0, t_end, n_steps })
    }

    #[inline]
    pub fn t0(&self) -> T {
        self.t0
    }

    #[inline]
    pub fn t_end(&self) -> T {
        self.t_end
    }

    #[inline]
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.n_steps + 1
    }

    #[inline]
    pub fn dt(&self) -> T {
        (self.t_end - self.t0) / T::from_usize_lossy(self.n_steps)
    }

    #[inline]
    pub fn span(&self) -> T {
        self.t_end - self.t0
    }

    #[inline]
    pub fn node(&self, j: usize) -> T {
        if j == self.n_steps {
            self.t_end
        } else {
            self.t0 + self.dt() * T::from_usize_lossy(j)
        }
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..=self.n_steps).map(|j| self.node(j)).collect()
    }

    /// Index of the node closest to `t`.
    pub fn index_of(&self, t: T) -> usize {
        let j = ((t - self.t0) / self.dt()).round().to_usize().unwrap_or(0);
        j.min(self.n_steps)
    }

    pub(crate) fn require_origin(&self) -> Result<()> {
        if self.t0 != T::zero() {
            return Err(Error::domain(format!(
                "processes started at 0 need a grid with t0 = 0, got {}",
                self.t0
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_and_spacing() {
        let g = TimeGrid::new(0.0f64, 2.0, 4).unwrap();
        assert_eq!(g.dt(), 0.5);
        assert_eq!(g.nodes(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(g.index_of(1.2), 2);
        assert!(TimeGrid::new(1.0f64, 1.0, 4).is_err());
        assert!(TimeGrid::new(0.0f64, 1.0, 0).is_err());
    }
}
