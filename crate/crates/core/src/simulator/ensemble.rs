use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::grid::TimeGrid;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::CompensatedSum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcessKind {
    /// `X_k(t) = int_0^t s_{alpha_k}(t - u) dW(u)`
    Component,
    /// `Y_n`, mean of components on one driver
    EmpiricalMean,
    /// `Y(t) = int_0^t G(t - u) dW(u)`
    Limit,
    /// `eta(t) = int_{-inf}^t G(t - u) dW(u)`
    Stationary,
    /// `xi_k(t) = int_{-inf}^t s_{alpha_k}(t - u) dW(u)`
    Xi,
    /// `eta_n`, mean of the `xi_k`
    StationaryMean,
    /// Convolution with a caller-supplied kernel
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimulationMethod {
    IncrementQuadrature,
    ExactCovariance,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathLabel {
    pub process: ProcessKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub seed: u64,
    pub replica: u64,
}

/// Paths sharing one grid, stored row-major (`n_paths x n_nodes`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathEnsemble<T> {
    pub grid: TimeGrid<T>,
    pub values: Vec<T>,
    pub labels: Vec<PathLabel>,
    pub method: SimulationMethod,
    /// Numerical choices made while simulating (truncation horizon, tail
    /// bound, history mesh, ...).
    pub provenance: BTreeMap<String, serde_json::Value>,
}

impl<T: Real> PathEnsemble<T> {
    pub fn from_paths(
        grid: TimeGrid<T>,
        paths: Vec<Vec<T>>,
        labels: Vec<PathLabel>,
        method: SimulationMethod,
    ) -> Result<Self> {
        if paths.len() != labels.len() {
            return Err(Error::domain("one label per path required"));
        }
        let width = grid.n_nodes();
        let mut values = Vec::with_capacity(paths.len() * width);
        for p in paths {
            if p.len() != width {
                return Err(Error::domain(format!(
                    "path has {} values, grid has {width} nodes",
                    p.len()
                )));
            }
            values.extend(p);
        }
        Ok(Self {
            grid,
            values,
            labels,
            method,
            provenance: BTreeMap::new(),
        })
    }

    pub fn n_paths(&self) -> usize {
        self.labels.len()
    }

    pub fn path(&self, i: usize) -> &[T] {
        let w = self.grid.n_nodes();
        &self.values[i * w..(i + 1) * w]
    }

    pub fn paths(&self) -> impl Iterator<Item = &[T]> {
        self.values.chunks_exact(self.grid.n_nodes())
    }

    /// Values of every path at node `j`.
    pub fn column(&self, j: usize) -> Vec<T> {
        self.paths().map(|p| p[j]).collect()
    }

    pub fn with_provenance(mut self, key: &str, value: serde_json::Value) -> Self {
        self.provenance.insert(key.to_string(), value);
        self
    }
}

/// Pointwise mean of the paths of an ensemble.
pub fn pointwise_mean<T: Real>(ensemble: &PathEnsemble<T>) -> Result<Vec<T>> {
    let n = ensemble.n_paths();
    if n == 0 {
        return Err(Error::domain("empty ensemble"));
    }
    let w = ensemble.grid.n_nodes();
    let inv = T::one() / T::from_usize_lossy(n);
    Ok((0..w)
        .map(|j| {
            let acc: CompensatedSum<T> = ensemble.paths().map(|p| p[j]).collect();
            acc.value() * inv
        })
        .collect())
}
