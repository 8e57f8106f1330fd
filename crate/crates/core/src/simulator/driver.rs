//! Two-sided Brownian driver addressed by `(seed, replica)`.
//!
//! Positive times use `W`, negative times an independent `W~` with
//! `W(-t) = W~(t)`; each lives in its own seed namespace and replica `p`
//! selects keystream `p` in both.

use serde::{Deserialize, Serialize};

use super::grid::TimeGrid;
use crate::rng::{standard_normals, stream, NS_BACKWARD, NS_FORWARD};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DriverKey {
    pub seed: u64,
    pub replica: u64,
}

impl DriverKey {
    pub fn new(seed: u64, replica: u64) -> Self {
        Self { seed, replica }
    }
}

/// `n` increments of `W` over cells of width `dt` starting at time 0.
pub fn forward_increments<T: Real>(key: DriverKey, dt: T, n: usize) -> Vec<T> {
    let sd = dt.sqrt();
    standard_normals(&mut stream(key.seed, NS_FORWARD, key.replica), n)
        .into_iter()
        .map(|z| T::lit(z) * sd)
        .collect()
}

/// The first `n` standard normals of the negative-time driver. Normal `i`
/// scales the `i`-th cell counted backwards from time 0.
pub fn backward_normals(key: DriverKey, n: usize) -> Vec<f64> {
    standard_normals(&mut stream(key.seed, NS_BACKWARD, key.replica), n)
}

/// Increments of the grid's shared driver (replica 0).
pub fn brownian_increments<T: Real>(grid: &TimeGrid<T>, seed: u64) -> Vec<T> {
    forward_increments(DriverKey::new(seed, 0), grid.dt(), grid.n_steps())
}
