//! Exact sampling of a Gaussian convolution process on the grid nodes from
//! its covariance `C(s, t) = int_0^{min(s,t)} K(t-u) K(s-u) du`.

use rayon::prelude::*;

use super::ensemble::{PathEnsemble, PathLabel, ProcessKind, SimulationMethod};
use super::grid::TimeGrid;
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::quadrature::{integrate, QuadOptions};
use crate::rng::{standard_normals, stream, NS_EXACT};
use crate::scalar::Real;

/// Covariance of the process at the grid nodes, row-major `n_nodes x n_nodes`.
pub fn exact_covariance<T: Real, K: Kernel<T> + ?Sized>(kernel: &K, grid: &TimeGrid<T>) -> Result<Vec<T>> {
    grid.require_origin()?;
    let m = grid.n_nodes();
    let dt = grid.dt();
    let opts = QuadOptions::absolute(T::eval_target() * T::lit(0.1));
    let rows: Vec<Vec<T>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let ti = dt * T::from_usize_lossy(i);
            (i..m)
                .map(|j| {
                    if i == 0 {
                        return Ok(T::zero());
                    }
                    let d = dt * T::from_usize_lossy(j - i);
                    // with v = t_i - u
                    let q = integrate(|v: T| Ok(kernel.eval(d + v)? * kernel.eval(v)?), T::zero(), ti, &opts)?
                        .ensure_converged("covariance integral")?;
                    Ok(q.value)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut c = vec![T::zero(); m * m];
    for (i, row) in rows.into_iter().enumerate() {
        for (k, v) in row.into_iter().enumerate() {
            c[i * m + i + k] = v;
            c[(i + k) * m + i] = v;
        }
    }
    Ok(c)
}

/// Lower Cholesky factor of `c + jitter I`, escalating the jitter tenfold from
/// `1e-12 max(diag)` until the factorization succeeds.
pub fn jittered_cholesky<T: Real>(c: &[T], m: usize) -> Result<(Vec<T>, T)> {
    let scale = (0..m).map(|i| c[i * m + i]).fold(T::zero(), T::max);
    if scale == T::zero() {
        return Ok((vec![T::zero(); m * m], T::zero()));
    }
    let mut jitter = scale * T::lit(1e-12);
    for _ in 0..9 {
        if let Some(l) = cholesky(c, m, jitter) {
            return Ok((l, jitter));
        }
        jitter *= T::lit(10.0);
    }
    Err(Error::Factorization(format!(
        "covariance is not positive definite up to jitter {jitter}"
    )))
}

fn cholesky<T: Real>(c: &[T], m: usize, jitter: T) -> Option<Vec<T>> {
    let mut l = vec![T::zero(); m * m];
    for j in 0..m {
        let mut d = c[j * m + j] + jitter;
        for k in 0..j {
            d -= l[j * m + k] * l[j * m + k];
        }
        if !(d > T::zero()) {
            return None;
        }
        let d = d.sqrt();
        l[j * m + j] = d;
        for i in j + 1..m {
            let mut s = c[i * m + j];
            for k in 0..j {
                s -= l[i * m + k] * l[j * m + k];
            }
            l[i * m + j] = s / d;
        }
    }
    Some(l)
}

/// `n_paths` exact draws of `int_0^t K(t-u) dW(u)` at the grid nodes. The
/// origin is pinned to 0 and the remaining nodes are factorized.
pub fn simulate_exact_gaussian<T: Real, K: Kernel<T> + ?Sized>(
    kernel: &K,
    grid: &TimeGrid<T>,
    n_paths: usize,
    seed: u64,
) -> Result<PathEnsemble<T>> {
    let full = exact_covariance(kernel, grid)?;
    let m = grid.n_nodes();
    let r = m - 1;
    let inner: Vec<T> = (1..m).flat_map(|i| (1..m).map(move |j| (i, j))).map(|(i, j)| full[i * m + j]).collect();
    let (l, jitter) = jittered_cholesky(&inner, r)?;
    let paths: Vec<Vec<T>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|p| {
            let z: Vec<T> = standard_normals(&mut stream(seed, NS_EXACT, p), r).into_iter().map(T::lit).collect();
            let mut path = Vec::with_capacity(m);
            path.push(T::zero());
            for i in 0..r {
                path.push(l[i * r..i * r + i + 1].iter().zip(&z).map(|(&a, &b)| a * b).sum());
            }
            path
        })
        .collect();
    let labels = (0..n_paths as u64)
        .map(|p| PathLabel {
            process: ProcessKind::Custom,
            alpha: None,
            seed,
            replica: p,
        })
        .collect();
    Ok(
        PathEnsemble::from_paths(*grid, paths, labels, SimulationMethod::ExactCovariance)?
            .with_provenance("jitter", serde_json::json!(jitter.to_f64_lossy())),
    )
}
