//! Stationary convolutions `int_{-inf}^t K(t-u) dW(u)` with truncated history.
//!
//! The history is split into a near part of uniform cells of width `dt`
//! (convolved together with the forward increments) and a far part on a graded
//! mesh reaching back to the truncation horizon. On the far mesh the kernel is
//! frozen at cell midpoints, and its dependence on the grid time is replaced by
//! a Chebyshev interpolant, so the far contribution costs `O(r)` per node.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::convolve::Convolver;
use super::driver::{backward_normals, forward_increments, DriverKey};
use super::ensemble::{pointwise_mean, PathEnsemble, PathLabel, ProcessKind, SimulationMethod};
use super::grid::TimeGrid;
use super::one_sided::{kernel_lags, refuse_rough_order};
use crate::error::{Error, Result};
use crate::kernels::{
    resolvent_tail_bound, tail_variance_bound, truncation_horizon, Kernel, MeanKernel, ResolventKernel,
    TabulatedKernel,
};
use crate::scalar::Real;
use crate::special::FractionalOrder;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationaryOptions<T> {
    /// Bound on the variance of the discarded history.
    pub tol: T,
    pub max_horizon: T,
}

impl<T: Real> StationaryOptions<T> {
    pub fn new(tol: T) -> Self {
        Self {
            tol,
            max_horizon: T::lit(1e9),
        }
    }
}

/// How the history was discretized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationaryPlan {
    pub tol: f64,
    /// Truncation horizon `T_trunc`.
    pub horizon: f64,
    /// Certified variance bound of the history beyond the horizon.
    pub tail_bound: f64,
    /// Length of the uniformly discretized near history.
    pub near_history: f64,
    pub far_cells: usize,
    /// Number of interpolation nodes in time (0 when the far part is absent,
    /// `n_nodes` when it is evaluated at every node).
    pub interpolation_order: usize,
    /// Estimated variance error of the midpoint rule on the far mesh.
    pub mesh_error: f64,
    /// Estimated variance error of the time interpolation.
    pub interpolation_error: f64,
}

struct FarPart<T: Real> {
    sqrt_widths: Vec<T>,
    /// Per kernel, row-major `[eval point][cell]` values `K(tau + m_c)`.
    values: Vec<Vec<T>>,
    /// Row-major `[node][eval point]` interpolation matrix; `None` when the
    /// eval points are the grid nodes.
    interp: Option<Vec<T>>,
    n_eval: usize,
}

/// Samples stationary convolution paths of several kernels on one driver.
pub struct StationaryEngine<T: Real> {
    grid: TimeGrid<T>,
    n_hist: usize,
    near: Vec<Convolver<T>>,
    far: Option<FarPart<T>>,
    plan: StationaryPlan,
}

impl<T: Real> StationaryEngine<T> {
    /// Engine for `eta` with kernel `G`.
    pub fn for_mean_kernel(mk: &MeanKernel<T>, grid: &TimeGrid<T>, opts: &StationaryOptions<T>) -> Result<Self> {
        Self::for_mean_and_rates(mk, &[], grid, opts)
    }

    /// Engine for `xi_k`, one kernel per rate.
    pub fn for_rates(
        alphas: &[T],
        rho: FractionalOrder<T>,
        grid: &TimeGrid<T>,
        opts: &StationaryOptions<T>,
    ) -> Result<Self> {
        refuse_rough_order(rho)?;
        if alphas.is_empty() {
            return Err(Error::domain("stationary ensemble needs at least one rate"));
        }
        let (kernels, horizon, tail) = rate_kernels(alphas, rho, opts)?;
        let probes = extreme_rates(alphas);
        let far = kernels.clone();
        Self::build(kernels, far, &probes, grid, horizon, tail, opts.tol)
    }

    /// Kernel 0 is `G`, kernels `1..` are the resolvents of `alphas`.
    pub fn for_mean_and_rates(
        mk: &MeanKernel<T>,
        alphas: &[T],
        grid: &TimeGrid<T>,
        opts: &StationaryOptions<T>,
    ) -> Result<Self> {
        refuse_rough_order(mk.rho)?;
        let mut horizon = truncation_horizon(mk, opts.tol, opts.max_horizon)?;
        let mut tail = tail_variance_bound(mk, horizon)?;
        let exact: Arc<dyn Kernel<T>> = Arc::new(*mk);
        let mut kernels = vec![exact.clone()];
        let mut far = vec![exact.clone()];
        let mut probes = vec![0];
        if !alphas.is_empty() {
            let (rk, h, t) = rate_kernels(alphas, mk.rho, opts)?;
            horizon = horizon.max(h);
            tail = tail.max(t);
            probes.extend(extreme_rates(alphas).into_iter().map(|i| i + 1));
            kernels.extend(rk.iter().cloned());
            far.extend(rk);
        }
        if mk.rho.value() != T::one() {
            let n_hist = near_cells(grid);
            let lo = grid.dt() * T::from_usize_lossy(n_hist) * T::lit(0.5);
            let hi = horizon + grid.span() * T::lit(2.0);
            if hi > lo * T::lit(1.5) {
                far[0] = Arc::new(TabulatedKernel::new(exact, lo, hi, T::lit(1.01))?);
            }
        }
        Self::build(kernels, far, &probes, grid, horizon, tail, opts.tol)
    }

    fn build(
        kernels: Vec<Arc<dyn Kernel<T>>>,
        far_kernels: Vec<Arc<dyn Kernel<T>>>,
        probes: &[usize],
        grid: &TimeGrid<T>,
        horizon: T,
        tail_bound: T,
        tol: T,
    ) -> Result<Self> {
        let (dt, n) = (grid.dt(), grid.n_steps());
        let n_hist = near_cells(grid);
        let near_len = dt * T::from_usize_lossy(n_hist);
        let near = kernels
            .par_iter()
            .map(|k| Convolver::new(kernel_lags(k.as_ref(), dt, n_hist + n)?))
            .collect::<Result<Vec<_>>>()?;
        let mut plan = StationaryPlan {
            tol: tol.to_f64_lossy(),
            horizon: horizon.to_f64_lossy(),
            tail_bound: tail_bound.to_f64_lossy(),
            near_history: near_len.to_f64_lossy(),
            far_cells: 0,
            interpolation_order: 0,
            mesh_error: 0.0,
            interpolation_error: 0.0,
        };
        let far = if horizon > near_len {
            let probe_k: Vec<&dyn Kernel<T>> = probes.iter().map(|&i| far_kernels[i].as_ref()).collect();
            let budget = tol * T::lit(0.01);
            let (cells, mesh_error) = far_mesh(&probe_k, grid, near_len, horizon, budget)?;
            let (eval, interp, interp_error) = time_projection(&probe_k, grid, &cells, budget)?;
            let values = far_kernels
                .par_iter()
                .map(|k| {
                    let mut row = Vec::with_capacity(eval.len() * cells.len());
                    for &s in &eval {
                        for &(m, _) in &cells {
                            row.push(k.eval(s + m)?);
                        }
                    }
                    Ok(row)
                })
                .collect::<Result<Vec<_>>>()?;
            plan.far_cells = cells.len();
            plan.interpolation_order = eval.len();
            plan.mesh_error = mesh_error.to_f64_lossy();
            plan.interpolation_error = interp_error.to_f64_lossy();
            Some(FarPart {
                sqrt_widths: cells.iter().map(|&(_, h)| h.sqrt()).collect(),
                values,
                interp,
                n_eval: eval.len(),
            })
        } else {
            None
        };
        Ok(Self {
            grid: *grid,
            n_hist,
            near,
            far,
            plan,
        })
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn plan(&self) -> &StationaryPlan {
        &self.plan
    }

    pub fn n_kernels(&self) -> usize {
        self.near.len()
    }

    /// One path per kernel on the two-sided driver `key`.
    pub fn sample(&self, key: DriverKey) -> Vec<Vec<T>> {
        let n = self.grid.n_steps();
        let n_far = self.far.as_ref().map_or(0, |f| f.sqrt_widths.len());
        let z = backward_normals(key, self.n_hist + n_far);
        let sd = self.grid.dt().sqrt();
        // chronological order: oldest near cell first, then the forward increments
        let mut incr: Vec<T> = (0..self.n_hist).rev().map(|i| -T::lit(z[i]) * sd).collect();
        incr.extend(forward_increments::<T>(key, self.grid.dt(), n));
        let far_incr: Vec<T> = match &self.far {
            Some(f) => f
                .sqrt_widths
                .iter()
                .enumerate()
                .map(|(c, &w)| -T::lit(z[self.n_hist + c]) * w)
                .collect(),
            None => Vec::new(),
        };
        self.near
            .iter()
            .enumerate()
            .map(|(k, conv)| {
                let full = conv.convolve(&incr);
                let mut path = full[self.n_hist..].to_vec();
                if let Some(f) = &self.far {
                    add_far(f, k, &far_incr, &mut path);
                }
                path
            })
            .collect()
    }
}

fn add_far<T: Real>(f: &FarPart<T>, k: usize, dw: &[T], path: &mut [T]) {
    let n_cells = dw.len();
    let vals: Vec<T> = f.values[k]
        .chunks(n_cells)
        .map(|row| row.iter().zip(dw).map(|(&a, &b)| a * b).sum())
        .collect();
    match &f.interp {
        None => {
            for (p, v) in path.iter_mut().zip(&vals) {
                *p += *v;
            }
        }
        Some(l) => {
            for (j, p) in path.iter_mut().enumerate() {
                let row = &l[j * f.n_eval..(j + 1) * f.n_eval];
                *p += row.iter().zip(&vals).map(|(&a, &b)| a * b).sum::<T>();
            }
        }
    }
}

fn near_cells<T: Real>(grid: &TimeGrid<T>) -> usize {
    (grid.span().max(T::one()) / grid.dt()).ceil().to_usize().unwrap_or(1).max(1)
}

fn rate_kernels<T: Real>(
    alphas: &[T],
    rho: FractionalOrder<T>,
    opts: &StationaryOptions<T>,
) -> Result<(Vec<Arc<dyn Kernel<T>>>, T, T)> {
    let mut horizon = T::zero();
    let mut tail = T::zero();
    let mut kernels: Vec<Arc<dyn Kernel<T>>> = Vec::with_capacity(alphas.len());
    let q = T::lit(2.0) * rho.value() - T::one();
    for &a in alphas {
        if !(a > T::zero()) {
            return Err(Error::domain(format!("stationary component needs alpha > 0, got {a}")));
        }
        let k = ResolventKernel::new(a, rho)?;
        // the bound is c T^{-q}; solve c T^{-q} = tol and round up
        let c = resolvent_tail_bound(&k, T::one())?;
        let h = (c / opts.tol).powf(q.recip()) * T::lit(1.01);
        if h > opts.max_horizon {
            return Err(Error::Truncation {
                tol: opts.tol.to_f64_lossy(),
                max_horizon: opts.max_horizon.to_f64_lossy(),
            });
        }
        horizon = horizon.max(h);
        tail = tail.max(resolvent_tail_bound(&k, h)?);
        kernels.push(Arc::new(k));
    }
    Ok((kernels, horizon, tail))
}

fn extreme_rates<T: Real>(alphas: &[T]) -> Vec<usize> {
    let mut lo = 0;
    let mut hi = 0;
    for (i, &a) in alphas.iter().enumerate() {
        if a < alphas[lo] {
            lo = i;
        }
        if a > alphas[hi] {
            hi = i;
        }
    }
    if lo == hi {
        vec![lo]
    } else {
        vec![lo, hi]
    }
}

/// Graded cells `(midpoint, width)` covering lags `[start, horizon]`, each
/// small enough that freezing the kernel at its midpoint costs at most a share
/// of `budget` proportional to `h / v`.
fn far_mesh<T: Real>(
    probes: &[&dyn Kernel<T>],
    grid: &TimeGrid<T>,
    start: T,
    horizon: T,
    budget: T,
) -> Result<(Vec<(T, T)>, T)> {
    let span = grid.span();
    let shifts = [T::zero(), span * T::lit(0.5), span];
    let log_len = (horizon / start).ln().max(T::one()) * T::lit(1.2);
    let min_width = grid.dt();
    let mut cells = Vec::new();
    let mut total = T::zero();
    let mut v = start;
    let mut h = start * T::lit(0.25);
    while v < horizon {
        h = (h * T::lit(2.0)).min(v * T::lit(0.25));
        loop {
            h = h.min(horizon - v);
            let m = v + h * T::lit(0.5);
            let mut err = T::zero();
            for k in probes {
                for &s in &shifts {
                    let km = k.eval(s + m)?;
                    let mut f = [T::zero(); 5];
                    for (i, fi) in f.iter_mut().enumerate() {
                        let u = v + h * T::from_usize_lossy(i) * T::lit(0.25);
                        *fi = (k.eval(s + u)? - km).powi(2);
                    }
                    let simpson = h / T::lit(12.0) * (f[0] + T::lit(4.0) * (f[1] + f[3]) + T::lit(2.0) * f[2] + f[4]);
                    err = err.max(simpson);
                }
            }
            if err <= budget * h / (v * log_len) || h <= min_width {
                total += err;
                cells.push((m, h));
                break;
            }
            h *= T::lit(0.5);
        }
        v += h;
    }
    Ok((cells, total))
}

/// Points at which the far part is evaluated and the matrix interpolating
/// them to the grid nodes.
#[allow(clippy::type_complexity)]
fn time_projection<T: Real>(
    probes: &[&dyn Kernel<T>],
    grid: &TimeGrid<T>,
    cells: &[(T, T)],
    budget: T,
) -> Result<(Vec<T>, Option<Vec<T>>, T)> {
    let n_nodes = grid.n_nodes();
    let offsets: Vec<T> = (0..n_nodes).map(|j| grid.dt() * T::from_usize_lossy(j)).collect();
    let span = grid.span();
    let mut r = 8;
    while r < n_nodes {
        let nodes = chebyshev_nodes(r, span);
        let checks: Vec<T> = (0..=2 * r)
            .map(|q| span * T::from_usize_lossy(q) / T::from_usize_lossy(2 * r))
            .collect();
        let basis: Vec<Vec<T>> = checks.iter().map(|&s| lagrange_row(&nodes, s)).collect();
        let mut worst = T::zero();
        for k in probes {
            let mut total = T::zero();
            for &(m, h) in cells {
                let at_nodes = nodes.iter().map(|&s| k.eval(s + m)).collect::<Result<Vec<T>>>()?;
                let mut err = T::zero();
                for (row, &s) in basis.iter().zip(&checks) {
                    let approx: T = row.iter().zip(&at_nodes).map(|(&a, &b)| a * b).sum();
                    err = err.max((approx - k.eval(s + m)?).abs());
                }
                total += err * err * h;
            }
            worst = worst.max(total);
        }
        if worst <= budget {
            let interp = offsets.iter().flat_map(|&s| lagrange_row(&nodes, s)).collect();
            return Ok((nodes, Some(interp), worst));
        }
        r *= 2;
        if r > 128 {
            return Err(Error::accuracy("far-history time interpolation", worst.to_f64_lossy(), budget.to_f64_lossy()));
        }
    }
    Ok((offsets, None, T::zero()))
}

fn chebyshev_nodes<T: Real>(r: usize, span: T) -> Vec<T> {
    (0..r)
        .map(|i| {
            let x = (T::PI() * T::from_usize_lossy(2 * i + 1) / T::from_usize_lossy(2 * r)).cos();
            span * (T::one() - x) * T::lit(0.5)
        })
        .collect()
}

/// Barycentric Lagrange weights at `s` for first-kind Chebyshev nodes.
fn lagrange_row<T: Real>(nodes: &[T], s: T) -> Vec<T> {
    let r = nodes.len();
    if let Some(i) = nodes.iter().position(|&x| x == s) {
        let mut row = vec![T::zero(); r];
        row[i] = T::one();
        return row;
    }
    let w: Vec<T> = (0..r)
        .map(|i| {
            let sign = if i % 2 == 0 { T::one() } else { -T::one() };
            let theta = T::PI() * T::from_usize_lossy(2 * i + 1) / T::from_usize_lossy(2 * r);
            sign * theta.sin() / (s - nodes[i])
        })
        .collect();
    let total: T = w.iter().copied().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Replicas `0..n_paths` of `eta`.
pub fn simulate_stationary_paths<T: Real>(
    mk: &MeanKernel<T>,
    grid: &TimeGrid<T>,
    seed: u64,
    n_paths: usize,
    opts: &StationaryOptions<T>,
) -> Result<PathEnsemble<T>> {
    let engine = StationaryEngine::for_mean_kernel(mk, grid, opts)?;
    let paths: Vec<Vec<T>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|p| engine.sample(DriverKey::new(seed, p)).pop().expect("one kernel"))
        .collect();
    let labels = (0..n_paths as u64)
        .map(|p| PathLabel {
            process: ProcessKind::Stationary,
            alpha: None,
            seed,
            replica: p,
        })
        .collect();
    with_plan(
        PathEnsemble::from_paths(*grid, paths, labels, SimulationMethod::IncrementQuadrature)?,
        engine.plan(),
    )
}

/// `xi_k` for every rate on the shared driver `(seed, 0)`.
pub fn simulate_xi_paths<T: Real>(
    alphas: &[T],
    rho: FractionalOrder<T>,
    grid: &TimeGrid<T>,
    seed: u64,
    opts: &StationaryOptions<T>,
) -> Result<PathEnsemble<T>> {
    let engine = StationaryEngine::for_rates(alphas, rho, grid, opts)?;
    let paths = engine.sample(DriverKey::new(seed, 0));
    let labels = alphas
        .iter()
        .map(|&a| PathLabel {
            process: ProcessKind::Xi,
            alpha: Some(a.to_f64_lossy()),
            seed,
            replica: 0,
        })
        .collect();
    with_plan(
        PathEnsemble::from_paths(*grid, paths, labels, SimulationMethod::IncrementQuadrature)?,
        engine.plan(),
    )
}

/// `eta_n(t)`, the pointwise mean of a `xi` ensemble.
pub fn empirical_stationary_mean<T: Real>(ensemble: &PathEnsemble<T>) -> Result<Vec<T>> {
    pointwise_mean(ensemble)
}

fn with_plan<T: Real>(e: PathEnsemble<T>, plan: &StationaryPlan) -> Result<PathEnsemble<T>> {
    Ok(e.with_provenance("truncation", serde_json::to_value(plan)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{resolvent_l2_norm, FnKernel};
    use crate::mixing::GammaMixing;

    #[test]
    fn interpolation_rows_reproduce_polynomials() {
        let nodes = chebyshev_nodes::<f64>(8, 2.0);
        let row = lagrange_row(&nodes, 0.37);
        let p = |x: f64| 1.0 - 2.0 * x + 0.5 * x.powi(5);
        let approx: f64 = row.iter().zip(&nodes).map(|(w, &x)| w * p(x)).sum();
        assert!((approx - p(0.37)).abs() < 1e-12);
    }

    #[test]
    fn ou_eta_variance() {
        let mk = MeanKernel::new(FractionalOrder::new(1.0).unwrap(), GammaMixing::new(4.0, 1.0).unwrap());
        let grid = TimeGrid::new(0.0, 1.0, 100).unwrap();
        let opts = StationaryOptions::new(1e-4);
        let e = simulate_stationary_paths(&mk, &grid, 3, 4000, &opts).unwrap();
        let plan: StationaryPlan = serde_json::from_value(e.provenance["truncation"].clone()).unwrap();
        assert!(plan.tail_bound < 1e-4 && plan.far_cells > 0);
        let n = e.n_paths() as f64;
        for j in [0, 50, 100] {
            let var = e.column(j).iter().map(|x| x * x).sum::<f64>() / n;
            assert!((var - 1.0 / 7.0).abs() < 4.0 * (2.0 / n).sqrt() / 7.0 + 2e-3, "{var}");
        }
    }

    #[test]
    fn xi_variance_matches_norm() {
        let rho = FractionalOrder::new(1.5).unwrap();
        let grid = TimeGrid::new(0.0, 1.0, 50).unwrap();
        let opts = StationaryOptions::new(1e-4);
        let engine = StationaryEngine::for_rates(&[2.0], rho, &grid, &opts).unwrap();
        let n = 4000;
        let xs: Vec<f64> = (0..n).map(|p| engine.sample(DriverKey::new(9, p))[0][50]).collect();
        let var = xs.iter().map(|x| x * x).sum::<f64>() / n as f64;
        let exact = resolvent_l2_norm(&ResolventKernel::new(2.0, rho).unwrap()).unwrap();
        assert!((var - exact).abs() < 4.0 * exact * (2.0 / n as f64).sqrt() + 2e-3, "{var} vs {exact}");
    }

    #[test]
    fn far_mesh_covers_the_history() {
        let k = FnKernel(|t: f64| Ok((1.0 + t).powi(-2)));
        let grid = TimeGrid::new(0.0, 1.0, 1000).unwrap();
        let (cells, err) = far_mesh(&[&k as &dyn Kernel<f64>], &grid, 1.0, 1e4, 1e-6).unwrap();
        let covered: f64 = cells.iter().map(|c| c.1).sum();
        assert!((covered - (1e4 - 1.0)).abs() < 1e-8);
        assert!(err <= 1e-6);
    }
}
