//! Processes started at time 0 (components, empirical means, limit) and the
//! shifted limit process evaluated at time 0.

use std::sync::Arc;

use rayon::prelude::*;

use super::convolve::Convolver;
use super::driver::{backward_normals, forward_increments, DriverKey};
use super::ensemble::{pointwise_mean, PathEnsemble, PathLabel, ProcessKind, SimulationMethod};
use super::grid::TimeGrid;
use crate::error::{Error, Result};
use crate::kernels::{Kernel, MeanKernel, ResolventKernel, TabulatedKernel};
use crate::scalar::Real;
use crate::special::{CompensatedSum, FractionalOrder};

/// `K(m dt)` for `m = 0..=n`.
pub(crate) fn kernel_lags<T: Real, K: Kernel<T> + ?Sized>(k: &K, dt: T, n: usize) -> Result<Vec<T>> {
    (0..=n)
        .into_par_iter()
        .map(|m| k.eval(dt * T::from_usize_lossy(m)))
        .collect()
}

/// `G(m dt)` for `m = 0..=n`. Beyond `t = 2` the mean kernel is read from a
/// fine logarithmic table unless `rho = 1`, where it is closed form.
pub(crate) fn mean_kernel_lags<T: Real>(mk: &MeanKernel<T>, dt: T, n: usize) -> Result<Vec<T>> {
    let split = T::lit(2.0);
    let t_end = dt * T::from_usize_lossy(n);
    if mk.rho.value() == T::one() || t_end <= split * T::lit(2.0) {
        return kernel_lags(mk, dt, n);
    }
    let table = TabulatedKernel::new(Arc::new(*mk) as Arc<dyn Kernel<T>>, split, t_end, T::lit(1.005))?;
    (0..=n)
        .into_par_iter()
        .map(|m| {
            let t = dt * T::from_usize_lossy(m);
            if t < split {
                mk.eval(t)
            } else {
                table.eval(t)
            }
        })
        .collect()
}

pub(crate) fn refuse_rough_order<T: Real>(rho: FractionalOrder<T>) -> Result<()> {
    if rho.value() < T::one() {
        return Err(Error::domain(format!(
            "path simulation needs rho >= 1, got {}",
            rho.value()
        )));
    }
    Ok(())
}

/// Left-endpoint convolutions of several kernels with one driver on
/// `[0, T]`.
#[derive(Clone)]
pub struct ConvolutionEngine<T: Real> {
    grid: TimeGrid<T>,
    convolvers: Vec<Convolver<T>>,
}

impl<T: Real> ConvolutionEngine<T> {
    pub fn new<K: Kernel<T>>(kernels: &[K], grid: TimeGrid<T>) -> Result<Self> {
        grid.require_origin()?;
        let (dt, n) = (grid.dt(), grid.n_steps());
        let lags: Vec<Vec<T>> = kernels
            .par_iter()
            .map(|k| kernel_lags(k, dt, n))
            .collect::<Result<_>>()?;
        Self::from_lags(lags, grid)
    }

    pub fn from_lags(lags: Vec<Vec<T>>, grid: TimeGrid<T>) -> Result<Self> {
        grid.require_origin()?;
        let convolvers = lags
            .into_iter()
            .map(|l| {
                if l.len() != grid.n_nodes() {
                    return Err(Error::domain("kernel lags must cover every grid node"));
                }
                Convolver::new(l)
            })
            .collect::<Result<_>>()?;
        Ok(Self { grid, convolvers })
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn n_kernels(&self) -> usize {
        self.convolvers.len()
    }

    /// Kernel values `K_i(m dt)`.
    pub fn lags(&self, i: usize) -> &[T] {
        self.convolvers[i].lags()
    }

    pub fn increments(&self, key: DriverKey) -> Vec<T> {
        forward_increments(key, self.grid.dt(), self.grid.n_steps())
    }

    /// One path per kernel on the driver `key`.
    pub fn sample(&self, key: DriverKey) -> Vec<Vec<T>> {
        self.sample_increments(&self.increments(key))
    }

    pub fn sample_increments(&self, dw: &[T]) -> Vec<Vec<T>> {
        self.convolvers.iter().map(|c| c.convolve(dw)).collect()
    }
}

/// Components `X_k` for every rate, all on the driver `(seed, 0)`.
pub fn simulate_component_paths<T: Real>(
    alphas: &[T],
    rho: FractionalOrder<T>,
    grid: &TimeGrid<T>,
    seed: u64,
) -> Result<PathEnsemble<T>> {
    refuse_rough_order(rho)?;
    if alphas.is_empty() {
        return Err(Error::domain("component ensemble needs at least one rate"));
    }
    let kernels = alphas
        .iter()
        .map(|&a| ResolventKernel::new(a, rho))
        .collect::<Result<Vec<_>>>()?;
    let engine = ConvolutionEngine::new(&kernels, *grid)?;
    let paths = engine.sample(DriverKey::new(seed, 0));
    let labels = alphas
        .iter()
        .map(|&a| PathLabel {
            process: ProcessKind::Component,
            alpha: Some(a.to_f64_lossy()),
            seed,
            replica: 0,
        })
        .collect();
    PathEnsemble::from_paths(*grid, paths, labels, SimulationMethod::IncrementQuadrature)
}

/// `Y_n(t)`, the pointwise mean of a component ensemble.
pub fn empirical_mean_path<T: Real>(ensemble: &PathEnsemble<T>) -> Result<Vec<T>> {
    pointwise_mean(ensemble)
}

/// `n_paths` convolution paths of one kernel, path `p` on driver `(seed, p)`.
pub fn simulate_kernel_paths<T: Real, K: Kernel<T>>(
    kernel: &K,
    grid: &TimeGrid<T>,
    seed: u64,
    n_paths: usize,
    process: ProcessKind,
) -> Result<PathEnsemble<T>> {
    let engine = ConvolutionEngine::new(std::slice::from_ref(kernel), *grid)?;
    engine_paths(&engine, seed, n_paths, process)
}

fn engine_paths<T: Real>(
    engine: &ConvolutionEngine<T>,
    seed: u64,
    n_paths: usize,
    process: ProcessKind,
) -> Result<PathEnsemble<T>> {
    let paths: Vec<Vec<T>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|p| engine.sample(DriverKey::new(seed, p)).pop().expect("one kernel"))
        .collect();
    let labels = (0..n_paths as u64)
        .map(|p| PathLabel {
            process,
            alpha: None,
            seed,
            replica: p,
        })
        .collect();
    PathEnsemble::from_paths(engine.grid, paths, labels, SimulationMethod::IncrementQuadrature)
}

fn limit_engine<T: Real>(mk: &MeanKernel<T>, grid: &TimeGrid<T>) -> Result<ConvolutionEngine<T>> {
    refuse_rough_order(mk.rho)?;
    grid.require_origin()?;
    ConvolutionEngine::from_lags(vec![mean_kernel_lags(mk, grid.dt(), grid.n_steps())?], *grid)
}

/// The limit process `Y` on the driver `(seed, 0)`, the same driver used by
/// [`simulate_component_paths`] with this seed.
pub fn simulate_limit_path<T: Real>(mk: &MeanKernel<T>, grid: &TimeGrid<T>, seed: u64) -> Result<Vec<T>> {
    let engine = limit_engine(mk, grid)?;
    Ok(engine.sample(DriverKey::new(seed, 0)).pop().expect("one kernel"))
}

/// `n_paths` independent limit paths (replicas `0..n_paths`).
pub fn simulate_limit_paths<T: Real>(
    mk: &MeanKernel<T>,
    grid: &TimeGrid<T>,
    seed: u64,
    n_paths: usize,
) -> Result<PathEnsemble<T>> {
    engine_paths(&limit_engine(mk, grid)?, seed, n_paths, ProcessKind::Limit)
}

/// Samples of `Y_{-s}(0) = int_{-s}^0 G(-u) dW(u)` on the negative-time
/// driver, one per replica, with cell width `s / ceil(s / dt)`.
pub fn y_minus_s_at_zero<T: Real>(
    mk: &MeanKernel<T>,
    s: T,
    dt: T,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<T>> {
    refuse_rough_order(mk.rho)?;
    Ok(shifted_at_zero(mk, &[s], dt, n_paths, seed)?.pop().expect("one shift"))
}

/// `int_{-s}^0 K(-u) dW(u)` for several shifts on common drivers: entry `[i][p]`
/// is shift `s_list[i]` on replica `p`. The shifts are rounded to multiples of
/// `dt` (at least one cell).
pub fn shifted_at_zero<T: Real, K: Kernel<T> + ?Sized>(
    kernel: &K,
    s_list: &[T],
    dt: T,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<Vec<T>>> {
    if !(dt > T::zero()) {
        return Err(Error::domain(format!("cell width must be positive, got {dt}")));
    }
    let cells: Vec<usize> = s_list
        .iter()
        .map(|&s| {
            if !(s > T::zero()) || !s.is_finite() {
                return Err(Error::domain(format!("shift must be positive, got {s}")));
            }
            Ok((s / dt).round().to_usize().unwrap_or(1).max(1))
        })
        .collect::<Result<_>>()?;
    let n_max = cells.iter().copied().max().unwrap_or(0);
    // cell i covers [-(i+1) dt, -i dt]; the kernel is taken at its left end
    let weights: Vec<T> = (0..n_max)
        .into_par_iter()
        .map(|i| kernel.eval(dt * T::from_usize_lossy(i + 1)))
        .collect::<Result<_>>()?;
    let sd = dt.sqrt();
    let per_replica: Vec<Vec<T>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|p| {
            let z = backward_normals(DriverKey::new(seed, p), n_max);
            let mut acc = CompensatedSum::new();
            let mut out = Vec::with_capacity(cells.len());
            let mut order: Vec<usize> = (0..cells.len()).collect();
            order.sort_by_key(|&i| cells[i]);
            let mut done = 0usize;
            let mut values = vec![T::zero(); cells.len()];
            for &i in &order {
                while done < cells[i] {
                    // W(-i dt) - W(-(i+1) dt) = W~(i dt) - W~((i+1) dt)
                    acc.add(-weights[done] * T::lit(z[done]) * sd);
                    done += 1;
                }
                values[i] = acc.value();
            }
            out.extend(values);
            out
        })
        .collect();
    Ok((0..cells.len())
        .map(|i| per_replica.iter().map(|r| r[i]).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::empirical_kernel;
    use crate::mixing::GammaMixing;
    use crate::simulator::convolve::convolve_direct;
    use crate::simulator::driver::brownian_increments;

    #[test]
    fn zero_rate_reproduces_brownian_motion() {
        let grid = TimeGrid::new(0.0f64, 1.0, 100).unwrap();
        let rho = FractionalOrder::new(1.5).unwrap();
        let e = simulate_component_paths(&[0.0], rho, &grid, 4).unwrap();
        let dw = brownian_increments(&grid, 4);
        let mut w = 0.0;
        for (j, &x) in e.path(0).iter().enumerate() {
            assert!((x - w).abs() < 1e-14);
            if j < dw.len() {
                w += dw[j];
            }
        }
    }

    #[test]
    fn empirical_mean_equals_convolution_with_mean_kernel() {
        let grid = TimeGrid::new(0.0f64, 1.0, 200).unwrap();
        let rho = FractionalOrder::new(1.9).unwrap();
        let alphas = [0.3, 1.0, 2.5, 7.0];
        let e = simulate_component_paths(&alphas, rho, &grid, 1).unwrap();
        let y = empirical_mean_path(&e).unwrap();
        let lags: Vec<f64> = (0..=200).map(|m| empirical_kernel(&alphas, rho, m as f64 * grid.dt()).unwrap()).collect();
        let direct = convolve_direct(&lags, &brownian_increments(&grid, 1));
        for (a, b) in y.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn refuses_rough_orders_and_shifted_grids() {
        let grid = TimeGrid::new(0.0f64, 1.0, 10).unwrap();
        assert!(simulate_component_paths(&[1.0], FractionalOrder::new(0.7).unwrap(), &grid, 1).is_err());
        let shifted = TimeGrid::new(1.0f64, 2.0, 10).unwrap();
        assert!(simulate_component_paths(&[1.0], FractionalOrder::new(1.2).unwrap(), &shifted, 1).is_err());
    }

    #[test]
    fn shifted_process_variance() {
        let mk = MeanKernel::new(FractionalOrder::new(1.0).unwrap(), GammaMixing::new(4.0, 1.0).unwrap());
        let v = y_minus_s_at_zero(&mk, 1.0, 1e-2, 4000, 5).unwrap();
        let n = v.len() as f64;
        let var = v.iter().map(|x| x * x).sum::<f64>() / n;
        let exact = (1.0 - 2f64.powi(-7)) / 7.0;
        assert!((var - exact).abs() < 4.0 * exact * (2.0 / n).sqrt(), "{var} vs {exact}");
    }
}
