use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Generalized Gauss-Laguerre rule normalized to the Gamma(shape, 1) law:
/// `sum_i w_i f(x_i) ~ E[f(Z)]`, `Z ~ Gamma(shape, 1)`.
#[derive(Clone, Debug)]
pub struct GaussLaguerre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLaguerre {
    /// Golub-Welsch construction for the weight `x^{shape-1} e^{-x}`.
    pub fn new(n: usize, shape: f64) -> Result<Self> {
        if n == 0 || !(shape > 0.0) {
            return Err(Error::domain(format!(
                "Gauss-Laguerre rule needs n >= 1 and shape > 0, got n = {n}, shape = {shape}"
            )));
        }
        let a = shape - 1.0;
        let mut d: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 + a + 1.0).collect();
        let mut e: Vec<f64> = (0..n)
            .map(|i| {
                if i + 1 < n {
                    let k = (i + 1) as f64;
                    (k * (k + a)).sqrt()
                } else {
                    0.0
                }
            })
            .collect();
        let mut z = vec![0.0; n];
        z[0] = 1.0;
        tridiagonal_ql(&mut d, &mut e, &mut z)?;
        let mut pairs: Vec<(f64, f64)> = d.into_iter().zip(z.into_iter().map(|v| v * v)).collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

// Implicit QL on a symmetric tridiagonal matrix (diagonal d, subdiagonal e with
// e[i] coupling i and i+1), accumulating only the first row z of the
// eigenvector matrix.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Quadrature("tridiagonal QL failed to converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

type RuleCache = Mutex<HashMap<(usize, u64), Arc<GaussLaguerre>>>;

fn cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached rule of order `n` for the Gamma(`shape`, 1) law.
pub fn gamma_expectation_rule(n: usize, shape: f64) -> Result<Arc<GaussLaguerre>> {
    let key = (n, shape.to_bits());
    if let Some(rule) = cache().lock().expect("rule cache poisoned").get(&key) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(GaussLaguerre::new(n, shape)?);
    cache()
        .lock()
        .expect("rule cache poisoned")
        .insert(key, rule.clone());
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one_and_moments_match() {
        for &shape in &[0.4, 1.0, 4.0] {
            let rule = GaussLaguerre::new(64, shape).unwrap();
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 1.0).abs() < 1e-13);
            // E[Z^3] = shape (shape+1) (shape+2)
            let m3: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(3)).sum();
            let exact = shape * (shape + 1.0) * (shape + 2.0);
            assert!(((m3 - exact) / exact).abs() < 1e-12, "{shape}: {m3} vs {exact}");
        }
    }

    #[test]
    fn laplace_transform_of_gamma() {
        // E[exp(-s Z)] = (1+s)^{-shape}
        let rule = gamma_expectation_rule(128, 4.0).unwrap();
        for &s in &[0.1, 1.0, 5.0] {
            let v: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * (-s * x).exp()).sum();
            assert!((v - (1.0f64 + s).powf(-4.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn nodes_are_sorted_and_positive() {
        let rule = GaussLaguerre::new(16, 2.5).unwrap();
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(rule.nodes[0] > 0.0);
        assert!(GaussLaguerre::new(0, 1.0).is_err());
    }
}
