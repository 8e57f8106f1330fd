use std::any::TypeId;
use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{ml_one, ml_two, FractionalOrder};

const SAFETY: f64 = 1.1;
const GRID_POINTS: usize = 2000;
const LOG10_MIN: f64 = -4.0;
const LOG10_MAX: f64 = 6.0;

/// Global bounds of the Mittag-Leffler functions for one order:
///
/// * `m`:  `|E_rho(-x)| <= m / (1 + x)`
/// * `m2`: `|E_{rho,rho}(-x)| <= m2 / (1 + x)`
/// * `m3`: `x^{rho-1} |E_{rho,rho}(-x^rho)| <= m3 / (1 + x)`
///
/// Each is the supremum over a logarithmic grid on `[1e-4, 1e6]` (plus the
/// origin) times a safety factor of 1.1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants<T> {
    pub m: T,
    pub m2: T,
    pub m3: T,
}

type BoundCache = RwLock<HashMap<(TypeId, u64), [f64; 3]>>;

fn cache() -> &'static BoundCache {
    static CACHE: OnceLock<BoundCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Bound constants for `rho < 2`, computed once per order and cached.
pub fn bound_constants<T: Real>(rho: FractionalOrder<T>) -> Result<BoundConstants<T>> {
    let r = rho.value();
    if r >= T::lit(2.0) {
        return Err(Error::domain("E_2(-x) = cos(sqrt(x)) admits no decaying bound"));
    }
    let key = (TypeId::of::<T>(), r.to_f64_lossy().to_bits());
    if let Some(v) = cache().read().expect("bound cache poisoned").get(&key) {
        return Ok(BoundConstants {
            m: T::lit(v[0]),
            m2: T::lit(v[1]),
            m3: T::lit(v[2]),
        });
    }
    let mut m = T::one();
    let mut m2 = (ml_two(rho, T::zero())?.value).abs();
    let mut m3 = T::zero();
    for i in 0..=GRID_POINTS {
        let e = LOG10_MIN + (LOG10_MAX - LOG10_MIN) * i as f64 / GRID_POINTS as f64;
        let x = T::lit(10f64.powf(e));
        let w = T::one() + x;
        m = m.max(ml_one(rho, x)?.value.abs() * w);
        m2 = m2.max(ml_two(rho, x)?.value.abs() * w);
        let g = x.powf(r - T::one()) * ml_two(rho, x.powf(r))?.value.abs();
        m3 = m3.max(g * w);
    }
    let s = T::lit(SAFETY);
    let out = BoundConstants {
        m: m * s,
        m2: m2 * s,
        m3: m3 * s,
    };
    cache()
        .write()
        .expect("bound cache poisoned")
        .entry(key)
        .or_insert([out.m.to_f64_lossy(), out.m2.to_f64_lossy(), out.m3.to_f64_lossy()]);
    Ok(out)
}
