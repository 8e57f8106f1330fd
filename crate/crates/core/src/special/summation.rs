use crate::scalar::Real;

/// Neumaier's variant of Kahan compensated summation.
///
/// Also tracks the running sum of magnitudes and the largest partial sum, which
/// the series evaluators use for rounding and cancellation estimates.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    compensation: T,
    abs_sum: T,
    max_partial: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
            abs_sum: T::zero(),
            max_partial: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += x.abs();
        let partial = (self.sum + self.compensation).abs();
        if partial > self.max_partial {
            self.max_partial = partial;
        }
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.compensation
    }

    /// Sum of the magnitudes of all added terms.
    pub fn abs_sum(&self) -> T {
        self.abs_sum
    }

    /// Largest magnitude reached by a partial sum.
    pub fn max_partial(&self) -> T {
        self.max_partial
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of a slice.
pub fn compensated_sum<T: Real>(xs: &[T]) -> T {
    xs.iter().copied().collect::<CompensatedSum<T>>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_summation() {
        let xs = [1.0f64, 1e100, 1.0, -1e100];
        let naive: f64 = xs.iter().sum();
        assert_eq!(naive, 0.0);
        assert_eq!(compensated_sum(&xs), 2.0);
    }

    #[test]
    fn tracks_magnitudes() {
        let acc: CompensatedSum<f64> = [3.0, -5.0, 1.0].into_iter().collect();
        assert_eq!(acc.value(), -1.0);
        assert_eq!(acc.abs_sum(), 9.0);
        assert_eq!(acc.max_partial(), 3.0);
    }
}
