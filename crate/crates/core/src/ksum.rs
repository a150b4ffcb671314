//! Compensated accumulation for long, heavily cancelling sums.
//!
//! The arithmetic sums measured by this crate are mostly sums of ±1-type
//! terms whose whole point is the cancellation, so a plain `f64` loop can
//! lose the signal. Kahan summation with the Neumaier correction keeps the
//! running error at one ulp of the final value independent of the term
//! count.

/// Kahan–Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    s: f64,
    c: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    /// Merge another accumulator; used by the partitioned summation mode.
    pub fn merge(&mut self, other: NeumaierSum) {
        self.add(other.s);
        self.c += other.c;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.s + self.c
    }
}

impl std::iter::FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_tail() {
        // 1 + 2^-60 - 1 repeated: naive summation returns 0.
        let mut acc = NeumaierSum::new();
        let tiny = (2f64).powi(-60);
        for _ in 0..1000 {
            acc.add(1.0);
            acc.add(tiny);
            acc.add(-1.0);
        }
        let expect = 1000.0 * tiny;
        assert!((acc.value() - expect).abs() <= f64::EPSILON * expect);
    }

    #[test]
    fn merge_matches_sequential() {
        let xs: Vec<f64> = (1..=10_000).map(|k| ((k % 7) as f64 - 3.0) / k as f64).collect();
        let whole: NeumaierSum = xs.iter().copied().collect();
        let mut left = NeumaierSum::new();
        let mut right = NeumaierSum::new();
        for (i, &x) in xs.iter().enumerate() {
            if i < 5000 {
                left.add(x)
            } else {
                right.add(x)
            }
        }
        left.merge(right);
        assert!((left.value() - whole.value()).abs() < 1e-15);
    }
}
