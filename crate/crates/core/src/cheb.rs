//! Chebyshev series on an arbitrary interval.
//!
//! Every piecewise-solution interval stores its smooth data in this basis.
//! Fits use first-kind nodes; the coefficient transform is the plain O(n²)
//! cosine sum, which is exact at these sizes (n ≤ 64) and avoids an FFT
//! dependency.

#[derive(Debug, Clone)]
pub struct Cheb {
    pub lo: f64,
    pub hi: f64,
    coef: Vec<f64>,
}

impl Cheb {
    /// Chebyshev sample nodes of size `n` on `[lo, hi]`, in descending order.
    pub fn nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| {
                let t = (std::f64::consts::PI * (k as f64 + 0.5) / n as f64).cos();
                0.5 * (lo + hi) + 0.5 * (hi - lo) * t
            })
            .collect()
    }

    /// Interpolant through values taken at `Self::nodes(lo, hi, n)`.
    pub fn from_node_values(lo: f64, hi: f64, vals: &[f64]) -> Self {
        let n = vals.len();
        let mut coef = vec![0.0; n];
        for (j, cj) in coef.iter_mut().enumerate() {
            let mut s = 0.0;
            for (k, &v) in vals.iter().enumerate() {
                s += v * (j as f64 * std::f64::consts::PI * (k as f64 + 0.5) / n as f64).cos();
            }
            *cj = 2.0 * s / n as f64;
        }
        coef[0] *= 0.5;
        Cheb { lo, hi, coef }
    }

    pub fn fit(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        let vals: Vec<f64> = Self::nodes(lo, hi, n).iter().map(|&x| f(x)).collect();
        Self::from_node_values(lo, hi, &vals)
    }

    pub fn constant(lo: f64, hi: f64, c: f64) -> Self {
        Cheb { lo, hi, coef: vec![c] }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let t = (2.0 * x - self.lo - self.hi) / (self.hi - self.lo);
        // Clenshaw
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coef.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        self.coef[0] + t * b1 - b2
    }

    /// Antiderivative vanishing at `lo`.
    pub fn antiderivative(&self) -> Self {
        let n = self.coef.len();
        let scale = 0.5 * (self.hi - self.lo);
        let c = |j: usize| -> f64 {
            if j < n {
                if j == 0 {
                    2.0 * self.coef[0]
                } else {
                    self.coef[j]
                }
            } else {
                0.0
            }
        };
        let mut out = vec![0.0; n + 1];
        for j in 1..=n {
            out[j] = scale * (c(j - 1) - c(j + 1)) / (2.0 * j as f64);
        }
        let mut a = Cheb { lo: self.lo, hi: self.hi, coef: out };
        let at_lo = a.eval(self.lo);
        a.coef[0] -= at_lo;
        a
    }

    /// Definite integral over the whole interval.
    pub fn integral(&self) -> f64 {
        self.antiderivative().eval(self.hi)
    }

    pub fn max_abs_coef(&self) -> f64 {
        self.coef.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Magnitude of the trailing coefficient pair, a cheap convergence proxy.
    pub fn tail_estimate(&self) -> f64 {
        let n = self.coef.len();
        if n < 2 {
            return 0.0;
        }
        self.coef[n - 1].abs().max(self.coef[n - 2].abs())
    }

    pub fn trim(&mut self, tol: f64) {
        while self.coef.len() > 1 && self.coef.last().unwrap().abs() <= tol {
            self.coef.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_and_eval_exp() {
        let c = Cheb::fit(0.0, 1.0, 24, |x| x.exp());
        for k in 0..=10 {
            let x = k as f64 / 10.0;
            assert!((c.eval(x) - x.exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn antiderivative_of_exp() {
        let c = Cheb::fit(0.5, 2.5, 32, |x| x.exp());
        let a = c.antiderivative();
        for k in 0..=8 {
            let x = 0.5 + 2.0 * k as f64 / 8.0;
            assert!((a.eval(x) - (x.exp() - (0.5f64).exp())).abs() < 1e-13);
        }
        assert!((c.integral() - ((2.5f64).exp() - (0.5f64).exp())).abs() < 1e-13);
    }

    #[test]
    fn spectral_decay_for_analytic_data() {
        let c = Cheb::fit(1.0, 2.0, 40, |x| 1.0 / x);
        assert!(c.tail_estimate() < 1e-13 * c.max_abs_coef());
    }
}
