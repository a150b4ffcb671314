//! Entire-function and truncated power-series machinery.
//!
//! Everything here is exact modulo truncation: the series operations are
//! the standard formal recurrences, and the analytic evaluations (I(s),
//! the Dickman transform, ζ via Euler–Maclaurin) converge to machine
//! precision inside their guarded domains.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::EULER;

/// Truncated Taylor coefficients; index = power of s.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCoefficients {
    pub coeffs: Vec<Complex64>,
}

impl SeriesCoefficients {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty());
        SeriesCoefficients { coeffs }
    }

    pub fn from_real(re: &[f64]) -> Self {
        Self::new(re.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Complex64::new(1.0, 0.0);
        s
    }

    /// 1/(1+s) to the given order.
    pub fn geometric_inv_one_plus_s(order: usize) -> Self {
        let mut s = Self::zero(order);
        for (j, c) in s.coeffs.iter_mut().enumerate() {
            *c = Complex64::new(if j % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
        }
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        Self::new((0..n).map(|j| self.coeffs[j] + other.coeffs[j]).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            for k in 0..=j {
                out[j] += self.coeffs[k] * other.coeffs[j - k];
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * a).collect())
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Self {
        let c0 = self.coeffs[0];
        assert!(c0.norm() > 0.0, "series reciprocal needs a unit constant term");
        let n = self.coeffs.len();
        let mut r = vec![Complex64::new(0.0, 0.0); n];
        r[0] = 1.0 / c0;
        for j in 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..=j {
                acc += self.coeffs[k] * r[j - k];
            }
            r[j] = -acc / c0;
        }
        Self::new(r)
    }

    pub fn exp(&self) -> Self {
        let n = self.coeffs.len();
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[0] = self.coeffs[0].exp();
        for j in 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..=j {
                acc += k as f64 * self.coeffs[k] * e[j - k];
            }
            e[j] = acc / j as f64;
        }
        Self::new(e)
    }

    pub fn log(&self) -> Self {
        let c0 = self.coeffs[0];
        assert!(c0.norm() > 0.0, "series log needs a unit constant term");
        let n = self.coeffs.len();
        let mut l = vec![Complex64::new(0.0, 0.0); n];
        l[0] = c0.ln();
        for j in 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..j {
                acc += k as f64 * l[k] * self.coeffs[j - k];
            }
            l[j] = (self.coeffs[j] - acc / j as f64) / c0;
        }
        Self::new(l)
    }

    /// Real (or complex) power via exp ∘ log.
    pub fn powf(&self, a: f64) -> Self {
        self.log().scale(Complex64::new(a, 0.0)).exp()
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }
}

/// Guard radius for the power series of I(s).
const INT_I_RADIUS: f64 = 200.0;

/// I(s) = ∫₀ˢ (eᵗ - 1) dt/t = Σ_{n≥1} sⁿ/(n·n!), entire.
pub fn int_i(s: Complex64) -> Result<Complex64> {
    if s.norm() > INT_I_RADIUS {
        return Err(Error::Overflow {
            op: "int_i",
            msg: format!("|s| = {} exceeds the series guard {}", s.norm(), INT_I_RADIUS),
        });
    }
    let mut term = Complex64::new(1.0, 0.0); // s^n / n!
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..1000 {
        term *= s / n as f64;
        let add = term / n as f64;
        acc += add;
        if add.norm() <= 1e-18 * (1.0 + acc.norm()) && n as f64 > s.norm() {
            break;
        }
    }
    Ok(acc)
}

/// Laplace transform of the Dickman function: ϱ̂(s) = exp(γ + I(-s)).
pub fn rho_hat(s: Complex64) -> Result<Complex64> {
    Ok((Complex64::new(EULER, 0.0) + int_i(-s)?).exp())
}

// Bernoulli numbers B_2, B_4, ..., B_40 for the Euler–Maclaurin tail.
const BERNOULLI_EVEN: [f64; 20] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
];

const ZETA_EM_CUTOFF: usize = 50;

/// Riemann ζ by Euler–Maclaurin with 20 correction terms and cutoff N = 50.
/// Intended for Re z > 0, |Im z| ≤ 10, away from z = 1; ample for the
/// coefficient machinery, which only ever samples near the real axis.
pub fn zeta_em(z: Complex64) -> Result<Complex64> {
    if (z - Complex64::new(1.0, 0.0)).norm() < 1e-12 {
        return Err(Error::Singularity { op: "zeta_em", msg: "pole at z = 1".into() });
    }
    if z.re <= 0.0 || z.im.abs() > 10.5 {
        return Err(Error::domain("zeta_em", format!("z = {z} outside supported region")));
    }
    let nf = ZETA_EM_CUTOFF as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..ZETA_EM_CUTOFF {
        acc += (-z * (n as f64).ln()).exp();
    }
    let npz = (-z * nf.ln()).exp(); // N^-z
    acc += npz * nf / (z - 1.0);
    acc += npz * 0.5;
    // Σ B_{2k}/(2k)! · z(z+1)…(z+2k-2) · N^{-z-2k+1}
    let mut poch = z; // rising factorial z (z+1) … (z+2k-2)
    let mut fact = 2.0; // (2k)!
    let mut npow = npz / nf; // N^{-z-2k+1}
    for (k, &b) in BERNOULLI_EVEN.iter().enumerate() {
        acc += poch * npow * (b / fact);
        let kk = 2 * (k + 1);
        poch *= (z + kk as f64 - 1.0) * (z + kk as f64);
        fact *= (kk + 1) as f64 * (kk + 2) as f64;
        npow /= nf * nf;
    }
    Ok(acc)
}

const CAUCHY_SAMPLES: usize = 64;

/// Taylor coefficients at 0 of an analytic function, by trapezoidal Cauchy
/// integration on the circle |s| = radius.
pub fn cauchy_taylor(
    f: impl Fn(Complex64) -> Result<Complex64>,
    radius: f64,
    order: usize,
    samples: usize,
) -> Result<SeriesCoefficients> {
    let k = samples.max(2 * (order + 1));
    let vals: Result<Vec<Complex64>> = (0..k)
        .map(|m| {
            let th = 2.0 * std::f64::consts::PI * m as f64 / k as f64;
            f(Complex64::from_polar(radius, th))
        })
        .collect();
    let vals = vals?;
    let mut out = Vec::with_capacity(order + 1);
    for h in 0..=order {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, &v) in vals.iter().enumerate() {
            let th = 2.0 * std::f64::consts::PI * (m * h) as f64 / k as f64;
            acc += v * Complex64::from_polar(1.0, -th);
        }
        out.push(acc / (k as f64 * radius.powi(h as i32)));
    }
    Ok(SeriesCoefficients::new(out))
}

/// Taylor coefficients γ_h of s·ζ(1+s) at s = 0: γ_0 = 1, γ_1 = Euler's γ,
/// then alternating-sign Stieltjes constants over factorials.
pub fn zeta_series(order: usize) -> Result<SeriesCoefficients> {
    if order > 12 {
        return Err(Error::domain("zeta_series", "supported truncation order is 12"));
    }
    let f = |s: Complex64| -> Result<Complex64> { Ok(s * zeta_em(Complex64::new(1.0, 0.0) + s)?) };
    let mut ser = cauchy_taylor(f, 0.5, order, CAUCHY_SAMPLES)?;
    // coefficients are real; discard the angular roundoff
    for c in ser.coeffs.iter_mut() {
        c.im = 0.0;
    }
    Ok(ser)
}

/// Power series of -γκ - κ I(-s).
fn neg_log_rho_hat_pow(kappa: f64, order: usize) -> SeriesCoefficients {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    coeffs[0] = Complex64::new(-EULER * kappa, 0.0);
    let mut fact = 1.0;
    for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
        fact *= n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        *c = Complex64::new(-kappa * sign / (n as f64 * fact), 0.0);
    }
    SeriesCoefficients::new(coeffs)
}

/// Taylor coefficients c_j of ϱ̂(s)^{-κ} = exp(-γκ - κI(-s)); these drive
/// the polynomial-scale expansion of the h-type solutions.
pub fn c_coeffs(kappa: f64, order: usize) -> SeriesCoefficients {
    neg_log_rho_hat_pow(kappa, order).exp()
}

/// Taylor coefficients of ϱ̂(s)^{+κ}; the reciprocal of `c_coeffs` used by
/// its own validation.
pub fn rho_hat_pow_coeffs(kappa: f64, order: usize) -> SeriesCoefficients {
    neg_log_rho_hat_pow(-kappa, order).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_gl;

    const I1: f64 = 1.3179021514544038; // Σ 1/(n·n!), frozen from the quadrature oracle below

    #[test]
    fn int_i_at_zero_and_one() {
        assert_eq!(int_i(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        // independent oracle: quadrature of (e^t - 1)/t on [0, 1]
        let oracle = integrate_gl(|t| if t == 0.0 { 1.0 } else { t.exp_m1() / t }, 0.0, 1.0, 8, 16);
        assert!((oracle - I1).abs() < 1e-15);
        let v = int_i(Complex64::new(1.0, 0.0)).unwrap();
        assert!((v.re - I1).abs() < 1e-15 && v.im == 0.0);
    }

    #[test]
    fn int_i_monotone_on_positive_axis() {
        let mut prev = 0.0;
        for k in 1..=20 {
            let v = int_i(Complex64::new(k as f64 * 0.5, 0.0)).unwrap();
            assert!(v.im == 0.0 && v.re > prev);
            prev = v.re;
        }
    }

    #[test]
    fn int_i_radius_guard() {
        assert!(int_i(Complex64::new(201.0, 0.0)).is_err());
    }

    #[test]
    fn rho_hat_at_zero_is_exp_gamma() {
        let v = rho_hat(Complex64::new(0.0, 0.0)).unwrap();
        assert!((v.re - EULER.exp()).abs() < 1e-15);
    }

    #[test]
    fn rho_hat_conjugate_symmetry() {
        let s = Complex64::new(0.7, 1.3);
        let a = rho_hat(s).unwrap();
        let b = rho_hat(s.conj()).unwrap();
        assert!((a.conj() - b).norm() < 1e-15 * a.norm());
    }

    #[test]
    fn zeta_em_known_values() {
        let z2 = zeta_em(Complex64::new(2.0, 0.0)).unwrap();
        let exact = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert!((z2.re - exact).abs() < 1e-14);
        // ζ(3/2) classical value
        let z32 = zeta_em(Complex64::new(1.5, 0.0)).unwrap();
        assert!((z32.re - 2.612375348685488).abs() < 1e-13);
    }

    #[test]
    fn zeta_series_leading_coefficients() {
        let g = zeta_series(6).unwrap();
        assert!((g.coeffs[0].re - 1.0).abs() < 1e-13);
        // independent Euler–Maclaurin oracle for γ = lim Σ 1/n - log N
        let n = 1_000_000f64;
        let mut h = 0.0;
        for k in 1..=1_000_000u64 {
            h += 1.0 / k as f64;
        }
        let gamma_oracle = h - n.ln() - 0.5 / n + 1.0 / (12.0 * n * n);
        assert!((g.coeffs[1].re - gamma_oracle).abs() < 1e-12);
        assert!((g.coeffs[1].re - EULER).abs() < 1e-13);
        // first Stieltjes coefficient of s ζ(1+s): -γ₁ = +0.0728158…
        assert!((g.coeffs[2].re - 0.07281584548367673).abs() < 1e-12);
    }

    #[test]
    fn zeta_series_evaluates_like_zeta() {
        let g = zeta_series(12).unwrap();
        let s = Complex64::new(0.1, 0.0);
        let direct = s * zeta_em(Complex64::new(1.1, 0.0)).unwrap();
        assert!((g.eval(s) - direct).norm() < 1e-9);
    }

    #[test]
    fn c_coeffs_reciprocal_identity() {
        for &kappa in &[0.5, 1.0, 2.0, 3.5] {
            let c = c_coeffs(kappa, 12);
            let r = rho_hat_pow_coeffs(kappa, 12);
            let prod = c.mul(&r);
            assert!((prod.coeffs[0].re - 1.0).abs() < 1e-12);
            for j in 1..=12 {
                assert!(prod.coeffs[j].norm() < 1e-12, "kappa={kappa} j={j}");
            }
        }
    }

    #[test]
    fn c_coeffs_constant_term() {
        // constant term of exp(-γκ - κI(-s)) is e^{-γκ}
        for &kappa in &[0.5, 1.0, 2.0] {
            let c = c_coeffs(kappa, 4);
            assert!((c.coeffs[0].re - (-EULER * kappa).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn series_round_trips() {
        let a = SeriesCoefficients::from_real(&[1.3, -0.4, 0.22, 0.05, -0.8, 0.11]);
        let rr = a.recip().recip();
        for j in 0..a.coeffs.len() {
            assert!((rr.coeffs[j] - a.coeffs[j]).norm() < 1e-12);
        }
        let el = a.log().exp();
        for j in 0..a.coeffs.len() {
            assert!((el.coeffs[j] - a.coeffs[j]).norm() < 1e-12);
        }
        let p = a.powf(0.7).mul(&a.powf(-0.7));
        assert!((p.coeffs[0].re - 1.0).abs() < 1e-12);
        for j in 1..p.coeffs.len() {
            assert!(p.coeffs[j].norm() < 1e-12);
        }
    }
}
