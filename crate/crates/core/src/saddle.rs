//! Saddle-point roots of the two transcendental equations driving the
//! asymptotics, and the decay envelope built from them.
//!
//! ξ(v) is the nonzero real root of e^ξ = 1 + vξ. ζ₀(v) is the complex
//! root of e^ζ = 1 - vζ with largest negative imaginary part; together
//! with its conjugate it controls the oscillation and decay of the
//! derivative kernels. R_κ(v) = |Φ_κ(v, ζ₀(v/κ))| is the error envelope
//! every expansion in this crate quotes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{int_i, rho_hat};
use crate::specfun::EULER;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Nonzero real solution of e^ξ = 1 + vξ (ξ(1) := 0). Strictly increasing,
/// residual below 1e-12 · (1 + v|ξ|).
pub fn xi(v: f64) -> Result<f64> {
    if v < 1.0 {
        return Err(Error::domain("xi", format!("v = {v} must be >= 1")));
    }
    if v == 1.0 {
        return Ok(0.0);
    }
    // root of F(x) = (e^x - 1)/x - v, which removes the trivial zero;
    // F is increasing and convex, so Newton from the right converges
    let f = |x: f64| x.exp_m1() / x - v;
    let mut hi = (v * (v + 2.0).ln() + 2.0).ln() + 1.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    let mut x = hi;
    for _ in 0..200 {
        let ex = x.exp();
        let fx = x.exp_m1() / x - v;
        let dfx = (ex * (x - 1.0) + 1.0) / (x * x);
        let dx = fx / dfx;
        x -= dx;
        if dx.abs() <= 1e-16 * (1.0 + x.abs()) {
            break;
        }
    }
    Ok(x)
}

fn zeta_residual(v: f64, z: Complex64) -> Complex64 {
    z.exp() - 1.0 + v * z
}

fn in_strip(z: Complex64) -> bool {
    z.im > -TWO_PI && z.im < 0.0
}

/// Damped Newton for e^ζ = 1 - vζ constrained to the strip Im ∈ (-2π, 0).
fn zeta_newton(v: f64, seed: Complex64) -> Result<Complex64> {
    let mut z = seed;
    if !in_strip(z) {
        z.im = z.im.clamp(-TWO_PI + 0.05, -0.05);
    }
    for _ in 0..80 {
        let r = zeta_residual(v, z);
        if r.norm() <= 1e-13 * (1.0 + v * z.norm()) {
            return Ok(z);
        }
        let dr = z.exp() + v;
        let mut step = r / dr;
        // keep the iterate inside the strip; the equation has a root chain
        // outside it and an undamped step can hop branches
        let mut t = 1.0;
        while t > 1e-6 && !in_strip(z - step * t) {
            t *= 0.5;
        }
        if t <= 1e-6 {
            return Err(Error::Convergence {
                op: "zeta0",
                msg: format!("iteration left the strip at v = {v}"),
            });
        }
        step *= t;
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    let r = zeta_residual(v, z);
    if r.norm() <= 1e-10 * (1.0 + v * z.norm()) && in_strip(z) {
        Ok(z)
    } else {
        Err(Error::Convergence { op: "zeta0", msg: format!("no strip root found at v = {v}") })
    }
}

/// Asymptotic seed ξ + π²/(2ξ²) - iπξ/(ξ-1); quantitatively reliable for
/// moderate and large v. Its imaginary part only enters the strip once
/// ξ(v) > 2, so the solver switches to continuation below `SEED_SWITCH`.
fn zeta_seed(v: f64) -> Result<Complex64> {
    let x = xi(v)?;
    Ok(Complex64::new(
        x + std::f64::consts::PI.powi(2) / (2.0 * x * x),
        -std::f64::consts::PI * x / (x - 1.0),
    ))
}

const SEED_SWITCH: f64 = 4.0;
const ZETA0_MIN_V: f64 = 0.05;

/// Complex root of e^ζ = 1 - vζ with largest negative imaginary part.
///
/// Defined by the asymptotic seed for v ≥ 4 and by continuation in small
/// steps below that, down to v = 0.05; the equation's strip root varies
/// continuously there even though the asymptotic form no longer applies.
pub fn zeta0(v: f64) -> Result<Complex64> {
    if !(v >= ZETA0_MIN_V) {
        return Err(Error::domain("zeta0", format!("v = {v} below supported minimum {ZETA0_MIN_V}")));
    }
    if v >= SEED_SWITCH {
        return zeta_newton(v, zeta_seed(v)?);
    }
    let mut w = SEED_SWITCH;
    let mut root = zeta_newton(w, zeta_seed(w)?)?;
    while w > v {
        w = (w - 0.05).max(v);
        root = zeta_newton(w, root)?;
    }
    Ok(root)
}

/// Saddle data bundle at the point v.
#[derive(Debug, Clone, Copy)]
pub struct SaddleRoot {
    pub v: f64,
    pub xi: f64,
    pub zeta0: Complex64,
    pub xi0: f64,
}

impl SaddleRoot {
    pub fn at(v: f64) -> Result<Self> {
        let x = xi(v)?;
        let z = zeta0(v)?;
        Ok(SaddleRoot { v, xi: x, zeta0: z, xi0: z.re })
    }
}

/// Incremental ζ₀ evaluation along a slowly moving argument; seeds each
/// Newton solve from the previous root, so envelope integrals do not pay
/// the continuation walk per node.
#[derive(Debug, Default)]
pub struct Zeta0Tracker {
    last: Option<(f64, Complex64)>,
}

impl Zeta0Tracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn at(&mut self, v: f64) -> Result<Complex64> {
        let root = match self.last {
            Some((w, r)) if (v - w).abs() <= 0.25 => zeta_newton(v, r)?,
            _ => zeta0(v)?,
        };
        self.last = Some((v, root));
        Ok(root)
    }
}

/// Φ_κ(v, s) = exp(-vs - κI(s)) / sqrt(2πv(1 - 1/s)).
pub fn big_phi(kappa: f64, v: f64, s: Complex64) -> Result<Complex64> {
    if v <= 0.0 {
        return Err(Error::domain("big_phi", "v must be positive"));
    }
    if s.norm() < 1e-12 || (s - Complex64::new(1.0, 0.0)).norm() < 1e-12 {
        return Err(Error::Singularity { op: "big_phi", msg: format!("s = {s}") });
    }
    let expo = -v * s - kappa * int_i(s)?;
    let den = (TWO_PI * v * (Complex64::new(1.0, 0.0) - 1.0 / s)).sqrt();
    Ok(expo.exp() / den)
}

/// Same quantity through the Dickman transform, exp(γκ - vs)/(ϱ̂(-s)^κ ...).
/// Identical modulus everywhere; the phase agrees wherever the principal
/// power does not wrap, which the cross-check tests pin at moderate s.
pub fn big_phi_via_rho_hat(kappa: f64, v: f64, s: Complex64) -> Result<Complex64> {
    if v <= 0.0 {
        return Err(Error::domain("big_phi", "v must be positive"));
    }
    if s.norm() < 1e-12 || (s - Complex64::new(1.0, 0.0)).norm() < 1e-12 {
        return Err(Error::Singularity { op: "big_phi", msg: format!("s = {s}") });
    }
    let num = (Complex64::new(EULER * kappa, 0.0) - v * s).exp();
    let den = rho_hat(-s)?.powf(kappa) * (TWO_PI * v * (Complex64::new(1.0, 0.0) - 1.0 / s)).sqrt();
    Ok(num / den)
}

/// Decay envelope R_κ(v) = |Φ_κ(v, ζ₀(v/κ))|, strictly positive.
pub fn r_kappa(kappa: f64, v: f64) -> Result<f64> {
    if kappa <= 0.0 || v < 1.0 {
        return Err(Error::domain("r_kappa", "need kappa > 0, v >= 1"));
    }
    let z = zeta0(v / kappa)?;
    Ok(big_phi(kappa, v, z)?.norm())
}

/// (1/√v) · exp(-Re ∫_κ^v ζ₀(t/κ) dt): the integral form of the envelope,
/// comparable to `r_kappa` up to a bounded factor. Gauss-Legendre panels
/// with a tracked root keep the sweep cheap.
pub fn r_kappa_envelope(kappa: f64, v: f64) -> Result<f64> {
    if kappa <= 0.0 || v <= kappa {
        return Err(Error::domain("r_kappa_envelope", "need v > kappa > 0"));
    }
    let (xs, ws) = crate::quadrature::gauss_legendre(16);
    let panels = ((v - kappa) * 2.0).ceil() as usize;
    let h = (v - kappa) / panels as f64;
    let mut tracker = Zeta0Tracker::new();
    let mut re_int = 0.0;
    for p in 0..panels {
        let lo = kappa + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (x, w) in xs.iter().zip(&ws) {
            let t = mid + 0.5 * h * x;
            re_int += w * 0.5 * h * tracker.at(t / kappa)?.re;
        }
    }
    Ok((-re_int).exp() / v.sqrt())
}
