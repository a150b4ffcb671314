//! Extended-precision solves of the delay-differential family.
//!
//! The oscillating remainder ψ_κ(v) - e^{-γκ} sits below the f64
//! resolution of ψ_κ itself once v passes ≈ 12: the remainder decays like
//! the envelope R_κ(v), reaching ~1e-66 by v = 40, while any double-
//! precision forward solve carries an absolute noise floor near 1e-16.
//! Every rounding error excites the constant mode of the ψ-equation and
//! persists, so no rescaling trick recovers the signal — the solve itself
//! has to run with enough mantissa to keep *all* errors below the target
//! remainder. This module reruns the method of steps in MPFR arithmetic
//! with the precision chosen from the envelope integral.
//!
//! The representation differs from the f64 solver: each unit interval
//! (n, n+1] splits at n + 1/2 into a left part stored as monomial series
//! p(x) + x^g q(x) around the integer (x = v - n), and a right part
//! stored as a Taylor series around n + 3/4. The split keeps every series
//! inside a third of its convergence radius, so truncation stays
//! geometric at rate ≥ 2 per coefficient.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::saddle::r_kappa_envelope;

fn mpf(prec: u32, x: f64) -> Float {
    Float::with_val(prec, x)
}

#[derive(Debug, Clone)]
struct MpSeries {
    prec: u32,
    c: Vec<Float>,
}

impl MpSeries {
    fn constant(prec: u32, v: Float) -> Self {
        MpSeries { prec, c: vec![v] }
    }

    fn monomial(prec: u32, coef: Float, power: usize) -> Self {
        let mut c = vec![mpf(prec, 0.0); power + 1];
        c[power] = coef;
        MpSeries { prec, c }
    }

    fn eval(&self, x: &Float) -> Float {
        let mut acc = mpf(self.prec, 0.0);
        for ck in self.c.iter().rev() {
            acc *= x;
            acc += ck;
        }
        acc
    }

    fn mul(&self, other: &Self, cap: usize) -> Self {
        let n = (self.c.len() + other.c.len()).saturating_sub(1).min(cap);
        let mut out = vec![mpf(self.prec, 0.0); n];
        for (i, a) in self.c.iter().enumerate() {
            if i >= n {
                break;
            }
            for (j, b) in other.c.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                out[i + j] += Float::with_val(self.prec, a * b);
            }
        }
        MpSeries { prec: self.prec, c: out }
    }

    /// self + s · other
    fn add_scaled(&self, other: &Self, s: &Float) -> Self {
        let n = self.c.len().max(other.c.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut v = if k < self.c.len() { self.c[k].clone() } else { mpf(self.prec, 0.0) };
            if k < other.c.len() {
                v += Float::with_val(self.prec, s * &other.c[k]);
            }
            out.push(v);
        }
        MpSeries { prec: self.prec, c: out }
    }

    fn scaled(&self, s: &Float) -> Self {
        MpSeries {
            prec: self.prec,
            c: self.c.iter().map(|x| Float::with_val(self.prec, x * s)).collect(),
        }
    }

    /// Termwise ∫₀ˣ: coefficient k moves to k+1 with weight 1/(k+1).
    fn integrate(&self) -> Self {
        let mut out = Vec::with_capacity(self.c.len() + 1);
        out.push(mpf(self.prec, 0.0));
        for (k, ck) in self.c.iter().enumerate() {
            out.push(Float::with_val(self.prec, ck / (k as f64 + 1.0)));
        }
        MpSeries { prec: self.prec, c: out }
    }

    /// Termwise ∫₀ˣ τ^g · (Σ u_k τ^k) dτ = x^{g+1} Σ u_k x^k / (g+1+k);
    /// returns the bracketed series (the caller owns the x^{g+1} factor).
    fn integrate_with_exponent(&self, g: &Float) -> Self {
        let out = self
            .c
            .iter()
            .enumerate()
            .map(|(k, ck)| {
                let den = Float::with_val(self.prec, g + (k as f64 + 1.0));
                Float::with_val(self.prec, ck / den)
            })
            .collect();
        MpSeries { prec: self.prec, c: out }
    }

    /// Drop trailing coefficients whose contribution on |x| ≤ r is below
    /// 2^-(prec+16) of the series scale.
    fn trim(&mut self, r: f64) {
        let mut scale = Float::with_val(self.prec, 0.0);
        let mut rk = mpf(self.prec, 1.0);
        let rr = mpf(self.prec, r);
        let mut terms: Vec<Float> = Vec::with_capacity(self.c.len());
        for ck in &self.c {
            let t = Float::with_val(self.prec, ck.clone().abs() * &rk);
            if t > scale {
                scale = t.clone();
            }
            terms.push(t);
            rk *= &rr;
        }
        if scale.is_zero() {
            self.c.truncate(1);
            return;
        }
        let thresh = scale >> (self.prec + 16);
        let mut keep = self.c.len();
        while keep > 1 && terms[keep - 1] < thresh {
            keep -= 1;
        }
        self.c.truncate(keep);
    }
}

/// Series of (base + t)^e around t = 0, truncated once the term bound on
/// |t| ≤ r·base drops below the working precision.
fn binom_series(prec: u32, base: f64, e: &Float, r: f64, cap: usize) -> MpSeries {
    let mut coef = Float::with_val(prec, mpf(prec, base).pow(e));
    let scale0 = coef.clone().abs();
    let mut c = Vec::with_capacity(64);
    let mut rk = mpf(prec, 1.0);
    for k in 0..cap {
        c.push(coef.clone());
        let num = Float::with_val(prec, e - k as f64);
        coef = Float::with_val(prec, &coef * num) / ((k as f64 + 1.0) * base);
        rk *= r;
        let bound = Float::with_val(prec, coef.clone().abs() * &rk);
        if bound < Float::with_val(prec, &scale0 >> (prec + 16)) {
            c.push(coef.clone());
            break;
        }
    }
    MpSeries { prec, c }
}

#[derive(Debug, Clone)]
struct MpPiece {
    n: usize,
    /// left representation on [n, n+1/2]: p(x) + x^g q(x), x = v - n
    p: MpSeries,
    q: Option<(Float, MpSeries)>,
    /// right representation on [n+1/2, n+1]: Taylor in τ = v - (n+3/4)
    right: MpSeries,
}

/// Closed-form data on the initial interval.
pub enum MpInitial {
    Constant(f64),
    /// c · v^g with c given as a gamma reciprocal computed in MPFR.
    PowerLawGammaRecip { gamma_arg: f64, g: f64 },
}

/// Method-of-steps solution in MPFR arithmetic.
pub struct MpSolution {
    prec: u32,
    a: Float,
    b: Float,
    pieces: Vec<MpPiece>,
    pub v_max: f64,
}

const LEFT_R: f64 = 0.5;
const RIGHT_R: f64 = 0.25;

impl MpSolution {
    pub fn solve(a: f64, b: f64, init: MpInitial, v_max: f64, prec: u32) -> Result<Self> {
        if v_max < 1.0 {
            return Err(Error::domain("mp_solve", "v_max must be >= 1"));
        }
        let cap = prec as usize + 96;
        let af = mpf(prec, a);
        let bf = mpf(prec, b);
        let n_pieces = v_max.ceil() as usize;

        let first = match init {
            MpInitial::Constant(cv) => MpPiece {
                n: 0,
                p: MpSeries::constant(prec, mpf(prec, cv)),
                q: None,
                right: MpSeries::constant(prec, mpf(prec, cv)),
            },
            MpInitial::PowerLawGammaRecip { gamma_arg, g } => {
                let coef = Float::with_val(prec, mpf(prec, gamma_arg).gamma().recip());
                let gf = mpf(prec, g);
                let right = binom_series(prec, 0.75, &gf, RIGHT_R / 0.75, cap).scaled(&coef);
                if g >= 0.0 && g == g.floor() {
                    MpPiece {
                        n: 0,
                        p: MpSeries::monomial(prec, coef, g as usize),
                        q: None,
                        right,
                    }
                } else {
                    MpPiece {
                        n: 0,
                        p: MpSeries::constant(prec, mpf(prec, 0.0)),
                        q: Some((gf, MpSeries::constant(prec, coef))),
                        right,
                    }
                }
            }
        };

        let mut pieces = vec![first];
        for m in 1..n_pieces {
            let prev = &pieces[m - 1];
            let mf = m as f64;
            let am1 = Float::with_val(prec, &af - 1.0);
            let neg_a = Float::with_val(prec, -&af);

            // ---- left part on [m, m + 1/2], x = v - m ----
            // v^a f = m^a f(m) - b ∫₀ˣ (m+x)^{a-1} f_prev(x) dx
            let f_at_m = prev.right.eval(&mpf(prec, 0.25));
            let w = binom_series(prec, mf, &am1, LEFT_R / mf, cap);
            let s_int = w.mul(&prev.p, cap).integrate();
            let m_pow_a = Float::with_val(prec, mpf(prec, mf).pow(&af));
            let konst = Float::with_val(prec, &m_pow_a * &f_at_m);
            let inner = MpSeries::constant(prec, konst).add_scaled(&s_int, &Float::with_val(prec, -&bf));
            let outer = binom_series(prec, mf, &neg_a, LEFT_R / mf, cap);
            let mut p_new = outer.mul(&inner, cap);
            p_new.trim(LEFT_R);

            let q_new = match &prev.q {
                Some((g, qs)) => {
                    let u = w.mul(qs, cap);
                    let t = u.integrate_with_exponent(g);
                    let mut qn =
                        outer.mul(&t, cap).scaled(&Float::with_val(prec, -&bf));
                    qn.trim(LEFT_R);
                    Some((Float::with_val(prec, g + 1.0), qn))
                }
                None => None,
            };

            // ---- right part on [m + 1/2, m + 1], τ = v - (m + 3/4) ----
            // v^a f = s^a f(s)|_{s=m+1/2} - b ∫ (c+τ)^{a-1} r_prev(τ) dτ
            let c_center = mf + 0.75;
            let half = mpf(prec, -0.25);
            let wr = binom_series(prec, c_center, &am1, RIGHT_R / c_center, cap);
            let a_int = wr.mul(&prev.right, cap).integrate();
            let a_at_left = a_int.eval(&half);
            let x_half = mpf(prec, 0.5);
            let mut f_half = p_new.eval(&x_half);
            if let Some((g, qs)) = &q_new {
                let xg = Float::with_val(prec, x_half.clone().pow(g));
                f_half += Float::with_val(prec, xg * qs.eval(&x_half));
            }
            let s_pow_a = Float::with_val(prec, mpf(prec, mf + 0.5).pow(&af));
            let k_right = Float::with_val(
                prec,
                &s_pow_a * &f_half + Float::with_val(prec, &bf * &a_at_left),
            );
            let inner_r =
                MpSeries::constant(prec, k_right).add_scaled(&a_int, &Float::with_val(prec, -&bf));
            let outer_r = binom_series(prec, c_center, &neg_a, RIGHT_R / c_center, cap);
            let mut right = outer_r.mul(&inner_r, cap);
            right.trim(RIGHT_R);

            pieces.push(MpPiece { n: m, p: p_new, q: q_new, right });
        }

        Ok(MpSolution { prec, a: af, b: bf, pieces, v_max: n_pieces as f64 })
    }

    /// Solution value at v (Float), right-continuous at the integers.
    fn eval0(&self, v: &Float) -> Float {
        let vf = v.to_f64();
        if vf < 0.0 {
            return mpf(self.prec, 0.0);
        }
        let idx = (vf.floor() as usize).min(self.pieces.len() - 1);
        let piece = &self.pieces[idx];
        let x = Float::with_val(self.prec, v - idx as f64);
        if x.to_f64() <= 0.5 {
            let mut val = piece.p.eval(&x);
            if let Some((g, qs)) = &piece.q {
                if x.is_zero() {
                    // x^g -> 0 for the positive exponents reached past the
                    // first interval; the initial singular piece is never
                    // sampled at 0
                    if g.to_f64() > 0.0 {
                        return val;
                    }
                }
                let xg = Float::with_val(self.prec, x.clone().pow(g));
                val += Float::with_val(self.prec, xg * qs.eval(&x));
            }
            val
        } else {
            let tau = Float::with_val(self.prec, &x - 0.75f64);
            piece.right.eval(&tau)
        }
    }

    /// Derivative level j at v through the differentiated equations.
    fn eval_d(&self, j: usize, v: &Float) -> Float {
        if v.to_f64() < 0.0 {
            return mpf(self.prec, 0.0);
        }
        if j == 0 {
            return self.eval0(v);
        }
        let fj = self.eval_d(j - 1, v);
        let vm1 = Float::with_val(self.prec, v - 1.0f64);
        let fdel = self.eval_d(j - 1, &vm1);
        let aj = Float::with_val(self.prec, &self.a + (j as f64 - 1.0));
        let num = Float::with_val(
            self.prec,
            Float::with_val(self.prec, &aj * &fj) + Float::with_val(self.prec, &self.b * &fdel),
        );
        -num / v
    }

    pub fn eval_f64(&self, v: f64) -> f64 {
        self.eval0(&mpf(self.prec, v)).to_f64()
    }

    pub fn eval_deriv_f64(&self, j: usize, v: f64) -> f64 {
        self.eval_d(j, &mpf(self.prec, v)).to_f64()
    }
}

/// Working precision from the envelope: enough bits that every rounding
/// error stays far below the remainder being measured at v_max.
fn envelope_prec(kappa: f64, v_max: f64) -> u32 {
    let bits = match r_kappa_envelope(kappa, v_max) {
        Ok(env) if env > 0.0 => 160.0 - env.log2(),
        _ => 384.0,
    };
    (bits.ceil() as u32).clamp(256, 1024).next_multiple_of(64)
}

/// ψ_κ and its distance from the limit e^{-γκ}, in extended precision.
pub struct PsiDelta {
    kappa: f64,
    nu: usize,
    sol: MpSolution,
    limit: Float,
}

impl PsiDelta {
    pub fn new(kappa: f64, v_max: f64) -> Result<Self> {
        if kappa <= 0.0 {
            return Err(Error::domain("psi_delta", "kappa must be positive"));
        }
        let prec = envelope_prec(kappa, v_max.max(2.0 * kappa + 2.0));
        let theta = kappa - kappa.floor();
        let init = if theta == 0.0 {
            MpInitial::Constant(1.0)
        } else {
            MpInitial::PowerLawGammaRecip { gamma_arg: 1.0 - theta, g: -theta }
        };
        let sol = MpSolution::solve(theta, -kappa, init, v_max, prec)?;
        let gamma = Float::with_val(prec, Constant::Euler);
        let limit = Float::with_val(prec, (gamma * -kappa).exp());
        Ok(PsiDelta { kappa, nu: kappa.floor() as usize, sol, limit })
    }

    /// ψ_κ(v) - e^{-γκ}, accurate in a relative sense even where the
    /// difference is far below 1 ulp of ψ_κ.
    pub fn delta(&self, v: f64) -> Result<f64> {
        if v <= self.nu as f64 || v > self.sol.v_max {
            return Err(Error::domain("psi_delta", format!("v = {v} outside (nu, v_max]")));
        }
        let prec = self.sol.prec;
        let psi = self.sol.eval_d(self.nu, &mpf(prec, v));
        Ok(Float::with_val(prec, psi - &self.limit).to_f64())
    }

    /// ψ_κ(v) rounded to f64.
    pub fn psi(&self, v: f64) -> Result<f64> {
        if v <= 0.0 || v > self.sol.v_max {
            return Err(Error::domain("psi_delta", format!("v = {v} outside domain")));
        }
        Ok(self.sol.eval_deriv_f64(self.nu, v))
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// h_κ in extended precision; a cross-validation oracle for the f64 path.
pub fn mp_h(kappa: f64, v_max: f64, prec: u32) -> Result<MpSolution> {
    MpSolution::solve(0.0, -kappa, MpInitial::Constant(1.0), v_max, prec)
}
