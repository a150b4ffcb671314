//! Gauss–Legendre and Gauss–Jacobi rules.
//!
//! Legendre nodes come from Newton iteration on the three-term recurrence.
//! Jacobi rules (weight r^g on [0,1], g > -1) are produced by Golub–Welsch:
//! eigenvalues of the symmetric tridiagonal recurrence matrix, with the
//! first eigenvector component giving the weight. The algebraic endpoint
//! weight is what lets the solver integrate across the (v-n)^g factors of
//! the non-integer-order solutions at full accuracy.

/// Nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_n'(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre integration of `f` over `[a, b]`.
pub fn integrate_gl(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (xs, ws) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (x, w) in xs.iter().zip(&ws) {
            total += w * 0.5 * h * f(mid + 0.5 * h * x);
        }
    }
    total
}

/// Quadrature rule for ∫₀¹ r^g f(r) dr, exact for polynomial f of degree
/// ≤ 2n-1. Requires g > -1.
pub fn gauss_jacobi01(n: usize, g: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(g > -1.0, "jacobi exponent must be integrable");
    // monic Jacobi recurrence, alpha = 0, beta = g on [-1, 1]
    let mu0 = (2f64).powf(g + 1.0) / (g + 1.0);
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    diag[0] = g / (g + 2.0);
    for k in 1..n {
        let kf = k as f64;
        let den = 2.0 * kf + g;
        diag[k] = g * g / (den * (den + 2.0));
        let b = 4.0 * kf * kf * (kf + g) * (kf + g) / (den * den * (den + 1.0) * (den - 1.0));
        off[k - 1] = b.sqrt();
    }
    let (mut nodes, firsts) = symtri_eigen(diag, off);
    let mut weights: Vec<f64> = firsts.iter().map(|z| mu0 * z * z).collect();
    // map [-1,1] with weight (1+t)^g onto [0,1] with weight r^g
    let scale = (2f64).powf(-g - 1.0);
    for (t, w) in nodes.iter_mut().zip(weights.iter_mut()) {
        *t = 0.5 * (1.0 + *t);
        *w *= scale;
    }
    (nodes, weights)
}

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal
/// matrix (implicit QL with Wilkinson-style shifts).
fn symtri_eigen(mut d: Vec<f64>, off: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    let n = d.len();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&off);
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    if n == 1 {
        return (d, z);
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
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
            assert!(iter < 60, "tridiagonal QL did not converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let sign_r = if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
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
            if r == 0.0 && m - l > 1 {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // sort ascending by eigenvalue
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let nodes = idx.iter().map(|&i| d[i]).collect();
    let firsts = idx.iter().map(|&i| z[i]).collect();
    (nodes, firsts)
}
