//! Real polynomial roots from companion-matrix eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Coefficients in ascending order, c[0] + c[1] x + … .
pub fn eval(c: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

fn trimmed(c: &[f64]) -> &[f64] {
    let mut d = c.len();
    while d > 0 && c[d - 1] == 0.0 {
        d -= 1;
    }
    &c[..d]
}

/// All complex roots. The variable is rescaled so the constant and leading
/// coefficients have equal magnitude before the companion matrix is built.
pub fn roots(c: &[f64]) -> Vec<Complex64> {
    let c = trimmed(c);
    if c.len() < 2 {
        return Vec::new();
    }
    let deg = c.len() - 1;
    // Leading zeros at x = 0 are exact roots.
    let zeros = c.iter().take_while(|&&a| a == 0.0).count();
    let rest = &c[zeros..];
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    let d = rest.len() - 1;
    if d == 0 {
        return out;
    }
    let s = (rest[0].abs() / rest[d].abs()).powf(1.0 / d as f64);
    let s = if s.is_finite() && s > 0.0 { s } else { 1.0 };
    // p(s·y) / (c_d s^d), monic in y.
    let lead = rest[d];
    let scaled: Vec<f64> = (0..=d)
        .map(|k| rest[k] * s.powi(k as i32 - d as i32) / lead)
        .collect();
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -scaled[i];
    }
    out.extend(m.complex_eigenvalues().iter().map(|z| z * s));
    debug_assert_eq!(out.len(), deg);
    out
}

/// Real roots, Newton-polished on the original coefficients, ascending.
///
/// A root counts as real when its imaginary part is below `1e-7` of its
/// magnitude (or of the root scale near zero).
pub fn real_roots(c: &[f64]) -> Vec<f64> {
    let c = trimmed(c);
    let all = roots(c);
    let scale = all.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let mut real: Vec<f64> = all
        .iter()
        .filter(|z| z.im.abs() <= 1e-7 * z.norm().max(1e-3 * scale))
        .map(|z| polish(c, z.re))
        .collect();
    real.sort_by(f64::total_cmp);
    real
}

/// Newton steps that are kept only while they reduce |p|.
pub fn polish(c: &[f64], mut x: f64) -> f64 {
    let (mut p, _) = eval(c, x);
    for _ in 0..8 {
        let (_, dp) = eval(c, x);
        if dp == 0.0 || p == 0.0 {
            break;
        }
        let xn = x - p / dp;
        let (pn, _) = eval(c, xn);
        if pn.abs() < p.abs() {
            x = xn;
            p = pn;
        } else {
            break;
        }
    }
    x
}

/// Product of two ascending coefficient lists.
pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Sum of two ascending coefficient lists.
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    out
}
