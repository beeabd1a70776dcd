//! Least-squares Lorentzian line fits, y = c + A / (1 + ((x − x₀)/w)²).

use nalgebra::{Matrix4, Vector4};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianFit {
    pub offset: f64,
    pub amplitude: f64,
    pub center: f64,
    pub hwhm: f64,
    /// Root-mean-square residual.
    pub rms: f64,
    pub converged: bool,
}

impl LorentzianFit {
    pub fn eval(&self, x: f64) -> f64 {
        lorentzian(&[self.offset, self.amplitude, self.center, self.hwhm], x)
    }
}

fn lorentzian(p: &[f64; 4], x: f64) -> f64 {
    let u = (x - p[2]) / p[3];
    p[0] + p[1] / (1.0 + u * u)
}

/// Offset, amplitude and centre from the extremes; width from the half-power
/// crossings on either side of the maximum.
fn initial_guess(x: &[f64], y: &[f64]) -> [f64; 4] {
    let (imax, &ymax) = y
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    let ymin = y.iter().cloned().fold(f64::INFINITY, f64::min);
    let half = 0.5 * (ymax + ymin);
    let crossing = |range: &mut dyn Iterator<Item = usize>| -> Option<f64> {
        let mut prev = imax;
        for i in range {
            if y[i] < half {
                let t = (y[prev] - half) / (y[prev] - y[i]);
                return Some(x[prev] + t * (x[i] - x[prev]));
            }
            prev = i;
        }
        None
    };
    let left = crossing(&mut (0..imax).rev());
    let right = crossing(&mut (imax + 1..x.len()));
    let span = (x[x.len() - 1] - x[0]).abs();
    let w = match (left, right) {
        (Some(l), Some(r)) => 0.5 * (r - l).abs(),
        (Some(l), None) => (x[imax] - l).abs(),
        (None, Some(r)) => (r - x[imax]).abs(),
        (None, None) => 0.25 * span,
    };
    let w = if w > 0.0 { w } else { 0.25 * span.max(f64::MIN_POSITIVE) };
    [ymin, ymax - ymin, x[imax], w]
}

fn cost(p: &[f64; 4], x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(&xi, &yi)| (lorentzian(p, xi) - yi).powi(2)).sum()
}

/// Levenberg–Marquardt fit with the analytic Jacobian. Needs at least four
/// points; `converged` is false when the iteration stalls, the width
/// collapses or the centre leaves the sampled range by more than its span.
pub fn fit_lorentzian(x: &[f64], y: &[f64]) -> LorentzianFit {
    assert_eq!(x.len(), y.len());
    let bad = LorentzianFit {
        offset: f64::NAN,
        amplitude: f64::NAN,
        center: f64::NAN,
        hwhm: f64::NAN,
        rms: f64::NAN,
        converged: false,
    };
    if x.len() < 4 || y.iter().any(|v| !v.is_finite()) {
        return bad;
    }
    let mut p = initial_guess(x, y);
    let mut c = cost(&p, x, y);
    let mut lambda = 1e-3;
    let mut converged = false;
    for _ in 0..500 {
        let mut jtj = Matrix4::<f64>::zeros();
        let mut jtr = Vector4::<f64>::zeros();
        for (&xi, &yi) in x.iter().zip(y) {
            let u = (xi - p[2]) / p[3];
            let d = 1.0 / (1.0 + u * u);
            let j = Vector4::new(1.0, d, 2.0 * p[1] * u * d * d / p[3], 2.0 * p[1] * u * u * d * d / p[3]);
            let r = p[0] + p[1] * d - yi;
            jtj += j * j.transpose();
            jtr += j * r;
        }
        let mut accepted = false;
        while lambda < 1e12 {
            let mut a = jtj;
            for k in 0..4 {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-300);
            }
            let Some(step) = a.lu().solve(&(-jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let mut q = p;
            for k in 0..4 {
                q[k] += step[k];
            }
            q[3] = q[3].abs();
            let cq = cost(&q, x, y);
            if cq.is_finite() && cq <= c {
                let small = (0..4).all(|k| step[k].abs() <= 1e-12 * (p[k].abs() + 1e-12 * q[3]));
                let flat = c - cq <= 1e-15 * c.max(1e-300);
                p = q;
                c = cq;
                lambda = (lambda * 0.3).max(1e-12);
                accepted = true;
                if small || flat {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if converged || !accepted {
            converged = converged || c <= 1e-28 * y.iter().map(|v| v * v).sum::<f64>();
            if !accepted && !converged {
                // No downhill step at any damping: a stationary point.
                converged = true;
            }
            break;
        }
    }
    let span = (x[x.len() - 1] - x[0]).abs();
    let lo = x.iter().cloned().fold(f64::INFINITY, f64::min) - span;
    let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + span;
    let sane = p[3] > 0.0 && p[3].is_finite() && p[2] > lo && p[2] < hi;
    LorentzianFit {
        offset: p[0],
        amplitude: p[1],
        center: p[2],
        hwhm: p[3],
        rms: (c / x.len() as f64).sqrt(),
        converged: converged && sane,
    }
}
