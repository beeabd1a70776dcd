//! Dormand–Prince 5(4) with adaptive steps and first-same-as-last reuse, on
//! complex state vectors.

use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const CS: [f64; 6] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Integrator state: stage buffers and the current step size.
pub struct Dp45 {
    pub rtol: f64,
    pub atol: f64,
    pub h: f64,
    pub h_min: f64,
    k: [Vec<C>; 7],
    tmp: Vec<C>,
    ynew: Vec<C>,
    fsal_valid: bool,
    pub stats: Stats,
}

impl Dp45 {
    pub fn new(len: usize, rtol: f64, atol: f64) -> Self {
        let z = || vec![C::new(0.0, 0.0); len];
        Self {
            rtol,
            atol,
            h: 0.0,
            h_min: 1e-14,
            k: [z(), z(), z(), z(), z(), z(), z()],
            tmp: z(),
            ynew: z(),
            fsal_valid: false,
            stats: Stats::default(),
        }
    }

    /// Forgets the cached derivative, e.g. after `y` was changed externally.
    pub fn invalidate(&mut self) {
        self.fsal_valid = false;
    }

    /// tmp = y + h Σ a_j k_j, blocked so each chunk of `tmp` stays in L1.
    fn combine(tmp: &mut [C], y: &[C], h: f64, coeffs: &[f64], k: &[Vec<C>]) {
        const BLOCK: usize = 256;
        for (b, out) in tmp.chunks_mut(BLOCK).enumerate() {
            let lo = b * BLOCK;
            let hi = lo + out.len();
            out.copy_from_slice(&y[lo..hi]);
            for (a, ki) in coeffs.iter().zip(k) {
                if *a == 0.0 {
                    continue;
                }
                let s = h * a;
                for (t, v) in out.iter_mut().zip(&ki[lo..hi]) {
                    *t += v * s;
                }
            }
        }
    }

    /// Integrates `y` from `t` to `t_end`. `f(t, y, dy)` evaluates the
    /// derivative; `on_step(t, h, y_old, y_new)` runs after every accepted
    /// step and may modify `y_new`.
    pub fn integrate<F, S>(&mut self, f: &mut F, y: &mut Vec<C>, mut t: f64, t_end: f64, on_step: &mut S) -> Result<()>
    where
        F: FnMut(f64, &[C], &mut [C]),
        S: FnMut(f64, f64, &[C], &mut [C]),
    {
        if !self.fsal_valid {
            f(t, y, &mut self.k[0]);
            self.stats.evaluations += 1;
            self.fsal_valid = true;
        }
        if self.h <= 0.0 {
            self.h = self.initial_step(y);
        }
        while t < t_end {
            let last = t + self.h >= t_end;
            let h = if last { t_end - t } else { self.h };
            let (k, tmp) = (&mut self.k, &mut self.tmp);
            let stages: [&[f64]; 5] = [&A2, &A3, &A4, &A5, &A6];
            for (s, a) in stages.iter().enumerate() {
                Self::combine(tmp, y, h, a, &k[..s + 1]);
                let (_, rest) = k.split_at_mut(s + 1);
                f(t + CS[s + 1] * h, tmp, &mut rest[0]);
            }
            Self::combine(&mut self.ynew, y, h, &B, &self.k[..6]);
            f(t + h, &self.ynew, &mut self.k[6]);
            self.stats.evaluations += 6;
            // Error norm; |z| via norm_sqr().sqrt() since hypot dominates
            // the cost otherwise.
            let mut acc = 0.0;
            let k = &self.k;
            for (i, (yi, yn)) in y.iter().zip(&self.ynew).enumerate() {
                let e = k[0][i] * E[0]
                    + k[2][i] * E[2]
                    + k[3][i] * E[3]
                    + k[4][i] * E[4]
                    + k[5][i] * E[5]
                    + k[6][i] * E[6];
                let sc = self.atol + self.rtol * yi.norm_sqr().max(yn.norm_sqr()).sqrt();
                acc += e.norm_sqr() * (h * h) / (sc * sc);
            }
            let err = (acc / y.len() as f64).sqrt();
            if err <= 1.0 {
                let t_new = t + h;
                std::mem::swap(y, &mut self.ynew);
                on_step(t_new, h, &self.ynew, y);
                self.k.swap(0, 6);
                t = t_new;
                self.stats.accepted += 1;
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !last {
                    self.h = h * fac;
                }
            } else {
                self.stats.rejected += 1;
                self.h = h * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                if self.h < self.h_min {
                    return Err(Error::StepSizeUnderflow { time_us: t });
                }
            }
        }
        Ok(())
    }

    fn initial_step(&self, y: &[C]) -> f64 {
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for (yi, fi) in y.iter().zip(&self.k[0]) {
            let sc = self.atol + self.rtol * yi.norm_sqr().sqrt();
            d0 += yi.norm_sqr() / (sc * sc);
            d1 += fi.norm_sqr() / (sc * sc);
        }
        let (d0, d1) = ((d0 / y.len() as f64).sqrt(), (d1 / y.len() as f64).sqrt());
        if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        }
    }
}
