//! The self-consistent pump-field condition
//!
//! 0 = A(n) α + ε,  A(n) = (Δ + K_eff n + K′ n²) − i(κ/2 + κ_NL n),  n = |α|²,
//!
//! with Δ = ω_r − ω_p + 𝕊_i and K_eff = K + 𝕂_i/6. Taking the squared modulus
//! gives the real quintic n|A(n)|² = |ε|².

use num_complex::Complex64;

use crate::model::{ResonatorSpec, StarkCoeffs};
use crate::poly;

/// Coefficients of the pump condition for one qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpEquation {
    pub detuning: f64,
    pub kerr: f64,
    pub kerr3: f64,
    pub kappa: f64,
    pub kappa_nl: f64,
}

/// One real non-negative photon-number root and its field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpRoot {
    pub n: f64,
    pub alpha: Complex64,
    pub stable: bool,
    pub residual: f64,
}

impl PumpEquation {
    /// Bare resonator, no qubit pull.
    pub fn bare(res: &ResonatorSpec, omega_p: f64) -> Self {
        Self {
            detuning: res.omega_r - omega_p,
            kerr: res.kerr,
            kerr3: res.kerr3,
            kappa: res.kappa,
            kappa_nl: res.kappa_nl,
        }
    }

    /// Resonator pulled by qubit state `state` through 𝕊 and 𝕂 of the pump.
    pub fn for_state(res: &ResonatorSpec, coeffs: &StarkCoeffs, state: usize) -> Self {
        let mut e = Self::bare(res, coeffs.omega_d);
        e.detuning += coeffs.s2[state];
        e.kerr += coeffs.s4[state] / 6.0;
        e
    }

    /// Adds a constant frequency pull.
    pub fn pulled(self, shift: f64) -> Self {
        Self {
            detuning: self.detuning + shift,
            ..self
        }
    }

    pub fn a(&self, n: f64) -> Complex64 {
        Complex64::new(
            self.detuning + self.kerr * n + self.kerr3 * n * n,
            -(0.5 * self.kappa + self.kappa_nl * n),
        )
    }

    /// dA/dn.
    pub fn da(&self, n: f64) -> Complex64 {
        Complex64::new(self.kerr + 2.0 * self.kerr3 * n, -self.kappa_nl)
    }

    /// f(n) = n|A(n)|² as ascending coefficients.
    pub fn response_poly(&self) -> Vec<f64> {
        let re = [self.detuning, self.kerr, self.kerr3];
        let im = [0.5 * self.kappa, self.kappa_nl];
        let mag = poly::add(&poly::mul(&re, &re), &poly::mul(&im, &im));
        poly::mul(&[0.0, 1.0], &mag)
    }

    /// f(n) and f′(n).
    pub fn response(&self, n: f64) -> (f64, f64) {
        poly::eval(&self.response_poly(), n)
    }

    /// Residual |A(|α|²)α + ε|.
    pub fn residual(&self, alpha: Complex64, eps: Complex64) -> f64 {
        (self.a(alpha.norm_sqr()) * alpha + eps).norm()
    }

    /// Acceptance bound for [`Self::residual`].
    pub fn residual_bound(&self, eps: Complex64) -> f64 {
        1e-9 * (eps.norm() + 0.5 * self.kappa)
    }

    /// Real linear map h ↦ A h + A′ (2 Re(α* h)) α, the derivative of the
    /// left-hand side at α, returned as a 2×2 matrix on (Re h, Im h).
    pub fn jacobian(&self, alpha: Complex64) -> [[f64; 2]; 2] {
        let n = alpha.norm_sqr();
        let a = self.a(n);
        let da = self.da(n) * alpha;
        let col = |h: Complex64| {
            let dn = 2.0 * (alpha.conj() * h).re;
            a * h + da * dn
        };
        let c0 = col(Complex64::new(1.0, 0.0));
        let c1 = col(Complex64::new(0.0, 1.0));
        [[c0.re, c1.re], [c0.im, c1.im]]
    }

    /// Solves the linearized equation J h = rhs.
    pub fn solve_linear(&self, alpha: Complex64, rhs: Complex64) -> Option<Complex64> {
        let j = self.jacobian(alpha);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(Complex64::new(
            (rhs.re * j[1][1] - rhs.im * j[0][1]) / det,
            (j[0][0] * rhs.im - j[1][0] * rhs.re) / det,
        ))
    }

    /// Newton steps on the complex equation, kept only while they lower the
    /// residual.
    pub fn polish(&self, mut alpha: Complex64, eps: Complex64) -> Complex64 {
        let mut r = self.residual(alpha, eps);
        for _ in 0..6 {
            if r == 0.0 {
                break;
            }
            let g = self.a(alpha.norm_sqr()) * alpha + eps;
            let Some(step) = self.solve_linear(alpha, -g) else {
                break;
            };
            let next = alpha + step;
            let rn = self.residual(next, eps);
            if rn < r {
                alpha = next;
                r = rn;
            } else {
                break;
            }
        }
        alpha
    }

    /// All real non-negative roots, ascending in n, each with field,
    /// stability (f′(n) > 0) and residual.
    pub fn roots(&self, eps: Complex64) -> Vec<PumpRoot> {
        if eps.norm() == 0.0 {
            return vec![PumpRoot {
                n: 0.0,
                alpha: Complex64::new(0.0, 0.0),
                stable: self.response(0.0).1 > 0.0,
                residual: 0.0,
            }];
        }
        let mut p = self.response_poly();
        p[0] -= eps.norm_sqr();
        let mut out: Vec<PumpRoot> = Vec::new();
        for n in poly::real_roots(&p) {
            if n < 0.0 {
                continue;
            }
            let alpha = self.polish(-eps / self.a(n), eps);
            let n = alpha.norm_sqr();
            // Merged double roots polish onto the same field.
            if let Some(last) = out.last() {
                if (last.alpha - alpha).norm() <= 1e-9 * alpha.norm().max(1.0) {
                    continue;
                }
            }
            out.push(PumpRoot {
                n,
                alpha,
                stable: self.response(n).1 > 0.0,
                residual: self.residual(alpha, eps),
            });
        }
        out
    }

    /// Positive photon numbers where f′(n) = 0, ascending. They come in
    /// (local max, local min) pairs of f.
    pub fn turning_points(&self) -> Vec<f64> {
        let d = derivative(&self.response_poly());
        poly::real_roots(&d).into_iter().filter(|&n| n > 0.0).collect()
    }

    /// True when f has a decreasing stretch on n ≥ 0, i.e. some drive
    /// strength gives more than one root.
    pub fn has_bistability(&self) -> bool {
        let f = self.response_poly();
        let d1 = derivative(&f);
        let d2 = derivative(&d1);
        poly::real_roots(&d2)
            .into_iter()
            .filter(|&n| n > 0.0)
            .any(|n| poly::eval(&d1, n).0 < 0.0)
    }
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| k as f64 * a)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kerr(detuning: f64) -> PumpEquation {
        PumpEquation {
            detuning,
            kerr: -0.625,
            kerr3: 0.0,
            kappa: 9.6,
            kappa_nl: 0.0,
        }
    }

    #[test]
    fn linear_resonant_drive() {
        let e = PumpEquation {
            detuning: 0.0,
            kerr: 0.0,
            kerr3: 0.0,
            kappa: 10.0,
            kappa_nl: 0.0,
        };
        let r = e.roots(Complex64::new(5.0, 0.0));
        assert_eq!(r.len(), 1);
        assert!((r[0].alpha - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((r[0].n - 1.0).abs() < 1e-15);
    }

    #[test]
    fn three_roots_inside_window() {
        let e = kerr(25.0);
        let r = e.roots(Complex64::new(40.0, 0.0));
        assert_eq!(r.len(), 3, "{r:?}");
        assert!(r[0].stable && !r[1].stable && r[2].stable);
        for x in &r {
            assert!(x.residual < e.residual_bound(Complex64::new(40.0, 0.0)));
        }
    }

    #[test]
    fn turning_points_bound_the_window() {
        let e = kerr(25.0);
        let t = e.turning_points();
        assert_eq!(t.len(), 2);
        let hi = e.response(t[0]).0.sqrt();
        let lo = e.response(t[1]).0.sqrt();
        assert!(lo < hi);
        assert_eq!(e.roots(Complex64::new(lo * 0.999, 0.0)).len(), 1);
        assert_eq!(e.roots(Complex64::new(lo * 1.001, 0.0)).len(), 3);
        assert_eq!(e.roots(Complex64::new(hi * 0.999, 0.0)).len(), 3);
        assert_eq!(e.roots(Complex64::new(hi * 1.001, 0.0)).len(), 1);
    }

    #[test]
    fn bistability_needs_critical_detuning() {
        let c = 3f64.sqrt() * 9.6 / 2.0;
        assert!(!kerr(0.99 * c).has_bistability());
        assert!(kerr(1.01 * c).has_bistability());
        assert!(!kerr(-5.0 * c).has_bistability());
    }

    #[test]
    fn complex_drive_phase_rotates_field() {
        let e = kerr(10.0);
        let a = e.roots(Complex64::new(10.0, 0.0))[0].alpha;
        let ph = Complex64::from_polar(1.0, 0.7);
        let b = e.roots(10.0 * ph)[0].alpha;
        assert!((a * ph - b).norm() < 1e-12);
    }

    #[test]
    fn zero_drive() {
        let r = kerr(10.0).roots(Complex64::new(0.0, 0.0));
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].n, 0.0);
    }
}
