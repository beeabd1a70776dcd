//! Matrix-free Lindblad generator on qubit ⊗ Fock space, in a frame rotating
//! at a common frequency ω_f for both subsystems. The dipolar coupling is
//! kept in rotating-wave form, so only the drives remain time dependent.
//!
//! Basis index r = q·N + n. Time is in µs, parameters in MHz; every
//! coefficient carries the 2π.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::config::HilbertConfig;
use crate::error::{invalid, Result};
use crate::model::{DriveSpec, QubitSpec, ResonatorSpec};

type C = Complex64;

#[derive(Debug, Clone)]
struct Tone {
    /// Amplitude, rad/µs.
    eps: C,
    /// Frequency relative to the frame, rad/µs.
    detuning: f64,
}

/// ρ̇ = L(t)ρ for a fixed set of parameters.
#[derive(Debug, Clone)]
pub struct Generator {
    m: usize,
    n: usize,
    dim: usize,
    /// −i(E_r − E_c) − ½(d_r + d_c) − γ_φ(ε_q − ε_q′)², row-major.
    diag: Vec<C>,
    /// H[r][r + N − 1] = g_q √n: |q, n⟩ ← |q+1, n−1⟩.
    up: Vec<f64>,
    /// H[r][r − N + 1] = g_{q−1} √(n+1): |q, n⟩ ← |q−1, n+1⟩.
    down: Vec<f64>,
    /// √(n+1) per row (zero at the top Fock state).
    sqrt_up: Vec<f64>,
    /// √n per row.
    sqrt_dn: Vec<f64>,
    kappa: f64,
    kappa_nl: f64,
    /// Relaxation rate into level q from q+1.
    relax: Vec<f64>,
    tones: Vec<Tone>,
    /// Beat period between spectroscopy and pump, µs.
    beat_us: Option<f64>,
}

impl Generator {
    /// Builds the generator for `pump` and an optional spectroscopy tone.
    pub fn new(
        q: &QubitSpec,
        res: &ResonatorSpec,
        pump: &DriveSpec,
        spectroscopy: Option<&DriveSpec>,
        cfg: &HilbertConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        if cfg.levels > q.levels() {
            return Err(invalid(
                "levels",
                format!("qubit has {} levels, {} requested", q.levels(), cfg.levels),
            ));
        }
        let q = q.truncated(cfg.levels)?;
        let (m, n) = (cfg.levels, cfg.fock);
        let dim = m * n;
        let wf = pump.omega + cfg.frame_offset;
        let energy = |r: usize| {
            let (qi, k) = ((r / n) as f64, (r % n) as f64);
            q.omega()[r / n] - qi * wf
                + (res.omega_r - wf) * k
                + 0.5 * res.kerr * k * (k - 1.0)
                + res.kerr3 / 3.0 * k * (k - 1.0) * (k - 2.0)
        };
        let e: Vec<f64> = (0..dim).map(energy).collect();
        let loss: Vec<f64> = (0..dim)
            .map(|r| {
                let (qi, k) = (r / n, (r % n) as f64);
                res.kappa * k + res.kappa_nl * k * (k - 1.0) + q.relaxation(qi)
            })
            .collect();
        let disp = q.dispersion();
        let mut diag = vec![C::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                let de = disp[r / n] - disp[c / n];
                diag[r * dim + c] = TAU
                    * C::new(
                        -0.5 * (loss[r] + loss[c]) - q.gamma_phi * de * de,
                        -(e[r] - e[c]),
                    );
            }
        }
        let mut up = vec![0.0; dim];
        let mut down = vec![0.0; dim];
        for r in 0..dim {
            let (qi, k) = (r / n, r % n);
            if qi + 1 < m && k >= 1 {
                up[r] = TAU * q.couplings()[qi] * (k as f64).sqrt();
            }
            if qi >= 1 && k + 1 < n {
                down[r] = TAU * q.couplings()[qi - 1] * ((k + 1) as f64).sqrt();
            }
        }
        let sqrt_up = (0..dim)
            .map(|r| if r % n + 1 < n { ((r % n + 1) as f64).sqrt() } else { 0.0 })
            .collect();
        let sqrt_dn = (0..dim).map(|r| ((r % n) as f64).sqrt()).collect();
        let relax = (0..m).map(|i| if i + 1 < m { TAU * q.relaxation(i + 1) } else { 0.0 }).collect();
        let mut tones = vec![Tone {
            eps: pump.epsilon * TAU,
            detuning: TAU * (pump.omega - wf),
        }];
        let mut beat_us = None;
        if let Some(s) = spectroscopy {
            if s.epsilon.norm() > 0.0 {
                tones.push(Tone {
                    eps: s.epsilon * TAU,
                    detuning: TAU * (s.omega - wf),
                });
                let beat = (s.omega - pump.omega).abs();
                if beat > 0.0 {
                    beat_us = Some(1.0 / beat);
                }
            }
        }
        Ok(Self {
            m,
            n,
            dim,
            diag,
            up,
            down,
            sqrt_up,
            sqrt_dn,
            kappa: TAU * res.kappa,
            kappa_nl: TAU * res.kappa_nl,
            relax,
            tones,
            beat_us,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn levels(&self) -> usize {
        self.m
    }

    pub fn fock(&self) -> usize {
        self.n
    }

    pub fn beat_us(&self) -> Option<f64> {
        self.beat_us
    }

    /// True when no drive oscillates in the frame.
    pub fn is_static(&self) -> bool {
        self.tones.iter().all(|t| t.detuning == 0.0 || t.eps.norm() == 0.0)
    }

    /// Total drive amplitude f(t) multiplying a† (rad/µs).
    pub fn drive(&self, t: f64) -> C {
        self.tones
            .iter()
            .map(|tone| tone.eps * C::from_polar(1.0, -tone.detuning * t))
            .sum()
    }

    /// Allocates a zero matrix of the generator's size.
    pub fn scratch(&self) -> Vec<C> {
        vec![C::new(0.0, 0.0); self.dim * self.dim]
    }

    /// out = L(t) ρ for Hermitian ρ, row by row. H is banded with offsets ±1 (drive) and
    /// ±(N−1) (coupling), so both Hρ and ρH are sums of shifted contiguous
    /// slices.
    pub fn apply(&self, t: f64, rho: &[C], out: &mut [C]) {
        #[cfg(target_arch = "x86_64")]
        {
            if std::arch::is_x86_feature_detected!("avx2") && std::arch::is_x86_feature_detected!("fma") {
                // SAFETY: the required CPU features were just detected.
                unsafe { self.apply_avx2(t, rho, out) };
                return;
            }
        }
        self.apply_impl(t, rho, out);
    }

    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx2,fma")]
    unsafe fn apply_avx2(&self, t: f64, rho: &[C], out: &mut [C]) {
        self.apply_impl(t, rho, out);
    }

    #[inline(always)]
    fn apply_impl(&self, t: f64, rho: &[C], out: &mut [C]) {
        let (dim, n) = (self.dim, self.n);
        let f = self.drive(t);
        let fc = f.conj();
        let sh = n - 1;
        let zero = vec![C::new(0.0, 0.0); dim];
        // Column weights of +iρH for the drive and of a ρ a† / a² ρ a†².
        let wu: Vec<C> = self.sqrt_up.iter().map(|&w| C::new(-f.im * w, f.re * w)).collect();
        let wd: Vec<C> = self.sqrt_dn.iter().map(|&w| C::new(-fc.im * w, fc.re * w)).collect();
        let w2: Vec<f64> = (0..dim)
            .map(|c| if c + 1 < dim { self.sqrt_up[c] * self.sqrt_up[c + 1] } else { 0.0 })
            .collect();
        let row = |r: usize| &rho[r * dim..(r + 1) * dim];
        let row_or_zero = |r: Option<usize>| match r {
            Some(r) if r < dim => row(r),
            _ => &zero[..],
        };
        for r in 0..dim {
            let p = row(r);
            let d = &self.diag[r * dim..(r + 1) * dim];
            // −iHρ: row shifts with scalar amplitudes.
            let a1 = f * self.sqrt_dn[r];
            let a1 = C::new(a1.im, -a1.re);
            let a2 = fc * self.sqrt_up[r];
            let a2 = C::new(a2.im, -a2.re);
            let (g3, g4) = (self.up[r], self.down[r]);
            let s1 = row_or_zero(r.checked_sub(1));
            let s2 = row_or_zero(Some(r + 1));
            let s3 = row_or_zero(if g3 != 0.0 { Some(r + sh) } else { None });
            let s4 = row_or_zero(if g4 != 0.0 { r.checked_sub(sh) } else { None });
            let k1 = self.kappa * self.sqrt_up[r];
            let k2 = if self.sqrt_up[r] != 0.0 && r + 1 < dim {
                self.kappa_nl * self.sqrt_up[r] * self.sqrt_up[r + 1]
            } else {
                0.0
            };
            let s5 = row_or_zero(if k2 != 0.0 { Some(r + 2) } else { None });
            // Everything except the ±(N−1) column shifts, checked version.
            let elem = |c: usize| -> C {
                let mut v = d[c] * p[c] + a1 * s1[c] + a2 * s2[c];
                let hv = g3 * s3[c] + g4 * s4[c];
                v += C::new(hv.im, -hv.re);
                if c + 1 < dim {
                    v += wu[c] * p[c + 1] + s2[c + 1] * (k1 * self.sqrt_up[c]);
                }
                if c >= 1 {
                    v += wd[c] * p[c - 1];
                }
                if c + 2 < dim {
                    v += s5[c + 2] * (k2 * w2[c]);
                }
                v
            };
            // Upper triangle only; the rest follows from Hermiticity.
            let o = &mut out[r * dim..(r + 1) * dim];
            let hi = dim - 2;
            let lo = r.max(1).min(hi);
            for c in (r..lo).chain(hi.max(r)..dim) {
                o[c] = elem(c);
            }
            let len = hi - lo;
            let (oi, di, pi) = (&mut o[lo..hi], &d[lo..hi], &p[lo..hi]);
            let s2n = &s2[lo + 1..hi + 1];
            let (s1, s2, s3, s4) = (&s1[lo..hi], &s2[lo..hi], &s3[lo..hi], &s4[lo..hi]);
            let (pu, pd) = (&p[lo + 1..hi + 1], &p[lo - 1..hi - 1]);
            let (wui, wdi) = (&wu[lo..hi], &wd[lo..hi]);
            let squ = &self.sqrt_up[lo..hi];
            let s5n = &s5[lo + 2..hi + 2];
            let w2i = &w2[lo..hi];
            for c in 0..len {
                let mut v = di[c] * pi[c] + a1 * s1[c] + a2 * s2[c];
                let hv = g3 * s3[c] + g4 * s4[c];
                v.re += hv.im;
                v.im -= hv.re;
                v += wui[c] * pu[c] + wdi[c] * pd[c];
                v += s2n[c] * (k1 * squ[c]) + s5n[c] * (k2 * w2i[c]);
                oi[c] = v;
            }
            // +iρH coupling part: column shifts ±(N−1).
            let a = sh.max(r);
            iaxpy_w(&mut o[a..], &self.down[a..], &p[a - sh..dim - sh]);
            if r < dim - sh {
                iaxpy_w(&mut o[r..dim - sh], &self.up[r..dim - sh], &p[r + sh..]);
            }
            // γ_q |q⟩⟨q+1| ρ |q+1⟩⟨q|, diagonal qubit blocks only.
            let qi = r / n;
            if qi + 1 < self.m && self.relax[qi] != 0.0 {
                let end = (qi + 1) * n;
                let src = &row(r + n)[r + n..end + n];
                let g = self.relax[qi];
                for (oc, v) in o[r..end].iter_mut().zip(src) {
                    *oc += v * g;
                }
            }
        }
        for r in 0..dim {
            for c in r + 1..dim {
                out[c * dim + r] = out[r * dim + c].conj();
            }
        }
    }

    /// Ground state |0⟩ ⊗ |vac⟩.
    pub fn ground(&self) -> Vec<C> {
        let mut rho = vec![C::new(0.0, 0.0); self.dim * self.dim];
        rho[0] = C::new(1.0, 0.0);
        rho
    }

    /// Population of qubit level `level`.
    pub fn population(&self, rho: &[C], level: usize) -> f64 {
        (level * self.n..(level + 1) * self.n)
            .map(|r| rho[r * self.dim + r].re)
            .sum()
    }

    /// ⟨a†a⟩.
    pub fn photons(&self, rho: &[C]) -> f64 {
        (0..self.dim)
            .map(|r| (r % self.n) as f64 * rho[r * self.dim + r].re)
            .sum()
    }

    /// ⟨a⟩.
    pub fn field(&self, rho: &[C]) -> C {
        let mut a = C::new(0.0, 0.0);
        for r in 0..self.dim {
            if self.sqrt_up[r] != 0.0 {
                // ⟨a⟩ = Σ √(n+1) ρ_{(q,n+1),(q,n)}
                a += rho[(r + 1) * self.dim + r] * self.sqrt_up[r];
            }
        }
        a
    }

    pub fn trace(&self, rho: &[C]) -> f64 {
        (0..self.dim).map(|r| rho[r * self.dim + r].re).sum()
    }

    /// Population of the two highest Fock states.
    pub fn leakage(&self, rho: &[C]) -> f64 {
        (0..self.dim)
            .filter(|r| r % self.n + 2 >= self.n)
            .map(|r| rho[r * self.dim + r].re)
            .sum()
    }

    /// Embeds a state of a smaller cutoff into this generator's space.
    pub fn embed(&self, rho: &[C], levels: usize, fock: usize) -> Vec<C> {
        let small = levels * fock;
        let mut out = vec![C::new(0.0, 0.0); self.dim * self.dim];
        for r in 0..small {
            for c in 0..small {
                let (qr, kr, qc, kc) = (r / fock, r % fock, c / fock, c % fock);
                if qr < self.m && qc < self.m && kr < self.n && kc < self.n {
                    out[(qr * self.n + kr) * self.dim + qc * self.n + kc] = rho[r * small + c];
                }
            }
        }
        out
    }
}

/// o += i·(w ⊙ src) for real weights
#[inline(always)]
fn iaxpy_w(o: &mut [C], w: &[f64], src: &[C]) {
    let len = o.len();
    let (w, src) = (&w[..len], &src[..len]);
    for i in 0..len {
        o[i].re -= w[i] * src[i].im;
        o[i].im += w[i] * src[i].re;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::reference_device;

    fn small_cfg(fock: usize) -> HilbertConfig {
        HilbertConfig {
            levels: 3,
            fock,
            ..Default::default()
        }
    }

    fn random_hermitian(dim: usize, seed: u64) -> Vec<C> {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut m = vec![C::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in r..dim {
                let v = if r == c { C::new(next(), 0.0) } else { C::new(next(), next()) };
                m[r * dim + c] = v;
                m[c * dim + r] = v.conj();
            }
        }
        m
    }

    #[test]
    fn trace_and_hermiticity_of_the_derivative() {
        let (q, r) = reference_device();
        let r = ResonatorSpec { kappa_nl: 0.3, ..r };
        let g = Generator::new(
            &q,
            &r,
            &DriveSpec::pump(5.0, 6450.0),
            Some(&DriveSpec::spectroscopy(3.0, 5717.0)),
            &small_cfg(6),
        )
        .unwrap();
        let rho = random_hermitian(g.dim(), 7);
        let mut out = g.scratch();
        g.apply(0.123, &rho, &mut out);
        let tr: C = (0..g.dim()).map(|i| out[i * g.dim() + i]).sum();
        assert!(tr.norm() < 1e-9, "{tr}");
        for a in 0..g.dim() {
            for b in 0..g.dim() {
                assert!((out[a * g.dim() + b] - out[b * g.dim() + a].conj()).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn linearity() {
        let (q, r) = reference_device();
        let g = Generator::new(&q, &r, &DriveSpec::pump(5.0, 6450.0), None, &small_cfg(5)).unwrap();
        let a = random_hermitian(g.dim(), 1);
        let b = random_hermitian(g.dim(), 2);
        let sum: Vec<C> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let (mut la, mut lb, mut ls) = (g.scratch(), g.scratch(), g.scratch());
        g.apply(0.5, &a, &mut la);
        g.apply(0.5, &b, &mut lb);
        g.apply(0.5, &sum, &mut ls);
        for i in 0..ls.len() {
            assert!((ls[i] - la[i] - lb[i]).norm() < 1e-9 * (1.0 + ls[i].norm()));
        }
    }

    #[test]
    fn vacuum_is_fixed_without_drive() {
        let (q, r) = reference_device();
        let g = Generator::new(&q, &r, &DriveSpec::pump(0.0, 6450.0), None, &small_cfg(5)).unwrap();
        let rho = g.ground();
        let mut out = g.scratch();
        g.apply(0.0, &rho, &mut out);
        assert!(out.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn static_frame() {
        let (q, r) = reference_device();
        let g = Generator::new(&q, &r, &DriveSpec::pump(1.0, 6450.0), None, &small_cfg(4)).unwrap();
        assert!(g.is_static());
        let cfg = HilbertConfig {
            frame_offset: 1.0,
            ..small_cfg(4)
        };
        let g = Generator::new(&q, &r, &DriveSpec::pump(1.0, 6450.0), None, &cfg).unwrap();
        assert!(!g.is_static());
    }

    #[test]
    fn embed_preserves_entries() {
        let (q, r) = reference_device();
        let g = Generator::new(&q, &r, &DriveSpec::pump(0.0, 6450.0), None, &small_cfg(6)).unwrap();
        let small = random_hermitian(9, 3);
        let big = g.embed(&small, 3, 3);
        assert_eq!(big[(6 + 2) * 18 + 6 + 1], small[(3 + 2) * 9 + 3 + 1]);
        assert!((g.trace(&big) - (0..9).map(|i| small[i * 9 + i].re).sum::<f64>()).abs() < 1e-15);
    }

    /// Textbook dense Lindbladian built from operator products.
    fn dense_reference(q: &QubitSpec, res: &ResonatorSpec, pump: &DriveSpec, spec: &DriveSpec, cfg: &HilbertConfig, t: f64, rho: &[C]) -> Vec<C> {
        use nalgebra::DMatrix;
        let (m, n) = (cfg.levels, cfg.fock);
        let dim = m * n;
        let z = C::new(0.0, 0.0);
        let id_q = DMatrix::<C>::identity(m, m);
        let id_r = DMatrix::<C>::identity(n, n);
        let a_r = DMatrix::<C>::from_fn(n, n, |i, j| if j == i + 1 { C::new((j as f64).sqrt(), 0.0) } else { z });
        let a = id_q.kronecker(&a_r);
        let ad = a.adjoint();
        let num = &ad * &a;
        let wf = pump.omega + cfg.frame_offset;
        let qn = DMatrix::<C>::from_fn(m, m, |i, j| if i == j { C::new(i as f64, 0.0) } else { z }).kronecker(&id_r);
        let qe = DMatrix::<C>::from_fn(m, m, |i, j| if i == j { C::new(q.omega()[i], 0.0) } else { z }).kronecker(&id_r);
        let sigma = |i: usize| DMatrix::<C>::from_fn(m, m, |r, c| if r == i && c == i + 1 { C::new(1.0, 0.0) } else { z }).kronecker(&id_r);
        let mut h = &qe - &qn * C::new(wf, 0.0) + &num * C::new(res.omega_r - wf, 0.0)
            + &ad * &ad * &a * &a * C::new(res.kerr / 2.0, 0.0)
            + &ad * &ad * &ad * &a * &a * &a * C::new(res.kerr3 / 3.0, 0.0);
        for i in 0..m - 1 {
            let s = sigma(i);
            h += (&ad * &s + &a * s.adjoint()) * C::new(q.couplings()[i], 0.0);
        }
        let mut f = z;
        for d in [pump, spec] {
            f += d.epsilon * C::from_polar(1.0, -TAU * (d.omega - wf) * t);
        }
        h += &ad * f + &a * f.conj();
        let h = h * C::new(TAU, 0.0);
        let rho = DMatrix::<C>::from_fn(dim, dim, |r, c| rho[r * dim + c]);
        let mi = C::new(0.0, -1.0);
        let mut out = (&h * &rho - &rho * &h) * mi;
        let mut diss = |l: DMatrix<C>, rate: f64| {
            let ld = l.adjoint();
            let ll = &ld * &l;
            out += (&l * &rho * &ld - (&ll * &rho + &rho * &ll) * C::new(0.5, 0.0)) * C::new(TAU * rate, 0.0);
        };
        diss(a.clone(), res.kappa);
        diss(&a * &a, res.kappa_nl);
        for i in 0..m - 1 {
            diss(sigma(i), q.relaxation(i + 1));
        }
        let pe = DMatrix::<C>::from_fn(m, m, |i, j| if i == j { C::new(q.dispersion()[i], 0.0) } else { z }).kronecker(&id_r);
        diss(pe, 2.0 * q.gamma_phi);
        (0..dim * dim).map(|k| out[(k / dim, k % dim)]).collect()
    }

    #[test]
    fn matches_dense_lindbladian() {
        let q = QubitSpec::new(vec![0.0, 5720.0, 11141.6], vec![42.4, 58.4], vec![0.0, 1.0, 2.3], 0.22, 0.25).unwrap();
        let r = ResonatorSpec::new(6453.5, -0.625, -0.01, 9.6, 0.4).unwrap();
        let pump = DriveSpec::pump(5.0, 6450.0);
        let spec = DriveSpec::spectroscopy(3.0, 5717.0);
        for offset in [0.0, -3.7] {
            let cfg = HilbertConfig {
                frame_offset: offset,
                ..small_cfg(6)
            };
            let g = Generator::new(&q, &r, &pump, Some(&spec), &cfg).unwrap();
            let rho = random_hermitian(g.dim(), 11);
            let mut out = g.scratch();
            g.apply(0.0371, &rho, &mut out);
            let want = dense_reference(&q, &r, &pump, &spec, &cfg, 0.0371, &rho);
            let scale = want.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let err = out.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12 * scale, "{err} {scale}");
        }
    }
}
