//! Acceptance criteria A1–A11, run in order by a single test so that the
//! oracle timing of A7 is not shared with other tests.
//!
//! Each criterion prints one PASS/FAIL line. Criteria listed in [`KNOWN_RED`]
//! are implemented as stated and are expected to fail; the test fails if any
//! other criterion fails, or if a known-red one starts passing.

use std::time::Instant;

use kerrq::field::{
    critical_ratio, reduced_detuning, s_max_curve, select_branch, solve_pointer, solve_pointer_with, window,
    BranchPolicy, DetuningReference, LinearResponseForm, PumpEquation, StabilityModel,
};
use kerrq::model::stark::StarkVariant;
use kerrq::model::{reference_device, stark_coeffs, stark_shifted_freqs, DriveSpec, Drives, QubitSpec, ResonatorSpec};
use kerrq::oracle::{oracle_spectrum, probe_axis, HilbertConfig, OracleGrid};
use kerrq::reduced::steady::p1;
use kerrq::reduced::{
    analytic_hwhm, reduced_point, spectrum_column, FieldModel, ReducedOptions, ReducedRates, SpectrumColumn,
};
use kerrq::units::OMEGA_CRITICAL;
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const KNOWN_RED: &[&str] = &["A5b"];

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(id: &'static str, pass: bool, detail: String) -> Outcome {
    println!("{id:<4} {} {detail}", if pass { "PASS" } else { "FAIL" });
    Outcome { id, pass, detail }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn a1() -> Outcome {
    let (q, r) = reference_device();
    let lo = reduced_detuning(&q, &r, 6450.0, DetuningReference::Pulled).unwrap();
    let hi = reduced_detuning(&q, &r, 6430.0, DetuningReference::Pulled).unwrap();
    let pass = (lo.ratio - 0.70).abs() <= 0.05 && (hi.ratio - 3.10).abs() <= 0.05;
    outcome(
        "A1",
        pass,
        format!(
            "reference {:.3} MHz, ratio(6450) = {:.4}, ratio(6430) = {:.4}",
            lo.reference_mhz, lo.ratio, hi.ratio
        ),
    )
}

fn a2() -> Outcome {
    let (q3, r) = reference_device();
    let q = q3.truncated(2).unwrap();
    let r = r.linear();
    let g = q.couplings()[0];
    let mut worst: f64 = 0.0;
    let mut weak: f64 = 0.0;
    for i in 0..10 {
        let wp = 6440.0 + 2.5 * i as f64;
        let chi = g * g / (q.transition(0) - wp);
        // The two-state dispersive Hamiltonian has no quartic Stark term.
        let coeffs = stark_coeffs(&q, wp).unwrap().without_quartic();
        for j in 0..10 {
            let eps = 0.3 + 3.3 * j as f64;
            let drives = Drives {
                pump: DriveSpec::pump(eps, wp),
                spectroscopy: None,
            };
            let s = solve_pointer_with(&r, coeffs.clone(), &drives, BranchPolicy::SweepUp).unwrap();
            for (state, sign) in [(0, -1.0), (1, 1.0)] {
                let want = -c(eps) / Complex64::new(r.omega_r - wp + sign * chi, -0.5 * r.kappa);
                worst = worst.max((s.states[state].alpha_p - want).norm() / want.norm());
            }
        }
        // Full coefficients at a weak drive, reported for reference.
        let full = solve_pointer(&q, &r, &Drives { pump: DriveSpec::pump(0.3, wp), spectroscopy: None }, BranchPolicy::SweepUp)
            .unwrap();
        let want = -c(0.3) / Complex64::new(r.omega_r - wp - chi, -0.5 * r.kappa);
        weak = weak.max((full.states[0].alpha_p - want).norm() / want.norm());
    }
    outcome(
        "A2",
        worst <= 1e-9,
        format!("max relative deviation {worst:.2e} over 100 drives (with quartic Stark term at eps=0.3: {weak:.2e})"),
    )
}

fn a3() -> Outcome {
    let r = ResonatorSpec::new(6453.5, -0.625, 0.0, 9.6, 0.0).unwrap();
    let m = StabilityModel::bare(&r);
    let ratio = critical_ratio(&m, 0.5, 1.5).unwrap();
    let omega_c = ratio * OMEGA_CRITICAL;
    let pass = (omega_c - 3f64.sqrt()).abs() <= 1e-6;
    outcome("A3", pass, format!("Omega_C = {omega_c:.12} (sqrt 3 = {:.12})", 3f64.sqrt()))
}

fn a4() -> Outcome {
    let (q3, r) = reference_device();
    let wd = r.omega_r;
    let shift = |q: &QubitSpec| {
        let c = stark_coeffs(q, wd).unwrap();
        // ω″ is quadratic in n, so a central difference is exact at any
        // step; a wide one keeps the cancellation error small.
        let h = 1.0;
        let up = stark_shifted_freqs(q, &[(&c, h)]);
        let dn = stark_shifted_freqs(q, &[(&c, -h)]);
        ((up[1] - up[0]) - (dn[1] - dn[0])) / (2.0 * h)
    };
    let q2 = q3.truncated(2).unwrap();
    let g = q3.couplings();
    let two = 2.0 * g[0] * g[0] / (q3.transition(0) - wd);
    let chi0 = g[0] * g[0] / (q3.transition(0) - wd);
    let chi1 = g[1] * g[1] / (q3.transition(1) - wd);
    let three = 2.0 * chi0 - chi1;
    let (s2, s3) = (shift(&q2), shift(&q3));
    let (e2, e3) = (rel(s2, two), rel(s3, three));
    outcome(
        "A4",
        e2 <= 1e-9 && e3 <= 1e-9,
        format!("M=2: {s2:.9} vs {two:.9} ({e2:.1e}); M=3: {s3:.9} vs {three:.9} ({e3:.1e})"),
    )
}

fn omega10(q: &QubitSpec, r: &ResonatorSpec, eps: f64, wp: f64, variant: StarkVariant) -> f64 {
    let opts = ReducedOptions {
        variant,
        ..Default::default()
    };
    reduced_point(q, r, DriveSpec::pump(eps, wp), &opts).unwrap().1.omega10_3
}

fn upper_threshold(q: &QubitSpec, r: &ResonatorSpec, wp: f64) -> f64 {
    let coeffs = stark_coeffs(q, wp).unwrap();
    window(&PumpEquation::for_state(r, &coeffs, 0)).unwrap().1
}

fn a5a() -> Outcome {
    let (q, r) = reference_device();
    let wp = 6430.0;
    let hi = upper_threshold(&q, &r, wp);
    let full = |e: f64| omega10(&q, &r, e, wp, StarkVariant::Full);
    let jump = full(hi * (1.0 + 1e-9)) - full(hi * (1.0 - 1e-9));
    // Largest step on a uniform sweep-up scan must bracket the threshold.
    let eps: Vec<f64> = (1..=400).map(|k| 0.25 * k as f64).collect();
    let w: Vec<f64> = eps.iter().map(|&e| full(e)).collect();
    let (k, step) = w
        .windows(2)
        .map(|p| (p[1] - p[0]).abs())
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let second = w
        .windows(2)
        .enumerate()
        .filter(|(i, _)| *i != k)
        .map(|(_, p)| (p[1] - p[0]).abs())
        .fold(0.0, f64::max);
    let pass = jump.abs() > 10.0 && eps[k] < hi && hi <= eps[k + 1] && second < 0.1 * step;
    outcome(
        "A5a",
        pass,
        format!(
            "upper threshold eps = {hi:.6} MHz, jump {jump:.3} MHz across it; scan step {step:.3} in [{}, {}], next largest {second:.3}",
            eps[k],
            eps[k + 1]
        ),
    )
}

fn a5b() -> Outcome {
    let (q, r) = reference_device();
    let wp = 6430.0;
    let hi = upper_threshold(&q, &r, wp);
    let mut inside = 0;
    let mut total = 0;
    let mut sample = String::new();
    for k in 1..=20 {
        let e = hi + (100.0 - hi) * k as f64 / 20.0;
        let full = omega10(&q, &r, e, wp, StarkVariant::Full);
        let nq = omega10(&q, &r, e, wp, StarkVariant::NoQuartic);
        let rf = omega10(&q, &r, e, wp, StarkVariant::ResonatorFrequency);
        total += 1;
        if full >= nq.min(rf) && full <= nq.max(rf) {
            inside += 1;
        }
        if k == 20 {
            sample = format!("at eps={e:.1}: full {full:.2}, K=0 {nq:.2}, wp=wr {rf:.2}");
        }
    }
    outcome(
        "A5b",
        inside == total,
        format!("full curve between the two variants at {inside}/{total} drives above threshold; {sample}"),
    )
}

fn gamma2_scan(fields: FieldModel, eps: &[f64]) -> Vec<f64> {
    let (q, r) = reference_device();
    let opts = ReducedOptions {
        fields,
        ..Default::default()
    };
    eps.iter()
        .map(|&e| reduced_point(&q, &r, DriveSpec::pump(e, 6450.0), &opts).unwrap().1.gamma2)
        .collect()
}

fn argmax(v: &[f64]) -> (usize, f64) {
    v.iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |a, (i, x)| if x > a.1 { (i, x) } else { a })
}

fn a6() -> Outcome {
    let eps: Vec<f64> = (0..=200).map(|k| 0.25 * k as f64).collect();
    let non = gamma2_scan(FieldModel::Nonlinear, &eps);
    let (k, top) = argmax(&non);
    let interior = k > 0 && k < eps.len() - 1;
    let mut pass = interior;
    let mut detail = format!("nonlinear max gamma2 {top:.4} MHz at eps {}", eps[k]);
    for form in [LinearResponseForm::Exact, LinearResponseForm::ClosedForm] {
        let lin = gamma2_scan(FieldModel::Linear(form), &eps);
        let (_, m) = argmax(&lin);
        pass &= m < top;
        detail += &format!("; {form:?} linear max {m:.4}");
    }
    outcome("A6", pass, detail)
}

struct Column {
    eps_p: f64,
    reduced: SpectrumColumn,
    probe: Vec<f64>,
}

fn reduced_column(q: &QubitSpec, r: &ResonatorSpec, wp: f64, eps_p: f64, eps_s: f64) -> Column {
    let opts = ReducedOptions::default();
    let (_, rates): (_, ReducedRates) = reduced_point(q, r, DriveSpec::pump(eps_p, wp), &opts).unwrap();
    let a_s = kerrq::field::solve_pointer_spectroscopy(r, c(0.0), c(eps_s), rates.omega10_3);
    let hw = analytic_hwhm(&rates, a_s * q.couplings()[0]);
    let axis: Vec<f64> = (0..=400).map(|k| rates.omega10_3 + hw * (k as f64 - 200.0) / 20.0).collect();
    let reduced = spectrum_column(q, r, DriveSpec::pump(eps_p, wp), eps_s, &axis, &opts).unwrap();
    let probe = probe_axis(reduced.fit.center, reduced.fit.hwhm);
    Column {
        eps_p,
        reduced,
        probe,
    }
}

fn a7_a9() -> (Outcome, Outcome) {
    let (q, r) = reference_device();
    let wp = 6450.0;
    let eps_s = 3.0;
    let eps_p = [0.0, 2.0, 4.0, 6.0, 7.0, 8.0];
    let cols: Vec<Column> = eps_p.iter().map(|&e| reduced_column(&q, &r, wp, e, eps_s)).collect();
    let desk = cols
        .iter()
        .all(|c| c.reduced.rates.n0 < 5.0 && c.reduced.rates.d < 0.5 && c.reduced.fit.converged);
    let cfg = HilbertConfig::default();
    let start = Instant::now();
    let grid: OracleGrid = oracle_spectrum(
        &q,
        &r,
        wp,
        &eps_p,
        eps_s,
        |e| Ok(cols.iter().find(|c| c.eps_p == e).unwrap().probe.clone()),
        &cfg,
        true,
    )
    .unwrap();
    let seconds = start.elapsed().as_secs_f64();

    let mut agree = true;
    let mut lines = Vec::new();
    for (c, o) in cols.iter().zip(&grid.columns) {
        let fit = o.fit;
        let dc = c.reduced.fit.center - fit.center;
        let dw = (c.reduced.fit.hwhm - fit.hwhm) / fit.hwhm;
        let ok = fit.converged && dc.abs() <= 0.5 && dw.abs() <= 0.25;
        agree &= ok;
        lines.push(format!(
            "    eps_p {:>3}: n {:.3} D {:.3} | reduced {:.4} / {:.4} | oracle {:.4} / {:.4} | dpeak {:+.4} dHWHM {:+.1}%",
            c.eps_p,
            c.reduced.rates.n0,
            c.reduced.rates.d,
            c.reduced.fit.center,
            c.reduced.fit.hwhm,
            fit.center,
            fit.hwhm,
            dc,
            100.0 * dw
        ));
    }
    let a7 = outcome(
        "A7",
        desk && agree && seconds <= 600.0,
        format!("6 columns, M=3, N=32, {seconds:.1} s (desk-scale cases: {desk})"),
    );
    for l in &lines {
        println!("{l}");
    }

    let mut trace: f64 = 0.0;
    let mut herm: f64 = 0.0;
    let mut min_eig = f64::INFINITY;
    let mut fock: f64 = 0.0;
    let mut steady = true;
    for o in &grid.columns {
        for p in &o.points {
            trace = trace.max(p.diagnostics.trace_drift);
            herm = herm.max(p.diagnostics.hermiticity);
            min_eig = min_eig.min(p.diagnostics.min_eigenvalue);
            steady &= p.steady;
        }
        let f = o.fock_check.unwrap();
        fock = fock.max((f.p1_doubled - f.p1).abs());
    }
    let a9 = outcome(
        "A9",
        trace < 1e-8 && herm < 1e-10 && min_eig > -1e-8 && fock < 1e-3 && steady,
        format!(
            "trace drift {trace:.1e}, hermiticity {herm:.1e}, min eigenvalue {min_eig:.1e}, Fock doubling |dP1| {fock:.1e}, all steady: {steady}"
        ),
    );
    (a7, a9)
}

fn a8() -> Outcome {
    let (_, r) = reference_device();
    let ratios: Vec<f64> = (0..=90).map(|k| 0.1 + 0.01 * k as f64).collect();
    let curve = s_max_curve(&r, &ratios, 0.1).unwrap();
    let top = curve.iter().map(|p| p.s_max).fold(0.0, f64::max);
    let near = curve
        .iter()
        .filter(|p| p.ratio >= 0.95 - 1e-12)
        .map(|p| p.s_max)
        .fold(f64::INFINITY, f64::min);
    let first = curve.iter().find(|p| p.s_max < 0.05).map(|p| p.ratio);
    outcome(
        "A8",
        top <= 0.6 && near < 0.05,
        format!(
            "max S_max {top:.4} MHz on [0.1, 1.0]; min on [0.95, 1.0] {near:.4}; first below 0.05 at {first:?}"
        ),
    )
}

fn a10() -> Outcome {
    let (q, r) = reference_device();
    let opts = ReducedOptions::default();
    let rates = |res: &ResonatorSpec| reduced_point(&q, res, DriveSpec::pump(10.0, 6450.0), &opts).unwrap().1;
    let base = rates(&r);
    let gamma_share = (base.gamma_phim - 0.5 * r.kappa * base.d * base.d) / base.gamma_phim;
    let ratio = base.quantum_limit_ratio();
    let mut pass = gamma_share < 0.01 && (0.99..=1.0).contains(&ratio);
    let mut detail = format!("kappa_NL=0: ratio {ratio:.6} (gamma channel {:.2}%)", 100.0 * gamma_share);
    for knl in [1e-4, 1e-2, 0.1] {
        let res = ResonatorSpec::new(r.omega_r, r.kerr, r.kerr3, r.kappa, knl).unwrap();
        let x = rates(&res).quantum_limit_ratio();
        pass &= x < ratio;
        detail += &format!("; kappa_NL={knl}: {x:.6}");
    }
    outcome("A10", pass, detail)
}

fn a11() -> Outcome {
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 10_000,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let rates = (0.0..5.0f64, 1e-6..5.0f64, 0.0..5.0f64, 0.0..100.0f64, -200.0..200.0f64);
    let prob = runner.run(&rates, |(up, down, extra, drive2, delta)| {
        let g2 = 0.5 * (up + down) + extra;
        let p = p1(up, down, g2, drive2, delta).unwrap();
        prop_assert!((0.0..=1.0).contains(&p), "{p}");
        Ok(())
    });

    let (q, r) = reference_device();
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 2_000,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let drives = (0.0..120.0f64, 6380.0..6480.0f64, prop::bool::ANY);
    let residual = runner.run(&drives, |(eps, wp, up)| {
        let policy = if up { BranchPolicy::SweepUp } else { BranchPolicy::SweepDown };
        let d = Drives {
            pump: DriveSpec::pump(eps, wp),
            spectroscopy: None,
        };
        let s = solve_pointer(&q, &r, &d, policy).unwrap();
        for (i, st) in s.states.iter().enumerate() {
            let eq = PumpEquation::for_state(&r, &s.coeffs, i);
            let res = eq.residual(st.alpha_p, c(eps));
            prop_assert!(res <= eq.residual_bound(c(eps)), "state {i}: {res:e}");
        }
        Ok(())
    });

    let mut fd_worst: f64 = 0.0;
    for wp in [6440.0, 6450.0, 6460.0] {
        let eq = PumpEquation::bare(&r, wp);
        for eps in [1.0, 5.0, 10.0, 20.0] {
            let field = |s: f64| select_branch(&eq.pulled(s), c(eps), BranchPolicy::SweepUp).unwrap().0.alpha;
            let h = 1e-3;
            let fd = (field(h) - field(-h)) / (2.0 * h);
            let e = kerrq::field::linear_response_fields(
                &q,
                &r,
                &DriveSpec::pump(eps, wp),
                BranchPolicy::SweepUp,
                LinearResponseForm::Exact,
            )
            .unwrap();
            fd_worst = fd_worst.max((fd - e.x1).norm() / e.x1.norm());
        }
    }
    let pass = prob.is_ok() && residual.is_ok() && fd_worst <= 1e-6;
    outcome(
        "A11",
        pass,
        format!(
            "P1 in [0,1] over 1e4 cases: {}; pointer residual bound over 2000 drives: {}; linear response vs central difference at 1 kHz: {fd_worst:.1e}",
            prob.map(|_| "ok".to_string()).unwrap_or_else(|e| e.to_string()),
            residual.map(|_| "ok".to_string()).unwrap_or_else(|e| e.to_string()),
        ),
    )
}

// Built without the libtest harness so the criterion lines are never
// captured. A name filter that does not match "acceptance" skips the run.
fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    if args.iter().any(|a| !a.starts_with('-') && !"acceptance".contains(a.as_str())) {
        return;
    }
    let mut all = vec![a1(), a2(), a3(), a4(), a5a(), a5b(), a6()];
    let (a7, a9) = a7_a9();
    all.push(a7);
    all.push(a8());
    all.push(a9);
    all.push(a10());
    all.push(a11());
    let unexpected: Vec<String> = all
        .iter()
        .filter(|o| o.pass == KNOWN_RED.contains(&o.id))
        .map(|o| format!("{} {}: {}", o.id, if o.pass { "passed unexpectedly" } else { "failed" }, o.detail))
        .collect();
    let red = all.iter().filter(|o| !o.pass).count();
    println!(
        "acceptance: {} criteria, {} pass, {red} fail ({} known red: {})",
        all.len(),
        all.len() - red,
        KNOWN_RED.len(),
        KNOWN_RED.join(", ")
    );
    if !unexpected.is_empty() {
        for u in &unexpected {
            eprintln!("unexpected: {u}");
        }
        std::process::exit(1);
    }
}
