//! The five subcommands. Each writes its tables into the output directory
//! and reports whether any point crossed the model's validity limit.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;

use kerrq::field::{critical_ratio, s_max_curve, stability_diagram, StabilityModel};
use kerrq::fit::LorentzianFit;
use kerrq::model::{lamb_shift_chain, DriveSpec, Drives};
use kerrq::oracle::{oracle_column, oracle_spectrum, probe_axis, OracleColumn};
use kerrq::reduced::{analytic_hwhm, pointer_fields, reduced_point, spectrum_column, SpectrumColumn};
use kerrq::units::power_db;

use crate::config::{OracleAxis, Scenario};
use crate::output::{Cell, Table};
use crate::{CliError, Engine};

/// Warnings that leave the outputs usable.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Report {
    pub written: Vec<PathBuf>,
    pub breakdown: Vec<String>,
}

impl Report {
    fn write(&mut self, dir: &Path, name: &str, t: &Table) -> Result<(), CliError> {
        let p = dir.join(name);
        t.write(&p).map_err(|e| CliError::io(&p, e))?;
        self.written.push(p);
        Ok(())
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn fields(s: &Scenario, out: &Path) -> Result<Report, CliError> {
    let spec = s.drives.spectroscopy.filter(|d| d.omega.is_finite());
    let sols = s
        .pump_axis()
        .par_iter()
        .map(|&e| {
            let drives = Drives {
                pump: s.drives.pump.with_amplitude(e),
                spectroscopy: spec,
            };
            pointer_fields(&s.qubit, &s.resonator, &drives, &s.options).map(|p| (e, p))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&[
        "eps_p_mhz",
        "state",
        "re_alpha_p",
        "im_alpha_p",
        "n",
        "branch",
        "residual",
        "power_db",
        "re_alpha_s",
        "im_alpha_s",
        "bistable",
    ]);
    for (e, p) in &sols {
        for (i, f) in p.states.iter().enumerate() {
            t.push(vec![
                (*e).into(),
                i.into(),
                f.alpha_p.re.into(),
                f.alpha_p.im.into(),
                f.n.into(),
                f.branch.label().into(),
                f.residual.into(),
                power_db(*e).into(),
                f.alpha_s.re.into(),
                f.alpha_s.im.into(),
                f.bistable().into(),
            ]);
        }
    }
    let mut r = Report::default();
    r.write(out, "fields.csv", &t)?;
    Ok(r)
}

fn spectroscopy_amplitude(s: &Scenario) -> Result<f64, CliError> {
    match s.drives.spectroscopy {
        Some(d) => Ok(d.epsilon.norm()),
        None => Err(CliError::Usage("spectrum needs a spectroscopy drive".into())),
    }
}

/// ω_s axis of a reduced column: the configured one, else `auto_points`
/// points spanning ±`auto_span` analytic HWHM around the shifted line.
fn reduced_axis(s: &Scenario, eps_p: f64, eps_s: f64) -> Result<Vec<f64>, CliError> {
    if let Some(a) = &s.omega_s {
        return Ok(a.clone());
    }
    let pump = s.drives.pump.with_amplitude(eps_p);
    let (p, rates) = reduced_point(&s.qubit, &s.resonator, pump, &s.options)?;
    let a_s = kerrq::field::solve_pointer_spectroscopy(&s.resonator, p.states[0].alpha_p, c(eps_s), rates.omega10_3);
    let hw = analytic_hwhm(&rates, a_s * s.qubit.couplings()[0]);
    let n = s.auto_points;
    Ok((0..n)
        .map(|k| rates.omega10_3 + s.auto_span * hw * (2.0 * k as f64 / (n - 1) as f64 - 1.0))
        .collect())
}

struct Reduced {
    omega_s: Vec<f64>,
    col: SpectrumColumn,
}

fn reduced_columns(s: &Scenario, eps_s: f64) -> Result<Vec<Reduced>, CliError> {
    s.pump_axis()
        .par_iter()
        .map(|&e| {
            let omega_s = reduced_axis(s, e, eps_s)?;
            let pump = s.drives.pump.with_amplitude(e);
            let col = spectrum_column(&s.qubit, &s.resonator, pump, eps_s, &omega_s, &s.options)?;
            Ok(Reduced { omega_s, col })
        })
        .collect()
}

fn fit_cells(f: &LorentzianFit) -> Vec<Cell> {
    vec![
        f.center.into(),
        f.hwhm.into(),
        f.amplitude.into(),
        f.offset.into(),
        f.rms.into(),
        f.converged.into(),
    ]
}

const FIT_HEADER: [&str; 6] = ["center_mhz", "hwhm_mhz", "amplitude", "offset", "fit_rms", "fit_converged"];

fn flags(items: &[(&str, bool)]) -> String {
    let v: Vec<&str> = items.iter().filter(|x| x.1).map(|x| x.0).collect();
    v.join(";")
}

fn write_reduced(cols: &[Reduced], out: &Path, r: &mut Report) -> Result<(), CliError> {
    let mut grid = Table::new(&["eps_p_mhz", "power_db", "omega_s_mhz", "p1", "re_alpha_s", "im_alpha_s"]);
    let mut header = vec!["eps_p_mhz", "power_db"];
    header.extend(FIT_HEADER);
    header.extend([
        "omega10_mhz",
        "gamma2_mhz",
        "gamma_down_mhz",
        "gamma_up_mhz",
        "gamma_phim_mhz",
        "n0",
        "distinguishability",
        "branch",
        "flags",
    ]);
    let mut peaks = Table::new(&header);
    for Reduced { omega_s, col } in cols {
        for ((w, p), a) in omega_s.iter().zip(&col.p1).zip(&col.alpha_s) {
            grid.push(vec![
                col.eps_p.into(),
                col.power_db().into(),
                (*w).into(),
                (*p).into(),
                a.re.into(),
                a.im.into(),
            ]);
        }
        let bistable = col.pointer.states.iter().any(|f| f.bistable());
        if col.breakdown {
            r.breakdown.push(format!(
                "eps_p = {} MHz: measurement dephasing {:.3} MHz exceeds kappa/2",
                col.eps_p, col.rates.gamma_phim
            ));
        }
        let mut row: Vec<Cell> = vec![col.eps_p.into(), col.power_db().into()];
        row.extend(fit_cells(&col.fit));
        let rt = &col.rates;
        row.extend([
            rt.omega10_3.into(),
            rt.gamma2.into(),
            rt.gamma_down.into(),
            rt.gamma_up.into(),
            rt.gamma_phim.into(),
            rt.n0.into(),
            rt.d.into(),
            col.branch.label().into(),
            flags(&[
                ("breakdown", col.breakdown),
                ("bistable", bistable),
                ("fit-invalid", !col.fit.converged),
            ])
            .into(),
        ]);
        peaks.push(row);
    }
    r.write(out, "spectrum.csv", &grid)?;
    r.write(out, "peaks.csv", &peaks)
}

fn oracle_columns(s: &Scenario, reduced: &[Reduced], eps_s: f64) -> Result<Vec<OracleColumn>, CliError> {
    let eps = s.pump_axis();
    let axes: Vec<Vec<f64>> = reduced
        .iter()
        .map(|r| match s.oracle.axis {
            OracleAxis::Probe => probe_axis(r.col.fit.center, r.col.fit.hwhm),
            OracleAxis::Grid => r.omega_s.clone(),
        })
        .collect();
    let h = &s.oracle.hilbert;
    let wp = s.drives.pump.omega;
    if s.oracle.chain_columns {
        let mut k = 0;
        let g = oracle_spectrum(
            &s.qubit,
            &s.resonator,
            wp,
            &eps,
            eps_s,
            |_| {
                k += 1;
                Ok(axes[k - 1].clone())
            },
            h,
            s.oracle.check_fock,
        )?;
        Ok(g.columns)
    } else {
        Ok(eps
            .par_iter()
            .zip(&axes)
            .map(|(&e, ws)| {
                oracle_column(&s.qubit, &s.resonator, &DriveSpec::pump(e, wp), eps_s, ws, h, s.oracle.check_fock, None)
            })
            .collect::<Result<Vec<_>, _>>()?)
    }
}

fn write_oracle(cols: &[OracleColumn], out: &Path, r: &mut Report) -> Result<(), CliError> {
    let mut grid = Table::new(&[
        "eps_p_mhz",
        "power_db",
        "omega_s_mhz",
        "p1",
        "photons",
        "steady",
        "time_us",
        "fock",
    ]);
    let mut diag = Table::new(&[
        "eps_p_mhz",
        "omega_s_mhz",
        "trace_drift",
        "hermiticity",
        "min_eigenvalue",
        "leakage",
        "steady_residual",
        "extrapolations",
        "evaluations",
    ]);
    let mut header = vec!["eps_p_mhz", "power_db"];
    header.extend(FIT_HEADER);
    header.extend(["fock_check_omega_s_mhz", "fock", "p1", "p1_doubled_fock", "flags"]);
    let mut peaks = Table::new(&header);
    for col in cols {
        let e = col.eps_p.norm();
        for p in &col.points {
            grid.push(vec![
                e.into(),
                power_db(e).into(),
                p.omega_s.into(),
                p.p1.into(),
                p.photons.into(),
                p.steady.into(),
                p.time_us.into(),
                p.fock.into(),
            ]);
            let d = &p.diagnostics;
            diag.push(vec![
                e.into(),
                p.omega_s.into(),
                d.trace_drift.into(),
                d.hermiticity.into(),
                d.min_eigenvalue.into(),
                d.leakage.into(),
                d.steady_residual.into(),
                d.extrapolations.into(),
                d.stats.evaluations.into(),
            ]);
        }
        let mut row: Vec<Cell> = vec![e.into(), power_db(e).into()];
        row.extend(fit_cells(&col.fit));
        let (fw, fk, f1, f2) = match col.fock_check {
            Some(f) => (f.omega_s, f.fock, f.p1, f.p1_doubled),
            None => (f64::NAN, 0, f64::NAN, f64::NAN),
        };
        let unsteady = col.points.iter().any(|p| !p.steady);
        row.extend([
            fw.into(),
            fk.into(),
            f1.into(),
            f2.into(),
            flags(&[("not-steady", unsteady), ("fit-invalid", !col.fit.converged)]).into(),
        ]);
        peaks.push(row);
    }
    r.write(out, "spectrum_oracle.csv", &grid)?;
    r.write(out, "diagnostics_oracle.csv", &diag)?;
    r.write(out, "peaks_oracle.csv", &peaks)
}

fn write_delta(reduced: &[Reduced], oracle: &[OracleColumn], out: &Path, r: &mut Report) -> Result<(), CliError> {
    let mut t = Table::new(&[
        "eps_p_mhz",
        "power_db",
        "center_reduced_mhz",
        "center_oracle_mhz",
        "delta_center_mhz",
        "hwhm_reduced_mhz",
        "hwhm_oracle_mhz",
        "delta_hwhm_rel",
    ]);
    for (a, b) in reduced.iter().map(|r| &r.col).zip(oracle) {
        t.push(vec![
            a.eps_p.into(),
            a.power_db().into(),
            a.fit.center.into(),
            b.fit.center.into(),
            (a.fit.center - b.fit.center).into(),
            a.fit.hwhm.into(),
            b.fit.hwhm.into(),
            ((a.fit.hwhm - b.fit.hwhm) / b.fit.hwhm).into(),
        ]);
    }
    r.write(out, "delta.csv", &t)
}

pub fn spectrum(s: &Scenario, engine: Engine, out: &Path) -> Result<Report, CliError> {
    let eps_s = spectroscopy_amplitude(s)?;
    let mut r = Report::default();
    // The oracle's probe axis comes from the reduced fit, so the reduced
    // columns are always computed.
    let reduced = reduced_columns(s, eps_s)?;
    if engine != Engine::Oracle {
        write_reduced(&reduced, out, &mut r)?;
    }
    if engine != Engine::Reduced {
        let oracle = oracle_columns(s, &reduced, eps_s)?;
        write_oracle(&oracle, out, &mut r)?;
        if engine == Engine::Both {
            write_delta(&reduced, &oracle, out, &mut r)?;
        }
    }
    Ok(r)
}

pub fn stability(s: &Scenario, out: &Path) -> Result<Report, CliError> {
    let ratios = s
        .ratios
        .as_ref()
        .ok_or_else(|| CliError::Usage("stability needs sweep.ratios".into()))?;
    let eps = s
        .eps_p
        .as_ref()
        .ok_or_else(|| CliError::Usage("stability needs sweep.eps_p or sweep.power_db".into()))?;
    let model = match s.stability_state {
        Some(i) => StabilityModel {
            res: &s.resonator,
            qubit: Some((&s.qubit, i)),
            reference: s.reference,
        },
        None => StabilityModel::bare(&s.resonator),
    };
    let d = stability_diagram(&model, ratios, eps)?;
    let mut grid = Table::new(&["ratio", "omega_p_mhz", "eps_p_mhz", "power_db", "region"]);
    for (i, &x) in d.ratios.iter().enumerate() {
        let wp = model.pump_frequency(x)?;
        for (j, &e) in d.eps.iter().enumerate() {
            grid.push(vec![x.into(), wp.into(), e.into(), power_db(e).into(), d.regions[i][j].label().into()]);
        }
    }
    let mut th = Table::new(&["ratio", "omega_p_mhz", "eps_low_mhz", "eps_high_mhz"]);
    for t in &d.thresholds {
        th.push(vec![t.ratio.into(), t.omega_p.into(), t.eps_low.into(), t.eps_high.into()]);
    }
    // The critical point is reported only when the ratio axis brackets it.
    let mut crit = Table::new(&["ratio_c", "omega_p_mhz"]);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let bist = |x: f64| -> Result<bool, CliError> { Ok(model.equation(x)?.1.has_bistability()) };
    if !bist(lo)? && bist(hi)? {
        let rc = critical_ratio(&model, lo, hi)?;
        crit.push(vec![rc.into(), model.pump_frequency(rc)?.into()]);
    }
    let mut r = Report::default();
    r.write(out, "stability.csv", &grid)?;
    r.write(out, "thresholds.csv", &th)?;
    r.write(out, "critical.csv", &crit)?;
    Ok(r)
}

pub fn validity(s: &Scenario, out: &Path) -> Result<Report, CliError> {
    let ratios = s
        .ratios
        .as_ref()
        .ok_or_else(|| CliError::Usage("validity needs sweep.ratios".into()))?;
    let pts = s_max_curve(&s.resonator, ratios, s.r_threshold)?;
    // Half the spread of the two lowest pulls: the |S| each qubit state puts
    // on the resonator relative to their mean.
    let pull = lamb_shift_chain(&s.qubit, &s.resonator, s.qubit.omega(), 0.0)?.pull;
    let spread = 0.5 * (pull[1] - pull[0]).abs();
    let mut t = Table::new(&["ratio", "omega_p_mhz", "eps_gain_mhz", "gain", "s_max_mhz", "qubit_pull_mhz", "within"]);
    for p in &pts {
        t.push(vec![
            p.ratio.into(),
            p.omega_p.into(),
            p.eps_gain.into(),
            p.gain.into(),
            p.s_max.into(),
            spread.into(),
            (spread <= p.s_max).into(),
        ]);
    }
    let mut r = Report::default();
    r.write(out, "validity.csv", &t)?;
    Ok(r)
}

/// Column-wise differences between two CSV tables with the same header.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnDiff {
    pub column: String,
    pub max_abs: f64,
    pub max_rel: f64,
    /// Non-numeric cells that differ.
    pub text_mismatches: usize,
}

fn read_csv(p: &Path) -> Result<(Vec<String>, Vec<Vec<String>>), CliError> {
    let mut rd = csv::Reader::from_path(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
    let header = rd
        .headers()
        .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?
        .iter()
        .map(String::from)
        .collect();
    let rows = rd
        .records()
        .map(|r| r.map(|r| r.iter().map(String::from).collect()))
        .collect::<Result<Vec<Vec<String>>, _>>()
        .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
    Ok((header, rows))
}

pub fn compare_files(a: &Path, b: &Path) -> Result<Vec<ColumnDiff>, CliError> {
    let (ha, ra) = read_csv(a)?;
    let (hb, rb) = read_csv(b)?;
    if ha != hb {
        return Err(CliError::Input(format!("{} and {} have different headers", a.display(), b.display())));
    }
    if ra.len() != rb.len() {
        return Err(CliError::Input(format!(
            "{} has {} rows, {} has {}",
            a.display(),
            ra.len(),
            b.display(),
            rb.len()
        )));
    }
    let mut out: Vec<ColumnDiff> = ha
        .iter()
        .map(|h| ColumnDiff {
            column: h.clone(),
            max_abs: 0.0,
            max_rel: 0.0,
            text_mismatches: 0,
        })
        .collect();
    for (x, y) in ra.iter().zip(&rb) {
        for (k, d) in out.iter_mut().enumerate() {
            match (x[k].parse::<f64>(), y[k].parse::<f64>()) {
                (Ok(u), Ok(v)) if u.is_finite() && v.is_finite() => {
                    let abs = (u - v).abs();
                    d.max_abs = d.max_abs.max(abs);
                    let scale = u.abs().max(v.abs());
                    if scale > 0.0 {
                        d.max_rel = d.max_rel.max(abs / scale);
                    }
                }
                (Ok(u), Ok(v)) if u.to_bits() == v.to_bits() || (u.is_nan() && v.is_nan()) => {}
                (Ok(_), Ok(_)) => {
                    d.max_abs = f64::INFINITY;
                    d.max_rel = f64::INFINITY;
                }
                _ if x[k] != y[k] => d.text_mismatches += 1,
                _ => {}
            }
        }
    }
    Ok(out)
}

/// Compares two CSV files, or every same-named CSV file of two directories.
pub fn compare(a: &Path, b: &Path, out: Option<&Path>) -> Result<(Report, Vec<(String, ColumnDiff)>), CliError> {
    let pairs: Vec<(String, PathBuf, PathBuf)> = if a.is_dir() {
        let list = |d: &Path| -> Result<BTreeMap<String, PathBuf>, CliError> {
            let rd = std::fs::read_dir(d).map_err(|e| CliError::io(d, e))?;
            let mut m = BTreeMap::new();
            for ent in rd {
                let p = ent.map_err(|e| CliError::io(d, e))?.path();
                if p.extension().is_some_and(|e| e == "csv") && p.file_name().is_some_and(|n| n != "compare.csv") {
                    m.insert(p.file_name().unwrap().to_string_lossy().into_owned(), p);
                }
            }
            Ok(m)
        };
        let (la, lb) = (list(a)?, list(b)?);
        if la.keys().ne(lb.keys()) {
            return Err(CliError::Input(format!(
                "{} and {} hold different CSV files",
                a.display(),
                b.display()
            )));
        }
        la.into_iter().zip(lb).map(|((n, pa), (_, pb))| (n, pa, pb)).collect()
    } else {
        let name = a.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
        vec![(name, a.to_path_buf(), b.to_path_buf())]
    };
    let mut all = Vec::new();
    for (name, pa, pb) in pairs {
        for d in compare_files(&pa, &pb)? {
            all.push((name.clone(), d));
        }
    }
    let mut r = Report::default();
    if let Some(dir) = out {
        let mut t = Table::new(&["file", "column", "max_abs_diff", "max_rel_diff", "text_mismatches"]);
        for (f, d) in &all {
            t.push(vec![
                f.clone().into(),
                d.column.clone().into(),
                d.max_abs.into(),
                d.max_rel.into(),
                d.text_mismatches.into(),
            ]);
        }
        r.write(dir, "compare.csv", &t)?;
    }
    Ok((r, all))
}
