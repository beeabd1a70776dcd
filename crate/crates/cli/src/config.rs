//! Scenario files: TOML, or the same structure as JSON.

use std::fmt;
use std::path::{Path, PathBuf};

use kerrq::field::{pump_for_ratio, BranchPolicy, DetuningReference, LinearResponseForm};
use kerrq::model::stark::StarkVariant;
use kerrq::model::{build_transmon, DriveSpec, Drives, QubitSpec, ResonatorSpec, TransmonParams};
use kerrq::oracle::HilbertConfig;
use kerrq::reduced::{DressedDephasing, FieldModel, ReducedOptions};
use kerrq::units::amplitude_from_db;
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub file: Option<PathBuf>,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = &self.file {
            write!(f, "{}:", p.display())?;
        }
        if let Some(l) = self.line {
            write!(f, "{l}:")?;
            if let Some(c) = self.column {
                write!(f, "{c}:")?;
            }
        }
        if self.file.is_some() || self.line.is_some() {
            write!(f, " ")?;
        }
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Toml,
    Json,
}

impl Format {
    pub fn from_path(p: &Path) -> Self {
        match p.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Toml,
        }
    }
}

// ---- raw schema -------------------------------------------------------------

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScenario {
    pub qubit: RawQubit,
    pub resonator: RawResonator,
    pub drives: Vec<RawDrive>,
    #[serde(default)]
    pub sweep: RawSweep,
    #[serde(default)]
    pub model: RawModel,
    #[serde(default)]
    pub oracle: RawOracle,
    /// Output directory, overridden by `--out`.
    pub output: Option<PathBuf>,
    /// Seed for randomized property runs; sweeps are deterministic.
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawQubit {
    /// ω_{i+1,i} in MHz, one per transition.
    pub transitions: Option<Vec<f64>>,
    /// g_i in MHz, one per transition.
    pub couplings: Option<Vec<f64>>,
    pub transmon: Option<RawTransmon>,
    pub gamma: f64,
    pub gamma_phi: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTransmon {
    pub ej: f64,
    pub ec: f64,
    pub levels: usize,
    #[serde(default = "default_charge_cutoff")]
    pub charge_cutoff: usize,
    pub g0: f64,
    #[serde(default = "default_offset_charge")]
    pub offset_charge: f64,
}

fn default_charge_cutoff() -> usize {
    20
}

fn default_offset_charge() -> f64 {
    0.5
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawResonator {
    pub omega_r: f64,
    #[serde(default)]
    pub kerr: f64,
    #[serde(default)]
    pub kerr3: f64,
    pub kappa: f64,
    #[serde(default)]
    pub kappa_nl: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Pump,
    Spectroscopy,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDrive {
    pub role: Role,
    /// Frequency in MHz.
    pub omega: Option<f64>,
    /// Pump only: frequency given as Ω/Ω_C.
    pub ratio: Option<f64>,
    /// Amplitude in MHz; for the pump, used when no pump axis is swept.
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RawAxis {
    List(Vec<f64>),
    Count(RangeCount),
    Step(RangeStep),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeCount {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeStep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSweep {
    /// Pump amplitudes in MHz.
    pub eps_p: Option<RawAxis>,
    /// Pump amplitudes as 20·log10(ε_p/MHz).
    pub power_db: Option<RawAxis>,
    /// Spectroscopy frequencies in MHz; per-column automatic when absent.
    pub omega_s: Option<RawAxis>,
    /// Ω/Ω_C values for the stability and validity commands.
    pub ratios: Option<RawAxis>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RawPolicy {
    #[default]
    SweepUp,
    SweepDown,
    Strict,
    LowestN,
    HighestN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RawDephasing {
    #[default]
    Off,
    White,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RawVariant {
    #[default]
    Full,
    NoQuartic,
    ResonatorFrequency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RawFields {
    #[default]
    Nonlinear,
    LinearExact,
    LinearClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RawReference {
    #[default]
    Pulled,
    Bare,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModel {
    #[serde(default)]
    pub branch_policy: RawPolicy,
    #[serde(default)]
    pub dressed_dephasing: RawDephasing,
    #[serde(default = "yes")]
    pub purcell: bool,
    #[serde(default)]
    pub stark: RawVariant,
    #[serde(default)]
    pub fields: RawFields,
    #[serde(default)]
    pub detuning_reference: RawReference,
    #[serde(default = "default_r_threshold")]
    pub r_threshold: f64,
    /// Qubit state whose pull enters the stability diagram; bare resonator
    /// when absent.
    pub stability_state: Option<usize>,
    /// Half width of the automatic ω_s axis in analytic HWHMs.
    #[serde(default = "default_auto_span")]
    pub auto_span: f64,
    #[serde(default = "default_auto_points")]
    pub auto_points: usize,
}

impl Default for RawModel {
    fn default() -> Self {
        Self {
            branch_policy: RawPolicy::default(),
            dressed_dephasing: RawDephasing::default(),
            purcell: true,
            stark: RawVariant::default(),
            fields: RawFields::default(),
            detuning_reference: RawReference::default(),
            r_threshold: default_r_threshold(),
            stability_state: None,
            auto_span: default_auto_span(),
            auto_points: default_auto_points(),
        }
    }
}

fn yes() -> bool {
    true
}

fn default_r_threshold() -> f64 {
    0.1
}

fn default_auto_span() -> f64 {
    8.0
}

fn default_auto_points() -> usize {
    201
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OracleAxis {
    /// Five points at the reduced-model centre ± {1, 2} fitted HWHM.
    #[default]
    Probe,
    /// The reduced-model ω_s axis of each column.
    Grid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOracle {
    pub levels: Option<usize>,
    pub fock: Option<usize>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub window_us: Option<f64>,
    pub horizon_us: Option<f64>,
    pub steady_tol: Option<f64>,
    pub leakage_tol: Option<f64>,
    pub escalate: Option<bool>,
    pub frame_offset: Option<f64>,
    pub extrapolation: Option<usize>,
    #[serde(default = "yes")]
    pub check_fock: bool,
    #[serde(default)]
    pub axis: OracleAxis,
    /// Start each column from the previous column's state; runs columns
    /// sequentially.
    #[serde(default = "yes")]
    pub chain_columns: bool,
}

impl Default for RawOracle {
    fn default() -> Self {
        Self {
            levels: None,
            fock: None,
            rtol: None,
            atol: None,
            window_us: None,
            horizon_us: None,
            steady_tol: None,
            leakage_tol: None,
            escalate: None,
            frame_offset: None,
            extrapolation: None,
            check_fock: true,
            axis: OracleAxis::Probe,
            chain_columns: true,
        }
    }
}

// ---- validated scenario -----------------------------------------------------

#[derive(Debug, Clone)]
pub struct OracleSettings {
    pub hilbert: HilbertConfig,
    pub check_fock: bool,
    pub axis: OracleAxis,
    pub chain_columns: bool,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub qubit: QubitSpec,
    pub resonator: ResonatorSpec,
    pub drives: Drives,
    pub eps_p: Option<Vec<f64>>,
    pub omega_s: Option<Vec<f64>>,
    pub ratios: Option<Vec<f64>>,
    pub options: ReducedOptions,
    pub reference: DetuningReference,
    pub r_threshold: f64,
    pub stability_state: Option<usize>,
    pub auto_span: f64,
    pub auto_points: usize,
    pub oracle: OracleSettings,
    pub output: Option<PathBuf>,
    pub seed: u64,
}

impl Scenario {
    /// Pump amplitudes: the swept axis, else the pump's own amplitude.
    pub fn pump_axis(&self) -> Vec<f64> {
        match &self.eps_p {
            Some(v) => v.clone(),
            None => vec![self.drives.pump.epsilon.norm()],
        }
    }

    pub fn eps_s(&self) -> f64 {
        self.drives.spectroscopy.map_or(0.0, |s| s.epsilon.norm())
    }
}

/// Reads and validates a scenario file.
pub fn load(path: &Path) -> Result<Scenario, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        file: Some(path.to_path_buf()),
        line: None,
        column: None,
        message: format!("cannot read: {e}"),
    })?;
    parse(&text, Format::from_path(path)).map_err(|e| ConfigError {
        file: Some(path.to_path_buf()),
        ..e
    })
}

/// Parses and validates scenario text.
pub fn parse(text: &str, format: Format) -> Result<Scenario, ConfigError> {
    let raw: RawScenario = match format {
        Format::Toml => toml::from_str(text).map_err(|e| {
            let (line, column) = match e.span() {
                Some(s) => line_col(text, s.start),
                None => (None, None),
            };
            ConfigError {
                file: None,
                line,
                column,
                message: e.message().trim().to_string(),
            }
        })?,
        Format::Json => serde_json::from_str(text).map_err(|e| ConfigError {
            file: None,
            line: Some(e.line()),
            column: Some(e.column()),
            message: strip_position(&e.to_string()),
        })?,
    };
    validate(&raw).map_err(|(path, message)| ConfigError {
        file: None,
        line: locate(text, format, &path),
        column: None,
        message: format!("{}: {message}", path.join(".")),
    })
}

fn strip_position(s: &str) -> String {
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s.to_string(),
    }
}

fn line_col(text: &str, offset: usize) -> (Option<usize>, Option<usize>) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (Some(line), Some(col))
}

type Invalid = (Vec<String>, String);

fn bad(path: &[&str], msg: impl Into<String>) -> Invalid {
    (path.iter().map(|s| s.to_string()).collect(), msg.into())
}

fn core_err<'a>(path: &'a [&'a str]) -> impl Fn(kerrq::Error) -> Invalid + 'a {
    move |e| bad(path, e.to_string())
}

fn axis(raw: &RawAxis, path: &[&str]) -> Result<Vec<f64>, Invalid> {
    let v = match raw {
        RawAxis::List(v) => v.clone(),
        RawAxis::Count(r) => match r.count {
            0 => Vec::new(),
            1 => vec![r.start],
            n => (0..n)
                .map(|k| r.start + (r.stop - r.start) * k as f64 / (n - 1) as f64)
                .collect(),
        },
        RawAxis::Step(r) => {
            if !(r.step > 0.0) || !r.step.is_finite() {
                return Err(bad(path, "step must be finite and > 0"));
            }
            let n = ((r.stop - r.start) / r.step + 1e-9).floor();
            if n < 0.0 {
                Vec::new()
            } else if n > 1e7 {
                return Err(bad(path, "more than 1e7 points"));
            } else {
                (0..=n as usize).map(|k| r.start + k as f64 * r.step).collect()
            }
        }
    };
    if v.is_empty() {
        return Err(bad(path, "empty axis"));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(bad(path, "non-finite value"));
    }
    Ok(v)
}

fn validate(raw: &RawScenario) -> Result<Scenario, Invalid> {
    let q = &raw.qubit;
    let qubit = match (&q.transmon, &q.transitions, &q.couplings) {
        (Some(t), None, None) => {
            let mut p = TransmonParams::new(t.ej, t.ec, t.levels, t.charge_cutoff, t.g0);
            p.offset_charge = t.offset_charge;
            p.gamma = q.gamma;
            p.gamma_phi = q.gamma_phi;
            build_transmon(&p).map_err(core_err(&["qubit", "transmon"]))?
        }
        (None, Some(w), Some(g)) => {
            QubitSpec::from_transitions(w, g, q.gamma, q.gamma_phi).map_err(core_err(&["qubit"]))?
        }
        (None, _, _) => return Err(bad(&["qubit"], "give either `transitions` and `couplings`, or `transmon`")),
        (Some(_), _, _) => return Err(bad(&["qubit"], "`transmon` excludes `transitions` and `couplings`")),
    };
    let r = &raw.resonator;
    let resonator =
        ResonatorSpec::new(r.omega_r, r.kerr, r.kerr3, r.kappa, r.kappa_nl).map_err(core_err(&["resonator"]))?;

    let m = &raw.model;
    let reference = match m.detuning_reference {
        RawReference::Pulled => DetuningReference::Pulled,
        RawReference::Bare => DetuningReference::Bare,
    };

    let mut list = Vec::with_capacity(raw.drives.len());
    for (i, d) in raw.drives.iter().enumerate() {
        let idx = i.to_string();
        let path = ["drives", idx.as_str()];
        let eps = d.epsilon.unwrap_or(0.0);
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(bad(&path, "epsilon must be finite and >= 0"));
        }
        match d.role {
            Role::Pump => {
                let omega = match (d.omega, d.ratio) {
                    (Some(w), None) => w,
                    (None, Some(x)) => {
                        pump_for_ratio(&qubit, &resonator, x, reference).map_err(core_err(&path))?
                    }
                    _ => return Err(bad(&path, "a pump needs exactly one of `omega` and `ratio`")),
                };
                list.push(DriveSpec::pump(eps, omega));
            }
            Role::Spectroscopy => {
                if d.ratio.is_some() {
                    return Err(bad(&path, "`ratio` applies to the pump only"));
                }
                if d.epsilon.is_none() {
                    return Err(bad(&path, "spectroscopy drive needs `epsilon`"));
                }
                list.push(DriveSpec::spectroscopy(eps, d.omega.unwrap_or(f64::NAN)));
            }
        }
    }
    // A spectroscopy frequency is only needed by the fields command; keep it
    // finite for the generic check and restore NaN afterwards.
    let spec_omega: Vec<f64> = list.iter().map(|d| d.omega).collect();
    let checked: Vec<DriveSpec> = list
        .iter()
        .map(|d| if d.omega.is_nan() { d.with_frequency(0.0) } else { *d })
        .collect();
    let mut drives = Drives::from_list(&checked).map_err(|e| match e {
        kerrq::Error::InvalidParameter { reason, .. } => bad(&["drives"], reason),
        e => bad(&["drives"], e.to_string()),
    })?;
    if let Some(s) = drives.spectroscopy.as_mut() {
        let i = list.iter().position(|d| d.role == kerrq::model::DriveRole::Spectroscopy).unwrap();
        s.omega = spec_omega[i];
    }

    let s = &raw.sweep;
    let eps_p = match (&s.eps_p, &s.power_db) {
        (Some(a), None) => Some(axis(a, &["sweep", "eps_p"])?),
        (None, Some(a)) => Some(axis(a, &["sweep", "power_db"])?.into_iter().map(amplitude_from_db).collect()),
        (None, None) => None,
        (Some(_), Some(_)) => return Err(bad(&["sweep", "power_db"], "give `eps_p` or `power_db`, not both")),
    };
    if let Some(e) = &eps_p {
        if e.iter().any(|&x| x < 0.0) {
            return Err(bad(&["sweep", "eps_p"], "pump amplitudes must be >= 0"));
        }
    }
    let omega_s = s.omega_s.as_ref().map(|a| axis(a, &["sweep", "omega_s"])).transpose()?;
    let ratios = s.ratios.as_ref().map(|a| axis(a, &["sweep", "ratios"])).transpose()?;
    if let Some(rs) = &ratios {
        if rs.iter().any(|&x| x < 0.0) {
            return Err(bad(&["sweep", "ratios"], "ratios must be >= 0"));
        }
    }

    if !(m.r_threshold >= 0.0) {
        return Err(bad(&["model", "r_threshold"], "must be >= 0"));
    }
    if let Some(i) = m.stability_state {
        if i >= qubit.levels() {
            return Err(bad(&["model", "stability_state"], format!("qubit has {} levels", qubit.levels())));
        }
    }
    if !(m.auto_span > 0.0) || m.auto_points < 5 {
        return Err(bad(&["model", "auto_points"], "automatic axis needs auto_span > 0 and at least 5 points"));
    }
    let options = ReducedOptions {
        dressed_dephasing: match m.dressed_dephasing {
            RawDephasing::Off => DressedDephasing::Off,
            RawDephasing::White => DressedDephasing::White,
        },
        purcell: m.purcell,
        variant: match m.stark {
            RawVariant::Full => StarkVariant::Full,
            RawVariant::NoQuartic => StarkVariant::NoQuartic,
            RawVariant::ResonatorFrequency => StarkVariant::ResonatorFrequency,
        },
        fields: match m.fields {
            RawFields::Nonlinear => FieldModel::Nonlinear,
            RawFields::LinearExact => FieldModel::Linear(LinearResponseForm::Exact),
            RawFields::LinearClosedForm => FieldModel::Linear(LinearResponseForm::ClosedForm),
        },
        policy: match m.branch_policy {
            RawPolicy::SweepUp | RawPolicy::LowestN => BranchPolicy::SweepUp,
            RawPolicy::SweepDown | RawPolicy::HighestN => BranchPolicy::SweepDown,
            RawPolicy::Strict => BranchPolicy::Strict,
        },
    };

    let o = &raw.oracle;
    let d = HilbertConfig::default();
    let hilbert = HilbertConfig {
        levels: o.levels.unwrap_or(d.levels.min(qubit.levels())),
        fock: o.fock.unwrap_or(d.fock),
        rtol: o.rtol.unwrap_or(d.rtol),
        atol: o.atol.unwrap_or(d.atol),
        window_us: o.window_us.unwrap_or(d.window_us),
        horizon_us: o.horizon_us.unwrap_or(d.horizon_us),
        steady_tol: o.steady_tol.unwrap_or(d.steady_tol),
        leakage_tol: o.leakage_tol.unwrap_or(d.leakage_tol),
        escalate: o.escalate.unwrap_or(d.escalate),
        frame_offset: o.frame_offset.unwrap_or(d.frame_offset),
        extrapolation: o.extrapolation.unwrap_or(d.extrapolation),
        ..d
    };
    hilbert.validate().map_err(core_err(&["oracle"]))?;
    if hilbert.levels > qubit.levels() {
        return Err(bad(
            &["oracle", "levels"],
            format!("qubit has {} levels, {} requested", qubit.levels(), hilbert.levels),
        ));
    }

    Ok(Scenario {
        qubit,
        resonator,
        drives,
        eps_p,
        omega_s,
        ratios,
        options,
        reference,
        r_threshold: m.r_threshold,
        stability_state: m.stability_state,
        auto_span: m.auto_span,
        auto_points: m.auto_points,
        oracle: OracleSettings {
            hilbert,
            check_fock: o.check_fock,
            axis: o.axis,
            chain_columns: o.chain_columns,
        },
        output: raw.output.clone(),
        seed: raw.seed,
    })
}

/// Best-effort line of the key at `path` (table names, keys and array
/// indices) in the source text.
pub fn locate(text: &str, format: Format, path: &[String]) -> Option<usize> {
    match format {
        Format::Toml => locate_toml(text, path),
        Format::Json => locate_json(text, path),
    }
}

fn key_of(line: &str) -> Option<&str> {
    let t = line.trim_start();
    if t.starts_with('[') || t.starts_with('#') {
        return None;
    }
    let k = t.split('=').next()?.trim();
    if k.len() == t.len() {
        return None;
    }
    Some(k.trim_matches('"'))
}

fn locate_toml(text: &str, path: &[String]) -> Option<usize> {
    let (first, rest) = path.split_first()?;
    let mut table = String::new();
    let mut array_index: Option<usize> = None;
    let mut counts = std::collections::HashMap::<String, usize>::new();
    let want_index: Option<usize> = rest.first().and_then(|s| s.parse().ok());
    let key = if want_index.is_some() { rest.get(1) } else { rest.first() };
    let mut fallback = None;
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if let Some(h) = t.strip_prefix("[[").and_then(|s| s.split("]]").next()) {
            let h = h.trim().to_string();
            let c = counts.entry(h.clone()).or_insert(0);
            array_index = Some(*c);
            *c += 1;
            table = h;
        } else if let Some(h) = t.strip_prefix('[').and_then(|s| s.split(']').next()) {
            table = h.trim().to_string();
            array_index = None;
        } else {
            let Some(k) = key_of(line) else { continue };
            let full = if table.is_empty() { k.to_string() } else { format!("{table}.{k}") };
            let target = match key {
                Some(k) => format!("{first}.{k}"),
                None => first.clone(),
            };
            // Also matches dotted keys at top level, e.g. `sweep.eps_p = ...`.
            if full == target && (want_index.is_none() || array_index == want_index) {
                return Some(i + 1);
            }
            continue;
        }
        if table == *first || table.starts_with(&format!("{first}.")) {
            let index_ok = want_index.is_none() || array_index == want_index;
            if index_ok && fallback.is_none() {
                fallback = Some(i + 1);
            }
            if key.is_none() && index_ok {
                return Some(i + 1);
            }
            if let Some(k) = key {
                if table == format!("{first}.{k}") && index_ok {
                    return Some(i + 1);
                }
            }
        }
    }
    fallback
}

fn locate_json(text: &str, path: &[String]) -> Option<usize> {
    let mut pos = 0;
    let mut found = None;
    for p in path {
        if p.parse::<usize>().is_ok() {
            continue;
        }
        let needle = format!("\"{p}\"");
        match text[pos..].find(&needle) {
            Some(i) => {
                pos += i + needle.len();
                found = Some(pos);
            }
            None => break,
        }
    }
    found.map(|p| text[..p].matches('\n').count() + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[qubit]
transitions = [5720.0, 5421.6]
couplings = [42.4, 58.4]
gamma = 0.22
gamma_phi = 0.25

[resonator]
omega_r = 6453.5
kerr = -0.625
kappa = 9.6

[[drives]]
role = "pump"
omega = 6450.0

[[drives]]
role = "spectroscopy"
epsilon = 3.0

[sweep]
eps_p = { start = 0.0, stop = 10.0, count = 11 }
"#;

    #[test]
    fn minimal_scenario() {
        let s = parse(MINIMAL, Format::Toml).unwrap();
        assert_eq!(s.qubit.levels(), 3);
        assert_eq!(s.pump_axis().len(), 11);
        assert_eq!(s.pump_axis()[10], 10.0);
        assert_eq!(s.eps_s(), 3.0);
        assert_eq!(s.oracle.hilbert, HilbertConfig::default());
    }

    #[test]
    fn unknown_key_has_a_line() {
        let text = MINIMAL.replace("kappa = 9.6", "kappa = 9.6\nkapa_nl = 0.1");
        let e = parse(&text, Format::Toml).unwrap_err();
        assert_eq!(e.line, Some(12), "{e}");
        assert!(e.message.contains("kapa_nl"), "{e}");
    }

    #[test]
    fn empty_axis() {
        let text = MINIMAL.replace("eps_p = { start = 0.0, stop = 10.0, count = 11 }", "eps_p = []");
        let e = parse(&text, Format::Toml).unwrap_err();
        assert!(e.message.contains("empty axis"), "{e}");
        assert_eq!(e.line, Some(22));
    }

    #[test]
    fn exactly_one_pump() {
        let text = MINIMAL.replace("role = \"spectroscopy\"\nepsilon = 3.0", "role = \"pump\"\nomega = 6440.0");
        let e = parse(&text, Format::Toml).unwrap_err();
        assert!(e.message.contains("exactly one pump"), "{e}");
        assert_eq!(e.line, Some(13));
    }

    #[test]
    fn pump_by_ratio() {
        let text = MINIMAL.replace("omega = 6450.0", "ratio = 0.7");
        let s = parse(&text, Format::Toml).unwrap();
        let d = kerrq::field::reduced_detuning(&s.qubit, &s.resonator, s.drives.pump.omega, s.reference).unwrap();
        assert!((d.ratio - 0.7).abs() < 1e-12);
    }

    #[test]
    fn axis_forms() {
        let text = MINIMAL.replace(
            "eps_p = { start = 0.0, stop = 10.0, count = 11 }",
            "power_db = { start = 0.0, stop = 20.0, step = 10.0 }\nratios = [0.5, 1.0]",
        );
        let s = parse(&text, Format::Toml).unwrap();
        let e = s.pump_axis();
        assert_eq!(e.len(), 3);
        assert!((e[2] - 10.0).abs() < 1e-12);
        assert_eq!(s.ratios.unwrap(), vec![0.5, 1.0]);
    }

    #[test]
    fn json_mirror() {
        let text = r#"{
  "qubit": {"transitions": [5720.0, 5421.6], "couplings": [42.4, 58.4], "gamma": 0.22, "gamma_phi": 0.25},
  "resonator": {"omega_r": 6453.5, "kerr": -0.625, "kappa": 9.6},
  "drives": [{"role": "pump", "omega": 6450.0}, {"role": "spectroscopy", "epsilon": 3.0}],
  "sweep": {"eps_p": {"start": 0.0, "stop": 10.0, "count": 11}}
}"#;
        let s = parse(text, Format::Json).unwrap();
        assert_eq!(s.pump_axis().len(), 11);
        let bad = text.replace("\"kappa\": 9.6", "\"kappa\": 9.6, \"q\": 1");
        let e = parse(&bad, Format::Json).unwrap_err();
        assert_eq!(e.line, Some(3), "{e}");
        assert!(e.message.contains("unknown field"), "{e}");
        let empty = text.replace("{\"start\": 0.0, \"stop\": 10.0, \"count\": 11}", "[]");
        let e = parse(&empty, Format::Json).unwrap_err();
        assert_eq!(e.line, Some(5), "{e}");
    }

    #[test]
    fn transmon_qubit() {
        let text = MINIMAL.replace(
            "transitions = [5720.0, 5421.6]\ncouplings = [42.4, 58.4]",
            "transmon = { ej = 20000.0, ec = 300.0, levels = 3, g0 = 40.0 }",
        );
        let s = parse(&text, Format::Toml).unwrap();
        assert_eq!(s.qubit.levels(), 3);
        let both = MINIMAL.replace("gamma = 0.22", "gamma = 0.22\ntransmon = { ej = 2e4, ec = 300.0, levels = 3, g0 = 40.0 }");
        assert!(parse(&both, Format::Toml).unwrap_err().message.contains("excludes"));
    }
}
