//! JSON-in, JSON-out entry points for the static demo page in `www/`.
//!
//! Every request carries the device as `qubit` and `resonator` objects and
//! returns plot-ready arrays.

use kerrq::field::{s_max_curve, stability_diagram, StabilityModel};
use kerrq::model::{DriveSpec, QubitSpec, ResonatorSpec};
use kerrq::reduced::{analytic_hwhm, reduced_point, spectrum_column, ReducedOptions};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Qubit {
    pub transitions: Vec<f64>,
    pub couplings: Vec<f64>,
    pub gamma: f64,
    pub gamma_phi: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resonator {
    pub omega_r: f64,
    #[serde(default)]
    pub kerr: f64,
    #[serde(default)]
    pub kerr3: f64,
    pub kappa: f64,
    #[serde(default)]
    pub kappa_nl: f64,
}

fn device(q: &Qubit, r: &Resonator) -> Result<(QubitSpec, ResonatorSpec), String> {
    let qs = QubitSpec::from_transitions(&q.transitions, &q.couplings, q.gamma, q.gamma_phi).map_err(|e| e.to_string())?;
    let rs = ResonatorSpec::new(r.omega_r, r.kerr, r.kerr3, r.kappa, r.kappa_nl).map_err(|e| e.to_string())?;
    Ok((qs, rs))
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumRequest {
    pub qubit: Qubit,
    pub resonator: Resonator,
    pub omega_p: f64,
    pub eps_p: f64,
    pub eps_s: f64,
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_points() -> usize {
    201
}

#[derive(Debug, Serialize, PartialEq)]
pub struct SpectrumReply {
    pub omega_s: Vec<f64>,
    pub p1: Vec<f64>,
    pub center: f64,
    pub hwhm: f64,
    pub photons: f64,
    pub breakdown: bool,
}

/// Reduced-model line at one pump amplitude, on an axis of ±8 analytic
/// widths around the shifted transition.
pub fn spectrum(req: &SpectrumRequest) -> Result<SpectrumReply, String> {
    let (q, r) = device(&req.qubit, &req.resonator)?;
    let opts = ReducedOptions::default();
    let pump = DriveSpec::pump(req.eps_p, req.omega_p);
    let (p, rates) = reduced_point(&q, &r, pump, &opts).map_err(|e| e.to_string())?;
    let a_s = kerrq::field::solve_pointer_spectroscopy(
        &r,
        p.states[0].alpha_p,
        Complex64::new(req.eps_s, 0.0),
        rates.omega10_3,
    );
    let hw = analytic_hwhm(&rates, a_s * q.couplings()[0]);
    let axis = linspace(rates.omega10_3 - 8.0 * hw, rates.omega10_3 + 8.0 * hw, req.points.max(5));
    let col = spectrum_column(&q, &r, pump, req.eps_s, &axis, &opts).map_err(|e| e.to_string())?;
    Ok(SpectrumReply {
        omega_s: axis,
        p1: col.p1,
        center: col.fit.center,
        hwhm: col.fit.hwhm,
        photons: col.rates.n0,
        breakdown: col.breakdown,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityRequest {
    pub resonator: Resonator,
    pub ratio_max: f64,
    #[serde(default = "default_points")]
    pub points: usize,
}

#[derive(Debug, Serialize, PartialEq)]
pub struct StabilityReply {
    pub ratio: Vec<f64>,
    pub eps_low: Vec<f64>,
    pub eps_high: Vec<f64>,
}

/// Switching amplitudes of the bare resonator against Ω/Ω_C.
pub fn stability(req: &StabilityRequest) -> Result<StabilityReply, String> {
    let r = ResonatorSpec::new(
        req.resonator.omega_r,
        req.resonator.kerr,
        req.resonator.kerr3,
        req.resonator.kappa,
        req.resonator.kappa_nl,
    )
    .map_err(|e| e.to_string())?;
    let ratios = linspace(0.0, req.ratio_max, req.points.max(2));
    let d = stability_diagram(&StabilityModel::bare(&r), &ratios, &[0.0]).map_err(|e| e.to_string())?;
    Ok(StabilityReply {
        ratio: d.thresholds.iter().map(|t| t.ratio).collect(),
        eps_low: d.thresholds.iter().map(|t| t.eps_low).collect(),
        eps_high: d.thresholds.iter().map(|t| t.eps_high).collect(),
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidityRequest {
    pub resonator: Resonator,
    #[serde(default = "default_r_threshold")]
    pub r_threshold: f64,
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_r_threshold() -> f64 {
    0.1
}

#[derive(Debug, Serialize, PartialEq)]
pub struct ValidityReply {
    pub ratio: Vec<f64>,
    pub s_max: Vec<f64>,
}

/// S_max over Ω/Ω_C ∈ [0, 1].
pub fn validity(req: &ValidityRequest) -> Result<ValidityReply, String> {
    let r = ResonatorSpec::new(
        req.resonator.omega_r,
        req.resonator.kerr,
        req.resonator.kerr3,
        req.resonator.kappa,
        req.resonator.kappa_nl,
    )
    .map_err(|e| e.to_string())?;
    let ratios = linspace(0.0, 1.0, req.points.max(2));
    let pts = s_max_curve(&r, &ratios, req.r_threshold).map_err(|e| e.to_string())?;
    Ok(ValidityReply {
        ratio: pts.iter().map(|p| p.ratio).collect(),
        s_max: pts.iter().map(|p| p.s_max).collect(),
    })
}

fn call<Q: for<'de> Deserialize<'de>, A: Serialize>(
    json: &str,
    f: impl Fn(&Q) -> Result<A, String>,
) -> Result<String, String> {
    let req: Q = serde_json::from_str(json).map_err(|e| e.to_string())?;
    let reply = f(&req)?;
    serde_json::to_string(&reply).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = spectrum)]
pub fn spectrum_js(json: &str) -> Result<String, JsValue> {
    call(json, spectrum).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = stability)]
pub fn stability_js(json: &str) -> Result<String, JsValue> {
    call(json, stability).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = validity)]
pub fn validity_js(json: &str) -> Result<String, JsValue> {
    call(json, validity).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEVICE: &str = r#""qubit": {"transitions": [5720.0, 5421.6], "couplings": [42.4, 58.4],
        "gamma": 0.22, "gamma_phi": 0.25},
        "resonator": {"omega_r": 6453.5, "kerr": -0.625, "kerr3": -0.00125, "kappa": 9.6}"#;

    #[test]
    fn unpumped_line_sits_at_the_lamb_shifted_transition() {
        let json = format!(r#"{{{DEVICE}, "omega_p": 6450.0, "eps_p": 0.0, "eps_s": 3.0}}"#);
        let out: serde_json::Value = serde_json::from_str(&call(&json, spectrum).unwrap()).unwrap();
        let center = out["center"].as_f64().unwrap();
        // ω_10 + χ_0 with χ_0 = g_0²/(ω_10 − ω_r), up to the pulled
        // resonator's own small correction.
        let lamb = 42.4f64.powi(2) / (5720.0 - 6453.5);
        assert!((center - (5720.0 + lamb)).abs() < 0.5, "{center}");
        assert_eq!(out["p1"].as_array().unwrap().len(), 201);
    }

    #[test]
    fn pure_kerr_window_opens_at_the_critical_ratio() {
        let json = r#"{"resonator": {"omega_r": 6453.5, "kerr": -0.625, "kappa": 9.6}, "ratio_max": 2.0, "points": 201}"#;
        let out: serde_json::Value = serde_json::from_str(&call(json, stability).unwrap()).unwrap();
        let first = out["ratio"][0].as_f64().unwrap();
        assert!((0.999..=1.01).contains(&first), "{first}");
        // Degenerate at the merge point, open beyond it.
        let n = out["ratio"].as_array().unwrap().len();
        let lo = out["eps_low"][n - 1].as_f64().unwrap();
        let hi = out["eps_high"][n - 1].as_f64().unwrap();
        assert!(lo < hi, "{lo} {hi}");
    }

    #[test]
    fn validity_curve_spans_the_unit_interval() {
        let json = r#"{"resonator": {"omega_r": 6453.5, "kerr": -0.625, "kerr3": -0.00125, "kappa": 9.6}, "points": 11}"#;
        let out: serde_json::Value = serde_json::from_str(&call(json, validity).unwrap()).unwrap();
        assert_eq!(out["s_max"].as_array().unwrap().len(), 11);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let json = r#"{"resonator": {"omega_r": 6453.5, "kappa": 9.6, "q": 1}, "ratio_max": 2.0}"#;
        assert!(call(json, stability).unwrap_err().contains("unknown field"));
    }
}
