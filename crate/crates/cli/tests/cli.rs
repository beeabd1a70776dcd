use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn kerrq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kerrq"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn run_with(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut a = vec![cmd, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    a.extend_from_slice(extra);
    kerrq(&a)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn read_csv(p: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(p).unwrap();
    let h = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (h, rows)
}

fn column(p: &Path, name: &str) -> Vec<String> {
    let (h, rows) = read_csv(p);
    let k = h.iter().position(|x| x == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.into_iter().map(|r| r[k].clone()).collect()
}

fn floats(p: &Path, name: &str) -> Vec<f64> {
    column(p, name).iter().map(|s| s.parse().unwrap()).collect()
}

const SMALL: &str = r#"
[qubit]
transitions = [5720.0, 5421.6]
couplings = [42.4, 58.4]
gamma = 0.22
gamma_phi = 0.25

[resonator]
omega_r = 6453.5
kerr = -0.625
kerr3 = -0.00125
kappa = 9.6

[[drives]]
role = "pump"
omega = 6450.0

[[drives]]
role = "spectroscopy"
epsilon = 3.0
"#;

#[test]
fn fields_on_the_reference_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_with("fields", &scenario("reference_device.toml"), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let p = dir.path().join("fields.csv");
    let text = fs::read_to_string(&p).unwrap();
    assert!(text.starts_with("eps_p_mhz,state,re_alpha_p,im_alpha_p,n,branch,residual,"));
    assert!(!text.contains('\r'));
    // 201 amplitudes, three qubit states each.
    assert_eq!(read_csv(&p).1.len(), 3 * 201);
    let n = floats(&p, "n");
    assert!(n.iter().all(|x| x.is_finite() && *x >= 0.0));
}

#[test]
fn json_mirror_gives_identical_tables() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for cmd in ["fields", "stability"] {
        let oa = run_with(cmd, &scenario("reference_device.toml"), a.path(), &[]);
        let ob = run_with(cmd, &scenario("reference_device.json"), b.path(), &[]);
        assert_eq!(oa.status.code(), Some(0), "{}", stderr(&oa));
        assert_eq!(ob.status.code(), Some(0), "{}", stderr(&ob));
    }
    for f in ["fields.csv", "stability.csv", "thresholds.csv", "critical.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn reduced_spectrum_jumps_at_the_upper_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_with("spectrum", &scenario("reference_device.toml"), dir.path(), &["--threads", "2"]);
    let peaks = dir.path().join("peaks.csv");
    let flags = column(&peaks, "flags");
    let breakdown = flags.iter().any(|f| f.contains("breakdown"));
    assert_eq!(o.status.code(), Some(if breakdown { 4 } else { 0 }), "{}", stderr(&o));
    let eps = floats(&peaks, "eps_p_mhz");
    let w = floats(&peaks, "omega10_mhz");
    let (k, step) = w
        .windows(2)
        .map(|p| (p[1] - p[0]).abs())
        .enumerate()
        .fold((0, 0.0), |a, (i, d)| if d > a.1 { (i, d) } else { a });
    // Upper switching amplitude of the ground-state equation, ≈ 66.16 MHz.
    assert!(eps[k] <= 66.16 && eps[k + 1] >= 66.16, "{} {}", eps[k], eps[k + 1]);
    assert!(step > 10.0, "{step}");
    assert!(dir.path().join("spectrum.csv").exists());
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = scenario("reference_device.toml");
    run_with("validity", &cfg, a.path(), &["--threads", "1"]);
    run_with("validity", &cfg, b.path(), &["--threads", "3"]);
    let f = "validity.csv";
    assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
}

#[test]
fn compare_reads_back_every_table() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = scenario("reference_device.toml");
    for cmd in ["fields", "stability", "validity"] {
        run_with(cmd, &cfg, a.path(), &[]);
        run_with(cmd, &cfg, b.path(), &[]);
    }
    let rep = tempfile::tempdir().unwrap();
    let o = kerrq(&[
        "compare",
        a.path().to_str().unwrap(),
        b.path().to_str().unwrap(),
        "--out",
        rep.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let p = rep.path().join("compare.csv");
    let files = column(&p, "file");
    for f in ["fields.csv", "thresholds.csv", "critical.csv", "stability.csv", "validity.csv"] {
        assert!(files.iter().any(|x| x == f), "{f}");
    }
    assert!(floats(&p, "max_abs_diff").iter().all(|&d| d == 0.0));
    assert!(column(&p, "text_mismatches").iter().all(|d| d == "0"));

    let o = kerrq(&[
        "compare",
        a.path().join("fields.csv").to_str().unwrap(),
        a.path().join("validity.csv").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("different headers"));
}

#[test]
fn pure_kerr_merge_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_with("stability", &scenario("pure_kerr.toml"), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rc = floats(&dir.path().join("critical.csv"), "ratio_c");
    assert_eq!(rc.len(), 1);
    assert!((rc[0] - 1.0).abs() < 1e-6, "{}", rc[0]);
    let regions = column(&dir.path().join("stability.csv"), "region");
    for r in ["mono-L", "mono-H", "bistable"] {
        assert!(regions.iter().any(|x| x == r), "{r}");
    }
}

#[test]
fn subcritical_grid_has_an_empty_threshold_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.toml",
        &format!("{SMALL}\n[sweep]\neps_p = {{ start = 0.0, stop = 50.0, count = 11 }}\nratios = [0.1, 0.5, 0.9]\n[model]\ndetuning_reference = \"bare\"\n"),
    );
    let o = run_with("stability", &cfg, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(dir.path().join("thresholds.csv")).unwrap(), "ratio,omega_p_mhz,eps_low_mhz,eps_high_mhz\n");
    assert!(column(&dir.path().join("stability.csv"), "region").iter().all(|r| r == "mono-L"));
}

#[test]
fn validity_curve_stays_below_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_with("validity", &scenario("reference_device.toml"), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let p = dir.path().join("validity.csv");
    let ratio = floats(&p, "ratio");
    let s = floats(&p, "s_max_mhz");
    let max = ratio
        .iter()
        .zip(&s)
        .filter(|(r, _)| **r >= 0.1)
        .map(|(_, s)| *s)
        .fold(0.0, f64::max);
    assert!(max <= 0.6, "{max}");
}

#[test]
fn empty_axis_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", &format!("{SMALL}\n[sweep]\neps_p = []\n"));
    let o = run_with("fields", &cfg, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("empty axis"), "{e}");
    assert!(e.contains("s.toml:23:"), "{e}");
}

#[test]
fn duplicate_pump_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", &format!("{SMALL}\n[[drives]]\nrole = \"pump\"\nomega = 6440.0\n"));
    let o = run_with("fields", &cfg, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exactly one pump"), "{}", stderr(&o));
}

#[test]
fn unknown_key_names_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL.replace("kappa = 9.6", "kappa = 9.6\nkapa = 1.0");
    let cfg = write(dir.path(), "s.toml", &text);
    let o = run_with("fields", &cfg, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("s.toml:13:") && e.contains("kapa"), "{e}");
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_with("fields", &scenario("reference_device.toml"), dir.path(), &["--engine", "oracle"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run_with("fields", &dir.path().join("missing.toml"), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cannot read"));
}

#[test]
fn under_truncated_oracle_escalates_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "{SMALL}\n[sweep]\neps_p = [2.0]\n[oracle]\nlevels = 2\nfock = 4\ncheck_fock = false\n"
    );
    let cfg = write(dir.path(), "s.toml", &text);
    let o = run_with("spectrum", &cfg, dir.path(), &["--engine", "both"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("Fock leakage"), "{}", stderr(&o));
    let fock = column(&dir.path().join("spectrum_oracle.csv"), "fock");
    assert!(fock.iter().all(|n| n == "8"), "{fock:?}");
    let d = floats(&dir.path().join("delta.csv"), "delta_center_mhz");
    assert!(d[0].abs() < 0.5, "{d:?}");
}
