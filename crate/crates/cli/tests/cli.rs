use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ss-optics"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn g0_of(text: &str, kind: &str) -> f64 {
    let row = text.lines().find(|l| l.starts_with(kind)).unwrap();
    row.split('\t').nth(5).unwrap().parse().unwrap()
}

#[test]
fn threshold_eta3_prints_reference_gain() {
    let o = run(&[
        "threshold",
        "--eta",
        "3",
        "--a-um",
        "1000",
        "--lambda-um",
        "1",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(format!("{:.3}", g0_of(&text, "exact")), "172.159");
    assert!(text.lines().next().unwrap().contains("g0_cm_inv"));
}

#[test]
fn threshold_eta1_prints_261() {
    let o = run(&[
        "threshold",
        "--eta",
        "1",
        "--a-um",
        "1000",
        "--lambda-um",
        "1",
    ]);
    assert!(o.status.success());
    assert!((g0_of(&stdout(&o), "eta1") - 261.0).abs() < 2.61);
}

#[test]
fn empty_range_exits_1_without_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let o = run(&[
        "sweep",
        "--axis",
        "eta",
        "--range",
        "4:1.01",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn existing_output_needs_force() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("modes.csv");
    std::fs::write(&out, "keep").unwrap();
    let p = out.to_str().unwrap();
    assert_eq!(run(&["modes", "--out", p]).status.code(), Some(1));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "keep");
    assert!(run(&["modes", "--out", p, "--force"]).status.success());
    assert!(std::fs::read_to_string(&out)
        .unwrap()
        .starts_with("m,K0,lambda0_um\n"));
}

fn sweep_bytes(dir: &Path, name: &str, threads: &str) -> Vec<u8> {
    let out = dir.join(name);
    let o = Command::new(env!("CARGO_BIN_EXE_ss-optics"))
        .env("SS_OPTICS_THREADS", threads)
        .args([
            "sweep",
            "--axis",
            "eta",
            "--range",
            "1.01:4",
            "--points",
            "24",
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read(out).unwrap()
}

#[test]
fn sweeps_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = sweep_bytes(dir.path(), "a.csv", "1");
    let b = sweep_bytes(dir.path(), "b.csv", "3");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("abscissa,g0_cm_inv,kappa0,K0,residual\n"));
    assert_eq!(text.lines().count(), 25);
    assert!(!text.contains("nan"));
}

#[test]
fn lambda_sweep_over_modes() {
    let o = run(&[
        "sweep",
        "--axis",
        "lambda",
        "--eta",
        "1",
        "--modes",
        "900:910",
        "--asymptotic",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 12);
}

#[test]
fn bad_thread_count_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_ss-optics"))
        .env("SS_OPTICS_THREADS", "zero")
        .args([
            "sweep", "--axis", "eta", "--range", "1.5:2", "--points", "3",
        ])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn profile_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("p.json");
    std::fs::write(
        &profile,
        r#"{"a_um": 1000, "eta": 1, "kappa": 0, "sigma": 0}"#,
    )
    .unwrap();
    let p = profile.to_str().unwrap();
    let o = run(&["--profile", p, "threshold"]);
    assert!(stdout(&o).lines().any(|l| l.starts_with("eta1")));
    let o = run(&["--profile", p, "--eta", "3", "threshold"]);
    assert!(stdout(&o).lines().any(|l| l.starts_with("general")));

    std::fs::write(
        &profile,
        r#"{"a_um": 1000, "eta": 1, "kappa": 0, "sigma": 0, "extra": 1}"#,
    )
    .unwrap();
    assert_eq!(run(&["--profile", p, "threshold"]).status.code(), Some(1));
    std::fs::write(
        &profile,
        r#"{"a_um": 1000, "eta": 5, "kappa": 0, "sigma": 0}"#,
    )
    .unwrap();
    assert_eq!(run(&["--profile", p, "threshold"]).status.code(), Some(1));
    assert_eq!(run(&["--set", "width=2", "modes"]).status.code(), Some(1));
}

#[test]
fn write_profile_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.json");
    let o = run(&[
        "--eta",
        "2.5",
        "--sigma",
        "0.1",
        "--write-profile",
        out.to_str().unwrap(),
        "modes",
    ]);
    assert!(o.status.success());
    let o = run(&["--profile", out.to_str().unwrap(), "threshold"]);
    let text = stdout(&o);
    let row = text.lines().find(|l| l.starts_with("exact")).unwrap();
    let m: u32 = row.split('\t').nth(1).unwrap().parse().unwrap();
    assert_eq!(m, 2500);
}

#[test]
fn emission_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("e.csv");
    let coef = dir.path().join("c.json");
    let o = run(&[
        "emission",
        "--sigma",
        "1e-3",
        "--modes",
        "2500:3500:500",
        "--out",
        curve.to_str().unwrap(),
        "--coef-out",
        coef.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&curve).unwrap();
    assert!(text.starts_with("g_cm_inv,intensity,dlambda_um\n"));
    assert_eq!(text.lines().count(), 12);
    let rows: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&coef).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1]["m"], 3000);
    assert!(rows[1]["A_coef"].as_f64().unwrap() > 0.0);
}

#[test]
fn emission_without_kerr_is_rejected() {
    assert_eq!(run(&["emission"]).status.code(), Some(1));
}

#[test]
fn oracle_check_linear_suite_passes() {
    let o = run(&["oracle-check", "--cases", "3", "--skip-nonlinear"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 3);
}
