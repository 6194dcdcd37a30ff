use std::process::Command;

fn pqt(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pqt"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn sweep_csv_has_header_and_rows() {
    let (code, out) = pqt(&["sweep", "--points", "3", "--depths", "0,1"]);
    assert_eq!(code, 0);
    let lines: Vec<_> = out.lines().collect();
    assert!(lines[0].starts_with("c,chi,depth,strategy"), "{}", lines[0]);
    assert_eq!(lines.len(), 1 + 3 * 2);
}

#[test]
fn maf_json_parses() {
    let (code, out) = pqt(&[
        "maf",
        "--points",
        "2",
        "--depths",
        "1",
        "--strategy",
        "matched-vnm",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn run_reports_and_samples() {
    let (code, out) = pqt(&[
        "run", "--a", "0.6", "--b", "0.8i", "--c", "0.7", "--depth", "2", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["branches"].as_array().unwrap().len() > 4);
    let args = [
        "run", "--c", "0.7", "--mode", "sample", "--trials", "5000", "--seed", "3", "--format",
        "json",
    ];
    let (_, first) = pqt(&args);
    let (_, second) = pqt(&[&args[..], &["--jobs", "1"]].concat());
    assert_eq!(first, second);
}

#[test]
fn invalid_input_exits_with_two() {
    assert_eq!(pqt(&["sweep", "--c-min", "0.9", "--c-max", "0.1"]).0, 2);
    assert_eq!(pqt(&["run", "--chi", "2.0"]).0, 2);
    assert_eq!(pqt(&["maf", "--format", "xml"]).0, 2);
}

#[test]
fn capacity_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_pqt"))
        .args(["run", "--c", "0.5"])
        .env("PQT_MAX_QUBITS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("capacity"));
}
