//! End-to-end checks of the binary: exit codes, certificate round trips, and
//! byte-identical reruns.

use std::process::{Command, Output};

fn signdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_signdeg"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn degthr_majority() {
    let out = signdeg(&["degthr", "--family", "maj", "--n", "3"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1");
}

#[test]
fn degthr_parity_with_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let primal = dir.path().join("p.txt");
    let witness = dir.path().join("w.txt");
    let out = signdeg(&[
        "degthr",
        "--family",
        "parity",
        "--n",
        "2",
        "--primal-out",
        primal.to_str().unwrap(),
        "--witness-out",
        witness.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "2");
    assert!(primal.exists() && witness.exists());
    // the emitted dual witness re-verifies through the checker
    let check = signdeg(&[
        "witness",
        "--family",
        "parity",
        "--n",
        "2",
        "--check",
        witness.to_str().unwrap(),
    ]);
    assert!(check.status.success());
    assert!(String::from_utf8_lossy(&check.stdout).contains("verified"));
}

#[test]
fn witness_emit_check_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.txt");
    let out = signdeg(&[
        "witness",
        "--family",
        "parity",
        "--n",
        "2",
        "--degree",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let check = signdeg(&[
        "witness",
        "--family",
        "parity",
        "--n",
        "2",
        "--check",
        path.to_str().unwrap(),
    ]);
    assert!(check.status.success());
}

#[test]
fn rbracket_parity() {
    let out = signdeg(&[
        "rbracket",
        "--family",
        "parity",
        "--n",
        "2",
        "--degree",
        "1",
        "--precision",
        "1/8",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("lower=") && text.contains("upper="));
}

#[test]
fn usage_error_exits_2() {
    // missing function selector is a parse error mapped to exit 2
    let out = signdeg(&["degthr"]);
    assert_eq!(out.status.code(), Some(2));
    let unknown = signdeg(&["no-such-command"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn maj_table_csv() {
    let out = signdeg(&["maj-table", "--n", "4", "--d", "1,4", "--precision", "1/8"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,d,criterion_lower,bisect_lower,bisect_upper,construction_upper,methods"
    );
    // d = n row brackets to [0,0]
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("4,4,"));
    assert!(last.contains(",0,0,"));
}

#[test]
fn density_parity() {
    let out = signdeg(&["density", "--family", "parity", "--n", "2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with('1'));
}

#[test]
fn hs_cert_runs() {
    let out = signdeg(&["hs-cert", "--n", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("delta") && text.contains("implied_bound"));
}

#[test]
fn suite_single_criterion_is_deterministic() {
    let run = || signdeg(&["suite", "acceptance", "--only", "4"]);
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "outputs differ between runs");
    assert!(String::from_utf8_lossy(&a.stdout).contains("PASS [ 4]"));
}

#[test]
fn run_config_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    let out_path = dir.path().join("out.csv");
    let cfg = format!(
        r#"{{"schema": 1, "command": "maj-table", "sizes": [4], "degrees": [4],
            "precision": "1/8", "output": {:?}, "format": "csv"}}"#,
        out_path.to_str().unwrap()
    );
    std::fs::write(&cfg_path, cfg).unwrap();
    let out = signdeg(&["run-config", cfg_path.to_str().unwrap()]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&out_path).unwrap();
    assert!(csv.starts_with("n,d,"));
}

#[test]
fn file_based_function() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fn.json");
    std::fs::write(
        &path,
        r#"{"points": [["0","0"],["0","1"],["1","0"],["1","1"]], "values": [1,-1,-1,-1]}"#,
    )
    .unwrap();
    let out = signdeg(&["degthr", "--file", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1");
}
