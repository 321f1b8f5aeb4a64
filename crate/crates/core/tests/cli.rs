use std::process::{Command, Output};

fn adshor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adshor"))
        .args(args)
        .env_remove("ADSHOR_MAX_QUBITS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn codewords_json_shape() {
    let out = adshor(&["codewords", "--w", "1", "--K", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "codewords");
    assert!(v["rows"].as_array().unwrap().len() > 8);
    assert!(v["failures"].as_array().unwrap().is_empty());
    for row in v["rows"].as_array().unwrap() {
        for key in ["spec", "gamma", "metric", "value", "tolerance", "pass"] {
            assert!(row.get(key).is_some(), "{key}");
        }
    }
}

#[test]
fn csv_header_and_determinism() {
    let args = [
        "fidelity", "--w", "1", "--K", "1", "--gamma-grid", "0.01,0.003,0.001", "--seed", "5", "--format", "csv",
    ];
    let a = adshor(&args);
    let b = adshor(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("spec,gamma,metric,value,tolerance,pass"));
}

#[test]
fn every_table_reproduces() {
    for t in ["I", "II", "III", "IV", "V", "VI", "VII"] {
        let out = adshor(&["repro", t, "--gamma", "0.01"]);
        assert_eq!(out.status.code(), Some(0), "table {t}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn other_commands_run() {
    for args in [
        vec!["stabilizers", "--w", "2", "--K", "2"],
        vec!["table", "--w", "1", "--K", "2"],
        vec!["rates"],
        vec!["verify-aqec", "--w", "1", "--K", "1"],
        vec!["verify-aqec", "--w", "1", "--K", "1", "--dual-rail"],
    ] {
        let out = adshor(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn failed_checks_exit_one() {
    // the residual of the (2,2) code falls off with exponent 2, not 3
    let out = adshor(&["verify-aqec", "--w", "2", "--K", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!json(&out)["failures"].as_array().unwrap().is_empty());
}

#[test]
fn invalid_configs_exit_two() {
    for args in [
        vec!["codewords", "--w", "3", "--K", "3", "--dual-rail"],
        vec!["fidelity", "--trajectories", "100000"],
        vec!["fidelity", "--gamma", "1.5"],
        vec!["fidelity", "--rounds", "0"],
        vec!["fidelity", "--cutoff", "9"],
    ] {
        let out = adshor(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn writes_to_out_file() {
    let path = std::env::temp_dir().join(format!("adshor-cli-{}.json", std::process::id()));
    let out = adshor(&["rates", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["command"], "rates");
}
