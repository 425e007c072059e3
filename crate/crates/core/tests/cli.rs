use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperconnect"))
}

#[test]
fn digits_from_environment() {
    let out = bin().env("HYPERCONNECT_DIGITS", "35").args(["analyze", "quartic"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["digits"], 35);
    assert_eq!(v["result"]["beta"], "1/2");
    let out = bin().env("HYPERCONNECT_DIGITS", "lots").args(["analyze", "quartic"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn equation_file_and_oracle_only() {
    let dir = std::env::temp_dir().join(format!("hyperconnect-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("n5.json");
    std::fs::write(&path, r#"{"alpha": ["1/6","1/3","1/2","2/3","5/6"], "gamma": ["0","0","0","0"]}"#).unwrap();
    let out = bin().args(["--digits", "30", "connect"]).arg(&path).args(["--method", "closed"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "hyperconnect/1");
    assert!(v["error"].as_str().unwrap().contains("oracle"));

    let out = bin().args(["--digits", "30", "connect"]).arg(&path).args(["--method", "oracle", "--order", "300"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["oracle"]["matrix"].as_array().unwrap().len(), 5);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn reproduce_quartic_passes() {
    let out = bin().args(["reproduce", "quartic"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn frobenius_rationals() {
    let out = bin().args(["frobenius", "quartic", "--point", "0", "--order", "6", "--preset", "quartic"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["columns"][0]["coeffs"][0][1], "3/32");
}
