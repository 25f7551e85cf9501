use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coarse-geom"))
        .args(args)
        .env_remove("COARSE_GEOM_MAX_BALL_SIZE")
        .env_remove("COARSE_GEOM_MAX_SEARCH_NODES")
        .env_remove("COARSE_GEOM_MAX_LOOP_LENGTH")
        .output()
        .unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn exit_codes_follow_the_verdict() {
    assert_eq!(run(&["contract", "--circle", "9", "--scale", "3"]).status.code(), Some(0));
    assert_eq!(run(&["contract", "--circle", "10", "--scale", "3"]).status.code(), Some(1));
    assert_eq!(run(&["rips", "--family", "no-such-group"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn negative_contraction_carries_a_winding_certificate() {
    let out = run(&["contract", "--circle", "10", "--scale", "3"]);
    let r = report(&out);
    assert_eq!(r["verdict"], "fail");
    assert_eq!(r["certificates"][0]["kind"], "winding");
}

#[test]
fn loop_cap_beyond_the_configured_limit_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("caps.conf");
    std::fs::write(&cfg, "max_loop_length = 6\n").unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "sc-probe", "--circle", "9", "--r", "1", "--scale", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(report(&out)["verdict"], "inconclusive");
}

#[test]
fn reports_are_deterministic() {
    let a = run(&["scenario", "circle-3r"]);
    let b = run(&["scenario", "circle-3r"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_round_trip_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["--out", path.to_str().unwrap(), "scenario", "factorial-z"]);
    assert_eq!(out.status.code(), Some(0));
    let verified = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(verified.status.code(), Some(0));

    let mut r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let witness = r["certificates"][0]["obstruction"]["witness"].as_array_mut().unwrap();
    witness[0] = Value::from(witness[0].as_i64().unwrap() + 1);
    std::fs::write(&path, serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(run(&["verify", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn circle_table_is_written_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("table.csv");
    let out = run(&["--csv", csv.to_str().unwrap(), "scenario", "circle-3r"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 12 * 4);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn qi_transfer_reports_the_formulas() {
    let out = run(&["qi-transfer", "--A", "2", "--B", "1", "--alpha", "2", "--beta", "1", "--C", "3", "--r", "4", "--R", "9", "--rho", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["summary"]["r_prime"], "9");
    assert_eq!(r["summary"]["rho_prime"], "22");
}
