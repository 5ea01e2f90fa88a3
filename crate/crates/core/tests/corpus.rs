mod common;

use std::process::Command;

use paracontact::frontend::{catalog::catalog_sessions, parse_session};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_paracontact"))
}

#[test]
fn corpus_parses_round_trips_and_passes() {
    assert_eq!(common::corpus_runs().unwrap(), 6);
}

#[test]
fn json_reports_are_reproducible() {
    common::json_deterministic().unwrap();
}

#[test]
fn corpus_exercises_every_production() {
    common::productions_covered().unwrap();
}

#[test]
fn cli_check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = common::corpus_dir().join("normality.para");
    let out = bin().args(["check", ok.to_str().unwrap(), "--format", "json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["passed"], true);
    assert_eq!(json["seed"], common::SEED);

    // Dropping the expect-fail marker turns an expected failure into a real one.
    let text = std::fs::read_to_string(&ok)
        .unwrap()
        .replace("check normal S2 via both expect fail", "check normal S2 via both");
    let failing = dir.path().join("failing.para");
    std::fs::write(&failing, text).unwrap();
    let out = bin().args(["check", failing.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAILED"), "{stdout}");

    let broken = dir.path().join("broken.para");
    std::fs::write(&broken, "manifold R3 coords x y z\ncheck apc nowhere\n").unwrap();
    let out = bin().args(["check", broken.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nowhere"));

    let out = bin().args(["check", dir.path().join("missing.para").to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cli_parse_prints_a_reparsable_session() {
    let path = common::corpus_dir().join("definitions.para");
    let out = bin().args(["parse", path.to_str().unwrap(), "--print"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let printed = parse_session(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let mut original = common::load(&path).unwrap();
    original.name = printed.name.clone();
    assert_eq!(printed, original);
}

#[test]
fn cli_catalog_writes_session_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().args(["catalog", "--write", dir.path().to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("S0: chart R3 (x y z)"), "{stdout}");
    for s in catalog_sessions().unwrap() {
        let path = dir.path().join(format!("{}.para", s.name));
        let out = bin().args(["check", path.to_str().unwrap()]).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    }
}
