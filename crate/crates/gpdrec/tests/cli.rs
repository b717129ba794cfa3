//! Drive the installed binary end to end: exit codes, determinism of
//! machine reports, and the witness verification loop.

use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn gpdrec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpdrec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn exit_codes_follow_the_contract() {
    // 0: all properties hold
    let ok = gpdrec(&["units", "--ring", "mod4", "--group", "cyclic2"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout_of(&ok).contains("unit_count: 8"));
    assert!(stdout_of(&ok).contains("trivial_count: 4"));

    // 1: property failed, with witness
    let fail = gpdrec(&["lbh", &corpus("c2.json"), "--ring", "mod4"]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(stdout_of(&fail).contains("holds: false"));

    // 2: invalid input
    let bad = gpdrec(&["check-ring", "--ring", "mod1"]);
    assert_eq!(bad.status.code(), Some(2));

    // 3: capacity exceeded
    let cap = gpdrec(&[
        "--cap", "10", "units", "--ring", "mod4", "--group", "cyclic4",
    ]);
    assert_eq!(cap.status.code(), Some(3));
}

#[test]
fn machine_reports_are_byte_identical() {
    let args = [
        "--format",
        "machine",
        "normalizer",
        &corpus("pair2.json"),
        "--ring",
        "mod4",
    ];
    let a = gpdrec(&args);
    let b = gpdrec(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout_of(&a);
    assert!(text.contains("\"n_size\""));
}

#[test]
fn lbh_witness_verifies_independently() {
    let dir = std::env::temp_dir().join(format!("gpdrec_cli_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let report_path = dir.join("lbh_report.json");

    let fail = gpdrec(&["--format", "machine", "lbh", &corpus("c2_mod4.json")]);
    assert_eq!(fail.status.code(), Some(1));
    std::fs::write(&report_path, &fail.stdout).unwrap();

    let verify = gpdrec(&["verify-witness", report_path.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
    assert!(stdout_of(&verify).contains("witness_valid: true"));

    // tampering with the witness invalidates it
    let mut report: serde_json::Value =
        serde_json::from_slice(&fail.stdout).expect("machine report is JSON");
    report["witness"]["m"] = serde_json::json!([1, 1]);
    std::fs::write(&report_path, serde_json::to_string(&report).unwrap()).unwrap();
    let verify = gpdrec(&["verify-witness", report_path.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn scramble_reconstruct_roundtrip_via_files() {
    let dir = std::env::temp_dir().join(format!("gpdrec_cli_rt_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let pres: PathBuf = dir.join("scrambled.json");
    let emitted: PathBuf = dir.join("recovered.json");

    let s = gpdrec(&[
        "scramble",
        &corpus("leavitt_a2.json"),
        "--ring",
        "mod2",
        "--seed",
        "9",
        "--out",
        pres.to_str().unwrap(),
    ]);
    assert_eq!(s.status.code(), Some(0));

    let r = gpdrec(&[
        "reconstruct",
        pres.to_str().unwrap(),
        "--emit",
        emitted.to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(0), "{}", stdout_of(&r));
    assert!(stdout_of(&r).contains("arrows: 4"));

    // the emitted groupoid parses as a fresh instance
    let info = gpdrec(&["groupoid-info", emitted.to_str().unwrap(), "--ring", "mod2"]);
    assert_eq!(info.status.code(), Some(0));
    assert!(stdout_of(&info).contains("graded: true"));

    // the documented hard error on the failing instance
    let s2 = gpdrec(&[
        "scramble",
        &corpus("c2_mod4.json"),
        "--seed",
        "3",
        "--out",
        pres.to_str().unwrap(),
    ]);
    assert_eq!(s2.status.code(), Some(0));
    let r2 = gpdrec(&["reconstruct", pres.to_str().unwrap()]);
    assert_eq!(r2.status.code(), Some(1));
    assert!(stdout_of(&r2).contains("witness"));

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn roundtrip_command_matches_spec_examples() {
    let rt = gpdrec(&[
        "roundtrip",
        &corpus("pair2.json"),
        "--ring",
        "mod2",
        "--seeds",
        "5",
    ]);
    assert_eq!(rt.status.code(), Some(0));
    assert_eq!(stdout_of(&rt).matches("recovered").count(), 5);

    let lb = gpdrec(&["lbh", &corpus("c2.json"), "--ring", "mod4"]);
    assert_eq!(lb.status.code(), Some(1));
    // witness is 1+2g in the opaque basis
    assert!(stdout_of(&lb).contains("witness: b0+2·b1"));

    let un = gpdrec(&["units", "--ring", "mod4", "--group", "cyclic2"]);
    assert!(stdout_of(&un).contains("unit_count: 8"));
    assert!(stdout_of(&un).contains("trivial_count: 4"));
}

#[test]
fn germ_command_builds_graded_germ_groupoid() {
    let g = gpdrec(&[
        "germ",
        &corpus("semigroup_c2zero.json"),
        &corpus("action_c2_point.json"),
    ]);
    assert_eq!(g.status.code(), Some(0));
    let text = stdout_of(&g);
    assert!(text.contains("germ_arrows: 2"));
    assert!(text.contains("graded: true"));
}

#[test]
fn leavitt_command_reports() {
    let l = gpdrec(&[
        "leavitt",
        &corpus("graph_chain3.json"),
        "--ring",
        "mod4",
        "--verify-ck",
        "--hypothesis",
    ]);
    assert_eq!(l.status.code(), Some(0));
    let text = stdout_of(&l);
    assert!(text.contains("ck_relations: pass"));
    assert!(text.contains("reconstruction_applies: true"));
}
