//! End-to-end checks of the command-line surface: formats, exit codes,
//! and determinism across runs and worker counts.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_topograd"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn density_profile_of_c6() {
    let dir = tempfile::tempdir().unwrap();
    let c6 = dir.path().join("c6.el");
    let status = run(&["gen", "cycle", "--n", "6", "-o", c6.to_str().unwrap()]);
    assert!(status.status.success());

    let out = run(&["density", c6.to_str().unwrap(), "--kmax", "1"]);
    assert!(out.status.success());
    let csv = stdout(&out);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("k,nabla"));
    assert_eq!(lines[1], "0,2,true,2,true,2,true");
    assert_eq!(lines[2], "1,2,true,2,true,2,true");
}

#[test]
fn find_verify_round_trip_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let c6 = dir.path().join("c6.el");
    let k3 = dir.path().join("k3.el");
    let witness = dir.path().join("w.json");
    run(&["gen", "cycle", "--n", "6", "-o", c6.to_str().unwrap()]);
    run(&["gen", "complete", "--n", "3", "-o", k3.to_str().unwrap()]);

    let out = run(&[
        "find",
        c6.to_str().unwrap(),
        "--pattern",
        k3.to_str().unwrap(),
        "--k",
        "1",
        "--mode",
        "atmost",
        "--occurrence",
        "subgraph",
        "-o",
        witness.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let out = run(&[
        "verify",
        "--witness",
        witness.to_str().unwrap(),
        "--graph",
        c6.to_str().unwrap(),
        "--pattern",
        k3.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "[]");

    // tamper: point one path vertex out of range
    let text = std::fs::read_to_string(&witness).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["paths"][0][1] = serde_json::json!(99);
    write(&witness, &serde_json::to_string(&doc).unwrap());
    let out = run(&[
        "verify",
        "--witness",
        witness.to_str().unwrap(),
        "--graph",
        c6.to_str().unwrap(),
        "--pattern",
        k3.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("vertex_out_of_range"));
}

#[test]
fn find_reports_none() {
    let dir = tempfile::tempdir().unwrap();
    let c6 = dir.path().join("c6.el");
    let k3 = dir.path().join("k3.el");
    run(&["gen", "cycle", "--n", "6", "-o", c6.to_str().unwrap()]);
    run(&["gen", "complete", "--n", "3", "-o", k3.to_str().unwrap()]);
    let out = run(&[
        "find",
        c6.to_str().unwrap(),
        "--pattern",
        k3.to_str().unwrap(),
        "--k",
        "0",
        "--mode",
        "atmost",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "none");
}

#[test]
fn pipeline_exit_codes_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let k10 = dir.path().join("k10.el");
    let host = dir.path().join("sub.el");
    run(&["gen", "complete", "--n", "10", "-o", k10.to_str().unwrap()]);
    let lengths = vec!["1"; 45].join(",");
    let out = run(&[
        "gen",
        "subdivision",
        "--pattern",
        k10.to_str().unwrap(),
        "--lengths",
        &lengths,
        "-o",
        host.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let mut versions = Vec::new();
    for workers in ["1", "3"] {
        let out = run(&[
            "--workers",
            workers,
            "pipeline",
            host.to_str().unwrap(),
            "--k",
            "1",
            "--r",
            "1",
            "--s",
            "4",
            "--relaxed",
            "--seed-pattern",
            k10.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
        versions.push(stdout(&out));
    }
    assert_eq!(versions[0], versions[1], "certificates differ across worker counts");
    let cert: serde_json::Value = serde_json::from_str(&versions[0]).unwrap();
    assert_eq!(cert["outcome"]["status"], "completed");
    assert_eq!(cert["outcome"]["average_degree"], "9");
    assert_eq!(cert["stages"].as_array().unwrap().len(), 10);

    // halted run: C6 cannot carry the seed inequality
    let c6 = dir.path().join("c6.el");
    run(&["gen", "cycle", "--n", "6", "-o", c6.to_str().unwrap()]);
    let out = run(&[
        "pipeline",
        c6.to_str().unwrap(),
        "--k",
        "1",
        "--r",
        "3",
        "--s",
        "2",
        "--relaxed",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["outcome"]["status"], "halted");
    assert_eq!(cert["outcome"]["stage"], "H1");
}

#[test]
fn bounds_bexp_table() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    write(&f, r#"["1","1"]"#);
    let out = run(&["bounds", "--mode", "bexp", "--f", f.to_str().unwrap(), "--kmax", "1"]);
    assert!(out.status.success());
    let table: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = table["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["value"], "1");
    assert_eq!(rows[1]["value"].as_str().unwrap(), num_one_shl_270());
}

/// Decimal digits of 1 + 2^270, built with schoolbook doubling so the test
/// does not lean on the library under test.
fn num_one_shl_270() -> String {
    let mut digits = vec![1u8]; // little-endian decimal of 2^0
    for _ in 0..270 {
        let mut carry = 0;
        for d in digits.iter_mut() {
            let v = *d * 2 + carry;
            *d = v % 10;
            carry = v / 10;
        }
        if carry > 0 {
            digits.push(carry);
        }
    }
    digits[0] += 1; // 2^270 ends in 4, no carry
    digits.iter().rev().map(|d| (b'0' + d) as char).collect()
}

#[test]
fn bounds_nd_and_main1_modes() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("fnd.json");
    write(
        &f,
        r#"[{"k":0,"n":5,"value":"1"},{"k":1,"n":5,"value":"1"},
           {"k":0,"n":9,"value":"1"},{"k":1,"n":9,"value":"1"}]"#,
    );
    let out = run(&["bounds", "--mode", "nd", "--f", f.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let table: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = table["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    // constant f reduces to the bounded-expansion value at every size
    assert_eq!(rows[1]["value"], rows[3]["value"]);
    assert_eq!(rows[1]["value"].as_str().unwrap(), num_one_shl_270());

    let k5 = dir.path().join("k5.el");
    run(&["gen", "complete", "--n", "5", "-o", k5.to_str().unwrap()]);
    let out = run(&[
        "bounds",
        "--mode",
        "main1",
        "--pattern",
        k5.to_str().unwrap(),
        "--s",
        "3",
        "--c",
        "1",
        "--d",
        "10",
        "--kmax",
        "2",
    ]);
    assert!(out.status.success());
    let table: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = table["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["value"], "10");
}

#[test]
fn planted_generator_witness_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = dir.path().join("k4.el");
    let host = dir.path().join("host.el");
    let witness = dir.path().join("w.json");
    run(&["gen", "complete", "--n", "4", "-o", k4.to_str().unwrap()]);
    let out = run(&[
        "gen",
        "planted",
        "--pattern",
        k4.to_str().unwrap(),
        "--k",
        "2",
        "--noise-vertices",
        "2",
        "--noise-prob",
        "0.1",
        "--seed",
        "5",
        "-o",
        host.to_str().unwrap(),
        "--witness-out",
        witness.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&[
        "verify",
        "--witness",
        witness.to_str().unwrap(),
        "--graph",
        host.to_str().unwrap(),
        "--pattern",
        k4.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "planted witness must verify");
}

#[test]
fn trend_over_cycle_family() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("family");
    std::fs::create_dir(&fam).unwrap();
    for n in [4usize, 6, 8] {
        let path = fam.join(format!("c{n}.el"));
        run(&["gen", "cycle", "--n", &n.to_string(), "-o", path.to_str().unwrap()]);
    }
    let out = run(&["trend", "--family", fam.to_str().unwrap(), "--k", "1"]);
    assert!(out.status.success());
    let trend: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(trend["hint"], "flat");
    assert_eq!(trend["points"].as_array().unwrap().len(), 3);
}

#[test]
fn filtered_family_files() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = dir.path().join("k4.el");
    let fam = dir.path().join("members");
    run(&["gen", "complete", "--n", "4", "-o", k4.to_str().unwrap()]);
    let out = run(&[
        "gen",
        "filtered",
        "--pattern",
        k4.to_str().unwrap(),
        "--s",
        "3",
        "--n",
        "6",
        "--count",
        "3",
        "--seed",
        "11",
        "-o",
        fam.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let mut names: Vec<String> = std::fs::read_dir(&fam)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, vec!["member_000.el", "member_001.el", "member_002.el"]);
}

#[test]
fn errors_are_machine_readable() {
    let out = run(&["density", "/nonexistent/file.el", "--kmax", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert!(err["error"].is_string());
}
