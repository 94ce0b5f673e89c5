use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn trr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trr")).args(args).env_remove("TRR_JOBS").output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("trr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(path: &PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn d_prints_a_rational() {
    let o = trr(&["d", "--g", "2", "--k", "1", "--l", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-2/7");
    let o = trr(&["d", "--g", "35", "--k", "22", "--l", "1,11,1"]);
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn usage_errors_exit_one_without_output() {
    let out = scratch("usage.json");
    let p = out.to_str().unwrap();
    for args in [
        vec!["d", "--g", "2", "--kk", "1", "--out", p],
        vec!["d", "--g", "2", "--k", "2", "--l", "1", "--out", p],
        vec!["scan", "--g-min", "5", "--g-max", "2", "--out", p],
        vec!["principal", "--g", "7", "--k", "3", "--l", "2,1,1", "--out", p],
    ] {
        let o = trr(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(!out.exists(), "{args:?} left a file");
    }
    let o = trr(&["principal", "--g", "7", "--k", "3", "--l", "2,1,1"]);
    assert!(stderr(&o).contains("g7"));
}

#[test]
fn guard_exits_two() {
    let o = trr(&["omega", "--g", "3", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--allow-large"));
    let o = trr(&["pixton", "--g", "3", "--n", "2", "--a", "1,-1", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_carry_a_verifiable_manifest() {
    let a = scratch("scan-a.json");
    let b = scratch("scan-b.json");
    let o = trr(&["scan", "--g-min", "1", "--g-max", "8", "--out", a.to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_trr"))
        .args(["scan", "--g-min", "1", "--g-max", "8", "--out", b.to_str().unwrap()])
        .env("TRR_JOBS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let (ja, jb) = (read_json(&a), read_json(&b));
    assert_eq!(ja["result"].to_string(), jb["result"].to_string());
    assert_eq!(ja["manifest"]["result_digest"], jb["manifest"]["result_digest"]);
    assert_eq!(ja["manifest"]["workers"], 2);
    assert_eq!(jb["manifest"]["workers"], 1);
    assert_eq!(ja["manifest"]["command"], "scan");
    assert_eq!(ja["result"]["zeros"][0], serde_json::json!([7, 4, 3, [1, 1, 2]]));
    assert!(ja["manifest"]["conventions"]["n"].is_string());

    let o = trr(&["check", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut tampered = ja.clone();
    tampered["result"]["cells_checked"] = serde_json::json!(0);
    std::fs::write(&a, tampered.to_string()).unwrap();
    let o = trr(&["check", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn principal_echoes_both_orders() {
    let out = scratch("principal.json");
    let o = trr(&["principal", "--g", "5", "--k", "2", "--l", "2,1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let j = read_json(&out);
    assert_eq!(j["manifest"]["parameters"]["l_input"], serde_json::json!([2, 1]));
    assert_eq!(j["manifest"]["parameters"]["l_sorted"], serde_json::json!([1, 2]));
    assert_eq!(j["result"]["n"], 3);
    let o = trr(&["principal", "--g", "5", "--k", "2", "--l", "2,1", "--pretty"]);
    assert!(stdout(&o).contains("principal part:"));
}

#[test]
fn verification_commands_pass() {
    let o = trr(&["verify-lemmas", "--g", "1", "--n", "2", "--b", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let j: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["result"]["pass"], true);
    let o = trr(&["g7", "--pretty"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("scalar 3/8"));
}

#[test]
fn unwritable_output_fails() {
    let o = trr(&["d", "--g", "2", "--k", "1", "--l", "1", "--out", "/nonexistent-dir/x.json"]);
    assert_ne!(o.status.code(), Some(0));
}
