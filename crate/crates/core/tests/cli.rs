use std::path::PathBuf;
use std::process::{Command, Output};

use sdres::report::StructuredReport;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn sdres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdres")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("sdres-cli-{}-{name}", std::process::id()))
}

#[test]
fn json_is_byte_stable_and_round_trips() {
    let golden = data("golden.sys");
    let a = sdres(&["resultant", golden.to_str().unwrap(), "--format", "json"]);
    let b = sdres(&["resultant", golden.to_str().unwrap(), "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let parsed: StructuredReport = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", text);
    assert_eq!(parsed.modified_jacobi, Some(vec![3, 2, 2]));
    assert_eq!(parsed.resultant.unwrap().terms.len(), 26);
    assert!(!text.contains("null"));
}

#[test]
fn subcommands_stop_early() {
    let golden = data("golden.sys");
    let check = stdout(&sdres(&["check", golden.to_str().unwrap()]));
    assert!(check.contains("rank: 4"));
    assert!(!check.contains("super-essential"));
    let bounds = stdout(&sdres(&["bounds", golden.to_str().unwrap()]));
    assert!(bounds.contains("modified bounds: (3, 2, 2)"));
    assert!(!bounds.contains("SR ("));
    let sup: serde_json::Value = serde_json::from_str(&stdout(&sdres(&["super", golden.to_str().unwrap(), "--format", "json"]))).unwrap();
    assert_eq!(sup["super_essential"], serde_json::json!([0, 1, 2]));
    assert!(sup.get("jacobi").is_none());
}

#[test]
fn out_file_and_keep() {
    let out = temp("keep.json");
    let o = sdres(&["bounds", data("golden.sys").to_str().unwrap(), "--keep", "1,2", "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let _ = std::fs::remove_file(&out);
    assert_eq!(v["kept_vars"], serde_json::json!([1, 2]));
}

#[test]
fn input_errors_exit_one() {
    let bad = temp("bad.sys");
    std::fs::write(&bad, "P0 = u + u*y[1,0]\nP2 = u\n").unwrap();
    let o = sdres(&["check", bad.to_str().unwrap()]);
    let _ = std::fs::remove_file(&bad);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert_eq!(sdres(&["check", "/nonexistent/system.sys"]).status.code(), Some(1));
}

#[test]
fn verbose_prints_matrices() {
    let o = stdout(&sdres(&["resultant", data("toy.sys").to_str().unwrap(), "--verbose"]));
    assert!(o.contains("M1 ="));
    assert!(o.contains("SR (2 terms"));
}
