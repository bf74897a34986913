use std::path::PathBuf;
use std::process::Command;

use lcsc_core::fixtures;
use lcsc_tools::format::CategorySpec;
use serde_json::Value;

fn lcsc(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_lcsc")).args(args).output().unwrap();
    let code = out.status.code().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json)
}

fn write(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lcsc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn validate_files() {
    let par = CategorySpec::from_category(&fixtures::par());
    let good = write("par.json", &serde_json::to_string(&par).unwrap());
    let (code, report) = lcsc(&["validate", good.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["tool"], "lcsc");
    assert_eq!(report["input"]["sha256"].as_str().unwrap().len(), 64);

    // f composed with the identity of v returning g breaks the identity law.
    let mut broken = par;
    broken.compose.push(["f".into(), "v".into(), "g".into()]);
    let bad = write("broken.json", &serde_json::to_string(&broken).unwrap());
    let (code, report) = lcsc(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(!report["result"]["violations"].as_array().unwrap().is_empty());

    let junk = write("junk.json", "{\"objects\": [");
    assert_eq!(lcsc(&["validate", junk.to_str().unwrap()]).0, 2);
    assert_eq!(lcsc(&["validate", "/nonexistent/file.json"]).0, 2);
}

#[test]
fn analyze_fixtures() {
    let (code, r) = lcsc(&["analyze", "--fixture", "GROUP(2)", "--groupoid=1"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["groupoids"][0]["germs"], 1);
    let (_, r) = lcsc(&["analyze", "--fixture", "GROUP(2)", "--groupoid=2", "--hausdorff"]);
    assert_eq!(r["result"]["groupoids"][0]["germs"], 2);
    assert_eq!(r["result"]["condition_two"]["holds"], false);
    let (_, r) = lcsc(&["analyze", "--fixture", "PAR", "--boundary", "--spectrum"]);
    assert_eq!(r["result"]["boundary"]["vertices"][0]["count"], 2);
    let (_, r) = lcsc(&["analyze", "--fixture", "KG(4)", "--align"]);
    assert_eq!(r["result"]["alignment"]["max_vee"], 4);
}

#[test]
fn numerics_commands() {
    let (code, r) = lcsc(&["numerics", "--shift-bound", "3"]);
    assert_eq!(code, 0);
    assert!((r["result"]["min_eigenvalue"].as_f64().unwrap() + 0.5).abs() < 1e-9);
    let (code, r) = lcsc(&["numerics", "--separation", "3", "4", "2000", "42"]);
    assert_eq!(code, 0);
    assert!(r["result"]["min_lhs"].as_f64().unwrap() >= 0.25 - 1e-9);
    assert_eq!(lcsc(&["numerics", "--separation", "4", "4", "10", "1"]).0, 2);
    let (code, r) = lcsc(&["numerics", "NSQ(20)", "--wh", "(1,-1)", "20"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["certificate"]["deviation"], 0.0);
    assert_eq!(lcsc(&["numerics"]).0, 2);
}

#[test]
fn identical_runs_identical_bytes() {
    let run = || Command::new(env!("CARGO_BIN_EXE_lcsc")).args(["analyze", "--fixture", "KG(2)", "--spectrum", "--boundary", "--groupoid=2"]).output().unwrap().stdout;
    assert_eq!(run(), run());
}
