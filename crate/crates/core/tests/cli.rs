//! Runs the `invhilb` binary and checks exit codes, JSON shape and determinism.

use std::process::Command;

use serde_json::Value;

fn invhilb(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_invhilb")).args(args).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let doc = serde_json::from_str(&text).unwrap_or(Value::String(text));
    (doc, out.status.code().unwrap())
}

#[test]
fn envelope_and_success() {
    let (doc, code) = invhilb(&["dim", "G2", "1,0"]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "ok");
    assert!(doc["payload"] == 7 || doc["payload"] == 14);
    assert_eq!(doc["provenance"]["command"], "dim G2 1,0");
    assert!(doc["provenance"]["version"].is_string());
}

#[test]
fn exit_codes() {
    assert_eq!(invhilb(&["no-such-command"]).1, 2);
    assert_eq!(invhilb(&["tensor", "A2", "1,0"]).1, 2);
    assert_eq!(invhilb(&["dim", "A2", "1,-1"]).1, 3);
    assert_eq!(invhilb(&["--truncation", "8", "orbit-law", "x^4+x^2*y^2", "4"]).1, 3);
    assert_eq!(invhilb(&["--cap", "5", "tensor", "A2", "2,2", "2,2"]).1, 4);
    assert_eq!(invhilb(&["--help"]).1, 0);
}

#[test]
fn deterministic_output() {
    let args = ["--truncation", "8", "orbit-law", "x^2+y^2", "2"];
    let a = Command::new(env!("CARGO_BIN_EXE_invhilb")).args(args).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_invhilb")).args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn law_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("invhilb-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (doc, code) = invhilb(&["--truncation", "8", "orbit-law", "x^2+y^2", "2"]);
    assert_eq!(code, 0);
    let path = dir.join("law.json");
    std::fs::write(&path, doc["payload"].to_string()).unwrap();
    let (rm, code) = invhilb(&["root-monoid", "--law", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(rm["payload"]["monoid"]["generators"], serde_json::json!([[2]]));

    let sys = dir.join("system.txt");
    let (_, code) = invhilb(&["--truncation", "8", "--export-system", sys.to_str().unwrap(), "law-tangent", "2"]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&sys).unwrap();
    assert!(text.starts_with("# unknown m["));
    std::fs::remove_dir_all(&dir).unwrap();
}
