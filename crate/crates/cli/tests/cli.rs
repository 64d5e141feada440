use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn dgms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgms"))
        .args(args)
        .env_remove("DGMS_REPORT_FORMAT")
        .output()
        .expect("binary runs")
}

fn generate(dir: &Path, name: &str, recipe: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut args = vec!["generate"];
    args.extend_from_slice(recipe);
    args.extend_from_slice(&["--output", path.to_str().unwrap()]);
    let out = dgms(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = dgms(&full);
    let v = serde_json::from_slice(&out.stdout).expect("json report");
    (out.status.code().unwrap(), v)
}

#[test]
fn dots_and_squares_pass_the_dgms_check() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), "ds.model", &["dots-squares", "--dots", "0:1,1:2", "--squares", "0,1", "--seed", "3"]);
    let (code, v) = json(&["dgms", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["data"]["verdict"]["strong_lemma"], true);
}

#[test]
fn zigzag_fails_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), "z.model", &["zigzag", "--count", "1"]);
    let (code, v) = json(&["dgms", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["data"]["verdict"]["strong_lemma"], false);
    assert!(!v["data"]["verdict"]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn torus_quaternionic_dims() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), "t.model", &["torus", "--rank", "1"]);
    let (code, v) = json(&["qdolbeault", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let h = &v["data"]["cohomology"]["qa_cohomology"];
    assert_eq!((h["0"].as_u64(), h["1"].as_u64(), h["2"].as_u64()), (Some(1), Some(4), Some(3)));
}

#[test]
fn corrupted_connection_is_not_autodual() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), "c.model", &["connection", "--seed", "2", "--corrupt"]);
    let (code, v) = json(&["qdolbeault", f.to_str().unwrap()]);
    assert_eq!(code, 0, "flatness and autoduality still agree");
    assert_eq!(v["data"]["autoduality"]["autodual"], false);
    assert_eq!(v["data"]["flatness"]["d_squared_zero"], false);
}

#[test]
fn json_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), "t.model", &["torus", "--rank", "2"]);
    let args = ["--format", "json", "deform", f.to_str().unwrap(), "--samples", "3", "--seed", "7"];
    let a = dgms(&args);
    let b = dgms(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn format_comes_from_the_environment_unless_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), "cone.model", &["cone"]);
    let run = |flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_dgms"));
        c.env("DGMS_REPORT_FORMAT", "json");
        if let Some(fl) = flag {
            c.args(["--format", fl]);
        }
        c.args(["cohomology", f.to_str().unwrap(), "--differential", "d"]);
        String::from_utf8(c.output().unwrap().stdout).unwrap()
    };
    assert!(run(None).trim_start().starts_with('{'));
    let text = run(Some("text"));
    assert!(text.starts_with("command:"), "{text}");
    assert!(text.contains("time:"));
}

#[test]
fn unknown_subcommand_and_missing_file_exit_nonzero() {
    assert_ne!(dgms(&["frobnicate"]).status.code(), Some(0));
    let out = dgms(&["dgms", "/nonexistent/file.model"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));
}

#[test]
fn malformed_file_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.model");
    std::fs::write(&f, "kind associative\ndegrees\n  0 : a\nstructure\n  a a b 1\n").unwrap();
    let out = dgms(&["validate", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 5"));
}

#[test]
fn generated_files_round_trip_and_validate() {
    let dir = tempfile::tempdir().unwrap();
    let recipes: &[&[&str]] = &[
        &["torus", "--rank", "2"],
        &["dots-squares", "--dots", "0:1", "--squares", "0", "--rank", "2", "--lie"],
        &["random", "--seed", "5", "--zigzags", "1", "--max-dim", "30"],
        &["square"],
        &["cone"],
        &["squares-cone", "--seed", "1"],
        &["connection", "--seed", "4"],
    ];
    for (i, r) in recipes.iter().enumerate() {
        let f = generate(dir.path(), &format!("m{i}.model"), r);
        let text = std::fs::read_to_string(&f).unwrap();
        let again = dgms_core::modelfile::ModelFile::parse(&text).unwrap().emit();
        assert_eq!(text, again, "{r:?}");
        let out = dgms(&["validate", f.to_str().unwrap()]);
        assert!(out.status.success(), "{r:?}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn cone_deformations_split_into_lifted_and_obstructed() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), "cone.model", &["cone"]);
    let (code, v) = json(&["deform", f.to_str().unwrap(), "--order", "6", "--differential", "d"]);
    assert_eq!(code, 0);
    let samples = v["data"]["quadraticity"]["samples"].as_array().unwrap();
    assert!(samples.iter().any(|s| s["second_order_obstructed"] == true));
    assert!(samples.iter().any(|s| s["lifted_to"].as_u64() == Some(6)));
}
