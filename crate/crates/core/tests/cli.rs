use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nilcat(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilcat"))
        .args(args)
        .env("NILCAT_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {:?}", out))
}

#[test]
fn truncated_zeta_has_six_elements() {
    let dir = tempfile::tempdir().unwrap();
    let out = nilcat(dir.path(), &["basis", "--n", "2", "--l", "3", "--p", "3", "--lambda", "0,1,1", "--truncated"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["dim"], 6);
    assert_eq!(v["graded_basis"].as_array().unwrap().len(), 6);
}

#[test]
fn g_top_has_two_elements() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&nilcat(dir.path(), &["basis", "--n", "2", "--l", "3", "--p", "3", "--lambda", "1,1,0"]));
    assert_eq!(v["dim"], 2);
    let degrees: Vec<i64> = v["graded_basis"].as_array().unwrap().iter().map(|b| b["degree"].as_i64().unwrap()).collect();
    assert!(degrees.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(v["char"].as_array().unwrap().len(), 2);
}

#[test]
fn trivial_module_is_one_dimensional_in_degree_zero() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&nilcat(dir.path(), &["basis", "--n", "0", "--l", "3", "--p", "3", "--lambda", "0,0,0"]));
    assert_eq!(v["dim"], 1);
    assert_eq!(v["graded_basis"][0]["degree"], 0);
}

#[test]
fn usage_errors_exit_two_with_empty_stdout() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["bogus"],
        vec!["algebra", "--n", "3", "--l", "2", "--p", "3"],
        vec!["algebra", "--n", "1", "--l", "2", "--p", "6"],
        vec!["basis", "--n", "2", "--l", "3", "--p", "3", "--lambda", "1,1"],
        vec!["functor", "--op", "E", "--lambda", "1,1,1", "--r", "2", "--s", "1", "--p", "3"],
        vec!["verify", "--only", "no-such-check"],
        vec!["--format", "yaml", "canonical", "--r", "1", "--s", "1"],
    ] {
        let out = nilcat(dir.path(), &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = nilcat(dir.path(), &["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for sub in ["basis", "algebra", "schur", "functor", "canonical", "compare", "verify", "cache"] {
        assert!(text.contains(sub), "{sub} missing from help");
    }
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["schur", "--n", "2", "--r", "2", "--s", "1", "--p", "3"],
        vec!["canonical", "--r", "2", "--s", "2"],
        vec!["functor", "--op", "F", "--lambda", "1,1,0,1", "--r", "2", "--s", "1", "--p", "3"],
        vec!["verify", "--only", "pdg,truncated-dimension", "--no-timings"],
    ] {
        let first = nilcat(dir.path(), &args);
        let second = nilcat(dir.path(), &args);
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn verify_only_selects_a_single_check() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&nilcat(dir.path(), &["verify", "--only", "dp-zero", "--no-timings"]));
    assert_eq!(v["passed"], true);
    let criteria = v["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 1);
    assert_eq!(criteria[0]["number"], 2);
    let checks = criteria[0]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["id"], "dp-zero");
    assert!(criteria[0].get("elapsed_ms").is_none());
}

#[test]
fn text_mode_renders_laurent_polynomials() {
    let dir = tempfile::tempdir().unwrap();
    // NH_1^3 = k[y]/(y^3) with y in degree 2.
    let out = nilcat(dir.path(), &["--format", "text", "algebra", "--n", "1", "--l", "3", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("graded dim: q^4 + q^2 + 1\n"), "{text}");
    // Multiplicities with negative exponents use the same rendering.
    let out = nilcat(dir.path(), &["--format", "text", "functor", "--op", "F", "--lambda", "1,1,0,1", "--r", "2", "--s", "1", "--p", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.trim_start().starts_with('{'));
    assert!(text.lines().any(|l| l.contains(" + q^-")), "{text}");
}

#[test]
fn compare_and_canonical_succeed() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&nilcat(dir.path(), &["compare", "--r", "1", "--s", "2", "--p", "5"]));
    assert_eq!(v["holds"], true);
    let v = json(&nilcat(dir.path(), &["canonical", "--r", "1", "--s", "1"]));
    assert_eq!(v["positive_unitriangular"], true);
    assert_eq!(v["labels"].as_array().unwrap().len(), 4);
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let warm = nilcat(dir.path(), &["cache", "warm", "--max-n", "2", "--max-l", "3", "--primes", "3"]);
    assert_eq!(warm.status.code(), Some(0));
    let listed = json(&nilcat(dir.path(), &["cache", "list"]));
    let entries = listed["manifest"]["entries"].as_object().unwrap();
    assert!(entries.contains_key("nh-n2-l3-p3"));
    assert_eq!(json(&nilcat(dir.path(), &["cache", "verify"]))["report"]["invalid"], serde_json::json!([]));

    // Flip one byte of a blob: verification flags it, commands rebuild silently.
    let file = entries["nh-n2-l3-p3"]["file"].as_str().unwrap();
    let path = dir.path().join(file);
    let mut bytes = std::fs::read(&path).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0xff;
    std::fs::write(&path, bytes).unwrap();
    let bad = nilcat(dir.path(), &["cache", "verify"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["report"]["invalid"], serde_json::json!(["nh-n2-l3-p3"]));
    let out = nilcat(dir.path(), &["verify", "--only", "example-two-three", "--no-timings"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&nilcat(dir.path(), &["cache", "verify"]))["report"]["invalid"], serde_json::json!([]));

    let cleared = json(&nilcat(dir.path(), &["cache", "clear"]));
    assert!(cleared["removed"].as_u64().unwrap() > 0);
    assert!(json(&nilcat(dir.path(), &["cache", "list"]))["manifest"]["entries"].as_object().unwrap().is_empty());
}

#[test]
fn cache_dir_flag_overrides_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let v = json(&nilcat(env_dir.path(), &["--cache-dir", flag_dir.path().to_str().unwrap(), "cache", "path"]));
    assert_eq!(v["dir"], flag_dir.path().display().to_string());
    let v = json(&nilcat(env_dir.path(), &["cache", "path"]));
    assert_eq!(v["dir"], env_dir.path().display().to_string());
}
