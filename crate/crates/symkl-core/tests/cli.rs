//! End-to-end CLI checks: canonical output, cache determinism, and
//! machine-readable errors.

use std::path::PathBuf;
use std::process::{Command, Output};

fn symkl(args: &[&str]) -> Output {
    // run in a scratch working directory so the default ./.klcache lands
    // outside the repository
    let cwd = std::env::temp_dir().join(format!("symkl-cli-cwd-{}", std::process::id()));
    std::fs::create_dir_all(&cwd).expect("scratch cwd");
    Command::new(env!("CARGO_BIN_EXE_symkl"))
        .current_dir(&cwd)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("symkl-cli-{}-{}", tag, std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn repdim_g2_standard() {
    let out = symkl(&["compute", "repdim", "--alg", "g2", "--k", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dimension"], "7");
}

#[test]
fn factors_example() {
    let out = symkl(&[
        "compute", "factors", "--p", "3", "--q", "3", "--n", "2", "--k", "4",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["det0"], serde_json::json!(["1", "-1"]));
    assert_eq!(v["det_inf"]["factor"], serde_json::json!(["1", "-9"]));
    assert_eq!(v["det_inf"]["closed_form"], serde_json::json!(true));
}

#[test]
fn lfunction_anchor() {
    let out = symkl(&[
        "compute", "lfunction", "--q", "3", "--n", "2", "--k", "1",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["lfunction"]["num"], serde_json::json!(["1", "-1"]));
    assert_eq!(v["lfunction"]["den"], serde_json::json!(["1"]));
    assert_eq!(v["nontrivial"], serde_json::json!(["1"]));
}

#[test]
fn invalid_parameters_yield_error_json() {
    // n does not divide q - 1
    let out = symkl(&["compute", "factors", "--q", "3", "--n", "4", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["error"]["kind"], "invalid_parameter");
    // n < 2
    let out = symkl(&["compute", "lfunction", "--q", "3", "--n", "1", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    // q not a prime power
    let out = symkl(&["compute", "factors", "--q", "12", "--n", "2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cache_hit_reproduces_cold_output_bit_exactly() {
    let dir = temp_dir("determinism");
    let dirs = dir.to_str().unwrap();
    let args = [
        "compute", "lfunction", "--q", "3", "--n", "2", "--k", "2", "--cache-dir", dirs,
    ];
    let cold = symkl(&args);
    assert!(cold.status.success());
    assert!(dir.exists(), "cache directory was created");
    let warm = symkl(&args);
    assert!(warm.status.success());
    assert_eq!(stdout(&cold), stdout(&warm));
    // kl-table output is canonical and stable too
    let t1 = symkl(&[
        "compute", "kl-table", "--q", "3", "--n", "2", "--ell", "2", "--cache-dir", dirs,
    ]);
    let t2 = symkl(&[
        "compute", "kl-table", "--q", "3", "--n", "2", "--ell", "2", "--cache-dir", dirs,
    ]);
    assert!(t1.status.success());
    assert_eq!(stdout(&t1), stdout(&t2));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn csv_emitter() {
    let out = symkl(&[
        "compute", "lfunction", "--q", "3", "--n", "2", "--k", "1", "--csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("table,index,value\n"));
    assert!(text.contains("l_num,1,-1\n"));
    assert!(text.contains("power_sum,1,-1\n"));
}

#[test]
fn verify_repdims_suite_passes() {
    let out = symkl(&["verify", "repdims"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_unknown_suite_errors() {
    let out = symkl(&["verify", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn padic_command() {
    let out = symkl(&[
        "compute", "padic", "--q", "3", "--n", "2", "--k-seq", "2,11", "--r", "4",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["steps"][0]["ok"], serde_json::json!(true));
}

#[test]
fn out_flag_writes_file() {
    let dir = temp_dir("outfile");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("repdim.json");
    let out = symkl(&[
        "compute", "repdim", "--alg", "sl", "--n", "3", "--k", "2", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["dimension"], "6");
    let _ = std::fs::remove_dir_all(&dir);
}
