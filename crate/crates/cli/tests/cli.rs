use serde_json::Value;
use std::process::{Command, Output};
use tracelab::suite::{strip_timing, to_canonical_json, validate_report};

fn tracelab(args: &[&str], env_tol: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tracelab"));
    cmd.args(args).env_remove("TRACELAB_TOL");
    if let Some(t) = env_tol {
        cmd.env("TRACELAB_TOL", t);
    }
    cmd.output().expect("tracelab runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp_report(tag: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("tracelab-cli-{tag}-{}.json", std::process::id()))
}

fn read_report(path: &std::path::Path) -> Value {
    let v = serde_json::from_str(&std::fs::read_to_string(path).expect("report written"))
        .expect("JSON");
    std::fs::remove_file(path).ok();
    v
}

const SMALL: [&str; 6] = [
    "--category",
    "VECT_OPLUS_INV",
    "--axioms",
    "Naturality",
    "--samples",
    "20",
];

#[test]
fn zero_samples_is_a_usage_error() {
    let o = tracelab(&["all", "--samples", "0"], None);
    assert_eq!(code(&o), 2);
    assert!(
        stderr(&o).to_lowercase().contains("usage"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["axioms", "--category", "NOPE"][..],
        &["axioms", "--axioms", "Nope"],
        &["axioms", "--tol", "-1"],
        &["axioms", "--tol", "nan"],
        &["axioms", "--rank-tol", "0"],
        &["axioms", "--jobs", "0"],
        &["axioms", "--dim-max", "0"],
        &["frobnicate"],
        &[],
    ] {
        assert_eq!(code(&tracelab(args, None)), 2, "{args:?}");
    }
    assert_eq!(code(&tracelab(&["axioms"], Some("not-a-number"))), 2);
}

#[test]
fn unwritable_report_exits_2() {
    let mut args = vec!["axioms", "--report", "/nonexistent-dir/out.json"];
    args.extend(SMALL);
    assert_eq!(code(&tracelab(&args, None)), 2);
}

#[test]
fn passing_selection_exits_0_with_valid_report() {
    let path = temp_report("pass");
    let mut args = vec!["axioms", "--report", path.to_str().unwrap()];
    args.extend(SMALL);
    let o = tracelab(&args, None);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = read_report(&path);
    assert_eq!(validate_report(&r), Ok(()));
    assert_eq!(
        r["config"]["categories"],
        serde_json::json!(["VECT_OPLUS_INV"])
    );
    assert_eq!(r["config"]["samples"], 20);
    assert!(String::from_utf8_lossy(&o.stdout).contains("overall: PASS"));
}

#[test]
fn tolerance_below_rounding_fails_with_exit_1() {
    let mut args = vec!["axioms", "--tol", "1e-30"];
    args.extend(SMALL);
    let o = tracelab(&args, None);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("overall: FAIL"));
}

#[test]
fn env_tolerance_applies_unless_flag_given() {
    let mut args = vec!["axioms"];
    args.extend(SMALL);
    assert_eq!(code(&tracelab(&args, Some("1e-30"))), 1);
    args.extend(["--tol", "1e-8"]);
    assert_eq!(code(&tracelab(&args, Some("1e-30"))), 0);
}

#[test]
fn srel_yanking_is_exact() {
    let path = temp_report("yank");
    let o = tracelab(
        &[
            "axioms",
            "--category",
            "srel_tensor",
            "--axioms",
            "yanking",
            "--report",
            path.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(code(&o), 0);
    let r = read_report(&path);
    let entries = r["suites"]["axioms"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["max_deviation"].as_f64(), Some(0.0));
}

#[test]
fn reports_repeat_byte_for_byte_apart_from_timing() {
    let run = |tag: &str, jobs: &str| {
        let path = temp_report(tag);
        let o = tracelab(
            &[
                "intp",
                "--seed",
                "7",
                "--jobs",
                jobs,
                "--report",
                path.to_str().unwrap(),
            ],
            None,
        );
        assert_eq!(code(&o), 0);
        to_canonical_json(&strip_timing(&read_report(&path)))
    };
    assert_eq!(run("a", "1"), run("b", "3"));
}
