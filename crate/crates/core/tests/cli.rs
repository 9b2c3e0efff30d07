use std::process::{Command, Output};

use lemni::cli::{self, JobSpec};
use serde_json::Value;

fn lemni(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lemni"))
        .args(args)
        .env_remove("LEMNI_SEED")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn length_reports_bernoulli() {
    let out = lemni(&["length", "--roots", "i,-i"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let r = &v["result"];
    assert!((r["exact_integral"].as_f64().unwrap() - 7.416).abs() < 5e-3);
    assert_eq!(r["satisfies_theorem1"], Value::Bool(true));
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["seed"], 0);
    assert_eq!(v["options"]["crofton_grid"], 256);
}

#[test]
fn svg_has_one_path_per_component() {
    let out = lemni(&["trace", "--coeffs", "1,0,0,1", "--format", "svg"]);
    assert_eq!(out.status.code(), Some(0));
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<path").count(), 1);
    let out = lemni(&["trace", "--roots=2,-2", "--format", "svg"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().matches("<path").count(), 2);
}

#[test]
fn seeded_commands_are_byte_identical() {
    for args in [
        &["bounds", "--roots", "2,-2", "--seed", "4"][..],
        &["search", "--degree", "2", "--budget", "600", "--seed", "1"][..],
        &["sphere", "--numerator", "1,0,1", "--denominator", "0,1", "--set", "samples=500"][..],
    ] {
        let a = lemni(args);
        let b = lemni(args);
        assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn seed_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_lemni"))
        .args(["bounds", "--roots", "i,-i"])
        .env("LEMNI_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(json(&out)["seed"], 17);
}

#[test]
fn exit_codes_and_error_lines() {
    for args in [
        &["length", "--coeffs", "1,0,2"][..],
        &["length", "--roots", "1+", "--seed", "1"][..],
        &["length", "--roots", "i", "--coeffs", "1,1"][..],
        &["length"][..],
        &["report", "--format", "svg"][..],
        &["length", "--roots", "i", "--set", "nonsense=1"][..],
        &["search", "--degree", "9"][..],
    ] {
        let out = lemni(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim().lines().count(), 1);
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"], "validation");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn numerical_failure_exits_three() {
    let out = lemni(&["length", "--roots", "i,-i", "--set", "tol=1e-300"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "numerical");
}

#[test]
fn report_csv_columns() {
    let out = lemni(&["report", "--family", "zd+1", "--dmax", "6", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("d,length,length_over_d,bound_alpha0_d,connected,max_crit_dist"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn job_file_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("trace.json");
    let job = JobSpec {
        output: Some(out_path.clone()),
        ..JobSpec::new(cli::Command::Trace).with_roots("0.5,-0.5").with_option("phase_step_max", "0.02")
    };
    let job_path = dir.path().join("job.json");
    std::fs::write(&job_path, serde_json::to_string(&job).unwrap()).unwrap();
    let out = lemni(&["run", job_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["result"]["component_count"], 1);
    assert_eq!(v["options"]["phase_step_max"], 0.02);
    assert_eq!(cli::execute(&JobSpec { output: None, ..job }).unwrap(), std::fs::read_to_string(&out_path).unwrap());
}

#[test]
fn floats_have_twelve_significant_digits() {
    let text = cli::execute(&JobSpec::new(cli::Command::Length).with_roots("i,-i")).unwrap();
    assert!(text.contains("\"exact_integral\": 7.41629870921,"));
}
