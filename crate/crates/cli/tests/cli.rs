//! End-to-end checks of the binary: flag parsing, exit codes, output
//! schemas, manifests, and rerun determinism.

use std::process::{Command, Output};

fn slelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slelab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn json_of(output: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_str(output)).expect("valid JSON on stdout")
}

#[test]
fn trace_zero_drive_grade_two_endpoint() {
    let out = slelab(&[
        "trace", "--grade", "2", "--kappa", "0", "--T", "1", "--dt", "0.001", "--points", "10",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let last = text.lines().last().unwrap();
    let cols: Vec<f64> = last.split(',').map(|c| c.parse().unwrap()).collect();
    let endpoint = (cols[1] * cols[1] + cols[2] * cols[2]).sqrt();
    assert!((endpoint - 8f64.powf(0.25)).abs() < 1e-9);
}

#[test]
fn trace_seeded_reruns_are_byte_identical() {
    let dir = std::env::temp_dir().join("slelab-cli-trace");
    std::fs::create_dir_all(&dir).unwrap();
    let run = |name: &str| {
        let path = dir.join(name);
        let out = slelab(&[
            "trace",
            "--grade",
            "2",
            "--kappa",
            "40",
            "--sign",
            "2",
            "--seed",
            "7",
            "--T",
            "0.5",
            "--dt",
            "0.001",
            "--points",
            "20",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(&path).unwrap()
    };
    let first = run("a.csv");
    let second = run("b.csv");
    assert_eq!(first, second);
    assert!(dir.join("a.csv.manifest.json").exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("a.csv.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "trace");
    assert_eq!(manifest["seed"], 7);
}

#[test]
fn trace_csv_and_json_formats_agree() {
    let csv = slelab(&[
        "trace", "--grade", "1", "--kappa", "0", "--T", "0.5", "--dt", "0.01", "--points", "5",
    ]);
    let json = slelab(&[
        "trace", "--grade", "1", "--kappa", "0", "--T", "0.5", "--dt", "0.01", "--points", "5",
        "--format", "json",
    ]);
    assert!(csv.status.success() && json.status.success());
    let value = json_of(&json);
    let points = value["points"].as_array().unwrap();
    let csv_text = stdout_str(&csv);
    let csv_lines: Vec<&str> = csv_text.lines().skip(1).map(str::trim).collect();
    assert_eq!(points.len(), csv_lines.len());
    for (line, point) in csv_lines.iter().zip(points) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols[0], point["t"].as_f64().unwrap());
        assert_eq!(cols[1], point["re"].as_f64().unwrap());
        assert_eq!(cols[2], point["im"].as_f64().unwrap());
    }
}

#[test]
fn stochastic_commands_demand_a_seed() {
    let out = slelab(&["trace", "--grade", "1", "--kappa", "2", "--T", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_complex_flag_is_usage_error() {
    let out = slelab(&[
        "stats",
        "backward-law",
        "--z",
        "not-a-number",
        "--seed",
        "1",
        "--N",
        "8",
        "--dt",
        "0.01",
        "--t",
        "0.05",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn off_grid_time_is_a_numeric_failure() {
    let out = slelab(&[
        "hull", "--grade", "1", "--kappa", "0", "--t", "0.0105", "--dt", "0.01", "--grid",
        "-1,1,1,8,8",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_kappa_reports_forty_and_expectation_passes() {
    let out = slelab(&[
        "bridge",
        "solve-kappa",
        "--grade",
        "2",
        "--sign",
        "2",
        "--model",
        "5,2",
        "--module",
        "1,1",
        "--expect",
        "40",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let value = json_of(&out);
    assert_eq!(value["kappa"], serde_json::json!(["40"]));
    assert_eq!(value["certificate"][0]["residue"]["terms"], serde_json::json!([]));
}

#[test]
fn solve_kappa_forward_sign_has_no_nonnegative_root() {
    let out = slelab(&[
        "bridge", "solve-kappa", "--grade", "2", "--sign", "1", "--model", "5,2", "--module",
        "1,1",
    ]);
    assert!(out.status.success());
    let value = json_of(&out);
    assert_eq!(value["kappa"], serde_json::json!([]));
    assert_eq!(value["negative_roots"], serde_json::json!(["-40"]));
    assert_eq!(value["note"], "no non-negative solution");
    // A wrong expectation trips the identity exit code.
    let out = slelab(&[
        "bridge", "solve-kappa", "--grade", "2", "--sign", "1", "--model", "5,2", "--module",
        "1,1", "--expect", "40",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn virasoro_singular_prints_the_level_four_vector() {
    let out = slelab(&[
        "virasoro", "singular", "--level", "4", "--c", "-22/5", "--delta", "0",
    ]);
    assert!(out.status.success());
    let value = json_of(&out);
    assert_eq!(value["count"], 1);
    let terms = value["vectors"][0]["terms"].as_array().unwrap();
    let coeffs: Vec<&str> = terms.iter().map(|t| t["coeff"].as_str().unwrap()).collect();
    assert_eq!(coeffs, vec!["1", "5/27", "-5/3", "125/27", "-125/108"]);
}

#[test]
fn virasoro_gram_level_one_vanishes_at_the_origin_weight() {
    let out = slelab(&["virasoro", "gram", "--level", "1", "--c", "0", "--delta", "0"]);
    assert!(out.status.success());
    let value = json_of(&out);
    assert_eq!(value["matrix"], serde_json::json!([["0"]]));
    assert_eq!(value["determinant"], "0");
}

#[test]
fn virasoro_reduce_certifies_the_null_vector() {
    let vector = r#"{"level":4,"terms":[{"partition":[4],"coeff":"1"},{"partition":[2,2],"coeff":"-5/3"}]}"#;
    let out = slelab(&[
        "virasoro",
        "reduce",
        "--vector",
        vector,
        "--model",
        "5,2",
        "--module",
        "1,1",
        "--expect-null",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let value = json_of(&out);
    assert_eq!(value["null"], true);
    // A non-null vector with --expect-null exits 3.
    let bad = r#"{"level":4,"terms":[{"partition":[2,2],"coeff":"1"}]}"#;
    let out = slelab(&[
        "virasoro", "reduce", "--vector", bad, "--model", "5,2", "--module", "1,1",
        "--expect-null",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bridge_obstruction_prints_the_grade_two_coefficients() {
    let out = slelab(&["bridge", "obstruction", "--grade", "2", "--sign", "1"]);
    assert!(out.status.success());
    let value = json_of(&out);
    let terms = value["obstruction"]["terms"].as_array().unwrap();
    assert_eq!(terms[0]["partition"], serde_json::json!([3]));
    assert_eq!(terms[0]["coeff"], "-1/4*kappa - 10");
    assert_eq!(terms[1]["partition"], serde_json::json!([2, 1]));
    assert_eq!(terms[1]["coeff"], "3/4*kappa");
    // Grade 1 is rejected.
    let out = slelab(&["bridge", "obstruction", "--grade", "1", "--sign", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn stats_run_end_to_end_and_are_deterministic() {
    let args = [
        "stats",
        "scale-invariance",
        "--grade",
        "1",
        "--kappa",
        "2",
        "--alpha",
        "4",
        "--z",
        "0+2i",
        "--t",
        "0.25",
        "--N",
        "32",
        "--seed",
        "9",
        "--dt",
        "0.005",
    ];
    let first = slelab(&args);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let second = slelab(&args);
    assert_eq!(stdout_str(&first), stdout_str(&second));
    let value = json_of(&first);
    assert_eq!(value["N"], 32);
    assert_eq!(value["experiment"], "scale_invariance");
    assert!(value["p_value"].as_f64().unwrap() >= 0.0);
    assert_eq!(value["components"].as_array().unwrap().len(), 2);
}

#[test]
fn hull_csv_covers_only_wedge_points() {
    let out = slelab(&[
        "hull", "--grade", "2", "--kappa", "0", "--t", "0.125", "--dt", "0.005", "--grid",
        "-0.2,1.2,1.2,12,12",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,tau"));
    let mut swallowed = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let re: f64 = cols[0].parse().unwrap();
        let im: f64 = cols[1].parse().unwrap();
        // Inside the open quarter-plane wedge.
        assert!(im > 0.0 && (re > 0.0 || im > 0.0));
        let arg = im.atan2(re);
        assert!(arg > 0.0 && arg < std::f64::consts::FRAC_PI_2);
        if !cols[2].is_empty() {
            swallowed += 1;
        }
    }
    assert!(swallowed > 0);
}

#[test]
fn selftest_without_stats_passes_quickly() {
    let out = slelab(&["selftest", "--skip-stats"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_str(&out);
    assert!(text.contains("criterion  1"));
    assert!(text.contains("all 10 criteria passed"));
}
