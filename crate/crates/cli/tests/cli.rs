use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn heisenmag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heisenmag"))
        .args(args)
        .env_remove("HEISENMAG_THREADS")
        .output()
        .expect("binary runs")
}

fn schema_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.schema.json")
}

fn validator() -> jsonschema::Validator {
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path()).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn report(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stderr)
        )
    });
    let errors: Vec<String> = validator()
        .iter_errors(&v)
        .map(|e| format!("{} at {}", e, e.instance_path()))
        .collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
    v
}

fn rows(v: &Value) -> &Vec<Value> {
    v["rows"].as_array().unwrap()
}

#[test]
fn quick_commands_validate_and_pass() {
    for args in [
        &["identities", "--points", "40", "--bumps", "1"][..],
        &["sharpness"],
        &["folland-stein"],
        &["log-hardy"],
        &["uniform-bottom", "--b", "0.5,2"],
        &[
            "fiber-hardy",
            "--alpha",
            "0.3",
            "--mmin",
            "0",
            "--mmax",
            "1",
            "--nr",
            "60",
            "--nz",
            "60",
        ],
    ] {
        let out = heisenmag(args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v = report(&out);
        assert_eq!(v["pass"], true);
        assert_eq!(v["command"], args[0]);
        assert_eq!(v["config"]["seed"], 7);
        assert!(rows(&v).iter().all(|r| r["verdict"] == "pass"));
        assert!(v.get("timings").is_none());
    }
}

#[test]
fn fiber_hardy_example_has_five_rows() {
    let out = heisenmag(&[
        "fiber-hardy",
        "--alpha",
        "0.5",
        "--mmin",
        "-2",
        "--mmax",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    let rows = rows(&v);
    assert_eq!(rows.len(), 5);
    for (r, m) in rows.iter().zip(-2..=2) {
        let bound = (0.5f64 - m as f64).clamp(-1.0, 1.0).powi(2);
        assert_eq!(r["target"].as_f64().unwrap(), bound);
        assert_eq!(r["tolerance"].as_f64().unwrap(), 0.02);
        assert_eq!(r["comparison"], "at_least");
    }
}

#[test]
fn identities_example_is_all_pass() {
    let out = heisenmag(&["identities", "--seed", "7", "--points", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(rows(&v).len(), 11);
    assert_eq!(v["data"]["config"]["seed"], 7);
}

#[test]
fn constant_reports_c_and_g_star() {
    let out = heisenmag(&["constant"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = report(&out);
    let c = v["data"]["c"].as_f64().unwrap();
    assert!((c - heisenmag::spectral1d::UNIVERSAL_CONSTANT).abs() <= 1e-9 * c);
    assert!(v["data"]["g_star"].as_f64().unwrap() < 0.0);
    assert!(v["data"]["refinement_change"].as_f64().unwrap() <= 1e-5);
}

#[test]
fn perturbed_constant_fails_the_pin() {
    let out = heisenmag(&["constant", "--c-offset", "1e-2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = report(&out);
    assert_eq!(v["pass"], false);
    let failing: Vec<&str> = rows(&v)
        .iter()
        .filter(|r| r["verdict"] == "fail")
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["constant.pinned"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("constant.pinned"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["no-such-command"][..],
        &["fiber-hardy", "--nr", "8"],
        &["fiber-hardy", "--mmin", "2", "--mmax", "1"],
        &["sharpness", "--alpha", "1"],
        &["folland-stein", "--alpha", "1.5"],
        &["identities", "--threads", "0"],
        &["log-hardy", "--eps-ratio", "0.7"],
        &["constant", "--grid", "400"],
        &["uniform-bottom", "--b", "-1"],
    ] {
        let out = heisenmag(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn scan_range_without_interior_minimum_exits_3() {
    let out = heisenmag(&[
        "constant",
        "--g-min",
        "0",
        "--g-max",
        "2",
        "--scan-points",
        "5",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("numerical"));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(heisenmag(&["--help"]).status.code(), Some(0));
    let v = heisenmag(&["--version"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&v.stdout).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn reports_are_byte_stable() {
    let args = [
        "identities",
        "--points",
        "60",
        "--bumps",
        "2",
        "--seed",
        "11",
    ];
    let a = heisenmag(&args);
    let b = heisenmag(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = heisenmag(&[
        "identities",
        "--points",
        "60",
        "--bumps",
        "2",
        "--seed",
        "12",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn csv_table_contract() {
    let out = heisenmag(&["sharpness", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["n", "quotient", "target"]);
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 3);
    let mut prev = f64::INFINITY;
    for (rec, n) in records.iter().zip(["10", "100", "1000"]) {
        assert_eq!(&rec[0], n);
        let q: f64 = rec[1].parse().unwrap();
        assert_eq!(rec[2].parse::<f64>().unwrap(), 0.25);
        assert!(q >= 0.25 && q < prev);
        prev = q;
    }
}

#[test]
fn output_and_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("fs.json");
    let table = dir.path().join("fs.csv");
    let out = heisenmag(&[
        "folland-stein",
        "--k-list",
        "16,64",
        "--output",
        json.to_str().unwrap(),
        "--csv",
        table.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(validator().is_valid(&v));
    assert_eq!(rows(&v).len(), 6);
    let csv_text = std::fs::read_to_string(&table).unwrap();
    assert!(csv_text.starts_with("k,quotient,target\n16,"));
    assert_eq!(csv_text.lines().count(), 3);

    let missing = dir.path().join("no/such/dir/out.json");
    let out = heisenmag(&["log-hardy", "--output", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn threads_flag_and_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_heisenmag"))
        .args(["log-hardy"])
        .env("HEISENMAG_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(report(&out)["config"]["threads"], 3);
    let out = heisenmag(&["log-hardy", "--threads", "2"]);
    assert_eq!(report(&out)["config"]["threads"], 2);
}

#[test]
fn timings_are_opt_in() {
    let v = report(&heisenmag(&["sharpness", "--timings"]));
    let t = v["timings"].as_array().unwrap();
    assert_eq!(t.len(), 6);
    assert!(t.iter().all(|s| s["seconds"].as_f64().unwrap() >= 0.0));
}
