use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn ndisco(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ndisco")).args(args).env_remove("NDISCO_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    let value: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&value).unwrap()
}

fn assert_valid(validator: &jsonschema::Validator, instance: &Value) {
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{instance}: {errors:?}");
}

/// Parses a CSV with a header row into JSON objects, numbers where possible.
fn csv_rows(text: &str) -> Vec<Value> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    lines
        .map(|line| {
            let obj = header
                .iter()
                .zip(line.split(','))
                .map(|(k, v)| {
                    let value = v.parse::<f64>().map(|x| json!(x)).unwrap_or_else(|_| json!(v));
                    (k.to_string(), value)
                })
                .collect();
            Value::Object(obj)
        })
        .collect()
}

#[test]
fn generate_greedy_reports_mean_discovery_time() {
    let dir = scratch("generate_greedy");
    let out = dir.join("s.json");
    let o = ndisco(&[
        "generate",
        "--bps",
        "1,2,3",
        "--channels",
        "3",
        "--strategy",
        "greedy-first",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("mdt = 2.722222222222"), "{}", stdout(&o));
    let schedule: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_valid(&schema("schedule.schema.json"), &schedule);
}

#[test]
fn generate_psv_without_normalization() {
    let dir = scratch("generate_psv");
    let out = dir.join("s.json");
    let o = ndisco(&[
        "generate",
        "--bps",
        "2",
        "--channels",
        "2",
        "--strategy",
        "psv",
        "--no-normalize",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("wdt = 4") && text.contains("switches = 1"), "{text}");
}

#[test]
fn periods_are_reduced_by_their_gcd_with_a_notice() {
    let o = ndisco(&["generate", "--bps", "2", "--channels", "2", "--strategy", "psv"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("GCD 2"));
    let schedule: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(schedule, json!({"horizon": 2, "scans": [[0, 0], [1, 1]]}));
}

#[test]
fn optb2_output_verifies_as_recursive() {
    let dir = scratch("optb2_verify");
    let out = dir.join("s.json");
    let o =
        ndisco(&["generate", "--bps", "2,3", "--channels", "2", "--strategy", "optb2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v = ndisco(&["verify", "--bps", "2,3", "--channels", "2", "--schedule", out.to_str().unwrap()]);
    assert!(v.status.success());
    let verdict: Value = serde_json::from_str(&stdout(&v)).unwrap();
    assert_valid(&schema("verdict.schema.json"), &verdict);
    assert_eq!(verdict["recursive"], json!(true));
    assert_eq!(verdict["complete"], json!(true));
}

#[test]
fn domain_errors_exit_with_one() {
    assert_eq!(
        ndisco(&["generate", "--bps", "1,2,3", "--channels", "2", "--strategy", "optb2"]).status.code(),
        Some(1)
    );
    assert_eq!(
        ndisco(&["generate", "--bps", "1,2,3", "--channels", "2", "--strategy", "recursive-f3"]).status.code(),
        Some(1)
    );
    assert_eq!(ndisco(&["generate", "--bps", "0", "--channels", "2", "--strategy", "psv"]).status.code(), Some(1));
    assert_eq!(
        ndisco(&["verify", "--bps", "2", "--channels", "1", "--schedule", "/nonexistent"]).status.code(),
        Some(1)
    );
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(ndisco(&["generate", "--bps", "1", "--channels", "1", "--strategy", "bogus"]).status.code(), Some(2));
    assert_eq!(ndisco(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ndisco(&["optimize", "--channels", "2"]).status.code(), Some(2));
}

#[test]
fn optimize_reproduces_exact_optima() {
    let solution = schema("solution.schema.json");
    for (bps, channels, t_max, expected) in [
        ("1,2,3", "3", None, "47/18"),
        ("2,3,4,6,12", "2", None, "51/10"),
        ("1,2,4,5", "2", Some("39"), "11/4"),
        ("1,2,4,5", "2", Some("9"), "23/8"),
    ] {
        let mut args = vec!["optimize", "--bps", bps, "--channels", channels];
        if let Some(t) = t_max {
            args.extend(["--t-max", t]);
        }
        let o = ndisco(&args);
        assert!(o.status.success());
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_valid(&solution, &v);
        assert_eq!(v["status"], json!("optimal"));
        assert_eq!(v["objective"], json!(expected), "{bps}");
    }
}

#[test]
fn optimize_neighbor_samples() {
    let dir = scratch("optimize_sample");
    let path = dir.join("n.json");
    let neighbors = json!([
        {"channel": 0, "period": 2, "offset": 1, "phase": 0.5},
        {"channel": 1, "period": 2, "offset": 1, "phase": 0.1}
    ]);
    assert_valid(&schema("neighbors.schema.json"), &neighbors);
    fs::write(&path, neighbors.to_string()).unwrap();
    let p = path.to_str().unwrap();
    let mdt = ndisco(&["optimize", "--bps", "1,2", "--channels", "2", "--neighbors", p]);
    let v: Value = serde_json::from_str(&stdout(&mdt)).unwrap();
    assert_eq!(v["objective"], json!("2"));
    let wdt = ndisco(&["optimize", "--bps", "1,2", "--channels", "2", "--neighbors", p, "--objective", "wdt"]);
    let v: Value = serde_json::from_str(&stdout(&wdt)).unwrap();
    assert_eq!(v["objective"], json!("3"));
}

#[test]
fn export_lp_is_deterministic() {
    let a = ndisco(&["export-lp", "--bps", "1,2", "--channels", "2"]);
    let b = ndisco(&["export-lp", "--bps", "1,2", "--channels", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    for section in ["Minimize", "Subject To", "Binary", "End"] {
        assert!(text.contains(section), "{section}");
    }
}

#[test]
fn simulate_writes_schema_valid_csvs_deterministically() {
    let dir = scratch("simulate");
    let scenarios = json!([
        {"id": "a", "bps": [1, 2, 4], "channels": 2, "neighbors": 10, "deaf_fraction": 0.2, "trials": 40, "seed": 3,
         "strategies": ["psv", "greedy-first", "greedy-stay", "chantrain"]},
        {"bps": [2, 3], "channels": 2, "neighbors": 5, "deaf_fraction": 0.0, "trials": 10, "seed": 4, "strategies": ["optb2"]}
    ]);
    assert_valid(&schema("scenario.schema.json"), &scenarios);
    let input = dir.join("scenarios.json");
    fs::write(&input, scenarios.to_string()).unwrap();
    let run = |tag: &str| {
        let metrics = dir.join(format!("metrics_{tag}.csv"));
        let sndot = dir.join(format!("sndot_{tag}.csv"));
        let o = ndisco(&[
            "simulate",
            "--scenarios",
            input.to_str().unwrap(),
            "--metrics-out",
            metrics.to_str().unwrap(),
            "--sndot-out",
            sndot.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (fs::read_to_string(metrics).unwrap(), fs::read_to_string(sndot).unwrap())
    };
    let (m1, s1) = run("1");
    let (m2, s2) = run("2");
    assert_eq!(m1, m2);
    assert_eq!(s1, s2);
    assert!(m1.starts_with("scenario_id,strategy,metric,mean,ci95\n"));
    assert!(s1.starts_with("scenario_id,strategy,normalized_time,fraction\n"));
    let metrics_schema = schema("metrics_row.schema.json");
    for row in csv_rows(&m1) {
        assert_valid(&metrics_schema, &row);
    }
    let sndot_schema = schema("sndot_row.schema.json");
    for row in csv_rows(&s1) {
        assert_valid(&sndot_schema, &row);
    }
    assert!(m1.contains("s1,optb2,success_rate,1,0\n"));
}

#[test]
fn seed_environment_variable_overrides_scenario_seeds() {
    let dir = scratch("seed_env");
    let input = dir.join("s.json");
    fs::write(
        &input,
        json!({"bps": [1, 2, 4], "channels": 3, "neighbors": 10, "deaf_fraction": 0.3, "trials": 30, "seed": 1, "strategies": ["greedy-first"]})
            .to_string(),
    )
    .unwrap();
    let with_seed = |seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_ndisco"));
        cmd.args(["simulate", "--scenarios", input.to_str().unwrap()]).env_remove("NDISCO_SEED");
        if let Some(s) = seed {
            cmd.env("NDISCO_SEED", s);
        }
        cmd.output().unwrap().stdout
    };
    assert_eq!(with_seed(Some("1")), with_seed(None));
    assert_ne!(with_seed(Some("2")), with_seed(None));
}

#[test]
fn help_documents_commands_and_seed_variable() {
    let o = ndisco(&["--help"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for cmd in ["generate", "verify", "optimize", "export-lp", "simulate", "paper-check"] {
        assert!(text.contains(cmd), "{cmd}");
    }
    assert!(stdout(&ndisco(&["simulate", "--help"])).contains("NDISCO_SEED"));
}

#[test]
fn checks_reports_every_check_and_writes_identical_artifacts() {
    let dir = scratch("checks");
    let (a, b) = (dir.join("a"), dir.join("b"));
    let first = ndisco(&["paper-check", "--artifacts", a.to_str().unwrap()]);
    let second = ndisco(&["paper-check", "--artifacts", b.to_str().unwrap()]);
    let text = stdout(&first);
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("PASS ") || l.starts_with("FAIL ")).collect();
    assert_eq!(lines.len(), 9, "{text}");
    let all_pass = lines.iter().all(|l| l.starts_with("PASS "));
    assert_eq!(first.status.code(), Some(if all_pass { 0 } else { 1 }));
    assert_eq!(first.stdout, second.stdout);
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 5);
    for name in names {
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap(), "{name:?}");
    }
    let optima: Value = serde_json::from_str(&fs::read_to_string(a.join("optima.json")).unwrap()).unwrap();
    let solution = schema("solution.schema.json");
    for entry in optima.as_array().unwrap() {
        assert_valid(&solution, &entry["solution"]);
    }
}
