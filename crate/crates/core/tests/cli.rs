use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn scenario(name: &str) -> PathBuf {
    scenarios().join(name)
}

fn run(args: &[&str], config: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inertia-forms"))
        .args(args)
        .arg("--config")
        .arg(config)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn temp_config(body: &str) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), body).unwrap();
    f
}

#[test]
fn every_shipped_scenario_verifies() {
    let mut count = 0;
    for entry in std::fs::read_dir(scenarios()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let out = run(&["verify", "--cutoff", "3", "--samples", "10"], &path);
            assert_eq!(
                out.status.code(),
                Some(0),
                "{}: {}",
                path.display(),
                String::from_utf8_lossy(&out.stdout)
            );
            count += 1;
        }
    }
    assert!(count >= 10);
}

#[test]
fn report_schema() {
    let out = run(&["verify", "--cutoff", "2"], &scenario("c4_rotation.json"));
    let v = json(&out);
    let obj = v.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["assertions", "scenario", "tables", "version"]);
    let raw = String::from_utf8(out.stdout.clone()).unwrap();
    let pos = |k: &str| raw.find(&format!("\"{k}\":")).unwrap();
    assert!(pos("scenario") < pos("tables") && pos("tables") < pos("assertions") && pos("assertions") < pos("version"));
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    let first = &v["assertions"][0];
    for key in ["name", "slot", "expected", "actual", "pass"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["tables"]["basic_dims"]["0"]["0"], 4);
}

#[test]
fn output_is_deterministic() {
    let config = scenario("z2_sign.json");
    for cmd in ["verify", "homotopy-check", "loopspace", "cohomology"] {
        let a = run(&[cmd, "--seed", "5", "--cutoff", "3"], &config);
        let b = run(&[cmd, "--seed", "5", "--cutoff", "3"], &config);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
    let a = run(&["homotopy-check", "--seed", "5"], &scenario("circle_w1.json"));
    let b = run(&["homotopy-check", "--seed", "5"], &scenario("circle_w1.json"));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["tables"]["sampling"]["seed"], 5);
}

#[test]
fn injected_fault_fails_with_code_one() {
    for name in ["z2_sign.json", "circle_w1.json", "trivial_r2.json"] {
        let out = run(&["verify", "--fault", "inject", "--cutoff", "3"], &scenario(name));
        assert_eq!(out.status.code(), Some(1), "{name}");
        let v = json(&out);
        let failed = v["assertions"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|a| a["pass"] == false)
            .count();
        assert!(failed > 0, "{name}");
    }
}

#[test]
fn structural_errors_exit_two() {
    let cases = [
        r#"{"name": "x", "finite": {"generators": [[["1","0"],["0","0"]]]}}"#,
        r#"{"name": "x", "finite": {"generators": [[["1","0"]]]}}"#,
        r#"{"name": "x", "finite": {"generators": [[["2"]]]}, "cutoff": 2}"#,
        r#"{"name": "x", "circle": {"weights": []}}"#,
        r#"{"name": "x", "finite": {"generators": [[["-1"]]]}, "cutoff": 0}"#,
        r#"{"name": "x", "finite": {"generators": [[["-1"]]]}, "colour": "red"}"#,
        r#"{"name": "x"}"#,
        "not json",
    ];
    for body in cases {
        let f = temp_config(body);
        let out = run(&["verify"], f.path());
        assert_eq!(
            out.status.code(),
            Some(2),
            "{body}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty());
    }
    let out = run(&["verify"], Path::new("/nonexistent/scenario.json"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn chart_mismatch_exits_two() {
    let body = r#"{
        "name": "bad charts",
        "finite": {"generators": [[["1"]]]},
        "charts": {
            "charts": [
                {"name": "L", "dim": 2, "components": [[["1", "0"]]]},
                {"name": "P", "dim": 1, "components": [[["1"]]]}
            ],
            "transfers": [{"from": "L", "to": "P", "embedding": [["0"], ["1"]]}]
        }
    }"#;
    let f = temp_config(body);
    let out = run(&["chart-check"], f.path());
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn alternative_formats() {
    let config = scenario("d8.json");
    let csv = run(&["dims", "--format", "csv", "--cutoff", "2"], &config);
    assert_eq!(csv.status.code(), Some(0));
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.contains("# basic_dims\nw,k,dim\n0,0,5\n"), "{text}");

    let table = run(&["verify", "--format", "table", "--cutoff", "2"], &config);
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.contains("[basic_dims]"));
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));

    let bad = run(&["dims", "--format", "xml"], &config);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn zero_samples_pass_trivially() {
    let out = run(&["homotopy-check", "--samples", "0"], &scenario("c4_rotation.json"));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["tables"]["sampling"]["samples"], 0);
}

#[test]
fn cutoff_flag_overrides_scenario() {
    let out = run(&["dims", "--cutoff", "1"], &scenario("c4_rotation.json"));
    let v = json(&out);
    let weights: Vec<&String> = v["tables"]["basic_dims"].as_object().unwrap().keys().collect();
    assert_eq!(weights, ["0", "1"]);
}

#[test]
fn every_command_runs() {
    for (cmd, config) in [
        ("loopspace", "d8.json"),
        ("dims", "circle_w1.json"),
        ("cohomology", "c6_sqrt3.json"),
        ("homotopy-check", "d8.json"),
        ("morita", "morita_s3.json"),
        ("chart-check", "charts.json"),
    ] {
        let out = run(&[cmd, "--cutoff", "3"], &scenario(config));
        assert_eq!(
            out.status.code(),
            Some(0),
            "{cmd} {config}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        json(&out);
    }
}

#[test]
fn morita_without_subgroup_is_a_config_error() {
    let out = run(&["morita"], &scenario("c4_rotation.json"));
    assert_eq!(out.status.code(), Some(2));
}
