use std::process::{Command, Output};

use serde_json::Value;

fn coxwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxwalk"))
        .args(args)
        .env_remove("COXWALK_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = coxwalk(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn values(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|e| e["value"].as_str().unwrap().to_string()).collect()
}

#[test]
fn stationary_a2_is_exact() {
    let v = json(&["stationary", "--type", "A2"]);
    assert_eq!(values(&v["zeta"]), ["2/9", "1/9", "1/9", "2/9", "2/9", "1/9"]);
    assert_eq!(values(&v["chambers"]), ["1/9", "2/9", "2/9", "1/9", "1/9", "2/9"]);
    assert_eq!(v["psi"]["coords"], serde_json::json!([1, 1]));
}

#[test]
fn shi_regions_a2() {
    let v = json(&["shi", "--type", "A2", "--regions"]);
    let regions = v["regions"].as_array().unwrap();
    assert_eq!(regions.len(), 16);
    let mut probs: Vec<&str> = regions.iter().map(|r| r["probability"].as_str().unwrap()).collect();
    probs.sort();
    let mut expected = vec!["1/1", "1/3", "1/3", "1/3"];
    expected.extend(["1/6"; 6]);
    expected.extend(["1/9"; 3]);
    expected.extend(["2/9"; 3]);
    expected.sort();
    assert_eq!(probs, expected);
}

#[test]
fn empty_core() {
    let out = coxwalk(&["cores", "--n", "4", "--steps", "0"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "[]");
}

#[test]
fn cores_have_the_requested_degree() {
    let v = json(&["cores", "--n", "3", "--steps", "25", "--trials", "4", "--stats"]);
    let cores = v["cores"].as_array().unwrap();
    assert_eq!(cores.len(), 4);
    assert_eq!(v["limit_curve"], "verified");
    assert_eq!(v["predicted"]["degree_coefficient"], "3/4");
    for c in cores {
        assert!(c["distance_to_limit"].as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn bad_arguments_exit_2() {
    for args in [
        &["psi", "--format", "csv"][..],
        &["stationary", "--type", "Q3"],
        &["cores", "--n", "1"],
        &["simulate", "--steps", "many"],
        &["frobnicate"],
    ] {
        assert_eq!(coxwalk(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn computation_errors_exit_1() {
    let out = coxwalk(&["shi", "--type", "A4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["simulate", "--type", "B2", "--steps", "50", "--seed", "9"][..],
        &["simulate", "--type", "G2", "--steps", "20", "--trials", "30", "--threads", "3"],
        &["cores", "--n", "4", "--steps", "40", "--trials", "5", "--format", "json"],
        &["chambers", "--type", "A2", "--trials", "500"],
        &["shi", "--type", "B2", "--regions", "--graph"],
    ] {
        let a = coxwalk(args);
        let b = coxwalk(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn seed_from_environment() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_coxwalk"));
        c.args(["simulate", "--type", "A3", "--steps", "40"]).env_remove("COXWALK_SEED");
        if let Some(s) = env {
            c.env("COXWALK_SEED", s);
        }
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        c.output().unwrap().stdout
    };
    assert_eq!(run(Some("31"), None), run(None, Some("31")));
    assert_ne!(run(Some("31"), None), run(None, None));
    assert_eq!(run(Some("31"), Some("8")), run(None, Some("8")));
}

#[test]
fn out_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("coxwalk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("core.svg");
    let out = coxwalk(&["cores", "--n", "4", "--steps", "60", "--format", "svg", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.matches("<path").count() == 2, "{svg}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn csv_outputs() {
    let out = coxwalk(&["stationary", "--type", "A2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("word,zeta"));
    assert_eq!(text.lines().count(), 7);
    let out = coxwalk(&["cores", "--n", "3", "--steps", "20", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("core,")) && text.lines().any(|l| l.starts_with("limit,")));
}

#[test]
fn verify_passes() {
    let out = coxwalk(&["verify"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(!text.contains("FAIL"));
    let v = json(&["verify", "--format", "json"]);
    assert_eq!(v["passed"], true);
}
