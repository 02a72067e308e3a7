use std::f64::consts::TAU;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn psh(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_psh"));
    cmd.args(args)
        .env_remove("PSH_CONFIG")
        .env_remove("PSH_NO_CACHE");
    match cache {
        Some(dir) => cmd.env("PSH_CACHE_DIR", dir),
        None => cmd.env("PSH_NO_CACHE", "1"),
    };
    cmd.output().expect("psh runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn cache_files(dir: &Path) -> Vec<String> {
    match std::fs::read_dir(dir) {
        Ok(rd) => rd
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect(),
        Err(_) => Vec::new(),
    }
}

#[test]
fn weight_of_log_is_one() {
    let out = psh(&["weight", "--exhaustion", "log", "--samples", "256"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,V"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 256);
    for row in rows {
        let (theta, v) = row.split_once(',').unwrap();
        assert!(theta.parse::<f64>().is_ok());
        assert_eq!(v.parse::<f64>().unwrap(), 1.0);
    }
}

#[test]
fn out_directory_gets_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let out = psh(
        &[
            "weight",
            "--exhaustion",
            "log",
            "--samples",
            "256",
            "--out",
            dir.path().to_str().unwrap(),
        ],
        None,
    );
    assert!(out.status.success());
    assert!(dir.path().join("weight.csv").exists());
    let summary = read_json(&dir.path().join("weight.json"));
    assert!(summary["paper_refs"]
        .as_array()
        .is_some_and(|a| !a.is_empty()));
    assert_eq!(summary["mass"], Value::from(1.0));
}

#[test]
fn norm_json_has_refs_and_scales_with_normalization() {
    let base = ["norm", "--exhaustion", "log", "--f", "1-z", "--p", "2"];
    let a = json(&psh(&base, None));
    let mut args = base.to_vec();
    args.extend(["--normalization", "paper-2pi"]);
    let b = json(&psh(&args, None));
    assert!(a["paper_refs"].as_array().is_some_and(|r| r.len() == 3));
    assert_eq!(a["verdict"], "MEMBER");
    let na = a["routeBoundary"]["value"].as_f64().unwrap();
    let nb = b["routeBoundary"]["value"].as_f64().unwrap();
    assert!((na - 2.0).abs() < 2e-5);
    assert!((nb / na - TAU).abs() < 1e-12);
}

#[test]
fn demailly_mass_of_log_is_one() {
    let v = json(&psh(
        &["demailly", "--exhaustion", "log", "--c", "-1"],
        None,
    ));
    assert!((v["totalMass"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!((v["UcMass"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!(v["paper_refs"].is_array());
}

#[test]
fn levelset_of_log_is_a_circle() {
    let out = psh(
        &[
            "levelset",
            "--exhaustion",
            "log",
            "--c",
            "-0.5",
            "--samples",
            "64",
        ],
        None,
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("x,y"));
    for row in lines {
        let cols: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        assert!(((cols[0] * cols[0] + cols[1] * cols[1]).sqrt() - (-0.5f64).exp()).abs() < 1e-10);
    }
}

#[test]
fn uinner_of_log_has_no_defect() {
    let dir = tempfile::tempdir().unwrap();
    let out = psh(
        &[
            "uinner",
            "--exhaustion",
            "log",
            "--samples",
            "256",
            "--out",
            dir.path().to_str().unwrap(),
        ],
        None,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = read_json(&dir.path().join("uinner.json"));
    assert!(v["defect"].as_f64().unwrap() <= 1e-12);
    let csv = std::fs::read_to_string(dir.path().join("uinner.csv")).unwrap();
    assert_eq!(csv.lines().count(), 257);
}

#[test]
fn factor_reports_isometry() {
    let v = json(&psh(
        &[
            "factor",
            "--exhaustion",
            "log",
            "--f",
            "z*(1-z)",
            "--p",
            "2",
        ],
        None,
    ));
    assert_eq!(v["isometry"]["passes"], Value::Bool(true));
    assert_eq!(v["zeros"].as_array().unwrap().len(), 1);
}

#[test]
fn cache_hit_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "weight",
        "--exhaustion",
        "radial-density:2,1",
        "--samples",
        "256",
    ];
    let first = psh(&args, Some(dir.path()));
    assert!(first.status.success());
    let files = cache_files(dir.path());
    assert_eq!(files.len(), 1);
    assert!(files[0].ends_with(".json") && !files[0].starts_with('.'));
    let second = psh(&args, Some(dir.path()));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stderr, second.stderr);

    // A planted entry is served verbatim, so the second run never recomputed.
    let path = dir.path().join(&files[0]);
    let mut entry = read_json(&path);
    entry["payload"]["files"][0]["content"] = Value::from("planted\n");
    std::fs::write(&path, entry.to_string()).unwrap();
    assert_eq!(psh(&args, Some(dir.path())).stdout, b"planted\n");
}

#[test]
fn no_cache_env_skips_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_psh"))
        .args(["weight", "--exhaustion", "log", "--samples", "256"])
        .env("PSH_CACHE_DIR", dir.path())
        .env("PSH_NO_CACHE", "1")
        .env_remove("PSH_CONFIG")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(cache_files(dir.path()).is_empty());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(
        &conf,
        "# defaults for this run\nexhaustion = log\nf = z\np = 2\n",
    )
    .unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec!["norm"];
        args.extend(extra);
        Command::new(env!("CARGO_BIN_EXE_psh"))
            .args(&args)
            .env("PSH_CONFIG", &conf)
            .env("PSH_NO_CACHE", "1")
            .output()
            .unwrap()
    };
    let from_file = json(&run(&[]));
    assert_eq!(from_file["function"], "z");
    let flagged = json(&run(&["--f", "2*z"]));
    assert!((flagged["routeBoundary"]["value"].as_f64().unwrap() - 4.0).abs() < 4e-5);
}

#[test]
fn config_errors_carry_a_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    std::fs::write(&conf, "exhaustion = log\nwidth = 3\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_psh"))
        .arg("weight")
        .env("PSH_CONFIG", &conf)
        .env("PSH_NO_CACHE", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error:") && err.contains('2'), "{err}");
}

#[test]
fn bad_expression_exits_two() {
    let out = psh(&["norm", "--exhaustion", "log", "--f", "pow(1-z"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn verify_radial_passes() {
    let out = psh(&["verify", "--suite", "radial"], None);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], Value::Bool(true));
    assert!(v["paper_refs"].is_array());
}

#[test]
fn unknown_suite_is_an_error() {
    let out = psh(&["verify", "--suite", "nope"], None);
    assert_eq!(out.status.code(), Some(2));
}
