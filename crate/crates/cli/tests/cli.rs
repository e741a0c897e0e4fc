use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use holecount_cli::{parse_config_text, RunConfig};
use serde_json::Value;

fn holecount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holecount"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("holecount-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn holes_report_is_deterministic() {
    let first = holecount(&["holes", "--m", "2"]);
    let second = holecount(&["holes", "--m", "2", "--threads", "1"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(second.status.code(), Some(0));
    let (a, b) = (report(&first), report(&second));
    assert_eq!(a["header"]["schema"], 1);
    assert_eq!(a["report"], b["report"]);
    assert_eq!(a["report"]["holes"]["value"], 7);
    assert_eq!(a["report"]["holes"]["provenance"], "computed");
    assert_eq!(a["report"]["expected_holes"]["provenance"], "formula-expected");
}

#[test]
fn oversized_eps_override_fails_validation() {
    let out = holecount(&["holes", "--m", "2", "--eps", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["report"]["nerve"]["matches"], false);
}

#[test]
fn random_bound_is_reproducible_per_seed() {
    let run = |seed: &str| report(&holecount(&["random-bound", "--n", "5", "--trials", "6", "--seed", seed]));
    let (a, b, c) = (run("17"), run("17"), run("18"));
    assert_eq!(a["report"], b["report"]);
    assert_ne!(a["report"]["results"], c["report"]["results"]);
    assert_eq!(a["report"]["all_hold"], true);
    assert_eq!(a["report"]["results"].as_array().unwrap().len(), 6);
}

#[test]
fn export_writes_meshes() {
    let dir = scratch_dir("export");
    let out = holecount(&["export", "--m", "1", "--digits", "6", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["body.obj", "A1.obj", "B1.obj", "C1.obj"] {
        let text = fs::read_to_string(dir.join(name)).unwrap();
        assert!(text.lines().any(|l| l.starts_with("v ")));
        assert!(text.lines().any(|l| l.starts_with("f ")));
    }
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn out_directory_receives_json_and_csv() {
    let dir = scratch_dir("out");
    let out = holecount(&["holes", "--m", "1", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json: Value = serde_json::from_str(&fs::read_to_string(dir.join("holes-m1.json")).unwrap()).unwrap();
    assert_eq!(json["report"]["holes"]["value"], 1);
    let csv = fs::read_to_string(dir.join("holes-m1.csv")).unwrap();
    assert!(csv.starts_with("m,n,"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn config_file_is_read_and_flags_win() {
    let dir = scratch_dir("config");
    let path = dir.join("run.conf");
    fs::write(&path, "# warm-up run\nm = 3\n").unwrap();
    let from_file = report(&holecount(&["warmup", "--no-oracle", "--config", path.to_str().unwrap()]));
    assert_eq!(from_file["report"]["layout"]["m"], 3);
    assert_eq!(from_file["report"]["holes"]["value"], 7);
    let overridden = report(&holecount(&["warmup", "--no-oracle", "--m", "2", "--config", path.to_str().unwrap()]));
    assert_eq!(overridden["report"]["layout"]["m"], 2);
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn config_parsing_rejects_unknown_keys() {
    let entries = parse_config_text("m=2\ngamma-length = 5\neps = 1/100\n").unwrap();
    let config = RunConfig::from_entries(&entries).unwrap();
    assert_eq!(config.m, Some(2));
    assert_eq!(config.gamma_length, Some(5));
    assert_eq!(config.eps().unwrap().unwrap().to_string(), "1/100");
    let bad = parse_config_text("colour = blue\n").unwrap();
    assert!(RunConfig::from_entries(&bad).is_err());
    assert!(parse_config_text("no equals sign\n").is_err());
}

#[test]
fn warmup_below_two_is_an_input_error() {
    let out = holecount(&["warmup", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = report(&out);
    assert_eq!(err["schema"], 1);
    assert!(err["error"]["message"].as_str().unwrap().contains("m"));
}

#[test]
fn malformed_rational_is_reported() {
    let out = holecount(&["holes", "--m", "2", "--eps", "one/half"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["error"]["kind"], "input");
}
