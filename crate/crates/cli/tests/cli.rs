use std::path::Path;
use std::process::{Command, Output};

use multirot_cli::config::{BasisSpec, ExperimentConfig, Kind, StrategySpec};

fn multirot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multirot")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn rank_of_one_and_sqrt2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let mut cfg = ExperimentConfig::new(Kind::Rank);
    cfg.basis = vec![BasisSpec::sqrt(2)];
    cfg.steps = vec!["1".into(), "sqrt2".into()];
    let path = write_config(dir.path(), "rank.json", &cfg.to_json());
    let o = multirot(&["run", &path, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["rank"], 2);
    let csv = std::fs::read_to_string(out.join("results.csv")).unwrap();
    assert!(csv.starts_with("index,expression,approx\n") && !csv.contains('\r'));
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(dir.path(), "a.json", r#"{"kind": "fourier"}"#);
    assert_eq!(multirot(&["run", &unknown]).status.code(), Some(2));
    let missing = write_config(dir.path(), "b.json", r#"{"kind": "rank", "steps": ["sqrt5"]}"#);
    assert_eq!(multirot(&["run", &missing]).status.code(), Some(2));
    let mut cfg = ExperimentConfig::new(Kind::Orbit);
    cfg.basis = vec![BasisSpec::sqrt(2)];
    cfg.steps = vec!["sqrt2".into()];
    cfg.strategy = Some(StrategySpec::Random { seed: None });
    cfg.n = Some(10);
    let seedless = write_config(dir.path(), "c.json", &cfg.to_json());
    assert_eq!(multirot(&["run", &seedless]).status.code(), Some(2));
    assert_eq!(multirot(&["verify", "no-such-theorem"]).status.code(), Some(2));
}

#[test]
fn guard_exits_3_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = multirot(&["orbit", "--sqrt", "2", "--step", "sqrt2", "--n", "1000000000", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!out.exists());
}

#[test]
fn subcommands_write_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("box");
    let o = multirot(&[
        "boxdim", "--sqrt", "2", "--sqrt", "3", "--step", "sqrt2", "--step", "sqrt3", "--strategy", "greedy-avoid:0.4,0.6", "--n", "20000", "--k-min", "4",
        "--k-max", "10", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(out.join("plot.svg")).unwrap().starts_with("<svg"));

    let out = dir.path().join("embed");
    let o = multirot(&["embed", "--n-max", "12", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["all_within_bounds"], true);
    assert_eq!(summary["induced_distinct_points"], 2);

    let out = dir.path().join("verify");
    let o = multirot(&["verify", "threshold-c", "--params", r#"{"ell_max": 4}"#, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(out.join("results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 5);
}
