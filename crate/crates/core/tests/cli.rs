//! The `minmax` binary: outputs, exit codes and determinism.

use std::path::Path;
use std::process::{Command, Output};

use minmax_penalty::analysis::{minmax_penalty, AnalysisReport};
use minmax_penalty::envs::chain_walk;
use minmax_penalty::experiment::{read_seed_csv, SeedMetrics};
use minmax_penalty::format::write_mdp;

fn minmax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minmax"))
        .args(args)
        .env("MINMAX_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn chain_file(dir: &Path, p: f64) -> String {
    let path = dir.join(format!("chain_{p}.toml"));
    std::fs::write(&path, write_mdp(&chain_walk(p).unwrap())).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn analyze_reports_the_library_numbers() {
    let dir = tempfile::tempdir().unwrap();
    for p in [0.0, 0.25] {
        let file = chain_file(dir.path(), p);
        let out_dir = dir.path().join(format!("out_{p}"));
        let out = minmax(&[
            "analyze",
            "--mdp",
            &file,
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let printed = AnalysisReport::from_toml(&String::from_utf8(out.stdout).unwrap()).unwrap();
        let written = AnalysisReport::from_toml(
            &std::fs::read_to_string(out_dir.join("analysis.toml")).unwrap(),
        )
        .unwrap();
        let direct = minmax_penalty(&chain_walk(p).unwrap()).unwrap().report();
        assert_eq!(printed, direct);
        assert_eq!(written, direct);
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = minmax(&["analyze", "--mdp", &chain_file(dir.path(), 0.5)]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("uncontrollable") && stderr.contains("C = 0"),
        "{stderr}"
    );

    let out = minmax(&[
        "analyze",
        "--mdp",
        &chain_file(dir.path(), 0.25),
        "--policy-cap",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(4));

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "num_states = 2\nnum_actions = 1\n").unwrap();
    let out = minmax(&["analyze", "--mdp", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing field"));

    assert_eq!(
        minmax(&["chainwalk", "--p", "1", "--penalty", "-1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        minmax(&["sweep", "--kind", "bogus", "--settings", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn states_min_variant_is_reachable() {
    let dir = tempfile::tempdir().unwrap();
    let file = chain_file(dir.path(), 0.25);
    let out = minmax(&[
        "analyze",
        "--mdp",
        &file,
        "--controllability-variant",
        "states-min",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn chainwalk_table() {
    let out = minmax(&["chainwalk", "--p", "0", "--penalty", "-2.01,-1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "p,label,penalty,failure,optimal_failure,vi_sweeps"
    );
    assert!(lines[1].starts_with("0,custom,-2.01,0,"));
    assert!(lines[2].starts_with("0,custom,-1,1,"));
    assert!(lines.iter().any(|l| l.starts_with("0,minmax,")));
}

#[test]
fn sweep_is_deterministic_and_aggregates_raw_rows() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let out_dir = dir.path().join(name);
        let out = Command::new(env!("CARGO_BIN_EXE_minmax"))
            .args([
                "sweep",
                "--kind",
                "penalty",
                "--settings",
                "0,-1",
                "--seeds",
                "3",
                "--seed",
                "7",
            ])
            .args(["--episodes", "600", "--out", out_dir.to_str().unwrap()])
            .env("MINMAX_THREADS", threads)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let table = std::fs::read_to_string(out_dir.join("penalty_sweep.csv")).unwrap();
        let raw = std::fs::read_to_string(out_dir.join("penalty_sweep_seeds.csv")).unwrap();
        (String::from_utf8(out.stdout).unwrap(), table, raw)
    };
    let a = run("a", "1");
    let b = run("b", "4");
    assert_eq!(a, b);
    let (stdout, table, raw) = a;
    assert_eq!(stdout, table);
    assert!(raw.contains("# seeds: 7 8 9"));

    let rows: Vec<(String, SeedMetrics)> = read_seed_csv(&raw).unwrap();
    let mut reader = csv::Reader::from_reader(table.as_bytes());
    let header = reader.headers().unwrap().clone();
    assert_eq!(
        header.iter().collect::<Vec<_>>(),
        [
            "penalty",
            "failure_rate",
            "failure_stderr",
            "mean_return",
            "steps_to_convergence"
        ]
    );
    let mut n_rows = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        n_rows += 1;
        let arm: Vec<&SeedMetrics> = rows
            .iter()
            .filter(|(l, _)| l == &rec[0])
            .map(|(_, m)| m)
            .collect();
        assert_eq!(arm.len(), 3);
        let mean = |f: &dyn Fn(&SeedMetrics) -> f64| arm.iter().map(|m| f(m)).sum::<f64>() / 3.0;
        let close =
            |col: usize, v: f64| assert!((rec[col].parse::<f64>().unwrap() - v).abs() < 1e-12);
        close(1, mean(&|m| m.failure_rate));
        close(3, mean(&|m| m.mean_return));
        close(4, mean(&|m| m.steps_to_convergence as f64));
    }
    assert_eq!(n_rows, 3);
    assert!(table.lines().last().unwrap().starts_with("adaptive,"));
}

#[test]
fn slip_sweep_toml_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = minmax(&[
        "sweep",
        "--kind",
        "slip",
        "--settings",
        "0,0.5",
        "--seeds",
        "2",
        "--episodes",
        "200",
        "--format",
        "toml",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("slip_sweep.toml")).unwrap();
    let result = minmax_penalty::experiment::sweep_from_toml(&text).unwrap();
    assert_eq!(result.rows.len(), 2);
    assert_eq!(result.seeds, vec![0, 1]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), text);
}

#[test]
fn train_writes_episode_log() {
    let dir = tempfile::tempdir().unwrap();
    let out = minmax(&[
        "train",
        "--slip",
        "0",
        "--episodes",
        "50",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let log = std::fs::read_to_string(dir.path().join("episodes.csv")).unwrap();
    assert_eq!(
        log.lines().next(),
        Some("episode,return,steps,terminal,penalty")
    );
    assert_eq!(log.lines().count(), 51);
}
