use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hexplace::ensemble::COMPARISON_HEADER;
use hexplace::scenario::{parse_scenario, preset_scenario, Preset};

fn hexplace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hexplace"))
        .args(args)
        .env("HEXPLACE_LOG", "error")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn gen(dir: &Path, preset: &str) -> String {
    let path = dir.join(format!("{preset}.json"));
    let out = hexplace(&["gen-hex", "--preset", preset, "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_hex_writes_every_preset() {
    let dir = tempfile::tempdir().unwrap();
    for preset in Preset::all() {
        let path = gen(dir.path(), &preset.name());
        let parsed = parse_scenario(&fs::read_to_string(path).unwrap()).unwrap();
        assert_eq!(parsed, preset_scenario(preset));
    }
}

#[test]
fn gen_hex_rejects_unknown_preset() {
    let dir = tempfile::tempdir().unwrap();
    let out = hexplace(&["gen-hex", "--preset", "nope", "--out", dir.path().join("x.json").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("baseline"));
}

#[test]
fn run_writes_timeseries_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = gen(dir.path(), "baseline");
    let out_dir = dir.path().join("out");
    let out_str = out_dir.to_str().unwrap();
    let out = hexplace(&["run", "--scenario", &scenario, "--seed", "5", "--out", out_str, "--max-steps", "40"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());

    let csv = fs::read_to_string(out_dir.join("timeseries_5.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("step,region_id,uninfected,infected,immune,dead"));
    // 41 snapshots, 19 regions plus the aggregate each.
    assert_eq!(lines.count(), 41 * 20);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("summary_5.json")).unwrap()).unwrap();
    assert_eq!(summary["initialPopulation"], 1530);
    assert_eq!(summary["simulationPeriod"], 40);
    assert_eq!(summary["truncated"], true);

    // Same inputs, same bytes.
    let again = dir.path().join("again");
    hexplace(&["run", "--scenario", &scenario, "--seed", "5", "--out", again.to_str().unwrap(), "--max-steps", "40"]);
    assert_eq!(csv, fs::read_to_string(again.join("timeseries_5.csv")).unwrap());
}

#[test]
fn bad_scenarios_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"boundaries\": [}").unwrap();
    let out_dir = dir.path().join("o");
    let out = hexplace(&["run", "--scenario", bad.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.json"));

    let missing = dir.path().join("missing.json");
    let out = hexplace(&["run", "--scenario", missing.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = gen(dir.path(), "baseline");
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let under_file = blocker.join("out");
    let out = hexplace(&["run", "--scenario", &scenario, "--out", under_file.to_str().unwrap(), "--max-steps", "5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&hexplace(&[])), 1);
    assert_eq!(code(&hexplace(&["frobnicate"])), 1);
    assert_eq!(code(&hexplace(&["run", "--seed", "1"])), 1);
    assert_eq!(code(&hexplace(&["replicate", "--scenario", "x.json", "--out", "o", "--n", "2", "--seeds", "1,2"])), 1);
    assert_eq!(code(&hexplace(&["--help"])), 0);
}

#[test]
fn replicate_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = gen(dir.path(), "combined");
    let mut ensembles = Vec::new();
    for jobs in ["1", "8"] {
        let out_dir = dir.path().join(format!("jobs{jobs}"));
        let out = hexplace(&[
            "replicate", "--scenario", &scenario, "--n", "3", "--jobs", jobs,
            "--max-steps", "60", "--out", out_dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        for seed in 0..3 {
            assert!(out_dir.join(format!("timeseries_{seed}.csv")).exists());
            assert!(out_dir.join(format!("summary_{seed}.json")).exists());
        }
        ensembles.push(fs::read(out_dir.join("ensemble.json")).unwrap());
    }
    assert_eq!(ensembles[0], ensembles[1]);
}

#[test]
fn single_replication_matches_run() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = gen(dir.path(), "lockdown");
    let rep = dir.path().join("rep");
    let one = dir.path().join("one");
    let out = hexplace(&["replicate", "--scenario", &scenario, "--seeds", "9", "--max-steps", "50", "--out", rep.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    hexplace(&["run", "--scenario", &scenario, "--seed", "9", "--max-steps", "50", "--out", one.to_str().unwrap()]);
    assert_eq!(
        fs::read(rep.join("summary_9.json")).unwrap(),
        fs::read(one.join("summary_9.json")).unwrap()
    );
    let ensemble: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(rep.join("ensemble.json")).unwrap()).unwrap();
    assert_eq!(ensemble["replications"], 1);
    assert_eq!(ensemble["stdTotalDead"], 0.0);
    assert_eq!(ensemble["seeds"], serde_json::json!([9]));
}

#[test]
fn compare_ranks_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "baseline");
    let b_path = dir.path().join("copy.json");
    fs::copy(&a, &b_path).unwrap();
    let b = b_path.to_str().unwrap();
    let table = dir.path().join("t/compare.csv");
    let t = table.to_str().unwrap();

    let out = hexplace(&["compare", "--scenario", &a, "--scenario", b, "--n", "2", "--max-steps", "40", "--out", t]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&table).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], COMPARISON_HEADER);
    assert_eq!(lines.len(), 3);
    let strip = |l: &str| l.split_once(',').unwrap().1.to_string();
    assert_eq!(strip(lines[1]), strip(lines[2]));

    assert_eq!(code(&hexplace(&["compare", "--scenario", &a, "--n", "2", "--out", t])), 1);
    assert_eq!(code(&hexplace(&["compare", "--scenario", &a, "--scenario", b, "--n", "0", "--out", t])), 1);
}
