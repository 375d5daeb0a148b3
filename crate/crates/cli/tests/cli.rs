use std::path::Path;
use std::process::{Command, Output};

use pathcensus::analysis::{ConjectureVerdict, OracleReport, PropertyReport, ScanReport};
use pathcensus::BigCount;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathcensus"))
        .args(args)
        .env_remove("PATHCENSUS_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn eval_prints_value_and_times_to_stderr() {
    let out = run(&["eval", "2,11,5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "637924\n");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("took"), "{err}");
    assert!(err.contains("cache hit"), "{err}");

    assert_eq!(stdout(&run(&["eval", "7"])), "1\n");
    assert_eq!(stdout(&run(&["eval", "1,2,1,1"])), "40\n");
}

#[test]
fn eval_rejects_bad_input() {
    for bad in ["1,0,2", "abc", "", "1,,2", "-1"] {
        let out = run(&["eval", bad]);
        assert_eq!(code(&out), 2, "input {bad:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn census_examples() {
    let out = run(&["census", "-n", "3", "1,-1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1\nsymmetric\n");

    let out = run(&["census", "-n", "8", "3,-4"]);
    assert_eq!(stdout(&out), "35\nnon-symmetric\n");

    let out = run(&["census", "-n", "4", "1,-1"]);
    assert_eq!(code(&out), 2);

    let out = run(&["census", "-n", "6", "-1,2,-2", "--oracle"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("agrees"));
}

#[test]
fn scan_csv_for_three() {
    let out = run(&["scan", "-p", "3", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows.last(), Some(&"1,1,1;5"));
}

#[test]
fn scan_sort_orders() {
    let asc = stdout(&run(&["scan", "-p", "5", "--format", "csv"]));
    let desc = stdout(&run(&["scan", "-p", "5", "--format", "csv", "--sort", "desc"]));
    let mut reversed: Vec<&str> = asc.lines().collect();
    reversed.reverse();
    assert_eq!(desc.lines().collect::<Vec<_>>(), reversed);

    let by_comp = stdout(&run(&["scan", "-p", "4", "--format", "csv", "--sort", "composition"]));
    assert_eq!(by_comp.lines().next(), Some("1,1,1,1;16"));
    assert_eq!(by_comp.lines().last(), Some("4;1"));
}

#[test]
fn limits_need_force() {
    let out = run(&["scan", "-p", "19"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());

    let out = run(&["--p-limit", "4", "scan", "-p", "5"]);
    assert_eq!(code(&out), 2);
    let out = run(&["--p-limit", "4", "--force", "scan", "-p", "5"]);
    assert_eq!(code(&out), 0);

    let out = run(&["verify", "--max-n", "11"]);
    assert_eq!(code(&out), 2);
    let out = run(&["--n-limit", "5", "verify", "--max-n", "6"]);
    assert_eq!(code(&out), 2);

    assert_eq!(code(&run(&["--p-limit", "1", "eval", "1"])), 2);
    assert_eq!(code(&run(&["--n-limit", "2", "eval", "1"])), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["scan"])), 2);
    assert_eq!(code(&run(&["--format", "xml", "eval", "1"])), 2);
    assert_eq!(code(&run(&["conjecture", "--min-p", "2", "--max-p", "4"])), 2);
}

#[test]
fn conjecture_clean() {
    let out = run(&["conjecture", "--max-p", "12", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let verdicts: Vec<ConjectureVerdict<BigCount>> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(verdicts.len(), 10);
    assert!(verdicts.iter().all(|v| v.holds()));
    assert_eq!(verdicts[0].max_value, BigCount::from(5u32));
}

#[test]
fn verify_kinds_clean() {
    for args in [
        &["verify", "--max-n", "7"][..],
        &["verify", "--max-n", "7", "--kind", "nearly-transitive"][..],
        &["verify", "--max-n", "7", "--kind", "random", "--seed", "11"][..],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 0, "{args:?}");
        assert!(stdout(&out).contains(" 0 discrepancies"), "{args:?}");
    }
}

#[test]
fn properties_clean() {
    let out = run(&["properties", "--max-total", "10", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    for line in stdout(&out).lines().skip(1) {
        assert!(line.ends_with(";0"), "{line}");
    }
}

#[test]
fn bench_reports_agreement() {
    let out = run(&["bench", "-p", "10", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).trim_end().ends_with(";true"));
}

fn assert_json_round_trip<T>(args: &[&str])
where
    T: serde::de::DeserializeOwned + serde::Serialize + PartialEq + std::fmt::Debug,
{
    let out = run(args);
    assert_eq!(code(&out), 0, "{args:?}");
    let text = stdout(&out);
    let parsed: T = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
    assert_eq!(again, text, "{args:?}");
    let reparsed: T = serde_json::from_str(&again).unwrap();
    assert_eq!(reparsed, parsed);
}

#[test]
fn json_round_trips() {
    assert_json_round_trip::<ScanReport<BigCount>>(&["scan", "-p", "7", "--format", "json"]);
    assert_json_round_trip::<Vec<ConjectureVerdict<BigCount>>>(&[
        "conjecture", "--max-p", "8", "--format", "json",
    ]);
    assert_json_round_trip::<OracleReport<BigCount>>(&["verify", "--max-n", "6", "--format", "json"]);
    assert_json_round_trip::<PropertyReport>(&["properties", "--max-total", "8", "--format", "json"]);
}

#[test]
fn json_counts_are_strings() {
    let out = run(&["--force", "eval", "1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let value = v["value"].as_str().expect("decimal string");
    assert!(value.len() > 20, "{value}");
}

#[test]
fn output_independent_of_worker_count() {
    for args in [
        &["scan", "-p", "13", "--format", "csv"][..],
        &["conjecture", "--max-p", "11", "--format", "json"][..],
        &["verify", "--max-n", "7", "--kind", "random", "--seed", "5", "--format", "json"][..],
    ] {
        let mut outputs = Vec::new();
        for jobs in ["1", "2", "4"] {
            let mut full = vec!["--jobs", jobs];
            full.extend_from_slice(args);
            let out = run(&full);
            assert_eq!(code(&out), 0);
            outputs.push(out.stdout);
        }
        assert!(outputs.windows(2).all(|w| w[0] == w[1]), "{args:?}");
    }
}

fn cache_lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

#[test]
fn cache_file_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("memo.txt");
    let p = path.to_str().unwrap();

    let out = run(&["--cache-file", p, "scan", "-p", "6"]);
    assert_eq!(code(&out), 0);
    let lines = cache_lines(&path);
    assert!(lines.contains(&"1,1,1,1,1,1=272".to_string()));
    let mut sorted = lines.clone();
    sorted.sort_by_key(|l| {
        let (c, _) = l.split_once('=').unwrap();
        c.split(',').map(|x| x.parse::<u32>().unwrap()).collect::<Vec<_>>()
    });
    assert_eq!(lines, sorted);

    let out = run(&["--cache-file", p, "eval", "1,1,1,1,1,1"]);
    assert_eq!(stdout(&out), "272\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("loaded"));

    let via_env = Command::new(env!("CARGO_BIN_EXE_pathcensus"))
        .args(["eval", "2,1,2"])
        .env("PATHCENSUS_CACHE", p)
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(via_env.stdout).unwrap(), "19\n");
    assert!(String::from_utf8_lossy(&via_env.stderr).contains("loaded"));
}

#[test]
fn corrupt_cache_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("memo.txt");
    std::fs::write(&path, "1,1=3\n").unwrap();
    let out = run(&["--cache-file", path.to_str().unwrap(), "eval", "1,1"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());

    std::fs::write(&path, "1,1 is two\n").unwrap();
    let out = run(&["--cache-file", path.to_str().unwrap(), "eval", "1,1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn partial_cache_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("memo.txt");
    std::fs::write(&path, "1,2,1=11\n").unwrap();
    let out = run(&["--cache-file", path.to_str().unwrap(), "eval", "1,2,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "11\n");
}
