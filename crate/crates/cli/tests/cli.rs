use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn lobav(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lobav"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn run_into(dir: &Path, args: &[&str]) -> Output {
    let mut all: Vec<&str> = args.to_vec();
    let d = dir.to_str().unwrap();
    all.extend(["--out", d]);
    lobav(&all)
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect()
}

fn parse_frac(s: &str) -> f64 {
    let (n, d) = s.split_once('/').unwrap();
    n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap()
}

#[test]
fn zero_paths_is_a_usage_error() {
    let t = TempDir::new().unwrap();
    let o = run_into(
        &t.path().join("o"),
        &[
            "simulate",
            "--mu",
            "2",
            "--epsilon",
            "3",
            "--paths",
            "0",
            "--seed",
            "7",
        ],
    );
    assert_eq!(code(&o), 2);
    assert!(!t.path().join("o").exists());
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(
        code(&lobav(&[
            "simulate",
            "--mu",
            "0",
            "--epsilon",
            "1",
            "--paths",
            "5",
            "--seed",
            "1"
        ])),
        2
    );
    assert_eq!(code(&lobav(&["exact", "--target", "t1"])), 2);
    assert_eq!(code(&lobav(&["frobnicate"])), 2);
    assert_eq!(code(&lobav(&["--help"])), 0);
}

#[test]
fn simulate_is_deterministic_across_runs_and_threads() {
    let t = TempDir::new().unwrap();
    let args = [
        "simulate",
        "--mu",
        "2",
        "--epsilon",
        "3",
        "--paths",
        "20000",
        "--seed",
        "7",
    ];
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "4", "4"].iter().enumerate() {
        let dir = t.path().join(format!("run{i}"));
        let mut a = vec!["--threads", threads];
        a.extend(args);
        assert_eq!(code(&run_into(&dir, &a)), 0);
        outputs.push(fs::read(dir.join("distribution.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
}

#[test]
fn simulated_full_avalanche_interval_covers_table_value() {
    let t = TempDir::new().unwrap();
    let o = run_into(
        t.path(),
        &[
            "simulate",
            "--mu",
            "2",
            "--epsilon",
            "3",
            "--paths",
            "1000000",
            "--seed",
            "7",
            "--quantity",
            "full",
        ],
    );
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&t.path().join("distribution.csv"));
    let row = rows.iter().find(|r| r[0] == "4").unwrap();
    let (lo, hi): (f64, f64) = (row[4].parse().unwrap(), row[5].parse().unwrap());
    assert!(lo <= 9.0 / 128.0 && 9.0 / 128.0 <= hi, "[{lo}, {hi}]");
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(t.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["seed"], 7);
    assert_eq!(manifest["config"]["mode"], "full-book");
    assert_eq!(manifest["summary"]["censored_count"], 0);
}

#[test]
fn exact_targets() {
    let t = TempDir::new().unwrap();
    let o = run_into(
        &t.path().join("t1"),
        &["exact", "--target", "t1", "--mu", "3", "--order", "10"],
    );
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&t.path().join("t1/exact.csv"));
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[6], ["7", "5/128"]);

    run_into(
        &t.path().join("m"),
        &["exact", "--target", "moments", "--epsilon", "1"],
    );
    assert_eq!(
        csv_rows(&t.path().join("m/exact.csv")),
        [["1", "1/1", "2/1"]]
    );

    run_into(
        &t.path().join("q"),
        &["exact", "--target", "q", "--mu", "5", "--epsilon", "9"],
    );
    assert_eq!(csv_rows(&t.path().join("q/exact.csv")), [["9", "63/256"]]);
}

#[test]
fn exact_decimal_columns_agree_with_fractions() {
    let t = TempDir::new().unwrap();
    let o = run_into(
        t.path(),
        &[
            "exact",
            "--target",
            "empty-t1",
            "--mu",
            "2",
            "--order",
            "12",
            "--decimal",
        ],
    );
    assert_eq!(code(&o), 0);
    for row in csv_rows(&t.path().join("exact.csv")) {
        assert_eq!(row.len(), 7);
        for pair in row[1..].chunks(2) {
            let d: f64 = pair[1].parse().unwrap();
            assert!((parse_frac(&pair[0]) - d).abs() <= 1e-12 * d.abs().max(1e-300));
        }
    }
}

#[test]
fn verify_suites_pass() {
    let o = lobav(&["verify", "--suite", "tables"]);
    assert_eq!(code(&o), 0);
    let o = lobav(&["verify", "--suite", "oracle", "--budget", "quick"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.lines().all(|l| !l.starts_with("FAIL")));
}

#[test]
fn verify_report_file() {
    let t = TempDir::new().unwrap();
    let o = run_into(t.path(), &["verify", "--suite", "limits"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&t.path().join("verify.csv"));
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[4] == "PASS"));
}

#[test]
fn limit_targets() {
    let t = TempDir::new().unwrap();
    run_into(
        &t.path().join("s"),
        &[
            "limit",
            "--target",
            "simplified",
            "--lambda-grid",
            "1",
            "--epsilon",
            "1",
        ],
    );
    let v: f64 = csv_rows(&t.path().join("s/limit.csv"))[0][2]
        .parse()
        .unwrap();
    assert!((v - 0.537193).abs() < 1e-6, "{v}");

    run_into(
        &t.path().join("h"),
        &[
            "limit",
            "--target",
            "hyperbolic",
            "--mu",
            "1",
            "--lambda-grid",
            "1",
        ],
    );
    for row in csv_rows(&t.path().join("h/limit.csv")) {
        assert!(row[7].parse::<f64>().unwrap().abs() < 1e-12);
    }

    let o = run_into(
        &t.path().join("c"),
        &[
            "limit",
            "--target",
            "converge-simplified",
            "--epsilon",
            "1",
            "--lambda-grid",
            "1",
        ],
    );
    assert_eq!(code(&o), 0);
    let order: f64 = csv_rows(&t.path().join("c/limit.csv"))[0][4]
        .parse()
        .unwrap();
    assert!((0.35..=0.65).contains(&order), "{order}");
}

#[test]
fn collisions_need_force() {
    let t = TempDir::new().unwrap();
    let args = ["exact", "--target", "classes", "--mu", "2"];
    assert_eq!(code(&run_into(t.path(), &args)), 0);
    let before = fs::read(t.path().join("exact.csv")).unwrap();
    assert_eq!(code(&run_into(t.path(), &args)), 3);
    assert_eq!(fs::read(t.path().join("exact.csv")).unwrap(), before);
    let mut forced = args.to_vec();
    forced.push("--force");
    assert_eq!(code(&run_into(t.path(), &forced)), 0);
}

#[test]
fn rerun_reproduces_digests() {
    let t = TempDir::new().unwrap();
    let first = t.path().join("first");
    let o = run_into(
        &first,
        &[
            "simulate",
            "--mu",
            "1",
            "--epsilon",
            "2",
            "--paths",
            "5000",
            "--seed",
            "3",
            "--quantity",
            "simplified",
        ],
    );
    assert_eq!(code(&o), 0);
    let manifest = first.join("manifest.json");
    let again = t.path().join("again");
    let o = lobav(&[
        "rerun",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        again.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        fs::read(first.join("distribution.csv")).unwrap(),
        fs::read(again.join("distribution.csv")).unwrap()
    );

    // A tampered digest is reported as a mismatch.
    let text = fs::read_to_string(&manifest).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value["outputs"][0]["sha256"] = "00".into();
    fs::write(&manifest, value.to_string()).unwrap();
    let o = lobav(&[
        "rerun",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        again.to_str().unwrap(),
        "--force",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let t = TempDir::new().unwrap();
    let blocker = t.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = run_into(
        &blocker.join("sub"),
        &["exact", "--target", "q", "--mu", "1", "--epsilon", "1"],
    );
    assert_eq!(code(&o), 3);
}
