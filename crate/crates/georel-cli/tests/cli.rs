//! End-to-end tests of the `georel` binary: exit-code contract, output
//! determinism, CSV round-trips.

use std::path::Path;
use std::process::{Command, Output};

use georel_cli::table_csv::{self, fmt_float};
use georel_cli::tables::{render_table, TableOverrides};

fn georel() -> Command {
    Command::new(env!("CARGO_BIN_EXE_georel"))
}

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = georel();
    cmd.args(args);
    cmd.env_remove("GEOREL_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.display().to_string()
}

#[test]
fn estimate_mle_example() {
    let dir = tempfile::tempdir().unwrap();
    let sample = write(dir.path(), "s.txt", "3 5\n");
    let out = run(
        &["estimate", &sample, "--target", "rt", "--t", "4", "--method", "mle"],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("value=0.5"), "{stdout}");
}

#[test]
fn estimate_ue_below_support_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let sample = write(dir.path(), "s.txt", "3 5\n");
    let out = run(
        &["estimate", &sample, "--target", "rt", "--t", "3", "--method", "ue"],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("value=1"));
}

#[test]
fn empty_sample_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let sample = write(dir.path(), "s.txt", "# nothing here\n");
    let out = run(&["estimate", &sample, "--target", "rt", "--t", "4"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("empty"));
}

#[test]
fn parse_error_reports_line_and_column_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let sample = write(dir.path(), "s.txt", "3 5\n9 oops\n");
    let out = run(&["estimate", &sample, "--target", "rt", "--t", "4"], &[]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("line 2"), "{stderr}");
    assert!(stderr.contains("column 3"), "{stderr}");
}

#[test]
fn estimator_domain_violations_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    // m >= n for the system-reliability UE
    let sample = write(dir.path(), "s.txt", "1 2 3\n");
    let out = run(
        &[
            "estimate", &sample, "--target", "rst", "--t", "2", "--k", "2", "--m", "8",
            "--method", "ue",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(3));

    // censored file with no observed failures: p = 0
    let censored = write(dir.path(), "c.txt", "c=5 n=3\n");
    let out = run(
        &["estimate", &censored, "--target", "rt", "--t", "4"],
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("no failures observed"));
}

#[test]
fn censored_file_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let censored = write(dir.path(), "c.txt", "c=5 n=3\n2 4\n");
    let out = run(
        &["estimate", &censored, "--target", "rt", "--t", "4", "--json"],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("\"method\":\"mle-censored\""), "{stdout}");
    assert!(stdout.contains("0.5625"), "{stdout}");
}

#[test]
fn stress_strength_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.txt", "3 5\n");
    let y = write(dir.path(), "y.txt", "4 8\n");
    let out = run(
        &["estimate", &x, "--strength", &y, "--target", "r", "--method", "mle"],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("value=0.875"));
}

#[test]
fn unknown_table_id_exits_2() {
    let out = run(&["table", "--id", "99"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_output_is_seed_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let out = run(
            &[
                "table", "--id", "2", "--reps", "200", "--seed", "9",
                "--out", &path.display().to_string(),
            ],
            &[("GEOREL_THREADS", threads)],
        );
        assert_eq!(out.status.code(), Some(0));
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b);
}

#[test]
fn invalid_threads_env_exits_2() {
    let out = run(&["table", "--id", "2", "--reps", "10"], &[("GEOREL_THREADS", "lots")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hist_conserves_counts_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hist.csv");
    let out = run(
        &[
            "hist", "--reps", "300", "--bins", "7", "--seed", "3",
            "--out", &path.display().to_string(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let table = table_csv::parse_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(table.rows.len(), 7);
    let total: f64 = (0..7).map(|i| table.number(i, 2).unwrap()).sum();
    assert_eq!(total, 300.0);

    let out = run(&["hist", "--theta", "1.3", "--reps", "10"], &[]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["hist", "--bins", "0", "--reps", "10"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_is_byte_deterministic_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let out_csv = dir.path().join("study.csv");
    let spec = format!(
        r#"{{
            "study": "reliability",
            "params": {{ "r": 15, "theta": 0.8 }},
            "n": 20, "censor_at": 25, "mission_time": 25,
            "system": {{ "k": 2, "m": 8 }},
            "axis": {{ "kind": "sample-size", "values": [10, 20] }},
            "reps": 100, "seed": 11,
            "output": "{}"
        }}"#,
        out_csv.display()
    );
    let spec_path = write(dir.path(), "spec.json", &spec);

    let out = run(&["simulate", "--spec", &spec_path], &[]);
    assert_eq!(out.status.code(), Some(0));
    let first = std::fs::read(&out_csv).unwrap();
    assert!(dir.path().join("study.csv.manifest.json").exists());

    let out = run(&["simulate", "--spec", &spec_path], &[]);
    assert_eq!(out.status.code(), Some(0));
    let second = std::fs::read(&out_csv).unwrap();
    assert_eq!(first, second);

    // reps = 0 is rejected before any computation
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{ "study": "reliability", "reps": 0 }"#,
    );
    let out = run(&["simulate", "--spec", &bad], &[]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("reps"), "{stderr}");
    assert!(stderr.contains("output"), "{stderr}");
}

// every numeric cell of an emitted CSV re-parses to the exact f64 that was
// serialized (17 significant digits)
#[test]
fn csv_round_trip_is_exact() {
    let csv = render_table(
        2,
        &TableOverrides {
            reps: Some(50),
            seed: Some(4),
        },
    )
    .unwrap();
    let table = table_csv::parse_csv(&csv).unwrap();
    assert!(!table.rows.is_empty());
    for (ri, row) in table.rows.iter().enumerate() {
        for (ci, cell) in row.iter().enumerate().skip(1) {
            let value = table.number(ri, ci).unwrap();
            assert_eq!(
                &fmt_float(value),
                cell,
                "cell ({ri}, {ci}) did not round-trip"
            );
        }
    }
}
