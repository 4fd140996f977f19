use std::path::Path;
use std::process::Command as Process;

use nlho_cli::{emit, Format};
use nlho_gcs::{ModelParams64, Observable};

const BIN: &str = env!("CARGO_BIN_EXE_nlho");

fn nlho(args: &[&str]) -> (i32, String) {
    let out = Process::new(BIN).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn records(csv_text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(csv_text.as_bytes())
        .records()
        .map(Result::unwrap)
        .collect()
}

fn field(r: &csv::StringRecord, i: usize) -> Option<f64> {
    let s = &r[i];
    (!s.is_empty()).then(|| s.parse().unwrap())
}

#[test]
fn empty_rows_give_header_only() {
    let mut buf = Vec::new();
    emit(&[], Format::Csv, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.ends_with('\n'));
}

#[test]
fn verify_position_row() {
    let (code, out) = nlho(&[
        "verify", "--beta", "1", "--lambda", "0.01", "--J", "1", "--gamma", "0",
    ]);
    assert_eq!(code, 0);
    let rows = records(&out);
    let x = rows.iter().find(|r| &r[7] == "x").unwrap();
    let analytic = field(x, 8).unwrap();
    assert!((analytic - 2.0_f64.sqrt() * 0.99).abs() < 1e-15);
    assert!((analytic - 1.400_071_426_749_364).abs() < 1e-12);
    assert!(field(x, 9).is_some());
    // 20 stability draws, two rows each
    assert_eq!(
        rows.iter()
            .filter(|r| &r[7] == "temporal_stability")
            .count(),
        20
    );
    assert!(rows.iter().all(|r| !r[11].contains("invariant_violation")));
}

#[test]
fn printed_mandel_changes_sign_between_grid_points() {
    let (code, out) = nlho(&["mandel", "--lambda-prime", "0.1", "--J-range", "0:1:0.05"]);
    assert_eq!(code, 0);
    let rows = records(&out);
    let q: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| &r[7] == "mandel_q")
        .map(|r| (field(r, 4).unwrap(), field(r, 8).unwrap()))
        .collect();
    assert_eq!(q.len(), 21);
    let changes: Vec<f64> = q
        .windows(2)
        .filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0))
        .map(|w| w[0].0)
        .collect();
    assert_eq!(changes.len(), 1);
    assert!((changes[0] - 0.55).abs() < 1e-12);
    let root = rows
        .iter()
        .find(|r| &r[7] == "mandel_root_printed")
        .unwrap();
    assert!((field(root, 8).unwrap() - (57.0_f64.sqrt() - 3.0) / 8.0).abs() < 1e-15);
}

#[test]
fn revival_reaches_one_at_revival_time() {
    let (code, out) = nlho(&["revival", "--beta", "1", "--lambda", "0.1", "--J", "0.5"]);
    assert_eq!(code, 0);
    let rows = records(&out);
    let last = rows.iter().rfind(|r| &r[7] == "autocorrelation").unwrap();
    assert!((field(last, 6).unwrap() - 40.0 * std::f64::consts::PI).abs() < 1e-12);
    assert!(field(last, 9).unwrap() >= 0.999_999);
    // J = 0.5 leaves more than 1e-10 beyond the cutoff, so --strict refuses it
    assert!(last[11].contains("tail_beyond_guard"));
    assert_eq!(
        nlho(&["revival", "--lambda", "0.1", "--J", "0.5", "--strict"]).0,
        1
    );
    assert_eq!(
        nlho(&["revival", "--lambda", "0.1", "--J", "0.2", "--strict"]).0,
        0
    );
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        nlho(&["state", "--lambda", "0.1", "--lambda-prime", "0.1"]).0,
        2
    );
    assert_eq!(nlho(&["nonsense"]).0, 2);
    assert_eq!(nlho(&["state", "--J", "1:0:0.1"]).0, 2);
    assert_eq!(nlho(&["state", "--lambda-prime", "3"]).0, 2);
    assert_eq!(nlho(&["state", "--J", "-1"]).0, 2);
}

#[test]
fn analytic_column_recomputes_from_row_inputs() {
    let (_, out) = nlho(&[
        "observables",
        "--lambda-prime",
        "0.03",
        "--J",
        "0.2:1:0.4",
        "--gamma",
        "0:1:0.5",
    ]);
    let rows = records(&out);
    assert_eq!(rows.len(), 3 * 3 * Observable::ALL.len());
    for r in &rows {
        let p =
            ModelParams64::with_lambda_prime(field(r, 1).unwrap(), field(r, 3).unwrap()).unwrap();
        let o = Observable::ALL.iter().find(|o| o.name() == &r[7]).unwrap();
        let value = o.analytic(&p, field(r, 4).unwrap(), field(r, 5).unwrap());
        assert_eq!(value, field(r, 8).unwrap(), "{}", &r[7]);
    }
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    full.extend(["--out", p]);
    assert_eq!(
        nlho_cli::main_with(std::iter::once("nlho").chain(full.iter().copied())),
        0
    );
    std::fs::read(&path).unwrap()
}

#[test]
fn every_command_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 9] = [
        &["spectrum", "--lambda", "0.1"],
        &["state", "--lambda", "0.05", "--J", "0.5"],
        &[
            "observables",
            "--lambda-prime",
            "0:0.02:0.01",
            "--J",
            "0.5:1:0.5",
        ],
        &["verify", "--lambda", "0.01", "--seed", "11"],
        &["evolve", "--lambda", "0.02", "--J", "0.3", "--t", "0:3:0.5"],
        &[
            "revival",
            "--lambda",
            "0.2",
            "--J",
            "0.2",
            "--t",
            "0:10:0.25",
        ],
        &["mandel", "--lambda-prime", "0.05", "--J", "0.1:1:0.1"],
        &[
            "eom",
            "--lambda-prime",
            "0.01",
            "--J",
            "1",
            "--gamma",
            "0:1:0.5",
        ],
        &["verify", "--lambda", "0.01", "--format", "json"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let a = run_to(dir.path(), &format!("a{i}"), args);
        let b = run_to(dir.path(), &format!("b{i}"), args);
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn seed_changes_the_stability_sample() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_to(dir.path(), "a", &["verify", "--seed", "1"]);
    let b = run_to(dir.path(), "b", &["verify", "--seed", "2"]);
    assert_ne!(a, b);
}

#[test]
fn json_output_parses() {
    let (code, out) = nlho(&["eom", "--lambda-prime", "0", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = v.as_array().unwrap();
    let h = rows
        .iter()
        .find(|r| r["observable"] == "xddot_heisenberg")
        .unwrap();
    assert!(h["discrepancy"].as_f64().unwrap() < 1e-8);
}

#[test]
fn config_file_feeds_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "lambda_prime = 0.05\nJ = \"0.5:1:0.5\"\ngamma = 0.25\n",
    )
    .unwrap();
    let (code, out) = nlho(&["observables", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let rows = records(&out);
    assert_eq!(rows.len(), 2 * Observable::ALL.len());
    assert!(rows
        .iter()
        .all(|r| field(r, 3) == Some(0.05) && field(r, 5) == Some(0.25)));
    std::fs::write(&cfg, "lambda = 0.1\nlambda_prime = 0.1\n").unwrap();
    assert_eq!(nlho(&["state", "--config", cfg.to_str().unwrap()]).0, 2);
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(nlho(&["state", "--config", cfg.to_str().unwrap()]).0, 2);
}
