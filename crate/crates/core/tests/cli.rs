//! End-to-end runs of the `krein-spectra` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_krein-spectra");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Data rows of a CSV report, skipping `#` lines, keyed by header.
fn csv_rows(text: &str) -> Vec<Vec<(String, String)>> {
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            headers
                .iter()
                .cloned()
                .zip(r.iter().map(String::from))
                .collect()
        })
        .collect()
}

fn field<'a>(row: &'a [(String, String)], name: &str) -> &'a str {
    &row.iter()
        .find(|(h, _)| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
        .1
}

#[test]
#[allow(clippy::approx_constant)]
fn inline_solve_finds_half() {
    let out = run(&[
        "solve",
        "--measure",
        "power_law:M=1,p=2,c=1",
        "--b",
        "0.693147",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    let e = report["channels"][0]["E"].as_f64().unwrap();
    // s(E) = ln(1/(1−E)) against the density 1/t²
    let want = 1.0 - (-0.693147f64).exp();
    assert!((e - want).abs() < 1e-10, "{e} vs {want}");
    assert!((e - 0.5).abs() < 1e-6);
    assert_eq!(report["summary"]["n_minus"], 0);
    assert_eq!(report["summary"]["n_plus"], 1);
}

#[test]
fn interval_rows_agree_with_closed_form() {
    let out = run(&["interval", "--alpha", "1", "--kmax", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    let rows = report["model"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    for row in rows {
        let d = row["rel_diff"].as_f64().unwrap();
        assert!(d <= 1e-8, "{row}");
        assert_eq!(row["case"], "Case1");
    }
    let notes = report["summary"]["notes"].as_array().unwrap();
    assert!(notes
        .iter()
        .any(|n| n.as_str().unwrap().contains("1/(2 pi^2)")));
}

#[test]
fn circle_example_counts() {
    let out = run(&[
        "circle",
        "--lambda",
        "1",
        "--alpha",
        "1",
        "--potential",
        "const:1",
        "--kmax",
        "5",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let summary = text.lines().find(|l| l.starts_with("# summary")).unwrap();
    // all 11 channels are attractive; k = 0 has 1 + α v q_0 < 0 at λ = 1 and
    // its root lands above zero
    assert!(summary.contains("N_minus=10"), "{summary}");
    assert!(summary.contains("N_plus=1"), "{summary}");
    assert!(summary.contains("attractive=11"), "{summary}");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 11);
    let positive: Vec<&str> = rows
        .iter()
        .filter(|r| field(r, "E").parse::<f64>().is_ok_and(|e| e > 0.0))
        .map(|r| field(r, "k"))
        .collect();
    assert_eq!(positive, ["0"]);
}

#[test]
fn sweep_reaches_the_plateau() {
    let out = run(&[
        "sweep",
        "--param",
        "alpha",
        "--range=-1e6:-1:7",
        "--log",
        "--kmax",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 14);
    let plateau = 4.0 - 4.0 * (2.0 * 0.577_215_664_901_532_9f64).exp();
    let k2: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| field(r, "k") == "2")
        .map(|r| {
            (
                field(r, "alpha").parse().unwrap(),
                field(r, "E_solver").parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(k2[0].0, -1e6);
    assert!(
        (k2[0].1 - plateau).abs() <= 1e-4,
        "{} vs {plateau}",
        k2[0].1
    );
    // E_k decreases toward the plateau as α → −∞
    assert!(k2.windows(2).all(|w| w[0].1 < w[1].1), "{k2:?}");
}

#[test]
fn single_point_sweep_is_the_interval_table() {
    let sweep = run(&[
        "sweep", "--param", "alpha", "--values", "2", "--kmax", "6", "--format", "csv",
    ]);
    let interval = run(&["interval", "--alpha", "2", "--kmax", "6", "--format", "csv"]);
    assert_eq!(sweep.status.code(), Some(0));
    assert_eq!(interval.status.code(), Some(0));
    let s = csv_rows(std::str::from_utf8(&sweep.stdout).unwrap());
    let i = csv_rows(std::str::from_utf8(&interval.stdout).unwrap());
    assert_eq!(s.len(), i.len());
    for (a, b) in s.iter().zip(&i) {
        assert_eq!(field(a, "alpha"), "2");
        assert_eq!(&a[1..], &b[..]);
    }
}

#[test]
fn embedded_flag_flips_at_the_threshold() {
    let out = run(&["interval", "--alpha", "1", "--kmax", "12"]);
    let report = json(&out);
    let flags: Vec<bool> = report["model"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["embedded"].as_bool().unwrap())
        .collect();
    let first = flags
        .iter()
        .position(|&f| f)
        .expect("some channel is embedded");
    assert_eq!(first, 5, "k = 6 is the first embedded channel at alpha = 1");
    assert!(flags[first..].iter().all(|&f| f));
    assert!(flags[..first].iter().all(|&f| !f));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs = [
        vec!["interval", "--alpha", "0.5", "--kmax", "8", "-o", "a.json"],
        vec![
            "interval",
            "--alpha",
            "0.5",
            "--kmax",
            "8",
            "-o",
            "b.json",
            "--sequential",
        ],
        vec![
            "circle", "--lambda", "4", "--alpha", "0.3", "--kmax", "4", "-o", "a.csv", "--format",
            "csv",
        ],
        vec![
            "circle",
            "--lambda",
            "4",
            "--alpha",
            "0.3",
            "--kmax",
            "4",
            "-o",
            "b.csv",
            "--format",
            "csv",
            "--sequential",
        ],
    ];
    for args in &runs {
        let out = run_in(dir.path(), args);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
    let threaded = Command::new(BIN)
        .current_dir(dir.path())
        .env("KREIN_SPECTRA_THREADS", "3")
        .args(["interval", "--alpha", "0.5", "--kmax", "8", "-o", "c.json"])
        .output()
        .unwrap();
    assert_eq!(threaded.status.code(), Some(0));
    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    assert_eq!(read("a.json"), read("c.json"));
    assert_eq!(read("a.csv"), read("b.csv"));
    for name in ["a.json", "a.csv"] {
        let bytes = read(name);
        assert!(std::str::from_utf8(&bytes).is_ok());
        assert_eq!(bytes.last(), Some(&b'\n'));
    }
}

#[test]
fn report_round_trips_as_a_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = r#"{"lambda": 1, "sigma_hat": true, "channels": [
        {"k": 0, "measure": {"kind": "power_law", "M": 1, "p": 2, "c": 1}, "b": 0.4},
        {"k": 1, "measure": {"kind": "power_law", "M": 2, "p": 3, "c": 0.5}, "b": -0.2},
        {"k": 2, "measure": {"kind": "slab_channel", "k": 3}, "b": 0.01}
    ]}"#;
    std::fs::write(dir.path().join("spec.json"), spec).unwrap();
    let first = run_in(
        dir.path(),
        &["solve", "--spec", "spec.json", "-o", "report.json"],
    );
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let second = run_in(dir.path(), &["solve", "--spec", "report.json"]);
    assert_eq!(second.status.code(), Some(0), "{}", stderr(&second));
    let a: Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    let b = json(&second);
    assert_eq!(a["summary"], b["summary"]);
    assert_eq!(a["spec"], b["spec"]);
    assert_eq!(a["config_hash"], b["config_hash"]);
}

#[test]
fn model_specs_run_from_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("m.json"),
        r#"{"model": "interval", "alpha": 1, "kmax": 10}"#,
    )
    .unwrap();
    let from_file = run_in(dir.path(), &["solve", "--spec", "m.json"]);
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    let report = json(&from_file);
    assert_eq!(report["channels"].as_array().unwrap().len(), 10);
    assert_eq!(report["summary"]["n_minus"], 5);
    assert_eq!(report["summary"]["n_plus"], 5);
}

#[test]
fn count_and_classify_skip_the_solver() {
    let spec = ["--measure", "power_law:M=1,p=3,c=1", "--b", "-5"];
    let count = run(&[&["count"][..], &spec].concat());
    assert_eq!(count.status.code(), Some(0), "{}", stderr(&count));
    let report = json(&count);
    // s(−∞) = −∫ t·t^−3 dt = −1 > −5: no eigenvalue
    assert_eq!(report["summary"]["n_minus"], 0);
    assert_eq!(report["channels"][0]["case"], "Case3");
    assert!(report["channels"][0]["E"].is_null());
    let classify = run(&[&["classify"][..], &spec].concat());
    assert_eq!(classify.status.code(), Some(0));
    assert_eq!(json(&classify)["channels"][0]["window"]["lo"], -1.0);
}

#[test]
fn malformed_json_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.json"),
        "{\"lambda\": 1,\n \"channels\": [}",
    )
    .unwrap();
    let out = run_in(dir.path(), &["solve", "--spec", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("line 2, column 15"),
        "{}",
        stderr(&out)
    );
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_measure_kind_lists_the_known_ones() {
    let dir = tempfile::tempdir().unwrap();
    let spec =
        r#"{"lambda": 1, "channels": [{"k": 0, "measure": {"kind": "gaussian", "M": 1}, "b": 1}]}"#;
    std::fs::write(dir.path().join("s.json"), spec).unwrap();
    let out = run_in(dir.path(), &["solve", "--spec", "s.json"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    for kind in ["power_law", "slab_channel", "bessel_circle", "tabulated"] {
        assert!(msg.contains(kind), "{msg}");
    }
}

#[test]
fn validation_failures_exit_2() {
    for args in [
        vec!["solve", "--measure", "power_law:M=1,p=2", "--b", "1"],
        vec!["solve", "--measure", "power_law:M=1,p=2,c=1", "--b", "0"],
        vec!["interval", "--alpha", "0"],
        vec!["circle", "--lambda", "-1", "--alpha", "1"],
        vec!["interval", "--alpha", "1", "--abs-tol", "-1"],
        vec!["interval"],
        vec!["sweep", "--values", "1", "--range", "0:1:3"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn io_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let missing = run_in(dir.path(), &["solve", "--spec", "missing.json"]);
    assert_eq!(missing.status.code(), Some(1));
    let unwritable = run_in(
        dir.path(),
        &[
            "interval",
            "--alpha",
            "1",
            "--kmax",
            "2",
            "-o",
            "no/such/dir/r.json",
        ],
    );
    assert_eq!(unwritable.status.code(), Some(1));
}

#[test]
fn numeric_failures_exit_3_with_a_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    // at alpha = 0.01 the k = 1 root is far below f64 range
    let out = run_in(
        dir.path(),
        &["interval", "--alpha", "0.01", "--kmax", "4", "-o", "r.json"],
    );
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    let report: Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("r.json")).unwrap()).unwrap();
    let rows = report["channels"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["error"]["class"], "numeric");
    assert!(rows[3]["error"].is_null());
    assert!(rows[3]["E"].is_f64());
    assert!(report["summary"]["failed"]
        .as_array()
        .unwrap()
        .contains(&Value::from(1)));

    // a starved quadrature budget
    let starved = run(&[
        "solve",
        "--measure",
        "power_law:M=1,p=2,c=1",
        "--b",
        "0.5",
        "--max-subdivisions",
        "1",
    ]);
    assert_eq!(starved.status.code(), Some(3), "{}", stderr(&starved));
    assert!(json(&starved)["channels"][0]["error"]["message"]
        .as_str()
        .unwrap()
        .contains("quadrature"));
}
