//! End-to-end runs of the `qrde` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn qrde(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrde"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Parse CSV into (header, rows). Fields used here carry no quotes.
fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

fn field<'a>(header: &[String], row: &'a [String], name: &str) -> &'a str {
    let i = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    &row[i]
}

fn num(header: &[String], row: &[String], name: &str) -> f64 {
    field(header, row, name).parse().unwrap()
}

#[test]
fn transitional_selection_is_mixed() {
    let out = qrde(&["rde", "--dg", "0.9", "--dr", "0.2", "--gamma", "0.5236"]);
    assert_eq!(out.status.code(), Some(0));
    let (h, rows) = csv(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert_eq!(field(&h, &rows[0], "selection"), "mixed");
    assert!((num(&h, &rows[0], "p") - 0.464289).abs() < 1e-5);
}

#[test]
fn coexistence_above_switch_selects_qq() {
    let out = qrde(&["rde", "--dg", "0.2", "--dr", "0.9", "--gamma", "0.6"]);
    assert_eq!(out.status.code(), Some(0));
    let (h, rows) = csv(&stdout(&out));
    assert_eq!(field(&h, &rows[0], "selection"), "QQ");
}

#[test]
fn classical_chicken_mixes_evenly() {
    let out = qrde(&["rde", "--dg", "-0.3", "--dr", "0.3"]);
    assert_eq!(out.status.code(), Some(0));
    let (h, rows) = csv(&stdout(&out));
    assert!((num(&h, &rows[0], "p") - 0.5).abs() < 1e-12);
    assert!((num(&h, &rows[0], "q") - 0.5).abs() < 1e-12);
}

#[test]
fn classify_lists_chicken_equilibria() {
    let out = qrde(&["classify", "--dg", "0.5", "--dr", "-0.5"]);
    let (h, rows) = csv(&stdout(&out));
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| field(&h, r, "class") == "CH"));
}

#[test]
fn degrees_match_radians() {
    let rad = qrde(&[
        "rde",
        "--dg",
        "0.9",
        "--dr",
        "0.2",
        "--gamma",
        &(std::f64::consts::PI / 6.0).to_string(),
    ]);
    let deg = qrde(&[
        "rde",
        "--dg",
        "0.9",
        "--dr",
        "0.2",
        "--gamma",
        "30",
        "--degrees",
    ]);
    assert_eq!(stdout(&rad), stdout(&deg));
}

#[test]
fn sweep_with_three_angles_yields_three_rows() {
    let out = qrde(&[
        "sweep",
        "--dg",
        "0.9",
        "--dr",
        "0.2",
        "--gamma",
        "0:1.5707963267948966:3",
        "--quantities",
        "rde",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (h, rows) = csv(&stdout(&out));
    assert_eq!(rows.len(), 3);
    let picks: Vec<&str> = rows.iter().map(|r| field(&h, r, "rde_selection")).collect();
    assert_eq!(picks, ["DD", "QQ", "QQ"]);
}

#[test]
fn csv_is_lf_terminated_with_header() {
    let text = stdout(&qrde(&[
        "sweep", "--dg", "-1:1:5", "--dr", "-1:1:5", "--gamma", "0:1.5:4",
    ]));
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    let (h, rows) = csv(&text);
    assert_eq!(&h[..3], ["d_g", "d_r", "gamma"]);
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r.len() == h.len()));
}

#[test]
fn json_and_csv_agree() {
    let args = [
        "sweep",
        "--dg",
        "-0.5:0.9:3",
        "--dr",
        "-0.5:0.9:3",
        "--gamma",
        "0.1:1.4:3",
    ];
    let text = stdout(&qrde(&args));
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let json: Value = serde_json::from_str(&stdout(&qrde(&json_args))).unwrap();
    let objects = json.as_array().unwrap();
    let (h, rows) = csv(&text);
    assert_eq!(objects.len(), rows.len());
    for (obj, row) in objects.iter().zip(&rows) {
        let obj = obj.as_object().unwrap();
        // the parsed map sorts keys, so compare as sets
        let mut keys: Vec<_> = obj.keys().cloned().collect();
        let mut columns = h.clone();
        keys.sort();
        columns.sort();
        assert_eq!(keys, columns);
        for (name, cell) in h.iter().zip(row) {
            match &obj[name] {
                Value::Null => assert_eq!(cell, ""),
                Value::Number(n) => assert_eq!(n.as_f64().unwrap(), cell.parse::<f64>().unwrap()),
                Value::Bool(b) => assert_eq!(&b.to_string(), cell),
                Value::String(s) => assert_eq!(s, cell),
                other => panic!("unexpected {other}"),
            }
        }
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "sweep",
        "--dg",
        "-1:1:9",
        "--dr",
        "-1:1:9",
        "--gamma",
        "0:1.5707963267948966:9",
    ];
    assert_eq!(qrde(&args).stdout, qrde(&args).stdout);
    let oracle = ["oracle-check", "--grid", "4", "--seed", "7"];
    assert_eq!(qrde(&oracle).stdout, qrde(&oracle).stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.json");
    let out = qrde(&[
        "sensitivity",
        "--dg",
        "0.9",
        "--dr",
        "0.2",
        "--gamma",
        "30",
        "--degrees",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let s = json[0]["semi_elasticity_gamma"].as_f64().unwrap();
    assert!((s - 5.595856).abs() < 1e-6);
}

#[test]
fn self_checks_pass() {
    assert_eq!(qrde(&["tables"]).status.code(), Some(0));
    assert_eq!(
        qrde(&["oracle-check", "--grid", "2"]).status.code(),
        Some(0)
    );
}

#[test]
fn tampered_gate_fails_the_oracle() {
    let out = qrde(&["oracle-check", "--grid", "3", "--tampered-gate"]);
    assert_eq!(out.status.code(), Some(2));
    let (h, rows) = csv(&stdout(&out));
    assert!(rows.iter().any(|r| field(&h, r, "status") == "FAIL"));
}

#[test]
fn invalid_input_exits_one() {
    for args in [
        vec!["rde", "--dg", "2", "--dr", "0"],
        vec!["rde", "--dg", "0.5", "--dr", "0.2", "--gamma", "2"],
        vec![
            "rde",
            "--dg",
            "0.5",
            "--dr",
            "0.2",
            "--gamma",
            "100",
            "--degrees",
        ],
        vec!["sensitivity", "--dg", "0.9", "--dr", "0.2"],
        vec![
            "sensitivity",
            "--dg",
            "0.9",
            "--dr",
            "0.2",
            "--gamma",
            "0.1",
        ],
        vec!["sweep", "--dg", "0:1:0", "--dr", "0"],
        vec!["oracle-check", "--grid", "1"],
        vec!["classify", "--dg", "nan", "--dr", "0"],
        vec!["bogus"],
        vec![],
    ] {
        let out = qrde(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    let out = qrde(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("oracle-check"));
}
