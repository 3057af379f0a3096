use std::collections::BTreeMap;
use std::process::{Command, Output};

use serde_json::Value;
use swapwit::photonic::{prepare_state, PrepPhases};
use swapwit::witness::p1_pure;

fn swapwit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swapwit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = swapwit(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn flatten(prefix: &str, v: &Value, out: &mut BTreeMap<String, Value>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}_{i}"), x, out);
            }
        }
        _ => {
            out.insert(prefix.to_string(), v.clone());
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

fn assert_cell_matches(json: &Value, text: &str, key: &str) {
    match json {
        Value::Number(n) => {
            let parsed: f64 = text.parse().unwrap_or_else(|_| panic!("{key}: `{text}`"));
            assert!(close(n.as_f64().unwrap(), parsed), "{key}: {n} vs {text}");
        }
        Value::Null => assert_eq!(text, "", "{key}"),
        Value::String(s) => assert_eq!(s, text, "{key}"),
        other => assert_eq!(other.to_string(), text, "{key}"),
    }
}

/// Every record field and summary entry in the CSV agrees with the JSON output.
fn check_parity(args: &[&str]) {
    let json = json_of(&[args, &["--format", "json"]].concat());
    let out = swapwit(&[args, &["--format", "csv"]].concat());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));

    let mut summary = BTreeMap::new();
    flatten("", &json["summary"], &mut summary);
    for (k, v) in &summary {
        let line = text
            .lines()
            .find_map(|l| l.strip_prefix(&format!("# summary.{k}=")))
            .unwrap_or_else(|| panic!("missing summary {k}"));
        assert_cell_matches(v, line, k);
    }
    assert!(text.contains("# manifest.subcommand="));

    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    let records = json["records"].as_array().unwrap();
    assert_eq!(rows.len(), records.len());
    for (row, rec) in rows.iter().zip(records) {
        let mut flat = BTreeMap::new();
        flatten("", rec, &mut flat);
        assert_eq!(flat.len(), header.len());
        for (k, cell) in header.iter().zip(row.iter()) {
            assert_cell_matches(&flat[k], cell, k);
        }
    }
}

#[test]
fn witness_one_psi_minus() {
    let v = json_of(&["witness-one", "--state", "0,0.7071,-0.7071,0"]);
    assert_eq!(v["summary"]["verdict"], "entangled");
    assert!((v["summary"]["p1"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v["summary"]["bound"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["manifest"]["subcommand"], "witness-one");
}

#[test]
fn witness_one_accepts_complex_amplitudes_and_phases() {
    let v = json_of(&["witness-one", "--state", "0, 0+1i, 0-1i, 0"]);
    assert_eq!(v["records"][0]["entangled"], true);
    let v = json_of(&["witness-one", "--state", "1,0,0,0"]);
    assert_eq!(v["summary"]["verdict"], "not detected");

    let a = [0.1, 0.9, 0.2, 1.3, 2.0, 0.4, 0.5, 0.6, 1.7, 0.8, 0.9, 1.0];
    let list = a.map(|x| x.to_string()).join(",");
    let v = json_of(&["witness-one", "--phases", &list]);
    let want = p1_pure(&prepare_state(&PrepPhases::from_array(a)));
    assert!((v["records"][0]["p1"].as_f64().unwrap() - want).abs() < 1e-12);
}

#[test]
fn witness_one_preprocessing_catches_phi_plus() {
    let plain = json_of(&["witness-one", "--state", "0.7071,0,0,0.7071"]);
    assert_eq!(plain["records"][0]["entangled"], false);
    let pre = json_of(&["witness-one", "--state", "0.7071,0,0,0.7071", "--preprocess"]);
    assert_eq!(pre["records"][0]["entangled"], true);
}

#[test]
fn detection_rate_matches_one_eighth() {
    let v = json_of(&["detection-rate", "--trials", "1000000", "--seed", "7"]);
    let r = &v["records"][0];
    let (f, se) = (r["fraction"].as_f64().unwrap(), r["std_error"].as_f64().unwrap());
    assert!((f - 0.125).abs() < 4.0 * se, "{f}");
}

#[test]
fn records_do_not_depend_on_workers() {
    let runs = [
        vec!["random-states", "--states", "300", "--noise-preset", "hardware750"],
        vec!["bell", "--noise-preset", "hardware750", "--trials", "400"],
        vec!["werner", "--shots", "20000", "--strategy", "post-processing"],
        vec!["detection-rate", "--trials", "45000", "--preprocess"],
    ];
    for args in runs {
        let base = json_of(&[&args[..], &["--workers", "1"]].concat());
        for w in ["2", "4", "7"] {
            let other = json_of(&[&args[..], &["--workers", w]].concat());
            assert_eq!(other["records"], base["records"], "{args:?} workers {w}");
            assert_eq!(other["summary"], base["summary"]);
        }
    }
}

#[test]
fn seeds_change_results() {
    let a = json_of(&["random-states", "--states", "50", "--seed", "1"]);
    let b = json_of(&["random-states", "--states", "50", "--seed", "2"]);
    assert_ne!(a["records"], b["records"]);
}

#[test]
fn json_and_csv_agree() {
    check_parity(&["random-states", "--states", "200", "--noise-preset", "hardware750"]);
    check_parity(&["bell", "--noise-preset", "hardware750", "--trials", "300"]);
    check_parity(&["omega-sweep", "--points", "9", "--exact"]);
    check_parity(&["omega-sweep", "--points", "9", "--noise", "0.44,0.56,0.1"]);
    check_parity(&["werner", "--points", "5"]);
    check_parity(&["noise-ci", "--noise-preset", "hardware750", "--trials", "300"]);
    check_parity(&["witness-one", "--state", "0.3,0.5-0.2i,-0.6,0.1i", "--preprocess"]);
}

#[test]
fn manifest_reproduces_the_run() {
    let v = json_of(&["random-states", "--states", "40", "--seed", "11", "--noise", "0.47,0.53,0.05"]);
    let m = &v["manifest"];
    assert_eq!(m["config"]["seed"], 11);
    assert_eq!(m["config"]["threshold"], 0.5085);
    assert_eq!(m["args"]["states"], 40);
    let noise = &m["config"]["noise"];
    let again = json_of(&[
        "random-states",
        "--states",
        &m["args"]["states"].to_string(),
        "--seed",
        &m["config"]["seed"].to_string(),
        "--shots",
        &m["config"]["shots"].to_string(),
        "--noise",
        &format!("{},{},{}", noise["t2"], noise["r2"], noise["sigma"]),
    ]);
    assert_eq!(again["records"], v["records"]);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("swapwit-cli-{}.csv", std::process::id()));
    let out = swapwit(&["bell", "--exact", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.starts_with("# manifest.tool=swapwit\n"));
    assert!(text.contains("\nstate,theoretical,simulated,ci_low,ci_high\n"));
}

#[test]
fn bad_input_fails_with_diagnostic() {
    let cases: [&[&str]; 10] = [
        &["witness-one", "--state", "1,2"],
        &["witness-one", "--state", "a,b,c,d"],
        &["witness-one", "--state", "0,0,0,0"],
        &["witness-one", "--phases", "1,2,3"],
        &["witness-one"],
        &["bell", "--noise", "0.9,0.9,0.1"],
        &["bell", "--noise", "0.5,0.5,-1"],
        &["bell", "--threshold", "1.5"],
        &["bell", "--unknown-flag"],
        &["detection-rate", "--trials", "0"],
    ];
    for args in cases {
        let out = swapwit(args);
        assert!(!out.status.success(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn verify_passes() {
    let out = swapwit(&["verify", "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# summary.failed=0"));
}
