use std::process::{Command, Output};

use qortho::verify::{IdentityId, VerificationReport};
use serde_json::Value;

fn qortho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qortho"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn eval_ultraspherical_degree_one() {
    let out = qortho(&[
        "eval",
        "ultra",
        "--n",
        "1",
        "--theta",
        "0",
        "--beta-re",
        "0.3",
        "--q",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["function"], "ultra");
    assert!((v["value_re"].as_f64().unwrap() - 2.8).abs() < 1e-13);
    assert_eq!(v["value_im"].as_f64().unwrap(), 0.0);
    assert_eq!(v["max_terms"], 10000);
}

#[test]
fn eval_infinite_qpoch_reports_terms_used() {
    let out = qortho(&["eval", "qpoch", "--a-re", "0.5", "--q", "0.5", "--inf"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    // (1/2; 1/2)_∞ from the pentagonal number series
    let mut euler = 0.0;
    for k in -20i32..=20 {
        let e = f64::from(k * (3 * k - 1) / 2);
        euler += if k % 2 == 0 { 1.0 } else { -1.0 } * 0.5f64.powf(e);
    }
    assert!((v["value_re"].as_f64().unwrap() - euler).abs() < 1e-14);
    assert!(v["terms"].as_u64().unwrap() > 0);
}

#[test]
fn eval_series_matches_binomial_closed_form() {
    let out = qortho(&[
        "eval",
        "phi_series",
        "--num",
        "0.3",
        "--z-re",
        "0.4",
        "--q",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let closed: f64 = (0..200)
        .map(|k| (1.0 - 0.3 * 0.4 * 0.5f64.powi(k)) / (1.0 - 0.4 * 0.5f64.powi(k)))
        .product();
    assert!((v["value_re"].as_f64().unwrap() - closed).abs() < 1e-12);
}

#[test]
fn eval_rejects_malformed_series_parameter() {
    let out = qortho(&["eval", "phi_series", "--num", "0.3,x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_orthogonality_passes_and_round_trips() {
    let out = qortho(&["verify", "--identity", "THM_1_1"]);
    assert_eq!(out.status.code(), Some(0));
    let report: VerificationReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.identity(), IdentityId::Thm11);
    assert!(report.passed());
    assert!(report.rel_residual() <= 1e-8);
    assert_eq!(report.inputs().get("gamma_re"), Some(0.8));
}

#[test]
fn verify_every_identity_runs_with_defaults() {
    for id in IdentityId::ALL {
        let out = qortho(&["verify", "--identity", id.as_str()]);
        let code = out.status.code().unwrap();
        assert!(code == 0 || code == 1, "{id}: exit {code}");
        let report: VerificationReport = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report.identity(), id);
        assert_eq!(code == 0, report.passed(), "{id}");
    }
}

#[test]
fn verify_hypothesis_violation_is_invalid_input() {
    let out = qortho(&["verify", "--identity", "THM_1_2", "--s-re", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("hypothesis"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_tight_tolerance_fails_with_exit_one() {
    let out = qortho(&["verify", "--identity", "PROP_2_1_3", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let report: VerificationReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!report.passed());
    assert_eq!(report.tolerance(), 1e-30);
}

#[test]
fn invalid_arguments_exit_two() {
    for args in [
        &["verify", "--identity", "NOPE"][..],
        &["verify", "--identity", "THM_1_1", "--q", "1.5"],
        &["verify", "--identity", "THM_1_1", "--tol", "-1"],
        &["verify", "--identity", "THM_1_1", "--gamma-re", "0"],
        &["table", "big_c", "--delta-re", "0"],
        &["sweep", "--identity", "THM_1_1", "--seed", "1"],
        &["frobnicate"],
    ] {
        assert_eq!(qortho(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_csv_round_trips_through_a_reader() {
    let out = qortho(&["verify", "--identity", "ROGERS_6W5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(str::to_owned).collect();
    assert_eq!(header[0], "identity");
    assert_eq!(header.last().unwrap(), "flags");
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][0], "ROGERS_6W5");
    // the inputs column holds JSON with commas and quotes
    let inputs: Value = serde_json::from_str(&rows[0][1]).unwrap();
    assert_eq!(inputs["d_re"], 0.7);
    assert_eq!(&rows[0][9], "true");
}

fn strip_timestamp(mut v: Value) -> Value {
    v.as_object_mut()
        .unwrap()
        .remove("generated_at")
        .expect("timestamp present");
    v
}

#[test]
fn sweep_is_deterministic_apart_from_timestamp() {
    let args = [
        "sweep",
        "--identity",
        "THM_1_1",
        "--seed",
        "42",
        "--draws",
        "20",
    ];
    let (a, b) = (qortho(&args), qortho(&args));
    assert_eq!(a.status.code(), Some(0));
    let (a, b) = (stdout_json(&a), stdout_json(&b));
    assert_eq!(a["passed"], 20);
    assert_eq!(a["failed"], 0);
    assert_eq!(strip_timestamp(a.clone()), strip_timestamp(b));
    let reports: Vec<VerificationReport> = serde_json::from_value(a["reports"].clone()).unwrap();
    assert_eq!(reports.len(), 20);
    assert!(reports.iter().all(VerificationReport::passed));
}

#[test]
fn sweep_seed_changes_draws() {
    let one = stdout_json(&qortho(&[
        "sweep",
        "--identity",
        "QBINOMIAL",
        "--seed",
        "1",
        "--draws",
        "3",
    ]));
    let two = stdout_json(&qortho(&[
        "sweep",
        "--identity",
        "QBINOMIAL",
        "--seed",
        "2",
        "--draws",
        "3",
    ]));
    assert_ne!(one["reports"], two["reports"]);
}

#[test]
fn sweep_failure_names_first_failing_draw() {
    let out = qortho(&[
        "sweep",
        "--identity",
        "ULTRA_ORTHO",
        "--seed",
        "7",
        "--draws",
        "4",
        "--tol",
        "1e-300",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("draw 0 failed"), "{err}");
    assert!(err.contains("beta_re"), "{err}");
    let v = stdout_json(&out);
    assert_eq!(v["failed"], 4);
}

#[test]
fn sweep_empty_csv_has_header_only() {
    let out = qortho(&[
        "sweep",
        "--identity",
        "PROP_2_4",
        "--seed",
        "3",
        "--draws",
        "0",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("identity,inputs,"));
}

#[test]
fn table_ultraspherical_rows_are_symmetric() {
    let out = qortho(&[
        "table",
        "ultra",
        "--beta-re",
        "0.3",
        "--q",
        "0.5",
        "--n",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(
        rdr.headers().unwrap(),
        vec!["n", "k", "coefficient_re", "coefficient_im"]
    );
    let rows: Vec<(usize, usize, f64)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (
                r[0].parse().unwrap(),
                r[1].parse().unwrap(),
                r[2].parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(rows.len(), 1 + 2 + 3 + 4);
    // n = 1: (β;q)_1/(q;q)_1 at both ends
    let c = (1.0 - 0.3) / (1.0 - 0.5);
    assert!(rows
        .iter()
        .filter(|r| r.0 == 1)
        .all(|r| (r.2 - c).abs() < 1e-14));
    for &(n, k, v) in &rows {
        let mirror = rows.iter().find(|r| r.0 == n && r.1 == n - k).unwrap();
        assert!((v - mirror.2).abs() < 1e-13);
    }
}

#[test]
fn table_big_c_degree_one_coefficients() {
    let out = qortho(&[
        "table",
        "big_c",
        "--alpha-re",
        "0.2",
        "--beta-re",
        "0.1",
        "--gamma-re",
        "0.8",
        "--delta-re",
        "0.9",
        "--q",
        "0.5",
        "--n",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = stdout_json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    // C_1 = (δ - β)/(1-q) e^{-iθ} + (γ - α)/(1-q) e^{iθ}
    assert!((rows[1]["coefficient_re"].as_f64().unwrap() - 1.6).abs() < 1e-14);
    assert!((rows[2]["coefficient_re"].as_f64().unwrap() - 1.2).abs() < 1e-14);
}

#[test]
fn table_connection_row_has_m_plus_one_entries() {
    let out = qortho(&["table", "connection", "--m", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| &r[0] == "3"));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("qortho-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = qortho(&[
        "verify",
        "--identity",
        "QBINOMIAL",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: VerificationReport =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(report.passed());
    std::fs::remove_dir_all(dir).unwrap();
}
