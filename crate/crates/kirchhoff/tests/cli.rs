//! End-to-end tests of the `kirchhoff` binary: JSON shapes, file outputs,
//! exit codes, and the byte-identical rerun contract.

use std::path::Path;
use std::process::{Command, Output};

fn kirchhoff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kirchhoff"))
        .args(args)
        .output()
        .expect("binary should launch")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout should be JSON")
}

#[test]
fn groundstate_emits_summary_and_profile() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("profile.csv");
    let out = kirchhoff(&[
        "groundstate",
        "--dim",
        "1",
        "--p",
        "2",
        "--tol",
        "1e-4",
        "--out",
        csv.to_str().unwrap(),
    ]);
    let json = stdout_json(&out);
    let mass = json["l2_norm_sq"].as_f64().unwrap();
    assert!((mass - 2.0 * 3f64.sqrt()).abs() < 1e-4, "mass {}", mass);
    assert!(json["pohozaev_res1"].as_f64().unwrap() <= 1e-4);
    assert_eq!(json["meta"]["command"], "groundstate");
    assert_eq!(json["meta"]["grid"]["dim"], 1);

    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().any(|l| l.starts_with("coordinate,value")));
    assert!(text.lines().filter(|l| !l.starts_with('#')).count() > 4000);
}

#[test]
fn thresholds_reports_all_constants() {
    let out = kirchhoff(&["thresholds", "--dim", "1", "--p", "6", "--a", "1", "--b", "1"]);
    let json = stdout_json(&out);
    let bt = json["report"]["beta_tilde"].as_f64().unwrap();
    assert!((bt - 18.1199).abs() / 18.1199 < 1e-3, "beta_tilde {}", bt);
    assert!(json["report"]["beta_p"].as_f64().unwrap() > 0.0);
    assert!(json["report"]["beta_star_critical"].as_f64().unwrap() > 0.0);

    // --critical without --p evaluates at p* = 8/N
    let out = kirchhoff(&["thresholds", "--dim", "2", "--critical", "--a", "1", "--b", "1"]);
    let json = stdout_json(&out);
    assert!(json["report"]["beta_tilde"].is_null());
    assert_eq!(json["report"]["p"].as_f64().unwrap(), 4.0);
}

#[test]
fn minimize_outputs_are_byte_identical_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| -> (Vec<u8>, Vec<u8>) {
        let json = dir.path().join(format!("result-{}.json", tag));
        let field = dir.path().join(format!("field-{}.csv", tag));
        let out = kirchhoff(&[
            "minimize",
            "--dim",
            "1",
            "--p",
            "2",
            "--a",
            "1",
            "--b",
            "1",
            "--beta",
            "6",
            "--grid",
            "256,22",
            "--out",
            json.to_str().unwrap(),
            "--field",
            field.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
        (std::fs::read(&json).unwrap(), std::fs::read(&field).unwrap())
    };
    let (j1, f1) = run("a");
    let (j2, f2) = run("b");
    assert_eq!(j1, j2, "result.json must be byte-identical across reruns");
    assert_eq!(f1, f2, "field.csv must be byte-identical across reruns");

    let parsed: serde_json::Value = serde_json::from_slice(&j1).unwrap();
    assert_eq!(parsed["status"], "Converged");
    assert!(parsed["energy"]["total"].as_f64().unwrap() < 0.0);
    assert!(parsed["verdict"]["regime"].as_str().unwrap().contains("MinimizerExists"));
    assert!(parsed["mass_dev_max"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn usage_errors_exit_with_code_2() {
    // precondition violation: p > 8/N
    let out = kirchhoff(&[
        "minimize", "--dim", "1", "--p", "8.5", "--a", "1", "--b", "1", "--beta", "1", "--grid",
        "64,10", "--out", "/tmp/never-written.json",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!Path::new("/tmp/never-written.json").exists());

    // unknown flag
    let out = kirchhoff(&["groundstate", "--dim", "1", "--p", "2", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    // missing sweep config names the offending path
    let out = kirchhoff(&["sweep", "--config", "/no/such/sweep.cfg", "--out", "/tmp/r.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweep.cfg"));
}

#[test]
fn sweep_writes_records_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    std::fs::write(
        &cfg,
        "# two-point smoke sweep\n\
         dim = 1\n\
         a = 1\n\
         b = 1\n\
         beta_over_beta_star = 2\n\
         potential = harmonic:1:1\n\
         deltas = 0.5,0.45\n\
         grid_m = 1024\n\
         grid_r = 30\n\
         grid_kind = line\n\
         multistart = 3\n",
    )
    .unwrap();
    let records = dir.path().join("records.csv");
    let out = kirchhoff(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        records.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let text = std::fs::read_to_string(&records).unwrap();
    let header: Vec<&str> = text
        .lines()
        .find(|l| !l.starts_with('#'))
        .expect("header row")
        .split(',')
        .collect();
    assert_eq!(
        header,
        vec![
            "p",
            "delta",
            "d_measured",
            "d_asym",
            "ratio_d",
            "r_p",
            "eps_p",
            "T",
            "T_sq_over_rp",
            "interaction_scaled_over_rp",
            "lambda_eps4",
            "V_term",
            "profile_dist",
            "center_x"
        ]
    );
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let cells: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells.len(), 14);
        assert!(cells[2] < 0.0, "d_measured negative");
        assert!((cells[13] - 1.0).abs() < 0.5, "center near the trap minimum");
    }
}

#[test]
fn verify_quick_passes_and_reports() {
    let out = kirchhoff(&["verify", "--quick"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "verify --quick failed:\n{}", text);
    assert!(text.contains("CHECK"));
    assert!(text.contains("C1"));
    assert!(text.lines().last().unwrap_or("").contains("checks passed"));
}
