use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn petrocheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_petrocheck"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "0")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    petrocheck(args).status.code().expect("exited normally")
}

fn report(args: &[&str]) -> Value {
    let out = petrocheck(args);
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn lemma_check_exit_codes() {
    assert_eq!(code(&["lemma-check", "--p", "3", "--n", "2", "--samples", "50"]), 0);
    assert_eq!(code(&["lemma-check", "--p", "2", "--n", "3"]), 0);
    let bad = petrocheck(&["lemma-check", "--p", "1", "--n", "2"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("p must be > 1"));
    assert_eq!(code(&["lemma-check", "--p", "0.5"]), 1);
    assert_eq!(code(&["lemma-check", "--n", "2"]), 1);
}

#[test]
fn lemma_table_has_one_row_per_sample() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("lemma.csv");
    assert_eq!(code(&["lemma-check", "--p", "3", "--n", "2", "--samples", "7", "--csv", csv.to_str().unwrap()]), 0);
    let text = fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("p,n,C,alpha,r,closed_form,oracle,deviation"));
    assert_eq!(text.lines().count(), 8);
}

#[test]
fn verify_examples() {
    let r = report(&["verify", "--kind", "singular_irregularity", "--p", "1.5", "--q", "0.25", "--n", "2"]);
    assert_eq!(r["exit_code"], 0);
    assert_eq!(r["result"]["pass"], true);
    assert_eq!(r["result"]["barrier"]["kind"], "singular_irregularity");
    assert!(r["result"]["barrier"]["grid_hash"].as_str().unwrap().starts_with("sha256:"));

    let out = petrocheck(&["verify", "--kind", "degenerate_irregularity", "--p", "3", "--n", "2", "--C", "0.03"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("c_max"));

    let third = (1.0f64 / 3.0).to_string();
    let r = report(&["verify", "--kind", "degenerate_small_data", "--p", "3", "--q", &third, "--n", "2", "--beta", "0.5"]);
    assert_eq!(r["exit_code"], 0);

    assert_eq!(code(&["verify", "--kind", "degenerate_small_data", "--p", "3", "--q", "0.25", "--n", "2"]), 1);
    assert_eq!(code(&["verify", "--kind", "no_such_barrier", "--p", "3"]), 1);
}

#[test]
fn verify_family_member_runs_family_checks() {
    let r = report(&["verify", "--kind", "degenerate_family_member", "--p", "3", "--q", "0.5", "--n", "1", "--grid-t", "32", "--grid-y", "32"]);
    assert_eq!(r["exit_code"], 0);
    let conditions: Vec<&str> = r["result"]["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["condition"].as_str().unwrap())
        .collect();
    for want in ["residual_sign", "axis_limit", "positivity", "supersolution_sign", "vertex_decay", "boundary_growth", "lower_bound"] {
        assert!(conditions.contains(&want), "{conditions:?}");
    }
    assert!(r["result"]["threshold"]["c0"].as_f64().unwrap() > 0.0);
}

#[test]
fn classify_examples() {
    let third = (2.0f64 / 3.0).to_string();
    for (p, q, want) in [("3", "0.34", "Regular"), ("1.5", "0.5", "Irregular"), ("1.5", third.as_str(), "Unknown")] {
        let r = report(&["classify", "--p", p, "--q", q]);
        assert_eq!(r["result"]["verdict"]["theorem_verdict"], want, "p={p} q={q}");
    }
    assert_eq!(code(&["classify", "--p", "3", "--q", "0"]), 1);
}

#[test]
fn sweep_matrices_and_failures() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("m.csv");
    let cells = dir.path().join("cells");
    let r = report(&[
        "sweep", "--p-list", "3", "--q-list", "0.2,0.34,0.5", "--csv", csv.to_str().unwrap(), "--out-dir", cells.to_str().unwrap(),
    ]);
    assert_eq!(r["exit_code"], 0);
    let matrix = fs::read_to_string(&csv).unwrap();
    assert!(matrix.lines().nth(1).unwrap().ends_with("Irregular,Regular,Regular"), "{matrix}");
    assert_eq!(fs::read_dir(&cells).unwrap().count(), 3);

    let third = (2.0f64 / 3.0).to_string();
    let r = report(&["sweep", "--p-list", "1.5", "--q-list", &format!("0.5,{third},0.7")]);
    let verdicts: Vec<&str> = r["result"]["cells"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["verdict"]["theorem_verdict"].as_str().unwrap())
        .collect();
    assert_eq!(verdicts, ["Irregular", "Unknown", "Regular"]);

    assert_eq!(code(&["sweep", "--p-list", "3", "--q-list"]), 1);
    assert_eq!(code(&["sweep", "--p-list", "3"]), 1);

    // one bad cell is recorded, the rest still run
    let r = report(&["sweep", "--p-list", "3", "--q-list", "0.5,-1"]);
    assert_eq!(r["exit_code"], 0);
    assert_eq!(r["result"]["failures"], 1);
    assert_eq!(code(&["sweep", "--p-list", "0.5", "--q-list", "0.5"]), 1);
}

#[test]
fn reruns_are_byte_identical_and_hashed() {
    let args = ["verify", "--kind", "singular_traditional", "--p", "1.5", "--q", "0.25", "--n", "2", "--grid-t", "16", "--grid-y", "16"];
    let a = petrocheck(&args).stdout;
    let b = petrocheck(&args).stdout;
    assert_eq!(a, b);
    let doc: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(doc["schema"], "petrocheck/1");
    assert_eq!(petrocheck::json::rehash(&doc).unwrap(), doc["content_hash"].as_str().unwrap());
}

#[test]
fn solve_writes_field_and_replays_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let field = dir.path().join("field.csv");
    let config = dir.path().join("exp.json");
    let args = ["solve", "--p", "3", "--q", "0.5", "--grid-y", "16", "--eps-min", "0.01", "--data", "constant:0.3"];
    let cfg = petrocheck(&[&args[..], &["--print-config"]].concat());
    fs::write(&config, &cfg.stdout).unwrap();
    let r = report(&["run", config.to_str().unwrap(), "--csv", field.to_str().unwrap()]);
    assert_eq!(r["exit_code"], 0);
    assert!((r["result"]["final_axis_value"].as_f64().unwrap() - 0.3).abs() < 1e-12);
    let text = fs::read_to_string(&field).unwrap();
    assert!(text.starts_with("t,y,r,u\n"));
    let direct = report(&[&args[..], &["--csv", field.to_str().unwrap()]].concat());
    assert_eq!(direct["content_hash"], r["content_hash"]);
}

#[test]
fn tabulated_profile_input() {
    let dir = tempfile::tempdir().unwrap();
    let prof = dir.path().join("zeta.csv");
    let t: Vec<f64> = (0..200).map(|i| -1.0 + 0.995 * i as f64 / 199.0).collect();
    let zeta: Vec<f64> = t.iter().map(|t| (-t).sqrt()).collect();
    let mut buf = Vec::new();
    petrocheck::tables::write_profile(&t, &zeta, &mut buf).unwrap();
    fs::write(&prof, buf).unwrap();
    let r = report(&["solve", "--p", "3", "--profile", prof.to_str().unwrap(), "--grid-y", "16"]);
    assert_eq!(r["exit_code"], 0);
    assert!(r["result"]["domain"].as_str().unwrap().contains("tabulated"));
}

#[test]
fn scale_check_passes_and_rejects_p_two() {
    assert_eq!(code(&["scale-check", "--p", "3", "--q", "0.5", "--grid-y", "16", "--eps-min", "0.01"]), 0);
    assert_eq!(code(&["scale-check", "--p", "3", "--q", "0.5", "--grid-y", "16", "--eps-min", "0.01", "--tol", "1e-12"]), 2);
    assert_eq!(code(&["scale-check", "--p", "2", "--q", "0.5"]), 1);
}

#[test]
fn barenblatt_check_passes() {
    assert_eq!(code(&["barenblatt-check", "--p", "3", "--n", "2"]), 0);
    assert_eq!(code(&["barenblatt-check", "--p", "1.9", "--n", "2"]), 0);
    assert_eq!(code(&["barenblatt-check", "--p", "1.2", "--n", "3"]), 1);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&[]), 1);
}
