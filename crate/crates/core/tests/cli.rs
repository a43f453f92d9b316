use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use qlgame::cli::run;
use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples/data")
        .join(name)
        .display()
        .to_string()
}

fn qlgame(args: &[&str]) -> i32 {
    run(std::iter::once("qlgame").chain(args.iter().copied()))
}

fn out(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn qlra_reports_d1_coefficients() {
    let dir = TempDir::new().unwrap();
    let o = out(&dir, "rep.json");
    assert_eq!(
        qlgame(&["qlra", "--input", &data("d1.json"), "--output", o.to_str().unwrap()]),
        0
    );
    let v = read_json(&o);
    assert_eq!(v["classification"], "trigonometric");
    let l: Vec<f64> = v["lambda"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(l, vec![0.204124145232, -0.204124145232]);
}

#[test]
fn validate_qlra_validate_round_trip() {
    let dir = TempDir::new().unwrap();
    for fixture in ["d1.json", "uniform.json", "skewed.json"] {
        let checked = out(&dir, "checked.json");
        let rep = out(&dir, "rep.json");
        let back = out(&dir, "back.json");
        assert_eq!(
            qlgame(&["validate", "-i", &data(fixture), "-o", checked.to_str().unwrap()]),
            0
        );
        assert_eq!(qlgame(&["qlra", "-i", &data(fixture), "-o", rep.to_str().unwrap()]), 0);
        let reconstructed = read_json(&rep)["reconstructed"].clone();
        fs::write(&back, reconstructed.to_string()).unwrap();
        assert_eq!(qlgame(&["validate", "-i", back.to_str().unwrap()]), 0, "{fixture}");
    }
}

#[test]
fn hyperbolic_context_is_a_domain_error_and_writes_nothing() {
    let dir = TempDir::new().unwrap();
    let o = out(&dir, "rep.json");
    assert_eq!(
        qlgame(&["qlra", "-i", &data("hyperbolic.json"), "-o", o.to_str().unwrap()]),
        1
    );
    assert!(!o.exists());
}

#[test]
fn invalid_and_malformed_inputs() {
    let dir = TempDir::new().unwrap();
    let bad = out(&dir, "bad.json");
    fs::write(
        &bad,
        r#"{"marginal_a": [0.5, 0.5], "marginal_b": [0.5, 0.5],
            "trans_b_given_a": [[0.8, 0.3], [0.5, 0.5]], "trans_a_given_b": [[0.5, 0.5], [0.5, 0.5]]}"#,
    )
    .unwrap();
    let o = out(&dir, "o.json");
    assert_eq!(
        qlgame(&["validate", "-i", bad.to_str().unwrap(), "-o", o.to_str().unwrap()]),
        1
    );
    fs::write(&bad, "{\"marginal_a\": [0.5").unwrap();
    assert_eq!(
        qlgame(&["validate", "-i", bad.to_str().unwrap(), "-o", o.to_str().unwrap()]),
        2
    );
    assert_eq!(
        qlgame(&["validate", "-i", "/nonexistent/x.json", "-o", o.to_str().unwrap()]),
        2
    );
    assert!(!o.exists());
    assert_eq!(qlgame(&["frobnicate"]), 2);
    assert_eq!(qlgame(&["bell", "--thetas", "0,1"]), 2);
    assert_eq!(qlgame(&["bell", "--bogus"]), 2);
    assert_eq!(qlgame(&["bell"]), 2);
}

#[test]
fn bell_single_triple() {
    let dir = TempDir::new().unwrap();
    let o = out(&dir, "bell.csv");
    assert_eq!(
        qlgame(&["bell", "--thetas", "0,2.0943951,1.0471976", "-o", o.to_str().unwrap()]),
        0
    );
    let text = fs::read_to_string(&o).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "theta1,theta2,theta3,cov_ab,cov_bc,cov_ca,lhs,rhs,violated,lp_feasible"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let lhs: f64 = row[6].parse().unwrap();
    let rhs: f64 = row[7].parse().unwrap();
    assert!((lhs - 1.0).abs() < 1e-6 && (rhs - 0.5).abs() < 1e-6);
    assert_eq!(&row[8..], &["true", "false"]);
}

#[test]
fn bell_grid_default_step() {
    let dir = TempDir::new().unwrap();
    let o = out(&dir, "grid.csv");
    assert_eq!(qlgame(&["bell", "--grid", "-o", o.to_str().unwrap()]), 0);
    assert_eq!(fs::read_to_string(&o).unwrap().lines().count(), 1 + 24 * 24 * 24);
    assert_eq!(
        qlgame(&["bell", "--grid", "1.5707963267948966", "-o", o.to_str().unwrap()]),
        0
    );
    assert_eq!(fs::read_to_string(&o).unwrap().lines().count(), 1 + 64);
}

#[test]
fn feasibility_reports_witness() {
    let dir = TempDir::new().unwrap();
    let o = out(&dir, "f.json");
    assert_eq!(
        qlgame(&["feasibility", "--thetas", "0,0,0", "-o", o.to_str().unwrap()]),
        0
    );
    let v = read_json(&o);
    assert_eq!(v["lp_feasible"], true);
    assert_eq!(v["witness"]["FFF"].as_f64().unwrap(), 0.5);
    assert_eq!(
        qlgame(&[
            "feasibility",
            "--covariances",
            "-0.5,0.5,0.5",
            "-o",
            o.to_str().unwrap()
        ]),
        0
    );
    assert_eq!(read_json(&o)["lp_feasible"], false);
    assert_eq!(
        qlgame(&[
            "feasibility",
            "-i",
            &data("spin_system.json"),
            "-o",
            o.to_str().unwrap()
        ]),
        0
    );
    assert_eq!(read_json(&o)["violated"], true);
}

#[test]
fn average_and_simulate() {
    let dir = TempDir::new().unwrap();
    let o = out(&dir, "avg.json");
    let game = data("zero_sum_game.json");
    let ctx = data("d1.json");
    assert_eq!(
        qlgame(&[
            "average",
            "--game",
            &game,
            "--context",
            &ctx,
            "--ql",
            "-o",
            o.to_str().unwrap()
        ]),
        0
    );
    let v = read_json(&o);
    assert_eq!(v["averages"]["parts"][0]["averages"]["b"].as_f64().unwrap(), 0.5);
    assert_eq!(v["ql_averages"]["parts"][0]["averages"]["b"].as_f64().unwrap(), 0.5);

    let s = out(&dir, "sim.json");
    let args = [
        "simulate",
        "--game",
        &game,
        "--context",
        &ctx,
        "--trials",
        "1000000",
        "--seed",
        "42",
    ];
    assert_eq!(qlgame(&[&args[..], &["-o", s.to_str().unwrap()]].concat()), 0);
    let v = read_json(&s);
    assert!(v["max_deviation"].as_f64().unwrap() < 0.005);
    let first = fs::read_to_string(&s).unwrap();
    assert_eq!(qlgame(&[&args[..], &["-o", s.to_str().unwrap()]].concat()), 0);
    assert_eq!(first, fs::read_to_string(&s).unwrap());

    let three = data("three_player_game.json");
    let pairs = data("spin_pairs.json");
    assert_eq!(
        qlgame(&[
            "average",
            "--game",
            &three,
            "--context",
            &pairs,
            "-o",
            o.to_str().unwrap()
        ]),
        0
    );
    assert_eq!(
        qlgame(&[
            "average",
            "--game",
            &three,
            "--context",
            &ctx,
            "-o",
            o.to_str().unwrap()
        ]),
        1
    );
}

#[test]
fn estimate_sequence_file() {
    let dir = TempDir::new().unwrap();
    let seq = out(&dir, "seq.txt");
    fs::write(&seq, "F\nF\nI\nF\n").unwrap();
    let o = out(&dir, "est.json");
    assert_eq!(
        qlgame(&["estimate", "-i", seq.to_str().unwrap(), "-o", o.to_str().unwrap()]),
        0
    );
    let v = read_json(&o);
    assert_eq!(v["frequencies"], serde_json::json!([0.75, 0.25]));
    assert!(v["stabilization"].is_null());
    fs::write(&seq, "F\nI\n".repeat(100)).unwrap();
    assert_eq!(
        qlgame(&[
            "estimate",
            "-i",
            seq.to_str().unwrap(),
            "--window",
            "0.5",
            "-o",
            o.to_str().unwrap()
        ]),
        0
    );
    assert_eq!(read_json(&o)["stabilization"]["stabilized"], true);
    fs::write(&seq, "").unwrap();
    assert_eq!(
        qlgame(&["estimate", "-i", seq.to_str().unwrap(), "-o", o.to_str().unwrap()]),
        1
    );
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_qlgame");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["qlra", "--input", &data("d1.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("trigonometric"));
    let hyp = status(&["qlra", "--input", &data("hyperbolic.json")]);
    assert_eq!(hyp.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&hyp.stderr).contains("hyperbolic context: no trigonometric representation"));
    assert_eq!(status(&["nope"]).status.code(), Some(2));
    assert_eq!(status(&["--help"]).status.code(), Some(0));
}
