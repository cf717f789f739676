//! End-to-end checks of the command-line contract: exit codes, file layout,
//! JSON reports, row re-validation, and byte-level determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ampleak::binary::{sc_point, BinaryParams};
use ampleak::gaussian::{outer_point, uncoded_point, GaussianParams, UncodedScheme};
use ampleak::info::binary_entropy;
use ampleak::memdef::{memdef_entropies, AlphaLaw, MemdefParams};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ampleak"))
        .args(args)
        .output()
        .expect("spawning the binary")
}

fn sample(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../samples")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Data rows of a CSV file, split into cells; the header is checked, not
/// returned.
fn csv_rows(path: &PathBuf, expect_header: &str) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).expect("reading points file");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(expect_header), "CSV header");
    lines
        .map(|l| l.split(',').map(|c| c.to_string()).collect())
        .collect()
}

fn cell(row: &[String], idx: usize) -> f64 {
    row[idx].parse().expect("numeric CSV cell")
}

#[test]
fn differential_capacity_reports_match_the_closed_forms() {
    let out = run(&["binary", "--ps", "0.5", "--pn", "0.1", "--pnz", "0.3", "--cd"]);
    let v = stdout_json(&out);
    let expect = binary_entropy(0.3).unwrap() - binary_entropy(0.1).unwrap();
    assert!((v["c_d_bits"].as_f64().unwrap() - expect).abs() <= 1e-9);
    assert_eq!(v["method"], "closed_form");

    let out = run(&[
        "gaussian", "--ss2", "10", "--sn2", "1", "--snz2", "5", "--power", "10", "--cd",
    ]);
    let v = stdout_json(&out);
    let expect = 0.5 * (41f64.log2() - 9f64.log2());
    assert!((v["c_d_bits"].as_f64().unwrap() - expect).abs() <= 1e-9);
    assert_eq!(v["method"], "closed_form");
}

#[test]
fn region_sweep_records_the_constant_policy_corner() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_string_lossy().into_owned();
    let out = run(&[
        "region",
        &sample("binary_degraded.json"),
        "--bound",
        "r1",
        "--u-card",
        "1",
        "--grid",
        "11",
        "--out",
        &out_dir,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let rows = csv_rows(
        &dir.path().join("points.csv"),
        "bound,kind,u_card,r_a_bits,r_l_bits,r_u_bits,feasible",
    );
    assert!(!rows.is_empty());
    let hit = rows.iter().any(|r| {
        (cell(r, 3) - 0.531004406).abs() <= 1e-8 && (cell(r, 4) - 0.118709101).abs() <= 1e-8
    });
    assert!(hit, "constant-input corner point missing from the sweep");
    for r in &rows {
        assert_eq!(r[0], "r1");
        assert_eq!(r[1], "inner");
        assert_eq!(r[2], "1");
        assert_eq!(r[6], "true");
    }

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["seed"], 42);
    assert_eq!(
        manifest["frontiers"][0]["points"].as_u64().unwrap() as usize,
        rows.len()
    );
    assert_eq!(manifest["config"]["bound"], "r1");
    assert!(manifest["duration_ms"].is_u64());
}

#[test]
fn non_degraded_specs_fail_the_conditional_converse() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "region",
        &sample("crossed_nondegraded.json"),
        "--bound",
        "rout2",
        "--out",
        &dir.path().to_string_lossy(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("residual"), "diagnostic lacks the residual: {err}");
}

#[test]
fn validation_failures_exit_with_code_two() {
    let out = run(&["binary", "--ps", "0.7", "--pn", "0.1", "--pnz", "0.3", "--cd"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "memdef", "--p", "0.5", "--q", "0.5", "--r", "0.5", "--n", "0.1",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "gaussian", "--ss2", "-1", "--sn2", "1", "--snz2", "5", "--power", "10", "--cd",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ this is not a channel").unwrap();
    let out = run(&["region", &bad.to_string_lossy(), "--bound", "r1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "region",
        &sample("binary_degraded.json"),
        "--bound",
        "r1",
        "--grid",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // A missing file is an I/O failure, not a validation failure.
    let out = run(&["check", "/nonexistent/channel.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn degradedness_reports_cover_both_directions() {
    let v = stdout_json(&run(&["check", &sample("memdef.json")]));
    assert_eq!(v["degraded"], true);
    assert_eq!(v["reversely_degraded"], false);
    assert!(v["residual_forward"].as_f64().unwrap() <= 1e-7);

    let v = stdout_json(&run(&["check", &sample("binary_reversed.json")]));
    assert_eq!(v["degraded"], false);
    assert_eq!(v["reversely_degraded"], true);
    assert!(v["residual_reverse"].as_f64().unwrap() <= 1e-7);

    let v = stdout_json(&run(&["check", &sample("crossed_nondegraded.json")]));
    assert_eq!(v["degraded"], false);
    assert_eq!(v["reversely_degraded"], false);
    assert!(v["residual_forward"].as_f64().unwrap() > 1e-3);
    assert!(v["residual_reverse"].as_f64().unwrap() > 1e-3);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = |dir: &str| {
        vec![
            "binary".to_string(),
            "--ps".into(),
            "0.4".into(),
            "--pn".into(),
            "0.05".into(),
            "--pnz".into(),
            "0.2".into(),
            "--grid".into(),
            "21".into(),
            "--seed".into(),
            "7".into(),
            "--out".into(),
            dir.to_string(),
        ]
    };
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for d in [&d1, &d2] {
        let argv = args(&d.path().to_string_lossy());
        let argv: Vec<&str> = argv.iter().map(|s| s.as_str()).collect();
        assert!(run(&argv).status.success());
    }
    let a = fs::read(d1.path().join("points.csv")).unwrap();
    let b = fs::read(d2.path().join("points.csv")).unwrap();
    assert_eq!(a, b, "points.csv differs between identical runs");
}

#[test]
fn recorded_binary_rows_reproduce_their_rates() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "binary", "--ps", "0.5", "--pn", "0.1", "--pnz", "0.3", "--grid", "51", "--out",
        &dir.path().to_string_lossy(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let bp = BinaryParams::new(0.5, 0.1, 0.3).unwrap();
    let rows = csv_rows(
        &dir.path().join("points.csv"),
        "label,kind,r_a_bits,r_l_bits,p_u",
    );
    let mut sc_rows = 0;
    for r in &rows {
        if r[0] != "sc" {
            assert_eq!(r[0], "outer");
            assert!(r[4].is_empty(), "outer rows carry no bias");
            continue;
        }
        sc_rows += 1;
        let again = sc_point(&bp, cell(r, 4)).unwrap();
        assert!((again.r_a - cell(r, 2)).abs() <= 1e-9);
        assert!((again.r_l - cell(r, 3)).abs() <= 1e-9);
    }
    assert!(sc_rows >= 2, "expected a superposition-coding curve");
}

#[test]
fn recorded_memdef_rows_reproduce_their_rates() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "memdef", "--p", "0.25", "--q", "0.25", "--r", "0.5", "--n", "0.1", "--grid", "21",
        "--out", &dir.path().to_string_lossy(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let h_n = binary_entropy(0.1).unwrap();
    let rows = csv_rows(
        &dir.path().join("points.csv"),
        "label,kind,r_a_bits,r_l_bits,alpha",
    );
    let mut coded_max: f64 = 0.0;
    for r in &rows {
        let ent = memdef_entropies(
            &MemdefParams::new(0.25, 0.25, 0.5, 0.1)
                .unwrap()
                .with_alpha(AlphaLaw::Single(cell(r, 4)))
                .unwrap(),
        )
        .unwrap();
        let (r_a, r_l) = match r[0].as_str() {
            "uncoded" => (ent.i_sy(), ent.i_sz()),
            "coded" => (ent.h_s.min(ent.h_y), ent.h_z - h_n),
            "outer" => (ent.h_s.min(ent.h_y), ent.i_sz()),
            other => panic!("unexpected label {other}"),
        };
        assert!((r_a - cell(r, 2)).abs() <= 1e-9, "{} r_a mismatch", r[0]);
        assert!((r_l - cell(r, 3)).abs() <= 1e-9, "{} r_l mismatch", r[0]);
        if r[0] == "coded" {
            coded_max = coded_max.max(cell(r, 2));
        }
    }
    assert!((coded_max - 1.0).abs() <= 1e-9, "coded read-back peaks at one bit");
}

#[test]
fn recorded_gaussian_rows_reproduce_their_rates() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "gaussian", "--ss2", "10", "--sn2", "1", "--snz2", "5", "--power", "10", "--grid",
        "21", "--out", &dir.path().to_string_lossy(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let gp = GaussianParams::new(10.0, 1.0, 5.0, 10.0).unwrap();
    let rows = csv_rows(
        &dir.path().join("points.csv"),
        "label,kind,r_a_bits,r_l_bits,rho,sigma_x",
    );
    for r in &rows {
        let sch = UncodedScheme::new(cell(r, 4), cell(r, 5)).unwrap();
        let again = match r[0].as_str() {
            "uncoded" => uncoded_point(&gp, &sch).unwrap(),
            "outer" => outer_point(&gp, &sch).unwrap().point,
            other => panic!("unexpected label {other}"),
        };
        assert!((again.r_a - cell(r, 2)).abs() <= 1e-9, "{} r_a mismatch", r[0]);
        assert!((again.r_l - cell(r, 3)).abs() <= 1e-9, "{} r_l mismatch", r[0]);
    }
}

#[test]
fn json_points_and_plot_scripts_are_emitted() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "gaussian", "--ss2", "2", "--sn2", "1", "--snz2", "3", "--power", "4", "--grid", "9",
        "--format", "json", "--out", &dir.path().to_string_lossy(),
    ]);
    assert!(out.status.success());
    let rows: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("points.json")).unwrap())
            .unwrap();
    let rows = rows.as_array().expect("points.json is an array");
    assert!(!rows.is_empty());
    assert!(rows[0]["r_a_bits"].is_f64());
    assert!(rows[0]["label"].is_string());

    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "memdef", "--p", "0.25", "--q", "0.25", "--r", "0.5", "--n", "0.1", "--grid", "9",
        "--gnuplot", "--out", &dir.path().to_string_lossy(),
    ]);
    assert!(out.status.success());
    let script = fs::read_to_string(dir.path().join("plot.gp")).unwrap();
    assert!(script.contains("plot"));
    assert!(script.contains("points.csv"));
}
