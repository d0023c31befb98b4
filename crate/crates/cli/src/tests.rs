use std::fs;
use std::path::{Path, PathBuf};

use tempfile::TempDir;

use imaginarity::io::{parse_ensemble, parse_state};
use imaginarity::measures::{measure_pure, MeasureKind};

use super::{run, Streams};

struct Output {
    code: u8,
    stdout: String,
    stderr: String,
}

fn imag(args: &[&str]) -> Output {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut streams = Streams {
        out: &mut out,
        err: &mut err,
    };
    let code = run(std::iter::once("imag").chain(args.iter().copied()), &mut streams);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn stdout(out: &Output) -> String {
    out.stdout.clone()
}

fn write(dir: &TempDir, name: &str, json: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, json).unwrap();
    path
}

fn canonical(dir: &TempDir, name: &str, a: f64) -> PathBuf {
    let (c, s) = (((1.0 + a) / 2.0).sqrt(), ((1.0 - a) / 2.0).sqrt());
    write(
        dir,
        name,
        &format!(r#"{{"dim": 2, "kind": "pure", "data": [[{c}, 0], [0, {s}]]}}"#),
    )
}

const MIXED: &str = r#"{"dim": 2, "kind": "density", "data": [[0.75, 0], [0, -0.25], [0, 0.25], [0.25, 0]]}"#;
const REAL: &str = r#"{"dim": 2, "kind": "density", "data": [[0.6, 0], [0.2, 0], [0.2, 0], [0.4, 0]]}"#;

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn measure_prints_twelve_decimals() {
    let dir = TempDir::new().unwrap();
    let plus = canonical(&dir, "plus.json", 0.0);
    let out = imag(&["measure", "--state", s(&plus), "--measure", "gl"]);
    assert!(out.code == 0);
    assert_eq!(stdout(&out), "0.292893218813\n");

    let real = write(&dir, "real.json", REAL);
    assert_eq!(stdout(&imag(&["measure", "--state", s(&real)])), "0.000000000000\n");

    let mixed = write(&dir, "mixed.json", MIXED);
    assert_eq!(stdout(&imag(&["measure", "--state", s(&mixed)])), "0.034074173711\n");
    assert_eq!(
        stdout(&imag(&["measure", "--state", s(&mixed), "--measure", "g"])),
        "0.066987298108\n"
    );
}

#[test]
fn measure_rejects_bad_files() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        r#"{"dim": 2, "kind": "pure", "data": [[1, 0], [1, 0]]}"#,
    );
    let out = imag(&["measure", "--state", s(&bad)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("not normalized"));
    assert!(out.stdout.is_empty());

    let out = imag(&["measure", "--state", s(&dir.path().join("missing.json"))]);
    assert_eq!(out.code, 2);
}

#[test]
fn unknown_verbs_and_flags_are_rejected() {
    let out = imag(&["frobnicate"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("Usage"));
    assert_eq!(imag(&["verify", "--suite", "nope"]).code, 2);
    assert_eq!(imag(&["decay", "--channel", "bf", "--bogus"]).code, 2);
}

#[test]
fn decay_csv_layout() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("bf.csv");
    let out = imag(&["decay", "--channel", "bf", "--grid", "2", "--out", s(&csv)]);
    assert!(out.code == 0);
    let text = fs::read_to_string(&csv).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "A,param,delta_gl,delta_g");
    assert_eq!(lines.len(), 5);
    let corner: Vec<f64> = lines[4].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(&corner[..2], &[1.0, 1.0]);
    assert!(corner[2].abs() < 1e-15 && corner[3].abs() < 1e-15);

    let out = imag(&["decay", "--channel", "pd", "--grid", "2"]);
    let text = stdout(&out);
    let corner: Vec<f64> = text
        .lines()
        .nth(2)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(&corner[..2], &[0.0, 1.0]);
    assert!((corner[2] - (1.0 - 0.5f64.sqrt())).abs() < 1e-15);
    assert!((corner[3] - 0.5).abs() < 1e-15);
}

#[test]
fn decay_files_are_deterministic_and_checked() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let out = imag(&["decay", "--channel", "pd", "--out", s(&a), "--check"]);
    assert!(out.code == 0);
    let report = stdout(&out);
    assert!(report.contains("max discrepancy (gl)") && report.contains("max discrepancy (g)"));
    imag(&["decay", "--channel", "pd", "--out", s(&b)]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(fs::read_to_string(&a).unwrap().lines().count(), 101 * 101 + 1);

    let out = imag(&["decay", "--channel", "ad", "--grid", "11", "--measure", "g", "--check"]);
    assert!(out.code == 0);
    assert!(out.stderr.contains("max discrepancy (g)"));
    assert!(!stdout(&out).contains("discrepancy"));
}

#[test]
fn decay_errors() {
    let out = imag(&["decay", "--channel", "bf", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.code, 2);
    assert_eq!(imag(&["decay", "--channel", "bf", "--grid", "1"]).code, 2);
}

#[test]
fn decompose_round_trips() {
    let dir = TempDir::new().unwrap();
    let mixed = write(&dir, "mixed.json", MIXED);
    let rho = parse_state(MIXED).unwrap().density();
    for mode in ["optimal", "equalized"] {
        let out = imag(&["decompose", "--state", s(&mixed), "--mode", mode]);
        assert!(out.code == 0, "{mode}");
        let ensemble = parse_ensemble(&stdout(&out)).unwrap();
        assert_eq!(ensemble.len(), 2);
        assert!(ensemble.density_matrix().max_abs_diff(rho.matrix()) < 1e-9);
        if mode == "equalized" {
            for m in &ensemble.members {
                let gl = measure_pure(m, MeasureKind::GeometricLike);
                assert!((gl - 0.034074173710932).abs() < 1e-7);
            }
        }
    }

    let plus = canonical(&dir, "plus.json", 0.0);
    let out = imag(&["decompose", "--state", s(&plus)]);
    assert_eq!(parse_ensemble(&stdout(&out)).unwrap().len(), 1);

    let real = write(&dir, "real.json", REAL);
    let out = imag(&["decompose", "--state", s(&real), "--mode", "equalized"]);
    let ensemble = parse_ensemble(&stdout(&out)).unwrap();
    assert!(ensemble.members.iter().all(|m| m.witness() > 1.0 - 1e-9));
}

#[test]
fn convert_pure_sources() {
    let dir = TempDir::new().unwrap();
    let high = canonical(&dir, "high.json", 0.8);
    let low = canonical(&dir, "low.json", 0.2);
    let out = imag(&["convert", "--from", s(&high), "--to", s(&low)]);
    assert!(out.code == 0);
    assert_eq!(stdout(&out), "probability: 0.227666120890\nbranch: filtered\n");

    let out = imag(&["convert", "--from", s(&low), "--to", s(&low)]);
    assert_eq!(stdout(&out), "probability: 1.000000000000\nbranch: deterministic\n");

    let real = write(&dir, "real.json", REAL);
    let text = stdout(&imag(&["convert", "--from", s(&high), "--to", s(&real)]));
    assert!(text.starts_with("probability: 1.000000000000\n"));
    assert!(text.contains("target is free"));

    let out = imag(&["convert", "--from", s(&high), "--to", s(&low), "--fidelity", "1"]);
    assert_eq!(stdout(&out), "probability: 0.227666120890\nbranch: filtered\n");
    let out = imag(&["convert", "--from", s(&high), "--to", s(&low), "--fidelity", "0.99"]);
    let p: f64 = stdout(&out).lines().next().unwrap()["probability: ".len()..]
        .parse()
        .unwrap();
    assert!(p > 0.227666120890 && p < 1.0);
    assert_eq!(
        imag(&["convert", "--from", s(&high), "--to", s(&low), "--fidelity", "1.5"]).code,
        2
    );
}

#[test]
fn convert_accepts_rank_one_densities_and_rejects_mixed_sources() {
    let dir = TempDir::new().unwrap();
    let low = canonical(&dir, "low.json", 0.2);
    let h = 0.5;
    let pure_density = write(
        &dir,
        "plus_density.json",
        &format!(r#"{{"dim": 2, "kind": "density", "data": [[{h}, 0], [0, -{h}], [0, {h}], [{h}, 0]]}}"#),
    );
    let out = imag(&["convert", "--from", s(&pure_density), "--to", s(&low)]);
    assert!(out.code == 0);
    assert_eq!(stdout(&out), "probability: 1.000000000000\nbranch: deterministic\n");

    let mixed = write(&dir, "mixed.json", MIXED);
    let out = imag(&["convert", "--from", s(&mixed), "--to", s(&low)]);
    assert_eq!(out.code, 3);
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_reports_and_exit_codes() {
    let out = imag(&["verify", "--suite", "decay", "--grid", "21", "--seed", "5"]);
    assert_eq!(out.code, 0);
    let text = stdout(&out);
    assert!(text.contains("seed: 5"));
    assert!(text.trim_end().ends_with("overall: PASS (24 of 24 checks passed)"));

    // Strong monotonicity of M_gl does not hold, so this suite fails.
    let out = imag(&["verify", "--suite", "monotonicity", "--samples", "200"]);
    assert_eq!(out.code, 1);
    assert!(stdout(&out).contains("M3 strong monotonicity (gl)"));
}

#[test]
fn roof_suite_agrees_with_closed_form() {
    let out = imag(&["verify", "--suite", "roof", "--samples", "8", "--seed", "42"]);
    assert_eq!(out.code, 0, "{}", stdout(&out));
}
