use std::path::Path;
use std::process::{Command, Output};

use hurwitz_packing::cli::{run, EXIT_ERROR, EXIT_EXHAUSTED, EXIT_OK, EXIT_USAGE};
use hurwitz_packing::construct::SearchReport;
use hurwitz_packing::hlattice::HurwitzLattice;
use hurwitz_packing::Precision;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz")).args(args).output().unwrap()
}

fn run_in_process(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hurwitz").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const W2: &str = r#"{"m": 2, "basis": [[["1","0","0","0"],["0","0","0","0"]], [["0","0","0","0"],["1","0","0","0"]]]}"#;

#[test]
fn bounds_csv_has_seven_columns_and_ratio_above_one() {
    let (code, out, _) = run_in_process(&["--format", "csv", "bounds", "--m-min", "2", "--m-max", "8"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "m,dimension,eq1,ball,rogers,saturated,eq1_over_ball");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 7);
    for row in &rows {
        assert_eq!(row.len(), 7);
        assert_eq!(row[1], 4.0 * row[0]);
        assert!(row[6] > 1.0);
        assert!(row[2] > row[3] && row[3] > row[4] && row[4] > row[5]);
    }
}

#[test]
fn bounds_rejects_bad_ranges() {
    assert_eq!(bin(&["bounds", "--m-min", "1"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(bin(&["bounds", "--m-min", "5", "--m-max", "3"]).status.code(), Some(EXIT_USAGE));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(bin(&["analyze"]).status.code(), Some(EXIT_USAGE));
    let help = bin(&["--help"]);
    assert_eq!(help.status.code(), Some(EXIT_OK));
    let text = String::from_utf8(help.stdout).unwrap();
    for sub in ["bounds", "analyze", "minima", "rescale", "search", "units", "verify"] {
        assert!(text.contains(sub), "{sub}");
    }
}

#[test]
fn units_lists_twenty_four() {
    let (code, out, _) = run_in_process(&["units"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().filter(|l| l.contains("norm 1")).count(), 24);
}

#[test]
fn analyze_w_squared() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "w2.json", W2);
    let (code, out, _) = run_in_process(&["--format", "csv", "analyze", &file]);
    assert_eq!(code, EXIT_OK);
    let get = |k: &str| {
        out.lines().find_map(|l| l.strip_prefix(&format!("{k},"))).unwrap_or_else(|| panic!("{k}")).to_string()
    };
    assert_eq!(get("m"), "2");
    assert_eq!(get("dimension"), "8");
    assert_eq!(get("minimal_vectors"), "48");
    assert_eq!(get("divisible_by_24"), "true");
    let density: f64 = get("density").parse().unwrap();
    assert!((density - std::f64::consts::PI.powi(4) / 1536.0).abs() < 1e-9, "{density}");
}

#[test]
fn minima_of_w_squared() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "w2.json", W2);
    let (code, out, _) = run_in_process(&["--format", "csv", "minima", &file]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("min_1,1\n") && out.contains("min_2,1\n"), "{out}");
}

#[test]
fn dependent_basis_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "dep.json",
        r#"{"m": 2, "basis": [[["1","0","0","0"],["0","1","0","0"]], [["0","1","0","0"],["-1","0","0","0"]]]}"#,
    );
    let out = bin(&["analyze", &file]);
    assert_eq!(out.status.code(), Some(EXIT_ERROR));
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_and_malformed_files_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(run_in_process(&["analyze", missing.to_str().unwrap()]).0, EXIT_ERROR);
    let bad = write(dir.path(), "bad.json", r#"{"m": 1, "basis": [[["1","0","0"]]]}"#);
    assert_eq!(run_in_process(&["analyze", &bad]).0, EXIT_ERROR);
}

#[test]
fn rescale_needs_determinant_one_unless_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "l.json",
        r#"{"m": 2, "basis": [[["2","0","0","0"],["1","0","0","0"]], [["0","0","0","0"],["1","1","0","0"]]]}"#,
    );
    assert_eq!(run_in_process(&["rescale", &file]).0, EXIT_ERROR);
    let target = dir.path().join("out.json");
    let (code, _, _) = run_in_process(&["rescale", "--normalize", &file, "--output", target.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let l = HurwitzLattice::load(&target, Precision::default()).unwrap();
    assert!((l.determinant().to_f64() - 1.0).abs() < 1e-12);
    let (code, out, _) = run_in_process(&["--format", "csv", "minima", target.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let mins: Vec<f64> = out
        .lines()
        .filter(|l| l.starts_with("min_"))
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let input = HurwitzLattice::load(&file, Precision::default()).unwrap().normalized();
    let before = hurwitz_packing::minima::quaternionic_minima(&input, 1 << 20).unwrap().product().to_f64();
    assert_eq!(mins.len(), 2);
    assert!((mins[0] - before.sqrt()).abs() < 1e-10, "{mins:?} vs {before}");
    assert!(mins[0] <= mins[1]);
}

#[test]
fn search_output_is_deterministic() {
    let args = ["--seed", "11", "--format", "csv", "search", "hlawka", "--samples", "40", "--alpha", "1/4"];
    let a = bin(&args);
    let b = bin(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
    let c = bin(&["--seed", "12", "--format", "csv", "search", "hlawka", "--samples", "40", "--alpha", "1/4"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn search_writes_report_and_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let lattice = dir.path().join("best.json");
    let (code, _, _) = run_in_process(&[
        "--seed",
        "5",
        "search",
        "hlawka",
        "--samples",
        "30",
        "--alpha",
        "1/4",
        "--output",
        lattice.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    let r: SearchReport = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(code, if r.success { EXIT_OK } else { EXIT_EXHAUSTED });
    assert_eq!((r.seed, r.samples, r.alpha.as_str()), (5, 30, "1/4"));
    assert!(r.sum <= r.mean);
    if r.success {
        assert_eq!(r.lattice_file.as_deref(), lattice.to_str());
        let l = HurwitzLattice::load(&lattice, Precision::default()).unwrap();
        assert!((l.determinant().to_f64() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn support_condition_violation_is_an_error() {
    let out = bin(&["search", "hlawka", "--samples", "5", "--alpha", "1", "--ball-radius", "3"]);
    assert_eq!(out.status.code(), Some(EXIT_ERROR));
    assert!(String::from_utf8(out.stderr).unwrap().contains("smaller alpha"));
}

#[test]
fn unexhausted_search_exits_three() {
    let (code, out, _) =
        run_in_process(&["--format", "csv", "search", "convex-body", "--body", "ball", "--samples", "2"]);
    assert_eq!(code, EXIT_EXHAUSTED, "{out}");
    assert!(out.contains("success,false"));
}

#[test]
fn convex_body_search_rejects_a_non_invariant_body() {
    let (code, _, err) = run_in_process(&["search", "convex-body", "--body", "box", "--samples", "5"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(!err.is_empty());
}

#[test]
fn verify_suites_pass() {
    let (code, out, _) = run_in_process(&["verify", "--suite", "quat"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(run_in_process(&["verify", "--suite", "nonsense"]).0, EXIT_USAGE);
}
