use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use refined_cli::verify::Report;
use refined_core::exact::rat::int;
use refined_core::exact::{ArInvariant, LaurentPoly, NPoly, Series};
use refined_core::invariants::p_laurent;

fn refined(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_refined"))
        .args(args)
        .env_remove("REFINED_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = refined(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn bg_latex_of_smallest_case() {
    assert_eq!(ok(&["bg", "--genus", "2", "--n", "1", "--format", "latex"]), "2q - 4 + 2q^{-1}\n");
}

#[test]
fn bg_json_matches_oracle_and_round_trips() {
    let text = ok(&["bg", "--genus", "3", "--n", "2", "--method", "oracle", "--format", "json"]);
    let p: LaurentPoly = serde_json::from_str(&text).unwrap();
    assert_eq!(p, LaurentPoly::from_int_terms([(2, 3), (1, -12), (0, 18), (-1, -12), (-2, 3)]));
    assert_eq!(serde_json::to_string(&p).unwrap() + "\n", text);
}

#[test]
fn bg_non_primitive_class_is_the_multiple_cover_sum() {
    let text = ok(&["bg", "--genus", "2", "--det", "4", "--divisibility", "2", "--format", "json"]);
    let p: LaurentPoly = serde_json::from_str(&text).unwrap();
    let expect =
        &p_laurent(4).unwrap().scale(&int(2)) + &p_laurent(1).unwrap().substitute_power(2).scale(&int(16));
    assert_eq!(p, expect);
}

#[test]
fn bg_star_scales_by_det_over_g_g_minus_one() {
    let plain: LaurentPoly =
        serde_json::from_str(&ok(&["bg", "--genus", "3", "--n", "12", "--format", "json"])).unwrap();
    let star: LaurentPoly =
        serde_json::from_str(&ok(&["bg", "--genus", "3", "--n", "12", "--star", "--format", "json"]))
            .unwrap();
    assert_eq!(star, plain.scale(&int(2)));
}

#[test]
fn bg_csv() {
    let text = ok(&["bg", "--genus", "2", "--n", "1", "--format", "csv"]);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<Vec<String>> =
        r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    assert_eq!(rows, vec![vec!["-1", "2", "1"], vec!["0", "-4", "1"], vec!["1", "2", "1"]]);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["bg", "--genus", "2"][..],
        &["bg", "--genus", "2", "--n", "3", "--det", "4", "--divisibility", "2"],
        &["bg", "--genus", "2", "--det", "4"],
        &["bg", "--genus", "2", "--det", "6", "--divisibility", "2"],
        &["bg", "--genus", "1", "--n", "3"],
        &["bg", "--genus", "2", "--n", "0"],
        &["ar", "--genus", "1"],
        &["gm", "--m", "2", "--method", "sideways"],
        &["series-in-genus", "--codegree", "3", "--n", "10"],
        &["verify", "--format", "yaml"],
        &["frobnicate"],
    ] {
        let o = refined(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    assert!(ok(&["--help"]).contains("series-in-genus"));
}

#[test]
fn ar_small_genera() {
    assert_eq!(
        ok(&["ar", "--genus", "2", "--xmax", "3"]),
        "Q_{2,0}(n) = n\nQ_{2,1}(n) = 0\nQ_{2,2}(n) = 0\nQ_{2,3}(n) = 0\n"
    );
    let text = ok(&["ar", "--genus", "4", "--xmax", "1", "--format", "json"]);
    let a: ArInvariant = serde_json::from_str(&text).unwrap();
    assert_eq!(a.codegree(0), Some(&NPoly::hilbert(3)));
    assert_eq!(a.codegree(1), Some(&NPoly::from_ints(&[0, -2])));

    let a: ArInvariant =
        serde_json::from_str(&ok(&["ar", "--genus", "3", "--xmax", "5", "--format", "json"])).unwrap();
    assert_eq!(a.codegree(0), Some(&NPoly::hilbert(2)));
    assert!((1..=5).all(|i| a.codegree(i).unwrap().is_zero()));
}

#[test]
fn ar_check_reports_agreement() {
    let text = ok(&["ar", "--genus", "5", "--xmax", "2", "--check"]);
    assert!(text.ends_with("interpolation agrees at codegrees 0..=2\n"), "{text}");
    let v: serde_json::Value =
        serde_json::from_str(&ok(&["ar", "--genus", "4", "--xmax", "2", "--check", "--format", "json"]))
            .unwrap();
    assert_eq!(v["agrees"], serde_json::Value::Bool(true));
    assert_eq!(v["invariant"], v["interpolated"]);
}

#[test]
fn ar_latex_and_csv() {
    assert_eq!(
        ok(&["ar", "--genus", "4", "--xmax", "1", "--format", "latex"]),
        "Q_{4,0}(n) = \\frac{1}{6}n^{3} - \\frac{1}{2}n^{2} + \\frac{1}{3}n\nQ_{4,1}(n) = -2n\n"
    );
    let text = ok(&["ar", "--genus", "4", "--xmax", "1", "--format", "csv"]);
    assert!(text.starts_with("source,i,k,num,den\n"));
    assert!(text.contains("closed,1,1,-2,1\n"));
}

#[test]
fn gm_methods_agree() {
    let text = ok(&["gm", "--m", "4", "--order", "12", "--method", "both"]);
    assert!(text.ends_with("direct and Eisenstein forms agree through x^12\n"), "{text}");
    let d = ok(&["gm", "--m", "4", "--order", "12", "--method", "direct", "--format", "json"]);
    let c = ok(&["gm", "--m", "4", "--order", "12", "--method", "closed", "--format", "json"]);
    assert_eq!(d, c);
    // G_1 = 2 E_2 = 2 sum sigma(a) x^a
    let g1: Series =
        serde_json::from_str(&ok(&["gm", "--m", "1", "--order", "6", "--format", "json"])).unwrap();
    assert_eq!(g1, Series::from_ints(6, &[0, 2, 6, 8, 14, 12, 24]));
}

#[test]
fn series_in_genus_sources_agree_for_low_codegrees() {
    for i in ["0", "1"] {
        let a = ok(&["series-in-genus", "--codegree", i, "--n", "20", "--umax", "10", "--format", "json"]);
        let b = ok(&[
            "series-in-genus",
            "--codegree",
            i,
            "--n",
            "20",
            "--umax",
            "10",
            "--source",
            "general",
            "--format",
            "json",
        ]);
        assert_eq!(a, b, "codegree {i}");
    }
    assert_eq!(
        ok(&["series-in-genus", "--codegree", "0", "--n", "3", "--umax", "5"]),
        "3u^2 + 3u^3 + u^4 + O(u^6)\n"
    );
}

fn report(args: &[&str]) -> (Option<i32>, Report) {
    let o = refined(args);
    let r = serde_json::from_str(&stdout(&o)).unwrap();
    (o.status.code(), r)
}

#[test]
fn verify_oracle_suite_passes() {
    let (code, r) = report(&["verify", "--suite", "oracle", "--max-genus", "5", "--format", "json"]);
    assert_eq!(code, Some(0));
    assert!(r.passed);
    assert!(r.checks.iter().any(|c| c.id == "oracle.convolution.g05"));
    assert!(r.checks.iter().all(|c| c.suite == "oracle"));
}

#[test]
fn verify_report_is_sorted_and_seeded() {
    let (_, a) =
        report(&["verify", "--suite", "oracle", "--max-genus", "3", "--format", "json", "--seed", "7"]);
    let (_, b) =
        report(&["verify", "--suite", "oracle", "--max-genus", "3", "--format", "json", "--seed", "8"]);
    assert_eq!(a.seed, 7);
    assert_eq!(b.seed, 8);
    assert!(a.passed && b.passed);
    let ids: Vec<&str> = a.checks.iter().map(|c| c.id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn verify_through_genus_five_passes() {
    let (code, r) =
        report(&["verify", "--suite", "paper", "--max-genus", "5", "--max-trunc", "4", "--format", "json"]);
    assert_eq!(
        code,
        Some(0),
        "{:#?}",
        r.checks.iter().filter(|c| c.status == refined_cli::verify::Status::Fail).collect::<Vec<_>>()
    );
    assert!(r.checks.iter().any(|c| c.status == refined_cli::verify::Status::Info));
}

#[test]
fn verify_genus_six_flags_only_the_simplified_printed_form() {
    // The simplified genus 6 expression has -2 G_1 in its n^2 coefficient;
    // the computation, the unsimplified expression and interpolation all give +2 G_1.
    let (code, r) =
        report(&["verify", "--suite", "paper", "--max-genus", "6", "--max-trunc", "3", "--format", "json"]);
    assert_eq!(code, Some(1));
    let failed: Vec<&str> = r
        .checks
        .iter()
        .filter(|c| c.status == refined_cli::verify::Status::Fail)
        .map(|c| c.id.as_str())
        .collect();
    assert_eq!(failed, vec!["paper.first-values.g06"]);
    let unsimplified = r.checks.iter().find(|c| c.id == "paper.first-values.g06-unsimplified").unwrap();
    assert_eq!(unsimplified.status, refined_cli::verify::Status::Pass);
}

fn cache_entries(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> =
        fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    v.sort();
    v
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let runs: [&[&str]; 4] = [
        &["bg", "--genus", "2", "--det", "4", "--divisibility", "2", "--format", "json"],
        &["ar", "--genus", "4", "--xmax", "2", "--check", "--format", "json"],
        &["gm", "--m", "3", "--order", "10", "--method", "both", "--format", "csv"],
        &["verify", "--max-genus", "4", "--max-trunc", "2", "--format", "json"],
    ];
    for args in runs {
        let plain = refined(args);
        let with_dir = |extra: &[&str]| {
            let mut a = args.to_vec();
            a.extend_from_slice(extra);
            refined(&a)
        };
        let cold = with_dir(&["--cache-dir", d]);
        let warm = with_dir(&["--cache-dir", d]);
        assert_eq!(plain.stdout, cold.stdout, "{args:?}");
        assert_eq!(plain.stdout, warm.stdout, "{args:?}");
        assert_eq!(plain.status.code(), warm.status.code());
    }
    let names = cache_entries(dir.path());
    assert!(names.contains(&"bg-g2-n4-r2-i8-convolution.json".to_string()), "{names:?}");
    assert!(names.contains(&"ar-g4-i2-closed.json".to_string()), "{names:?}");
    assert!(names.contains(&"ar-g4-i2-interpolated.json".to_string()), "{names:?}");
    assert!(names.contains(&"gm-m3-i10-direct.json".to_string()), "{names:?}");
    assert!(names.iter().all(|n| n.ends_with(".json")), "{names:?}");
}

#[test]
fn cache_dir_from_environment_and_corrupt_entries() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["bg", "--genus", "3", "--n", "4"];
    let expect = ok(&args);
    let run_env = || {
        Command::new(env!("CARGO_BIN_EXE_refined"))
            .args(args)
            .env("REFINED_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    assert_eq!(stdout(&run_env()), expect);
    let entry = dir.path().join("bg-g3-n4-i8-convolution.json");
    assert!(entry.exists());
    fs::write(&entry, "{not json").unwrap();
    let o = run_env();
    assert_eq!(stdout(&o), expect);
    assert!(String::from_utf8_lossy(&o.stderr).contains("ignoring cache entry"));
    assert!(serde_json::from_str::<LaurentPoly>(&fs::read_to_string(&entry).unwrap()).is_ok());
}
