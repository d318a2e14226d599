use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gitstab_core::hilbert_mumford::{
    enumerate_weight_oracle, enumerate_weight_oracle_pruned, verify_certificate, Certificate, CertificateCheck,
};
use gitstab_core::verdict::Status;
use gitstab_core::{parse_poly, parse_poly_file};
use serde_json::Value;
use tempfile::TempDir;

fn gitstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gitstab")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus_file(name: &str) -> String {
    corpus_dir().join(name).to_str().unwrap().to_string()
}

/// Re-verifies every certificate in a report against the echoed polynomial.
fn reverify(report: &Value) -> Vec<Status> {
    let input = &report["input"];
    let f = parse_poly(input["polynomial"].as_str().unwrap(), input["n"].as_u64().unwrap() as usize).unwrap();
    report["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            let cert: Certificate = serde_json::from_value(c["certificate"].clone()).unwrap();
            match verify_certificate(&f, &cert).unwrap() {
                CertificateCheck::Verified { status } => status,
                other => panic!("certificate rejected: {other:?}"),
            }
        })
        .collect()
}

fn status(v: &Value) -> Status {
    serde_json::from_value(v.clone()).unwrap()
}

#[test]
fn analyze_f2_reports_a_verified_certificate() {
    let out = gitstab(&["analyze", &corpus_file("f2.poly"), "--budget", "10", "--no-timestamp", "--json", "-"]);
    let r = json(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "analyze");
    assert_eq!(r["seed"], 1);
    assert!(r.get("timestamp").is_none());
    assert_eq!(status(&r["verdict"]["status"]), Status::NotSemiStable);
    assert_eq!(r["verdict"]["source"], "certificate");
    assert_eq!(r["search"]["strict"]["source"]["strategy"], "singular-point-to-q");
    assert_eq!(reverify(&r), vec![Status::NotSemiStable]);
}

#[test]
fn analyze_nodal_cubic() {
    let out = gitstab(&["analyze", &corpus_file("nodal_cubic.poly"), "--no-timestamp", "--json", "-"]);
    let r = json(&out);
    assert_eq!(r["singular_points"][0]["point"], serde_json::json!(["0", "0", "1"]));
    assert_eq!(r["singular_points"][0]["hessian_rank"], 2);
    assert_eq!(status(&r["verdict"]["status"]), Status::SemiStable);
    assert!(r["search"].get("strict").is_none());
    // a non-strict certificate proves "not stable" alongside the semi-stable claim
    assert_eq!(reverify(&r), vec![Status::NotStable]);
}

#[test]
fn analyze_smooth_quintic_surface_is_heuristically_stable() {
    let out = gitstab(&["analyze", &corpus_file("fermat_quintic_surface.poly"), "--budget", "5", "--json", "-"]);
    let r = json(&out);
    assert_eq!(status(&r["verdict"]["status"]), Status::Stable);
    assert_eq!(r["verdict"]["source"], "heuristic");
    assert!(r["timestamp"].is_string());
    let asserted = gitstab(&["analyze", &corpus_file("fermat_quintic_surface.poly"), "--budget", "5", "--s=-1", "--json", "-"]);
    assert_eq!(json(&asserted)["verdict"]["source"], "theorem");
}

#[test]
fn reports_are_deterministic() {
    let args = ["analyze", &corpus_file("nodal_cubic.poly"), "--budget", "40", "--seed", "7", "--no-timestamp", "--json", "-"];
    let a = gitstab(&args);
    let b = gitstab(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn supplied_points_are_checked() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", "[[0, 0, 1]]");
    let smooth = write(&dir, "smooth.json", "[[\"1\", \"0\", \"-1\"]]");
    let off = write(&dir, "off.json", "[[1, 1, 1]]");
    let bad = write(&dir, "bad.json", "{\"points\": 1}");
    let nodal = corpus_file("nodal_cubic.poly");
    let r = json(&gitstab(&["analyze", &nodal, "--points", s(&good), "--height", "1", "--no-timestamp", "--json", "-"]));
    assert_eq!(r["supplied_points"][0], serde_json::json!(["0", "0", "1"]));
    for p in [&smooth, &off, &bad] {
        assert_eq!(code(&gitstab(&["analyze", &nodal, "--points", s(p)])), 2, "{}", p.display());
    }
}

#[test]
fn input_errors_exit_with_2() {
    let dir = TempDir::new().unwrap();
    let syntax = write(&dir, "syntax.poly", "x0^3 +* x1^3");
    let inhom = write(&dir, "inhom.poly", "x0^3 + x1^2");
    let conic = write(&dir, "conic.poly", "x0^2 + x1^2 + x2^2");
    let line = write(&dir, "line.poly", "x0^3 + x1^3");
    for p in [&syntax, &inhom, &conic, &line] {
        let out = gitstab(&["analyze", s(p)]);
        assert_eq!(code(&out), 2, "{}", p.display());
        assert!(String::from_utf8_lossy(&out.stderr).contains("input error"));
    }
    assert_eq!(code(&gitstab(&["analyze", "/nonexistent.poly"])), 2);
    assert_eq!(code(&gitstab(&["analyze", &corpus_file("f2.poly"), "--budget", "0"])), 2);
    assert_eq!(code(&gitstab(&["analyze", &corpus_file("f2.poly"), "--s", "5"])), 2);
    assert_eq!(code(&gitstab(&["analyze", &corpus_file("f2.poly"), "--s=-1"])), 2);
    assert_eq!(code(&gitstab(&["criteria", "--n", "2", "--d", "3", "--s", "0", "--delta", "2", "--rank", "1", "--corank", "1"])), 2);
    assert_eq!(code(&gitstab(&["criteria", "--n", "2", "--d", "3", "--s", "0", "--delta", "7"])), 2);
    assert_eq!(code(&gitstab(&["example", "gn", "--n", "1"])), 2);
    assert_eq!(code(&gitstab(&["search", &corpus_file("f2.poly"), "--assume-s", "1"])), 2);
}

#[test]
fn example_certify_round_trip() {
    let dir = TempDir::new().unwrap();
    let poly = dir.path().join("g4.poly");
    let cert = dir.path().join("g4.json");
    let r = json(&gitstab(&["example", "gn", "--n", "4", "--poly-out", s(&poly), "--cert-out", s(&cert), "--json", "-"]));
    assert_eq!(r["certificate"]["r"], serde_json::json!([14, 1, 1, -4, -12]));
    assert_eq!(r["check"]["outcome"], "verified");
    let c = json(&gitstab(&["certify", s(&poly), "--cert", s(&cert), "--json", "-"]));
    assert_eq!(c["check"]["outcome"], "verified");
    assert_eq!(status(&c["check"]["status"]), Status::NotSemiStable);

    let wrong = write(&dir, "wrong.json", r#"{"sigma": [["1","0","0"],["0","1","0"],["0","0","1"]], "r": [1, 0, -1], "strict": true}"#);
    let c = json(&gitstab(&["certify", &corpus_file("fermat_cubic.poly"), "--cert", s(&wrong), "--json", "-"]));
    assert_eq!(c["check"]["outcome"], "rejected");
    let sized = write(&dir, "sized.json", r#"{"sigma": [["1"]], "r": [1, -1], "strict": true}"#);
    assert_eq!(code(&gitstab(&["certify", &corpus_file("fermat_cubic.poly"), "--cert", s(&sized)])), 2);
}

#[test]
fn example_text_output() {
    let out = gitstab(&["example", "fn", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("x0^2*x2 + x1^3"), "{text}");
    assert!(text.contains("(3,1,-4)"), "{text}");
    let g2 = String::from_utf8(gitstab(&["example", "gn", "--n", "2"]).stdout).unwrap();
    assert!(g2.contains("note:"), "{g2}");
}

#[test]
fn search_examples() {
    let r = json(&gitstab(&["search", &corpus_file("f2.poly"), "--budget", "10", "--seed", "1", "--json", "-"]));
    assert_eq!(status(&r["outcome"]["strict"]["status"]), Status::NotSemiStable);

    let r = json(&gitstab(&["search", &corpus_file("fermat_cubic.poly"), "--budget", "1000", "--seed", "1", "--json", "-"]));
    assert_eq!(r["outcome"]["summary"], "no certificate found within budget");
    assert_eq!(r["outcome"]["frames_tried"], 1000);

    let r = json(&gitstab(&["search", &corpus_file("triangle.poly"), "--budget", "10", "--json", "-"]));
    assert!(r["outcome"].get("strict").is_none());
    assert_eq!(status(&r["outcome"]["non_strict"]["status"]), Status::NotStable);

    let r = json(&gitstab(&["search", &corpus_file("triangle.poly"), "--budget", "10", "--assume-s", "0", "--json", "-"]));
    assert_eq!(r["outcome"]["non_strict"]["passes_filter"], true);
}

#[test]
fn criteria_examples() {
    let run = |extra: &[&str]| {
        let mut args = vec!["criteria", "--json", "-"];
        args.extend_from_slice(extra);
        let r = json(&gitstab(&args));
        status(&r["verdict"]["status"])
    };
    assert_eq!(run(&["--n", "3", "--d", "4", "--s", "0", "--delta", "2", "--rank", "3"]), Status::Stable);
    assert_eq!(run(&["--n", "9", "--d", "3", "--s", "0", "--delta", "2", "--corank", "2"]), Status::Stable);
    assert_eq!(run(&["--n", "2", "--d", "3", "--s", "0", "--delta", "2", "--rank", "1"]), Status::Inconclusive);
    assert_eq!(run(&["--n", "2", "--d", "3", "--s", "0", "--delta", "2", "--class", "a1"]), Status::SemiStable);
    assert_eq!(run(&["--n", "3", "--d", "3", "--s=-1", "--delta", "1"]), Status::Stable);
}

#[test]
fn oracle_examples() {
    let agree = |file: &str, bound: &str, strict: bool| {
        let mut args = vec!["oracle", file, "--bound", bound, "--json", "-"];
        if strict {
            args.push("--strict");
        }
        let r = json(&gitstab(&args));
        assert_eq!(r["agree"], true, "{r}");
        r["lp"]["feasible"].as_bool().unwrap()
    };
    assert!(agree(&corpus_file("f2.poly"), "5", true));
    assert!(!agree(&corpus_file("fermat_cubic.poly"), "12", false));
    assert!(!agree(&corpus_file("triangle.poly"), "3", true));
    let text = gitstab(&["oracle", &corpus_file("triangle.poly"), "--bound", "3"]);
    assert_eq!(code(&text), 0);
    assert!(String::from_utf8_lossy(&text.stdout).starts_with("agree"));
}

#[test]
fn json_to_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let run = gitstab(&["analyze", &corpus_file("f3.poly"), "--budget", "3", "--json", s(&out)]);
    assert_eq!(code(&run), 0);
    assert!(String::from_utf8_lossy(&run.stdout).contains("verdict: not semi-stable"));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(reverify(&r), vec![Status::NotSemiStable]);
}

/// Expected verdicts for the regression corpus.
const CORPUS: &[(&str, Status)] = &[
    ("cayley_cubic.poly", Status::Stable),
    ("conic_tangent_line.poly", Status::NotSemiStable),
    ("cuspidal_cubic.poly", Status::NotSemiStable),
    ("double_line_cubic.poly", Status::NotSemiStable),
    ("f2.poly", Status::NotSemiStable),
    ("f3.poly", Status::NotSemiStable),
    ("fermat_cubic.poly", Status::Stable),
    ("fermat_quartic.poly", Status::Stable),
    ("fermat_quintic_surface.poly", Status::Stable),
    ("g2.poly", Status::NotSemiStable),
    ("g3.poly", Status::NotSemiStable),
    ("nodal_cubic.poly", Status::SemiStable),
    ("tacnode_quartic.poly", Status::NotStable),
    ("triangle.poly", Status::SemiStable),
];

#[test]
fn corpus_regression() {
    let mut files: Vec<String> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".poly"))
        .collect();
    files.sort();
    let listed: Vec<&str> = CORPUS.iter().map(|(n, _)| *n).collect();
    assert_eq!(files, listed, "corpus and expectations out of sync");
    for (name, want) in CORPUS {
        let r = json(&gitstab(&["analyze", &corpus_file(name), "--budget", "20", "--no-timestamp", "--json", "-"]));
        assert_eq!(status(&r["verdict"]["status"]), *want, "{name}");
        let proven = reverify(&r);
        if want.is_negative() {
            assert!(proven.iter().any(|p| p.implies(*want)), "{name}: {proven:?}");
        }
    }
}

/// Pruning by the weight filter keeps the first witness when the assumed
/// singular-locus dimension is correct.
#[test]
fn pruning_preserves_oracle_outcomes_on_corpus() {
    for (name, _) in CORPUS {
        if *name == "double_line_cubic.poly" {
            continue; // singular along a line; outside the filter's range
        }
        let text = std::fs::read_to_string(corpus_dir().join(name)).unwrap();
        let f = parse_poly_file(&text, None).unwrap();
        let bound = if f.n() == 2 { 6 } else { 2 };
        for strict in [true, false] {
            for assume_s in 0..=f.n() - 2 {
                let plain = enumerate_weight_oracle(&f, bound, strict);
                let pruned = enumerate_weight_oracle_pruned(&f, bound, strict, assume_s);
                assert_eq!(plain, pruned, "{name} strict={strict} s={assume_s}");
            }
        }
    }
}

#[test]
fn search_outcome_is_unchanged_by_assume_s() {
    for (name, _) in CORPUS.iter().filter(|(n, _)| *n != "double_line_cubic.poly") {
        let base = json(&gitstab(&["search", &corpus_file(name), "--budget", "15", "--json", "-"]));
        let flagged = json(&gitstab(&["search", &corpus_file(name), "--budget", "15", "--assume-s", "0", "--json", "-"]));
        for key in ["strict", "non_strict"] {
            assert_eq!(base["outcome"].get(key).is_some(), flagged["outcome"].get(key).is_some(), "{name} {key}");
            if let Some(c) = flagged["outcome"].get(key) {
                assert_eq!(c["passes_filter"], true, "{name} {key}");
            }
        }
    }
}

#[test]
fn fuzz_point_seeds() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus/points_json");
    let mut ok = 0;
    for e in std::fs::read_dir(dir).unwrap() {
        let text = std::fs::read_to_string(e.unwrap().path()).unwrap();
        ok += usize::from(gitstab_cli::analyze::parse_points_json(&text).is_ok());
    }
    assert!(ok >= 2);
}
