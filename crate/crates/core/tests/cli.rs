use std::path::{Path, PathBuf};
use std::process::Command;

use floerforge::cli::{parse_handle, run};
use floerforge::endfloer::{CassonHandle, EndFloerReport, Verdict};
use floerforge::json::{corpus_path, CORPUS_ENV};
use floerforge::surgery::HFPlusResult;
use floerforge::{Grading, KnotComplex, Sign};
use serde_json::Value;

fn corpus(name: &str) -> String {
    corpus_path(name).display().to_string()
}

/// Runs the CLI in-process; returns (exit code, stdout, stderr).
fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("floerforge").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("floerforge-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn surgery_json_is_byte_stable_and_parses() {
    let args = ["surgery", "--complex", &corpus("figure8"), "--n", "0"];
    let (code, first, _) = cli(&args);
    assert_eq!(code, 0);
    let (_, second, _) = cli(&args);
    assert_eq!(first, second);
    let r: HFPlusResult = serde_json::from_str(&first).unwrap();
    assert_eq!(r.d_invariants, [Grading::half(-1), Grading::half(1)]);
    assert_eq!(r.hf_red(), [(Grading::half(-1), 1)].into());
    // The reduced route gives the same document.
    let (_, reduced, _) = cli(&["surgery", "--complex", &corpus("figure8"), "--n", "0", "--route", "reduced"]);
    assert_eq!(reduced, first);
}

#[test]
fn negative_surgery_coefficients_parse() {
    let (code, out, _) = cli(&["surgery", "--complex", &corpus("trefoil"), "--n", "-1", "--format", "table"]);
    assert_eq!(code, 0);
    assert!(out.contains("HF+ = T(0) ⊕ F(-1)"), "{out}");
}

#[test]
fn cfk_summary_reports_tau_and_basis() {
    let (code, out, _) = cli(&["cfk", "--complex", &corpus("figure8")]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["total_rank"], 5);
    assert_eq!(v["tau"], 0);
    assert_eq!(v["genus"], 1);
    assert_eq!(v["basis_pairs"], serde_json::json!([["0", 0, 1], ["1", 1, 1]]));
    // Knots outside S^3 have no tau.
    let (_, out, _) = cli(&["cfk", "--complex", &corpus("j_in_y")]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["tau"].is_null());
}

#[test]
fn double_emits_a_loadable_complex() {
    let dir = scratch("double");
    let path = dir.join("wh.json");
    let p = path.display().to_string();
    let (code, out, _) = cli(&["double", "--complex", &corpus("k3"), "--sign", "+", "--output", &p]);
    assert_eq!((code, out.as_str()), (0, ""));
    let written: KnotComplex = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let shipped: KnotComplex = serde_json::from_str(&std::fs::read_to_string(corpus_path("wh_k3")).unwrap()).unwrap();
    assert_eq!(written, shipped);
    let (code, out, _) = cli(&["double", "--complex", &corpus("figure8"), "--sign", "-", "--format", "table"]);
    assert_eq!(code, 0);
    assert!(!out.is_empty());
}

#[test]
fn endfloer_reports_top_grading() {
    let (code, out, _) = cli(&["endfloer", "--knot", &corpus("k5"), "--handle", "ch+"]);
    assert_eq!(code, 0);
    let r: EndFloerReport = serde_json::from_str(&out).unwrap();
    assert_eq!(r.max_nontrivial_grading, Some(Grading::int(2)));
    let (_, out, _) = cli(&["endfloer", "--knot", &corpus("k5"), "--handle", "ch+", "--orientation", "-"]);
    let r: EndFloerReport = serde_json::from_str(&out).unwrap();
    assert_eq!(r.vanishes, Some(true));
}

#[test]
fn handle_shorthand() {
    assert_eq!(parse_handle("ch-").unwrap(), CassonHandle::AllNegativeChain);
    assert_eq!(
        parse_handle("mixed:+-+").unwrap(),
        CassonHandle::FiniteMixedThenOneSign { signs: vec![Sign::Plus, Sign::Minus, Sign::Plus] }
    );
    assert_eq!(parse_handle("infinite-both").unwrap(), CassonHandle::HasInfinitePosAndNegChain);
    for bad in ["", "mixed:", "mixed:+x", "ch"] {
        assert!(parse_handle(bad).is_err(), "{bad:?}");
    }
}

fn write_spec(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

#[test]
fn distinguish_reads_specs_with_knot_paths() {
    let dir = scratch("distinguish");
    let k3 = corpus("k3");
    let k5 = corpus("k5");
    let a = write_spec(&dir, "a.json", &format!(r#"{{"knot": "{k3}", "handle": {{"kind": "all_positive_chain"}}}}"#));
    let b = write_spec(&dir, "b.json", &format!(r#"{{"knot": "{k5}", "handle": {{"kind": "all_positive_chain"}}}}"#));
    let (code, out, _) = cli(&["distinguish", "--a", &a, "--b", &b]);
    assert_eq!(code, 0);
    assert!(matches!(serde_json::from_str::<Verdict>(&out).unwrap(), Verdict::Distinct { .. }));
    // An end sum R ♮ reverse(R) against another such sum.
    let sum = |k: &str| {
        format!(
            r#"[{{"knot": "{k}", "handle": {{"kind": "all_positive_chain"}}}},
                {{"knot": "{k}", "handle": {{"kind": "all_positive_chain"}}, "orientation": "-"}}]"#
        )
    };
    let c = write_spec(&dir, "c.json", &sum(&k3));
    let d = write_spec(&dir, "d.json", &sum(&k5));
    let (code, out, _) = cli(&["distinguish", "--a", &c, "--b", &d, "--format", "table"]);
    assert_eq!(code, 0);
    assert!(out.contains("indistinguishable"), "{out}");
}

#[test]
fn exit_codes() {
    // Missing file: I/O error.
    let (code, _, err) = cli(&["surgery", "--complex", "/nonexistent/k.json", "--n", "0"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
    // Unparseable JSON.
    let dir = scratch("exit");
    let bad = write_spec(&dir, "bad.json", "{ not json");
    assert_eq!(cli(&["cfk", "--complex", &bad]).0, 2);
    // Domain errors: unsupported coefficient, nonzero tau.
    assert_eq!(cli(&["surgery", "--complex", &corpus("trefoil"), "--n", "3"]).0, 1);
    assert_eq!(cli(&["double", "--complex", &corpus("trefoil"), "--sign", "+"]).0, 1);
    assert_eq!(cli(&["endfloer", "--knot", &corpus("k3"), "--handle", "sideways"]).0, 1);
    // Usage errors.
    assert_eq!(cli(&["frobnicate"]).0, 2);
    assert_eq!(cli(&["surgery", "--complex", &corpus("trefoil")]).0, 2);
    // Help and version succeed.
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("surgery"));
}

#[test]
fn verify_filter_and_formats() {
    let (code, out, _) = cli(&["verify", "--filter", "zero-surgery"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("1/1 criteria passed"), "{out}");
    let (code, out, _) = cli(&["verify", "--filter", "triangle", "--format", "json"]);
    assert_eq!(code, 0);
    let rows: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 1);
    assert_eq!(rows[0]["pass"], true);
}

/// Runs the binary with the corpus directory overridden.
fn binary_with_corpus(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_floerforge")).args(args).env(CORPUS_ENV, dir).output().unwrap()
}

#[test]
fn corrupted_corpus_fails_verification() {
    let dir = scratch("corpus");
    for entry in std::fs::read_dir(corpus_path("unknot").parent().unwrap()).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dir.join(entry.file_name())).unwrap();
    }
    let ok = binary_with_corpus(&dir, &["verify", "--filter", "zero-surgery"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    // Move the figure-eight's reduced class: its zero-surgery changes.
    let fig8 = dir.join("figure8.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&fig8).unwrap()).unwrap();
    v["differential"] = Value::Array(vec![]);
    std::fs::write(&fig8, v.to_string()).unwrap();
    let bad = binary_with_corpus(&dir, &["verify", "--filter", "zero-surgery"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL"));
}
