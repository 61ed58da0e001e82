use std::path::PathBuf;
use std::process::Command;

use gammalab_cli::resolve::resolve;
use gammalab_cli::syntax::{parse_canonical, parse_structure, parse_text};
use gammalab_core::Limits;

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/examples")
        .join(name)
}

fn gammalab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gammalab"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn check(name: &str, extra: &[&str]) -> (i32, String, String) {
    let path = example(name);
    let mut args = vec!["check", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    gammalab(&args)
}

#[test]
fn passing_file_exits_zero() {
    let (code, out, _) = check("b3_pass.gl", &[]);
    assert_eq!(code, 0, "{}", out);
    assert!(!out.contains("FAIL"));
    assert_eq!(out.lines().filter(|l| l.starts_with('[')).count(), 19);
}

#[test]
fn corrupted_module_exits_one_with_replayed_witness() {
    let (code, out, _) = check("b3_fail.gl", &[]);
    assert_eq!(code, 1);
    assert!(out.contains("M1: FAIL witness M1"), "{}", out);
    assert!(out.contains("witness replay: confirmed"));
}

#[test]
fn structural_problems_exit_three_with_position() {
    let (code, _, err) = check("bad_table.gl", &[]);
    assert_eq!(code, 3);
    assert!(err.contains("line 4, column 3"), "{}", err);
    assert!(err.contains("2×3"));
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("dangling.gl");
    std::fs::write(
        &f,
        "semiring B3\n  arity 3\n  matrix boolean 1\n\ncheck check-module M\n",
    )
    .unwrap();
    let (code, _, err) = gammalab(&["check", f.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(
        err.contains("line 5") && err.contains("undeclared module \"M\""),
        "{}",
        err
    );
}

#[test]
fn limits_make_checks_unavailable() {
    let (code, out, _) = check("b3_pass.gl", &["--max-hom-enumeration", "1"]);
    assert_eq!(code, 2, "{}", out);
    assert!(out.contains("UNAVAILABLE"));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<PathBuf> = (0..2).map(|i| dir.path().join(format!("r{}.json", i))).collect();
    for (p, threads) in paths.iter().zip(["1", "4"]) {
        let (code, _, _) = check(
            "b3_pass.gl",
            &["--threads", threads, "--emit-report", p.to_str().unwrap()],
        );
        assert_eq!(code, 0);
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["format"], "gammalab-report");
    assert_eq!(v["outcomes"].as_array().unwrap().len(), 19);
    assert!(v["outcomes"][0].get("elapsed-ms").is_none());
}

#[test]
fn failure_report_carries_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    check("b3_fail.gl", &["--emit-report", p.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&p).unwrap()).unwrap();
    let o = &v["outcomes"][1];
    assert_eq!(o["status"], "fail");
    assert_eq!(o["witness"]["law"], "M1");
    assert_eq!(o["replay-confirmed"], true);
    assert_eq!(v["exit-code"], 1);
}

#[test]
fn fail_fast_stops_at_first_failure() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("x.gl");
    let src = std::fs::read_to_string(example("b3_fail.gl")).unwrap();
    std::fs::write(
        &f,
        src.replace(
            "check check-semiring B3\ncheck check-module C",
            "check check-module C\ncheck check-semiring B3",
        ),
    )
    .unwrap();
    let (code, out, _) = gammalab(&["check", f.to_str().unwrap(), "--fail-fast"]);
    assert_eq!(code, 1);
    assert!(out.contains("stopped after 1 of 2"), "{}", out);
}

#[test]
fn canonical_round_trip() {
    for name in ["b3_pass.gl", "b3_fail.gl"] {
        let text = std::fs::read_to_string(example(name)).unwrap();
        let doc = parse_text(&text).unwrap().document;
        let json = doc.to_canonical();
        let back = parse_canonical(&json).unwrap().document;
        assert_eq!(doc, back, "{}", name);
        assert_eq!(back.to_canonical(), json);
        assert_eq!(parse_structure(&json).unwrap().document, doc);
    }
}

#[test]
fn emitted_canonical_file_checks_the_same() {
    let dir = tempfile::tempdir().unwrap();
    let j = dir.path().join("c.json");
    let (code, text_out, _) = check("b3_pass.gl", &["--emit-canonical", j.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, json_out, _) = gammalab(&["check", j.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(text_out, json_out);
}

#[test]
fn canonical_diagnostics_name_the_item() {
    let json = r#"{"format":"gammalab-structure","version":1,"items":[
        {"kind":"semiring","name":"S","arity":3,"matrix":{"base":"boolean","dim":1}},
        {"kind":"check","directive":"check-module","args":["M"]}]}"#;
    let f = parse_canonical(json).unwrap();
    let err = resolve(&f, &Limits::default()).unwrap_err();
    assert!(err.to_string().contains("item 2"), "{}", err);
    let unknown = json.replace("\"dim\":1", "\"dim\":1,\"colour\":2");
    assert!(parse_canonical(&unknown).is_err());
}

#[test]
fn resolver_rejects_duplicates_and_bad_arguments() {
    let base = "semiring S\n  arity 3\n  matrix boolean 1\n";
    let cases = [
        (
            format!("{}semiring S\n  arity 2\n  matrix z2 1\n", base),
            "already declared",
        ),
        (format!("{}check tensor S 2\n", base), "takes 4 arguments"),
        (format!("{}check nonsense S\n", base), "unknown directive"),
        (
            format!("{}module M\n  over S\n  slots 4\n  regular\n", base),
            "out of range",
        ),
        (
            format!(
                "{}monoid V\n  builtin z2\nmorphism f\n  from V\n  to V\n  map 0 1\n",
                base
            ),
            "undeclared module",
        ),
        (
            format!("{}module M\n  over S\n  slots 2\n  carrier C\n", base),
            "needs one of",
        ),
    ];
    for (src, needle) in cases {
        let msg = match parse_text(&src) {
            Err(d) => d.to_string(),
            Ok(f) => resolve(&f, &Limits::default())
                .err()
                .map(|d| d.to_string())
                .unwrap_or_default(),
        };
        assert!(msg.contains(needle), "{:?} not in {:?}", needle, msg);
    }
}

#[test]
fn table_semiring_with_patch() {
    // Boolean μ̃ of arity 2 with the unit entry knocked out.
    let src = "monoid B\n  builtin boolean\nsemiring S\n  arity 2\n  t B\n  gamma B\n  mu 0 0 0 0 0 0 0 1\n  set args=1,1 params=1 value=0\ncheck check-semiring S\n";
    let env = resolve(&parse_text(src).unwrap(), &Limits::default()).unwrap();
    assert_eq!(env.semirings["S"].mu(&[1, 1], &[1]), 0);
    assert_eq!(env.plan.len(), 1);
}

#[test]
fn explain_and_formats() {
    let (code, out, _) = gammalab(&["explain"]);
    assert_eq!(code, 0);
    assert!(out.lines().count() >= 20);
    let (code, out, _) = gammalab(&["explain", "pushout"]);
    assert_eq!(code, 0);
    assert!(out.contains("check pushout c f"));
    let (code, _, err) = gammalab(&["explain", "nope"]);
    assert_eq!(code, 3);
    assert!(err.contains("unknown directive"));
    let (code, out, _) = gammalab(&["formats"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# Structure files"));
}
