//! Golden-file tests for the command line. Set `FINCONV_BLESS=1` to rewrite
//! the goldens from the current output.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> String {
    format!("tests/fixtures/{name}")
}

fn finconv(args: &[&str]) -> Output {
    finconv_with(args, &[])
}

fn finconv_with(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_finconv"));
    cmd.current_dir(root()).args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 output")
}

fn golden(name: &str, actual: &str) {
    let path = root().join("tests/golden").join(name);
    if std::env::var_os("FINCONV_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

fn run_golden(name: &str, args: &[&str], code: i32) {
    let o = finconv(args);
    assert_eq!(o.status.code(), Some(code), "{}", stderr(&o));
    golden(name, &stdout(&o));
}

#[test]
fn validate_p3() {
    run_golden("validate_p3.json", &["validate", &fixture("p3.json")], 0);
}

#[test]
fn validate_names_the_axiom() {
    let o = finconv(&["validate", &fixture("corrupt.json"), &fixture("not_isotone.json")]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("centered axiom violated at point a"), "{out}");
    assert!(out.contains("isotone axiom violated"), "{out}");
    golden("validate_corrupt.json", &out);
}

#[test]
fn reflect_topologizes_p3() {
    run_golden(
        "reflect_t_p3.json",
        &["reflect", "--functor", "T", &fixture("p3.json")],
        0,
    );
    let o = finconv(&["reflect", "--functor", "T", &fixture("p3.json")]);
    let stored = std::fs::read_to_string(root().join(fixture("p3_topological.json"))).unwrap();
    assert_eq!(stdout(&o), stored);
}

#[test]
fn classify_p3_identity() {
    let args = [
        "classify-map",
        "--map",
        &fixture("identity.json"),
        "--source",
        &fixture("p3.json"),
        "--target",
        &fixture("p3_topological.json"),
        "--witness",
    ];
    run_golden("classify_p3.json", &args, 0);
}

#[test]
fn classify_defaults_to_the_final_convergence() {
    let args = [
        "classify-map",
        "--map",
        &fixture("identity.json"),
        "--source",
        &fixture("p3.json"),
    ];
    let o = finconv(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["flags"]["open"], true);
    assert_eq!(v["flags"]["perfect"], true);
}

#[test]
fn sierpinski_point_is_compact() {
    let zero = fixture("zero.json");
    let args = [
        "check-compact",
        "--space",
        &fixture("sierpinski.json"),
        "--family",
        &zero,
        "--at",
        &zero,
    ];
    run_golden("compact_sierpinski.json", &args, 0);
}

#[test]
fn enumeration_counts() {
    for (size, class, count) in [("2", "convergence", 9), ("3", "pretopology", 64), ("3", "topology", 29)] {
        let o = finconv(&["enumerate", "--size", size, "--class", class, "--count-only"]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["count"], count, "{class} on {size}");
    }
    run_golden("enumerate_2.json", &["enumerate", "--size", "2"], 0);
}

#[test]
fn enumeration_cap_is_an_input_error() {
    let o = finconv(&["enumerate", "--size", "4", "--class", "convergence"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exceeds the cap"));
}

#[test]
fn worker_count_does_not_change_output() {
    let args = ["enumerate", "--size", "3", "--class", "topology"];
    let one = finconv_with(&args, &[("FINCONV_WORKERS", "1")]);
    let four = finconv_with(&args, &[("FINCONV_WORKERS", "4")]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&four));
    let bad = finconv_with(&args, &[("FINCONV_WORKERS", "0")]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn exemplars() {
    run_golden("exemplar_fan.json", &["exemplar", "fan", "--check"], 0);
    run_golden("exemplar_prime.json", &["exemplar", "prime", "--check"], 0);
}

fn stored_witness(name: &str) -> PathBuf {
    root()
        .join("../core/tests/fixtures/witnesses")
        .join(format!("{name}.json"))
}

#[test]
fn search_emits_the_stored_witness() {
    let dir = std::env::temp_dir().join(format!("finconv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for name in ["closed-not-adherent", "almost-open-not-open", "quotient-not-closed"] {
        let out = dir.join(format!("{name}.json"));
        let o = finconv(&["search", "--predicate", name, "--emit", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let emitted = std::fs::read_to_string(&out).unwrap();
        assert_eq!(
            emitted,
            std::fs::read_to_string(stored_witness(name)).unwrap(),
            "{name}"
        );
        let v = finconv(&["validate", out.to_str().unwrap()]);
        assert_eq!(v.status.code(), Some(0));
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn unknown_predicate_is_an_input_error() {
    let o = finconv(&["search", "--predicate", "no-such-thing"]);
    assert_eq!(o.status.code(), Some(2));
    let list = finconv(&["search", "--list"]);
    assert!(stdout(&list).contains("closed-not-adherent"));
}

#[test]
fn laws_pass_on_two_points() {
    let o = finconv(&["laws", "--size", "2", "--input", &fixture("p3.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let suites = v["suites"].as_array().unwrap();
    assert!(suites.len() >= 12);
    assert!(suites.iter().all(|s| s["failures"] == 0));
    assert!(suites.iter().any(|s| s["name"] == "input-files"));
    let total: u64 = suites.iter().map(|s| s["instances"].as_u64().unwrap()).sum();
    assert!(total > 1000);
    assert_eq!(v["preservation_table"].as_array().unwrap().len(), 15);
}

#[test]
fn laws_table_format() {
    run_golden("laws_1.txt", &["laws", "--size", "1", "--format", "table"], 0);
}

#[test]
fn laws_reject_a_corrupted_file() {
    let o = finconv(&["laws", "--size", "2", "--input", &fixture("corrupt.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("centered axiom violated at point a"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn tables_carry_witnesses_or_collapses() {
    let o = finconv(&["tables"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for a in v["implications"].as_array().unwrap() {
        assert_eq!(a["failures"], 0);
        let r = &a["reversal"];
        match r["status"].as_str().unwrap() {
            "witness" => {
                let name = r["predicate"].as_str().unwrap();
                let stored: serde_json::Value =
                    serde_json::from_str(&std::fs::read_to_string(stored_witness(name)).unwrap()).unwrap();
                assert_eq!(r["document"], stored, "{name}");
            }
            "collapses_at_finite_scale" => assert!(r["checked"].as_u64().unwrap() > 0),
            other => panic!("unexpected status {other}"),
        }
    }
    assert_eq!(v["example"]["expected_vector_holds"], true);
}

#[test]
fn unknown_command_is_an_input_error() {
    let o = finconv(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(Path::new(&root().join("tests/golden")).is_dir());
}
