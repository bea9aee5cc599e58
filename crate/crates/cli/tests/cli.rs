use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bracketforge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let out = run(&full);
    let v = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (code(&out), v)
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).expect("check present")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const NON_ASSOCIATIVE: &str = r#"{"dim": 3, "basis": ["e", "a", "b"], "unit": [1, 0, 0],
  "structure": [[0,0,0,1],[0,1,1,1],[0,2,2,1],[1,0,1,1],[2,0,2,1],[1,1,2,1],[1,2,1,1]]}"#;

const GL2_FILE: &str = r#"{"name": "gl2-file", "dim": 4, "basis": ["E11", "E12", "E21", "E22"], "unit": [1, 0, 0, 1],
  "structure": [[0,0,0,1],[0,1,1,1],[1,2,0,1],[1,3,1,1],[2,0,2,1],[2,1,3,1],[3,2,2,1],[3,3,3,1]]}"#;

#[test]
fn commutator_on_gl2_passes_every_check() {
    let (c, r) = json_report(&["verify", "builtin:gl2", "builtin:commutator"]);
    assert_eq!(c, 0);
    assert_eq!(r["passed"], true);
    assert_eq!(r["checks"].as_array().unwrap().len(), 5);
    assert_eq!(r["data"]["commutator_multiple"], "1");
}

#[test]
fn anticommutator_jacobi_fails_with_first_triple() {
    let (c, r) = json_report(&["verify", "builtin:gl2", "builtin:anticommutator", "--checks", "jacobi"]);
    assert_eq!(c, 1);
    let j = check(&r, "jacobi");
    assert_eq!(j["passed"], false);
    assert_eq!(j["witness"]["indices"], serde_json::json!([0, 0, 0]));
    assert_eq!(j["witness"]["labels"], serde_json::json!(["E11", "E11", "E11"]));
}

#[test]
fn bracket_file_matches_builtin() {
    let dir = TempDir::new().unwrap();
    let alg = write(&dir, "gl2.json", GL2_FILE);
    let bracket = write(
        &dir,
        "b.json",
        r#"{"algebra": "gl2", "tensor": [[0,1,1,2],[1,0,1,-2],[1,2,0,2],[1,2,3,-2],[2,1,0,-2],[2,1,3,2],
          [0,2,2,-2],[2,0,2,2],[1,3,1,2],[3,1,1,-2],[2,3,2,-2],[3,2,2,2]]}"#,
    );
    let (c, r) = json_report(&["verify", alg.to_str().unwrap(), bracket.to_str().unwrap()]);
    assert_eq!(c, 0, "{r}");
    assert_eq!(r["data"]["commutator_multiple"], "2");
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn bracket_over_another_algebra_is_rejected() {
    let dir = TempDir::new().unwrap();
    let bracket = write(&dir, "b.json", r#"{"algebra": "gl3", "tensor": []}"#);
    assert_eq!(code(&run(&["verify", "builtin:gl2", bracket.to_str().unwrap()])), 2);
}

#[test]
fn malformed_json_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\"dim\": 2,");
    let (c, r) = json_report(&["verify", bad.to_str().unwrap(), "builtin:zero"]);
    assert_eq!(c, 2);
    assert_eq!(r["error"]["kind"], "parse");
    assert_eq!(code(&run(&["verify", "/nonexistent/alg.json", "builtin:zero"])), 2);
    assert_eq!(code(&run(&["verify", "builtin:nope", "builtin:zero"])), 2);
}

#[test]
fn non_associative_structure_exits_3() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "na.json", NON_ASSOCIATIVE);
    let (c, r) = json_report(&["solve-leibniz", p.to_str().unwrap()]);
    assert_eq!(c, 3);
    assert_eq!(r["error"]["kind"], "invariant");
}

#[test]
fn invalid_thread_count_exits_2() {
    let out = bin().env("BRACKETFORGE_THREADS", "zero").args(["solve-leibniz", "builtin:gl2"]).output().unwrap();
    assert_eq!(code(&out), 2);
    let out = bin().env("BRACKETFORGE_THREADS", "2").args(["solve-leibniz", "builtin:gl2"]).output().unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn solve_leibniz_on_gl2_and_gl3() {
    for (name, unknowns) in [("builtin:gl2", 64), ("builtin:gl3", 729)] {
        let (c, r) = json_report(&["solve-leibniz", name]);
        assert_eq!(c, 0);
        assert_eq!(r["data"]["dimension"], 1);
        assert_eq!(r["data"]["unknowns"], unknowns);
        assert_eq!(r["data"]["basis"][0]["commutator_multiple"], "1");
    }
}

#[test]
fn solve_leibniz_on_dual_numbers_finds_a_non_commutator() {
    let (c, r) = json_report(&["solve-leibniz", "builtin:dual"]);
    assert_eq!(c, 1);
    assert_eq!(r["data"]["dimension"], 1);
    assert_eq!(check(&r, "commutator-span")["passed"], false);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        &["verify", "builtin:gl2", "builtin:anticommutator"][..],
        &["solve-leibniz", "builtin:gl3"],
        &["weyl-check", "--count", "10", "--seed", "7"],
        &["order", "builtin:dual-xy", "loday:3"],
    ] {
        let mut full = args.to_vec();
        full.push("--json");
        let a = run(&full);
        let b = run(&full);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn timing_appears_only_when_requested() {
    let (_, r) = json_report(&["solve-leibniz", "builtin:gl2"]);
    assert!(r.get("elapsed_ms").is_none());
    let (_, r) = json_report(&["solve-leibniz", "builtin:gl2", "--timing"]);
    assert!(r["elapsed_ms"].is_u64());
}

#[test]
fn jacobi_pairs_from_lambda_gamma() {
    let dir = TempDir::new().unwrap();
    let good = write(
        &dir,
        "contact.json",
        r#"{"algebra": {"vars": ["x", "y", "z"]},
            "lambda": [{"vars": ["x", "y"], "coeff": "1"}, {"vars": ["x", "z"], "coeff": "x"}],
            "gamma": {"z": "-1"}}"#,
    );
    let (c, r) = json_report(&["jacobi", good.to_str().unwrap(), "--grid-degree", "3", "--perturbations", "3"]);
    assert_eq!(c, 0, "{r}");
    for name in ["round-trip", "jacobi", "nr-gamma-lambda", "nr-lambda-lambda", "jacobi-iff-nr", "skew-emergence"] {
        assert_eq!(check(&r, name)["passed"], true, "{name}");
    }

    let bad = write(
        &dir,
        "flipped.json",
        r#"{"algebra": {"vars": ["x", "y", "z"]},
            "lambda": [{"vars": [0, 1], "coeff": "1"}, {"vars": [0, 2], "coeff": "x"}],
            "gamma": {"z": "1"}}"#,
    );
    let (c, r) = json_report(&["jacobi", bad.to_str().unwrap(), "--grid-degree", "3"]);
    assert_eq!(c, 1);
    assert_eq!(check(&r, "jacobi")["passed"], false);
    assert_eq!(check(&r, "jacobi-iff-nr")["passed"], true);
    assert_eq!(r["data"]["nr_compatible"], false);
}

#[test]
fn jacobi_bracket_input_round_trips() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "bracket.json",
        r#"{"algebra": {"vars": ["x", "y"]},
            "bracket": [{"d1": {"x": 1}, "d2": {"y": 1}, "coeff": "1"},
                        {"d1": {"y": 1}, "d2": {"x": 1}, "coeff": "-1"},
                        {"d1": [1, 0], "d2": [0, 0], "coeff": "-y"},
                        {"d1": [0, 0], "d2": [1, 0], "coeff": "y"}]}"#,
    );
    let (c, r) = json_report(&["jacobi", p.to_str().unwrap()]);
    assert_eq!(check(&r, "extraction")["passed"], true);
    assert_eq!(check(&r, "round-trip")["passed"], true);
    assert_eq!(c, 0);
    assert_eq!(r["data"]["pair"]["gamma"], serde_json::json!({"x": "y"}));
    assert_eq!(r["data"]["pair"]["lambda"][0]["vars"], serde_json::json!(["x", "y"]));
}

#[test]
fn symmetric_bracket_is_not_skew() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "sym.json",
        r#"{"algebra": {"vars": ["x", "y"]},
            "bracket": [{"d1": {"x": 1}, "d2": {}, "coeff": "1"}, {"d1": {}, "d2": {"x": 1}, "coeff": "1"}]}"#,
    );
    let (c, r) = json_report(&["jacobi", p.to_str().unwrap()]);
    assert_eq!(c, 1);
    let e = check(&r, "extraction");
    assert_eq!(e["passed"], false);
    assert_eq!(e["witness"]["residual"], "2");
}

#[test]
fn jacobi_rejects_nilpotent_algebras() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "n.json", r#"{"algebra": {"vars": ["x", "y"], "nilpotency": {"x": 2}}}"#);
    assert_eq!(code(&run(&["jacobi", p.to_str().unwrap()])), 3);
}

#[test]
fn order_examples() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (r#"[{"d": [0, 0], "coeff": "x y + 1"}]"#, "0"),
        (r#"[{"d": {"x": 1}, "coeff": "1"}]"#, "1"),
        (r#"[{"d": {"x": 2}, "coeff": "1"}]"#, "2"),
    ];
    for (i, (body, expected)) in cases.iter().enumerate() {
        let p = write(&dir, &format!("op{i}.json"), body);
        let (c, r) = json_report(&["order", "builtin:xy", p.to_str().unwrap()]);
        assert_eq!(c, 0);
        assert_eq!(r["data"]["order"], *expected);
    }
    let p = write(&dir, "d3.json", r#"[{"d": {"x": 3}, "coeff": "1"}]"#);
    let (c, r) = json_report(&["order", "builtin:xy", p.to_str().unwrap(), "--cap", "2"]);
    assert_eq!(c, 1);
    assert_eq!(r["data"]["order"], "Unbounded at cap 2");
}

#[test]
fn order_of_nilpotent_loday_brackets() {
    for n in 1..=3 {
        let (c, r) = json_report(&["order", "builtin:dual-xy", &format!("loday:{n}")]);
        assert_eq!(c, 0);
        assert_eq!(r["data"]["bi_order"], serde_json::json!(["0", n.to_string()]));
        assert_eq!(r["data"]["loday_on_grid"], true);
        assert_eq!(r["data"]["skew"], false);
        assert!(check(&r, "loday-first-order")["note"].as_str().unwrap().starts_with("nilpotent algebra"));
    }
    assert_eq!(code(&run(&["order", "builtin:xy", "loday:2"])), 2);
}

#[test]
fn weyl_check_seeded_and_explicit() {
    let (c, r) = json_report(&["weyl-check", "--count", "20", "--probe", "2"]);
    assert_eq!(c, 0, "{r}");
    assert_eq!(r["data"]["probe"]["contains_commutator"], true);
    let (c, r) = json_report(&["weyl-check", "Q P", "P^2 + 1/2 Q", "--lambdas=-1/2,5"]);
    assert_eq!(c, 0);
    assert_eq!(r["data"]["triples"], 8);
    assert_eq!(r["data"]["table"][1]["commutator"], "-2 P^2 + 1/2 Q");
    assert_eq!(code(&run(&["weyl-check", "Q +"])), 2);
}

#[test]
fn human_output_lists_checks() {
    let out = run(&["verify", "builtin:gl2", "builtin:anticommutator", "--checks", "skew,leibniz"]);
    assert_eq!(code(&out), 1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[FAIL] skew (7 failing)"));
    assert!(text.contains("[FAIL] leibniz"));
    assert!(text.contains("result: FAIL"));
}
