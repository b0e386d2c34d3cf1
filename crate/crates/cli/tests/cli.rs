use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use selfdual_cli::Record;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfdual"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Runs a command with `--format record` and checks it re-parses.
fn record(args: &[&str]) -> (String, Record) {
    let mut full = args.to_vec();
    full.extend(["--format", "record"]);
    let out = run(&full);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let r = Record::parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    (text, r)
}

fn temp_json(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

fn dims(r: &Record, key: &str) -> Vec<u64> {
    r.dims[key].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect()
}

#[test]
fn counterexample_self_and_dual_op_tables() {
    let input = data("counterexample.json");
    let input = input.to_str().unwrap();
    let (_, r) = record(&[
        "cohomology",
        "--input",
        input,
        "--coefficients",
        "self,dual-op",
        "--max-degree",
        "1",
    ]);
    assert_eq!(dims(&r, "self"), [3, 4]);
    assert_eq!(dims(&r, "dual-op"), [3, 3]);

    let out = run(&["cohomology", "--input", input, "--coefficients", "self", "--coefficients", "dual-op", "--max-degree", "1"]);
    let text = stdout(&out);
    assert!(text.contains("H^n(A, self)\n  n  dim\n  0    3\n  1    4\n"), "{text}");
    assert!(text.contains("H^n(A, dual-op)\n  n  dim\n  0    3\n  1    3\n"), "{text}");
}

#[test]
fn normalized_model_agrees_with_full() {
    let input = data("counterexample.json");
    let input = input.to_str().unwrap();
    let args = |m| ["cohomology", "--input", input, "--max-degree", "2", "--model", m];
    let (_, full) = record(&args("full"));
    let (_, norm) = record(&args("normalized"));
    assert_eq!(full.dims, norm.dims);
}

#[test]
fn hollow_triangle_regular_column_matches_nerve() {
    let input = data("hollow_triangle.json");
    let (_, r) = record(&["compare", "--input", input.to_str().unwrap(), "--max-degree", "2"]);
    assert_eq!(dims(&r, "hochschild"), [1, 1, 0]);
    assert_eq!(dims(&r, "simplicial"), [1, 1, 0]);
    assert_eq!(r.checks["regular_matches_nerve"], Value::Bool(true));
    let dual_agrees = dims(&r, "hochschild_dual_op") == dims(&r, "simplicial");
    assert_eq!(r.checks["dual_op_matches_nerve"], Value::Bool(dual_agrees));
}

#[test]
fn compare_accepts_poset_algebras_and_the_relative_model() {
    let body = r#"{"field":{"kind":"Q"},"algebra":{"kind":"poset","elements":["0","1"],"relations":[["0","1"]]}}"#;
    let f = temp_json(body);
    let path = f.path().to_str().unwrap();
    let (_, r) = record(&["compare", "--input", path]);
    assert_eq!(dims(&r, "hochschild"), [1, 0, 0, 0]);
    let (_, rel) = record(&["cohomology", "--input", path, "--model", "relative", "--max-degree", "3"]);
    assert_eq!(dims(&rel, "self"), [1, 0, 0, 0]);
}

#[test]
fn deform_symbolic_determinant() {
    let input = data("deform_n2.json");
    let (_, r) = record(&["deform", "--input", input.to_str().unwrap(), "--symbolic"]);
    assert_eq!(r.witnesses["determinant"], Value::from("-1"));
    assert_eq!(r.witnesses["expected_determinant"], Value::from("-1"));
    assert!(r.checks.values().all(|v| v == &Value::Bool(true)), "{:?}", r.checks);
    assert_eq!(r.checks.len(), 4);
}

#[test]
fn deform_numeric_and_samples() {
    let input = data("deform_n2.json");
    let input = input.to_str().unwrap();
    let (_, r) = record(&["deform", "--input", input, "--hbar", "1/1000", "--samples", "1,1/2,1/1000"]);
    assert_eq!(r.checks["dualizing"], Value::Bool(true));
    assert_eq!(r.witnesses["partition"], Value::from("{1,1,1}"));
    assert_eq!(r.witnesses["partition_constant"], Value::Bool(true));
    assert_eq!(dims(&r, "self"), [3, 0]);
    let (_, zero) = record(&["deform", "--input", input, "--hbar", "0"]);
    assert_eq!(dims(&zero, "self")[1] > 0, true);
    assert_eq!(zero.witnesses["partition"], Value::from("{3}"));
}

#[test]
fn lie_reports() {
    let sl2 = data("sl2.json");
    let (_, r) = record(&["lie", "--input", sl2.to_str().unwrap(), "--coefficients", "trivial"]);
    assert_eq!(dims(&r, "trivial"), [1, 0, 0, 1]);
    assert_eq!(r.witnesses["killing_form"][0][2], Value::from("4"));
    assert_eq!(r.witnesses["killing_form"][1][1], Value::from("8"));
    assert_eq!(r.witnesses["skew_dualizing_form"], Value::Null);
    assert_eq!(r.checks["killing_invariant"], Value::Bool(true));

    let nonab = temp_json(r#"{"field":{"kind":"GF","p":5},"lie":{"kind":"nonabelian2"}}"#);
    let (_, r) = record(&["lie", "--input", nonab.path().to_str().unwrap()]);
    assert_eq!(r.witnesses["frobenius_lie"], Value::Bool(true));
    assert_eq!(r.checks["kirillov_nondegenerate"], Value::Bool(true));
}

#[test]
fn semidirect_block_form_is_checked() {
    let input = data("so3_semidirect.json");
    let (_, r) = record(&["lie", "--input", input.to_str().unwrap(), "--max-degree", "1"]);
    let invariant = r.checks["block_form_invariant"].as_bool().unwrap();
    assert_eq!(r.witnesses.contains_key("block_form_failure"), !invariant);
    assert_eq!(r.checks["block_form_nondegenerate"], Value::Bool(true));
}

#[test]
fn frobenius_witness_and_refusal() {
    let (_, yes) = record(&["frobenius", "--input", data("c3.json").to_str().unwrap(), "--max-degree", "1"]);
    assert_eq!(yes.witnesses["self_dual"], Value::Bool(true));
    assert!(yes.checks.values().all(|v| v == &Value::Bool(true)), "{:?}", yes.checks);
    assert_eq!(dims(&yes, "self"), dims(&yes, "dual-op"));
    let gram = yes.witnesses["gram"].as_array().unwrap();
    assert!(gram.iter().flat_map(|r| r.as_array().unwrap()).all(Value::is_string));

    let (_, no) = record(&["frobenius", "--input", data("counterexample.json").to_str().unwrap()]);
    assert_eq!(no.witnesses["self_dual"], Value::Bool(false));
    assert!(!no.witnesses.contains_key("gram"));
}

#[test]
fn module_file_coefficients() {
    let alg = temp_json(r#"{"field":{"kind":"Q"},"algebra":{"kind":"truncated_poly","n":1}}"#);
    let module = temp_json(
        r#"{"module":{"left":[[["1","0"],["0","1"]],[["0","0"],["1","0"]]],
                      "right":[[["1","0"],["0","1"]],[["0","0"],["1","0"]]]}}"#,
    );
    let m = module.path().to_str().unwrap();
    let (_, r) = record(&["cohomology", "--input", alg.path().to_str().unwrap(), "--coefficients", &format!("self,{m}")]);
    assert_eq!(r.dims["self"], r.dims[m]);
    assert!(r.inputs["modules"].get(m).is_some());
}

#[test]
fn records_round_trip_and_are_deterministic() {
    let jobs: Vec<Vec<String>> = [
        vec!["cohomology", "counterexample.json", "--coefficients", "self,dual-op", "--max-degree", "1"],
        vec!["compare", "hollow_triangle.json"],
        vec!["frobenius", "c3.json"],
        vec!["lie", "sl2.json"],
        vec!["deform", "deform_n2.json", "--samples", "1,-1/2"],
        vec!["validate", "so3_semidirect.json"],
    ]
    .iter()
    .map(|job| {
        let mut args = vec![job[0].to_string(), "--input".into(), data(job[1]).to_str().unwrap().to_string()];
        args.extend(job[2..].iter().map(|s| s.to_string()));
        args
    })
    .collect();
    for args in &jobs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (text, r) = record(&args);
        let mut again = serde_json::to_string_pretty(&r).unwrap();
        again.push('\n');
        assert_eq!(again, text);
        assert!(r.timings.is_empty());
        assert_eq!(r.schema_version, selfdual_cli::SCHEMA_VERSION);
        let (second, _) = record(&args);
        assert_eq!(text, second, "record output differs between runs");
        let t1 = stdout(&run(&args));
        let t2 = stdout(&run(&args));
        assert_eq!(t1, t2, "table output differs between runs");
    }
}

#[test]
fn timings_only_on_request() {
    let input = data("c3.json");
    let (_, r) = record(&["validate", "--input", input.to_str().unwrap(), "--timings"]);
    assert_eq!(
        r.timings.keys().map(String::as_str).collect::<Vec<_>>(),
        ["parse_us", "compute_us", "total_us"]
    );
}

#[test]
fn parse_errors_exit_2() {
    let syntax = temp_json("{\"field\": {\"kind\": \"Q\"},\n \"algebra\": {\"kind\": \"truncated_poly\" \"n\": 2}}");
    let out = run(&["validate", "--input", syntax.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 2, column 39"), "{}", stderr(&out));

    for body in [
        r#"{"field":{"kind":"Q"},"algebra":{"kind":"truncated_poly","n":"2"}}"#,
        r#"{"field":{"kind":"Q"},"algebra":{"kind":"hopf"}}"#,
        r#"{"deform":{"n":2,"p":[1]}}"#,
        r#"{"deform":{"n":2,"p":["one"]}}"#,
    ] {
        let f = temp_json(body);
        let out = run(&["validate", "--input", f.path().to_str().unwrap()]);
        assert_eq!(code(&out), 2, "{body}: {}", stderr(&out));
    }
}

#[test]
fn validation_errors_exit_3() {
    let out = run(&["validate", "--input", data("bad_prime.json").to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("4 is not a prime"), "{}", stderr(&out));

    let out = run(&["validate", "--input", data("cycle.json").to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("cycle: a,b"), "{}", stderr(&out));

    let assoc = temp_json(
        r#"{"field":{"kind":"Q"},"algebra":{"kind":"structure_constants","unit":["1","0","0"],
            "table":[[["1","0","0"],["0","1","0"],["0","0","1"]],
                     [["0","1","0"],["0","0","1"],["0","1","0"]],
                     [["0","0","1"],["0","0","0"],["0","0","0"]]]}}"#,
    );
    let out = run(&["validate", "--input", assoc.path().to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("associativity fails at (i,j,k) = "), "{}", stderr(&out));

    let out = run(&["cohomology", "--input", data("c3.json").to_str().unwrap(), "--model", "relative"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn cap_exceeded_exits_4() {
    let s3 = temp_json(r#"{"field":{"kind":"Q"},"algebra":{"kind":"group","symmetric":3}}"#);
    let out = run(&["cohomology", "--input", s3.path().to_str().unwrap(), "--max-degree", "6"]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("exceeds the cap"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_1() {
    let c3 = data("c3.json");
    let c3 = c3.to_str().unwrap();
    let deform = data("deform_n2.json");
    for args in [
        vec!["cohomology"],
        vec!["cohomology", "--input", c3, "--hbar", "1"],
        vec!["cohomology", "--input", c3, "--model", "bar"],
        vec!["deform", "--input", deform.to_str().unwrap(), "--hbar", "1", "--symbolic"],
        vec!["lie", "--input", c3],
        vec!["validate", "--input", "/nonexistent/file.json"],
        vec!["frobnicate"],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 1, "{args:?}: {}", stderr(&out));
    }
    assert_eq!(code(&run(&["--help"])), 0);
}
