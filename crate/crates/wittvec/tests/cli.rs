//! End-to-end tests of the `witt` binary: documented invocations, output
//! grammar round trips, exit codes, determinism, and the cache directory.

use serde_json::Value;
use std::process::Command;

fn witt() -> Command {
    Command::new(env!("CARGO_BIN_EXE_witt"))
}

fn run(args: &[&str]) -> (String, String, i32) {
    let out = witt().args(args).output().expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("stdout is UTF-8"),
        String::from_utf8(out.stderr).expect("stderr is UTF-8"),
        out.status.code().expect("exit code"),
    )
}

#[test]
fn add_example_matches_oracle() {
    let (stdout, _, code) = run(&["add", "--p", "3", "--len", "2", "--ring", "int", "[1,0]", "[1,0]"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "[2,-2]\n");

    // The grouped spelling is an alias for the same operation.
    let (grouped, _, code) =
        run(&["witt", "add", "--p", "3", "--len", "2", "--ring", "int", "[1,0]", "[1,0]"]);
    assert_eq!(code, 0);
    assert_eq!(grouped, stdout);
}

#[test]
fn vector_operations_match_fixed_values() {
    let (stdout, _, code) = run(&["scale", "--p", "3", "--len", "2", "-3", "[1,0]"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "[-3,8]\n");

    let (stdout, _, _) = run(&["v", "--p", "3", "--len", "3", "[2,0,0]"]);
    assert_eq!(stdout, "[0,2,0]\n");

    let (stdout, _, _) = run(&["f", "--p", "3", "--len", "3", "[2,0,0]"]);
    assert_eq!(stdout, "[8,0]\n");

    let (stdout, _, _) = run(&["neg", "--p", "3", "--len", "2", "[1,0]"]);
    assert_eq!(stdout, "[-1,0]\n");

    let (stdout, _, _) =
        run(&["teich", "--p", "3", "--len", "2", "--ring", "poly:t", "2*t"]);
    assert_eq!(stdout, "[\"2*t\",\"0\"]\n");
}

#[test]
fn ghost_round_trip() {
    let (ghost, _, code) = run(&["ghost", "--p", "3", "--len", "3", "[2,0,0]"]);
    assert_eq!(code, 0);
    assert_eq!(ghost, "[2,8,512]\n");

    let (coords, _, code) = run(&["from-ghost", "--p", "3", "--len", "3", ghost.trim()]);
    assert_eq!(code, 0);
    assert_eq!(coords, "[2,0,0]\n");
}

#[test]
fn text_format_uses_readable_lists() {
    let (stdout, _, _) = run(&[
        "add", "--p", "3", "--len", "2", "--format", "text", "[1,0]", "[1,0]",
    ]);
    assert_eq!(stdout, "[2, -2]\n");
}

#[test]
fn univ_poly_sum_lists_addition_polynomials() {
    let cache = tempfile::tempdir().expect("temp dir");
    let out = witt()
        .args(["univ-poly", "sum", "--p", "3", "--len", "2"])
        .env("WITT_CACHE_DIR", cache.path())
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("S_0 = X0 + Y0"), "unexpected output:\n{stdout}");
    assert!(
        stdout.contains("S_1 = X1 + Y1 - X0^2*Y0 - X0*Y0^2"),
        "unexpected output:\n{stdout}"
    );

    // The cache file lands in the override directory, and a warm run
    // reproduces the output byte for byte.
    assert!(cache.path().join("universal-polys.json").exists());
    let again = witt()
        .args(["univ-poly", "sum", "--p", "3", "--len", "2"])
        .env("WITT_CACHE_DIR", cache.path())
        .output()
        .expect("binary runs");
    assert_eq!(String::from_utf8(again.stdout).unwrap(), stdout);
}

#[test]
fn reduce_example_certifies_sign_pair() {
    let (stdout, _, code) = run(&["c", "reduce", "--p", "3", "V[0]{t} + V[0]{-t}"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).expect("JSON output");
    assert_eq!(v["status"], "in_saturation");
    assert_eq!(v["k"], 0);
    assert!(v["combo"].as_array().is_some_and(|c| !c.is_empty()));
}

#[test]
fn certificate_round_trip_through_cli() {
    let sum = "V[0]{t} + V[0]{-t}";
    let (stdout, _, _) = run(&["c", "reduce", "--p", "3", sum]);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    let cert = serde_json::json!({"k": v["k"], "combo": v["combo"]}).to_string();

    let (stdout, _, code) = run(&["c", "verify-cert", "--p", "3", sum, &cert]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), r#"{"valid":true}"#);

    // The same certificate does not certify a different sum.
    let (stdout, _, code) = run(&["c", "verify-cert", "--p", "3", "V[0]{t} + V[0]{t}", &cert]);
    assert_eq!(code, 1);
    assert_eq!(stdout.trim(), r#"{"valid":false}"#);
}

#[test]
fn eta_and_generator_sequences_agree() {
    let (eta, _, code) = run(&["c", "eta", "--p", "3", "--len", "3", "V[1]{t}"]);
    assert_eq!(code, 0);
    let (gen, _, _) = run(&["cd", "gen", "--p", "3", "--len", "3", "--ring", "poly:t", "1", "t"]);
    assert_eq!(eta, gen);
    assert_eq!(eta, "[\"0\",\"3*t\",\"3*t^3\"]\n");
}

#[test]
fn membership_outcomes_set_exit_codes() {
    let (stdout, _, code) = run(&["cd", "member", "--p", "3", "--len", "2", "[2,8]"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["member"], true);

    let (stdout, _, code) = run(&["cd", "member", "--p", "3", "--len", "2", "[0,1]"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["member"], false);
    assert_eq!(v["index"], 1);
}

#[test]
fn non_member_reduction_exits_one_with_witness() {
    let (stdout, _, code) = run(&["c", "reduce", "--p", "3", "V[0]{t} + V[0]{s}"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["status"], "not_in");
    assert!(v["witness"].as_str().is_some_and(|w| !w.is_empty()));
}

#[test]
fn from_ghost_rejects_non_divisible_sequences() {
    let out = witt()
        .args(["from-ghost", "--p", "3", "--len", "2", "[0,1]"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("component 1"), "stderr: {stderr}");
}

#[test]
fn projection_sends_kernel_elements_to_zero() {
    let terms = r#"[{"level":0,"elem":"u - 1","coeff":2},{"level":1,"elem":"9*v","coeff":1}]"#;
    let (stdout, _, code) = run(&[
        "cd", "project", "--p", "3", "--len", "3", "--ring", "mod:9",
        "--lift", "poly:u,v", "--images", "[1,4]", terms,
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "[0,0,0]\n");
}

#[test]
fn vandermonde_outputs() {
    let (stdout, _, code) = run(&["vdm", "det", "--p", "3", "--format", "text", "[1,2]"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "1  2\n1  8\ndet = 6\n");

    let (stdout, _, code) = run(&["vdm", "check", "--p", "3", "[1,2]"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["result"], "independent");
    assert_eq!(v["det"], 6);

    let (stdout, _, code) = run(&["vdm", "check", "--p", "3", "[1,-1]"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["result"], "hypothesis_violated");

    let (stdout, _, code) = run(&["vdm", "point", "--p", "3", "x + 1", "x*y"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["independent"], true);
    assert!(v["point"].as_array().is_some_and(|p| p.len() == 2));
}

#[test]
fn verify_properties_reports_phi_additivity() {
    let (stdout, _, code) = run(&["verify", "properties", "--seed", "7", "--trials", "3"]);
    assert_eq!(code, 0);
    assert!(
        stdout.contains("phi additivity over Z/9: PASS"),
        "missing line in:\n{stdout}"
    );
}

#[test]
fn verify_vandermonde_reports_counts() {
    let (stdout, _, code) = run(&["verify", "vandermonde", "--trials", "10"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("case(1) determinants nonzero: PASS (10 trials, 10 nonzero determinants)"));
    assert!(stdout.contains("case(2) determinants nonzero: PASS (10 trials, 10 nonzero determinants)"));
}

#[test]
fn suite_output_is_byte_identical_across_runs() {
    let first = run(&["verify", "c-functor", "--seed", "5", "--trials", "3"]);
    let second = run(&["verify", "c-functor", "--seed", "5", "--trials", "3"]);
    assert_eq!(first, second);
    assert_eq!(first.2, 0);
}

#[test]
fn json_report_format() {
    let (stdout, _, code) =
        run(&["verify", "vandermonde", "--trials", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).expect("JSON report");
    assert_eq!(v["suite"], "vandermonde");
    assert_eq!(v["passed"], true);
    assert!(v["invariants"].as_array().is_some_and(|a| !a.is_empty()));
}

#[test]
fn usage_errors_exit_two() {
    let (_, stderr, code) = run(&["add", "--p", "3", "[1,0]", "[1,0]"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--len"), "stderr: {stderr}");
    assert!(stderr.contains("--ring"), "usage text lists the flags: {stderr}");

    let (_, _, code) = run(&["add", "--p", "3", "--len", "2", "--ring", "galois:9", "[1,0]", "[1,0]"]);
    assert_eq!(code, 2);

    let (_, _, code) = run(&["verify", "everything"]);
    assert_eq!(code, 2);

    let (_, _, code) = run(&["frobnicate"]);
    assert_eq!(code, 2);
}
