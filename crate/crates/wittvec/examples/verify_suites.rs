//! The randomized verification suites: seeded, reproducible batteries of
//! algebraic invariants covering the group laws, the sequence model, the
//! relation certificates, and the determinant hypotheses.

use wittvec::suites::run_suite;

fn main() {
    // Each suite draws its inputs from a seeded generator, so a report is a
    // pure function of (suite, seed, trials) -- rerunning reproduces it
    // byte for byte, and a failure line embeds the command to replay it.
    let report = run_suite("all", 20260822, 25).unwrap();
    println!("{report}");
    assert!(report.all_passed());

    // Individual invariants are addressable by name.
    let single = run_suite("vandermonde", 1, 40).unwrap();
    let outcome = single
        .outcome("case(1) determinants nonzero")
        .expect("invariant present");
    println!("\n{} ran {} trials", outcome.name, outcome.trials);

    // Reports also serialize to JSON for machine consumption.
    let json = run_suite("cd", 7, 10).unwrap().to_json();
    println!("\ncd suite as JSON: {}", serde_json::to_string(&json).unwrap());
}
