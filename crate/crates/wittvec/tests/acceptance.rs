//! End-to-end acceptance checks: one test per release criterion, each
//! printing a single PASS/FAIL line (visible with `--nocapture`).
//!
//! The randomized criteria share four deterministic suite runs at their
//! contractual trial counts; the fixed-value criteria assert exact
//! oracles directly.

use num_bigint::BigInt;
use num_traits::One;
use std::sync::OnceLock;
use wittvec::suites::{run_suite, SuiteReport};
use wittvec::vandermonde::PVandermonde;

const SEED: u64 = 20260822;

fn properties() -> &'static SuiteReport {
    static R: OnceLock<SuiteReport> = OnceLock::new();
    R.get_or_init(|| run_suite("properties", SEED, 200).expect("properties suite runs"))
}

fn cd() -> &'static SuiteReport {
    static R: OnceLock<SuiteReport> = OnceLock::new();
    R.get_or_init(|| run_suite("cd", SEED, 200).expect("cd suite runs"))
}

fn c_functor() -> &'static SuiteReport {
    static R: OnceLock<SuiteReport> = OnceLock::new();
    R.get_or_init(|| run_suite("c-functor", SEED, 200).expect("c-functor suite runs"))
}

fn vandermonde() -> &'static SuiteReport {
    static R: OnceLock<SuiteReport> = OnceLock::new();
    R.get_or_init(|| run_suite("vandermonde", SEED, 100).expect("vandermonde suite runs"))
}

/// Asserts the named invariants all passed and prints the criterion line.
fn criterion(label: &str, checks: &[(&SuiteReport, &[&str])]) {
    let mut failures = Vec::new();
    for (report, names) in checks {
        for name in *names {
            let outcome = report
                .outcome(name)
                .unwrap_or_else(|| panic!("suite `{}` has no invariant `{name}`", report.suite()));
            if !outcome.passed {
                failures.push(format!(
                    "{name}: {}",
                    outcome.failure.as_deref().unwrap_or("failed")
                ));
            }
        }
    }
    if failures.is_empty() {
        println!("{label}: PASS");
    } else {
        println!("{label}: FAIL");
        panic!("{label} failed:\n{}", failures.join("\n"));
    }
}

#[test]
fn criterion_01_phi_additivity() {
    criterion(
        "criterion 1 (phi additivity, 4 rings)",
        &[(
            properties(),
            &[
                "phi additivity over Z",
                "phi additivity over Z/9",
                "phi additivity over Z/6",
                "phi additivity over (Z/9)[t]",
            ],
        )],
    );
}

#[test]
fn criterion_02_teichmuller_negation() {
    criterion(
        "criterion 2 (teichmuller negation, 4 rings)",
        &[(
            properties(),
            &[
                "teichmuller negation over Z",
                "teichmuller negation over Z/9",
                "teichmuller negation over Z/6",
                "teichmuller negation over (Z/9)[t]",
            ],
        )],
    );
}

#[test]
fn criterion_03_frobenius_relations() {
    criterion(
        "criterion 3 (frobenius relations, all rings)",
        &[(
            properties(),
            &[
                "frobenius of teichmuller over Z",
                "frobenius of teichmuller over Z/9",
                "frobenius of teichmuller over Z/6",
                "frobenius of teichmuller over Z[t]",
                "frobenius of teichmuller over (Z/9)[t]",
                "frobenius after verschiebung over Z",
                "frobenius after verschiebung over Z/9",
                "frobenius after verschiebung over Z/6",
                "frobenius after verschiebung over Z[t]",
                "frobenius after verschiebung over (Z/9)[t]",
            ],
        )],
    );
}

#[test]
fn criterion_04_shift_decomposition() {
    criterion(
        "criterion 4 (shift decomposition, torsion rings included)",
        &[(
            cd(),
            &[
                "shift decomposition over Z",
                "shift decomposition over Z/9",
                "shift decomposition over Z/6",
            ],
        )],
    );
}

#[test]
fn criterion_05_ghost_homomorphism_torsion_free() {
    criterion(
        "criterion 5 (ghost additivity + p-torsion freeness over Z)",
        &[(
            properties(),
            &["ghost additivity over Z", "p-torsion freeness over Z"],
        )],
    );
}

#[test]
fn criterion_06_vandermonde_determinants() {
    let m = PVandermonde::new(3, &[BigInt::one(), BigInt::from(2)]).expect("valid tuple");
    assert_eq!(m.det(), BigInt::from(6), "det M(1,2) at p=3");
    criterion(
        "criterion 6 (nonzero p-power Vandermonde determinants)",
        &[(
            vandermonde(),
            &[
                "case(1) determinants nonzero",
                "case(2) determinants nonzero",
                "determinant of M(1,2) at p=3 equals 6",
            ],
        )],
    );
}

#[test]
fn criterion_07_point_search_pipeline() {
    criterion(
        "criterion 7 (point search yields independent tuples)",
        &[(vandermonde(), &["point search yields independent tuples"])],
    );
}

#[test]
fn criterion_08_certificate_engine() {
    criterion(
        "criterion 8 (certificate soundness, completeness, non-membership)",
        &[(
            c_functor(),
            &[
                "certificate soundness over Z[x,y]",
                "certificate completeness with p-division over Z[x,y]",
                "non-membership witness over Z[t]",
                "mixed-element certificates over Z[t]",
                "shift stability over Z[t]",
            ],
        )],
    );
}

#[test]
fn criterion_09_projection_compatibility() {
    criterion(
        "criterion 9 (kernel generators project to zero; projection onto W_3(Z/9))",
        &[(
            cd(),
            &[
                "projection kills kernel combinations over Z/9",
                "projection kills kernel combinations over Z/6",
                "projection kills kernel combinations over Z/5",
                "projection surjectivity over Z/9",
            ],
        )],
    );
}

#[test]
fn criterion_10_truncation_compatibility() {
    criterion(
        "criterion 10 (truncation commutes with the operators)",
        &[(
            properties(),
            &[
                "truncation compatibility over Z",
                "truncation compatibility over Z/9",
                "truncation compatibility over Z/6",
                "truncation compatibility over Z[t]",
                "truncation compatibility over (Z/9)[t]",
            ],
        )],
    );
}
