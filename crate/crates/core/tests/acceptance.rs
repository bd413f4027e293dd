//! One test per acceptance criterion. Each prints a PASS/FAIL line; run with
//! `--nocapture` to see them.

use cheby_critical::verify::{self, CriterionReport, VerifyOptions};

fn check(report: CriterionReport) {
    println!("{report}");
    assert!(report.passed, "{report}");
}

const OPTS: VerifyOptions = VerifyOptions {
    full: false,
    omega_perturbation: 0.0,
};

#[test]
fn criterion_01_exact_formula_equivalence() {
    check(verify::criterion_1(&OPTS));
}

#[test]
fn criterion_02_golden_value() {
    check(verify::criterion_2(&OPTS));
}

#[test]
fn criterion_03_bound_sandwich() {
    check(verify::criterion_3(&OPTS));
}

#[test]
fn criterion_04_monotonicity_and_ratio() {
    check(verify::criterion_4(&OPTS));
}

#[test]
fn criterion_05_quadrature_identity() {
    check(verify::criterion_5(&OPTS));
}

#[test]
fn criterion_06_hypergeometric_closed_forms() {
    check(verify::criterion_6(&OPTS));
}

#[test]
fn criterion_07_asymptotic_constants() {
    check(verify::criterion_7(&OPTS));
}

#[test]
fn criterion_08_limit_consistency() {
    check(verify::criterion_8(&OPTS));
}

#[test]
fn criterion_09_asymptotic_trend() {
    check(verify::criterion_9(&OPTS));
}

#[test]
fn criterion_10_table_determinism() {
    check(verify::criterion_10(&OPTS));
}

#[test]
fn injected_root_fault_fails_the_suite() {
    let faulty = VerifyOptions {
        full: false,
        omega_perturbation: 1e-6,
    };
    let failed: Vec<u8> = verify::run_all(&faulty)
        .into_iter()
        .filter(|r| !r.passed)
        .map(|r| r.id)
        .collect();
    println!("criteria failing under a 1e-6 root shift: {failed:?}");
    assert!(failed.contains(&1) && failed.contains(&2));
}
