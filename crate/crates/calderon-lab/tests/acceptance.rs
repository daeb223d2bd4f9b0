//! The acceptance suite: one test per criterion, each printing its
//! pass/fail line (visible with `--nocapture`) and asserting it. All
//! tolerances are pinned inside the `verify` module, which the CLI
//! `verify` subcommand shares.

use calderon_lab::verify;

const SEED: u64 = 7;

fn assert_criterion(report: verify::CheckReport) {
    println!("{} {} — {}", if report.passed { "PASS" } else { "FAIL" }, report.id, report.detail);
    assert!(report.passed, "{} failed: {}", report.id, report.detail);
}

#[test]
fn criterion_01_calderon_oracle_agreement() {
    assert_criterion(verify::criterion_1_oracle_agreement(SEED));
}

#[test]
fn criterion_02_weighted_pair_exactness() {
    assert_criterion(verify::criterion_2_weighted_exactness(SEED));
}

#[test]
fn criterion_03_log_convexity() {
    assert_criterion(verify::criterion_3_log_convexity(SEED));
}

#[test]
fn criterion_04_derivative_estimate() {
    assert_criterion(verify::criterion_4_derivative_estimate(SEED));
}

#[test]
fn criterion_05_mobius_bound() {
    assert_criterion(verify::criterion_5_mobius_bound(SEED));
}

#[test]
fn criterion_06_three_arc_system() {
    assert_criterion(verify::criterion_6_three_arc_system(SEED));
}

#[test]
fn criterion_07_family_product_law() {
    assert_criterion(verify::criterion_7_family_product_law(SEED));
}

#[test]
fn criterion_08_indicator_identities() {
    assert_criterion(verify::criterion_8_indicator_identities(SEED));
}

#[test]
fn criterion_09_counterexample_reproduction() {
    assert_criterion(verify::criterion_9_counterexamples(SEED));
}

#[test]
fn criterion_10_linear_flow_isometry() {
    assert_criterion(verify::criterion_10_linear_flow(SEED));
}

/// The per-module invariant battery behind `verify --suite all`.
#[test]
fn module_invariants_all_green() {
    let reports = verify::module_checks(SEED);
    let mut failed = Vec::new();
    for r in &reports {
        println!("{} {} — {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.detail);
        if !r.passed {
            failed.push(r.id.clone());
        }
    }
    assert!(failed.is_empty(), "module invariants failed: {failed:?}");
}
