//! The acceptance suite: one test per release criterion, each printing a
//! pass/fail line (visible with `--nocapture`). Tolerances live in
//! `slelab::selftest` next to the checks themselves.
//!
//! Run with:
//!
//! ```text
//! cargo test -p slelab --test acceptance -- --nocapture
//! ```

use slelab::selftest::{self, CriterionOutcome};

fn assert_outcome(outcome: CriterionOutcome) {
    println!("{}", outcome.line());
    assert!(outcome.passed, "{}", outcome.line());
}

#[test]
fn criterion_01_level_two_correspondence() {
    assert_outcome(selftest::level_two_correspondence());
}

#[test]
fn criterion_02_yang_lee_singular_vector() {
    assert_outcome(selftest::yang_lee_singular_vector());
}

#[test]
fn criterion_03_yang_lee_null_vector() {
    assert_outcome(selftest::yang_lee_null_vector());
}

#[test]
fn criterion_04_kappa_solvers() {
    assert_outcome(selftest::kappa_solvers());
}

#[test]
fn criterion_05_minimal_model_tables() {
    assert_outcome(selftest::minimal_model_tables());
}

#[test]
fn criterion_06_zero_drive_closed_forms() {
    assert_outcome(selftest::zero_drive_closed_forms());
}

#[test]
fn criterion_07_conjugation_oracle() {
    assert_outcome(selftest::conjugation_oracle());
}

#[test]
fn criterion_08_hydrodynamic_normalization() {
    assert_outcome(selftest::hydrodynamic_normalization());
}

#[test]
fn criterion_09_statistical_laws() {
    assert_outcome(selftest::statistical_laws());
}

#[test]
fn criterion_10_brownian_normalization() {
    assert_outcome(selftest::brownian_normalization());
}

#[test]
fn criterion_11_round_trip_and_determinism() {
    assert_outcome(selftest::round_trip_and_determinism());
}
