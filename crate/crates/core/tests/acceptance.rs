//! Acceptance suite: every built-in verification criterion as its own
//! test, printing one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! expected-versus-computed line for every criterion including the passing
//! ones.

use borderrank_core::verify::{run_all, CriterionResult, VerifyOptions};

fn run(id: &str) -> CriterionResult {
    let opts = VerifyOptions {
        only: Some(id.to_string()),
        ..VerifyOptions::default()
    };
    let mut results = run_all(&opts);
    assert_eq!(results.len(), 1, "criterion id {id:?} must be unique");
    let result = results.remove(0);
    println!("{}", result.render());
    result
}

fn assert_criterion(id: &str) {
    let r = run(id);
    assert!(
        r.passed,
        "{id}: expected {} | computed {}",
        r.expected, r.computed
    );
}

#[test]
fn criterion_01_young_full_rank_odd_m() {
    assert_criterion("young-full-rank-odd-m");
}

#[test]
fn criterion_02_commutator_blocks_m5() {
    assert_criterion("commutator-blocks-m5");
}

#[test]
fn criterion_03_determinant_factorization() {
    assert_criterion("determinant-factorization");
}

#[test]
fn criterion_04_criterion_equivalence() {
    assert_criterion("criterion-equivalence");
}

#[test]
fn criterion_05_shift_family_border_rank() {
    assert_criterion("shift-family-border-rank");
}

// Known red: the pinned order-1 kernel dimension (4, hence rank 77) of the
// padded widened family is not attained by any presentation of that tensor
// — every factor arrangement and orientation was measured, with the ranks
// pinned over the rationals by the elimination oracle. The achievable
// content (lower bound 10 = m + 2 both at order 1 on the C*-side domain
// and over all orders, the exact decomposition, part rank 5, upper bound
// 13) is verified inside the criterion; the pinned values stay asserted
// as stated, so this test documents the discrepancy instead of hiding it.
#[test]
fn criterion_06_widened_family_bounds() {
    assert_criterion("widened-family-bounds");
}

#[test]
fn criterion_07_matmul_young_bound() {
    assert_criterion("matmul-young-bound");
}

#[test]
fn criterion_08_matmul_subspace_profile() {
    assert_criterion("matmul-subspace-profile");
}

#[test]
fn criterion_09_witness_line_r_2m_1() {
    assert_criterion("witness-line-r-2m-1");
}

#[test]
fn criterion_10_witness_pencil_m4() {
    assert_criterion("witness-pencil-m4");
}

#[test]
fn criterion_11_property_suites() {
    assert_criterion("property-suites");
}
