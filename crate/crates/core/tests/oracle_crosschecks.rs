//! Cross-checks of the prime-field kernels against independent oracles:
//! rational-elimination ranks, exact integer determinants, and the exact
//! embedding solver.

use borderrank_core::constructions::{
    aft_tensor, landsberg_tensor, polymult_truncated, LambdaSource,
};
use borderrank_core::exactmath::{ExactMatrix, PrimeField, RankPolicy, DEFAULT_PRIME};
use borderrank_core::tensor3::Tensor3;
use borderrank_core::verify::oracle;
use borderrank_core::youngflat::{
    commutator_criterion_matrix, young_flattening_matrix, young_rank,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[test]
fn t5_flattening_rank_agrees_with_rational_oracle() {
    // Small seeded coefficients keep the fractions in the oracle tame.
    let lam = LambdaSource::seeded(42, 10_007);
    let t = landsberg_tensor(5, 2, &lam).unwrap();
    let flat = young_flattening_matrix(&t, 2).unwrap();
    assert_eq!((flat.rows(), flat.cols()), (50, 50));
    let mod_rank = flat.to_mod(PrimeField::new(DEFAULT_PRIME)).rank();
    let exact_rank = oracle::rational_rank(&flat);
    assert_eq!(mod_rank, 50);
    assert_eq!(exact_rank, 50);
}

#[test]
fn t5_criterion_det_nonzero_matches_exact_integer_determinant() {
    let lam = LambdaSource::seeded(7, 10_007);
    let t = landsberg_tensor(5, 2, &lam).unwrap();
    let block = commutator_criterion_matrix(&t).unwrap();
    assert_eq!(block.rows(), 20);
    let det_mod = block.to_mod(PrimeField::new(DEFAULT_PRIME)).det().unwrap();
    let det_exact = block.det_exact().unwrap();
    assert_ne!(det_mod, 0);
    assert!(!det_exact.is_zero());
    assert_eq!(
        PrimeField::new(DEFAULT_PRIME).reduce_bigint(&det_exact),
        det_mod
    );
}

#[test]
fn matmul2_young_rank_16_of_24_by_16() {
    let t = borderrank_core::constructions::matmul_tensor(
        2,
        borderrank_core::constructions::MatmulPresentation::Standard,
    );
    let flat = young_flattening_matrix(&t, 1).unwrap();
    assert_eq!((flat.rows(), flat.cols()), (24, 16));
    assert_eq!(oracle::rational_rank(&flat), 16);
    let outcome = young_rank(&t, 1, &RankPolicy::default()).unwrap();
    assert_eq!(outcome.rank, 16);
    assert!(outcome.certified);
}

#[test]
fn shift_family_embeds_into_polymult_with_unit_rows() {
    for k in [1usize, 2, 3] {
        let m = 1usize << k;
        let t = aft_tensor(k);
        let poly = polymult_truncated(m);
        let s = Tensor3::find_a_specialization(&poly, &t).expect("embedding exists");
        assert_eq!(Tensor3::specialize_a(&poly, &s).unwrap(), t);
        // Unit rows selecting degrees 0 and m - 2^{j-1}.
        let mut want = ExactMatrix::zero(k + 1, m);
        want.set(0, 0, BigInt::one());
        for j in 1..=k {
            want.set(j, m - (1 << (j - 1)), BigInt::one());
        }
        assert_eq!(s, want, "k={k}");
        // The same embedding expressed in the reversed B basis.
        assert_eq!(
            Tensor3::specialize_a(&poly.reverse_b(), &s).unwrap(),
            t.reverse_b()
        );
    }
}

#[test]
fn widened_family_rank_pinned_by_oracle() {
    let t = borderrank_core::constructions::aft_prime_tensor_padded(3);
    let flat = young_flattening_matrix(&t, 1).unwrap();
    let mod_rank = flat.to_mod(PrimeField::new(DEFAULT_PRIME)).rank();
    assert_eq!(oracle::rational_rank(&flat), mod_rank);
}

#[test]
fn explicit_lambda_ranks_pinned() {
    // Doubly exponential coefficients never materialize on the field path
    // beyond reduction. The explicit table reaches full rank at m = 3 and
    // m = 5; at m = 7 it measures 243 of 245 across unrelated primes
    // (Mersenne and not), so the deficiency is structural, not a modular
    // accident — seeded coefficients are the ones that certify full rank
    // at every odd m. Pinned here so any change in behavior surfaces.
    let t = landsberg_tensor(5, 2, &LambdaSource::Explicit).unwrap();
    let outcome = young_rank(&t, 2, &RankPolicy::default()).unwrap();
    assert_eq!(outcome.rank, 50);
    assert!(outcome.certified);

    let t7 = landsberg_tensor(7, 3, &LambdaSource::Explicit).unwrap();
    assert!(t7.max_abs_entry() > BigInt::from(u128::MAX));
    for p in [borderrank_core::exactmath::DEFAULT_PRIME, 1_000_000_007] {
        let outcome = young_rank(&t7, 3, &RankPolicy::single(p)).unwrap();
        assert_eq!(outcome.rank, 243, "mod {p}");
    }
    let seeded = landsberg_tensor(7, 3, &LambdaSource::seeded(42, 10_007)).unwrap();
    let outcome = young_rank(&seeded, 3, &RankPolicy::default()).unwrap();
    assert_eq!(outcome.rank, 245);
    assert!(outcome.certified);
}

#[test]
fn criterion_matrix_tracks_injectivity_at_order_three() {
    // The Schur-complement determinant detects injectivity beyond the
    // orders the equivalence experiment sweeps: at m = 7 (p = 3) a generic
    // tensor is full rank with a certified nonzero determinant, and a sum
    // of 2m-2 rank-one terms is deficient with a vanishing one.
    use borderrank_core::constructions::{random_rank_one_sum, random_tensor};
    use borderrank_core::youngflat::{binomial, commutator_det_test};

    let policy = RankPolicy::default();
    let m = 7usize;
    let full = binomial(m, 3) * m;

    let generic = random_tensor(m, m, m, 314, DEFAULT_PRIME);
    let (nonzero, rep) = commutator_det_test(&generic, &policy).unwrap();
    assert!(nonzero && rep.certified);
    assert_eq!(rep.lower_bound, Some(13));
    assert_eq!(young_rank(&generic, 3, &policy).unwrap().rank, full);

    let low = random_rank_one_sum(m, m, m, 2 * m - 2, 314, DEFAULT_PRIME);
    let (nonzero, rep) = commutator_det_test(&low, &policy).unwrap();
    assert!(!nonzero && !rep.certified);
    assert!(young_rank(&low, 3, &policy).unwrap().rank < full);

    let lam = LambdaSource::seeded(42, DEFAULT_PRIME);
    let t7 = landsberg_tensor(7, 3, &lam).unwrap();
    let (nonzero, rep) = commutator_det_test(&t7, &policy).unwrap();
    assert!(nonzero && rep.certified);
    assert_eq!(rep.lower_bound, Some(13));
}
