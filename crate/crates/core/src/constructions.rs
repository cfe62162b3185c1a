//! Builders for the explicit tensor families.
//!
//! Conventions, fixed once: a slice `X_j` is a `b × c` matrix with row = `B`
//! index and column = `C` index, and "diagonal of offset `d`" means the
//! entries `(i, i + d)`.
//!
//! - [`landsberg_tensor`]: the graded family `T_{m,p}(λ)` on
//!   `C^{2p+1} ⊗ C^m ⊗ C^m`. With the `A`-basis ordered
//!   `a_{-p}, …, a_p`, slice `a_j` for `j ≥ 0` is the all-ones diagonal of
//!   offset `j`, and slice `a_{-u}` for `u ≥ 1` carries `λ_{u,α}` at
//!   `(u+α-1, α-1)` (the offset `-u` diagonal). Each slice is supported on a
//!   single diagonal, so the slices are graded by offset.
//! - [`aft_tensor`]: the shift family on `C^{k+1} ⊗ C^m ⊗ C^m`, `m = 2^k`:
//!   slice `a_0` is the identity and slice `a_j` is the full diagonal of
//!   offset `m - 2^{j-1}`.
//! - [`aft_prime_tensor`]: the same family widened by one `C` column that
//!   carries `m - k` extra `A`-directions.
//! - [`matmul_tensor`]: `n × n` matrix multiplication, in the standard
//!   pairing or with `B`, `C` ordered so `A`-contractions are block
//!   diagonal.
//! - [`polymult_truncated`]: multiplication in the truncated polynomial
//!   algebra of dimension `m`; slice `x_u` (multiplication by the `u`-th
//!   basis power) is the full diagonal of offset `u`.
//! - [`polymult_eps_decomposition`]: the `ε`-deformation of the truncated
//!   algebra split into `m` rank-one terms by evaluation/interpolation at
//!   the `m` complex `m`-th roots of `ε`; the only non-exact construction,
//!   quarantined to the upper-bound evidence path.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::rng::{mix, SplitMix64};
use crate::tensor3::Tensor3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("bad dimensions: need 1 <= p and 2p+1 <= m, got m={m}, p={p}")]
    BadDims { m: usize, p: usize },
    #[error("epsilon must be positive, got {0}")]
    EpsNonPositive(f64),
}

/// Source of the coefficients `λ_{i,j}` of the graded family.
#[derive(Debug, Clone)]
pub enum LambdaSource {
    /// `λ_{i,j} = 2^(2^(i+j)) + 2^j`: doubly exponential values that force a
    /// single dominant monomial in every minor of the factorization.
    Explicit,
    /// Reproducible uniform nonzero values in `[1, modulus)`. Values depend
    /// only on `(seed, i, j)`, not on evaluation order.
    Seeded { seed: u64, modulus: u64 },
    /// User-provided table, indexed `[i-1][j-1]`.
    Table(Vec<Vec<BigInt>>),
}

impl LambdaSource {
    pub fn seeded(seed: u64, modulus: u64) -> Self {
        LambdaSource::Seeded { seed, modulus }
    }

    /// The coefficient `λ_{i,j}` for `i >= 1`, `j >= 1`.
    pub fn value(&self, i: usize, j: usize) -> BigInt {
        assert!(i >= 1 && j >= 1, "lambda indices are 1-based");
        match self {
            LambdaSource::Explicit => {
                let e = 1u32 << (i + j) as u32;
                (BigInt::one() << e) + (BigInt::one() << j)
            }
            LambdaSource::Seeded { seed, modulus } => {
                let h = mix(*seed, &[i as u64, j as u64]);
                BigInt::from(1 + h % (modulus - 1))
            }
            LambdaSource::Table(rows) => rows[i - 1][j - 1].clone(),
        }
    }
}

/// The graded family `T_{m,p}(λ)` of dimensions `(2p+1, m, m)`.
///
/// Slices are stored in `A`-basis order `a_{-p}, …, a_0, …, a_p`, so the
/// middle slice (index `p`) is the identity.
pub fn landsberg_tensor(
    m: usize,
    p: usize,
    lambda: &LambdaSource,
) -> Result<Tensor3, ConstructionError> {
    if p < 1 || 2 * p + 1 > m {
        return Err(ConstructionError::BadDims { m, p });
    }
    let a = 2 * p + 1;
    let mut t = Tensor3::zero(a, m, m);
    // a_{-u}, u = 1..p: λ_{u,α} at row u+α-1, col α-1 (1-based α up to m-u).
    for u in 1..=p {
        for alpha in 1..=m - u {
            t.set(p - u, u + alpha - 1, alpha - 1, lambda.value(u, alpha));
        }
    }
    // a_j, j = 0..p: ones on the offset-j diagonal, rows 0..m-j.
    for j in 0..=p {
        for beta in 0..m - j {
            t.set(p + j, beta, j + beta, BigInt::one());
        }
    }
    Ok(t)
}

/// Shift family of dimensions `(k+1, m, m)` with `m = 2^k`: identity slice
/// plus the full diagonals of offsets `m - 2^{j-1}` for `j = 1..k`. Its rank
/// is `2m - 1` but its border rank is only `m`.
pub fn aft_tensor(k: usize) -> Tensor3 {
    assert!(k >= 1, "k must be at least 1");
    let m = 1usize << k;
    let mut t = Tensor3::zero(k + 1, m, m);
    for beta in 0..m {
        t.set(0, beta, beta, BigInt::one());
    }
    for j in 1..=k {
        let offset = m - (1 << (j - 1));
        for alpha in 0..m - offset {
            t.set(j, alpha, offset + alpha, BigInt::one());
        }
    }
    t
}

/// Widened shift family of raw dimensions `(m+1, m, m+1)`: the `k+1` slices
/// of [`aft_tensor`] extended by a zero last `C` column, plus slices
/// `a_{k+i} = b_i ⊗ c_{m+1}` for `i = 1..m-k` carried by that column.
pub fn aft_prime_tensor(k: usize) -> Tensor3 {
    let (embedded, extra) = aft_prime_decomposition(k);
    &embedded + &extra
}

/// Padded to cubic dimensions `(m+1, m+1, m+1)` by a zero `B` row.
pub fn aft_prime_tensor_padded(k: usize) -> Tensor3 {
    let m = 1usize << k;
    aft_prime_tensor(k).pad((m + 1, m + 1, m + 1)).unwrap()
}

/// The two summands of the widened family: the embedded shift family and
/// the last-column part whose `(a, b)` coefficient matrix has rank `m - k`.
pub fn aft_prime_decomposition(k: usize) -> (Tensor3, Tensor3) {
    assert!(k >= 1, "k must be at least 1");
    let m = 1usize << k;
    let base = aft_tensor(k);
    let embedded = base.pad((m + 1, m, m + 1)).unwrap();
    let mut extra = Tensor3::zero(m + 1, m, m + 1);
    for i in 1..=m - k {
        extra.set(k + i, i - 1, m, BigInt::one());
    }
    (embedded, extra)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatmulPresentation {
    /// `A = (i,j)`, `B = (j,k)`, `C = (k,i)`, pairs encoded row-major.
    Standard,
    /// `B` reordered to `(k,j)` so that `A`-contractions become block
    /// diagonal with `n` identical `n × n` blocks.
    BlockDiag,
}

/// The `n × n` matrix multiplication tensor, dimensions `(n², n², n²)`.
pub fn matmul_tensor(n: usize, presentation: MatmulPresentation) -> Tensor3 {
    assert!(n >= 2, "matrix multiplication needs n >= 2");
    let nn = n * n;
    let mut t = Tensor3::zero(nn, nn, nn);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let b_idx = match presentation {
                    MatmulPresentation::Standard => j * n + k,
                    MatmulPresentation::BlockDiag => k * n + j,
                };
                t.set(i * n + j, b_idx, k * n + i, BigInt::one());
            }
        }
    }
    t
}

/// Multiplication tensor of the truncated polynomial algebra of dimension
/// `m`: slice `x_u` maps the dual of the degree-`i` basis vector to the
/// degree-`i+u` basis vector, i.e. is the full diagonal of offset `u`.
/// Slice `x_0` is the identity; products overflowing degree `m - 1`
/// truncate to zero. Border rank of this tensor is `m`.
pub fn polymult_truncated(m: usize) -> Tensor3 {
    assert!(m >= 1);
    let mut t = Tensor3::zero(m, m, m);
    for u in 0..m {
        for i in 0..m - u {
            t.set(u, i, i + u, BigInt::one());
        }
    }
    t
}

/// One rank-one term of the `ε`-decomposition.
#[derive(Debug, Clone)]
pub struct RankOneTriple {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub c: Vec<Complex64>,
}

/// Rank-`m` decomposition of the multiplication tensor of the algebra where
/// the `m`-th power of the generator equals `ε`, by evaluation at the `m`
/// complex `m`-th roots of `ε` and Lagrange interpolation back. The sum of
/// the terms differs from [`polymult_truncated`] exactly by the wrap-around
/// entries, each of coefficient `ε`, witnessing border rank `m` as
/// `ε → 0`.
pub fn polymult_eps_decomposition(
    m: usize,
    eps: f64,
) -> Result<Vec<RankOneTriple>, ConstructionError> {
    if eps <= 0.0 || eps.is_nan() {
        return Err(ConstructionError::EpsNonPositive(eps));
    }
    assert!(m >= 2, "decomposition needs m >= 2");
    let root_abs = eps.powf(1.0 / m as f64);
    let mut triples = Vec::with_capacity(m);
    for r in 0..m {
        let theta = 2.0 * std::f64::consts::PI * r as f64 / m as f64;
        let omega = Complex64::from_polar(root_abs, theta);
        let a: Vec<Complex64> = (0..m).map(|s| omega.powu(s as u32)).collect();
        let b = a.clone();
        // Lagrange basis coefficients: c[u] = ω^{-u} / m.
        let c: Vec<Complex64> = (0..m).map(|u| omega.powi(-(u as i32)) / m as f64).collect();
        triples.push(RankOneTriple { a, b, c });
    }
    Ok(triples)
}

/// Max-norm distance between the summed `ε`-decomposition and the truncated
/// multiplication tensor; equals `ε` up to floating error.
pub fn eps_decomposition_residual(m: usize, eps: f64) -> Result<f64, ConstructionError> {
    let triples = polymult_eps_decomposition(m, eps)?;
    let target = polymult_truncated(m);
    let mut max_err = 0.0f64;
    for s in 0..m {
        for t in 0..m {
            for u in 0..m {
                let mut sum = Complex64::zero();
                for triple in &triples {
                    sum += triple.a[s] * triple.b[t] * triple.c[u];
                }
                let want = if target.get(s, t, u).is_zero() {
                    0.0
                } else {
                    1.0
                };
                let err = (sum - want).norm();
                if err > max_err {
                    max_err = err;
                }
            }
        }
    }
    Ok(max_err)
}

/// Seeded tensor with entries uniform in `[0, p)`.
pub fn random_tensor(a: usize, b: usize, c: usize, seed: u64, p: u64) -> Tensor3 {
    let mut rng = SplitMix64::new(mix(seed, &[a as u64, b as u64, c as u64]));
    let mut t = Tensor3::zero(a, b, c);
    for i in 0..a {
        for j in 0..b {
            for k in 0..c {
                t.set(i, j, k, BigInt::from(rng.below(p)));
            }
        }
    }
    t
}

/// Seeded sum of `r` rank-one tensors with coordinates uniform in `[1, p)`.
pub fn random_rank_one_sum(a: usize, b: usize, c: usize, r: usize, seed: u64, p: u64) -> Tensor3 {
    let mut rng = SplitMix64::new(mix(seed, &[a as u64, b as u64, c as u64, r as u64]));
    let mut draw =
        |n: usize| -> Vec<BigInt> { (0..n).map(|_| BigInt::from(rng.nonzero_below(p))).collect() };
    let mut t = Tensor3::zero(a, b, c);
    for _ in 0..r {
        let u = draw(a);
        let v = draw(b);
        let w = draw(c);
        t = &t + &Tensor3::rank_one(&u, &v, &w);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{ExactMatrix, PrimeField, DEFAULT_PRIME};
    use crate::tensor3::FlattenMode;

    #[test]
    fn t3_matches_displayed_matrices() {
        // m=3, p=1: the three slices of T_3(λ).
        let lam = LambdaSource::seeded(1, 1 << 20);
        let t = landsberg_tensor(3, 1, &lam).unwrap();
        assert_eq!(t.dims(), (3, 3, 3));

        let neg = t.slice_a(0).unwrap();
        let mut want = ExactMatrix::zero(3, 3);
        want.set(1, 0, lam.value(1, 1));
        want.set(2, 1, lam.value(1, 2));
        assert_eq!(neg, want, "slice a_{{-1}}");

        assert!(t.slice_a(1).unwrap().is_identity(), "slice a_0");

        let pos = t.slice_a(2).unwrap();
        let mut want = ExactMatrix::zero(3, 3);
        want.set(0, 1, BigInt::one());
        want.set(1, 2, BigInt::one());
        assert_eq!(pos, want, "slice a_1");

        assert_eq!(t.nnz(), 7);
    }

    #[test]
    fn landsberg_rejects_bad_dims() {
        let lam = LambdaSource::seeded(0, 97);
        assert!(landsberg_tensor(3, 0, &lam).is_err());
        assert!(landsberg_tensor(4, 2, &lam).is_err());
        assert!(landsberg_tensor(5, 2, &lam).is_ok());
    }

    #[test]
    fn landsberg_grading_single_diagonal_support() {
        // Slice a_j is supported exactly on the offset-j diagonal, m <= 9.
        let lam = LambdaSource::seeded(3, 101);
        for m in 3..=9usize {
            for p in 1..=(m - 1) / 2 {
                let t = landsberg_tensor(m, p, &lam).unwrap();
                for j in 0..2 * p + 1 {
                    let offset = j as i64 - p as i64;
                    let s = t.slice_a(j).unwrap();
                    let mut on_diag = 0usize;
                    for r in 0..m {
                        for c in 0..m {
                            if s.get(r, c).is_zero() {
                                continue;
                            }
                            assert_eq!(c as i64 - r as i64, offset, "m={m} p={p} slice {j}");
                            on_diag += 1;
                        }
                    }
                    assert_eq!(on_diag, m - offset.unsigned_abs() as usize);
                }
            }
        }
    }

    #[test]
    fn explicit_lambda_is_doubly_exponential() {
        let lam = LambdaSource::Explicit;
        assert_eq!(lam.value(1, 1), BigInt::from(16 + 2));
        assert_eq!(lam.value(1, 2), BigInt::from(256 + 4));
        // λ_{3,8} = 2^(2^11) + 2^8 has 617 decimal digits.
        assert_eq!(lam.value(3, 8).to_string().len(), 617);
    }

    #[test]
    fn seeded_lambda_reproducible_and_nonzero() {
        let a = LambdaSource::seeded(9, 1000);
        let b = LambdaSource::seeded(9, 1000);
        for i in 1..4 {
            for j in 1..8 {
                assert_eq!(a.value(i, j), b.value(i, j));
                assert!(a.value(i, j) > BigInt::zero());
            }
        }
    }

    #[test]
    fn aft_k3_matches_displayed_layout() {
        let t = aft_tensor(3);
        assert_eq!(t.dims(), (4, 8, 8));
        assert!(t.slice_a(0).unwrap().is_identity());
        // (C,B) positions of slice a_3: (5,1),(6,2),(7,3),(8,4), 1-based.
        let s3 = t.slice_a(3).unwrap();
        for (c, b) in [(5, 1), (6, 2), (7, 3), (8, 4)] {
            assert_eq!(*s3.get(b - 1, c - 1), BigInt::one());
        }
        let s2 = t.slice_a(2).unwrap();
        for (c, b) in [(7, 1), (8, 2)] {
            assert_eq!(*s2.get(b - 1, c - 1), BigInt::one());
        }
        let s1 = t.slice_a(1).unwrap();
        assert_eq!(*s1.get(0, 7), BigInt::one());
        assert_eq!(t.nnz(), 8 + 4 + 2 + 1);
    }

    #[test]
    fn aft_k1_is_identity_plus_shift() {
        let t = aft_tensor(1);
        assert_eq!(t.dims(), (2, 2, 2));
        assert!(t.slice_a(0).unwrap().is_identity());
        let mut want = ExactMatrix::zero(2, 2);
        want.set(0, 1, BigInt::one());
        assert_eq!(t.slice_a(1).unwrap(), want);
    }

    #[test]
    fn identity_slice_forces_full_mode_b_rank() {
        let f = PrimeField::new(DEFAULT_PRIME);
        let t8 = aft_tensor(3);
        assert_eq!(t8.flatten(FlattenMode::B).to_mod(f).rank(), 8);
        let t5 = landsberg_tensor(5, 2, &LambdaSource::seeded(1, 997)).unwrap();
        assert_eq!(t5.flatten(FlattenMode::B).to_mod(f).rank(), 5);
    }

    #[test]
    fn aft_prime_last_column_carries_extra_slices() {
        let t = aft_prime_tensor(3);
        assert_eq!(t.dims(), (9, 8, 9));
        // Slices a_4..a_8 live in rows 1..5 of the last C column.
        for i in 1..=5usize {
            let s = t.slice_a(3 + i).unwrap();
            assert_eq!(*s.get(i - 1, 8), BigInt::one());
            assert_eq!(s.to_mod(PrimeField::new(97)).rank(), 1);
        }
        // First k+1 slices agree with the base family on the old columns.
        let base = aft_tensor(3);
        for j in 0..=3usize {
            let wide = t.slice_a(j).unwrap();
            let narrow = base.slice_a(j).unwrap();
            for r in 0..8 {
                for c in 0..8 {
                    assert_eq!(wide.get(r, c), narrow.get(r, c));
                }
                assert!(wide.get(r, 8).is_zero());
            }
        }
    }

    #[test]
    fn aft_prime_decomposition_sums_and_extra_has_rank_m_minus_k() {
        let (embedded, extra) = aft_prime_decomposition(3);
        let whole = aft_prime_tensor(3);
        assert_eq!(&embedded + &extra, whole);
        // The (a, b) coefficient matrix of the last column has rank m-k.
        let f = PrimeField::new(97);
        assert_eq!(extra.flatten(FlattenMode::A).to_mod(f).rank(), 5);
        // Padded variant agrees with the raw one on common support.
        let padded = aft_prime_tensor_padded(3);
        for i in 0..9 {
            for j in 0..8 {
                for k in 0..9 {
                    assert_eq!(padded.get(i, j, k), whole.get(i, j, k));
                }
            }
        }
    }

    #[test]
    fn matmul_n2_has_eight_unit_entries() {
        for pres in [MatmulPresentation::Standard, MatmulPresentation::BlockDiag] {
            let t = matmul_tensor(2, pres);
            assert_eq!(t.nnz(), 8);
            assert_eq!(t.max_abs_entry(), BigInt::one());
        }
    }

    #[test]
    fn matmul_blockdiag_contraction_is_block_diagonal() {
        let t = matmul_tensor(2, MatmulPresentation::BlockDiag);
        let ones = vec![BigInt::one(); 4];
        let m = t.contract_a(&ones).unwrap();
        // Two equal 2x2 blocks, zero off the blocks.
        for r in 0..4 {
            for c in 0..4 {
                if r / 2 != c / 2 {
                    assert!(m.get(r, c).is_zero(), "({r},{c})");
                }
            }
        }
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(m.get(r, c), m.get(2 + r, 2 + c));
            }
        }
        // Seeded coefficients give the same block pattern.
        let mut rng = SplitMix64::new(5);
        let alpha: Vec<BigInt> = (0..4).map(|_| BigInt::from(rng.below(100))).collect();
        let m = t.contract_a(&alpha).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(m.get(r, c), m.get(2 + r, 2 + c));
            }
        }
    }

    #[test]
    fn matmul_presentations_related_by_b_permutation() {
        for n in [2usize, 3] {
            let nn = n * n;
            let standard = matmul_tensor(n, MatmulPresentation::Standard);
            let blockdiag = matmul_tensor(n, MatmulPresentation::BlockDiag);
            // b index (j, k) -> (k, j).
            let perm: Vec<usize> = (0..nn).map(|i| (i % n) * n + i / n).collect();
            let g = ExactMatrix::permutation(&perm);
            let mapped = standard
                .basis_change(&ExactMatrix::identity(nn), &g, &ExactMatrix::identity(nn))
                .unwrap();
            assert_eq!(mapped, blockdiag, "n={n}");
        }
    }

    #[test]
    fn matmul_flatten_ranks_are_n_squared() {
        let f = PrimeField::new(0x7fffffff);
        for pres in [MatmulPresentation::Standard, MatmulPresentation::BlockDiag] {
            let t = matmul_tensor(2, pres);
            for mode in [FlattenMode::A, FlattenMode::B, FlattenMode::C] {
                assert_eq!(t.flatten(mode).to_mod(f).rank(), 4);
            }
        }
    }

    #[test]
    fn polymult_slices_are_offset_diagonals() {
        let t = polymult_truncated(4);
        assert!(t.slice_a(0).unwrap().is_identity());
        for u in 1..4usize {
            let s = t.slice_a(u).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    let want = j >= u && j - u == i;
                    assert_eq!(!s.get(i, j).is_zero(), want);
                }
            }
        }
        // m=2: the off-identity slice is the single shift entry.
        let t2 = polymult_truncated(2);
        assert_eq!(t2.slice_a(1).unwrap(), {
            let mut m = ExactMatrix::zero(2, 2);
            m.set(0, 1, BigInt::one());
            m
        });
    }

    #[test]
    fn eps_residual_is_epsilon() {
        let eps = 1e-3;
        let r = eps_decomposition_residual(8, eps).unwrap();
        assert!((r / eps - 1.0).abs() < 1e-6, "residual/eps = {}", r / eps);
        assert!(matches!(
            polymult_eps_decomposition(4, 0.0),
            Err(ConstructionError::EpsNonPositive(_))
        ));
    }

    #[test]
    fn eps_residual_log_slope_is_one() {
        let r3 = eps_decomposition_residual(8, 1e-3).unwrap();
        let r6 = eps_decomposition_residual(8, 1e-6).unwrap();
        let slope = (r3 / r6).log10() / 3.0;
        assert!((slope - 1.0).abs() < 1e-3, "slope = {slope}");
    }

    #[test]
    fn rank_one_triples_are_outer_products() {
        // Each term has numeric rank one when flattened.
        let triples = polymult_eps_decomposition(4, 1e-2).unwrap();
        assert_eq!(triples.len(), 4);
        for tr in &triples {
            let m: Vec<Vec<Complex64>> = (0..4)
                .map(|s| (0..4).map(|t| tr.a[s] * tr.b[t]).collect())
                .collect();
            let rank = crate::exactmath::rank_numeric_complex(&m, 1e-10).unwrap();
            assert_eq!(rank, 1);
        }
    }

    #[test]
    fn random_tensor_reproducible() {
        let t1 = random_tensor(3, 3, 3, 11, 1009);
        let t2 = random_tensor(3, 3, 3, 11, 1009);
        assert_eq!(t1, t2);
        assert_ne!(t1, random_tensor(3, 3, 3, 12, 1009));
    }

    #[test]
    fn generic_random_tensor_has_full_flatten_ranks() {
        let f = PrimeField::new(1009);
        let t = random_tensor(3, 3, 3, 20, 1009);
        for mode in [FlattenMode::A, FlattenMode::B, FlattenMode::C] {
            assert_eq!(t.flatten(mode).to_mod(f).rank(), 3, "{mode}");
        }
    }
}
