//! Exact and numeric linear-algebra kernels.
//!
//! Everything rank-shaped in this crate flows through here: rank and
//! determinant over a prime field ([`ModMatrix`]), exact integer
//! determinants via fraction-free elimination ([`ExactMatrix::det_exact`]),
//! and a tolerance-based numeric rank ([`rank_numeric`]) for the floating
//! witness paths.
//!
//! Full rank modulo a prime implies full rank over the rationals, so the
//! [`RankPolicy`] machinery labels a result `certified` exactly when full
//! rank was observed. A deficient modular rank only bounds the rational rank
//! from below; the policy retries further fixed primes and reports the best
//! rank seen as probabilistic.

mod exactmatrix;
mod field;
mod modmatrix;
mod numeric;

pub use exactmatrix::ExactMatrix;
pub use field::{is_prime_u64, PrimeField, DEFAULT_PRIME, RETRY_PRIMES};
pub use modmatrix::ModMatrix;
pub use numeric::{rank_numeric, rank_numeric_complex};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension {dim} exceeds exact-determinant cap {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
}

/// Prime-retry policy for rank and determinant certification.
///
/// The first prime is tried; on rank deficiency (or a zero determinant) the
/// remaining primes are tried as well. Full rank modulo any listed prime is
/// a proof of full rank over the rationals.
#[derive(Debug, Clone)]
pub struct RankPolicy {
    pub primes: Vec<u64>,
}

impl Default for RankPolicy {
    fn default() -> Self {
        Self {
            primes: RETRY_PRIMES.to_vec(),
        }
    }
}

impl RankPolicy {
    /// Policy pinned to a single prime (no retries).
    pub fn single(p: u64) -> Self {
        Self { primes: vec![p] }
    }

    /// Policy starting at `p`, falling back to the default retry primes.
    pub fn starting_at(p: u64) -> Self {
        let mut primes = vec![p];
        for &q in RETRY_PRIMES.iter() {
            if q != p {
                primes.push(q);
            }
        }
        Self { primes }
    }
}

/// Outcome of a policy-driven rank computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankOutcome {
    /// Largest rank observed over the tried primes; a lower bound on the
    /// rank over the rationals.
    pub rank: usize,
    /// True exactly when the matrix had full rank modulo some prime.
    pub certified: bool,
    /// The prime that produced `rank`.
    pub prime: u64,
}

/// Rank of an integer matrix under the retry policy.
pub fn certified_rank(m: &ExactMatrix, policy: &RankPolicy) -> RankOutcome {
    let full = m.rows().min(m.cols());
    let mut best = RankOutcome {
        rank: 0,
        certified: full == 0,
        prime: policy.primes[0],
    };
    for &p in &policy.primes {
        let field = PrimeField::new(p);
        let rank = m.to_mod(field).rank();
        if rank > best.rank || (best.rank == 0 && !best.certified) {
            best.rank = rank.max(best.rank);
            best.prime = p;
        }
        if rank == full {
            return RankOutcome {
                rank,
                certified: true,
                prime: p,
            };
        }
    }
    best
}

/// Determinant nonvanishing of an integer matrix under the retry policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetOutcome {
    /// True when the determinant is nonzero modulo some tried prime (a proof
    /// that the integer determinant is nonzero).
    pub nonzero: bool,
    /// Nonzero results are always certified; a zero result is probabilistic.
    pub certified: bool,
    pub prime: u64,
}

pub fn certified_det_nonzero(
    m: &ExactMatrix,
    policy: &RankPolicy,
) -> Result<DetOutcome, MatrixError> {
    let mut last = policy.primes[0];
    for &p in &policy.primes {
        let field = PrimeField::new(p);
        let det = m.to_mod(field).det()?;
        last = p;
        if det != 0 {
            return Ok(DetOutcome {
                nonzero: true,
                certified: true,
                prime: p,
            });
        }
    }
    Ok(DetOutcome {
        nonzero: false,
        certified: false,
        prime: last,
    })
}
