//! Exact border-rank lower-bound certificates for order-3 tensors.
//!
//! The crate builds explicit tensor families (graded families with tunable
//! coefficients, structured shift families, matrix multiplication, truncated
//! polynomial multiplication) and computes border-rank bounds on them with
//! exact arithmetic:
//!
//! - [`youngflat`]: Young flattenings `Λ^p A ⊗ B* → Λ^{p+1} A ⊗ C`, their
//!   ranks over a prime field, and the equivalent commutator-block
//!   determinant criterion with its minor-chain factorization.
//! - [`griesser`]: the existential subspace test on the commutator family
//!   `[X_1, X_j]`, with coordinate/random/structured witness search and the
//!   matrix-multiplication image-dimension profile.
//! - [`constructions`]: builders for every tensor family, plus the
//!   `ε`-degeneration of truncated polynomial multiplication used as
//!   upper-bound evidence.
//! - [`exactmath`]: the arithmetic kernels everything flows through — rank
//!   and determinant over a prime field, fraction-free integer determinants,
//!   and a numeric rank for the floating witness paths.
//!
//! A full-rank result modulo a prime proves full rank over the rationals, so
//! bound reports carry a `certified` flag that is set exactly when full rank
//! (or a nonzero determinant) was observed in modular arithmetic. Rank
//! deficiency is retried over a fixed list of primes and reported as
//! probabilistic evidence, never as a certificate.
//!
//! All randomness is seeded and reproducible; no hidden entropy. Tensors,
//! matrices and instances are plain immutable data (`Send + Sync`), and
//! every operation is a pure function of its inputs, so independent rank
//! calls may run concurrently without affecting determinism.

pub mod constructions;
pub mod exactmath;
pub mod griesser;
pub mod report;
pub mod rng;
pub mod tensor3;
pub mod verify;
pub mod youngflat;

pub use exactmath::{ExactMatrix, ModMatrix, PrimeField, RankOutcome, RankPolicy};
pub use report::{BoundReport, Method};
pub use tensor3::Tensor3;
