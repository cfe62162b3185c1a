//! The order-3 tensor data model.
//!
//! A [`Tensor3`] is a dense array of big integers indexed `[i][j][k]` over
//! factors `A ⊗ B ⊗ C` of dimensions `(a, b, c)`. Writing
//! `T = Σ_j a_j ⊗ X_j`, the slice `X_j ∈ B ⊗ C` is a `b × c` matrix whose
//! row indexes `B` and whose column indexes `C`; all conventions downstream
//! (flattenings, commutators, witness searches) are anchored to that choice.
//!
//! Flattening index order is lexicographic with the `A`-index major, fixed
//! so minor sign conventions are reproducible across runs.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::ExactMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("A-index {index} out of range for dimension {a}")]
    IndexOutOfRange { index: usize, a: usize },
    #[error("coefficient vector has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error(
        "basis matrix for factor {factor} has shape {rows}x{cols}, expected {expected}x{expected}"
    )]
    SizeMismatch {
        factor: char,
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("cannot pad {from:?} down to {to:?}")]
    ShrinkNotAllowed {
        from: (usize, usize, usize),
        to: (usize, usize, usize),
    },
    #[error("specialization matrix has {got} columns, expected {expected}")]
    SpecializationShape { got: usize, expected: usize },
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("unsupported tensor file version {0}")]
    Version(u32),
    #[error("entry index ({0}, {1}, {2}) out of range for dims {3:?}")]
    EntryOutOfRange(usize, usize, usize, (usize, usize, usize)),
    #[error("duplicate entry at ({0}, {1}, {2})")]
    DuplicateEntry(usize, usize, usize),
    #[error("invalid decimal value {0:?}")]
    BadValue(String),
    #[error("malformed tensor file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlattenMode {
    A,
    B,
    C,
}

impl fmt::Display for FlattenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlattenMode::A => write!(f, "A"),
            FlattenMode::B => write!(f, "B"),
            FlattenMode::C => write!(f, "C"),
        }
    }
}

/// Dense order-3 tensor with arbitrary-precision integer entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor3 {
    a: usize,
    b: usize,
    c: usize,
    entries: Vec<BigInt>,
}

/// The slices `X_j` of a tensor, one `b × c` matrix per `A`-basis vector.
/// Rebuilding a tensor from its slices is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceList {
    slices: Vec<ExactMatrix>,
}

impl SliceList {
    pub fn new(slices: Vec<ExactMatrix>) -> Self {
        assert!(!slices.is_empty(), "a tensor needs at least one slice");
        let (b, c) = (slices[0].rows(), slices[0].cols());
        assert!(
            slices.iter().all(|s| s.rows() == b && s.cols() == c),
            "slices must share dimensions"
        );
        Self { slices }
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn get(&self, j: usize) -> &ExactMatrix {
        &self.slices[j]
    }

    pub fn iter(&self) -> impl Iterator<Item = &ExactMatrix> {
        self.slices.iter()
    }

    pub fn to_tensor(&self) -> Tensor3 {
        let a = self.slices.len();
        let b = self.slices[0].rows();
        let c = self.slices[0].cols();
        Tensor3::from_fn(a, b, c, |i, j, k| self.slices[i].get(j, k).clone())
    }
}

impl Tensor3 {
    pub fn zero(a: usize, b: usize, c: usize) -> Self {
        assert!(a > 0 && b > 0 && c > 0, "dimensions must be positive");
        Self {
            a,
            b,
            c,
            entries: vec![BigInt::zero(); a * b * c],
        }
    }

    pub fn from_fn(
        a: usize,
        b: usize,
        c: usize,
        mut f: impl FnMut(usize, usize, usize) -> BigInt,
    ) -> Self {
        let mut t = Self::zero(a, b, c);
        for i in 0..a {
            for j in 0..b {
                for k in 0..c {
                    t.set(i, j, k, f(i, j, k));
                }
            }
        }
        t
    }

    /// Rank-one tensor `u ⊗ v ⊗ w`.
    pub fn rank_one(u: &[BigInt], v: &[BigInt], w: &[BigInt]) -> Self {
        Self::from_fn(u.len(), v.len(), w.len(), |i, j, k| &u[i] * &v[j] * &w[k])
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a, self.b, self.c)
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < self.a && j < self.b && k < self.c);
        (i * self.b + j) * self.c + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &BigInt {
        &self.entries[self.idx(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: BigInt) {
        let idx = self.idx(i, j, k);
        self.entries[idx] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_zero()).count()
    }

    /// The slice `X_j` as a `b × c` matrix, row = `B` index, column = `C`
    /// index.
    pub fn slice_a(&self, j: usize) -> Result<ExactMatrix, TensorError> {
        if j >= self.a {
            return Err(TensorError::IndexOutOfRange {
                index: j,
                a: self.a,
            });
        }
        Ok(ExactMatrix::from_fn(self.b, self.c, |r, s| {
            self.get(j, r, s).clone()
        }))
    }

    pub fn slices(&self) -> SliceList {
        SliceList::new((0..self.a).map(|j| self.slice_a(j).unwrap()).collect())
    }

    pub fn from_slices(slices: &SliceList) -> Self {
        slices.to_tensor()
    }

    /// Linear combination of slices `Σ_j coeffs[j] · X_j`.
    pub fn contract_a(&self, coeffs: &[BigInt]) -> Result<ExactMatrix, TensorError> {
        if coeffs.len() != self.a {
            return Err(TensorError::LengthMismatch {
                got: coeffs.len(),
                expected: self.a,
            });
        }
        Ok(ExactMatrix::from_fn(self.b, self.c, |r, s| {
            (0..self.a).map(|j| &coeffs[j] * self.get(j, r, s)).sum()
        }))
    }

    /// Matrix of the tensor viewed as a linear map out of the dual of one
    /// factor. Mode `B` gives the `b × (a·c)` matrix with row index `β` and
    /// column index `(i, γ)` in lexicographic order; modes `A` and `C` are
    /// analogous.
    pub fn flatten(&self, mode: FlattenMode) -> ExactMatrix {
        match mode {
            FlattenMode::A => ExactMatrix::from_fn(self.a, self.b * self.c, |i, jc| {
                self.get(i, jc / self.c, jc % self.c).clone()
            }),
            FlattenMode::B => ExactMatrix::from_fn(self.b, self.a * self.c, |j, ic| {
                self.get(ic / self.c, j, ic % self.c).clone()
            }),
            FlattenMode::C => ExactMatrix::from_fn(self.c, self.a * self.b, |k, ib| {
                self.get(ib / self.b, ib % self.b, k).clone()
            }),
        }
    }

    /// Change of basis by `g_A ⊗ g_B ⊗ g_C`. The matrices must be square of
    /// matching sizes and invertible over the working field for rank-type
    /// quantities to be preserved.
    pub fn basis_change(
        &self,
        g_a: &ExactMatrix,
        g_b: &ExactMatrix,
        g_c: &ExactMatrix,
    ) -> Result<Tensor3, TensorError> {
        for (m, dim, factor) in [(g_a, self.a, 'A'), (g_b, self.b, 'B'), (g_c, self.c, 'C')] {
            if m.rows() != dim || m.cols() != dim {
                return Err(TensorError::SizeMismatch {
                    factor,
                    rows: m.rows(),
                    cols: m.cols(),
                    expected: dim,
                });
            }
        }
        // Contract one factor at a time.
        let mut t1 = Tensor3::zero(self.a, self.b, self.c);
        for i2 in 0..self.a {
            for i in 0..self.a {
                let g = g_a.get(i2, i);
                if g.is_zero() {
                    continue;
                }
                for j in 0..self.b {
                    for k in 0..self.c {
                        let v = self.get(i, j, k);
                        if v.is_zero() {
                            continue;
                        }
                        let idx = t1.idx(i2, j, k);
                        t1.entries[idx] += g * v;
                    }
                }
            }
        }
        let mut t2 = Tensor3::zero(self.a, self.b, self.c);
        for j2 in 0..self.b {
            for j in 0..self.b {
                let g = g_b.get(j2, j);
                if g.is_zero() {
                    continue;
                }
                for i in 0..self.a {
                    for k in 0..self.c {
                        let v = t1.get(i, j, k);
                        if v.is_zero() {
                            continue;
                        }
                        let idx = t2.idx(i, j2, k);
                        t2.entries[idx] += g * v;
                    }
                }
            }
        }
        let mut t3 = Tensor3::zero(self.a, self.b, self.c);
        for k2 in 0..self.c {
            for k in 0..self.c {
                let g = g_c.get(k2, k);
                if g.is_zero() {
                    continue;
                }
                for i in 0..self.a {
                    for j in 0..self.b {
                        let v = t2.get(i, j, k);
                        if v.is_zero() {
                            continue;
                        }
                        let idx = t3.idx(i, j, k2);
                        t3.entries[idx] += g * v;
                    }
                }
            }
        }
        Ok(t3)
    }

    /// Convenience: reverse the `B` basis (`b_β ↦ b_{b-1-β}`).
    pub fn reverse_b(&self) -> Tensor3 {
        Tensor3::from_fn(self.a, self.b, self.c, |i, j, k| {
            self.get(i, self.b - 1 - j, k).clone()
        })
    }

    /// Zero-extend to larger dimensions.
    pub fn pad(&self, dims: (usize, usize, usize)) -> Result<Tensor3, TensorError> {
        let (a2, b2, c2) = dims;
        if a2 < self.a || b2 < self.b || c2 < self.c {
            return Err(TensorError::ShrinkNotAllowed {
                from: self.dims(),
                to: dims,
            });
        }
        let mut t = Tensor3::zero(a2, b2, c2);
        for i in 0..self.a {
            for j in 0..self.b {
                for k in 0..self.c {
                    t.set(i, j, k, self.get(i, j, k).clone());
                }
            }
        }
        Ok(t)
    }

    /// Pullback along a linear map into the `A` factor: the result has
    /// slices `Σ_u S[j][u] · X_u(source)`. Border rank is monotone under
    /// this operation.
    pub fn specialize_a(source: &Tensor3, s: &ExactMatrix) -> Result<Tensor3, TensorError> {
        if s.cols() != source.a {
            return Err(TensorError::SpecializationShape {
                got: s.cols(),
                expected: source.a,
            });
        }
        let a_t = s.rows();
        Ok(Tensor3::from_fn(a_t, source.b, source.c, |j, r, t| {
            (0..source.a)
                .map(|u| s.get(j, u) * source.get(u, r, t))
                .sum()
        }))
    }

    /// Solves, slice by slice over the rationals, for an integer matrix `S`
    /// with `specialize_a(source, S) = target`. Returns `None` when the
    /// system is inconsistent or the solution is not integral. Exact
    /// rational elimination is used rather than the prime-field path to
    /// avoid false consistency modulo a prime.
    pub fn find_a_specialization(source: &Tensor3, target: &Tensor3) -> Option<ExactMatrix> {
        if source.b != target.b || source.c != target.c {
            return None;
        }
        let n_eq = source.b * source.c;
        let n_var = source.a;
        // Coefficient matrix: column u is the vectorized slice X_u(source).
        let mat: Vec<Vec<BigRational>> = (0..n_eq)
            .map(|e| {
                let (r, t) = (e / source.c, e % source.c);
                (0..n_var)
                    .map(|u| BigRational::from(source.get(u, r, t).clone()))
                    .collect()
            })
            .collect();
        let mut rows = Vec::new();
        for j in 0..target.a {
            let rhs: Vec<BigRational> = (0..n_eq)
                .map(|e| BigRational::from(target.get(j, e / source.c, e % source.c).clone()))
                .collect();
            let sol = solve_rational(&mat, &rhs)?;
            let mut row = Vec::with_capacity(n_var);
            for v in sol {
                if !v.is_integer() {
                    return None;
                }
                row.push(v.to_integer());
            }
            rows.push(row);
        }
        Some(ExactMatrix::from_rows(rows))
    }

    /// Maximum absolute entry (useful in reports and tests).
    pub fn max_abs_entry(&self) -> BigInt {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl Add<&Tensor3> for &Tensor3 {
    type Output = Tensor3;

    fn add(self, rhs: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims(), rhs.dims(), "tensor dims must match");
        Tensor3::from_fn(self.a, self.b, self.c, |i, j, k| {
            self.get(i, j, k) + rhs.get(i, j, k)
        })
    }
}

/// Exact linear solve `mat · x = rhs` by rational Gaussian elimination with
/// free variables set to zero; `None` on inconsistency.
fn solve_rational(mat: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let n_eq = mat.len();
    let n_var = mat.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<BigRational>> = mat
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..n_var {
        let Some(piv) = (r..n_eq).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, piv);
        let d = aug[r][c].clone();
        for k in c..=n_var {
            aug[r][k] = &aug[r][k] / &d;
        }
        for i in 0..n_eq {
            if i == r || aug[i][c].is_zero() {
                continue;
            }
            let factor = aug[i][c].clone();
            for k in c..=n_var {
                let v = &aug[r][k] * &factor;
                aug[i][k] = &aug[i][k] - v;
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == n_eq {
            break;
        }
    }
    // Inconsistent when a zero row has nonzero right-hand side.
    for row in aug.iter().skip(r) {
        if row[..n_var].iter().all(|v| v.is_zero()) && !row[n_var].is_zero() {
            return None;
        }
    }
    let mut sol = vec![BigRational::zero(); n_var];
    for (i, &c) in pivot_cols.iter().enumerate() {
        sol[c] = aug[i][n_var].clone();
    }
    Some(sol)
}

// ---------------------------------------------------------------------------
// Tensor file format
// ---------------------------------------------------------------------------

/// Current tensor file format version.
pub const TENSOR_FILE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct TensorFile {
    version: u32,
    dims: [usize; 3],
    /// Nonzero entries `[i, j, k, "<decimal>"]`, zero-based indices, sorted
    /// lexicographically by index triple.
    entries: Vec<(usize, usize, usize, String)>,
}

impl Tensor3 {
    /// Canonical text form: nonzero entries only, decimal-string values,
    /// sorted lexicographically. Round-trips bit-exactly.
    pub fn to_file_string(&self) -> String {
        let mut entries = Vec::new();
        for i in 0..self.a {
            for j in 0..self.b {
                for k in 0..self.c {
                    let v = self.get(i, j, k);
                    if !v.is_zero() {
                        entries.push((i, j, k, v.to_string()));
                    }
                }
            }
        }
        let file = TensorFile {
            version: TENSOR_FILE_VERSION,
            dims: [self.a, self.b, self.c],
            entries,
        };
        serde_json::to_string_pretty(&file).expect("tensor file serialization cannot fail")
    }

    pub fn from_file_string(s: &str) -> Result<Tensor3, FormatError> {
        let file: TensorFile = serde_json::from_str(s)?;
        if file.version != TENSOR_FILE_VERSION {
            return Err(FormatError::Version(file.version));
        }
        let [a, b, c] = file.dims;
        let mut t = Tensor3::zero(a, b, c);
        let mut seen = BTreeSet::new();
        for (i, j, k, val) in &file.entries {
            if *i >= a || *j >= b || *k >= c {
                return Err(FormatError::EntryOutOfRange(*i, *j, *k, (a, b, c)));
            }
            if !seen.insert((*i, *j, *k)) {
                return Err(FormatError::DuplicateEntry(*i, *j, *k));
            }
            let v: BigInt = val
                .parse()
                .map_err(|_| FormatError::BadValue(val.clone()))?;
            t.set(*i, *j, *k, v);
        }
        Ok(t)
    }

    pub fn write_path(&self, path: &std::path::Path) -> Result<(), FormatError> {
        std::fs::write(path, self.to_file_string())?;
        Ok(())
    }

    pub fn read_path(path: &std::path::Path) -> Result<Tensor3, FormatError> {
        let s = std::fs::read_to_string(path)?;
        Self::from_file_string(&s)
    }

    /// Stable 64-bit identifier of the canonical file form (FNV-1a).
    pub fn content_id(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in self.to_file_string().bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x1000_0000_01b3);
        }
        format!("{h:016x}")
    }
}
