use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::field::PrimeField;
use super::modmatrix::ModMatrix;
use super::MatrixError;

/// Default dimension cap for exact determinants. Bareiss elimination keeps
/// every intermediate an honest minor, but entry sizes still grow linearly
/// with the dimension; the cap guards against runaway requests.
pub const DET_EXACT_DEFAULT_CAP: usize = 64;

/// Dense row-major matrix with arbitrary-precision integer entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::from(1));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zero(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, BigInt::from(1));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let want = if i == j {
                        BigInt::from(1)
                    } else {
                        BigInt::zero()
                    };
                    *self.get(i, j) == want
                })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in ExactMatrix::mul");
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    let prod = a * b;
                    out.entries[idx] += prod;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + rhs.get(i, j))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    /// Commutator `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        Self::from_fn(row_idx.len(), col_idx.len(), |i, j| {
            self.get(row_idx[i], col_idx[j]).clone()
        })
    }

    /// Reduction into a prime field.
    pub fn to_mod(&self, field: PrimeField) -> ModMatrix {
        ModMatrix::from_fn(field, self.rows, self.cols, |i, j| {
            field.reduce_bigint(self.get(i, j))
        })
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).to_f64().unwrap_or(f64::NAN))
                    .collect()
            })
            .collect()
    }

    /// Exact integer determinant via fraction-free (Bareiss) elimination.
    pub fn det_exact(&self) -> Result<BigInt, MatrixError> {
        self.det_exact_capped(DET_EXACT_DEFAULT_CAP)
    }

    pub fn det_exact_capped(&self, cap: usize) -> Result<BigInt, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows > cap {
            return Err(MatrixError::DimensionCapExceeded {
                dim: self.rows,
                cap,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::from(1));
        }
        let mut m = self.entries.clone();
        let at = |m: &Vec<BigInt>, i: usize, j: usize| m[i * n + j].clone();
        let mut sign = 1i32;
        let mut prev = BigInt::from(1);
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                let Some(piv) = (k + 1..n).find(|&i| !m[i * n + k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for j in 0..n {
                    m.swap(k * n + j, piv * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = at(&m, k, k) * at(&m, i, j) - at(&m, i, k) * at(&m, k, j);
                    // Bareiss: division by the previous pivot is exact.
                    m[i * n + j] = num / &prev;
                }
                m[i * n + k] = BigInt::zero();
            }
            prev = at(&m, k, k);
        }
        let det = at(&m, n - 1, n - 1);
        Ok(if sign < 0 { -det } else { det })
    }

    pub fn abs_det_exact(&self) -> Result<BigInt, MatrixError> {
        Ok(self.det_exact()?.abs())
    }

    /// Integer adjugate, so `self * adjugate = det * I`. Computed through a
    /// rational inverse and cleared by the determinant; entries are always
    /// integral.
    pub fn adjugate(&self) -> Result<Self, MatrixError> {
        use num_rational::BigRational;
        if self.rows != self.cols {
            return Err(MatrixError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let det = self.det_exact_capped(usize::MAX)?;
        if det.is_zero() {
            // The adjugate of a singular matrix exists but nothing downstream
            // wants it; anchors are always checked for invertibility first.
            return Err(MatrixError::Singular);
        }
        // Gauss-Jordan over the rationals on [self | I].
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from(self.get(i, j).clone()))
                    .collect()
            })
            .collect();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from(BigInt::from((i == j) as u64)))
                    .collect()
            })
            .collect();
        for j in 0..n {
            let piv = (j..n)
                .find(|&i| !a[i][j].is_zero())
                .expect("nonsingular by determinant check");
            a.swap(j, piv);
            inv.swap(j, piv);
            let d = a[j][j].clone();
            for k in 0..n {
                a[j][k] = &a[j][k] / &d;
                inv[j][k] = &inv[j][k] / &d;
            }
            for i in 0..n {
                if i == j || a[i][j].is_zero() {
                    continue;
                }
                let factor = a[i][j].clone();
                for k in 0..n {
                    let av = &a[j][k] * &factor;
                    a[i][k] = &a[i][k] - &av;
                    let iv = &inv[j][k] * &factor;
                    inv[i][k] = &inv[i][k] - &iv;
                }
            }
        }
        let det_rat = BigRational::from(det);
        Ok(Self::from_fn(n, n, |i, j| {
            let scaled = &inv[i][j] * &det_rat;
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_two_by_two() {
        let m = ExactMatrix::from_i64_rows(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(m.det_exact().unwrap(), BigInt::from(-2));
    }

    #[test]
    fn det_identity_any_size() {
        for n in [0, 1, 4, 9] {
            assert_eq!(
                ExactMatrix::identity(n).det_exact().unwrap(),
                BigInt::from(1)
            );
        }
    }

    #[test]
    fn det_needs_square_and_respects_cap() {
        assert!(matches!(
            ExactMatrix::zero(2, 3).det_exact(),
            Err(MatrixError::NonSquare { .. })
        ));
        assert!(matches!(
            ExactMatrix::identity(5).det_exact_capped(4),
            Err(MatrixError::DimensionCapExceeded { dim: 5, cap: 4 })
        ));
    }

    #[test]
    fn det_with_pivot_search() {
        // Leading zero forces a row swap inside Bareiss.
        let m = ExactMatrix::from_i64_rows(&[vec![0, 2, 1], vec![3, 0, 0], vec![1, 1, 1]]);
        // Expansion: det = 0*(0-0) - 2*(3-0) + 1*(3-0) = -3.
        assert_eq!(m.det_exact().unwrap(), BigInt::from(-3));
    }

    #[test]
    fn adjugate_identity_relation() {
        let m = ExactMatrix::from_i64_rows(&[vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 4]]);
        let det = m.det_exact().unwrap();
        let adj = m.adjugate().unwrap();
        let prod = m.mul(&adj);
        assert_eq!(prod, ExactMatrix::identity(3).scale(&det));
    }

    #[test]
    fn mod_reduction_matches_det() {
        let m = ExactMatrix::from_i64_rows(&[vec![7, -3], vec![2, 11]]);
        let f = PrimeField::new(97);
        let dm = m.to_mod(f).det().unwrap();
        let de = f.reduce_bigint(&m.det_exact().unwrap());
        assert_eq!(dm, de);
    }

    #[test]
    fn permutation_matrix_acts() {
        let p = ExactMatrix::permutation(&[2, 0, 1]);
        let v = ExactMatrix::from_i64_rows(&[vec![1], vec![2], vec![3]]);
        let pv = p.mul(&v);
        assert_eq!(pv, ExactMatrix::from_i64_rows(&[vec![2], vec![3], vec![1]]));
    }
}
