use super::field::PrimeField;
use super::MatrixError;

/// Dense row-major matrix over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl ModMatrix {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j) % field.modulus());
            }
        }
        Self {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.cols + j] = v % self.field.modulus();
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in ModMatrix::mul");
        let f = self.field;
        let p = f.modulus() as u128;
        let mut out = Self::zero(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let a = a as u128;
                for j in 0..rhs.cols {
                    let cur = out.get(i, j) as u128;
                    out.entries[i * rhs.cols + j] = ((cur + a * rhs.get(k, j) as u128) % p) as u64;
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, &b) in out.entries.iter_mut().zip(rhs.entries.iter()) {
            *a = self.field.sub(*a, b);
        }
        out
    }

    pub fn scale(&self, c: u64) -> Self {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = self.field.mul(*a, c);
        }
        out
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Self::zero(self.field, self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j));
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zero(self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j));
            }
        }
        out
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.entries.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    /// Rank by Gaussian elimination. Pivot choice is the first nonzero entry
    /// in column order, so runs are deterministic and certificates
    /// reproducible.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let f = m.field;
        let mut r = 0usize;
        for j in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, j) != 0) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = f.inv(m.get(r, j));
            for i in r + 1..m.rows {
                let factor = f.mul(m.get(i, j), inv);
                if factor == 0 {
                    continue;
                }
                for k in j..m.cols {
                    let v = f.sub(m.get(i, k), f.mul(factor, m.get(r, k)));
                    m.entries[i * m.cols + k] = v;
                }
            }
            r += 1;
        }
        r
    }

    /// `cols - rank`: the dimension of the kernel of the matrix as a map
    /// from column space.
    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// Determinant by triangularization.
    pub fn det(&self) -> Result<u64, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut m = self.clone();
        let f = m.field;
        let n = m.rows;
        let mut det = 1u64;
        for j in 0..n {
            let Some(piv) = (j..n).find(|&i| m.get(i, j) != 0) else {
                return Ok(0);
            };
            if piv != j {
                m.swap_rows(j, piv);
                det = f.neg(det);
            }
            let d = m.get(j, j);
            det = f.mul(det, d);
            let inv = f.inv(d);
            for i in j + 1..n {
                let factor = f.mul(m.get(i, j), inv);
                if factor == 0 {
                    continue;
                }
                for k in j..n {
                    let v = f.sub(m.get(i, k), f.mul(factor, m.get(j, k)));
                    m.entries[i * n + k] = v;
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let f = self.field;
        let mut m = self.clone();
        let mut inv = Self::identity(f, n);
        for j in 0..n {
            let piv = (j..n).find(|&i| m.get(i, j) != 0)?;
            m.swap_rows(j, piv);
            inv.swap_rows(j, piv);
            let d = f.inv(m.get(j, j));
            for k in 0..n {
                m.entries[j * n + k] = f.mul(m.get(j, k), d);
                inv.entries[j * n + k] = f.mul(inv.get(j, k), d);
            }
            for i in 0..n {
                if i == j {
                    continue;
                }
                let factor = m.get(i, j);
                if factor == 0 {
                    continue;
                }
                for k in 0..n {
                    let v = f.sub(m.get(i, k), f.mul(factor, m.get(j, k)));
                    m.entries[i * n + k] = v;
                    let w = f.sub(inv.get(i, k), f.mul(factor, inv.get(j, k)));
                    inv.entries[i * n + k] = w;
                }
            }
        }
        Some(inv)
    }

    /// Commutator `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn trace(&self) -> u64 {
        let mut t = 0u64;
        for i in 0..self.rows.min(self.cols) {
            t = self.field.add(t, self.get(i, i));
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::DEFAULT_PRIME;

    fn f() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME)
    }

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(ModMatrix::identity(f(), 5).rank(), 5);
        assert_eq!(ModMatrix::zero(f(), 3, 7).rank(), 0);
    }

    #[test]
    fn det_diag_and_singular() {
        let d = ModMatrix::from_fn(f(), 2, 2, |i, j| if i == j { (i as u64) + 2 } else { 0 });
        assert_eq!(d.det().unwrap(), 6);
        let s = ModMatrix::from_fn(f(), 2, 2, |_, _| 1);
        assert_eq!(s.det().unwrap(), 0);
        assert!(ModMatrix::zero(f(), 2, 3).det().is_err());
    }

    #[test]
    fn kernel_dim_complements_rank() {
        assert_eq!(ModMatrix::zero(f(), 4, 4).kernel_dim(), 4);
        assert_eq!(ModMatrix::identity(f(), 4).kernel_dim(), 0);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = ModMatrix::from_fn(f(), 3, 3, |i, j| {
            ((i * 3 + j) as u64).pow(2) + (i == j) as u64 * 7 + 1
        });
        let inv = m.inverse().expect("generic matrix invertible");
        assert_eq!(m.mul(&inv), ModMatrix::identity(f(), 3));
    }

    #[test]
    fn commutator_is_traceless() {
        let a = ModMatrix::from_fn(f(), 3, 3, |i, j| (3 * i + j) as u64 + 1);
        let b = ModMatrix::from_fn(f(), 3, 3, |i, j| (5 * i + 2 * j) as u64 % 7);
        assert_eq!(a.commutator(&b).trace(), 0);
    }
}
