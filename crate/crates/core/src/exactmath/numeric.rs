use num_complex::Complex64;

use super::MatrixError;

/// Numeric rank of a real matrix: the number of pivots of a Householder QR
/// factorization with column pivoting exceeding `rel_tol` times the largest.
pub fn rank_numeric(m: &[Vec<f64>], rel_tol: f64) -> Result<usize, MatrixError> {
    assert!(rel_tol > 0.0, "rel_tol must be positive");
    let complex: Vec<Vec<Complex64>> = m
        .iter()
        .map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
        .collect();
    rank_numeric_complex(&complex, rel_tol)
}

/// Complex variant used by the floating witness paths, where eigenvectors
/// are genuinely complex.
pub fn rank_numeric_complex(m: &[Vec<Complex64>], rel_tol: f64) -> Result<usize, MatrixError> {
    assert!(rel_tol > 0.0, "rel_tol must be positive");
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    if rows == 0 || cols == 0 {
        return Ok(0);
    }
    for (i, row) in m.iter().enumerate() {
        assert_eq!(row.len(), cols, "ragged rows");
        for (j, v) in row.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(MatrixError::NonFinite { row: i, col: j });
            }
        }
    }
    let mut a: Vec<Vec<Complex64>> = m.to_vec();
    let steps = rows.min(cols);
    let mut col_order: Vec<usize> = (0..cols).collect();
    let mut diag = Vec::with_capacity(steps);

    for k in 0..steps {
        // Column pivoting: bring the column with the largest remaining norm
        // to position k.
        let mut best = k;
        let mut best_norm = 0.0f64;
        for j in k..cols {
            let norm: f64 = (k..rows).map(|i| a[i][j].norm_sqr()).sum();
            if norm > best_norm {
                best_norm = norm;
                best = j;
            }
        }
        if best != k {
            for row in a.iter_mut() {
                row.swap(k, best);
            }
            col_order.swap(k, best);
        }
        let norm = best_norm.sqrt();
        if norm == 0.0 {
            diag.push(0.0);
            continue;
        }
        // Householder vector v = x + sign(x_k) * ||x|| * e_k.
        let xk = a[k][k];
        let alpha = if xk.norm() == 0.0 {
            Complex64::new(norm, 0.0)
        } else {
            (xk / xk.norm()) * norm
        };
        let mut v: Vec<Complex64> = (k..rows).map(|i| a[i][k]).collect();
        v[0] += alpha;
        let vnorm_sqr: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        if vnorm_sqr > 0.0 {
            for j in k..cols {
                // a[:,j] -= 2 v (v^H a[:,j]) / (v^H v)
                let dot: Complex64 = v
                    .iter()
                    .zip(k..rows)
                    .map(|(vi, i)| vi.conj() * a[i][j])
                    .sum();
                let scale = dot * 2.0 / vnorm_sqr;
                for (vi, i) in v.iter().zip(k..rows) {
                    a[i][j] -= scale * vi;
                }
            }
        }
        diag.push(a[k][k].norm());
    }

    let largest = diag.iter().cloned().fold(0.0f64, f64::max);
    if largest == 0.0 {
        return Ok(0);
    }
    Ok(diag.iter().filter(|&&d| d > rel_tol * largest).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    const TOL: f64 = 1e-8;

    #[test]
    fn identity_full_rank() {
        let m: Vec<Vec<f64>> = (0..3)
            .map(|i| (0..3).map(|j| (i == j) as u64 as f64).collect())
            .collect();
        assert_eq!(rank_numeric(&m, TOL).unwrap(), 3);
    }

    #[test]
    fn outer_product_rank_one() {
        let mut rng = SplitMix64::new(7);
        let u: Vec<f64> = (0..6)
            .map(|_| rng.below(1000) as f64 / 500.0 - 1.0)
            .collect();
        let v: Vec<f64> = (0..6)
            .map(|_| rng.below(1000) as f64 / 500.0 - 1.0)
            .collect();
        let nu: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let m: Vec<Vec<f64>> = (0..6)
            .map(|i| (0..6).map(|j| u[i] / nu * v[j] / nv).collect())
            .collect();
        assert_eq!(rank_numeric(&m, TOL).unwrap(), 1);
    }

    #[test]
    fn rejects_non_finite() {
        let m = vec![vec![1.0, f64::NAN], vec![0.0, 1.0]];
        assert!(matches!(
            rank_numeric(&m, TOL),
            Err(MatrixError::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn complex_rank_two() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        // Rows 0 and 1 independent, row 2 = row 0 + i * row 1.
        let r0 = vec![one, i, one];
        let r1 = vec![i, one, Complex64::new(0.0, 0.0)];
        let r2: Vec<Complex64> = r0.iter().zip(&r1).map(|(a, b)| a + i * b).collect();
        let m = vec![r0, r1, r2];
        assert_eq!(rank_numeric_complex(&m, TOL).unwrap(), 2);
    }

    #[test]
    fn zero_matrix() {
        let m = vec![vec![0.0; 4]; 3];
        assert_eq!(rank_numeric(&m, TOL).unwrap(), 0);
    }
}
