//! The subspace border-rank test on the commutator family.
//!
//! Writing `T = Σ_{j=0}^{a-1} a_j ⊗ X_j` with `b = c = m`, an invertible
//! `X_0` identifies `C` with `B*`; set `Y_j = X_0^{-1} X_j` and
//! `U_j = [Y_1, Y_j]` for `j = 2..a-1`. If the border rank of `T` is at
//! most `r` with `m+1 ≤ r ≤ 2m-1`, then some subspace `E` of dimension
//! `2m - r` satisfies `dim(⟨U_2, …, U_{a-1}⟩(E)) ≤ r - m`.
//!
//! The test is existential: [`witness_search`] looks for such an `E` with
//! coordinate enumeration, seeded random sampling over the prime field, and
//! the structured first-coordinates subspace. A found witness is a
//! certificate that the test does not reject `r`; absence of a witness is
//! reported as evidence with its sample counts, never as a proof — deciding
//! emptiness exactly would need elimination theory.
//!
//! Dimension counts run over the prime field; the eigenvector and pencil
//! witnesses ([`trivial_witness_r2m1`], [`m4_pencil_witness`]) need complex
//! roots and run in floating arithmetic at a fixed relative tolerance.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde_json::json;
use thiserror::Error;

use crate::constructions::{matmul_tensor, MatmulPresentation};
use crate::exactmath::{rank_numeric_complex, ExactMatrix, MatrixError, ModMatrix, PrimeField};
use crate::rng::{mix, SplitMix64};
use crate::tensor3::Tensor3;

/// Relative tolerance of the floating witness paths.
pub const NUMERIC_REL_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum GriesserError {
    #[error("instance needs b = c, got dims {0:?}")]
    BadShape((usize, usize, usize)),
    #[error("no invertible slice combination found")]
    NoInvertibleSlice,
    #[error("witness subspace is rank deficient")]
    RankDeficientE,
    #[error("r = {r} out of admissible range [{lo}, {hi}]")]
    BadR { r: usize, lo: usize, hi: usize },
    #[error("commutator is singular; pencil witness needs invertible U_2, U_3")]
    SingularU,
    #[error("pencil witness degenerated to parallel vectors")]
    DegenerateVW,
    #[error("distinguished slice not diagonalizable within tolerance")]
    DefectiveY1,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Normalized commutator data of a tensor: the maps `U_j = [Y_1, Y_j]`,
/// kept both over the prime field (exact dimension counts) and in floating
/// point (eigenvector work), plus provenance.
#[derive(Debug, Clone)]
pub struct GriesserInstance {
    m: usize,
    a: usize,
    field: PrimeField,
    u_mod: Vec<ModMatrix>,
    u_float: Vec<Vec<Vec<f64>>>,
    y1_float: Vec<Vec<f64>>,
    tensor_id: String,
    normalization: String,
}

impl GriesserInstance {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// The commutator maps over the prime field, `j = 2..a-1`.
    pub fn commutators(&self) -> &[ModMatrix] {
        &self.u_mod
    }

    pub fn commutators_float(&self) -> &[Vec<Vec<f64>>] {
        &self.u_float
    }

    pub fn tensor_id(&self) -> &str {
        &self.tensor_id
    }

    pub fn normalization(&self) -> &str {
        &self.normalization
    }
}

/// Builds the commutator instance of a tensor with `b = c`.
///
/// Slice `X_0` is the anchor; when it is singular, up to 100 seeded slice
/// combinations are tried in its place (a basis change on `A`). `X_1` is
/// the distinguished slice and `U_j = [X_0^{-1}X_1, X_0^{-1}X_j]` for the
/// remaining `a - 2` slices.
pub fn make_instance(t: &Tensor3, field: PrimeField) -> Result<GriesserInstance, GriesserError> {
    let (a, b, c) = t.dims();
    if b != c || a < 2 {
        return Err(GriesserError::BadShape((a, b, c)));
    }
    let m = b;
    let x0 = t.slice_a(0).unwrap().to_mod(field);
    let (working, normalization) = if x0.inverse().is_some() {
        (t.clone(), "anchor: slice 0".to_string())
    } else {
        let mut rng = SplitMix64::new(0x9e5d_0001);
        let mut found = None;
        for attempt in 0..100 {
            let mut coeffs: Vec<BigInt> =
                (0..a).map(|_| BigInt::from(rng.below(1 << 16))).collect();
            if coeffs[0].is_zero() {
                coeffs[0] = BigInt::one();
            }
            let candidate = t.contract_a(&coeffs).unwrap().to_mod(field);
            if candidate.inverse().is_some() {
                let g = ExactMatrix::from_fn(a, a, |i, j| {
                    if i == 0 {
                        coeffs[j].clone()
                    } else {
                        BigInt::from((i == j) as u64)
                    }
                });
                let changed = t
                    .basis_change(&g, &ExactMatrix::identity(b), &ExactMatrix::identity(c))
                    .unwrap();
                found = Some((changed, format!("anchor: seeded combination #{attempt}")));
                break;
            }
        }
        found.ok_or(GriesserError::NoInvertibleSlice)?
    };

    // Prime-field path.
    let x0 = working.slice_a(0).unwrap().to_mod(field);
    let x0_inv = x0.inverse().expect("anchor invertible by construction");
    let y: Vec<ModMatrix> = (0..a)
        .map(|j| x0_inv.mul(&working.slice_a(j).unwrap().to_mod(field)))
        .collect();
    let u_mod: Vec<ModMatrix> = (2..a).map(|j| y[1].commutator(&y[j])).collect();
    for u in &u_mod {
        debug_assert_eq!(u.trace(), 0, "commutators are traceless");
    }

    // Floating path on the same integer slices.
    let x0f = working.slice_a(0).unwrap().to_f64();
    let x0f_inv = f64_inverse(&x0f).ok_or(GriesserError::NoInvertibleSlice)?;
    let yf: Vec<Vec<Vec<f64>>> = (0..a)
        .map(|j| f64_matmul(&x0f_inv, &working.slice_a(j).unwrap().to_f64()))
        .collect();
    let u_float: Vec<Vec<Vec<f64>>> = (2..a)
        .map(|j| f64_sub(&f64_matmul(&yf[1], &yf[j]), &f64_matmul(&yf[j], &yf[1])))
        .collect();

    Ok(GriesserInstance {
        m,
        a,
        field,
        u_mod,
        u_float,
        y1_float: yf[1].clone(),
        tensor_id: t.content_id(),
        normalization,
    })
}

/// `dim(⟨U_2, …, U_{a-1}⟩(E))`: the rank of the horizontal stack
/// `[U_2 E | … | U_{a-1} E]` over the prime field. `E` must have full
/// column rank.
pub fn image_dim(inst: &GriesserInstance, e: &ModMatrix) -> Result<usize, GriesserError> {
    if e.cols() == 0 {
        return Ok(0);
    }
    if e.rank() != e.cols() {
        return Err(GriesserError::RankDeficientE);
    }
    let mut stack: Option<ModMatrix> = None;
    for u in &inst.u_mod {
        let image = u.mul(e);
        stack = Some(match stack {
            None => image,
            Some(s) => s.hstack(&image),
        });
    }
    Ok(stack.map_or(0, |s| s.rank()))
}

/// A witness subspace, exact or numeric.
#[derive(Debug, Clone)]
pub enum WitnessBasis {
    /// Column vectors over the prime field.
    Exact(Vec<Vec<u64>>),
    /// Complex column vectors as `(re, im)` pairs.
    Numeric(Vec<Vec<(f64, f64)>>),
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub r: usize,
    /// `2m - r`, the dimension of the subspace.
    pub dim: usize,
    pub image_dim: usize,
    pub strategy: String,
    pub seed: Option<u64>,
    pub basis: WitnessBasis,
}

impl Witness {
    /// The defining inequality `image_dim ≤ r - m`.
    pub fn satisfies(&self, m: usize) -> bool {
        self.image_dim + m <= self.r
    }

    pub fn to_json(&self) -> serde_json::Value {
        let basis = match &self.basis {
            WitnessBasis::Exact(cols) => json!({ "exact": cols }),
            WitnessBasis::Numeric(cols) => json!({ "numeric": cols }),
        };
        json!({
            "r": self.r,
            "dim": self.dim,
            "image_dim": self.image_dim,
            "strategy": self.strategy,
            "seed": self.seed,
            "basis": basis,
        })
    }
}

/// Evidence attached to a failed search: what was tried, how hard.
#[derive(Debug, Clone)]
pub struct SearchEvidence {
    pub strategies: Vec<String>,
    pub coordinate_checked: usize,
    pub random_checked: usize,
    pub samples_requested: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub enum SearchResult {
    Found(Witness),
    /// Evidence only; emptiness of the witness locus is never decided
    /// exactly here.
    NotFound(SearchEvidence),
}

impl SearchResult {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SearchResult::Found(w) => Some(w),
            SearchResult::NotFound(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// All coordinate subspaces, when there are at most `10^4` of them.
    Coordinate,
    /// Seeded random subspaces over the prime field.
    Random,
    /// The span of the first `2m - r` basis vectors.
    Structured,
}

pub const ALL_STRATEGIES: [Strategy; 3] =
    [Strategy::Coordinate, Strategy::Random, Strategy::Structured];

/// Cap on exhaustive coordinate enumeration.
pub const COORDINATE_ENUM_CAP: usize = 10_000;

fn coordinate_subspace(field: PrimeField, m: usize, coords: &[usize]) -> ModMatrix {
    let mut e = ModMatrix::zero(field, m, coords.len());
    for (col, &i) in coords.iter().enumerate() {
        e.set(i, col, 1);
    }
    e
}

fn mod_columns(e: &ModMatrix) -> Vec<Vec<u64>> {
    (0..e.cols())
        .map(|j| (0..e.rows()).map(|i| e.get(i, j)).collect())
        .collect()
}

/// Searches for a witness subspace of dimension `2m - r` whose commutator
/// image has dimension at most `r - m`. Strategies run in the listed
/// order; within each the scan order is deterministic, so results are
/// reproducible from the seed alone.
pub fn witness_search(
    inst: &GriesserInstance,
    r: usize,
    strategies: &[Strategy],
    samples: usize,
    seed: u64,
) -> Result<SearchResult, GriesserError> {
    let m = inst.m;
    if r < m + 1 || r > 2 * m - 1 {
        return Err(GriesserError::BadR {
            r,
            lo: m + 1,
            hi: 2 * m - 1,
        });
    }
    let w = 2 * m - r;
    let target = r - m;
    let mut evidence = SearchEvidence {
        strategies: Vec::new(),
        coordinate_checked: 0,
        random_checked: 0,
        samples_requested: samples,
        seed,
    };
    for strategy in strategies {
        match strategy {
            Strategy::Coordinate => {
                evidence.strategies.push("coordinate".into());
                if crate::youngflat::binomial(m, w) > COORDINATE_ENUM_CAP {
                    continue;
                }
                let mut found = None;
                let mut visit = |coords: &[usize]| -> Result<bool, GriesserError> {
                    evidence.coordinate_checked += 1;
                    let e = coordinate_subspace(inst.field, m, coords);
                    let dim = image_dim(inst, &e)?;
                    if dim <= target {
                        found = Some(Witness {
                            r,
                            dim: w,
                            image_dim: dim,
                            strategy: format!("coordinate{coords:?}"),
                            seed: None,
                            basis: WitnessBasis::Exact(mod_columns(&e)),
                        });
                        return Ok(true);
                    }
                    Ok(false)
                };
                let mut coords: Vec<usize> = (0..w).collect();
                'outer: loop {
                    if visit(&coords)? {
                        break 'outer;
                    }
                    // Next lexicographic combination.
                    let mut i = w;
                    loop {
                        if i == 0 {
                            break 'outer;
                        }
                        i -= 1;
                        if coords[i] != i + m - w {
                            break;
                        }
                    }
                    coords[i] += 1;
                    for j in i + 1..w {
                        coords[j] = coords[j - 1] + 1;
                    }
                }
                if let Some(witness) = found {
                    return Ok(SearchResult::Found(witness));
                }
            }
            Strategy::Random => {
                evidence.strategies.push("random".into());
                for s in 0..samples {
                    let mut rng = SplitMix64::new(mix(seed, &[r as u64, s as u64]));
                    let mut e = ModMatrix::zero(inst.field, m, w);
                    for i in 0..m {
                        for j in 0..w {
                            e.set(i, j, rng.below(inst.field.modulus()));
                        }
                    }
                    if e.rank() != w {
                        continue;
                    }
                    evidence.random_checked += 1;
                    let dim = image_dim(inst, &e)?;
                    if dim <= target {
                        return Ok(SearchResult::Found(Witness {
                            r,
                            dim: w,
                            image_dim: dim,
                            strategy: format!("random#{s}"),
                            seed: Some(seed),
                            basis: WitnessBasis::Exact(mod_columns(&e)),
                        }));
                    }
                }
            }
            Strategy::Structured => {
                evidence.strategies.push("structured".into());
                let coords: Vec<usize> = (0..w).collect();
                let e = coordinate_subspace(inst.field, m, &coords);
                let dim = image_dim(inst, &e)?;
                if dim <= target {
                    return Ok(SearchResult::Found(Witness {
                        r,
                        dim: w,
                        image_dim: dim,
                        strategy: "structured".into(),
                        seed: None,
                        basis: WitnessBasis::Exact(mod_columns(&e)),
                    }));
                }
            }
        }
    }
    Ok(SearchResult::NotFound(evidence))
}

// ---------------------------------------------------------------------------
// Matrix multiplication profile
// ---------------------------------------------------------------------------

/// Matrix multiplication tensor with the `A` basis arranged for the
/// subspace test: slice 0 contracts to the identity, slice 1 to
/// `blockdiag(D, …, D)` with `D = diag(1..n)`, and the remaining slices
/// complete the basis (off-diagonal units first, then spare diagonal
/// directions).
pub fn matmul_griesser_tensor(n: usize) -> Tensor3 {
    let t = matmul_tensor(n, MatmulPresentation::BlockDiag);
    let nn = n * n;
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(nn);
    let coeff_row = |f: &dyn Fn(usize, usize) -> i64| -> Vec<BigInt> {
        let mut row = vec![BigInt::zero(); nn];
        for i in 0..n {
            for j in 0..n {
                row[i * n + j] = BigInt::from(f(i, j));
            }
        }
        row
    };
    rows.push(coeff_row(&|i, j| (i == j) as i64));
    rows.push(coeff_row(&|i, j| if i == j { i as i64 + 1 } else { 0 }));
    for s in 0..n {
        for t2 in 0..n {
            if s != t2 {
                rows.push(coeff_row(&|i, j| (i == s && j == t2) as i64));
            }
        }
    }
    for d in 2..n {
        rows.push(coeff_row(&|i, j| (i == d && j == d) as i64));
    }
    debug_assert_eq!(rows.len(), nn);
    let g = ExactMatrix::from_rows(rows);
    t.basis_change(&g, &ExactMatrix::identity(nn), &ExactMatrix::identity(nn))
        .unwrap()
}

/// Expected-versus-computed record of the image-dimension profile of
/// matrix multiplication at a given target rank.
#[derive(Debug, Clone)]
pub struct MatmulProfile {
    pub n: usize,
    pub r: usize,
    /// Subspace dimension `2m - r = d·n + e`.
    pub subspace_dim: usize,
    pub d: usize,
    pub e: usize,
    /// `(d+1)n` if `e ≥ 2`, `(d+1)n - 1` if `e = 1`, `dn` if `e = 0`.
    pub formula_dim: usize,
    /// Image dimension measured on the structured subspace (first `2m - r`
    /// coordinates), over the prime field.
    pub measured_dim: usize,
    /// Whether the test is satisfied at this `r`: the minimal image
    /// dimension is at most `r - m`.
    pub satisfied: bool,
}

/// The image-dimension formula on structured subspaces for `n × n` matrix
/// multiplication, compared against the measured dimension.
pub fn matmul_profile(
    n: usize,
    r: usize,
    field: PrimeField,
) -> Result<MatmulProfile, GriesserError> {
    let m = n * n;
    if r < m + 1 || r > 2 * m - 1 {
        return Err(GriesserError::BadR {
            r,
            lo: m + 1,
            hi: 2 * m - 1,
        });
    }
    let inst = make_instance(&matmul_griesser_tensor(n), field)?;
    let w = 2 * m - r;
    let (d, e) = (w / n, w % n);
    let formula_dim = match e {
        0 => d * n,
        1 => (d + 1) * n - 1,
        _ => (d + 1) * n,
    };
    let coords: Vec<usize> = (0..w).collect();
    let measured_dim = image_dim(&inst, &coordinate_subspace(field, m, &coords))?;
    Ok(MatmulProfile {
        n,
        r,
        subspace_dim: w,
        d,
        e,
        formula_dim,
        measured_dim,
        satisfied: formula_dim + m <= r,
    })
}

// ---------------------------------------------------------------------------
// Floating witness paths
// ---------------------------------------------------------------------------

fn f64_matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for l in 0..k {
            let av = a[i][l];
            if av == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += av * b[l][j];
            }
        }
    }
    out
}

fn f64_sub(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

/// Gauss-Jordan inverse with partial pivoting; `None` when numerically
/// singular.
fn f64_inverse(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as u64 as f64).collect())
        .collect();
    let scale = a
        .iter()
        .flat_map(|r| r.iter().map(|x| x.abs()))
        .fold(0.0f64, f64::max)
        .max(1.0);
    for j in 0..n {
        let piv = (j..n).max_by(|&x, &y| a[x][j].abs().total_cmp(&a[y][j].abs()))?;
        if a[piv][j].abs() < 1e-12 * scale {
            return None;
        }
        a.swap(j, piv);
        inv.swap(j, piv);
        let d = a[j][j];
        for k in 0..n {
            a[j][k] /= d;
            inv[j][k] /= d;
        }
        for i in 0..n {
            if i == j || a[i][j] == 0.0 {
                continue;
            }
            let f = a[i][j];
            for k in 0..n {
                a[i][k] -= f * a[j][k];
                inv[i][k] -= f * inv[j][k];
            }
        }
    }
    Some(inv)
}

/// Monic characteristic polynomial coefficients `[c_1, …, c_n]` of
/// `det(zI - A) = z^n + c_1 z^{n-1} + … + c_n`, by the trace recursion.
fn char_poly_coeffs(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut coeffs = Vec::with_capacity(n);
    let mut mk: Vec<Vec<f64>> = a.to_vec();
    for k in 1..=n {
        let tr: f64 = (0..n).map(|i| mk[i][i]).sum();
        let c = -tr / k as f64;
        coeffs.push(c);
        if k == n {
            break;
        }
        for i in 0..n {
            mk[i][i] += c;
        }
        mk = f64_matmul(a, &mk);
    }
    coeffs
}

/// Durand-Kerner root finding for a monic complex polynomial given by its
/// non-leading coefficients, highest degree first.
fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len();
    // Horner on z^d + c1 z^{d-1} + ... + cd.
    let eval = |z: Complex64| -> Complex64 {
        let mut val = Complex64::one();
        for &c in coeffs {
            val = val * z + c;
        }
        val
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..d).map(|i| seed.powu(i as u32 + 1)).collect();
    for _ in 0..500 {
        let mut max_delta = 0.0f64;
        for i in 0..d {
            let mut denom = Complex64::one();
            for j in 0..d {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            max_delta = max_delta.max(delta.norm());
        }
        if max_delta < 1e-14 {
            break;
        }
    }
    roots
}

/// Complex eigenvalues of a real matrix, sorted by descending real part
/// then descending imaginary part. The matrix is pre-scaled so the root
/// iteration works near the unit disk.
fn eigenvalues(a: &[Vec<f64>]) -> Vec<Complex64> {
    let n = a.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter().map(|x| x.abs()))
        .fold(0.0f64, f64::max)
        .max(1.0);
    let scaled: Vec<Vec<f64>> = a
        .iter()
        .map(|r| r.iter().map(|x| x / scale).collect())
        .collect();
    let coeffs: Vec<Complex64> = char_poly_coeffs(&scaled)
        .into_iter()
        .map(|c| Complex64::new(c, 0.0))
        .collect();
    let mut roots = durand_kerner(&coeffs);
    for r in roots.iter_mut() {
        *r *= scale;
    }
    debug_assert_eq!(roots.len(), n);
    roots.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));
    roots
}

/// Null vector of a numerically singular complex matrix: eliminate with
/// partial pivoting, free the column with the weakest pivot, back
/// substitute.
fn null_vector(mat: &[Vec<Complex64>]) -> Vec<Complex64> {
    let n = mat.len();
    let mut a: Vec<Vec<Complex64>> = mat.to_vec();
    let scale = a
        .iter()
        .flat_map(|r| r.iter().map(|x| x.norm()))
        .fold(0.0f64, f64::max)
        .max(1.0);
    let tol = 1e-10 * scale;
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut row = 0usize;
    let mut weakest: Option<(f64, usize)> = None;
    for col in 0..n {
        let Some(piv) = (row..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
        else {
            break;
        };
        let mag = a[piv][col].norm();
        if mag <= tol {
            // Free column.
            continue;
        }
        // Track the weakest accepted pivot in case no column tests free.
        if weakest.map_or(true, |(w, _)| mag < w) {
            weakest = Some((mag, pivots.len()));
        }
        a.swap(row, piv);
        let d = a[row][col];
        for k in col..n {
            a[row][k] /= d;
        }
        for i in 0..n {
            if i == row || a[i][col].norm() == 0.0 {
                continue;
            }
            let f = a[i][col];
            for k in col..n {
                let sub = f * a[row][k];
                a[i][k] -= sub;
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    let free_col = if pivots.len() < n {
        // The first column skipped above.
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        (0..n).find(|c| !pivot_cols.contains(c)).unwrap()
    } else {
        // Numerically nonsingular: force the weakest pivot column free.
        let (_, idx) = weakest.expect("pivots nonempty");
        let (_, col) = pivots.remove(idx);
        col
    };
    let mut v = vec![Complex64::zero(); n];
    v[free_col] = Complex64::one();
    for &(prow, pcol) in pivots.iter().rev() {
        if pcol == free_col {
            continue;
        }
        // Row is reduced: entry at pcol is 1, so x[pcol] = -Σ other terms.
        let mut s = Complex64::zero();
        for k in 0..n {
            if k != pcol {
                s += a[prow][k] * v[k];
            }
        }
        v[pcol] = -s;
    }
    let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    v
}

/// Eigenvector of a real matrix for a given (complex) eigenvalue, with a
/// residual check.
fn eigenvector(a: &[Vec<f64>], lambda: Complex64) -> Option<Vec<Complex64>> {
    let n = a.len();
    let shifted: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = Complex64::new(a[i][j], 0.0);
                    if i == j {
                        v -= lambda;
                    }
                    v
                })
                .collect()
        })
        .collect();
    let v = null_vector(&shifted);
    let scale = a
        .iter()
        .flat_map(|r| r.iter().map(|x| x.abs()))
        .fold(0.0f64, f64::max)
        .max(lambda.norm())
        .max(1.0);
    // Residual ||Av - λv|| relative to the matrix scale.
    let mut residual = 0.0f64;
    for i in 0..n {
        let mut av = Complex64::zero();
        for j in 0..n {
            av += a[i][j] * v[j];
        }
        residual = residual.max((av - lambda * v[i]).norm());
    }
    if residual <= 1e-6 * scale {
        Some(v)
    } else {
        None
    }
}

fn complex_columns(cols: &[Vec<Complex64>]) -> Vec<Vec<(f64, f64)>> {
    cols.iter()
        .map(|c| c.iter().map(|z| (z.re, z.im)).collect())
        .collect()
}

/// Stacks the complex images `U_j · v` for all commutators and all given
/// vectors, and returns their numeric rank.
fn numeric_image_dim(inst: &GriesserInstance, vectors: &[Vec<Complex64>], rel_tol: f64) -> usize {
    let m = inst.m;
    let cols: Vec<Vec<Complex64>> = inst
        .u_float
        .iter()
        .flat_map(|u| {
            vectors.iter().map(move |v| {
                (0..m)
                    .map(|i| {
                        (0..m)
                            .map(|j| u[i][j] * v[j])
                            .fold(Complex64::zero(), |acc, x| acc + x)
                    })
                    .collect::<Vec<Complex64>>()
            })
        })
        .collect();
    let matrix: Vec<Vec<Complex64>> = (0..m)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect();
    rank_numeric_complex(&matrix, rel_tol).expect("images are finite")
}

/// Witness line for `r = 2m - 1` via the eigenvector path: diagonalize
/// `Y_1` (generic distinct eigenvalues), take the leading eigenvector `v`;
/// the commutators of `Y_1` have zero diagonal in its eigenbasis, so the
/// images `U_j v` lie in a hyperplane and span at most `m - 1` dimensions.
pub fn trivial_witness_r2m1(inst: &GriesserInstance) -> Result<Witness, GriesserError> {
    trivial_witness_r2m1_with(inst, NUMERIC_REL_TOL)
}

pub fn trivial_witness_r2m1_with(
    inst: &GriesserInstance,
    rel_tol: f64,
) -> Result<Witness, GriesserError> {
    let m = inst.m;
    let roots = eigenvalues(&inst.y1_float);
    let scale = roots.iter().map(|r| r.norm()).fold(1.0f64, f64::max);
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if (roots[i] - roots[j]).norm() < 1e-6 * scale {
                return Err(GriesserError::DefectiveY1);
            }
        }
    }
    let v = roots
        .iter()
        .find_map(|&lam| eigenvector(&inst.y1_float, lam))
        .ok_or(GriesserError::DefectiveY1)?;
    let dim = numeric_image_dim(inst, std::slice::from_ref(&v), rel_tol);
    if dim > m - 1 {
        return Err(GriesserError::DefectiveY1);
    }
    Ok(Witness {
        r: 2 * m - 1,
        dim: 1,
        image_dim: dim,
        strategy: "eigenvector-line".into(),
        seed: None,
        basis: WitnessBasis::Numeric(complex_columns(&[v])),
    })
}

/// Pencil witness for `m = 4`, `a = 4`, `r = 2m - 2 = 6`: the pencil
/// `t · U_2^{-1}U_3 - U_3^{-1}U_2` is singular exactly at `t = ν^{-2}` for
/// eigenvalues `ν` of `U_2^{-1}U_3`, with the corresponding eigenvector in
/// its kernel. Eigenvectors `v, w` of two distinct roots satisfy
/// `U_3 v ∥ U_2 v` and `U_3 w ∥ U_2 w`, so the image of `E = span{v, w}`
/// is `span{U_2 v, U_2 w}`, of dimension 2 = `r - m`.
pub fn m4_pencil_witness(inst: &GriesserInstance) -> Result<Witness, GriesserError> {
    m4_pencil_witness_with(inst, NUMERIC_REL_TOL)
}

pub fn m4_pencil_witness_with(
    inst: &GriesserInstance,
    rel_tol: f64,
) -> Result<Witness, GriesserError> {
    let m = inst.m;
    assert_eq!(m, 4, "pencil witness is the m = 4 path");
    assert_eq!(inst.a, 4, "pencil witness needs exactly U_2, U_3");
    let u2 = &inst.u_float[0];
    let u3 = &inst.u_float[1];
    let u2_inv = f64_inverse(u2).ok_or(GriesserError::SingularU)?;
    let pencil = f64_matmul(&u2_inv, u3);
    let roots = eigenvalues(&pencil);
    // Two separated eigenvalues give independent kernel vectors of the
    // pencil members at t = 1/ν² each.
    let scale = roots.iter().map(|r| r.norm()).fold(1.0f64, f64::max);
    let mut chosen: Vec<(Complex64, Vec<Complex64>)> = Vec::new();
    for &lam in &roots {
        if chosen
            .iter()
            .all(|&(mu, _)| (lam - mu).norm() > 1e-6 * scale)
        {
            if let Some(v) = eigenvector(&pencil, lam) {
                chosen.push((lam, v));
            }
        }
        if chosen.len() == 2 {
            break;
        }
    }
    if chosen.len() < 2 {
        return Err(GriesserError::DegenerateVW);
    }
    let (v, w) = (chosen[0].1.clone(), chosen[1].1.clone());
    // Guard against numerically parallel vectors.
    let dot: Complex64 = v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
    if (1.0 - dot.norm()).abs() < 1e-8 {
        return Err(GriesserError::DegenerateVW);
    }
    let dim = numeric_image_dim(inst, &[v.clone(), w.clone()], rel_tol);
    if dim > 2 {
        return Err(GriesserError::DegenerateVW);
    }
    Ok(Witness {
        r: 2 * m - 2,
        dim: 2,
        image_dim: dim,
        strategy: "pencil-plane".into(),
        seed: None,
        basis: WitnessBasis::Numeric(complex_columns(&[v, w])),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::random_tensor;
    use crate::exactmath::DEFAULT_PRIME;

    fn field() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME)
    }

    fn random_instance(a: usize, m: usize, seed: u64) -> GriesserInstance {
        let t = random_tensor(a, m, m, seed, 10007);
        make_instance(&t, field()).expect("generic tensor has invertible slice 0")
    }

    #[test]
    fn instance_has_a_minus_two_traceless_commutators() {
        let inst = random_instance(3, 3, 5);
        assert_eq!(inst.commutators().len(), 1);
        assert_eq!(inst.commutators()[0].trace(), 0);
        let inst = random_instance(6, 4, 5);
        assert_eq!(inst.commutators().len(), 4);
    }

    #[test]
    fn make_instance_rejects_rectangular() {
        let t = random_tensor(3, 3, 4, 1, 97);
        assert!(matches!(
            make_instance(&t, field()),
            Err(GriesserError::BadShape(_))
        ));
    }

    #[test]
    fn image_dim_of_empty_subspace_is_zero() {
        let inst = random_instance(4, 4, 9);
        let e = ModMatrix::zero(field(), 4, 0);
        assert_eq!(image_dim(&inst, &e).unwrap(), 0);
    }

    #[test]
    fn image_dim_rejects_deficient_basis() {
        let inst = random_instance(4, 4, 9);
        let e = ModMatrix::zero(field(), 4, 2);
        assert!(matches!(
            image_dim(&inst, &e),
            Err(GriesserError::RankDeficientE)
        ));
    }

    #[test]
    fn image_dim_monotone_and_capped() {
        let inst = random_instance(5, 4, 3);
        let m = 4;
        for w in 1..=m {
            let coords: Vec<usize> = (0..w).collect();
            let e = coordinate_subspace(field(), m, &coords);
            let dim = image_dim(&inst, &e).unwrap();
            assert!(dim <= m.min((inst.a() - 2) * w));
            if w > 1 {
                let smaller = coordinate_subspace(field(), m, &coords[..w - 1]);
                assert!(image_dim(&inst, &smaller).unwrap() <= dim);
            }
        }
    }

    #[test]
    fn scaling_commutators_preserves_image_dim() {
        let mut inst = random_instance(5, 4, 13);
        let coords = [0usize, 2];
        let e = coordinate_subspace(field(), 4, &coords);
        let before = image_dim(&inst, &e).unwrap();
        for (i, u) in inst.u_mod.iter_mut().enumerate() {
            *u = u.scale(3 + i as u64);
        }
        assert_eq!(image_dim(&inst, &e).unwrap(), before);
    }

    #[test]
    fn witness_search_r_2m_minus_1_small_a_trivial() {
        // a - 2 <= m - 1 maps can span at most m - 1 dimensions: any line
        // works and the coordinate strategy finds one immediately.
        let inst = random_instance(4, 4, 21);
        let result = witness_search(&inst, 7, &ALL_STRATEGIES, 10, 0).unwrap();
        let w = result.witness().expect("witness must exist");
        assert_eq!(w.dim, 1);
        assert!(w.satisfies(4));
    }

    #[test]
    fn witness_search_rejects_bad_r() {
        let inst = random_instance(4, 4, 2);
        assert!(matches!(
            witness_search(&inst, 4, &ALL_STRATEGIES, 1, 0),
            Err(GriesserError::BadR { .. })
        ));
        assert!(matches!(
            witness_search(&inst, 8, &ALL_STRATEGIES, 1, 0),
            Err(GriesserError::BadR { .. })
        ));
    }

    #[test]
    fn matmul_griesser_tensor_slices() {
        let t = matmul_griesser_tensor(2);
        assert!(t.slice_a(0).unwrap().is_identity());
        let d = t.slice_a(1).unwrap();
        let want = ExactMatrix::from_i64_rows(&[
            vec![1, 0, 0, 0],
            vec![0, 2, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 2],
        ]);
        assert_eq!(d, want);
    }

    #[test]
    fn matmul_commutators_are_block_diagonal_with_zero_diagonal() {
        // X_1 is blockdiag(D, D), so each U_j stays block diagonal and its
        // diagonal entries vanish.
        let n = 2usize;
        let inst = make_instance(&matmul_griesser_tensor(n), field()).unwrap();
        for u in inst.commutators() {
            for r in 0..n * n {
                assert_eq!(u.get(r, r), 0, "zero diagonal");
                for c in 0..n * n {
                    if r / n != c / n {
                        assert_eq!(u.get(r, c), 0, "off-block entry ({r},{c})");
                    }
                }
            }
        }
    }

    #[test]
    fn matmul_profile_n2_matches_formula() {
        // r = 5: w = 3 = 1*2+1 -> (d+1)n - 1 = 3; fails since 3 > r-m = 1.
        let p = matmul_profile(2, 5, field()).unwrap();
        assert_eq!((p.d, p.e), (1, 1));
        assert_eq!(p.formula_dim, 3);
        assert_eq!(p.measured_dim, 3);
        assert!(!p.satisfied);
        // r = 6: w = 2 -> dn = 2 = r - m: satisfied.
        let p = matmul_profile(2, 6, field()).unwrap();
        assert_eq!(p.formula_dim, 2);
        assert_eq!(p.measured_dim, 2);
        assert!(p.satisfied);
    }

    #[test]
    fn m2_witness_at_r6_found_and_not_at_r5() {
        let inst = make_instance(&matmul_griesser_tensor(2), field()).unwrap();
        let found = witness_search(&inst, 6, &ALL_STRATEGIES, 100, 7).unwrap();
        let w = found.witness().expect("structured witness at r = 6");
        assert_eq!(w.image_dim, 2);
        let missing = witness_search(&inst, 5, &ALL_STRATEGIES, 200, 7).unwrap();
        match missing {
            SearchResult::NotFound(ev) => {
                assert_eq!(ev.coordinate_checked, 4, "C(4,3) coordinate subspaces");
                assert!(ev.random_checked > 0);
            }
            SearchResult::Found(w) => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn eigen_machinery_recovers_diagonal_spectrum() {
        let a = vec![
            vec![3.0, 1.0, 0.0],
            vec![0.0, -2.0, 1.0],
            vec![0.0, 0.0, 5.0],
        ];
        let roots = eigenvalues(&a);
        let mut res: Vec<f64> = roots.iter().map(|r| r.re).collect();
        res.sort_by(f64::total_cmp);
        assert!((res[0] + 2.0).abs() < 1e-9);
        assert!((res[1] - 3.0).abs() < 1e-9);
        assert!((res[2] - 5.0).abs() < 1e-9);
        let v = eigenvector(&a, Complex64::new(5.0, 0.0)).expect("eigenvector at 5");
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-9);
    }

    #[test]
    fn trivial_witness_constructed_diagonal_case() {
        // Y_1 diagonal with distinct entries, U_j with zero first columns:
        // v = e_1 exactly and the images vanish on it.
        let mut t = Tensor3::zero(5, 3, 3);
        for i in 0..3 {
            t.set(0, i, i, BigInt::one());
            t.set(1, i, i, BigInt::from(i as u64 + 1));
        }
        // Slices 2..4: zero first column, entries elsewhere.
        for j in 2..5usize {
            t.set(j, 0, 1, BigInt::from(j as u64));
            t.set(j, 1, 2, BigInt::from(2 * j as u64 + 1));
            t.set(j, 2, 1, BigInt::from(7));
        }
        let inst = make_instance(&t, field()).unwrap();
        let w = trivial_witness_r2m1(&inst).expect("witness exists");
        assert!(w.image_dim <= 2);
        match &w.basis {
            WitnessBasis::Numeric(cols) => {
                // Leading eigenvector is a coordinate line.
                let v = &cols[0];
                let big: Vec<usize> = (0..3)
                    .filter(|&i| (v[i].0.powi(2) + v[i].1.powi(2)).sqrt() > 1e-6)
                    .collect();
                assert_eq!(big.len(), 1);
            }
            WitnessBasis::Exact(_) => panic!("numeric witness expected"),
        }
    }

    #[test]
    fn trivial_witness_random_instances() {
        for seed in 0..5u64 {
            let inst = random_instance(5, 3, 100 + seed);
            let w = trivial_witness_r2m1(&inst).expect("generic instance succeeds");
            assert!(w.image_dim <= 2, "seed {seed}: dim {}", w.image_dim);
            assert!(w.satisfies(3));
        }
    }

    #[test]
    fn pencil_witness_generic_m4() {
        for seed in 0..5u64 {
            let inst = random_instance(4, 4, 200 + seed);
            let w = m4_pencil_witness(&inst).expect("generic pencil witness");
            assert!(w.image_dim <= 2, "seed {seed}");
            assert!(w.satisfies(4));
        }
    }

    #[test]
    fn pencil_witness_detects_equal_commutators() {
        // U_3 = U_2 makes the pencil identically degenerate.
        let mut t = Tensor3::zero(4, 4, 4);
        for i in 0..4 {
            t.set(0, i, i, BigInt::one());
            t.set(1, i, i, BigInt::from(i as u64 + 1));
        }
        // Slices 2 and 3 equal: U_2 = U_3.
        for j in 2..4usize {
            t.set(j, 0, 1, BigInt::from(3));
            t.set(j, 1, 0, BigInt::from(5));
            t.set(j, 2, 3, BigInt::from(2));
            t.set(j, 3, 2, BigInt::from(1));
        }
        let inst = make_instance(&t, field()).unwrap();
        assert!(matches!(
            m4_pencil_witness(&inst),
            Err(GriesserError::DegenerateVW) | Err(GriesserError::SingularU)
        ));
    }

    #[test]
    fn rank_numeric_on_pencil_images_is_at_most_two() {
        // The stacked images {U_2 v, U_3 v, U_2 w, U_3 w} of a pencil
        // witness span at most span{U_2 v, U_2 w}.
        let inst = random_instance(4, 4, 300);
        let w = m4_pencil_witness(&inst).unwrap();
        let (v, wv) = match &w.basis {
            WitnessBasis::Numeric(cols) => (
                cols[0]
                    .iter()
                    .map(|&(re, im)| Complex64::new(re, im))
                    .collect::<Vec<_>>(),
                cols[1]
                    .iter()
                    .map(|&(re, im)| Complex64::new(re, im))
                    .collect::<Vec<_>>(),
            ),
            WitnessBasis::Exact(_) => unreachable!(),
        };
        let dim = numeric_image_dim(&inst, &[v, wv], NUMERIC_REL_TOL);
        assert!(dim <= 2);
    }
}
