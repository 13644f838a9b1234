//! Dense complex linear algebra shared by all modules.
//!
//! Everything downstream (Frobenius algebras, projective permutation
//! matrices, idempotent splitting) is phrased in terms of [`CMatrix`], a plain
//! row-major complex matrix. Comparisons use the max-norm on entries
//! throughout, controlled by [`Tolerance`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type C64 = Complex64;

/// Numerical tolerances: `eps` for entrywise comparisons, `eig_gap` for the
/// admissible spread of idempotent eigenvalues around {0, 1}.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps: f64,
    pub eig_gap: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: 1e-9, eig_gap: 1e-6 }
    }
}

impl Tolerance {
    pub fn new(eps: f64, eig_gap: f64) -> Result<Self, NumericsError> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(NumericsError::BadTolerance(format!("eps = {eps} out of (0,1)")));
        }
        if !(eig_gap > 0.0 && eig_gap < 0.5) {
            return Err(NumericsError::BadTolerance(format!("eig_gap = {eig_gap} out of (0,0.5)")));
        }
        Ok(Tolerance { eps, eig_gap })
    }
}

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("invalid tolerance: {0}")]
    BadTolerance(String),
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix contains a non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not self-adjoint (max residual {residual:e})")]
    NotSelfAdjoint { residual: f64 },
    #[error("matrix is not idempotent (max residual {residual:e})")]
    NotIdempotent { residual: f64 },
    #[error("eigenvalue {lambda} falls inside the spectral gap ({gap_lo}, {gap_hi})")]
    SpectralGapViolation { lambda: f64, gap_lo: f64, gap_hi: f64 },
    #[error("operators do not commute (max residual {residual:e})")]
    NotCommuting { residual: f64 },
    #[error("operator {index} is not normal (max residual {residual:e})")]
    NotNormal { index: usize, residual: f64 },
    #[error("internal verification failed: {0}")]
    VerificationFailed(String),
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl std::fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            write!(f, "  ")?;
            for j in 0..self.cols.min(8) {
                let z = self[(i, j)];
                write!(f, "{:+.3}{:+.3}i ", z.re, z.im)?;
            }
            writeln!(f, "{}", if self.cols > 8 { "..." } else { "" })?;
        }
        if self.rows > 8 {
            writeln!(f, "  ...")?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from row-major real data (convenience for tests and fixtures).
    pub fn from_real(rows: usize, cols: usize, vals: &[f64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        Self::from_fn(rows, cols, |i, j| C64::new(vals[i * cols + j], 0.0))
    }

    pub fn column_vector(vals: &[C64]) -> Self {
        CMatrix { rows: vals.len(), cols: 1, data: vals.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn check_finite(&self) -> Result<(), NumericsError> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(NumericsError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        // ikj loop order keeps the inner access contiguous.
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row_out = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                let row_rhs = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, r) in row_out.iter_mut().zip(row_rhs) {
                    *o += a * r;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(&rhs.data) {
            *o += r;
        }
        out
    }

    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(&rhs.data) {
            *o -= r;
        }
        out
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        let mut out = self.clone();
        for o in out.data.iter_mut() {
            *o *= s;
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> CMatrix {
        let mut out = self.clone();
        for o in out.data.iter_mut() {
            *o = o.conj();
        }
        out
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, rhs: &CMatrix, eps: f64) -> bool {
        self.rows == rhs.rows && self.cols == rhs.cols && self.max_abs_diff(rhs) <= eps
    }

    pub fn is_self_adjoint(&self, eps: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if (self[(i, j)] - self[(j, i)].conj()).norm() > eps {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_unitary(&self, eps: f64) -> bool {
        self.is_square() && self.dagger().mul(self).approx_eq(&CMatrix::identity(self.rows), eps)
    }

    /// Apply to a vector (self.cols entries).
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = C64::new(0.0, 0.0);
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            for (a, x) in row.iter().zip(v) {
                acc += a * x;
            }
            out[i] = acc;
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<C64>]) -> CMatrix {
        let mut m = CMatrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m[(i, j)] = c[i];
            }
        }
        m
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }

    /// Eigendecomposition of a self-adjoint matrix. Returns (eigenvalues,
    /// columns-of-eigenvectors), unsorted beyond what the solver produces.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, CMatrix) {
        assert!(self.is_square());
        if self.rows == 0 {
            return (Vec::new(), CMatrix::zeros(0, 0));
        }
        let eig = self.to_nalgebra().symmetric_eigen();
        let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let vecs = CMatrix::from_fn(self.rows, self.rows, |i, j| eig.eigenvectors[(i, j)]);
        (vals, vecs)
    }

    pub fn singular_values(&self) -> Vec<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        let svd = self.to_nalgebra().svd(false, false);
        let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv
    }

    /// Dimension of the null space, deciding rank by a relative singular
    /// value cutoff. Suited to the well-separated spectra in this crate.
    pub fn nullspace_dim(&self, eps: f64) -> usize {
        let sv = self.singular_values();
        if sv.is_empty() {
            return self.cols;
        }
        let cutoff = (sv[0].max(1.0)) * eps * (self.rows.max(self.cols) as f64).max(8.0);
        let rank = sv.iter().filter(|&&s| s > cutoff).count();
        self.cols - rank
    }
}

/// Kronecker product.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a[(i, j)];
            if aij.re == 0.0 && aij.im == 0.0 {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out[(i * b.rows() + k, j * b.cols() + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

// --- serde: complex scalars as [re, im], matrices as {rows, cols, data} ---

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            rows: usize,
            cols: usize,
            data: Vec<[f64; 2]>,
        }
        let data = self.data.iter().map(|z| [z.re, z.im]).collect();
        Repr { rows: self.rows, cols: self.cols, data }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            rows: usize,
            cols: usize,
            data: Vec<[f64; 2]>,
        }
        let r = Repr::deserialize(de)?;
        if r.data.len() != r.rows * r.cols {
            return Err(D::Error::custom(format!(
                "matrix data length {} does not match {}x{}",
                r.data.len(),
                r.rows,
                r.cols
            )));
        }
        let m = CMatrix {
            rows: r.rows,
            cols: r.cols,
            data: r.data.iter().map(|[re, im]| C64::new(*re, *im)).collect(),
        };
        m.check_finite().map_err(D::Error::custom)?;
        Ok(m)
    }
}

// --- dagger idempotent splitting -------------------------------------------

/// Entries with magnitude at or below this are treated as structural zeros
/// when decomposing an idempotent into independent diagonal blocks.
const SUPPORT_CUTOFF: f64 = 1e-12;

fn connected_components(x: &CMatrix) -> Vec<Vec<usize>> {
    let n = x.rows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if x[(i, j)].norm() > SUPPORT_CUTOFF || x[(j, i)].norm() > SUPPORT_CUTOFF {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut comps: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        comps.entry(r).or_default().push(i);
    }
    comps.into_values().collect()
}

fn submatrix(x: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), idx.len(), |i, j| x[(idx[i], idx[j])])
}

/// Fix the phase of each column so its largest-magnitude entry is positive
/// real; makes orthonormal bases reproducible across runs.
fn canonicalize_columns(m: &mut CMatrix) {
    for j in 0..m.cols() {
        let mut best = 0usize;
        let mut best_norm = 0.0;
        for i in 0..m.rows() {
            let v = m[(i, j)].norm();
            if v > best_norm + 1e-12 {
                best_norm = v;
                best = i;
            }
        }
        if best_norm > 0.0 {
            let phase = m[(best, j)] / C64::new(best_norm, 0.0);
            let corr = phase.conj();
            for i in 0..m.rows() {
                let v = m[(i, j)] * corr;
                m[(i, j)] = v;
            }
        }
    }
}

/// Split a self-adjoint idempotent `x` as `i·i†` with `i` an isometry onto the
/// eigenvalue-1 space. Eigenvalues must cluster at 0 and 1 within `eig_gap`;
/// a mid-spectrum eigenvalue is an error, never rounded away.
///
/// The splitting is computed blockwise over the connected components of the
/// support pattern, which keeps large structured idempotents cheap.
pub fn split_dagger_idempotent(
    x: &CMatrix,
    tol: &Tolerance,
) -> Result<(CMatrix, usize), NumericsError> {
    if !x.is_square() {
        return Err(NumericsError::NotSquare { rows: x.rows(), cols: x.cols() });
    }
    x.check_finite()?;
    let n = x.rows();
    if n == 0 {
        return Ok((CMatrix::zeros(0, 0), 0));
    }
    if !x.is_self_adjoint(tol.eps) {
        let residual = x.max_abs_diff(&x.dagger());
        return Err(NumericsError::NotSelfAdjoint { residual });
    }

    let comps = connected_components(x);
    let mut idem_residual: f64 = 0.0;
    let mut eigenpairs: Vec<(usize, f64, Vec<C64>)> = Vec::new(); // (component order key, lambda, global vector)
    for (ci, comp) in comps.iter().enumerate() {
        let b = submatrix(x, comp);
        idem_residual = idem_residual.max(b.mul(&b).max_abs_diff(&b));
        if idem_residual > tol.eps {
            return Err(NumericsError::NotIdempotent { residual: idem_residual });
        }
        let (vals, vecs) = b.hermitian_eigen();
        for (k, &lambda) in vals.iter().enumerate() {
            let near0 = lambda.abs() <= tol.eig_gap;
            let near1 = (lambda - 1.0).abs() <= tol.eig_gap;
            if !near0 && !near1 {
                return Err(NumericsError::SpectralGapViolation {
                    lambda,
                    gap_lo: tol.eig_gap,
                    gap_hi: 1.0 - tol.eig_gap,
                });
            }
            if near1 {
                let mut global = vec![C64::new(0.0, 0.0); n];
                for (local, &g) in comp.iter().enumerate() {
                    global[g] = vecs[(local, k)];
                }
                eigenpairs.push((ci, lambda, global));
            }
        }
    }
    // Deterministic column order: by component, then descending eigenvalue.
    eigenpairs.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.partial_cmp(&a.1).unwrap()));
    let rank = eigenpairs.len();
    let cols: Vec<Vec<C64>> = eigenpairs.into_iter().map(|(_, _, v)| v).collect();
    let mut iso = CMatrix::from_columns(n, &cols);
    canonicalize_columns(&mut iso);

    let bound = 10.0 * tol.eps;
    let recon = iso.mul(&iso.dagger());
    let r1 = recon.max_abs_diff(x);
    if r1 > bound {
        return Err(NumericsError::VerificationFailed(format!(
            "i·i† deviates from x by {r1:e} (> {bound:e})"
        )));
    }
    let gram = iso.dagger().mul(&iso);
    let r2 = gram.max_abs_diff(&CMatrix::identity(rank));
    if r2 > bound {
        return Err(NumericsError::VerificationFailed(format!(
            "i†·i deviates from identity by {r2:e} (> {bound:e})"
        )));
    }
    let tr = x.trace().re;
    if (tr - rank as f64).abs() > 0.1 {
        return Err(NumericsError::VerificationFailed(format!(
            "rank {rank} does not match trace {tr}"
        )));
    }
    Ok((iso, rank))
}

// --- simultaneous diagonalization ------------------------------------------

/// Simultaneously diagonalize a family of commuting normal operators.
///
/// Uses the randomized linear-combination trick on the hermitian and
/// antihermitian parts (these all commute by Fuglede's theorem), with a fixed
/// seedable RNG and post-hoc verification.
pub fn simultaneously_diagonalize(
    ops: &[CMatrix],
    tol: &Tolerance,
    seed: u64,
) -> Result<CMatrix, NumericsError> {
    assert!(!ops.is_empty(), "need at least one operator");
    let n = ops[0].rows();
    for (k, op) in ops.iter().enumerate() {
        if !op.is_square() || op.rows() != n {
            return Err(NumericsError::ShapeMismatch(format!(
                "operator {k} is {}x{}, expected {n}x{n}",
                op.rows(),
                op.cols()
            )));
        }
        op.check_finite()?;
        let res = op.mul(&op.dagger()).max_abs_diff(&op.dagger().mul(op));
        if res > tol.eps {
            return Err(NumericsError::NotNormal { index: k, residual: res });
        }
    }
    for a in 0..ops.len() {
        for b in (a + 1)..ops.len() {
            let res = ops[a].mul(&ops[b]).max_abs_diff(&ops[b].mul(&ops[a]));
            if res > tol.eps {
                return Err(NumericsError::NotCommuting { residual: res });
            }
        }
    }

    // Hermitian generators: (A + A†)/2 and (A - A†)/2i for each operator.
    let mut herms: Vec<CMatrix> = Vec::with_capacity(2 * ops.len());
    for op in ops {
        let dag = op.dagger();
        herms.push(op.add(&dag).scale(C64::new(0.5, 0.0)));
        herms.push(op.sub(&dag).scale(C64::new(0.0, -0.5)));
    }

    let bound = 10.0 * tol.eps;
    for attempt in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let mut combo = CMatrix::zeros(n, n);
        for h in &herms {
            let c: f64 = rng.gen_range(-1.0..1.0);
            combo = combo.add(&h.scale(C64::new(c, 0.0)));
        }
        let (_vals, mut basis) = combo.hermitian_eigen();
        canonicalize_columns(&mut basis);
        let bd = basis.dagger();
        let diagonalizes = ops.iter().all(|op| {
            let d = bd.mul(op).mul(&basis);
            let mut off = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        off = off.max(d[(i, j)].norm());
                    }
                }
            }
            off <= bound
        });
        if diagonalizes {
            return Ok(basis);
        }
    }
    Err(NumericsError::VerificationFailed(
        "randomized combination failed to separate joint eigenspaces".into(),
    ))
}

/// Seeded RNG used wherever a module needs randomness.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random complex matrix with entries uniform in the unit square (test and
/// probe helper).
pub fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}
