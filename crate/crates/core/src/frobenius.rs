//! Special symmetric dagger Frobenius algebras as structure tensors, quantum
//! graphs, centers, and extraction of classical data.
//!
//! The multiplication is stored as an n x n^2 matrix (column index = flattened
//! input pair, second factor fastest), so every diagrammatic equation becomes
//! a finite composition of reshapes, Kronecker products and matrix products.
//! Each axiom's diagram-to-contraction translation is written out once below;
//! the classical copy algebra reduces them to the familiar Boolean laws,
//! which the tests pin down.

use crate::cocycles::TwoCocycle;
use crate::graphs::ClassicalGraph;
use crate::numerics::{kron, simultaneously_diagonalize, CMatrix, NumericsError, Tolerance, C64};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FrobeniusError {
    #[error("axiom {axiom} fails with max residual {residual:e}")]
    AxiomViolation { axiom: &'static str, residual: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error("center dimension methods disagree: projector gives {projector}, commutant gives {commutant}")]
    CenterMismatch { projector: usize, commutant: usize },
    #[error("center projector trace {0} is not close to an integer")]
    NonIntegerTrace(f64),
    #[error("adjacency does not snap to a Boolean matrix at ({0},{1})")]
    NotBooleanAdjacency(usize, usize),
    #[error("copyable element recovery failed: {0}")]
    CopyableFailure(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Frobenius algebra as structure tensors: multiplication m: A⊗A -> A stored
/// n x n^2 (column `(a,b) = a*n + b`) and unit u as an n-vector.
///
/// Serializes as `{"dim": n, "m": <matrix>, "u": [[re,im],...]}`.
#[derive(Debug, Clone)]
pub struct FrobeniusAlgebra {
    pub dim: usize,
    pub m: CMatrix,
    pub u: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct FrobeniusRepr {
    dim: usize,
    m: CMatrix,
    u: Vec<[f64; 2]>,
}

impl Serialize for FrobeniusAlgebra {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let u = (0..self.dim).map(|i| [self.u[(i, 0)].re, self.u[(i, 0)].im]).collect();
        FrobeniusRepr { dim: self.dim, m: self.m.clone(), u }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for FrobeniusAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = FrobeniusRepr::deserialize(de)?;
        if r.u.len() != r.dim {
            return Err(D::Error::custom(format!(
                "unit vector has {} entries for dimension {}",
                r.u.len(),
                r.dim
            )));
        }
        let u = CMatrix::from_fn(r.dim, 1, |i, _| C64::new(r.u[i][0], r.u[i][1]));
        FrobeniusAlgebra::new(r.dim, r.m, u).map_err(D::Error::custom)
    }
}

/// Which of the optional properties hold (the hard axioms are errors).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusReport {
    pub special: bool,
    pub symmetric: bool,
    pub commutative: bool,
}

type SparseEntry = (usize, usize, usize, C64); // (out, left, right, value)

impl FrobeniusAlgebra {
    pub fn new(dim: usize, m: CMatrix, u: CMatrix) -> Result<Self, FrobeniusError> {
        if m.rows() != dim || m.cols() != dim * dim {
            return Err(FrobeniusError::ShapeMismatch(format!(
                "m is {}x{}, expected {dim}x{}",
                m.rows(),
                m.cols(),
                dim * dim
            )));
        }
        if u.rows() != dim || u.cols() != 1 {
            return Err(FrobeniusError::ShapeMismatch(format!(
                "u is {}x{}, expected {dim}x1",
                u.rows(),
                u.cols()
            )));
        }
        m.check_finite().map_err(FrobeniusError::Numerics)?;
        u.check_finite().map_err(FrobeniusError::Numerics)?;
        Ok(FrobeniusAlgebra { dim, m, u })
    }

    #[inline]
    pub fn m_at(&self, out: usize, a: usize, b: usize) -> C64 {
        self.m[(out, a * self.dim + b)]
    }

    fn nonzeros(&self) -> Vec<SparseEntry> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let v = self.m_at(i, a, b);
                    if v.norm() > 0.0 {
                        out.push((i, a, b, v));
                    }
                }
            }
        }
        out
    }

    /// Multiply two elements of the algebra.
    pub fn multiply(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..n {
                if x[a].norm() == 0.0 {
                    continue;
                }
                for b in 0..n {
                    acc += self.m_at(i, a, b) * x[a] * y[b];
                }
            }
            out[i] = acc;
        }
        out
    }

    /// Frobenius cup m†u : C -> A⊗A as a flat n^2 vector.
    pub fn cup(&self) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let ui = self.u[(i, 0)];
            if ui.norm() == 0.0 {
                continue;
            }
            for ab in 0..n * n {
                out[ab] += self.m[(i, ab)].conj() * ui;
            }
        }
        out
    }

    /// Frobenius cap u†m : A⊗A -> C as a flat n^2 vector of coefficients.
    pub fn cap(&self) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let ui = self.u[(i, 0)].conj();
            if ui.norm() == 0.0 {
                continue;
            }
            for ab in 0..n * n {
                out[ab] += ui * self.m[(i, ab)];
            }
        }
        out
    }
}

/// Verify the monoid, Frobenius, and dagger axioms by contraction; returns
/// which of special / symmetric / commutative hold. Associativity,
/// unitality and the Frobenius equations are hard errors when violated.
pub fn verify_frobenius(
    a: &FrobeniusAlgebra,
    tol: &Tolerance,
) -> Result<FrobeniusReport, FrobeniusError> {
    let n = a.dim;
    let nz = a.nonzeros();

    // associativity: m(m ⊗ 1) = m(1 ⊗ m), entries indexed by (i; a,b,c).
    // Sparse evaluation over pairs of nonzeros sharing the inner wire.
    {
        let mut by_out: Vec<Vec<(usize, usize, C64)>> = vec![Vec::new(); n];
        for &(i, x, y, v) in &nz {
            by_out[i].push((x, y, v));
        }
        let key = |i: usize, x: usize, y: usize, z: usize| ((i * n + x) * n + y) * n + z;
        let mut lhs: HashMap<usize, C64> = HashMap::new();
        let mut rhs: HashMap<usize, C64> = HashMap::new();
        for &(i, j, c, v1) in &nz {
            // lhs[i,(a,b,c)] += m[i,(j,c)] m[j,(a,b)]
            for &(x, y, v2) in &by_out[j] {
                *lhs.entry(key(i, x, y, c)).or_insert(C64::new(0.0, 0.0)) += v1 * v2;
            }
        }
        for &(i, x, j, v1) in &nz {
            // rhs[i,(a,b,c)] += m[i,(a,j)] m[j,(b,c)]
            for &(y, z, v2) in &by_out[j] {
                *rhs.entry(key(i, x, y, z)).or_insert(C64::new(0.0, 0.0)) += v1 * v2;
            }
        }
        let residual = sparse_max_diff(&lhs, &rhs);
        if residual > tol.eps {
            return Err(FrobeniusError::AxiomViolation { axiom: "associativity", residual });
        }
    }

    // unitality: m(u ⊗ 1) = 1 = m(1 ⊗ u)
    {
        let mut left = CMatrix::zeros(n, n);
        let mut right = CMatrix::zeros(n, n);
        for &(i, x, y, v) in &nz {
            left[(i, y)] += v * a.u[(x, 0)];
            right[(i, x)] += v * a.u[(y, 0)];
        }
        let id = CMatrix::identity(n);
        let rl = left.max_abs_diff(&id);
        let rr = right.max_abs_diff(&id);
        if rl.max(rr) > tol.eps {
            return Err(FrobeniusError::AxiomViolation { axiom: "unitality", residual: rl.max(rr) });
        }
    }

    // Frobenius equations: (1 ⊗ m)(m† ⊗ 1) = m† m = (m ⊗ 1)(1 ⊗ m†),
    // all three as operators A⊗A -> A⊗A indexed (x,y ; p,q):
    //   C1[(x,y),(p,q)] = sum_b conj(m[p,(x,b)]) m[y,(b,q)]
    //   C0[(x,y),(p,q)] = sum_i conj(m[i,(x,y)]) m[i,(p,q)]
    //   C2[(x,y),(p,q)] = sum_b m[x,(p,b)] conj(m[q,(b,y)])
    {
        let key = |x: usize, y: usize, p: usize, q: usize| ((x * n + y) * n + p) * n + q;
        let mut by_left: Vec<Vec<(usize, usize, C64)>> = vec![Vec::new(); n]; // b -> (out, right, v) of m[out,(b,right)]
        let mut by_right: Vec<Vec<(usize, usize, C64)>> = vec![Vec::new(); n]; // b -> (out, left, v) of m[out,(left,b)]
        let mut by_out: Vec<Vec<(usize, usize, C64)>> = vec![Vec::new(); n];
        for &(i, x, y, v) in &nz {
            by_left[x].push((i, y, v));
            by_right[y].push((i, x, v));
            by_out[i].push((x, y, v));
        }
        let mut c0: HashMap<usize, C64> = HashMap::new();
        let mut c1: HashMap<usize, C64> = HashMap::new();
        let mut c2: HashMap<usize, C64> = HashMap::new();
        for i in 0..n {
            for &(x, y, v1) in &by_out[i] {
                for &(p, q, v2) in &by_out[i] {
                    *c0.entry(key(x, y, p, q)).or_insert(C64::new(0.0, 0.0)) += v1.conj() * v2;
                }
            }
        }
        for b in 0..n {
            // C1: conj(m[p,(x,b)]) * m[y,(b,q)]
            for &(p, x, v1) in &by_right[b] {
                for &(y, q, v2) in &by_left[b] {
                    *c1.entry(key(x, y, p, q)).or_insert(C64::new(0.0, 0.0)) += v1.conj() * v2;
                }
            }
            // C2: m[x,(p,b)] * conj(m[q,(b,y)])
            for &(x, p, v1) in &by_right[b] {
                for &(q, y, v2) in &by_left[b] {
                    *c2.entry(key(x, y, p, q)).or_insert(C64::new(0.0, 0.0)) += v1 * v2.conj();
                }
            }
        }
        let r1 = sparse_max_diff(&c0, &c1);
        let r2 = sparse_max_diff(&c0, &c2);
        if r1.max(r2) > tol.eps {
            return Err(FrobeniusError::AxiomViolation {
                axiom: "frobenius",
                residual: r1.max(r2),
            });
        }
    }

    // special: m m† = 1
    let special = {
        let mut mmd = CMatrix::zeros(n, n);
        let mut by_pair: HashMap<usize, Vec<(usize, C64)>> = HashMap::new();
        for &(i, x, y, v) in &nz {
            by_pair.entry(x * n + y).or_default().push((i, v));
        }
        for entries in by_pair.values() {
            for &(i, v1) in entries {
                for &(j, v2) in entries {
                    mmd[(i, j)] += v1 * v2.conj();
                }
            }
        }
        mmd.max_abs_diff(&CMatrix::identity(n)) <= tol.eps
    };

    // symmetric: the counit-multiplication cap is swap invariant
    let symmetric = {
        let cap = a.cap();
        let mut residual = 0.0f64;
        for x in 0..n {
            for y in 0..n {
                residual = residual.max((cap[x * n + y] - cap[y * n + x]).norm());
            }
        }
        residual <= tol.eps
    };

    // commutative: m = m ∘ swap
    let commutative = {
        let mut residual = 0.0f64;
        for i in 0..n {
            for x in 0..n {
                for y in 0..n {
                    residual = residual.max((a.m_at(i, x, y) - a.m_at(i, y, x)).norm());
                }
            }
        }
        residual <= tol.eps
    };

    Ok(FrobeniusReport { special, symmetric, commutative })
}

fn sparse_max_diff(a: &HashMap<usize, C64>, b: &HashMap<usize, C64>) -> f64 {
    let zero = C64::new(0.0, 0.0);
    let mut residual = 0.0f64;
    for (k, v) in a {
        residual = residual.max((v - b.get(k).unwrap_or(&zero)).norm());
    }
    for (k, v) in b {
        if !a.contains_key(k) {
            residual = residual.max((v - zero).norm());
        }
    }
    residual
}

/// The classical copy algebra of an orthonormal basis:
/// m(e_i ⊗ e_j) = delta_ij e_i, u = sum_i e_i.
pub fn set_algebra(n: usize) -> FrobeniusAlgebra {
    assert!(n >= 1);
    let mut m = CMatrix::zeros(n, n * n);
    for i in 0..n {
        m[(i, i * n + i)] = C64::new(1.0, 0.0);
    }
    let u = CMatrix::from_fn(n, 1, |_, _| C64::new(1.0, 0.0));
    FrobeniusAlgebra { dim: n, m, u }
}

/// The endomorphism algebra of a d-dimensional Hilbert space on H ⊗ H*,
/// with multiplication scaled by 1/sqrt(d) and unit by sqrt(d) so the
/// algebra is special. Basis index (i,j) = i*d + j.
pub fn endomorphism_algebra(d: usize) -> FrobeniusAlgebra {
    assert!(d >= 1);
    let n = d * d;
    let s = 1.0 / (d as f64).sqrt();
    let mut m = CMatrix::zeros(n, n * n);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                // (i,j) * (j2,k): e_ij e_jk = delta e_ik
                let out = i * d + k;
                let col = (i * d + j) * n + (j * d + k);
                m[(out, col)] = C64::new(s, 0.0);
            }
        }
    }
    let mut u = CMatrix::zeros(n, 1);
    for i in 0..d {
        u[(i * d + i, 0)] = C64::new((d as f64).sqrt(), 0.0);
    }
    FrobeniusAlgebra { dim: n, m, u }
}

/// Twisted group algebra CL^psi with the specialness normalization:
/// g *_psi h = psi(g,h) gh / sqrt(|L|), unit sqrt(|L|) e.
pub fn twisted_group_frobenius(c: &TwoCocycle) -> FrobeniusAlgebra {
    let k = c.order();
    let s = 1.0 / (k as f64).sqrt();
    let mut m = CMatrix::zeros(k, k * k);
    for a in 0..k {
        for b in 0..k {
            let out = c.group.mul(a, b);
            m[(out, a * k + b)] = c.value(a, b) * C64::new(s, 0.0);
        }
    }
    let mut u = CMatrix::zeros(k, 1);
    // u = sqrt(|L|) conj(psi(e,e)) e; psi is normalized so psi(e,e) = 1
    u[(0, 0)] = C64::new((k as f64).sqrt(), 0.0);
    FrobeniusAlgebra { dim: k, m, u }
}

/// Center dimension via the center projector m ∘ swap ∘ m†, cross-checked
/// against the commutant null space.
pub fn center_dimension(a: &FrobeniusAlgebra) -> Result<usize, FrobeniusError> {
    let n = a.dim;
    // projector route: trace of P_Z, P_Z[x,y] = sum_{a,b} m[x,(b,a)] conj(m[y,(a,b)])
    let mut trace = C64::new(0.0, 0.0);
    for x in 0..n {
        for p in 0..n {
            for q in 0..n {
                trace += a.m_at(x, q, p) * a.m_at(x, p, q).conj();
            }
        }
    }
    if trace.im.abs() > 1e-6 || (trace.re - trace.re.round()).abs() > 1e-6 {
        return Err(FrobeniusError::NonIntegerTrace(trace.re));
    }
    let projector = trace.re.round() as usize;

    // commutant route: z with L_z = R_z, i.e. for all k the rows
    // sum_z (m[x,(k,z)] - m[x,(z,k)]) z_z = 0
    let mut rows = CMatrix::zeros(n * n, n);
    for k in 0..n {
        for x in 0..n {
            for z in 0..n {
                rows[(k * n + x, z)] = a.m_at(x, k, z) - a.m_at(x, z, k);
            }
        }
    }
    let commutant = rows.nullspace_dim(1e-9);
    if projector != commutant {
        return Err(FrobeniusError::CenterMismatch { projector, commutant });
    }
    Ok(projector)
}

/// Recover the copyable orthonormal basis of a commutative algebra; in this
/// basis the structure tensors equal `set_algebra(dim)`. Returns the unitary
/// whose columns are the copyable elements.
pub fn copyable_basis(a: &FrobeniusAlgebra, tol: &Tolerance) -> Result<CMatrix, FrobeniusError> {
    let n = a.dim;
    let report = verify_frobenius(a, tol)?;
    if !report.commutative {
        return Err(FrobeniusError::NotCommutative);
    }
    // left multiplication operators; commuting and normal for a commutative
    // C*-algebra, so simultaneously diagonalizable
    let ops: Vec<CMatrix> = (0..n)
        .map(|k| CMatrix::from_fn(n, n, |x, z| a.m_at(x, k, z)))
        .collect();
    let basis = simultaneously_diagonalize(&ops, tol, 0)?;

    // each eigenvector is a copyable element up to a phase fixed by the
    // counit: <u, c> = 1 for copyable c
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let w = basis.column(j);
        let s: C64 = (0..n).map(|i| a.u[(i, 0)].conj() * w[i]).sum();
        if (s.norm() - 1.0).abs() > 1e-6 {
            return Err(FrobeniusError::CopyableFailure(format!(
                "counit pairing has modulus {} at column {j}",
                s.norm()
            )));
        }
        let c: Vec<C64> = w.iter().map(|z| z * s.conj() / C64::new(s.norm_sqr(), 0.0)).collect();
        cols.push(c);
    }
    // deterministic ordering: dominant coordinate first, then entries; for a
    // plain copy algebra this recovers the standard basis in vertex order
    let sort_key = |v: &Vec<C64>| -> (usize, Vec<(i64, i64)>) {
        let mut arg = 0;
        let mut best = -1.0f64;
        for (i, z) in v.iter().enumerate() {
            if z.norm() > best + 1e-9 {
                best = z.norm();
                arg = i;
            }
        }
        (arg, v.iter().map(|z| ((z.re * 1e8).round() as i64, (z.im * 1e8).round() as i64)).collect())
    };
    cols.sort_by_key(sort_key);
    let u = CMatrix::from_columns(n, &cols);

    // verify the copyable equations and the change of basis
    let bound = 10.0 * tol.eps;
    for j in 0..n {
        let c = u.column(j);
        // comultiplicativity: m†c = c ⊗ c, checked as m(c⊗c) = c and |c| = 1
        let mc = a.multiply(&c, &c);
        let diff: f64 =
            mc.iter().zip(&c).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        if diff > bound {
            return Err(FrobeniusError::CopyableFailure(format!(
                "column {j} is not multiplicative (residual {diff:e})"
            )));
        }
        let norm: f64 = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > bound {
            return Err(FrobeniusError::CopyableFailure(format!("column {j} has norm {norm}")));
        }
        // dagger equation: pairing with the cap reproduces the conjugate,
        // sum_a cap[(a,b)] c_a = conj(c_b)
        let cap = a.cap();
        for b in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for (idx, ca) in c.iter().enumerate() {
                acc += cap[idx * n + b] * ca;
            }
            if (acc - c[b].conj()).norm() > bound {
                return Err(FrobeniusError::CopyableFailure(format!(
                    "column {j} fails the dagger equation at coordinate {b}"
                )));
            }
        }
    }
    if !u.is_unitary(bound) {
        return Err(FrobeniusError::CopyableFailure("copyables are not orthonormal".into()));
    }
    Ok(u)
}

// --- quantum graphs ------------------------------------------------------------

/// A quantum graph: a special symmetric dagger Frobenius algebra of vertices
/// together with a self-adjoint quantum adjacency operator. Serializes as
/// the algebra's fields plus `{"adj": <matrix>}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuantumGraph {
    #[serde(flatten)]
    pub algebra: FrobeniusAlgebra,
    pub adj: CMatrix,
}

impl QuantumGraph {
    pub fn dim(&self) -> usize {
        self.algebra.dim
    }
}

/// Verify the three quantum adjacency conditions of a quantum graph:
///   (i)  m (Γ ⊗ Γ) m† = Γ           (Schur-type idempotence)
///   (ii) the Frobenius transpose of Γ equals Γ  (symmetry)
///   (iii) m (Γ ⊗ 1) m† = 1          (reflexivity)
/// In the classical case these reduce to Γ_vw² = Γ_vw, Γ_vw = Γ_wv,
/// and Γ_vv = 1.
pub fn verify_quantum_adjacency(q: &QuantumGraph, tol: &Tolerance) -> Result<(), FrobeniusError> {
    let a = &q.algebra;
    let n = a.dim;
    let g = &q.adj;
    if g.rows() != n || g.cols() != n {
        return Err(FrobeniusError::ShapeMismatch(format!(
            "adjacency is {}x{} on a dim-{n} algebra",
            g.rows(),
            g.cols()
        )));
    }
    if !g.is_self_adjoint(tol.eps) {
        return Err(FrobeniusError::AxiomViolation {
            axiom: "adjacency self-adjointness",
            residual: g.max_abs_diff(&g.dagger()),
        });
    }
    let md = a.m.dagger();
    let bound = 10.0 * tol.eps;

    let schur = a.m.mul(&kron(g, g)).mul(&md);
    let r1 = schur.max_abs_diff(g);
    if r1 > bound {
        return Err(FrobeniusError::AxiomViolation { axiom: "adjacency idempotence", residual: r1 });
    }

    // Frobenius transpose via cup/cap: Γ'[b,a] = sum_{c,e} cup[(b,c)] Γ[e,c] cap[(e,a)]
    let cup = a.cup();
    let cap = a.cap();
    let cup_m = CMatrix::from_fn(n, n, |b, c| cup[b * n + c]);
    let cap_m = CMatrix::from_fn(n, n, |e, x| cap[e * n + x]);
    let transpose = cup_m.mul(&g.transpose()).mul(&cap_m);
    let r2 = transpose.max_abs_diff(g);
    if r2 > bound {
        return Err(FrobeniusError::AxiomViolation { axiom: "adjacency symmetry", residual: r2 });
    }

    let refl = a.m.mul(&kron(g, &CMatrix::identity(n))).mul(&md);
    let r3 = refl.max_abs_diff(&CMatrix::identity(n));
    if r3 > bound {
        return Err(FrobeniusError::AxiomViolation { axiom: "adjacency reflexivity", residual: r3 });
    }
    Ok(())
}

/// Lift a classical graph to a quantum graph on its copy algebra: the
/// quantum adjacency is the reflexive adjacency matrix (adjacency + 1).
pub fn quantum_from_classical(g: &ClassicalGraph) -> QuantumGraph {
    let n = g.n();
    let adj = CMatrix::from_fn(n, n, |i, j| {
        if i == j || g.has_edge(i, j) {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    QuantumGraph { algebra: set_algebra(n), adj }
}

/// Extract the classical graph from a quantum graph on a commutative
/// algebra: express the adjacency in the copyable basis, snap to Boolean
/// entries with unit diagonal, and drop the diagonal.
pub fn classical_from_quantum(
    q: &QuantumGraph,
    tol: &Tolerance,
) -> Result<ClassicalGraph, FrobeniusError> {
    let u = copyable_basis(&q.algebra, tol)?;
    let n = q.dim();
    let g = u.dagger().mul(&q.adj).mul(&u);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = g[(i, j)];
            let snapped = v.re.round();
            if v.im.abs() > 1e-6 || (v.re - snapped).abs() > 1e-6 || !(0.0..=1.0).contains(&snapped)
            {
                return Err(FrobeniusError::NotBooleanAdjacency(i, j));
            }
            if i == j && snapped != 1.0 {
                return Err(FrobeniusError::NotBooleanAdjacency(i, j));
            }
            if i < j && snapped == 1.0 {
                edges.push((i, j));
            }
        }
    }
    ClassicalGraph::new(n, &edges)
        .map_err(|e| FrobeniusError::ShapeMismatch(format!("extracted graph invalid: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycles::test_support::{pauli_cocycle_from_matrices, pauli_squared};
    use crate::cocycles::TwoCocycle;
    use crate::numerics::{random_matrix, seeded_rng};
    use crate::permgroups::AbstractGroup;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn set_algebra_axioms() {
        for n in [1usize, 2, 5, 16, 64] {
            let a = set_algebra(n);
            let rep = verify_frobenius(&a, &tol()).unwrap();
            assert!(rep.special && rep.symmetric && rep.commutative);
            assert_eq!(center_dimension(&a).unwrap(), n);
        }
    }

    #[test]
    fn endomorphism_algebra_axioms() {
        for d in [1usize, 2, 4, 8] {
            let a = endomorphism_algebra(d);
            let rep = verify_frobenius(&a, &tol()).unwrap();
            assert!(rep.special && rep.symmetric);
            assert_eq!(rep.commutative, d == 1);
            assert_eq!(center_dimension(&a).unwrap(), 1);
        }
    }

    #[test]
    fn twisted_algebra_axioms_and_centers() {
        // plain group algebra of Z2: commutative, center dim 2
        let z2 = TwoCocycle::trivial(AbstractGroup::cyclic(2));
        let a = twisted_group_frobenius(&z2);
        let rep = verify_frobenius(&a, &tol()).unwrap();
        assert!(rep.special && rep.symmetric && rep.commutative);
        assert_eq!(center_dimension(&a).unwrap(), 2);

        // Pauli-twisted Z2^2: simple
        let p = twisted_group_frobenius(&pauli_cocycle_from_matrices());
        let rep = verify_frobenius(&p, &tol()).unwrap();
        assert!(rep.special && rep.symmetric && !rep.commutative);
        assert_eq!(center_dimension(&p).unwrap(), 1);

        // Z2^4 with psi_{P^2}: simple, dim 16
        let pp = twisted_group_frobenius(&pauli_squared());
        verify_frobenius(&pp, &tol()).unwrap();
        assert_eq!(center_dimension(&pp).unwrap(), 1);

        // unit vector per the display: sqrt(|L|) e
        assert_eq!(p.u[(0, 0)], C64::new(2.0, 0.0));
    }

    #[test]
    fn twisted_algebra_dim64_axioms() {
        // Z2^6 with the triple Pauli cocycle: the largest acceptance algebra
        let p = pauli_cocycle_from_matrices();
        let g64 = pauli_squared().group.direct_product(&p.group);
        let mut table = vec![0u32; 64 * 64];
        let ps = pauli_squared();
        for a1 in 0..16usize {
            for b1 in 0..4usize {
                for a2 in 0..16usize {
                    for b2 in 0..4usize {
                        let i = a1 * 4 + b1;
                        let j = a2 * 4 + b2;
                        table[i * 64 + j] = (ps.exponent(a1, a2) + p.exponent(b1, b2)) % 4;
                    }
                }
            }
        }
        let c = TwoCocycle::new(g64, 4, table).unwrap();
        let alg = twisted_group_frobenius(&c);
        let rep = verify_frobenius(&alg, &tol()).unwrap();
        assert!(rep.special && rep.symmetric && !rep.commutative);
        assert_eq!(center_dimension(&alg).unwrap(), 1);
    }

    #[test]
    fn perturbed_multiplication_is_rejected() {
        let mut a = set_algebra(3);
        a.m[(0, 4)] += C64::new(1e-3, 0.0);
        assert!(matches!(
            verify_frobenius(&a, &tol()),
            Err(FrobeniusError::AxiomViolation { .. })
        ));
    }

    #[test]
    fn set_algebra_small_structure() {
        let a = set_algebra(2);
        assert_eq!(a.m_at(0, 0, 0), C64::new(1.0, 0.0));
        assert_eq!(a.m_at(1, 1, 1), C64::new(1.0, 0.0));
        assert_eq!(a.m_at(0, 0, 1), C64::new(0.0, 0.0));
        assert_eq!(a.u[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(a.u[(1, 0)], C64::new(1.0, 0.0));
    }

    /// Conjugate an algebra by a unitary: m' = U† m (U ⊗ U), u' = U† u.
    fn conjugate(a: &FrobeniusAlgebra, u: &CMatrix) -> FrobeniusAlgebra {
        let m = u.dagger().mul(&a.m).mul(&kron(u, u));
        let uu = u.dagger().mul(&a.u);
        FrobeniusAlgebra { dim: a.dim, m, u: uu }
    }

    fn random_unitary(n: usize, seed: u64) -> CMatrix {
        // Gram-Schmidt on a random matrix
        let mut rng = seeded_rng(seed);
        let a = random_matrix(n, n, &mut rng);
        let mut cols: Vec<Vec<C64>> = Vec::new();
        for j in 0..n {
            let mut v = a.column(j);
            for c in &cols {
                let ip: C64 = c.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= ip * ci;
                }
            }
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for vi in v.iter_mut() {
                *vi /= C64::new(norm, 0.0);
            }
            cols.push(v);
        }
        CMatrix::from_columns(n, &cols)
    }

    #[test]
    fn center_dimension_is_conjugation_invariant() {
        for (seed, alg) in [
            (1u64, set_algebra(4)),
            (2, endomorphism_algebra(2)),
            (3, twisted_group_frobenius(&pauli_cocycle_from_matrices())),
        ]
        .into_iter()
        .enumerate()
        .map(|(i, (s, a))| (s + i as u64, a))
        {
            let u = random_unitary(alg.dim, seed);
            let conj = conjugate(&alg, &u);
            verify_frobenius(&conj, &tol()).unwrap();
            assert_eq!(center_dimension(&conj).unwrap(), center_dimension(&alg).unwrap());
        }
    }

    #[test]
    fn copyable_basis_of_set_algebra_is_standard() {
        let a = set_algebra(4);
        let u = copyable_basis(&a, &tol()).unwrap();
        // columns are standard basis vectors (in some order)
        for j in 0..4 {
            let col = u.column(j);
            assert_eq!(col.iter().filter(|z| z.norm() > 0.5).count(), 1);
        }
    }

    #[test]
    fn copyable_basis_recovers_conjugated_frame() {
        let n = 5;
        let a = set_algebra(n);
        let w = random_unitary(n, 42);
        let conj = conjugate(&a, &w.dagger()); // basis vectors become w e_i
        let u = copyable_basis(&conj, &tol()).unwrap();
        // the copyable set must be exactly {w e_i} (as a set of vectors)
        for j in 0..n {
            let c = u.column(j);
            let mut best = 0.0f64;
            for i in 0..n {
                let overlap: C64 =
                    (0..n).map(|r| w[(r, i)].conj() * c[r]).sum();
                best = best.max(overlap.norm());
            }
            assert!((best - 1.0).abs() < 1e-7, "column {j} overlap {best}");
        }
        // and in that basis the structure tensors are the copy algebra
        let m2 = u.dagger().mul(&conj.m).mul(&kron(&u, &u));
        assert!(m2.approx_eq(&set_algebra(n).m, 1e-7));
    }

    #[test]
    fn copyable_basis_rejects_noncommutative() {
        let a = endomorphism_algebra(2);
        assert!(matches!(copyable_basis(&a, &tol()), Err(FrobeniusError::NotCommutative)));
    }

    #[test]
    fn classical_quantum_round_trip() {
        for g in [
            ClassicalGraph::cycle(5),
            ClassicalGraph::complete(3),
            ClassicalGraph::new(4, &[]).unwrap(),
        ] {
            let q = quantum_from_classical(&g);
            verify_quantum_adjacency(&q, &tol()).unwrap();
            let back = classical_from_quantum(&q, &tol()).unwrap();
            assert!(crate::graphs::are_isomorphic(&g, &back).is_some());
        }
    }

    #[test]
    fn quantum_from_classical_shapes() {
        let c5 = ClassicalGraph::cycle(5);
        let q = quantum_from_classical(&c5);
        // circulant first row (1,1,0,0,1)
        let want = [1.0, 1.0, 0.0, 0.0, 1.0];
        for (j, w) in want.iter().enumerate() {
            assert_eq!(q.adj[(0, j)].re, *w);
        }
        let empty = quantum_from_classical(&ClassicalGraph::new(3, &[]).unwrap());
        assert!(empty.adj.approx_eq(&CMatrix::identity(3), 0.0));
        let k3 = quantum_from_classical(&ClassicalGraph::complete(3));
        assert!(k3.adj.approx_eq(&CMatrix::from_real(3, 3, &[1.0; 9]), 0.0));
    }

    #[test]
    fn algebra_and_quantum_graph_json_schema() {
        let a = set_algebra(2);
        let text = serde_json::to_string(&a).unwrap();
        // the unit serializes as a plain list of [re, im] pairs
        assert!(text.contains("\"u\":[[1.0,0.0],[1.0,0.0]]"), "{text}");
        let back: FrobeniusAlgebra = serde_json::from_str(&text).unwrap();
        assert!(back.m.approx_eq(&a.m, 0.0));
        // quantum graphs flatten the algebra fields alongside "adj"
        let q = quantum_from_classical(&ClassicalGraph::cycle(3));
        let qtext = serde_json::to_string(&q).unwrap();
        assert!(qtext.contains("\"dim\":3") && qtext.contains("\"adj\""), "{qtext}");
        let qback: QuantumGraph = serde_json::from_str(&qtext).unwrap();
        assert!(qback.adj.approx_eq(&q.adj, 0.0));
        verify_quantum_adjacency(&qback, &tol()).unwrap();
    }

    #[test]
    fn adjacency_violations_are_caught() {
        let g = ClassicalGraph::cycle(4);
        let mut q = quantum_from_classical(&g);
        q.adj[(0, 0)] = C64::new(0.0, 0.0); // break reflexivity
        assert!(matches!(
            verify_quantum_adjacency(&q, &tol()),
            Err(FrobeniusError::AxiomViolation { .. })
        ));
    }
}
