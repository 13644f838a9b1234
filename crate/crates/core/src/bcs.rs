//! Linear binary constraint systems, their graphs, classical and quantum
//! solutions, and the Arkhipov graph pairs.
//!
//! Constraints are written multiplicatively: each constraint requires the
//! product of its +/-1 variables to equal a right-hand side in {+1, -1}.

use crate::graphs::ClassicalGraph;
use crate::numerics::{kron, CMatrix, Tolerance, C64};
use crate::permgroups::Permutation;
use crate::qiso::Ppm;
use crate::ueb::UnitaryErrorBasis;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BcsError {
    #[error("constraint {0} is malformed: {1}")]
    BadConstraint(usize, String),
    #[error("constraint {0} has no local solution")]
    UnsatisfiableConstraint(usize),
    #[error("solution enumeration too large: {0} free variables")]
    TooLarge(usize),
    #[error("quantum solution invalid: {0}")]
    InvalidQuantumSolution(String),
    #[error("operator conjugation by basis element {0} is not a sign flip of operator {1}")]
    NotSignCovariant(usize, usize),
    #[error("only scalars may commute with the full operator family")]
    NotIrreducible,
    #[error("vertex {0} out of range")]
    BadVertex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub vars: Vec<usize>,
    pub rhs: i8, // +1 or -1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryConstraintSystem {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
}

/// A vertex of a BCS graph: constraint index plus the local +/-1 assignment
/// on the constraint's sorted variable list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexLabel {
    pub constraint: usize,
    pub assignment: Vec<i8>,
}

impl BinaryConstraintSystem {
    pub fn new(num_vars: usize, constraints: Vec<Constraint>) -> Result<Self, BcsError> {
        let mut cs = Vec::with_capacity(constraints.len());
        for (i, c) in constraints.into_iter().enumerate() {
            if c.vars.is_empty() {
                return Err(BcsError::BadConstraint(i, "empty variable set".into()));
            }
            if c.rhs != 1 && c.rhs != -1 {
                return Err(BcsError::BadConstraint(i, format!("rhs {} not +/-1", c.rhs)));
            }
            let mut vars = c.vars.clone();
            vars.sort_unstable();
            vars.dedup();
            if vars.len() != c.vars.len() {
                return Err(BcsError::BadConstraint(i, "repeated variable".into()));
            }
            if let Some(&v) = vars.iter().find(|&&v| v >= num_vars) {
                return Err(BcsError::BadConstraint(i, format!("variable {v} out of range")));
            }
            cs.push(Constraint { vars, rhs: c.rhs });
        }
        Ok(BinaryConstraintSystem { num_vars, constraints: cs })
    }

    /// Local solutions of one constraint in lexicographic order of the
    /// sign pattern on the sorted variable list (+1 before -1).
    pub fn local_solutions(&self, l: usize) -> Vec<Vec<i8>> {
        let c = &self.constraints[l];
        let k = c.vars.len();
        let mut out = Vec::new();
        for mask in 0..(1u32 << k) {
            let signs: Vec<i8> =
                (0..k).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let prod: i32 = signs.iter().map(|&s| s as i32).product();
            if prod == c.rhs as i32 {
                out.push(signs);
            }
        }
        // ascending bitmask order = lexicographic with +1 first when read
        // most-significant-bit-last; sort by the sign tuple itself instead
        out.sort_by_key(|signs| signs.iter().map(|&s| if s == 1 { 0u8 } else { 1 }).collect::<Vec<_>>());
        out
    }
}

/// Set every right-hand side to +1.
pub fn homogenise(f: &BinaryConstraintSystem) -> BinaryConstraintSystem {
    BinaryConstraintSystem {
        num_vars: f.num_vars,
        constraints: f
            .constraints
            .iter()
            .map(|c| Constraint { vars: c.vars.clone(), rhs: 1 })
            .collect(),
    }
}

/// The BCS graph: one vertex per (constraint, local solution), an edge
/// whenever two local assignments are inconsistent. Two distinct
/// assignments of the same constraint always conflict.
pub fn bcs_graph(
    f: &BinaryConstraintSystem,
) -> Result<(ClassicalGraph, Vec<VertexLabel>), BcsError> {
    let mut labels: Vec<VertexLabel> = Vec::new();
    for l in 0..f.constraints.len() {
        let sols = f.local_solutions(l);
        if sols.is_empty() {
            return Err(BcsError::UnsatisfiableConstraint(l));
        }
        for s in sols {
            labels.push(VertexLabel { constraint: l, assignment: s });
        }
    }
    let n = labels.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (&labels[i], &labels[j]);
            let conflict = if a.constraint == b.constraint {
                true // distinct local solutions of one constraint
            } else {
                let va = &f.constraints[a.constraint].vars;
                let vb = &f.constraints[b.constraint].vars;
                let mut clash = false;
                for (pa, &x) in va.iter().enumerate() {
                    if let Ok(pb) = vb.binary_search(&x) {
                        if a.assignment[pa] != b.assignment[pb] {
                            clash = true;
                            break;
                        }
                    }
                }
                clash
            };
            if conflict {
                edges.push((i, j));
            }
        }
    }
    let g = ClassicalGraph::new(n, &edges)
        .map_err(|e| BcsError::BadConstraint(0, format!("internal graph error: {e}")))?;
    Ok((g, labels))
}

/// All global +/-1 solutions via F2 Gaussian elimination (our systems are
/// always parity-linear). Errors out if the solution set is too large to
/// enumerate.
pub fn classical_solutions(f: &BinaryConstraintSystem) -> Result<Vec<Vec<i8>>, BcsError> {
    let m = f.num_vars;
    // rows as bitmasks over variables plus an rhs bit (x_i in {0,1}, with
    // -1 mapped to 1)
    let mut rows: Vec<(u128, u8)> = Vec::new();
    if m > 120 {
        return Err(BcsError::TooLarge(m));
    }
    for c in &f.constraints {
        let mut mask = 0u128;
        for &v in &c.vars {
            mask |= 1 << v;
        }
        rows.push((mask, if c.rhs == 1 { 0 } else { 1 }));
    }
    // forward elimination
    let mut pivots: Vec<(usize, u128, u8)> = Vec::new(); // (pivot var, row, rhs)
    for col in 0..m {
        let Some(idx) = rows.iter().position(|&(r, _)| r >> col & 1 == 1) else {
            continue;
        };
        let (prow, prhs) = rows.swap_remove(idx);
        for (r, b) in rows.iter_mut() {
            if *r >> col & 1 == 1 {
                *r ^= prow;
                *b ^= prhs;
            }
        }
        pivots.push((col, prow, prhs));
    }
    if rows.iter().any(|&(r, b)| r == 0 && b == 1) {
        return Ok(Vec::new()); // inconsistent
    }
    // back substitution to reduced echelon form
    for i in (0..pivots.len()).rev() {
        let (col, prow, prhs) = pivots[i];
        for j in 0..i {
            if pivots[j].1 >> col & 1 == 1 {
                pivots[j].1 ^= prow;
                pivots[j].2 ^= prhs;
            }
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(c, _, _)| c).collect();
    let free_cols: Vec<usize> = (0..m).filter(|c| !pivot_cols.contains(c)).collect();
    if free_cols.len() > 20 {
        return Err(BcsError::TooLarge(free_cols.len()));
    }
    let mut out = Vec::with_capacity(1 << free_cols.len());
    for assign in 0..(1u32 << free_cols.len()) {
        let mut x = vec![0u8; m];
        for (i, &c) in free_cols.iter().enumerate() {
            x[c] = (assign >> i & 1) as u8;
        }
        for &(col, row, rhs) in pivots.iter() {
            let mut acc = rhs;
            for c in (col + 1)..m {
                if row >> c & 1 == 1 {
                    acc ^= x[c];
                }
            }
            x[col] = acc;
        }
        out.push(x.iter().map(|&b| if b == 0 { 1i8 } else { -1 }).collect());
    }
    out.sort();
    Ok(out)
}

/// Self-adjoint +/-1-eigenvalue operators solving a constraint system.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuantumSolution {
    pub dim: usize,
    pub operators: Vec<CMatrix>,
}

/// Check the quantum solution invariants against a constraint system:
/// involutions, commuting within each constraint, and constraint products
/// equal to rhs times the identity.
pub fn verify_quantum_solution(
    f: &BinaryConstraintSystem,
    q: &QuantumSolution,
    tol: &Tolerance,
) -> Result<(), BcsError> {
    if q.operators.len() != f.num_vars {
        return Err(BcsError::InvalidQuantumSolution(format!(
            "{} operators for {} variables",
            q.operators.len(),
            f.num_vars
        )));
    }
    let d = q.dim;
    let id = CMatrix::identity(d);
    for (i, x) in q.operators.iter().enumerate() {
        if x.rows() != d || x.cols() != d {
            return Err(BcsError::InvalidQuantumSolution(format!("operator {i} has wrong shape")));
        }
        if !x.is_self_adjoint(tol.eps) {
            return Err(BcsError::InvalidQuantumSolution(format!("operator {i} not self-adjoint")));
        }
        if x.mul(x).max_abs_diff(&id) > 10.0 * tol.eps {
            return Err(BcsError::InvalidQuantumSolution(format!("operator {i} not an involution")));
        }
    }
    for (l, c) in f.constraints.iter().enumerate() {
        for (ai, &a) in c.vars.iter().enumerate() {
            for &b in c.vars.iter().skip(ai + 1) {
                let (xa, xb) = (&q.operators[a], &q.operators[b]);
                if xa.mul(xb).max_abs_diff(&xb.mul(xa)) > 10.0 * tol.eps {
                    return Err(BcsError::InvalidQuantumSolution(format!(
                        "operators {a} and {b} of constraint {l} do not commute"
                    )));
                }
            }
        }
        let mut prod = CMatrix::identity(d);
        for &v in &c.vars {
            prod = prod.mul(&q.operators[v]);
        }
        let want = id.scale(C64::new(c.rhs as f64, 0.0));
        if prod.max_abs_diff(&want) > 10.0 * tol.eps {
            return Err(BcsError::InvalidQuantumSolution(format!(
                "constraint {l} product differs from {}·1",
                c.rhs
            )));
        }
    }
    Ok(())
}

/// PPM from the BCS graph of `f` to the BCS graph of its homogenisation,
/// built from joint eigenprojectors of the commuting constraint operators:
///   P_{(C_k,f),(C_l,g)} = delta_{k,l} Q_{(C_l, f*g)}.
pub fn quantum_solution_ppm(
    f_inhom: &BinaryConstraintSystem,
    q: &QuantumSolution,
    tol: &Tolerance,
) -> Result<(Ppm, ClassicalGraph, ClassicalGraph), BcsError> {
    verify_quantum_solution(f_inhom, q, tol)?;
    let hom = homogenise(f_inhom);
    let (src_graph, src_labels) = bcs_graph(f_inhom)?;
    let (tgt_graph, tgt_labels) = bcs_graph(&hom)?;
    let d = q.dim;
    let n = src_labels.len();
    if tgt_labels.len() != n {
        return Err(BcsError::InvalidQuantumSolution(format!(
            "graph sizes differ: {} vs {}",
            n,
            tgt_labels.len()
        )));
    }
    // joint eigenprojector onto eigenvalues s_i of the commuting family
    let joint_projector = |l: usize, signs: &[i8]| -> CMatrix {
        let c = &f_inhom.constraints[l];
        let mut p = CMatrix::identity(d);
        for (i, &v) in c.vars.iter().enumerate() {
            let x = &q.operators[v];
            // (1 + s X)/2
            let half = CMatrix::identity(d)
                .add(&x.scale(C64::new(signs[i] as f64, 0.0)))
                .scale(C64::new(0.5, 0.0));
            p = p.mul(&half);
        }
        p
    };
    let zero = CMatrix::zeros(d, d);
    let mut blocks = vec![vec![zero; n]; n];
    for (i, a) in src_labels.iter().enumerate() {
        for (j, b) in tgt_labels.iter().enumerate() {
            if a.constraint != b.constraint {
                continue;
            }
            let fg: Vec<i8> =
                a.assignment.iter().zip(&b.assignment).map(|(&x, &y)| x * y).collect();
            blocks[i][j] = joint_projector(a.constraint, &fg);
        }
    }
    let ppm = Ppm { d, n, blocks };
    crate::qiso::verify_ppm(&ppm, &src_graph, &tgt_graph, tol)
        .map_err(|e| BcsError::InvalidQuantumSolution(format!("PPM verification failed: {e}")))?;
    Ok((ppm, src_graph, tgt_graph))
}

/// Map error basis elements to automorphisms of the homogeneous BCS graph
/// via conjugation signs: U_a† X_i U_a = p_i^a X_i. Returns the permutation
/// realization indexed like the error basis group, checking injectivity.
pub fn solution_signs_to_automorphisms(
    f: &BinaryConstraintSystem,
    q: &QuantumSolution,
    u: &UnitaryErrorBasis,
    tol: &Tolerance,
) -> Result<Vec<Permutation>, BcsError> {
    let d = q.dim;
    if u.dim != d {
        return Err(BcsError::InvalidQuantumSolution(format!(
            "basis dimension {} differs from solution dimension {d}",
            u.dim
        )));
    }
    // irreducibility: only scalars commute with every X_i
    {
        let mut rows = CMatrix::zeros(f.num_vars * d * d, d * d);
        for (i, x) in q.operators.iter().enumerate() {
            // [A, X_i] = 0 rows: sum over A entries
            for r in 0..d {
                for c in 0..d {
                    // (A X - X A)[r,c] = sum_k A[r,k] X[k,c] - X[r,k] A[k,c]
                    for kk in 0..d {
                        rows[((i * d + r) * d + c, r * d + kk)] += x[(kk, c)];
                        rows[((i * d + r) * d + c, kk * d + c)] -= x[(r, kk)];
                    }
                }
            }
        }
        if rows.nullspace_dim(1e-9) != 1 {
            return Err(BcsError::NotIrreducible);
        }
    }
    let hom = homogenise(f);
    let (hom_graph, labels) = bcs_graph(&hom)?;
    let n = labels.len();

    let mut perms = Vec::with_capacity(u.matrices.len());
    for (a, ua) in u.matrices.iter().enumerate() {
        // sign pattern of conjugation
        let mut signs = vec![0i8; f.num_vars];
        for (i, x) in q.operators.iter().enumerate() {
            let conj = ua.dagger().mul(x).mul(ua);
            if conj.max_abs_diff(x) <= 10.0 * tol.eps {
                signs[i] = 1;
            } else if conj.max_abs_diff(&x.scale(C64::new(-1.0, 0.0))) <= 10.0 * tol.eps {
                signs[i] = -1;
            } else {
                return Err(BcsError::NotSignCovariant(a, i));
            }
        }
        // vertex map (C_l, f) -> (C_l, p^a|_{S_l} · f)
        let mut images = vec![0usize; n];
        for (i, lbl) in labels.iter().enumerate() {
            let vars = &hom.constraints[lbl.constraint].vars;
            let new_assign: Vec<i8> = lbl
                .assignment
                .iter()
                .zip(vars)
                .map(|(&s, &v)| s * signs[v])
                .collect();
            let j = labels
                .iter()
                .position(|m| m.constraint == lbl.constraint && m.assignment == new_assign)
                .expect("sign flips preserve local solvability");
            images[i] = j;
        }
        let p = Permutation::new(images)
            .map_err(|_| BcsError::InvalidQuantumSolution("sign action not a bijection".into()))?;
        if !hom_graph.is_automorphism(&p) {
            return Err(BcsError::InvalidQuantumSolution(format!(
                "induced map of basis element {a} is not an automorphism"
            )));
        }
        perms.push(p);
    }
    // injectivity
    for i in 0..perms.len() {
        for j in (i + 1)..perms.len() {
            if perms[i] == perms[j] {
                return Err(BcsError::InvalidQuantumSolution(format!(
                    "basis elements {i} and {j} induce the same automorphism"
                )));
            }
        }
    }
    Ok(perms)
}

/// The Arkhipov pair of a connected graph with a marked vertex: variables
/// are edges, constraints are vertex parities; the homogeneous system has
/// every rhs +1 and the inhomogeneous system flips the rhs at the marked
/// vertex.
pub fn arkhipov_pair(
    z: &ClassicalGraph,
    l_star: usize,
) -> Result<(BinaryConstraintSystem, BinaryConstraintSystem, ClassicalGraph, ClassicalGraph), BcsError>
{
    if l_star >= z.n() {
        return Err(BcsError::BadVertex(l_star));
    }
    let edges: Vec<(usize, usize)> = z.edges().to_vec();
    let mut constraints = Vec::new();
    for v in 0..z.n() {
        let vars: Vec<usize> = edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(i, _)| i)
            .collect();
        if vars.is_empty() {
            return Err(BcsError::BadConstraint(v, "isolated vertex".into()));
        }
        constraints.push(Constraint { vars, rhs: 1 });
    }
    let hom = BinaryConstraintSystem::new(edges.len(), constraints)?;
    let mut inhom = hom.clone();
    inhom.constraints[l_star].rhs = -1;
    let (hom_graph, _) = bcs_graph(&hom)?;
    let (inhom_graph, _) = bcs_graph(&inhom)?;
    Ok((hom, inhom, hom_graph, inhom_graph))
}

/// Sidecar JSON mapping each vertex index of a BCS graph to its constraint
/// and local assignment written as a +/- string.
pub fn labels_sidecar_json(labels: &[VertexLabel]) -> String {
    let rows: Vec<serde_json::Value> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let s: String = l.assignment.iter().map(|&v| if v == 1 { '+' } else { '-' }).collect();
            serde_json::json!({"vertex": i, "constraint": l.constraint, "assignment": s})
        })
        .collect();
    serde_json::to_string(&rows).unwrap()
}

// --- built-in quantum solutions ------------------------------------------------

fn sigma_x() -> CMatrix {
    CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

fn sigma_z() -> CMatrix {
    CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

fn sigma_y() -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 1)] = C64::new(0.0, -1.0);
    m[(1, 0)] = C64::new(0.0, 1.0);
    m
}

fn id2() -> CMatrix {
    CMatrix::identity(2)
}

/// The magic square constraint system over the K_{3,3} edge variables:
/// variable (i,j) = cell of a 3x3 grid at index 3i + j; constraints are the
/// three rows then the three columns, all +1 except the middle column.
pub fn magic_square_bcs() -> BinaryConstraintSystem {
    let mut constraints = Vec::new();
    for i in 0..3 {
        constraints.push(Constraint { vars: (0..3).map(|j| 3 * i + j).collect(), rhs: 1 });
    }
    for j in 0..3 {
        constraints.push(Constraint {
            vars: (0..3).map(|i| 3 * i + j).collect(),
            rhs: if j == 1 { -1 } else { 1 },
        });
    }
    BinaryConstraintSystem::new(9, constraints).unwrap()
}

/// The well-known two-qubit operator table solving the inhomogeneous magic
/// square, in row-major cell order.
pub fn magic_square_solution() -> QuantumSolution {
    let table = [
        kron(&id2(), &sigma_z()),
        kron(&sigma_z(), &sigma_z()),
        kron(&sigma_z(), &id2()),
        kron(&sigma_x(), &sigma_z()),
        kron(&sigma_y(), &sigma_y()),
        kron(&sigma_z(), &sigma_x()),
        kron(&sigma_x(), &id2()),
        kron(&sigma_x(), &sigma_x()),
        kron(&id2(), &sigma_x()),
    ];
    QuantumSolution { dim: 4, operators: table.to_vec() }
}

/// Three-qubit Pauli observables on the edges of K_5 (sorted edge order):
/// each vertex constraint multiplies to +1 except vertex 4. The labeling is
/// validated at load time by the quantum solution invariants.
pub fn pentagram_solution() -> QuantumSolution {
    let obs3 = |a: &CMatrix, b: &CMatrix, c: &CMatrix| kron(&kron(a, b), c);
    let x = sigma_x();
    let z = sigma_z();
    let i = id2();
    // K5 edges sorted: (0,1),(0,2),(0,3),(0,4),(1,2),(1,3),(1,4),(2,3),(2,4),(3,4)
    let operators = vec![
        obs3(&x, &i, &i), // {0,1}
        obs3(&i, &x, &i), // {0,2}
        obs3(&i, &i, &x), // {0,3}
        obs3(&x, &x, &x), // {0,4}
        obs3(&i, &i, &z), // {1,2}
        obs3(&i, &z, &i), // {1,3}
        obs3(&x, &z, &z), // {1,4}
        obs3(&z, &i, &i), // {2,3}
        obs3(&z, &x, &z), // {2,4}
        obs3(&z, &z, &x), // {3,4}
    ];
    QuantumSolution { dim: 8, operators }
}

/// Adjust the signs of a quantum solution so the single -1 constraint moves
/// from `from` to `to` along a path in the underlying graph (flipping an
/// edge operator's sign toggles both endpoint products).
pub fn move_inhomogeneity(
    z: &ClassicalGraph,
    q: &QuantumSolution,
    from: usize,
    to: usize,
) -> Result<QuantumSolution, BcsError> {
    if from == to {
        return Ok(q.clone());
    }
    // BFS path from -> to
    let mut prev = vec![usize::MAX; z.n()];
    let mut queue = std::collections::VecDeque::from([from]);
    prev[from] = from;
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for w in z.neighbors(v) {
            if prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    if prev[to] == usize::MAX {
        return Err(BcsError::BadVertex(to));
    }
    let mut ops = q.operators.clone();
    let edges: Vec<(usize, usize)> = z.edges().to_vec();
    let mut v = to;
    while v != from {
        let u = prev[v];
        let e = (u.min(v), u.max(v));
        let idx = edges.iter().position(|&x| x == e).expect("path edge exists");
        ops[idx] = ops[idx].scale(C64::new(-1.0, 0.0));
        v = u;
    }
    Ok(QuantumSolution { dim: q.dim, operators: ops })
}
