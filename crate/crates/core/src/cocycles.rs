//! 2-cocycles on finite groups valued in roots of unity.
//!
//! Cocycle values are exact integers mod N (never floats), so the cocycle
//! identity, the form rho, the Phi sums and cohomology solving all stay in
//! integer arithmetic. Floats only appear when a cocycle is turned into
//! matrices elsewhere.

use crate::numerics::{CMatrix, C64};
use crate::permgroups::{AbstractGroup, GroupError, PermGroup, Permutation, Subgroup};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CocycleError {
    #[error("cocycle table shape does not match group order")]
    ShapeMismatch,
    #[error("cocycle is not normalized at ({0},{1})")]
    NotNormalized(usize, usize),
    #[error("cocycle identity fails at ({0},{1},{2})")]
    CocycleViolation(usize, usize, usize),
    #[error("subset is not a subgroup")]
    NotASubgroup,
    #[error("Phi sum is not a natural number (got {re} + {im}i)")]
    NonIntegerPhi { re: f64, im: f64 },
    #[error("permutation does not conjugate the subgroups")]
    NotConjugating,
    #[error("group is not abelian")]
    NotAbelian,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Root-of-unity valued 2-cocycle on a finite group, stored as an exponent
/// table mod `root_order`: the value at (a,b) is `exp(2*pi*i*table[a][b]/N)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoCocycle {
    pub group: AbstractGroup,
    pub root_order: u32,
    table: Vec<u32>, // k x k exponents, row-major, values in 0..root_order
}

impl TwoCocycle {
    pub fn new(group: AbstractGroup, root_order: u32, table: Vec<u32>) -> Result<Self, CocycleError> {
        let k = group.order();
        if table.len() != k * k || root_order == 0 {
            return Err(CocycleError::ShapeMismatch);
        }
        let c = TwoCocycle {
            group,
            root_order,
            table: table.iter().map(|&t| t % root_order).collect(),
        };
        c.verify()?;
        Ok(c)
    }

    pub fn trivial(group: AbstractGroup) -> Self {
        let k = group.order();
        TwoCocycle { group, root_order: 1, table: vec![0; k * k] }
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    #[inline]
    pub fn exponent(&self, a: usize, b: usize) -> u32 {
        self.table[a * self.group.order() + b]
    }

    pub fn value(&self, a: usize, b: usize) -> C64 {
        root_of_unity(self.exponent(a, b), self.root_order)
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// Normalization and the cocycle identity, exactly over integers mod N.
    pub fn verify(&self) -> Result<(), CocycleError> {
        let k = self.group.order();
        let n = self.root_order;
        for a in 0..k {
            if self.exponent(a, 0) != 0 {
                return Err(CocycleError::NotNormalized(a, 0));
            }
            if self.exponent(0, a) != 0 {
                return Err(CocycleError::NotNormalized(0, a));
            }
        }
        for a in 0..k {
            for b in 0..k {
                let ab = self.group.mul(a, b);
                for c in 0..k {
                    let bc = self.group.mul(b, c);
                    let lhs = (self.exponent(a, b) + self.exponent(ab, c)) % n;
                    let rhs = (self.exponent(b, c) + self.exponent(a, bc)) % n;
                    if lhs != rhs {
                        return Err(CocycleError::CocycleViolation(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    /// Exponent of rho(a,b) = psi(a,b) * conj(psi(a b a^{-1}, a)).
    pub fn rho(&self, a: usize, b: usize) -> u32 {
        let conj = self.group.conjugate(a, b);
        let n = self.root_order;
        (self.exponent(a, b) + n - self.exponent(conj, a)) % n
    }

    /// Rescale the exponent table to a larger compatible root order.
    pub fn rescale(&self, new_order: u32) -> Result<TwoCocycle, CocycleError> {
        if new_order % self.root_order != 0 {
            return Err(CocycleError::ShapeMismatch);
        }
        let f = new_order / self.root_order;
        Ok(TwoCocycle {
            group: self.group.clone(),
            root_order: new_order,
            table: self.table.iter().map(|&t| t * f).collect(),
        })
    }

    /// True iff the twisted group algebra CL^psi has one-dimensional center.
    /// Decided by the complex commutant null space; for abelian groups the
    /// rho-radical gives an exact cross-check and the two must agree.
    pub fn is_nondegenerate(&self) -> bool {
        let dim = self.twisted_center_dim();
        if self.group.is_abelian() {
            let radical_trivial = (1..self.group.order())
                .all(|x| (0..self.group.order()).any(|y| self.rho(x, y) != 0));
            debug_assert_eq!(
                radical_trivial,
                dim == 1,
                "commutant and rho-radical nondegeneracy tests disagree"
            );
            return radical_trivial && dim == 1;
        }
        dim == 1
    }

    /// Center dimension of the twisted group algebra over C.
    ///
    /// z = sum z_g e_g is central iff for all h, u:
    ///   psi(h, h^{-1}u) z_{h^{-1}u} = psi(u h^{-1}, h) z_{u h^{-1}}.
    pub fn twisted_center_dim(&self) -> usize {
        let k = self.group.order();
        let mut rows: Vec<Vec<C64>> = Vec::new();
        for h in 0..k {
            let hinv = self.group.inv(h);
            for u in 0..k {
                let g1 = self.group.mul(hinv, u);
                let g2 = self.group.mul(u, hinv);
                let mut row = vec![C64::new(0.0, 0.0); k];
                row[g1] += root_of_unity(self.exponent(h, g1), self.root_order);
                row[g2] -= root_of_unity(self.exponent(g2, h), self.root_order);
                rows.push(row);
            }
        }
        let m = CMatrix::from_fn(rows.len(), k, |i, j| rows[i][j]);
        m.nullspace_dim(1e-9)
    }

    /// Phi sum over commuting pairs of a subgroup, which must land on a
    /// natural number <= |L|.
    pub fn phi(&self, subgroup: &[usize]) -> Result<u64, CocycleError> {
        if !self.group.is_subgroup(subgroup) {
            return Err(CocycleError::NotASubgroup);
        }
        let mut acc = C64::new(0.0, 0.0);
        for &a in subgroup {
            for &b in subgroup {
                if self.group.commutes(a, b) {
                    acc += root_of_unity(self.rho(a, b), self.root_order);
                }
            }
        }
        if acc.im.abs() > 1e-9 || (acc.re - acc.re.round()).abs() > 1e-6 || acc.re < -1e-6 {
            return Err(CocycleError::NonIntegerPhi { re: acc.re, im: acc.im });
        }
        Ok(acc.re.round() as u64)
    }

    /// Orthogonal complement S^perp = {g : rho(g,a) = 1 for all a in Z_g ∩ S}.
    pub fn orthogonal_complement(&self, s: &[usize]) -> Vec<usize> {
        let sset: BTreeSet<usize> = s.iter().copied().collect();
        (0..self.group.order())
            .filter(|&g| {
                self.group
                    .centralizer_indices(g)
                    .into_iter()
                    .filter(|a| sset.contains(a))
                    .all(|a| self.rho(g, a) == 0)
            })
            .collect()
    }

    /// Coisotropy of a subgroup: S^perp ⊆ S. Returns the verdict together
    /// with the computed complement as a witness.
    pub fn is_coisotropic(&self, s: &[usize]) -> (bool, Vec<usize>) {
        let perp = self.orthogonal_complement(s);
        let sset: BTreeSet<usize> = s.iter().copied().collect();
        (perp.iter().all(|g| sset.contains(g)), perp)
    }
}

pub fn root_of_unity(exponent: u32, order: u32) -> C64 {
    let e = exponent % order;
    // quarter turns are exact; everything downstream of Pauli-type cocycles
    // stays integer-clean this way
    if 4 * e % order == 0 {
        return match 4 * e / order {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    let theta = 2.0 * std::f64::consts::PI * (e as f64) / (order as f64);
    C64::new(theta.cos(), theta.sin())
}

// --- cohomology --------------------------------------------------------------

/// A 1-cochain beta: L -> Z_N with delta(beta)(a,b) = beta(a)+beta(b)-beta(ab).
pub type Coboundary = Vec<u32>;

/// Decide whether two cocycles on the same group are cohomologous; returns
/// a witness coboundary if so. Solves the integer linear system
/// delta(beta) = c2 - c1 (mod N) by Smith normal form.
pub fn cohomologous(c1: &TwoCocycle, c2: &TwoCocycle) -> Option<Coboundary> {
    if c1.group != c2.group {
        return None;
    }
    let n = lcm(c1.root_order as i64, c2.root_order as i64) as u32;
    let a = c1.rescale(n).expect("lcm is compatible");
    let b = c2.rescale(n).expect("lcm is compatible");
    let k = a.group.order();

    // unknowns beta(1..k-1); beta(identity) = 0 is forced by normalization
    let unknowns = k - 1;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut rhs: Vec<i64> = Vec::new();
    for x in 0..k {
        for y in 0..k {
            let mut row = vec![0i64; unknowns];
            let mut add = |g: usize, c: i64| {
                if g != 0 {
                    row[g - 1] += c;
                }
            };
            add(x, 1);
            add(y, 1);
            add(a.group.mul(x, y), -1);
            rows.push(row);
            rhs.push(b.exponent(x, y) as i64 - a.exponent(x, y) as i64);
        }
    }
    let beta_tail = solve_mod(&rows, &rhs, n as i64)?;
    let mut beta: Coboundary = vec![0; k];
    for (i, &v) in beta_tail.iter().enumerate() {
        beta[i + 1] = v.rem_euclid(n as i64) as u32;
    }
    // verify the witness
    for x in 0..k {
        for y in 0..k {
            let delta = (beta[x] as i64 + beta[y] as i64 - beta[a.group.mul(x, y)] as i64)
                .rem_euclid(n as i64) as u32;
            let want = (b.exponent(x, y) + n - a.exponent(x, y)) % n;
            if delta != want {
                return None;
            }
        }
    }
    Some(beta)
}

/// Apply a coboundary: c'(a,b) = c(a,b) + beta(a) + beta(b) - beta(ab).
pub fn twist_by_coboundary(c: &TwoCocycle, beta: &[u32]) -> TwoCocycle {
    let k = c.group.order();
    let n = c.root_order as i64;
    let mut table = vec![0u32; k * k];
    for a in 0..k {
        for b in 0..k {
            let v = c.exponent(a, b) as i64 + beta[a] as i64 + beta[b] as i64
                - beta[c.group.mul(a, b)] as i64;
            table[a * k + b] = v.rem_euclid(n) as u32;
        }
    }
    TwoCocycle::new(c.group.clone(), c.root_order, table).expect("coboundary twist stays a cocycle")
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

/// Solve A x = r (mod n) over the integers via Smith normal form,
/// returning one solution if any exists.
fn solve_mod(a_rows: &[Vec<i64>], rhs: &[i64], n: i64) -> Option<Vec<i64>> {
    let m = a_rows.len();
    if m == 0 {
        return Some(Vec::new());
    }
    let cols = a_rows[0].len();
    if cols == 0 {
        return if rhs.iter().all(|&r| r.rem_euclid(n) == 0) { Some(Vec::new()) } else { None };
    }
    // D = U A V with U, V unimodular; track U applied to rhs, and V
    let mut a: Vec<Vec<i128>> =
        a_rows.iter().map(|row| row.iter().map(|&x| x as i128).collect()).collect();
    let mut u_rhs: Vec<i128> = rhs.iter().map(|&x| x as i128).collect();
    let mut v: Vec<Vec<i128>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { 1 } else { 0 }).collect())
        .collect();

    let rank_bound = m.min(cols);
    for t in 0..rank_bound {
        // pivot: smallest nonzero |entry| in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        let mut best = i128::MAX;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &val) in row.iter().enumerate().skip(t) {
                let val = val.abs();
                if val != 0 && val < best {
                    best = val;
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        u_rhs.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        // clear column and row t, re-pivoting on remainders until clean
        loop {
            let mut dirty = false;
            for i in (t + 1)..m {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(a[t][t]);
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                    u_rhs[i] -= q * u_rhs[t];
                    if a[i][t] != 0 {
                        a.swap(t, i);
                        u_rhs.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in (t + 1)..cols {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(a[t][t]);
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    if a[t][j] != 0 {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                        for row in v.iter_mut() {
                            row.swap(t, j);
                        }
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
    }

    // solve d_t y_t = u_rhs_t (mod n)
    let mut y = vec![0i128; cols];
    let n128 = n as i128;
    for t in 0..m.max(cols) {
        let d = if t < rank_bound && t < cols { a[t][t] } else { 0 };
        let r = if t < m { u_rhs[t].rem_euclid(n128) } else { 0 };
        if t < cols {
            // solve d y ≡ r (mod n); gcd(0, n) = n covers diagonal entries
            // that vanish mod n
            let g = gcd128(d.rem_euclid(n128), n128);
            if r % g != 0 {
                return None;
            }
            let dd = d.rem_euclid(n128) / g;
            let rr = r / g;
            let nn = n128 / g;
            if nn > 1 {
                let inv = mod_inverse(dd.rem_euclid(nn), nn)?;
                y[t] = (rr * inv).rem_euclid(nn);
            }
        } else if r != 0 {
            return None;
        }
    }
    // x = V y
    let x: Vec<i64> = (0..cols)
        .map(|i| {
            let s: i128 = (0..cols).map(|j| v[i][j] * y[j]).sum();
            s.rem_euclid(n128) as i64
        })
        .collect();
    Some(x)
}

fn gcd128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd128(b, a % b)
    }
}

fn mod_inverse(a: i128, n: i128) -> Option<i128> {
    if n == 1 {
        return Some(0);
    }
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (n, a.rem_euclid(n));
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(n))
}

// --- central type subgroups ----------------------------------------------------

/// A central type subgroup: a permutation subgroup with a compatible
/// abstract table, a 2-cocycle on it, and its verified nondegeneracy flag.
/// `perms[i]` realizes abstract element `i`.
#[derive(Debug, Clone)]
pub struct CentralTypeSubgroup {
    pub group: AbstractGroup,
    pub perms: Vec<Permutation>,
    pub psi: TwoCocycle,
    pub nondegenerate: bool,
}

impl CentralTypeSubgroup {
    pub fn new(
        group: AbstractGroup,
        perms: Vec<Permutation>,
        psi: TwoCocycle,
    ) -> Result<Self, CocycleError> {
        if psi.group != group || perms.len() != group.order() {
            return Err(CocycleError::ShapeMismatch);
        }
        if !perms[0].is_identity() {
            return Err(CocycleError::ShapeMismatch);
        }
        let root = (group.order() as f64).sqrt().round() as usize;
        if root * root != group.order() {
            return Err(CocycleError::ShapeMismatch);
        }
        // the permutation realization must be a faithful homomorphism
        let mut seen = BTreeSet::new();
        for (i, p) in perms.iter().enumerate() {
            if !seen.insert(p.clone()) {
                return Err(CocycleError::ShapeMismatch);
            }
            for (j, q) in perms.iter().enumerate() {
                if perms[group.mul(i, j)] != p.compose(q) {
                    return Err(CocycleError::ShapeMismatch);
                }
            }
        }
        psi.verify()?;
        let nondegenerate = psi.is_nondegenerate();
        Ok(CentralTypeSubgroup { group, perms, psi, nondegenerate })
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn subgroup(&self) -> Subgroup {
        Subgroup::new(self.perms[0].degree(), self.perms.clone()).expect("perms form a group")
    }

    pub fn stabilizer_indices(&self, v: usize) -> Vec<usize> {
        (0..self.order()).filter(|&i| self.perms[i].apply(v) == v).collect()
    }
}

/// Transport a cocycle along conjugation by `g` with g L g^{-1} = L'.
/// Returns the cocycle (same abstract table) together with the conjugated
/// permutation realization on L'.
pub fn conjugate_cocycle(
    c: &TwoCocycle,
    perms: &[Permutation],
    g: &Permutation,
    target: &Subgroup,
) -> Result<(TwoCocycle, Vec<Permutation>), CocycleError> {
    let gi = g.inverse();
    let conj: Vec<Permutation> = perms.iter().map(|p| g.compose(p).compose(&gi)).collect();
    if conj.len() != target.order() || !conj.iter().all(|p| target.contains(p)) {
        return Err(CocycleError::NotConjugating);
    }
    // conjugation is an isomorphism onto the target, so the exponent table
    // transports verbatim along it
    let psi = TwoCocycle::new(c.group.clone(), c.root_order, c.table.clone())?;
    Ok((psi, conj))
}

/// Equivalence of central type pairs inside an ambient group: exists g in G
/// with g L1 g^{-1} = L2 and psi2 cohomologous to the transported psi1.
/// Exhaustive over the element list of G.
pub fn equivalent_pairs(
    p1: &CentralTypeSubgroup,
    p2: &CentralTypeSubgroup,
    g: &PermGroup,
) -> Result<bool, CocycleError> {
    let l2 = p2.subgroup();
    for t in g.elements()? {
        let ti = t.inverse();
        let conj: Vec<Permutation> = p1.perms.iter().map(|p| t.compose(p).compose(&ti)).collect();
        if !conj.iter().all(|p| l2.contains(p)) {
            continue;
        }
        // sigma(i) = index in p2 of t p1[i] t^{-1}; a group isomorphism
        let mut sigma = vec![usize::MAX; p1.order()];
        let mut ok = true;
        for (i, cp) in conj.iter().enumerate() {
            match p2.perms.iter().position(|q| q == cp) {
                Some(j) => sigma[i] = j,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        // transported cocycle expressed in p2's element order
        let k = p1.order();
        let mut table = vec![0u32; k * k];
        for a in 0..k {
            for b in 0..k {
                table[sigma[a] * k + sigma[b]] = p1.psi.exponent(a, b);
            }
        }
        let transported = match TwoCocycle::new(p2.group.clone(), p1.psi.root_order, table) {
            Ok(c) => c,
            Err(_) => continue,
        };
        if cohomologous(&transported, &p2.psi).is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

// --- enumeration for abelian groups -------------------------------------------

/// One representative per cohomology class with nondegenerate rho, for an
/// abelian group. Classes correspond to alternating bicharacters, which we
/// enumerate over a cyclic decomposition; the representative is the
/// upper-triangular bicharacter cocycle. Empty iff the group is not of
/// symmetric type.
pub fn enumerate_nondegenerate_classes_abelian(
    group: &AbstractGroup,
) -> Result<Vec<TwoCocycle>, CocycleError> {
    if !group.is_abelian() {
        return Err(CocycleError::NotAbelian);
    }
    let k = group.order();
    if k == 1 {
        return Ok(Vec::new());
    }
    let basis = group.abelian_cyclic_decomposition()?;
    let m = basis.len();
    // exponent of the group
    let n = basis.iter().fold(1i64, |acc, &(_, d)| lcm(acc, d as i64)) as u32;

    let coords = element_coordinates(group, &basis);

    // enumerate b_ij in Z_{gcd(d_i, d_j)} for i < j
    let mut pair_mods = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            pair_mods.push(gcd(basis[i].1 as i64, basis[j].1 as i64) as u32);
        }
    }
    let total: u64 = pair_mods.iter().map(|&x| x as u64).product();
    let mut out = Vec::new();
    for idx in 0..total {
        let mut rem = idx;
        let mut b = Vec::with_capacity(pair_mods.len());
        for &pm in &pair_mods {
            b.push((rem % pm as u64) as u32);
            rem /= pm as u64;
        }
        // psi(x,y) = prod_{i<j} zeta_ij^{b_ij * x_i * y_j}; zeta_ij has
        // order gcd(d_i, d_j), scaled into exponents mod n
        let mut table = vec![0u32; k * k];
        for x in 0..k {
            for y in 0..k {
                let mut e: u64 = 0;
                let mut t = 0usize;
                for i in 0..m {
                    for j in (i + 1)..m {
                        let pm = pair_mods[t] as u64;
                        let scale = (n as u64) / pm;
                        e += scale * ((b[t] as u64 * coords[x][i] as u64 * coords[y][j] as u64) % pm);
                        t += 1;
                    }
                }
                table[x * k + y] = (e % n as u64) as u32;
            }
        }
        let psi = TwoCocycle::new(group.clone(), n, table)?;
        if psi.is_nondegenerate() {
            out.push(psi);
        }
    }
    Ok(out)
}

/// Coordinates of each group element in a cyclic-factor basis.
fn element_coordinates(group: &AbstractGroup, basis: &[(usize, usize)]) -> Vec<Vec<u32>> {
    let k = group.order();
    let m = basis.len();
    let mut coords = vec![Vec::new(); k];
    let mut found = vec![false; k];
    let mut tuple = vec![0usize; m];
    loop {
        let mut el = 0usize;
        for (i, &(g, _)) in basis.iter().enumerate() {
            for _ in 0..tuple[i] {
                el = group.mul(el, g);
            }
        }
        if !found[el] {
            found[el] = true;
            coords[el] = tuple.iter().map(|&t| t as u32).collect();
        }
        let mut i = 0;
        loop {
            if i == m {
                debug_assert!(found.iter().all(|&f| f), "basis does not generate the group");
                return coords;
            }
            tuple[i] += 1;
            if tuple[i] < basis[i].1 {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    pub fn z2n(n: usize) -> AbstractGroup {
        let mut g = AbstractGroup::cyclic(2);
        for _ in 1..n {
            g = g.direct_product(&AbstractGroup::cyclic(2));
        }
        g
    }

    /// The Pauli cocycle on Z2 x Z2, derived from actual matrix products of
    /// the four Pauli-type matrices (the independent oracle for psi_P).
    pub fn pauli_cocycle_from_matrices() -> TwoCocycle {
        let mats = [
            CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 1.0]),  // (0,0) -> 1
            CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]), // (0,1) -> Z
            CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]),  // (1,0) -> X
            CMatrix::from_real(2, 2, &[0.0, -1.0, 1.0, 0.0]), // (1,1) -> XZ
        ];
        // element (a,b) at index 2a + b, group op = XOR
        let group = z2n(2);
        let mut table = vec![0u32; 16];
        for a in 0..4usize {
            for b in 0..4usize {
                let ab = a ^ b;
                let prod = mats[a].mul(&mats[b]);
                let phase = prod.mul(&mats[ab].dagger()).trace() / C64::new(2.0, 0.0);
                let exp = if (phase - C64::new(1.0, 0.0)).norm() < 1e-12 {
                    0
                } else if (phase + C64::new(1.0, 0.0)).norm() < 1e-12 {
                    2
                } else {
                    panic!("unexpected phase {phase}");
                };
                table[a * 4 + b] = exp;
            }
        }
        TwoCocycle::new(group, 4, table).unwrap()
    }

    /// psi_{P^2} on Z2^4 as the product cocycle of two Pauli cocycles;
    /// element (a, b) with a, b in Z2^2 has index 4a + b.
    pub fn pauli_squared() -> TwoCocycle {
        let p = pauli_cocycle_from_matrices();
        let group = z2n(4);
        let mut table = vec![0u32; 256];
        for a1 in 0..4usize {
            for b1 in 0..4usize {
                for a2 in 0..4usize {
                    for b2 in 0..4usize {
                        let i = a1 * 4 + b1;
                        let j = a2 * 4 + b2;
                        table[i * 16 + j] = (p.exponent(a1, a2) + p.exponent(b1, b2)) % 4;
                    }
                }
            }
        }
        TwoCocycle::new(group, 4, table).unwrap()
    }
}
