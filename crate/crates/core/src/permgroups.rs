//! Permutation groups on vertex sets: closure, subgroup enumeration up to
//! conjugacy, centralizers, stabilizers, and abstract multiplication tables.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("permutation degrees differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("group order exceeds the cap {cap}")]
    GroupOrderCapExceeded { cap: usize },
    #[error("element is not in the group")]
    ElementNotInGroup,
    #[error("element list required but not enumerated")]
    ElementsNotEnumerated,
    #[error("set of permutations is not closed under the group operations")]
    NotClosed,
    #[error("group is not abelian")]
    NotAbelian,
}

/// A permutation of `{0..n-1}` stored by images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(GroupError::NotAPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = self.compose(&p);
            k += 1;
        }
        k
    }
}

/// Permutation group given by generators, optionally with the full element
/// list enumerated (required by most downstream operations).
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Option<Vec<Permutation>>,
    order: usize,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            elements: Some(vec![Permutation::identity(degree)]),
            order: 1,
        }
    }

    /// Build from a full element list (assumed closed; checked in debug).
    pub fn from_elements(degree: usize, mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        elements.dedup();
        debug_assert!(is_closed(&elements));
        let generators = extract_generators(degree, &elements);
        let order = elements.len();
        PermGroup { degree, generators, elements: Some(elements), order }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> Result<&[Permutation], GroupError> {
        self.elements.as_deref().ok_or(GroupError::ElementsNotEnumerated)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        match &self.elements {
            Some(els) => els.binary_search(p).is_ok(),
            None => false,
        }
    }
}

fn is_closed(elements: &[Permutation]) -> bool {
    let set: HashSet<&Permutation> = elements.iter().collect();
    elements.iter().any(|p| p.is_identity())
        && elements
            .iter()
            .all(|p| set.contains(&p.inverse()) && elements.iter().all(|q| set.contains(&p.compose(q))))
}

/// Small generating set extracted greedily from an element list.
fn extract_generators(degree: usize, elements: &[Permutation]) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = Vec::new();
    let mut span: BTreeSet<Permutation> = BTreeSet::new();
    span.insert(Permutation::identity(degree));
    for p in elements {
        if span.contains(p) {
            continue;
        }
        gens.push(p.clone());
        // regenerate span
        span = closure_set(&gens, usize::MAX).unwrap();
        if span.len() == elements.len() {
            break;
        }
    }
    gens
}

fn closure_set(gens: &[Permutation], cap: usize) -> Result<BTreeSet<Permutation>, GroupError> {
    let degree = gens.first().map(|g| g.degree()).unwrap_or(0);
    let mut set: BTreeSet<Permutation> = BTreeSet::new();
    set.insert(Permutation::identity(degree));
    let mut frontier: Vec<Permutation> = vec![Permutation::identity(degree)];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = g.compose(&p);
            if !set.contains(&q) {
                if set.len() >= cap {
                    return Err(GroupError::GroupOrderCapExceeded { cap });
                }
                set.insert(q.clone());
                frontier.push(q);
            }
        }
    }
    Ok(set)
}

/// Smallest group containing the generators.
pub fn closure(gens: &[Permutation], cap: usize) -> Result<PermGroup, GroupError> {
    if gens.is_empty() {
        return Ok(PermGroup::trivial(0));
    }
    let degree = gens[0].degree();
    for g in gens {
        if g.degree() != degree {
            return Err(GroupError::DegreeMismatch(degree, g.degree()));
        }
    }
    let set = closure_set(gens, cap)?;
    let elements: Vec<Permutation> = set.into_iter().collect();
    let order = elements.len();
    Ok(PermGroup { degree, generators: gens.to_vec(), elements: Some(elements), order })
}

/// Closed subgroup of an ambient permutation group, stored by its elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    degree: usize,
    elements: Vec<Permutation>, // sorted
}

#[derive(Serialize, Deserialize)]
struct SubgroupRepr {
    degree: usize,
    #[serde(default)]
    elements: Vec<Vec<usize>>,
    #[serde(default)]
    generators: Vec<Vec<usize>>,
}

impl Subgroup {
    pub fn new(degree: usize, mut elements: Vec<Permutation>) -> Result<Self, GroupError> {
        elements.sort();
        elements.dedup();
        for e in &elements {
            if e.degree() != degree {
                return Err(GroupError::DegreeMismatch(degree, e.degree()));
            }
        }
        if !is_closed(&elements) {
            return Err(GroupError::NotClosed);
        }
        Ok(Subgroup { degree, elements })
    }

    pub fn trivial(degree: usize) -> Self {
        Subgroup { degree, elements: vec![Permutation::identity(degree)] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_subgroup_of(&self, g: &PermGroup) -> bool {
        match g.elements() {
            Ok(_) => self.elements.iter().all(|p| g.contains(p)),
            Err(_) => false,
        }
    }

    pub fn conjugate(&self, g: &Permutation) -> Subgroup {
        let gi = g.inverse();
        let elements: Vec<Permutation> =
            self.elements.iter().map(|p| g.compose(p).compose(&gi)).collect();
        Subgroup::new(self.degree, elements).expect("conjugate of a subgroup is a subgroup")
    }

    pub fn from_json(text: &str) -> Result<Self, GroupError> {
        let repr: SubgroupRepr = serde_json::from_str(text)
            .map_err(|e| GroupError::NotAPermutation(format!("bad subgroup JSON: {e}")))?;
        let mk = |raw: &[Vec<usize>]| -> Result<Vec<Permutation>, GroupError> {
            raw.iter().map(|v| Permutation::new(v.clone())).collect()
        };
        if !repr.elements.is_empty() {
            Subgroup::new(repr.degree, mk(&repr.elements)?)
        } else {
            let gens = mk(&repr.generators)?;
            let g = closure(&gens, 1_000_000)?;
            Subgroup::new(repr.degree, g.elements()?.to_vec())
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SubgroupRepr {
            degree: self.degree,
            elements: self.elements.iter().map(|p| p.images().to_vec()).collect(),
            generators: Vec::new(),
        })
        .unwrap()
    }
}

/// All subgroups of square order > 1, partitioned into conjugacy classes
/// under G. Class representatives are the lexicographically least element
/// sets; enumeration is by cyclic extension over the full element list.
pub fn subgroups_square_order(g: &PermGroup) -> Result<Vec<Vec<Subgroup>>, GroupError> {
    let elements = g.elements()?.to_vec();
    let order = elements.len();
    // cyclic extension over the full element list is only sensible at desk
    // scale; larger groups fail loudly instead of spinning
    if order > 5000 {
        return Err(GroupError::GroupOrderCapExceeded { cap: 5000 });
    }
    let index: HashMap<&Permutation, u16> =
        elements.iter().enumerate().map(|(i, p)| (p, i as u16)).collect();
    let id_idx = index[&Permutation::identity(g.degree())];

    // multiplication and inverse tables over element indices
    let mut mult = vec![0u16; order * order];
    for i in 0..order {
        for j in 0..order {
            mult[i * order + j] = index[&elements[i].compose(&elements[j])];
        }
    }
    let mut inv = vec![0u16; order];
    for i in 0..order {
        inv[i] = index[&elements[i].inverse()];
    }

    let close_idx = |seed: &BTreeSet<u16>| -> BTreeSet<u16> {
        let mut set = seed.clone();
        set.insert(id_idx);
        let mut frontier: Vec<u16> = set.iter().copied().collect();
        while let Some(a) = frontier.pop() {
            let mut add = Vec::new();
            for &b in &set {
                for c in [
                    mult[a as usize * order + b as usize],
                    mult[b as usize * order + a as usize],
                    inv[a as usize],
                ] {
                    if !set.contains(&c) {
                        add.push(c);
                    }
                }
            }
            for c in add {
                if set.insert(c) {
                    frontier.push(c);
                }
            }
        }
        set
    };

    // breadth-first cyclic extension over all subgroups
    let mut all: BTreeSet<BTreeSet<u16>> = BTreeSet::new();
    let trivial: BTreeSet<u16> = [id_idx].into_iter().collect();
    all.insert(trivial.clone());
    let mut frontier = vec![trivial];
    while let Some(h) = frontier.pop() {
        for a in 0..order as u16 {
            if h.contains(&a) {
                continue;
            }
            let mut seed = h.clone();
            seed.insert(a);
            let k = close_idx(&seed);
            if !all.contains(&k) {
                all.insert(k.clone());
                frontier.push(k);
            }
        }
    }

    let is_square = |n: usize| {
        let r = (n as f64).sqrt().round() as usize;
        r * r == n
    };
    let square: Vec<BTreeSet<u16>> =
        all.into_iter().filter(|h| h.len() > 1 && is_square(h.len())).collect();

    // group into conjugacy classes under G
    let conj_table: Vec<Vec<u16>> = (0..order)
        .map(|gi| {
            (0..order)
                .map(|a| {
                    mult[mult[gi * order + a] as usize * order + inv[gi] as usize]
                })
                .collect()
        })
        .collect();
    let mut remaining: BTreeSet<BTreeSet<u16>> = square.into_iter().collect();
    let mut classes: Vec<Vec<BTreeSet<u16>>> = Vec::new();
    while let Some(h) = remaining.iter().next().cloned() {
        let mut class: BTreeSet<BTreeSet<u16>> = BTreeSet::new();
        for gi in 0..order {
            let conj: BTreeSet<u16> = h.iter().map(|&a| conj_table[gi][a as usize]).collect();
            class.insert(conj);
        }
        for c in &class {
            remaining.remove(c);
        }
        // representative first (lexicographically least element set), then the rest
        classes.push(class.into_iter().collect());
    }
    classes.sort_by_key(|c| (c[0].len(), c[0].clone()));

    let to_subgroup = |idxs: &BTreeSet<u16>| {
        Subgroup::new(g.degree(), idxs.iter().map(|&i| elements[i as usize].clone()).collect())
            .expect("closed by construction")
    };
    Ok(classes.iter().map(|c| c.iter().map(to_subgroup).collect()).collect())
}

/// `{b in G : ab = ba}`.
pub fn centralizer(g: &PermGroup, a: &Permutation) -> Result<Subgroup, GroupError> {
    let elements = g.elements()?;
    if !g.contains(a) {
        return Err(GroupError::ElementNotInGroup);
    }
    let centrals: Vec<Permutation> = elements
        .iter()
        .filter(|b| a.compose(b) == b.compose(a))
        .cloned()
        .collect();
    Subgroup::new(g.degree(), centrals)
}

/// Elements of `l` fixing the vertex `v`.
pub fn stabilizer(l: &Subgroup, v: usize) -> Subgroup {
    assert!(v < l.degree());
    let elements: Vec<Permutation> =
        l.elements().iter().filter(|p| p.apply(v) == v).cloned().collect();
    Subgroup::new(l.degree(), elements).expect("stabilizer is closed")
}

/// Orbit of a vertex under a subgroup.
pub fn orbit(l: &Subgroup, v: usize) -> Vec<usize> {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for p in l.elements() {
        seen.insert(p.apply(v));
    }
    seen.into_iter().collect()
}

// --- abstract groups ---------------------------------------------------------

/// Finite group as a bare multiplication table; element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractGroup {
    order: usize,
    mult: Vec<u16>, // row-major order x order
}

impl AbstractGroup {
    pub fn from_table(order: usize, mult: Vec<u16>) -> Result<Self, GroupError> {
        if mult.len() != order * order {
            return Err(GroupError::NotClosed);
        }
        let g = AbstractGroup { order, mult };
        // identity at 0, associativity not re-checked here (tables come from
        // verified constructions or are validated by callers)
        for a in 0..order {
            if g.mul(0, a) != a || g.mul(a, 0) != a {
                return Err(GroupError::NotClosed);
            }
            if !(0..order).any(|b| g.mul(a, b) == 0) {
                return Err(GroupError::NotClosed);
            }
        }
        Ok(g)
    }

    /// Abstract table of a permutation subgroup along with the element order
    /// used (identity first, then the subgroup's sorted order).
    pub fn from_subgroup(sub: &Subgroup) -> (Self, Vec<Permutation>) {
        let mut elems: Vec<Permutation> = sub.elements().to_vec();
        elems.sort();
        let id_pos = elems.iter().position(|p| p.is_identity()).expect("closed groups contain e");
        elems.swap(0, id_pos);
        let index: HashMap<&Permutation, u16> =
            elems.iter().enumerate().map(|(i, p)| (p, i as u16)).collect();
        let order = elems.len();
        let mut mult = vec![0u16; order * order];
        for i in 0..order {
            for j in 0..order {
                mult[i * order + j] = index[&elems[i].compose(&elems[j])];
            }
        }
        (AbstractGroup { order, mult }, elems)
    }

    /// Direct product; element `(a, b)` has index `a * other.order + b`.
    pub fn direct_product(&self, other: &AbstractGroup) -> AbstractGroup {
        let order = self.order * other.order;
        let mut mult = vec![0u16; order * order];
        for a1 in 0..self.order {
            for b1 in 0..other.order {
                for a2 in 0..self.order {
                    for b2 in 0..other.order {
                        let i = a1 * other.order + b1;
                        let j = a2 * other.order + b2;
                        let p = self.mul(a1, a2) * other.order + other.mul(b1, b2);
                        mult[i * order + j] = p as u16;
                    }
                }
            }
        }
        AbstractGroup { order, mult }
    }

    pub fn cyclic(n: usize) -> AbstractGroup {
        let mut mult = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                mult[a * n + b] = ((a + b) % n) as u16;
            }
        }
        AbstractGroup { order: n, mult }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order).find(|&b| self.mul(a, b) == 0).expect("group has inverses")
    }

    pub fn conjugate(&self, a: usize, b: usize) -> usize {
        // a b a^{-1}
        self.mul(self.mul(a, b), self.inv(a))
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.commutes(a, b)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn centralizer_indices(&self, a: usize) -> Vec<usize> {
        (0..self.order).filter(|&b| self.commutes(a, b)).collect()
    }

    pub fn subgroup_closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = [0].into_iter().collect();
        let mut frontier: Vec<usize> = vec![0];
        for &s in seed {
            if set.insert(s) {
                frontier.push(s);
            }
        }
        while let Some(a) = frontier.pop() {
            let mut add = Vec::new();
            for &b in &set {
                for c in [self.mul(a, b), self.mul(b, a), self.inv(a)] {
                    if !set.contains(&c) {
                        add.push(c);
                    }
                }
            }
            for c in add {
                if set.insert(c) {
                    frontier.push(c);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        set.contains(&0)
            && set
                .iter()
                .all(|&a| set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// Decomposition of an abelian group into cyclic factors. Returns
    /// generator indices with their orders, primary factors concatenated.
    pub fn abelian_cyclic_decomposition(&self) -> Result<Vec<(usize, usize)>, GroupError> {
        if !self.is_abelian() {
            return Err(GroupError::NotAbelian);
        }
        // decompose each Sylow subgroup separately
        let mut primes = Vec::new();
        let mut n = self.order;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                primes.push(p);
                while n % p == 0 {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            primes.push(n);
        }
        let mut basis: Vec<(usize, usize)> = Vec::new();
        for p in primes {
            // Sylow p-subgroup: elements of p-power order
            let sylow: Vec<usize> = (0..self.order)
                .filter(|&a| {
                    let mut o = self.element_order(a);
                    while o % p == 0 {
                        o /= p;
                    }
                    o == 1
                })
                .collect();
            basis.extend(self.p_group_basis(&sylow)?);
        }
        Ok(basis)
    }

    /// Basis of an abelian p-group given by its element list: repeatedly
    /// split off a maximal-order cyclic summand and recurse on the quotient,
    /// lifting quotient generators honestly.
    fn p_group_basis(&self, elements: &[usize]) -> Result<Vec<(usize, usize)>, GroupError> {
        if elements.len() <= 1 {
            return Ok(Vec::new());
        }
        let g = *elements
            .iter()
            .max_by_key(|&&a| self.element_order(a))
            .unwrap();
        let d = self.element_order(g);
        // cosets of <g> inside the element list
        let gen_sub: BTreeSet<usize> = {
            let mut s = BTreeSet::new();
            let mut x = 0;
            loop {
                s.insert(x);
                x = self.mul(x, g);
                if x == 0 {
                    break;
                }
            }
            s
        };
        let mut coset_of: HashMap<usize, usize> = HashMap::new(); // element -> coset id
        let mut coset_reps: Vec<usize> = Vec::new();
        for &a in elements {
            if coset_of.contains_key(&a) {
                continue;
            }
            let id = coset_reps.len();
            coset_reps.push(a);
            for &s in &gen_sub {
                coset_of.insert(self.mul(a, s), id);
            }
        }
        // quotient group table on coset ids
        let q_order = coset_reps.len();
        let mut q_mult = vec![0u16; q_order * q_order];
        for (i, &a) in coset_reps.iter().enumerate() {
            for (j, &b) in coset_reps.iter().enumerate() {
                q_mult[i * q_order + j] = coset_of[&self.mul(a, b)] as u16;
            }
        }
        // identity coset must be index of coset containing 0
        let id_coset = coset_of[&0];
        // renumber so identity coset is 0
        let renum: Vec<usize> = (0..q_order)
            .map(|i| if i == id_coset { 0 } else if i == 0 { id_coset } else { i })
            .collect();
        let mut q2 = vec![0u16; q_order * q_order];
        for i in 0..q_order {
            for j in 0..q_order {
                q2[renum[i] * q_order + renum[j]] = renum[q_mult[i * q_order + j] as usize] as u16;
            }
        }
        let mut reps2 = vec![0usize; q_order];
        for i in 0..q_order {
            reps2[renum[i]] = coset_reps[i];
        }
        let quotient = AbstractGroup { order: q_order, mult: q2 };
        let sub_basis = quotient.p_group_basis(&(0..q_order).collect::<Vec<_>>())?;
        let mut out = vec![(g, d)];
        for (qgen, qord) in sub_basis {
            // lift: find h in the coset with h^qord in <g>, then correct by a
            // power of g so the lift has exact order qord
            let h = reps2[qgen];
            let mut hp = 0;
            for _ in 0..qord {
                hp = self.mul(hp, h);
            }
            // hp = g^s for some s
            let mut s = 0usize;
            let mut x = 0usize;
            while x != hp {
                x = self.mul(x, g);
                s += 1;
                if s > d {
                    return Err(GroupError::NotClosed);
                }
            }
            // want (h g^t)^qord = g^(s + t*qord) = e, i.e. s + t*qord ≡ 0 mod d
            let mut lift = h;
            let mut found = false;
            for t in 0..d {
                if (s + t * qord) % d == 0 {
                    let mut gt = 0;
                    for _ in 0..t {
                        gt = self.mul(gt, g);
                    }
                    lift = self.mul(h, gt);
                    found = true;
                    break;
                }
            }
            if !found || self.element_order(lift) != qord {
                return Err(GroupError::NotClosed);
            }
            out.push((lift, qord));
        }
        Ok(out)
    }

    /// Human-readable structure summary, reliable up to order 64.
    pub fn structure_name(&self) -> String {
        if self.order == 1 {
            return "trivial".into();
        }
        if self.is_abelian() {
            if let Ok(basis) = self.abelian_cyclic_decomposition() {
                let mut orders: Vec<usize> = basis.iter().map(|&(_, d)| d).collect();
                orders.sort_unstable();
                // compress Z2 x Z2 x ... as Z2^k
                let mut parts: Vec<String> = Vec::new();
                let mut i = 0;
                while i < orders.len() {
                    let mut j = i;
                    while j < orders.len() && orders[j] == orders[i] {
                        j += 1;
                    }
                    let count = j - i;
                    if count == 1 {
                        parts.push(format!("Z{}", orders[i]));
                    } else {
                        parts.push(format!("Z{}^{}", orders[i], count));
                    }
                    i = j;
                }
                return parts.join(" x ");
            }
        }
        // minimal non-abelian recognition: dihedral check
        let n2 = self.order / 2;
        if self.order % 2 == 0 && n2 >= 3 {
            let has_cyclic_n2 = (0..self.order).any(|a| self.element_order(a) == n2);
            let involutions = (0..self.order).filter(|&a| self.element_order(a) == 2).count();
            if has_cyclic_n2 && involutions >= n2 {
                return format!("D{n2}");
            }
        }
        format!("nonabelian of order {}", self.order)
    }
}

/// Build the dihedral group of the n-cycle as a permutation group.
pub fn dihedral_on_cycle(n: usize) -> PermGroup {
    let r = Permutation::new((0..n).map(|i| (i + 1) % n).collect()).unwrap();
    let s = Permutation::new((0..n).map(|i| (n - i) % n).collect()).unwrap();
    closure(&[r, s], 1_000_000).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_trivial_and_dihedral() {
        assert_eq!(closure(&[], 10).unwrap().order(), 1);
        let d6 = dihedral_on_cycle(6);
        assert_eq!(d6.order(), 12);
    }

    #[test]
    fn closure_respects_cap() {
        let r = Permutation::new((0..10).map(|i| (i + 1) % 10).collect()).unwrap();
        assert!(matches!(
            closure(&[r], 5),
            Err(GroupError::GroupOrderCapExceeded { cap: 5 })
        ));
    }

    #[test]
    fn square_order_subgroup_classes_in_dihedral_groups() {
        // D5: no square-order subgroup at all (orders 1,2,5,10)
        let d5 = dihedral_on_cycle(5);
        let classes = subgroups_square_order(&d5).unwrap();
        assert!(classes.is_empty());

        // D6: a single conjugacy class of Z2 x Z2
        let d6 = dihedral_on_cycle(6);
        let classes = subgroups_square_order(&d6).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0][0].order(), 4);
        assert_eq!(classes[0].len(), 3);

        // D8 (order 16): two classes of Z2 x Z2, plus Z4 and the full group
        let d8 = dihedral_on_cycle(8);
        let classes = subgroups_square_order(&d8).unwrap();
        let klein: Vec<_> = classes
            .iter()
            .filter(|c| {
                c[0].order() == 4 && {
                    let (table, _) = AbstractGroup::from_subgroup(&c[0]);
                    (0..4).all(|a| table.element_order(a) <= 2)
                }
            })
            .collect();
        assert_eq!(klein.len(), 2);
    }

    #[test]
    fn conjugacy_classes_are_stable_under_conjugation() {
        let d8 = dihedral_on_cycle(8);
        let classes = subgroups_square_order(&d8).unwrap();
        for class in &classes {
            for g in d8.elements().unwrap() {
                let conj = class[0].conjugate(g);
                assert!(class.contains(&conj));
            }
        }
    }

    #[test]
    fn centralizers_in_d6() {
        let d6 = dihedral_on_cycle(6);
        let id = Permutation::identity(6);
        assert_eq!(centralizer(&d6, &id).unwrap().order(), 12);
        // r^3 is central in D6
        let r3 = Permutation::new((0..6).map(|i| (i + 3) % 6).collect()).unwrap();
        assert_eq!(centralizer(&d6, &r3).unwrap().order(), 12);
        // a reflection has centralizer {e, s, r^3, r^3 s}
        let s = Permutation::new((0..6).map(|i| (6 - i) % 6).collect()).unwrap();
        assert_eq!(centralizer(&d6, &s).unwrap().order(), 4);
    }

    #[test]
    fn stabilizers_of_klein_four_on_c6() {
        let r3 = Permutation::new((0..6).map(|i| (i + 3) % 6).collect()).unwrap();
        let s0 = Permutation::new((0..6).map(|i| (6 - i) % 6).collect()).unwrap();
        let l = Subgroup::new(6, closure(&[r3, s0], 100).unwrap().elements().unwrap().to_vec())
            .unwrap();
        assert_eq!(l.order(), 4);
        assert_eq!(stabilizer(&l, 0).order(), 2);
        assert_eq!(stabilizer(&l, 1).order(), 1);
        // orbit-stabilizer
        for v in 0..6 {
            assert_eq!(l.order(), orbit(&l, v).len() * stabilizer(&l, v).order());
        }
    }

    #[test]
    fn lagrange_for_enumerated_subgroups() {
        let d6 = dihedral_on_cycle(6);
        for class in subgroups_square_order(&d6).unwrap() {
            for sub in class {
                assert_eq!(d6.order() % sub.order(), 0);
            }
        }
    }

    #[test]
    fn abstract_group_basics() {
        let z4 = AbstractGroup::cyclic(4);
        assert_eq!(z4.element_order(1), 4);
        assert_eq!(z4.inv(1), 3);
        assert!(z4.is_abelian());
        let z2z2 = AbstractGroup::cyclic(2).direct_product(&AbstractGroup::cyclic(2));
        assert_eq!(z2z2.structure_name(), "Z2^2");
        let decomp = z2z2.abelian_cyclic_decomposition().unwrap();
        assert_eq!(decomp.len(), 2);
        assert!(decomp.iter().all(|&(_, d)| d == 2));
    }

    #[test]
    fn abelian_decomposition_mixed() {
        let g = AbstractGroup::cyclic(4).direct_product(&AbstractGroup::cyclic(2));
        let decomp = g.abelian_cyclic_decomposition().unwrap();
        let mut orders: Vec<usize> = decomp.iter().map(|&(_, d)| d).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![2, 4]);
        // generators must generate
        let gens: Vec<usize> = decomp.iter().map(|&(g, _)| g).collect();
        assert_eq!(g.subgroup_closure(&gens).len(), 8);
    }

    #[test]
    fn from_subgroup_identity_first() {
        let d6 = dihedral_on_cycle(6);
        let sub = Subgroup::new(6, d6.elements().unwrap().to_vec()).unwrap();
        let (table, elems) = AbstractGroup::from_subgroup(&sub);
        assert!(elems[0].is_identity());
        assert_eq!(table.order(), 12);
        assert_eq!(table.structure_name(), "D6");
    }

    #[test]
    fn subgroup_json_round_trip() {
        let l = Subgroup::new(
            3,
            vec![
                Permutation::identity(3),
                Permutation::new(vec![1, 2, 0]).unwrap(),
                Permutation::new(vec![2, 0, 1]).unwrap(),
            ],
        )
        .unwrap();
        let s = l.to_json();
        let back = Subgroup::from_json(&s).unwrap();
        assert_eq!(l, back);
        // generators-only form
        let gen_only = r#"{"degree":3,"generators":[[1,2,0]]}"#;
        assert_eq!(Subgroup::from_json(gen_only).unwrap().order(), 3);
    }
}
