//! Classical simple graphs: parsing, isomorphism testing and automorphism
//! group computation via equitable-partition refinement with backtracking.

use crate::permgroups::{PermGroup, Permutation};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("edge {index}: {reason}")]
    BadEdge { index: usize, reason: String },
    #[error("automorphism group order exceeds the cap {cap}")]
    GroupOrderCapExceeded { cap: usize },
    #[error("graph must have at least one vertex")]
    Empty,
}

/// Finite simple undirected graph on vertices `0..n`. Loop-free; reflexivity
/// only enters when lifting to a quantum adjacency operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalGraph {
    n: usize,
    edges: Vec<(usize, usize)>, // canonical: u < v, sorted
    adj: Vec<BTreeSet<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl ClassicalGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut set: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (index, &(a, b)) in edges.iter().enumerate() {
            if a == b {
                return Err(GraphError::BadEdge { index, reason: format!("loop at vertex {a}") });
            }
            if a >= n || b >= n {
                return Err(GraphError::BadEdge {
                    index,
                    reason: format!("vertex out of range: ({a},{b}) with n = {n}"),
                });
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(GraphError::BadEdge {
                    index,
                    reason: format!("duplicate edge ({},{})", e.0, e.1),
                });
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adj = vec![BTreeSet::new(); n];
        for &(a, b) in &edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        Ok(ClassicalGraph { n, edges, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.adj[a].contains(&b)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        ClassicalGraph::new(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j));
            }
        }
        ClassicalGraph::new(n, &edges).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut edges = Vec::new();
        for i in 0..a {
            for j in 0..b {
                edges.push((i, a + j));
            }
        }
        ClassicalGraph::new(a + b, &edges).unwrap()
    }

    /// Petersen graph as the Kneser graph K(5,2).
    pub fn petersen() -> Self {
        let pairs: Vec<(usize, usize)> = (0..5)
            .flat_map(|i| ((i + 1)..5).map(move |j| (i, j)))
            .collect();
        let mut edges = Vec::new();
        for (u, &(a, b)) in pairs.iter().enumerate() {
            for (v, &(c, d)) in pairs.iter().enumerate().skip(u + 1) {
                if a != c && a != d && b != c && b != d {
                    edges.push((u, v));
                }
            }
        }
        ClassicalGraph::new(10, &edges).unwrap()
    }

    /// Direct (categorical) product with another graph.
    pub fn direct_product(&self, other: &ClassicalGraph) -> Self {
        let n = self.n * other.n;
        let mut edges = Vec::new();
        for u1 in 0..self.n {
            for u2 in 0..other.n {
                for v1 in 0..self.n {
                    for v2 in 0..other.n {
                        let a = u1 * other.n + u2;
                        let b = v1 * other.n + v2;
                        if a < b && self.has_edge(u1, v1) && other.has_edge(u2, v2) {
                            edges.push((a, b));
                        }
                    }
                }
            }
        }
        ClassicalGraph::new(n, &edges).unwrap()
    }

    /// Relabel vertices by `perm` (vertex v becomes `perm[v]`).
    pub fn relabel(&self, perm: &Permutation) -> Self {
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(a, b)| (perm.apply(a), perm.apply(b)))
            .collect();
        ClassicalGraph::new(self.n, &edges).unwrap()
    }

    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        if p.degree() != self.n {
            return false;
        }
        self.edges.iter().all(|&(a, b)| self.has_edge(p.apply(a), p.apply(b)))
    }
}

pub fn parse_graph(text: &str) -> Result<ClassicalGraph, GraphError> {
    let repr: GraphRepr = serde_json::from_str(text)
        .map_err(|e| GraphError::Parse(format!("{e} (line {}, column {})", e.line(), e.column())))?;
    ClassicalGraph::new(repr.n, &repr.edges)
}

pub fn serialize_graph(g: &ClassicalGraph) -> String {
    serde_json::to_string(&GraphRepr { n: g.n, edges: g.edges.clone() }).unwrap()
}

// --- equitable partition refinement -----------------------------------------

/// Stable coloring under iterated (color, multiset of neighbor colors)
/// refinement; the shared workhorse behind the isomorphism search.
fn refine_colors(g: &ClassicalGraph, init: &[usize]) -> Vec<usize> {
    let n = g.n();
    let mut colors = init.to_vec();
    loop {
        // signature: (current color, sorted neighbor colors)
        let mut sigs: Vec<(usize, Vec<usize>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut nb: Vec<usize> = g.neighbors(v).map(|w| colors[w]).collect();
            nb.sort_unstable();
            sigs.push((colors[v], nb));
        }
        let mut sorted: Vec<&(usize, Vec<usize>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        let new_colors: Vec<usize> =
            (0..n).map(|v| sorted.binary_search(&&sigs[v]).unwrap()).collect();
        if new_colors == colors {
            return colors;
        }
        colors = new_colors;
    }
}

/// Sorted multiset of stable colors; a cheap isomorphism invariant.
fn color_profile(colors: &[usize]) -> Vec<usize> {
    let mut p = colors.to_vec();
    p.sort_unstable();
    p
}

struct IsoSearch<'a> {
    g: &'a ClassicalGraph,
    h: &'a ClassicalGraph,
    gc: Vec<usize>,
    hc: Vec<usize>,
    order: Vec<usize>,
    find_all: bool,
    cap: usize,
    found: Vec<Permutation>,
    overflow: bool,
}

impl<'a> IsoSearch<'a> {
    /// Vertex processing order: repeatedly take the vertex with the most
    /// already-ordered neighbors (ties by smaller stable-color class, then
    /// index). Keeps the mapped prefix connected so adjacency constraints
    /// bite early.
    fn make_order(g: &ClassicalGraph, colors: &[usize]) -> Vec<usize> {
        let n = g.n();
        let mut class_size = vec![0usize; n];
        for &c in colors {
            class_size[c] += 1;
        }
        let mut placed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let mut best: Option<usize> = None;
            let mut best_key = (0usize, usize::MAX, usize::MAX);
            for v in 0..n {
                if placed[v] {
                    continue;
                }
                let anchored = g.neighbors(v).filter(|&w| placed[w]).count();
                let key = (anchored, class_size[colors[v]], v);
                let better = match best {
                    None => true,
                    Some(_) => {
                        key.0 > best_key.0
                            || (key.0 == best_key.0
                                && (key.1 < best_key.1 || (key.1 == best_key.1 && key.2 < best_key.2)))
                    }
                };
                if better {
                    best = Some(v);
                    best_key = key;
                }
            }
            let v = best.unwrap();
            placed[v] = true;
            order.push(v);
        }
        order
    }

    fn run(mut self) -> Result<Vec<Permutation>, GraphError> {
        let n = self.g.n();
        let mut mapping = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.search(0, &mut mapping, &mut used);
        if self.overflow {
            return Err(GraphError::GroupOrderCapExceeded { cap: self.cap });
        }
        Ok(self.found)
    }

    fn search(&mut self, depth: usize, mapping: &mut Vec<usize>, used: &mut Vec<bool>) {
        if self.overflow || (!self.find_all && !self.found.is_empty()) {
            return;
        }
        let n = self.g.n();
        if depth == n {
            let p = Permutation::new(mapping.clone()).unwrap();
            if self.found.len() >= self.cap {
                self.overflow = true;
                return;
            }
            self.found.push(p);
            return;
        }
        let v = self.order[depth];
        for w in 0..self.h.n() {
            if used[w] || self.hc[w] != self.gc[v] {
                continue;
            }
            // adjacency with the mapped prefix must agree both ways
            let ok = self.order[..depth].iter().all(|&u| {
                self.g.has_edge(v, u) == self.h.has_edge(w, mapping[u])
            });
            if !ok {
                continue;
            }
            mapping[v] = w;
            used[w] = true;
            self.search(depth + 1, mapping, used);
            mapping[v] = usize::MAX;
            used[w] = false;
        }
    }
}

/// Full automorphism group: generators plus the complete element list.
pub fn automorphism_group(g: &ClassicalGraph, cap: usize) -> Result<PermGroup, GraphError> {
    if g.n() == 0 {
        return Err(GraphError::Empty);
    }
    let colors = refine_colors(g, &vec![0; g.n()]);
    let order = IsoSearch::make_order(g, &colors);
    let search = IsoSearch {
        g,
        h: g,
        gc: colors.clone(),
        hc: colors,
        order,
        find_all: true,
        cap,
        found: Vec::new(),
        overflow: false,
    };
    let mut elements = search.run()?;
    elements.sort();
    debug_assert!(elements.iter().all(|p| g.is_automorphism(p)));
    Ok(PermGroup::from_elements(g.n(), elements))
}

/// Explicit isomorphism `g -> h` if one exists. Deterministic for fixed
/// inputs.
pub fn are_isomorphic(g: &ClassicalGraph, h: &ClassicalGraph) -> Option<Permutation> {
    if g.n() != h.n() || g.edges().len() != h.edges().len() {
        return None;
    }
    if g.n() == 0 {
        return Some(Permutation::identity(0));
    }
    let gc = refine_colors(g, &vec![0; g.n()]);
    let hc = refine_colors(h, &vec![0; h.n()]);
    if color_profile(&gc) != color_profile(&hc) {
        return None;
    }
    let order = IsoSearch::make_order(g, &gc);
    let search = IsoSearch {
        g,
        h,
        gc,
        hc,
        order,
        find_all: false,
        cap: usize::MAX,
        found: Vec::new(),
        overflow: false,
    };
    let found = search.run().ok()?;
    let iso = found.into_iter().next()?;
    debug_assert!(g
        .edges()
        .iter()
        .all(|&(a, b)| h.has_edge(iso.apply(a), iso.apply(b))));
    Some(iso)
}
