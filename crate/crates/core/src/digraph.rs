//! Tournaments and simple digon-free digraphs on dense 0-based vertex labels.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orientation of a complete graph.
///
/// Stores one bit per unordered pair `{i, j}` with `i < j`, packed row by row
/// over the upper triangle; a set bit means `i → j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tournament {
    n: usize,
    bits: Vec<u64>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl Tournament {
    /// Builds a tournament from a predicate deciding `i → j` for each `i < j`.
    pub fn from_fn(n: usize, mut forward: impl FnMut(usize, usize) -> bool) -> Self {
        let pairs = n * n.saturating_sub(1) / 2;
        let mut bits = vec![0u64; pairs.div_ceil(64)];
        for i in 0..n {
            for j in i + 1..n {
                if forward(i, j) {
                    let k = pair_index(n, i, j);
                    bits[k / 64] |= 1 << (k % 64);
                }
            }
        }
        Tournament { n, bits }
    }

    /// Builds a tournament from an arc list that must orient every pair exactly once.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut seen = vec![false; n * n];
        for &(u, v) in arcs {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidParameter(format!("bad arc ({u}, {v}) for n = {n}")));
            }
            if seen[u * n + v] || seen[v * n + u] {
                return Err(Error::InvalidParameter(format!("pair {{{u}, {v}}} oriented twice")));
            }
            seen[u * n + v] = true;
        }
        for i in 0..n {
            for j in i + 1..n {
                if !seen[i * n + j] && !seen[j * n + i] {
                    return Err(Error::InvalidParameter(format!("pair {{{i}, {j}}} not oriented")));
                }
            }
        }
        Ok(Tournament::from_fn(n, |i, j| seen[i * n + j]))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// `true` iff `i → j`. A vertex does not beat itself.
    pub fn beats(&self, i: usize, j: usize) -> bool {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.bit(pair_index(self.n, i, j)),
            std::cmp::Ordering::Greater => !self.bit(pair_index(self.n, j, i)),
            std::cmp::Ordering::Equal => false,
        }
    }

    fn bit(&self, k: usize) -> bool {
        self.bits[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn out_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.beats(v, u)).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.n - 1 - self.out_degree(v)
    }

    pub fn out_neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.beats(v, u)).collect()
    }

    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.beats(u, v)).collect()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            (i + 1..self.n).map(move |j| if self.beats(i, j) { (i, j) } else { (j, i) })
        })
    }

    /// Row `i` of the upper triangle as bits, in the packed storage order.
    pub fn upper_triangle_bits(&self) -> impl Iterator<Item = bool> + '_ {
        let pairs = self.n * self.n.saturating_sub(1) / 2;
        (0..pairs).map(|k| self.bit(k))
    }

    /// The tournament with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Tournament {
        assert_eq!(perm.len(), self.n, "permutation length must match order");
        let mut inverse = vec![0; self.n];
        for (v, &p) in perm.iter().enumerate() {
            inverse[p] = v;
        }
        Tournament::from_fn(self.n, |i, j| self.beats(inverse[i], inverse[j]))
    }

    /// Sub-tournament induced by `vertices`, relabeled `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Tournament {
        Tournament::from_fn(vertices.len(), |i, j| self.beats(vertices[i], vertices[j]))
    }

    /// Every arc reversed.
    pub fn reverse(&self) -> Tournament {
        Tournament::from_fn(self.n, |i, j| !self.beats(i, j))
    }

    /// No cyclic triangle. Checked via the score sequence: a tournament is
    /// transitive iff its out-degrees are exactly `0..n`.
    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.n];
        for v in 0..self.n {
            let d = self.out_degree(v);
            if seen[d] {
                return false;
            }
            seen[d] = true;
        }
        true
    }

    /// Lexicographically least cyclic triangle `(u1, u2, u3)` with `u1 → u2 → u3 → u1`
    /// and `u1` the smallest label.
    pub fn cyclic_triangle(&self) -> Option<[usize; 3]> {
        for a in 0..self.n {
            for b in a + 1..self.n {
                for c in b + 1..self.n {
                    if self.beats(a, b) && self.beats(b, c) && self.beats(c, a) {
                        return Some([a, b, c]);
                    }
                    if self.beats(a, c) && self.beats(c, b) && self.beats(b, a) {
                        return Some([a, c, b]);
                    }
                }
            }
        }
        None
    }

    pub fn to_digraph(&self) -> Digraph {
        Digraph { n: self.n, edges: sorted(self.arcs().collect()) }
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tournament({}; ", self.n)?;
        for (u, v) in self.arcs() {
            write!(f, "{u}>{v} ")?;
        }
        write!(f, ")")
    }
}

/// Simple digraph without loops, parallel arcs or digons.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Digraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

fn sorted(mut edges: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    edges.sort_unstable();
    edges
}

impl Digraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let edges = sorted(edges.into_iter().collect());
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidParameter(format!("duplicate edge {:?}", w[0])));
            }
        }
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("loop at vertex {u}")));
            }
            if edges.binary_search(&(v, u)).is_ok() {
                return Err(Error::InvalidParameter(format!("digon between {u} and {v}")));
            }
        }
        Ok(Digraph { n, edges })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u, v)).is_ok()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v) || self.has_edge(v, u)
    }

    pub fn out_neighbors(&self, v: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.0 == v).map(|e| e.1).collect()
    }

    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.1 == v).map(|e| e.0).collect()
    }

    /// Sub-digraph induced by `vertices`, relabeled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Digraph {
        let mut position = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            position[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| position[u] != usize::MAX && position[v] != usize::MAX)
            .map(|&(u, v)| (position[u], position[v]))
            .collect();
        Digraph { n: vertices.len(), edges: sorted(edges) }
    }

    /// Adds arcs; fails if any would create a loop, duplicate or digon.
    pub fn with_edges(&self, extra: impl IntoIterator<Item = (usize, usize)>) -> Result<Digraph> {
        Digraph::new(self.n, self.edges.iter().copied().chain(extra))
    }

    /// Returns the tournament if every pair is oriented.
    pub fn to_tournament(&self) -> Option<Tournament> {
        if self.edges.len() != self.n * self.n.saturating_sub(1) / 2 {
            return None;
        }
        Some(Tournament::from_fn(self.n, |i, j| self.has_edge(i, j)))
    }
}

impl From<&Tournament> for Digraph {
    fn from(t: &Tournament) -> Self {
        t.to_digraph()
    }
}

/// Injective map from pattern vertices to host vertices: `pattern v ↦ self.0[v]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Embedding(pub Vec<usize>);

impl Embedding {
    pub fn image(&self, v: usize) -> usize {
        self.0[v]
    }

    /// Injective and arc-preserving.
    pub fn is_valid(&self, pattern: &Tournament, host: &Tournament) -> bool {
        let k = pattern.order();
        if self.0.len() != k || self.0.iter().any(|&h| h >= host.order()) {
            return false;
        }
        (0..k).all(|i| {
            (0..k).all(|j| i == j || pattern.beats(i, j) == host.beats(self.0[i], self.0[j]) && self.0[i] != self.0[j])
        })
    }
}
