//! Sub-tournament search over bitset adjacency.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::digraph::{Embedding, Tournament};

struct Host {
    out: Vec<FixedBitSet>,
    inn: Vec<FixedBitSet>,
    out_deg: Vec<usize>,
}

impl Host {
    fn new(t: &Tournament) -> Self {
        let n = t.order();
        let mut out = vec![FixedBitSet::with_capacity(n); n];
        let mut inn = vec![FixedBitSet::with_capacity(n); n];
        for (u, v) in t.arcs() {
            out[u].insert(v);
            inn[v].insert(u);
        }
        let out_deg = out.iter().map(|s| s.count_ones(..)).collect();
        Host { out, inn, out_deg }
    }
}

struct Matcher<'a> {
    pattern: &'a Tournament,
    host: Host,
    /// Host vertices passing the in/out-degree filter for each pattern vertex.
    admissible: Vec<FixedBitSet>,
}

impl<'a> Matcher<'a> {
    fn new(host: &Tournament, pattern: &'a Tournament) -> Self {
        let h = Host::new(host);
        let n = host.order();
        let admissible = (0..pattern.order())
            .map(|p| {
                let (po, pi) = (pattern.out_degree(p), pattern.in_degree(p));
                let mut set = FixedBitSet::with_capacity(n);
                for v in 0..n {
                    if h.out_deg[v] >= po && n - 1 - h.out_deg[v] >= pi {
                        set.insert(v);
                    }
                }
                set
            })
            .collect();
        Matcher { pattern, host: h, admissible }
    }

    fn candidates(&self, assigned: &[usize]) -> FixedBitSet {
        let k = assigned.len();
        let mut cand = self.admissible[k].clone();
        for (i, &img) in assigned.iter().enumerate() {
            if self.pattern.beats(i, k) {
                cand.intersect_with(&self.host.out[img]);
            } else {
                cand.intersect_with(&self.host.inn[img]);
            }
        }
        cand
    }

    fn first(&self, assigned: &mut Vec<usize>) -> bool {
        if assigned.len() == self.pattern.order() {
            return true;
        }
        let cand = self.candidates(assigned);
        for v in cand.ones() {
            assigned.push(v);
            if self.first(assigned) {
                return true;
            }
            assigned.pop();
        }
        false
    }

    fn count(&self, assigned: &mut Vec<usize>) -> u128 {
        if assigned.len() == self.pattern.order() {
            return 1;
        }
        let cand = self.candidates(assigned);
        let mut total = 0;
        for v in cand.ones() {
            assigned.push(v);
            total += self.count(assigned);
            assigned.pop();
        }
        total
    }
}

/// Lexicographically least embedding of `pattern` into `host`, if any.
///
/// Pattern vertices are placed in index order; each placed vertex constrains
/// every later one, so the intersection of neighbourhood bitsets is the full
/// candidate filter.
pub fn find_subtournament(host: &Tournament, pattern: &Tournament) -> Option<Embedding> {
    if pattern.order() > host.order() {
        return None;
    }
    let matcher = Matcher::new(host, pattern);
    let mut assigned = Vec::with_capacity(pattern.order());
    matcher.first(&mut assigned).then_some(Embedding(assigned))
}

pub fn contains(host: &Tournament, pattern: &Tournament) -> bool {
    find_subtournament(host, pattern).is_some()
}

/// Number of labeled embeddings of `pattern` into `host`.
///
/// Between tournaments every homomorphism is injective, so this is also the
/// homomorphism count.
pub fn hom_count(pattern: &Tournament, host: &Tournament) -> u128 {
    if pattern.order() > host.order() {
        return 0;
    }
    if pattern.order() == 0 {
        return 1;
    }
    let matcher = Matcher::new(host, pattern);
    let roots: Vec<usize> = matcher.admissible[0].ones().collect();
    roots
        .par_iter()
        .map(|&v| matcher.count(&mut vec![v]))
        .sum()
}

/// `hom_count / |V(host)|^{|V(pattern)|}` as a reduced fraction `(num, den)`.
pub fn hom_count_density(pattern: &Tournament, host: &Tournament) -> (u128, u128) {
    let count = hom_count(pattern, host);
    let den = (host.order() as u128).pow(pattern.order() as u32);
    let g = gcd(count, den);
    (count / g.max(1), den / g.max(1))
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
