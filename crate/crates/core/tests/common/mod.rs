//! Test-only oracles. They are written from the definitions with plain loops
//! and share no evaluation code with the library.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use regtourn::digraph::{Digraph, Tournament};
use regtourn::tournamenton::StepTournamenton;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `2^{-e}` as an exact rational.
pub fn inv_pow2(e: u32) -> Q {
    Q::new(BigInt::one(), BigInt::one() << e)
}

/// Adjacency matrix of a tournament: `adj[i][j]` iff `i → j`.
pub fn adjacency(t: &Tournament) -> Vec<Vec<bool>> {
    let n = t.order();
    (0..n).map(|i| (0..n).map(|j| i != j && t.beats(i, j)).collect()).collect()
}

pub fn tournament_from_adjacency(adj: &[Vec<bool>]) -> Tournament {
    Tournament::from_fn(adj.len(), |i, j| adj[i][j])
}

/// All labeled tournaments on `n` vertices, as adjacency matrices.
pub fn all_labeled(n: usize) -> Vec<Vec<Vec<bool>>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let mut adj = vec![vec![false; n]; n];
            for (bit, &(i, j)) in pairs.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    adj[i][j] = true;
                } else {
                    adj[j][i] = true;
                }
            }
            adj
        })
        .collect()
}

/// Heap's algorithm over `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            p.swap(j, k - 1);
        }
    }
    let mut out = Vec::new();
    heap(n, &mut (0..n).collect(), &mut out);
    out
}

/// Brute-force canonical key: the least upper-triangle bit string over all
/// relabelings.
pub fn brute_canonical(adj: &[Vec<bool>], perms: &[Vec<usize>]) -> Vec<bool> {
    let n = adj.len();
    perms
        .iter()
        .map(|p| {
            let mut key = Vec::with_capacity(n * n / 2);
            for i in 0..n {
                for j in i + 1..n {
                    key.push(adj[p[i]][p[j]]);
                }
            }
            key
        })
        .min()
        .unwrap_or_default()
}

pub fn brute_isomorphic(a: &[Vec<bool>], b: &[Vec<bool>]) -> bool {
    a.len() == b.len() && {
        let perms = permutations(a.len());
        brute_canonical(a, &perms) == brute_canonical(b, &perms)
    }
}

/// Number of arc-preserving maps `V(pattern) → V(host)`; for tournaments
/// these are exactly the injective embeddings.
pub fn brute_hom_count(pattern: &[Vec<bool>], host: &[Vec<bool>]) -> u64 {
    fn extend(k: usize, map: &mut Vec<usize>, pattern: &[Vec<bool>], host: &[Vec<bool>]) -> u64 {
        if k == pattern.len() {
            return 1;
        }
        let mut total = 0;
        for v in 0..host.len() {
            let ok = (0..k).all(|u| {
                (!pattern[u][k] || host[map[u]][v]) && (!pattern[k][u] || host[v][map[u]])
            });
            if ok {
                map.push(v);
                total += extend(k + 1, map, pattern, host);
                map.pop();
            }
        }
        total
    }
    extend(0, &mut Vec::new(), pattern, host)
}

/// Whether some vertex subset of `host` induces a copy of `pattern`.
pub fn brute_contains(host: &[Vec<bool>], pattern: &[Vec<bool>]) -> bool {
    brute_hom_count(pattern, host) > 0
}

pub fn transitive_adj(n: usize) -> Vec<Vec<bool>> {
    (0..n).map(|i| (0..n).map(|j| i < j).collect()).collect()
}

/// `W4`, `L4` and `C5` from their descriptions.
pub fn w4() -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; 4]; 4];
    for v in 1..4 {
        adj[0][v] = true;
    }
    adj[1][2] = true;
    adj[2][3] = true;
    adj[3][1] = true;
    adj
}

pub fn l4() -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; 4]; 4];
    for v in 0..3 {
        adj[v][3] = true;
    }
    adj[0][1] = true;
    adj[1][2] = true;
    adj[2][0] = true;
    adj
}

pub fn c5() -> Vec<Vec<bool>> {
    (0..5).map(|i| (0..5).map(|j| j == (i + 1) % 5 || j == (i + 2) % 5).collect()).collect()
}

/// Tries every 3-colouring for a `T[a,b,c]` structure: non-empty transitive
/// classes with every cross arc going class 0 → 1 → 2 → 0.
pub fn brute_is_tabc(adj: &[Vec<bool>]) -> bool {
    let n = adj.len();
    let total = 3usize.pow(n as u32);
    (0..total).any(|code| {
        let colour: Vec<usize> = (0..n).map(|v| code / 3usize.pow(v as u32) % 3).collect();
        if (0..3).any(|c| !colour.contains(&c)) {
            return false;
        }
        let cross_ok = (0..n).all(|u| {
            (0..n).all(|v| colour[u] == colour[v] || adj[u][v] == ((colour[u] + 1) % 3 == colour[v]))
        });
        cross_ok
            && (0..3).all(|c| {
                let members: Vec<usize> = (0..n).filter(|&v| colour[v] == c).collect();
                is_transitive_adj(adj, &members)
            })
    })
}

/// A tournament on `vs` is transitive iff it has no directed triangle.
pub fn is_transitive_adj(adj: &[Vec<bool>], vs: &[usize]) -> bool {
    for &x in vs {
        for &y in vs {
            for &z in vs {
                if adj[x][y] && adj[y][z] && adj[z][x] {
                    return false;
                }
            }
        }
    }
    true
}

/// Edge list of `C[a,b,c]`: parts `0..a`, `a..a+b`, `a+b..n`, arcs between
/// consecutive parts in cyclic order.
pub fn cabc_edges(a: usize, b: usize, c: usize) -> (usize, Vec<(usize, usize)>) {
    let parts = [0..a, a..a + b, a + b..a + b + c];
    let mut edges = Vec::new();
    for p in 0..3 {
        for u in parts[p].clone() {
            for v in parts[(p + 1) % 3].clone() {
                edges.push((u, v));
            }
        }
    }
    (a + b + c, edges)
}

pub fn cabc_graph(a: usize, b: usize, c: usize) -> Digraph {
    let (n, edges) = cabc_edges(a, b, c);
    Digraph::new(n, edges).unwrap()
}

/// `T[a,b,c]`: `C[a,b,c]` plus transitive tournaments inside the parts.
pub fn tabc_graph(a: usize, b: usize, c: usize) -> Digraph {
    let (n, mut edges) = cabc_edges(a, b, c);
    for part in [0..a, a..a + b, a + b..n] {
        for u in part.clone() {
            for v in u + 1..part.end {
                edges.push((u, v));
            }
        }
    }
    Digraph::new(n, edges).unwrap()
}

/// `B[k]`: a source and a sink joined through `k` middle vertices.
pub fn b_graph(k: usize) -> Digraph {
    let edges = (1..=k).flat_map(|v| [(0, v), (v, k + 1)]);
    Digraph::new(k + 2, edges).unwrap()
}

pub fn star_graph(k: usize, out: bool) -> Digraph {
    Digraph::new(k + 1, (1..=k).map(|v| if out { (0, v) } else { (v, 0) })).unwrap()
}

pub fn transitive_graph(n: usize) -> Digraph {
    Digraph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
}

/// Weights and blocks of a step tournamenton as plain matrices.
pub fn raw_parts<S: regtourn::scalar::Scalar>(w: &StepTournamenton<S>) -> (Vec<S>, Vec<Vec<S>>) {
    (w.weights().to_vec(), w.block_rows())
}

/// `t(H, W)` by summing over every map `V(H) → parts`.
pub fn naive_density(h: &Digraph, weights: &[Q], blocks: &[Vec<Q>]) -> Q {
    let n = h.order();
    let m = weights.len();
    let mut phi = vec![0usize; n];
    let mut total = Q::zero();
    loop {
        let mut term = Q::one();
        for &v in &phi {
            term *= &weights[v];
        }
        for &(u, v) in h.edges() {
            if term.is_zero() {
                break;
            }
            term *= &blocks[phi[u]][phi[v]];
        }
        total += term;
        if !advance(&mut phi, m) {
            return total;
        }
    }
}

pub fn naive_density_f64(h: &Digraph, weights: &[f64], blocks: &[Vec<f64>]) -> f64 {
    let n = h.order();
    let m = weights.len();
    let mut phi = vec![0usize; n];
    let mut total = 0.0;
    loop {
        let mut term: f64 = phi.iter().map(|&v| weights[v]).product();
        for &(u, v) in h.edges() {
            term *= blocks[phi[u]][phi[v]];
        }
        total += term;
        if !advance(&mut phi, m) {
            return total;
        }
    }
}

/// Odometer step over `0..m` digits; false after the last tuple.
pub fn advance(digits: &mut [usize], m: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < m {
            return true;
        }
        *d = 0;
    }
    false
}

/// `max |M[i][j] − 1/2|`.
pub fn deviation(blocks: &[Vec<Q>]) -> Q {
    let half = q(1, 2);
    blocks
        .iter()
        .flatten()
        .map(|v| {
            let d = v - &half;
            if d < Q::zero() { -d } else { d }
        })
        .max()
        .unwrap_or_else(Q::zero)
}

/// Every row integral `Σ_j α_j M[i][j]` equals `1/2`.
pub fn is_regular(weights: &[Q], blocks: &[Vec<Q>]) -> bool {
    blocks.iter().all(|row| {
        let s: Q = row.iter().zip(weights).map(|(b, a)| b * a).sum();
        s == q(1, 2)
    })
}

/// Right-hand side of the `C[a,b,k]` bound, from the definitions of the
/// common-neighbourhood masses and their arc density.
pub fn naive_cabk_bound(weights: &[Q], blocks: &[Vec<Q>], a: u32, b: u32, k: usize) -> Q {
    let m = weights.len();
    let mut x = vec![0usize; k];
    let mut total = Q::zero();
    loop {
        let mass: Q = x.iter().map(|&i| weights[i].clone()).product();
        let out_to = |y: usize| -> Q { x.iter().map(|&i| blocks[i][y].clone()).product() };
        let in_from = |z: usize| -> Q { x.iter().map(|&i| blocks[z][i].clone()).product() };
        let n_plus: Q = (0..m).map(|y| &weights[y] * out_to(y)).sum();
        let n_minus: Q = (0..m).map(|z| &weights[z] * in_from(z)).sum();
        let mut cross = Q::zero();
        for y in 0..m {
            for z in 0..m {
                cross += &weights[y] * &weights[z] * out_to(y) * &blocks[y][z] * in_from(z);
            }
        }
        let denom = &n_plus * &n_minus;
        let d = if denom.is_zero() { Q::zero() } else { cross / denom };
        total += mass * pow(&n_plus, a) * pow(&d, a * b) * pow(&n_minus, b);
        if !advance(&mut x, m) {
            return total;
        }
    }
}

pub fn pow(v: &Q, e: u32) -> Q {
    (0..e).fold(Q::one(), |acc, _| acc * v)
}
