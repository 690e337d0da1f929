//! Homomorphism densities `t(H, W)` in step tournamentons and the auxiliary
//! kernels built from `W`.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};
use crate::tournamenton::StepTournamenton;

/// Default bound on the number of part assignments `m^{|V(H)|}` enumerated.
pub const DEFAULT_ASSIGNMENT_CAP: u128 = 100_000_000;

/// Below this many assignments the enumeration stays on the calling thread.
const PARALLEL_THRESHOLD: u128 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityResult<S> {
    pub value: S,
    /// Complete assignments with a non-zero integrand.
    pub assignments: u64,
    pub mode: Mode,
}

fn check_cap(m: usize, k: usize, cap: u128, what: &'static str) -> Result<u128> {
    let total = (m as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::CapExceeded { what, value: total, cap });
    }
    Ok(total)
}

/// Vertex order in which every vertex has as many arcs as possible back to
/// already placed vertices, so zero factors prune early.
fn elimination_order(h: &Digraph) -> Vec<usize> {
    let n = h.order();
    let degree: Vec<usize> = (0..n).map(|v| h.out_neighbors(v).len() + h.in_neighbors(v).len()).collect();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let back = order.iter().filter(|&&u| h.adjacent(u, v)).count();
                (back, degree[v], std::cmp::Reverse(v))
            })
            .expect("unplaced vertex exists");
        placed[next] = true;
        order.push(next);
    }
    order
}

/// For each position in the order: arcs to earlier positions as
/// `(earlier position, arc points from the earlier vertex to this one)`.
fn back_arcs(h: &Digraph, order: &[usize]) -> Vec<Vec<(usize, bool)>> {
    let mut pos = vec![0; h.order()];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let mut arcs = vec![Vec::new(); order.len()];
    for &(u, v) in h.edges() {
        let (pu, pv) = (pos[u], pos[v]);
        if pu < pv {
            arcs[pv].push((pu, true));
        } else {
            arcs[pu].push((pv, false));
        }
    }
    arcs
}

struct Enumerator<'a, R> {
    m: usize,
    weights: &'a [R],
    blocks: &'a [R],
    arcs: &'a [Vec<(usize, bool)>],
}

impl<R> Enumerator<'_, R>
where
    R: Clone + Zero + One + std::ops::Mul<Output = R>,
{
    fn factor(&self, depth: usize, part: usize, assignment: &[usize]) -> Option<R> {
        let mut f = self.weights[part].clone();
        for &(q, forward) in &self.arcs[depth] {
            let other = assignment[q];
            let entry = if forward {
                &self.blocks[other * self.m + part]
            } else {
                &self.blocks[part * self.m + other]
            };
            if entry.is_zero() {
                return None;
            }
            f = f * entry.clone();
        }
        if f.is_zero() {
            None
        } else {
            Some(f)
        }
    }

    fn run(&self, assignment: &mut Vec<usize>, partial: R) -> (R, u64) {
        let depth = assignment.len();
        if depth == self.arcs.len() {
            return (partial, 1);
        }
        let mut sum = R::zero();
        let mut count = 0;
        for part in 0..self.m {
            if let Some(f) = self.factor(depth, part, assignment) {
                assignment.push(part);
                let (s, c) = self.run(assignment, partial.clone() * f);
                assignment.pop();
                sum = sum + s;
                count += c;
            }
        }
        (sum, count)
    }
}

/// `t(H, W) = Σ_φ Π_v α_{φ(v)} Π_{vw ∈ E(H)} M[φ(v)][φ(w)]` over all maps `φ: V(H) → parts`.
///
/// Exact mode accumulates integer numerators over one common denominator.
/// Work is split over the part of the first vertex and partial sums are
/// combined in part order, so float results do not depend on the thread count.
pub fn hom_density_capped<S: Scalar>(h: &Digraph, w: &StepTournamenton<S>, cap: u128) -> Result<DensityResult<S>> {
    let m = w.parts();
    let total = check_cap(m, h.order(), cap, "assignment count")?;
    if h.order() == 0 {
        return Ok(DensityResult { value: S::one(), assignments: 1, mode: S::MODE });
    }
    let order = elimination_order(h);
    let arcs = back_arcs(h, &order);
    let (weights, wden) = S::to_ring(w.weights());
    let (blocks, bden) = S::to_ring(w.blocks_flat());
    let e = Enumerator { m, weights: &weights, blocks: &blocks, arcs: &arcs };

    let branch = |part: usize| -> (S::Ring, u64) {
        match e.factor(0, part, &[]) {
            Some(f) => e.run(&mut vec![part], f),
            None => (S::Ring::zero(), 0),
        }
    };
    let partials: Vec<(S::Ring, u64)> = if total >= PARALLEL_THRESHOLD {
        (0..m).into_par_iter().map(branch).collect()
    } else {
        (0..m).map(branch).collect()
    };
    let mut numer = S::Ring::zero();
    let mut assignments = 0;
    for (s, c) in partials {
        numer = numer + s;
        assignments += c;
    }
    let denom = wden.powu(h.order() as u32) * bden.powu(h.edge_count() as u32);
    Ok(DensityResult { value: S::from_ring(numer) / denom, assignments, mode: S::MODE })
}

pub fn hom_density<S: Scalar>(h: &Digraph, w: &StepTournamenton<S>) -> Result<DensityResult<S>> {
    hom_density_capped(h, w, DEFAULT_ASSIGNMENT_CAP)
}

/// Density value only, with the default cap.
pub fn density<S: Scalar>(h: &Digraph, w: &StepTournamenton<S>) -> Result<S> {
    hom_density(h, w).map(|r| r.value)
}

/// Paths of length two and common out-neighbourhoods:
/// `G[i][j] = Σ_l α_l M[i][l] M[l][j]` and `F[i][j] = Σ_l α_l M[i][l] M[j][l]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathKernels<S> {
    pub g: Vec<Vec<S>>,
    pub f: Vec<Vec<S>>,
}

pub fn path2_kernel<S: Scalar>(w: &StepTournamenton<S>) -> PathKernels<S> {
    let m = w.parts();
    let mut g = vec![vec![S::zero(); m]; m];
    let mut f = vec![vec![S::zero(); m]; m];
    for i in 0..m {
        for j in 0..m {
            for l in 0..m {
                let a = w.weight(l).clone() * w.block(i, l).clone();
                g[i][j] = g[i][j].clone() + a.clone() * w.block(l, j).clone();
                f[i][j] = f[i][j].clone() + a * w.block(j, l).clone();
            }
        }
    }
    PathKernels { g, f }
}

/// Largest tuple arity supported by [`kernel_tables`].
pub const MAX_KERNEL_ARITY: usize = 4;

/// Common out-/in-neighbourhood sizes of a tuple of parts and the density of
/// arcs from the common out-neighbourhood to the common in-neighbourhood.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelEntry<S> {
    pub tuple: Vec<usize>,
    /// Product of the tuple's part weights.
    pub weight: S,
    pub n_plus: S,
    pub n_minus: S,
    /// Zero whenever `n_plus * n_minus` is zero.
    pub d: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelTable<S> {
    pub arity: usize,
    pub entries: Vec<KernelEntry<S>>,
}

pub fn kernel_tables<S: Scalar>(w: &StepTournamenton<S>, k: usize) -> Result<KernelTable<S>> {
    kernel_tables_capped(w, k, DEFAULT_ASSIGNMENT_CAP)
}

pub fn kernel_tables_capped<S: Scalar>(w: &StepTournamenton<S>, k: usize, cap: u128) -> Result<KernelTable<S>> {
    if k == 0 || k > MAX_KERNEL_ARITY {
        return Err(Error::InvalidParameter(format!("kernel arity must be in 1..={MAX_KERNEL_ARITY}, got {k}")));
    }
    let m = w.parts();
    let count = check_cap(m, k, cap, "kernel tuple count")? as usize;
    let entries = (0..count)
        .into_par_iter()
        .map(|code| {
            let mut tuple = vec![0; k];
            let mut rest = code;
            for slot in tuple.iter_mut().rev() {
                *slot = rest % m;
                rest /= m;
            }
            kernel_entry(w, tuple)
        })
        .collect();
    Ok(KernelTable { arity: k, entries })
}

fn kernel_entry<S: Scalar>(w: &StepTournamenton<S>, tuple: Vec<usize>) -> KernelEntry<S> {
    let m = w.parts();
    let weight = tuple.iter().fold(S::one(), |a, &i| a * w.weight(i).clone());
    // out_mass[y] = α_y Π_t M[x_t][y], in_mass[z] = α_z Π_t M[z][x_t]
    let out_mass: Vec<S> = (0..m)
        .map(|y| tuple.iter().fold(w.weight(y).clone(), |a, &x| a * w.block(x, y).clone()))
        .collect();
    let in_mass: Vec<S> = (0..m)
        .map(|z| tuple.iter().fold(w.weight(z).clone(), |a, &x| a * w.block(z, x).clone()))
        .collect();
    let n_plus = out_mass.iter().fold(S::zero(), |a, v| a + v.clone());
    let n_minus = in_mass.iter().fold(S::zero(), |a, v| a + v.clone());
    let mut numer = S::zero();
    for y in 0..m {
        if out_mass[y].is_zero() {
            continue;
        }
        for z in 0..m {
            numer = numer + out_mass[y].clone() * w.block(y, z).clone() * in_mass[z].clone();
        }
    }
    let both = n_plus.clone() * n_minus.clone();
    let d = if both.is_zero() { S::zero() } else { numer / both };
    KernelEntry { tuple, weight, n_plus, n_minus, d }
}

impl<S: Scalar> KernelTable<S> {
    fn integrate(&self, f: impl Fn(&KernelEntry<S>) -> S) -> S {
        self.entries.iter().fold(S::zero(), |a, e| a + e.weight.clone() * f(e))
    }

    /// `∫ N⁺ N⁻`, which is `t(B[k], W)`.
    pub fn b_density(&self) -> S {
        self.integrate(|e| e.n_plus.clone() * e.n_minus.clone())
    }

    /// `∫ N⁺ D N⁻`, which is `t(C[1,1,k], W)`.
    pub fn c11k_density(&self) -> S {
        self.integrate(|e| e.n_plus.clone() * e.d.clone() * e.n_minus.clone())
    }

    /// `∫ (N⁺)^a D^{ab} (N⁻)^b`, the lower bound for `t(C[a,b,k], W)`.
    pub fn cabk_lower_bound(&self, a: u32, b: u32) -> S {
        self.integrate(|e| e.n_plus.powu(a) * e.d.powu(a * b) * e.n_minus.powu(b))
    }

    /// `∫ N⁺`, which is `t(S⁻[k], W)`.
    pub fn n_plus_integral(&self) -> S {
        self.integrate(|e| e.n_plus.clone())
    }

    /// `∫ N⁻`, which is `t(S⁺[k], W)`.
    pub fn n_minus_integral(&self) -> S {
        self.integrate(|e| e.n_minus.clone())
    }
}

/// Partial derivatives `∂t(H, W)/∂M[i][j]`, treating the `m²` block values as
/// independent variables.
///
/// Each assignment contributes, for every arc `e`, the product of all other
/// factors to the entry addressed by `e`; those products come from prefix and
/// suffix products, never from division.
pub fn density_gradient(h: &Digraph, w: &StepTournamenton<f64>) -> Result<Vec<Vec<f64>>> {
    density_and_gradient(h, w, DEFAULT_ASSIGNMENT_CAP).map(|(_, g)| g)
}

/// Objective and gradient in one pass over the assignments.
pub fn density_and_gradient(h: &Digraph, w: &StepTournamenton<f64>, cap: u128) -> Result<(f64, Vec<Vec<f64>>)> {
    let m = w.parts();
    let n = h.order();
    let total = check_cap(m, n, cap, "assignment count")?;
    let edges = h.edges();
    let job = |first: usize| -> (f64, Vec<f64>) {
        let mut grad = vec![0.0; m * m];
        let mut value = 0.0;
        let mut phi = vec![0usize; n];
        let mut prefix = vec![0.0; edges.len() + 1];
        let mut suffix = vec![0.0; edges.len() + 1];
        let rest = if n == 0 { 1 } else { (m as u128).pow(n as u32 - 1) };
        for code in 0..rest {
            let mut c = code;
            if n > 0 {
                phi[0] = first;
            }
            for slot in phi.iter_mut().skip(1).rev() {
                *slot = (c % m as u128) as usize;
                c /= m as u128;
            }
            let alpha: f64 = phi.iter().map(|&p| w.weight(p)).product();
            prefix[0] = alpha;
            for (k, &(u, v)) in edges.iter().enumerate() {
                prefix[k + 1] = prefix[k] * w.block(phi[u], phi[v]);
            }
            suffix[edges.len()] = 1.0;
            for (k, &(u, v)) in edges.iter().enumerate().rev() {
                suffix[k] = suffix[k + 1] * w.block(phi[u], phi[v]);
            }
            value += prefix[edges.len()];
            for (k, &(u, v)) in edges.iter().enumerate() {
                grad[phi[u] * m + phi[v]] += prefix[k] * suffix[k + 1];
            }
        }
        (value, grad)
    };
    let firsts = if n == 0 { 1 } else { m };
    let partials: Vec<(f64, Vec<f64>)> = if total >= PARALLEL_THRESHOLD {
        (0..firsts).into_par_iter().map(job).collect()
    } else {
        (0..firsts).map(job).collect()
    };
    let mut value = 0.0;
    let mut grad = vec![0.0; m * m];
    for (v, g) in partials {
        value += v;
        for (a, b) in grad.iter_mut().zip(g) {
            *a += b;
        }
    }
    Ok((value, grad.chunks(m).map(<[f64]>::to_vec).collect()))
}
