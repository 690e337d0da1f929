//! Named tournaments and pattern digraphs.
//!
//! Blow-up conventions used throughout: the parts of `C[a,b,c]` and `T[a,b,c]`
//! occupy the label ranges `0..a`, `a..a+b` and `a+b..a+b+c`, with all arcs
//! directed from the first part to the second, the second to the third and the
//! third back to the first.

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, Tournament};
use crate::error::{Error, Result};

/// Largest iterated blow-up built unless the caller raises the cap.
pub const DEFAULT_BLOWUP_VERTEX_CAP: usize = 729;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Forbidden {
    W4,
    L4,
    C5,
}

impl Forbidden {
    pub const ALL: [Forbidden; 3] = [Forbidden::W4, Forbidden::L4, Forbidden::C5];

    pub fn name(self) -> &'static str {
        match self {
            Forbidden::W4 => "W4",
            Forbidden::L4 => "L4",
            Forbidden::C5 => "C5",
        }
    }
}

impl std::str::FromStr for Forbidden {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "W4" => Ok(Forbidden::W4),
            "L4" => Ok(Forbidden::L4),
            "C5" => Ok(Forbidden::C5),
            _ => Err(Error::InvalidParameter(format!("unknown forbidden tournament `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StarOrientation {
    /// Center is the source (`S⁺[k]`).
    Source,
    /// Center is the sink (`S⁻[k]`).
    Sink,
}

/// `i → j` iff `i < j`.
pub fn transitive(n: usize) -> Tournament {
    Tournament::from_fn(n, |_, _| true)
}

/// Vertices `Z_v`, `x → y` iff `y − x ∈ {1, …, (v−1)/2} (mod v)`.
pub fn carousel(v: usize) -> Result<Tournament> {
    if v < 3 || v.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("carousel size must be odd and at least 3, got {v}")));
    }
    let half = (v - 1) / 2;
    Ok(Tournament::from_fn(v, |x, y| (y - x) <= half))
}

fn check_parts(parts: &[usize]) -> Result<()> {
    if parts.contains(&0) {
        return Err(Error::InvalidParameter(format!("part sizes must be positive, got {parts:?}")));
    }
    Ok(())
}

fn part_of(v: usize, a: usize, b: usize) -> usize {
    if v < a {
        0
    } else if v < a + b {
        1
    } else {
        2
    }
}

/// Cross-part arc direction shared by `C[a,b,c]` and `T[a,b,c]`.
fn cyclic_forward(pu: usize, pv: usize) -> bool {
    (pu + 1) % 3 == pv
}

/// Blow-up of the cyclic triangle with transitive parts.
pub fn tabc(a: usize, b: usize, c: usize) -> Result<Tournament> {
    check_parts(&[a, b, c])?;
    Ok(Tournament::from_fn(a + b + c, |i, j| {
        let (pi, pj) = (part_of(i, a, b), part_of(j, a, b));
        pi == pj || cyclic_forward(pi, pj)
    }))
}

/// Blow-up of the cyclic triangle with independent parts.
pub fn cabc(a: usize, b: usize, c: usize) -> Result<Digraph> {
    check_parts(&[a, b, c])?;
    let n = a + b + c;
    let mut edges = Vec::with_capacity(a * b + b * c + c * a);
    for u in 0..n {
        for v in 0..n {
            if cyclic_forward(part_of(u, a, b), part_of(v, a, b)) {
                edges.push((u, v));
            }
        }
    }
    Digraph::new(n, edges)
}

/// `C[1,1,c]` without the arc between the singleton parts: vertex `0` is the
/// source, `1..=c` the middle vertices and `c + 1` the sink.
pub fn b_graph(c: usize) -> Result<Digraph> {
    check_parts(&[c])?;
    let sink = c + 1;
    let edges = (1..=c).flat_map(|m| [(0, m), (m, sink)]);
    Digraph::new(c + 2, edges)
}

/// The `k`-leaf star with center `0`.
pub fn star(k: usize, orientation: StarOrientation) -> Result<Digraph> {
    check_parts(&[k])?;
    let edges = (1..=k).map(|leaf| match orientation {
        StarOrientation::Source => (0, leaf),
        StarOrientation::Sink => (leaf, 0),
    });
    Digraph::new(k + 1, edges)
}

/// `W4`: source `0` over the cyclic triangle `1 → 2 → 3 → 1`.
/// `L4`: cyclic triangle `0 → 1 → 2 → 0` over the sink `3`.
/// `C5`: the carousel on `Z_5`.
pub fn forbidden(kind: Forbidden) -> Tournament {
    let arcs: &[(usize, usize)] = match kind {
        Forbidden::W4 => &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)],
        Forbidden::L4 => &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)],
        Forbidden::C5 => {
            return Tournament::from_fn(5, |u, v| matches!((v + 5 - u) % 5, 1 | 2));
        }
    };
    Tournament::from_arcs(4, arcs).expect("hard-coded tournament")
}

pub fn cyclic_triangle() -> Tournament {
    tabc(1, 1, 1).expect("positive parts")
}

/// Vertices `Z_3^depth` in base-3 with the first coordinate most significant;
/// `x → y` iff `y_i − x_i ≡ 1 (mod 3)` at the first differing coordinate `i`.
pub fn iterated_blowup(depth: usize) -> Result<Tournament> {
    iterated_blowup_capped(depth, DEFAULT_BLOWUP_VERTEX_CAP)
}

pub fn iterated_blowup_capped(depth: usize, vertex_cap: usize) -> Result<Tournament> {
    if depth == 0 {
        return Err(Error::InvalidParameter("blow-up depth must be at least 1".into()));
    }
    let n = 3usize
        .checked_pow(depth as u32)
        .filter(|&n| n <= vertex_cap)
        .ok_or(Error::CapExceeded {
            what: "iterated blow-up vertex count",
            value: 3u128.saturating_pow(depth as u32),
            cap: vertex_cap as u128,
        })?;
    let digits = |mut x: usize| {
        let mut d = vec![0; depth];
        for slot in d.iter_mut().rev() {
            *slot = x % 3;
            x /= 3;
        }
        d
    };
    let coords: Vec<Vec<usize>> = (0..n).map(digits).collect();
    Ok(Tournament::from_fn(n, |x, y| {
        let (cx, cy) = (&coords[x], &coords[y]);
        let i = (0..depth).find(|&i| cx[i] != cy[i]).expect("distinct vertices differ");
        (cy[i] + 3 - cx[i]) % 3 == 1
    }))
}
