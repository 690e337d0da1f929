//! Canonical labeling of tournaments and isomorphism-class enumeration.
//!
//! Canonical forms come from individualization-refinement: an equitable
//! ordered partition is computed from out-degree counts into each cell, the
//! first non-singleton cell is branched on, and the largest relabeled
//! tournament over all leaves is the canonical representative.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::digraph::Tournament;
use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_CAP: usize = 7;
/// Enumeration is never allowed past this order (6880 classes at `n = 8`).
pub const MAX_ENUMERATION_ORDER: usize = 8;

/// Isomorphism-invariant representative: `canonical_form(a) == canonical_form(b)` iff `a ≅ b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Tournament);

impl CanonicalForm {
    pub fn tournament(&self) -> &Tournament {
        &self.0
    }

    pub fn into_tournament(self) -> Tournament {
        self.0
    }

    /// Order followed by the upper-triangle orientation bits.
    pub fn to_bit_string(&self) -> String {
        let bits: String = self.0.upper_triangle_bits().map(|b| if b { '1' } else { '0' }).collect();
        format!("{}:{}", self.0.order(), bits)
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_bit_string())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

type Partition = Vec<Vec<usize>>;

fn refine(t: &Tournament, mut cells: Partition) -> Partition {
    let n = t.order();
    let mut cell_of = vec![0usize; n];
    loop {
        for (ci, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = ci;
            }
        }
        let before = cells.len();
        let mut next = Vec::with_capacity(n);
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<usize>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut sig = vec![0usize; cells.len()];
                    for u in 0..n {
                        if t.beats(v, u) {
                            sig[cell_of[u]] += 1;
                        }
                    }
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        cells = next;
        if cells.len() == before {
            return cells;
        }
    }
}

fn search(t: &Tournament, cells: Partition, best: &mut Option<Tournament>) {
    let cells = refine(t, cells);
    match cells.iter().position(|c| c.len() > 1) {
        None => {
            let mut perm = vec![0; t.order()];
            for (pos, cell) in cells.iter().enumerate() {
                perm[cell[0]] = pos;
            }
            let candidate = t.relabel(&perm);
            if best.as_ref().is_none_or(|b| candidate > *b) {
                *best = Some(candidate);
            }
        }
        Some(target) => {
            for &v in &cells[target] {
                let mut split = Vec::with_capacity(cells.len() + 1);
                split.extend(cells[..target].iter().cloned());
                split.push(vec![v]);
                split.push(cells[target].iter().copied().filter(|&u| u != v).collect());
                split.extend(cells[target + 1..].iter().cloned());
                search(t, split, best);
            }
        }
    }
}

pub fn canonical_form(t: &Tournament) -> CanonicalForm {
    if t.order() == 0 {
        return CanonicalForm(t.clone());
    }
    let mut best = None;
    search(t, vec![(0..t.order()).collect()], &mut best);
    CanonicalForm(best.expect("search reaches at least one leaf"))
}

pub fn are_isomorphic(a: &Tournament, b: &Tournament) -> bool {
    a.order() == b.order() && canonical_form(a) == canonical_form(b)
}

/// One representative per isomorphism class of `n`-vertex tournaments, in
/// canonical order. `n` must not exceed [`DEFAULT_ENUMERATION_CAP`].
pub fn enumerate_tournaments(n: usize) -> Result<Vec<Tournament>> {
    enumerate_tournaments_capped(n, DEFAULT_ENUMERATION_CAP)
}

/// As [`enumerate_tournaments`] with a raised cap (at most [`MAX_ENUMERATION_ORDER`]).
pub fn enumerate_tournaments_capped(n: usize, cap: usize) -> Result<Vec<Tournament>> {
    let cap = cap.min(MAX_ENUMERATION_ORDER);
    if n > cap {
        return Err(Error::CapExceeded { what: "enumeration order", value: n as u128, cap: cap as u128 });
    }
    if n == 0 {
        return Ok(vec![Tournament::from_fn(0, |_, _| false)]);
    }
    let mut level: Vec<Tournament> = vec![Tournament::from_fn(1, |_, _| false)];
    for k in 2..=n {
        let classes: BTreeSet<CanonicalForm> = level
            .par_iter()
            .flat_map_iter(|rep| {
                (0u32..1 << (k - 1)).map(move |mask| {
                    // new vertex k-1 beats u iff bit u of mask is set
                    let grown = Tournament::from_fn(k, |i, j| {
                        if j == k - 1 {
                            mask >> i & 1 == 0
                        } else {
                            rep.beats(i, j)
                        }
                    });
                    canonical_form(&grown)
                })
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        level = classes.into_iter().map(CanonicalForm::into_tournament).collect();
    }
    Ok(level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{carousel, cyclic_triangle, forbidden, transitive, Forbidden};

    #[test]
    fn cyclic_triangle_labelings_agree() {
        let c3 = cyclic_triangle();
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let forms: BTreeSet<_> = perms.iter().map(|p| canonical_form(&c3.relabel(p))).collect();
        assert_eq!(forms.len(), 1);
        assert_ne!(canonical_form(&c3), canonical_form(&transitive(3)));
    }

    #[test]
    fn carousel_five_is_c5() {
        assert_eq!(canonical_form(&carousel(5).unwrap()), canonical_form(&forbidden(Forbidden::C5)));
    }

    #[test]
    fn reversal_dualities() {
        let w4 = forbidden(Forbidden::W4);
        let l4 = forbidden(Forbidden::L4);
        assert!(are_isomorphic(&w4.reverse(), &l4));
        assert!(!are_isomorphic(&w4, &l4));
        let c5 = forbidden(Forbidden::C5);
        assert!(are_isomorphic(&c5.reverse(), &c5));
        for n in 1..7 {
            assert!(are_isomorphic(&transitive(n).reverse(), &transitive(n)));
        }
    }

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_tournaments(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 12, 56]);
        assert!(enumerate_tournaments(8).is_err());
        assert!(enumerate_tournaments_capped(9, 9).is_err());
    }

    #[test]
    fn enumeration_is_deterministic() {
        assert_eq!(enumerate_tournaments(5).unwrap(), enumerate_tournaments(5).unwrap());
    }
}
