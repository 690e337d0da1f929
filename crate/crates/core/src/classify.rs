//! Classification of tournaments into transitive tournaments, `T[a,b,c]`, and
//! tournaments containing `W4`, `L4` or `C5`, together with zero-density witnesses.

use std::fmt;

use crate::digraph::{Embedding, Tournament};
use crate::embed::find_subtournament;
use crate::error::{Error, Result};
use crate::families::{carousel, forbidden, iterated_blowup, Forbidden};
use crate::scalar::Scalar;
use crate::tournamenton::{propmax_construction, StepTournamenton};

/// A partition of the vertices into three transitive parts with every cross
/// arc going from part `p` to part `p + 1 (mod 3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabcDecomposition {
    pub sizes: [usize; 3],
    /// Vertex lists of the parts, each ascending.
    pub parts: [Vec<usize>; 3],
}

impl TabcDecomposition {
    /// Checks cross-part orientations and transitivity of each part.
    pub fn is_valid_for(&self, t: &Tournament) -> bool {
        let covered: usize = self.parts.iter().map(Vec::len).sum();
        if covered != t.order() || self.parts.iter().any(Vec::is_empty) {
            return false;
        }
        for p in 0..3 {
            let next = &self.parts[(p + 1) % 3];
            if !self.parts[p].iter().all(|&u| next.iter().all(|&v| t.beats(u, v))) {
                return false;
            }
            if !t.induced(&self.parts[p]).is_transitive() {
                return false;
            }
        }
        true
    }
}

/// Decomposes `t` as `T[a,b,c]` when possible.
///
/// Starting from the least cyclic triangle `u1 u2 u3`, every other vertex
/// joins `V_{i+1}` if `u_i` is its only in-neighbour among the triangle, or
/// `V_{j−1}` if `u_j` is its only out-neighbour. The result is verified and
/// reported in the cyclic rotation with lexicographically least sizes.
pub fn decompose_tabc(t: &Tournament) -> Option<TabcDecomposition> {
    let u = t.cyclic_triangle()?;
    let mut parts: [Vec<usize>; 3] = [vec![u[0]], vec![u[1]], vec![u[2]]];
    for v in (0..t.order()).filter(|v| !u.contains(v)) {
        let from: Vec<usize> = (0..3).filter(|&i| t.beats(u[i], v)).collect();
        let target = match from.len() {
            1 => (from[0] + 1) % 3,
            2 => {
                let j = (0..3).find(|i| !from.contains(i)).expect("one out-neighbour remains");
                (j + 2) % 3
            }
            _ => return None,
        };
        parts[target].push(v);
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    let rotation = (0..3)
        .min_by_key(|&r| [parts[r].len(), parts[(r + 1) % 3].len(), parts[(r + 2) % 3].len()])
        .expect("three rotations");
    parts.rotate_left(rotation);
    let decomposition = TabcDecomposition { sizes: [parts[0].len(), parts[1].len(), parts[2].len()], parts };
    decomposition.is_valid_for(t).then_some(decomposition)
}

/// First of `W4`, `L4`, `C5` (in that order) contained in `t`.
pub fn find_forbidden(t: &Tournament) -> Option<(Forbidden, Embedding)> {
    Forbidden::ALL
        .into_iter()
        .find_map(|kind| find_subtournament(t, &forbidden(kind)).map(|e| (kind, e)))
}

/// Recipe for a regular object in which a given tournament has density zero
/// (or, for `PropMaxBlocks`, a regular construction beating the random bound).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessRecipe {
    Carousel(usize),
    IteratedBlowup(usize),
    PropMaxBlocks(Tournament),
}

impl WitnessRecipe {
    /// The finite regular tournament behind the first two kinds.
    pub fn realize_tournament(&self) -> Result<Option<Tournament>> {
        match self {
            WitnessRecipe::Carousel(v) => carousel(*v).map(Some),
            WitnessRecipe::IteratedBlowup(depth) => iterated_blowup(*depth).map(Some),
            WitnessRecipe::PropMaxBlocks(_) => Ok(None),
        }
    }

    pub fn realize<S: Scalar>(&self) -> Result<StepTournamenton<S>> {
        match self {
            WitnessRecipe::PropMaxBlocks(t) => Ok(propmax_construction(t)),
            other => {
                let t = other.realize_tournament()?.expect("finite witness kinds realize a tournament");
                Ok(StepTournamenton::from_tournament(&t))
            }
        }
    }
}

impl fmt::Display for WitnessRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessRecipe::Carousel(v) => write!(f, "carousel({v})"),
            WitnessRecipe::IteratedBlowup(d) => write!(f, "iterated-blowup({d})"),
            WitnessRecipe::PropMaxBlocks(t) => write!(f, "propmax({} vertices)", t.order()),
        }
    }
}

/// Smallest depth whose blow-up has more than `n` vertices.
pub fn blowup_depth_for(n: usize) -> usize {
    let mut depth = 1;
    let mut size = 3usize;
    while size <= n {
        depth += 1;
        size *= 3;
    }
    depth
}

/// Witness for a tournament containing a forbidden pattern: a carousel on
/// `2n + 1` vertices when `W4` or `L4` is present, otherwise an iterated
/// blow-up with more than `n` vertices. By monotonicity under sub-tournaments
/// the density of `t` is zero in either.
pub fn zero_density_witness(t: &Tournament) -> Result<WitnessRecipe> {
    match find_forbidden(t) {
        Some((Forbidden::W4 | Forbidden::L4, _)) => Ok(WitnessRecipe::Carousel(2 * t.order() + 1)),
        Some((Forbidden::C5, _)) => Ok(WitnessRecipe::IteratedBlowup(blowup_depth_for(t.order()))),
        None => Err(Error::NoWitness),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Transitive(usize),
    Tabc(TabcDecomposition),
    NotSidorenko { kind: Forbidden, embedding: Embedding, witness: WitnessRecipe },
}

/// Whether the constant tournamenton is the unique minimizer of `t(T, ·)`
/// among regular tournamentons.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Forcing {
    UniqueMinimizer,
    MinimizerNotUnique,
    NotMinimizer,
}

impl fmt::Display for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Forcing::UniqueMinimizer => "unique-minimizer",
            Forcing::MinimizerNotUnique => "minimizer-not-unique",
            Forcing::NotMinimizer => "not-minimizer",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub forcing: Forcing,
}

impl Verdict {
    pub fn forcing(&self) -> Forcing {
        match self {
            Verdict::Transitive(n) if *n >= 4 => Forcing::UniqueMinimizer,
            Verdict::Transitive(_) => Forcing::MinimizerNotUnique,
            Verdict::Tabc(d) if d.sizes.iter().sum::<usize>() >= 4 => Forcing::UniqueMinimizer,
            Verdict::Tabc(_) => Forcing::MinimizerNotUnique,
            Verdict::NotSidorenko { .. } => Forcing::NotMinimizer,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Transitive(_) => "transitive",
            Verdict::Tabc(_) => "tabc",
            Verdict::NotSidorenko { .. } => "not-sidorenko",
        }
    }
}

pub fn classify(t: &Tournament) -> Classification {
    let verdict = if t.is_transitive() {
        Verdict::Transitive(t.order())
    } else if let Some(d) = decompose_tabc(t) {
        Verdict::Tabc(d)
    } else {
        let (kind, embedding) =
            find_forbidden(t).expect("a non-transitive tournament that is no T[a,b,c] contains W4, L4 or C5");
        let witness = match kind {
            Forbidden::W4 | Forbidden::L4 => WitnessRecipe::Carousel(2 * t.order() + 1),
            Forbidden::C5 => WitnessRecipe::IteratedBlowup(blowup_depth_for(t.order())),
        };
        Verdict::NotSidorenko { kind, embedding, witness }
    };
    let forcing = verdict.forcing();
    Classification { verdict, forcing }
}
