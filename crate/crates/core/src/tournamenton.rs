//! Step tournamentons: finitely many weighted parts with a block-constant kernel.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::Tournament;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A kernel `W` constant on `part_i × part_j`, stored as an `m × m` block
/// matrix `M` together with the part measures.
///
/// Invariants: weights are positive and sum to one; `M[i][j] + M[j][i] = 1`
/// (so every diagonal block is 1/2); all entries lie in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepTournamenton<S> {
    weights: Vec<S>,
    blocks: Vec<S>,
}

/// Weighted row sums and their worst deviation from 1/2.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularityReport<S> {
    pub row_sums: Vec<S>,
    pub max_deviation: S,
    pub worst_row: usize,
    pub tolerance: S,
    pub regular: bool,
}

fn abs_diff<S: Scalar>(a: &S, b: &S) -> S {
    (a.clone() - b.clone()).abs()
}

impl<S: Scalar> StepTournamenton<S> {
    /// Validates both invariants; the error names the first violating entry.
    ///
    /// In float mode pairs within the validation tolerance of summing to one
    /// are snapped so that the involution holds exactly.
    pub fn new(weights: Vec<S>, blocks: Vec<Vec<S>>) -> Result<Self> {
        let m = weights.len();
        if m == 0 {
            return Err(Error::InvalidTournamenton("at least one part is required".into()));
        }
        if blocks.len() != m || blocks.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidTournamenton(format!("block matrix must be {m} x {m}")));
        }
        let tol = S::validation_tolerance();
        if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
            return Err(Error::InvalidTournamenton(format!("weight {i} is not positive: {}", weights[i])));
        }
        let total = weights.iter().fold(S::zero(), |acc, w| acc + w.clone());
        if abs_diff(&total, &S::one()) > tol {
            return Err(Error::InvalidTournamenton(format!("weights sum to {total}, not 1")));
        }
        let mut flat: Vec<S> = blocks.into_iter().flatten().collect();
        for i in 0..m {
            for j in i..m {
                let (a, b) = (&flat[i * m + j], &flat[j * m + i]);
                for (v, (r, c)) in [(a, (i, j)), (b, (j, i))] {
                    if *v < S::zero() || *v > S::one() {
                        return Err(Error::InvalidTournamenton(format!("entry ({r}, {c}) = {v} outside [0, 1]")));
                    }
                }
                if abs_diff(&(a.clone() + b.clone()), &S::one()) > tol {
                    return Err(Error::InvalidTournamenton(format!(
                        "entries ({i}, {j}) = {a} and ({j}, {i}) = {b} do not sum to 1"
                    )));
                }
                let (x, y) = if i == j { (S::half(), S::half()) } else { S::complement_pair(a) };
                flat[i * m + j] = x;
                flat[j * m + i] = y;
            }
        }
        Ok(StepTournamenton { weights, blocks: flat })
    }

    /// `W ≡ 1/2` on a single part.
    pub fn constant_half() -> Self {
        StepTournamenton { weights: vec![S::one()], blocks: vec![S::half()] }
    }

    /// Equal parts, `M[i][j] = 1` iff `i → j`, 1/2 on the diagonal.
    pub fn from_tournament(t: &Tournament) -> Self {
        let n = t.order();
        assert!(n > 0, "the empty tournament has no tournamenton");
        let weights = vec![S::ratio(1, n as i64); n];
        let mut blocks = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                blocks.push(if i == j {
                    S::half()
                } else if t.beats(i, j) {
                    S::one()
                } else {
                    S::zero()
                });
            }
        }
        StepTournamenton { weights, blocks }
    }

    /// Equal weights and `M = 1/2 + S` for an antisymmetric `S` with entries in `[-1/2, 1/2]`.
    pub fn from_antisymmetric(s: &[Vec<S>]) -> Result<Self> {
        let m = s.len();
        let blocks = (0..m)
            .map(|i| (0..m).map(|j| S::half() + s[i][j].clone()).collect())
            .collect();
        Self::new(vec![S::ratio(1, m as i64); m], blocks)
    }

    pub fn parts(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &S {
        &self.weights[i]
    }

    pub fn block(&self, i: usize, j: usize) -> &S {
        &self.blocks[i * self.parts() + j]
    }

    /// Row-major `m × m` block values.
    pub fn blocks_flat(&self) -> &[S] {
        &self.blocks
    }

    pub fn block_rows(&self) -> Vec<Vec<S>> {
        self.blocks.chunks(self.parts()).map(<[S]>::to_vec).collect()
    }

    pub fn has_equal_weights(&self) -> bool {
        self.weights.iter().all(|w| *w == self.weights[0])
    }

    /// `max |M[i][j] − 1/2|` over all blocks.
    pub fn max_deviation(&self) -> S {
        self.blocks
            .iter()
            .map(|v| abs_diff(v, &S::half()))
            .fold(S::zero(), |a, b| if b > a { b } else { a })
    }

    /// Antisymmetric part `M − 1/2`, row by row.
    pub fn antisymmetric_part(&self) -> Vec<Vec<S>> {
        let m = self.parts();
        (0..m)
            .map(|i| (0..m).map(|j| self.block(i, j).clone() - S::half()).collect())
            .collect()
    }

    pub fn row_sums(&self) -> Vec<S> {
        let m = self.parts();
        (0..m)
            .map(|i| {
                (0..m).fold(S::zero(), |acc, j| acc + self.weights[j].clone() * self.block(i, j).clone())
            })
            .collect()
    }

    pub fn is_regular(&self, tolerance: S) -> RegularityReport<S> {
        let row_sums = self.row_sums();
        let mut worst_row = 0;
        let mut max_deviation = S::zero();
        for (i, r) in row_sums.iter().enumerate() {
            let d = abs_diff(r, &S::half());
            if d > max_deviation {
                max_deviation = d;
                worst_row = i;
            }
        }
        let regular = max_deviation <= tolerance;
        RegularityReport { row_sums, max_deviation, worst_row, tolerance, regular }
    }

    /// Regularity under the mode's default tolerance (0 exact, 1e-9 float).
    pub fn check_regular(&self) -> Result<()> {
        let report = self.is_regular(S::default_tolerance());
        if report.regular {
            Ok(())
        } else {
            Err(Error::NotRegular { row: report.worst_row, deviation: report.max_deviation.to_string() })
        }
    }

    /// Splits part `i` into parts with measures `split[i]`, copying block values.
    pub fn refine(&self, split: &[Vec<S>]) -> Result<Self> {
        let m = self.parts();
        if split.len() != m {
            return Err(Error::InvalidSplit(format!("expected {m} part splits, got {}", split.len())));
        }
        let tol = S::validation_tolerance();
        let mut owner = Vec::new();
        let mut weights = Vec::new();
        for (i, subs) in split.iter().enumerate() {
            if subs.is_empty() || subs.iter().any(|w| !w.is_positive()) {
                return Err(Error::InvalidSplit(format!("part {i} needs positive sub-weights")));
            }
            let total = subs.iter().fold(S::zero(), |a, w| a + w.clone());
            if abs_diff(&total, &self.weights[i]) > tol {
                return Err(Error::InvalidSplit(format!(
                    "sub-weights of part {i} sum to {total}, expected {}",
                    self.weights[i]
                )));
            }
            for w in subs {
                owner.push(i);
                weights.push(w.clone());
            }
        }
        let k = weights.len();
        let mut blocks = Vec::with_capacity(k * k);
        for &a in &owner {
            for &b in &owner {
                blocks.push(self.block(a, b).clone());
            }
        }
        Ok(StepTournamenton { weights, blocks })
    }

    /// Every part split into `pieces` equal sub-parts.
    pub fn refine_uniform(&self, pieces: usize) -> Self {
        assert!(pieces > 0);
        let split: Vec<Vec<S>> = self
            .weights
            .iter()
            .map(|w| vec![w.clone() * S::ratio(1, pieces as i64); pieces])
            .collect();
        self.refine(&split).expect("uniform split preserves weights")
    }

    /// Least-squares projection of the antisymmetric part onto zero row sums,
    /// followed by box repair; requires equal weights.
    ///
    /// Clip and project alternate at most [`BOX_REPAIR_ROUNDS`] times; if the
    /// box is still violated the antisymmetric part is scaled into range,
    /// which keeps row sums at zero.
    pub fn project_to_regular(&self) -> Result<Self> {
        if !self.has_equal_weights() {
            return Err(Error::InvalidParameter("projection needs equal part weights".into()));
        }
        let mut s = project_zero_row_sums(&self.antisymmetric_part());
        for _ in 0..BOX_REPAIR_ROUNDS {
            if max_abs(&s) <= S::half() {
                break;
            }
            clip_half(&mut s);
            s = project_zero_row_sums(&s);
        }
        let peak = max_abs(&s);
        if peak > S::half() {
            let scale = S::half() / peak;
            for row in &mut s {
                for v in row.iter_mut() {
                    *v = v.clone() * scale.clone();
                }
            }
        }
        Self::from_antisymmetric(&s)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<StepTournamenton<T>> {
        StepTournamenton::new(self.weights.iter().map(&f).collect(), self.block_rows().iter().map(|r| r.iter().map(&f).collect()).collect())
    }
}

impl StepTournamenton<BigRational> {
    pub fn to_float(&self) -> StepTournamenton<f64> {
        self.map(Scalar::to_f64).expect("rounding keeps invariants within tolerance")
    }
}

pub const BOX_REPAIR_ROUNDS: usize = 5;

fn max_abs<S: Scalar>(s: &[Vec<S>]) -> S {
    s.iter().flatten().map(|v| v.abs()).fold(S::zero(), |a, b| if b > a { b } else { a })
}

fn clip_half<S: Scalar>(s: &mut [Vec<S>]) {
    let (lo, hi) = (-S::half(), S::half());
    for v in s.iter_mut().flatten() {
        if *v > hi {
            *v = hi.clone();
        } else if *v < lo {
            *v = lo.clone();
        }
    }
}

/// Orthogonal projection of an antisymmetric matrix onto the antisymmetric
/// matrices with zero row sums: `S − (r·1ᵀ − 1·rᵀ)/m` with `r` the row sums.
pub fn project_zero_row_sums<S: Scalar>(s: &[Vec<S>]) -> Vec<Vec<S>> {
    let m = s.len();
    let inv_m = S::ratio(1, m as i64);
    let r: Vec<S> = s.iter().map(|row| row.iter().fold(S::zero(), |a, v| a + v.clone())).collect();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i == j {
                        S::zero()
                    } else {
                        s[i][j].clone() - (r[i].clone() - r[j].clone()) * inv_m.clone()
                    }
                })
                .collect()
        })
        .collect()
}

/// Random regular step tournamenton with `m` equal parts, deterministic in `seed`.
///
/// An antisymmetric matrix is sampled, projected onto zero row sums and
/// scaled so that its largest entry is one of 1/8, 1/4, 3/8 or 1/2.
pub fn random_regular<S: Scalar>(m: usize, seed: u64) -> StepTournamenton<S> {
    assert!(m > 0, "at least one part is required");
    if m == 1 {
        return StepTournamenton::constant_half();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw = vec![vec![S::zero(); m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let v = S::sample_symmetric(&mut rng);
            raw[j][i] = -v.clone();
            raw[i][j] = v;
        }
    }
    let mut s = project_zero_row_sums(&raw);
    let peak = max_abs(&s);
    if !peak.is_zero() {
        let target = S::ratio(rng.gen_range(1..=4), 8);
        let scale = target / peak;
        for v in s.iter_mut().flatten() {
            *v = v.clone() * scale.clone();
        }
    }
    StepTournamenton::from_antisymmetric(&s).expect("projected sample is a valid tournamenton")
}

/// Random step tournamenton with no regularity constraint: integer part
/// weights in `1..=4` (normalized) and independent block values.
pub fn random_tournamenton<S: Scalar>(m: usize, seed: u64) -> StepTournamenton<S> {
    assert!(m > 0, "at least one part is required");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let raw: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = raw.iter().sum();
    let weights: Vec<S> = raw.iter().map(|&w| S::ratio(w, total)).collect();
    let mut blocks = vec![vec![S::half(); m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let v = (S::one() + S::sample_symmetric(&mut rng)) * S::half();
            let (x, y) = S::complement_pair(&v);
            blocks[i][j] = x;
            blocks[j][i] = y;
        }
    }
    StepTournamenton::new(weights, blocks).expect("sampled values satisfy invariants")
}

/// The 2n-part construction with parts `A_1..A_n, B_1..B_n` of measure `1/(2n)`:
/// copies of `T` on the `A` parts and on the `B` parts, the reversed orientation
/// between `A_i` and `B_j`, and 1/2 between parts sharing an index.
///
/// Part `i < n` is `A_{i+1}`, part `n + i` is `B_{i+1}`.
pub fn propmax_construction<S: Scalar>(t: &Tournament) -> StepTournamenton<S> {
    let n = t.order();
    assert!(n > 0, "the empty tournament has no construction");
    let m = 2 * n;
    let weights = vec![S::ratio(1, m as i64); m];
    let mut blocks = Vec::with_capacity(m * m);
    for x in 0..m {
        for y in 0..m {
            let (i, x_in_a) = (x % n, x < n);
            let (j, y_in_a) = (y % n, y < n);
            let value = if i == j {
                S::half()
            } else if x_in_a == y_in_a {
                if t.beats(i, j) { S::one() } else { S::zero() }
            } else if t.beats(j, i) {
                S::one()
            } else {
                S::zero()
            };
            blocks.push(value);
        }
    }
    StepTournamenton { weights, blocks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::*;
    use num_traits::Zero;

    type Q = BigRational;

    fn q(p: i64, d: i64) -> Q {
        Q::ratio(p, d)
    }

    #[test]
    fn constant_is_regular() {
        let w = StepTournamenton::<Q>::constant_half();
        let r = w.is_regular(Q::zero());
        assert!(r.regular);
        assert!(r.max_deviation.is_zero());
        assert!(w.refine_uniform(3).is_regular(Q::zero()).regular);
    }

    #[test]
    fn validation_reports_entry() {
        let err = StepTournamenton::<Q>::new(
            vec![q(1, 2), q(1, 2)],
            vec![vec![q(1, 2), q(3, 4)], vec![q(1, 2), q(1, 2)]],
        )
        .unwrap_err();
        assert!(err.to_string().contains("(0, 1)"), "{err}");
        assert!(StepTournamenton::<Q>::new(vec![q(1, 3)], vec![vec![q(1, 2)]]).is_err());
        assert!(StepTournamenton::<Q>::new(vec![q(1, 1)], vec![vec![q(1, 3)]]).is_err());
        assert!(StepTournamenton::<Q>::new(
            vec![q(1, 2), q(1, 2)],
            vec![vec![q(1, 2), q(3, 2)], vec![q(-1, 2), q(1, 2)]]
        )
        .is_err());
    }

    #[test]
    fn tournament_embeddings() {
        let c3 = StepTournamenton::<Q>::from_tournament(&cyclic_triangle());
        assert!(c3.is_regular(Q::zero()).regular);
        let tt4 = StepTournamenton::<Q>::from_tournament(&transitive(4));
        let report = tt4.is_regular(Q::zero());
        assert!(!report.regular);
        assert_eq!(report.row_sums[0], q(7, 8));
        for k in 1..=6 {
            let w = StepTournamenton::<Q>::from_tournament(&carousel(2 * k + 1).unwrap());
            assert!(w.is_regular(Q::zero()).max_deviation.is_zero());
        }
    }

    #[test]
    fn random_regular_is_exactly_regular() {
        for seed in 0..50 {
            for m in 1..=5 {
                let w = random_regular::<Q>(m, seed);
                assert!(w.is_regular(Q::zero()).regular, "m={m} seed={seed}");
                assert!(w.has_equal_weights());
                assert!(w.max_deviation() <= q(1, 2));
            }
        }
        assert_eq!(random_regular::<Q>(1, 17), StepTournamenton::constant_half());
        assert_eq!(random_regular::<Q>(4, 3), random_regular::<Q>(4, 3));
        let f = random_regular::<f64>(5, 9);
        assert!(f.is_regular(1e-12).regular);
    }

    #[test]
    fn random_tournamenton_is_valid_and_usually_irregular() {
        let irregular = (0..20)
            .filter(|&s| !random_tournamenton::<Q>(4, s).is_regular(Q::zero()).regular)
            .count();
        assert!(irregular > 10);
    }

    #[test]
    fn projection_fixed_points_and_two_parts() {
        let c = StepTournamenton::<Q>::constant_half();
        assert_eq!(c.project_to_regular().unwrap(), c);
        for seed in 0..10 {
            let w = random_regular::<Q>(4, seed);
            assert_eq!(w.project_to_regular().unwrap(), w);
        }
        let w = StepTournamenton::<f64>::new(vec![0.5, 0.5], vec![vec![0.5, 0.9], vec![0.1, 0.5]]).unwrap();
        let p = w.project_to_regular().unwrap();
        assert_eq!(p.row_sums(), vec![0.5, 0.5]);
        assert_eq!(*p.block(0, 1), 0.5);
        let uneven = StepTournamenton::<Q>::new(vec![q(1, 3), q(2, 3)], vec![vec![q(1, 2), q(1, 1)], vec![q(0, 1), q(1, 2)]]).unwrap();
        assert!(uneven.project_to_regular().is_err());
    }

    #[test]
    fn projection_repairs_box() {
        for seed in 0..20 {
            let w = random_tournamenton::<Q>(5, seed);
            let equal = StepTournamenton::new(vec![q(1, 5); 5], w.block_rows()).unwrap();
            let p = equal.project_to_regular().unwrap();
            assert!(p.is_regular(Q::zero()).regular);
            assert!(p.max_deviation() <= q(1, 2));
        }
    }

    #[test]
    fn refine_checks_sums() {
        let w = StepTournamenton::<Q>::from_tournament(&cyclic_triangle());
        let split = vec![vec![q(1, 6), q(1, 6)], vec![q(1, 3)], vec![q(1, 12), q(1, 4)]];
        let r = w.refine(&split).unwrap();
        assert_eq!(r.parts(), 5);
        assert_eq!(*r.block(0, 1), q(1, 2));
        assert_eq!(*r.block(0, 2), q(1, 1));
        assert!(r.is_regular(Q::zero()).regular);
        let bad = vec![vec![q(1, 6)], vec![q(1, 3)], vec![q(1, 3)]];
        assert!(matches!(w.refine(&bad), Err(Error::InvalidSplit(_))));
    }

    #[test]
    fn propmax_is_regular() {
        for n in 1..=6 {
            for t in crate::canon::enumerate_tournaments(n).unwrap().iter() {
                let w = propmax_construction::<Q>(t);
                assert_eq!(w.parts(), 2 * n);
                assert!(w.is_regular(Q::zero()).regular);
            }
        }
        let single = propmax_construction::<Q>(&transitive(1));
        assert!(single.max_deviation().is_zero());
    }

    #[test]
    fn float_conversion_keeps_involution() {
        let w = random_regular::<Q>(5, 11).to_float();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(w.block(i, j) + w.block(j, i), 1.0);
            }
        }
    }
}
