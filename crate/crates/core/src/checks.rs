//! Checkers for the density identities and inequalities satisfied by
//! (regular) tournamentons.

use std::fmt;
use std::str::FromStr;

use crate::density::{density, kernel_tables, path2_kernel};
use crate::digraph::{Digraph, Tournament};
use crate::error::{Error, ParseError, Result};
use crate::families::{b_graph, cabc, tabc};
use crate::scalar::Scalar;
use crate::tournamenton::{propmax_construction, StepTournamenton};

/// Named claims understood by the checkers and the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Claim {
    ForcingB,
    CbHalf,
    Cabk,
    MainCabc,
    Twin,
    MainTabc,
    Propmax,
    PartitionUnity,
    FgSum,
    KernelsC11k,
}

impl Claim {
    pub const ALL: [Claim; 10] = [
        Claim::ForcingB,
        Claim::CbHalf,
        Claim::Cabk,
        Claim::MainCabc,
        Claim::Twin,
        Claim::MainTabc,
        Claim::Propmax,
        Claim::PartitionUnity,
        Claim::FgSum,
        Claim::KernelsC11k,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::ForcingB => "forcing-b",
            Claim::CbHalf => "cb-half",
            Claim::Cabk => "cabk",
            Claim::MainCabc => "main-cabc",
            Claim::Twin => "twin",
            Claim::MainTabc => "main-tabc",
            Claim::Propmax => "propmax",
            Claim::PartitionUnity => "partition-unity",
            Claim::FgSum => "fg-sum",
            Claim::KernelsC11k => "kernels-c11k",
        }
    }

    /// Whether the claim is stated for regular tournamentons only.
    pub fn needs_regular(self) -> bool {
        matches!(self, Claim::ForcingB | Claim::CbHalf | Claim::MainCabc | Claim::MainTabc | Claim::FgSum)
    }

    /// Whether equality in the claimed bound is attained only by the constant tournamenton.
    pub fn equality_forces_constant(self) -> bool {
        matches!(self, Claim::ForcingB | Claim::MainCabc | Claim::MainTabc)
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| ParseError::new(format!("unknown claim `{s}`")))
    }
}

/// Whether a check compares for `lhs ≥ rhs` or for `lhs = rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    AtLeast,
    Equal,
}

/// Outcome of one check. `slack = lhs − rhs`; `deviation` is `max |M − 1/2|`
/// of the tournamenton involved, so equality cases can be correlated with
/// closeness to the constant tournamenton.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport<S> {
    pub claim: Claim,
    pub relation: Relation,
    pub lhs: S,
    pub rhs: S,
    pub slack: S,
    pub tolerance: S,
    pub holds: bool,
    pub equality: bool,
    pub deviation: S,
    pub detail: String,
}

impl<S: Scalar> CheckReport<S> {
    pub fn new(claim: Claim, relation: Relation, lhs: S, rhs: S, deviation: S) -> Self {
        let tolerance = S::default_tolerance();
        let slack = lhs.clone() - rhs.clone();
        let equality = slack.abs() <= tolerance;
        let holds = match relation {
            Relation::AtLeast => slack >= -tolerance.clone(),
            Relation::Equal => equality,
        };
        CheckReport { claim, relation, lhs, rhs, slack, tolerance, holds, equality, deviation, detail: String::new() }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    /// Equality only where `W` is the constant tournamenton, as far as this instance shows.
    pub fn equality_only_at_constant(&self) -> bool {
        !self.equality || self.deviation.is_zero()
    }

    /// `holds`, and for bounds whose equality case is the constant
    /// tournamenton, no equality away from it.
    pub fn passes(&self) -> bool {
        self.holds && (!self.claim.equality_forces_constant() || self.equality_only_at_constant())
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}

fn binom2(n: usize) -> i64 {
    (n * n.saturating_sub(1) / 2) as i64
}

/// `t(B[k], W) ≥ 2^{−2k}` for regular `W`.
pub fn check_forcing_b<S: Scalar>(w: &StepTournamenton<S>, k: usize) -> Result<CheckReport<S>> {
    require(k >= 2, || format!("k must be at least 2, got {k}"))?;
    w.check_regular()?;
    let lhs = density(&b_graph(k)?, w)?;
    Ok(CheckReport::new(Claim::ForcingB, Relation::AtLeast, lhs, S::pow2(-2 * k as i64), w.max_deviation()))
}

/// `t(C[1,1,c], W) = t(B[c], W) / 2` for regular `W`.
pub fn check_cb_half<S: Scalar>(w: &StepTournamenton<S>, c: usize) -> Result<CheckReport<S>> {
    require(c >= 1, || "c must be positive".into())?;
    w.check_regular()?;
    let lhs = density(&cabc(1, 1, c)?, w)?;
    let rhs = density(&b_graph(c)?, w)? * S::half();
    Ok(CheckReport::new(Claim::CbHalf, Relation::Equal, lhs, rhs, w.max_deviation()))
}

/// `t(C[a,b,k], W) ≥ ∫ (N⁺)^a D^{ab} (N⁻)^b` over `k`-tuples, for every `W`.
pub fn check_cabk_bound<S: Scalar>(w: &StepTournamenton<S>, a: usize, b: usize, k: usize) -> Result<CheckReport<S>> {
    require(a >= 1 && b >= 1 && k >= 1, || format!("parameters must be positive, got ({a},{b},{k})"))?;
    let lhs = density(&cabc(a, b, k)?, w)?;
    let rhs = kernel_tables(w, k)?.cabk_lower_bound(a as u32, b as u32);
    Ok(CheckReport::new(Claim::Cabk, Relation::AtLeast, lhs, rhs, w.max_deviation()))
}

/// `t(C[a,b,c], W) ≥ 2^{−ab−ac−bc}` for regular `W` and `a + b + c ≥ 4`.
pub fn check_main_cabc<S: Scalar>(w: &StepTournamenton<S>, a: usize, b: usize, c: usize) -> Result<CheckReport<S>> {
    require(a >= 1 && b >= 1 && c >= 1 && a + b + c >= 4, || {
        format!("need positive parts with a+b+c >= 4, got ({a},{b},{c})")
    })?;
    w.check_regular()?;
    let lhs = density(&cabc(a, b, c)?, w)?;
    let rhs = S::pow2(-((a * b + a * c + b * c) as i64));
    Ok(CheckReport::new(Claim::MainCabc, Relation::AtLeast, lhs, rhs, w.max_deviation()))
}

/// `t(T[a,b,c], W) ≥ 2^{−binom(a+b+c, 2)}` for regular `W` and `a + b + c ≥ 4`.
pub fn check_main_tabc<S: Scalar>(w: &StepTournamenton<S>, a: usize, b: usize, c: usize) -> Result<CheckReport<S>> {
    require(a >= 1 && b >= 1 && c >= 1 && a + b + c >= 4, || {
        format!("need positive parts with a+b+c >= 4, got ({a},{b},{c})")
    })?;
    w.check_regular()?;
    let lhs = density(&tabc(a, b, c)?.to_digraph(), w)?;
    let rhs = S::pow2(-binom2(a + b + c));
    Ok(CheckReport::new(Claim::MainTabc, Relation::AtLeast, lhs, rhs, w.max_deviation()))
}

/// Maximal classes of twins: vertices with equal in- and out-neighbourhoods.
///
/// Such vertices are automatically non-adjacent. Classes are listed by
/// smallest member, members ascending.
pub fn twin_sets(h: &Digraph) -> Vec<Vec<usize>> {
    let mut classes: Vec<(Vec<usize>, Vec<usize>, Vec<usize>)> = Vec::new();
    for v in 0..h.order() {
        let (out, inn) = (h.out_neighbors(v), h.in_neighbors(v));
        match classes.iter_mut().find(|(o, i, _)| *o == out && *i == inn) {
            Some(class) => class.2.push(v),
            None => classes.push((out, inn, vec![v])),
        }
    }
    classes.into_iter().map(|(_, _, members)| members).collect()
}

/// `H'` = `H` plus a transitive tournament on `twins`, oriented by ascending index.
pub fn add_transitive_on(h: &Digraph, twins: &[usize]) -> Result<Digraph> {
    let mut sorted = twins.to_vec();
    sorted.sort_unstable();
    let extra: Vec<(usize, usize)> = sorted
        .iter()
        .enumerate()
        .flat_map(|(i, &u)| sorted[i + 1..].iter().map(move |&v| (u, v)))
        .collect();
    h.with_edges(extra)
}

/// `t(H', W) ≥ 2^{−binom(|A|,2)} t(H, W)` where `H'` adds a transitive
/// tournament on the twin set `A`; equality is required when `|A| ≤ 2`.
pub fn check_twin_lemma<S: Scalar>(h: &Digraph, twins: &[usize], w: &StepTournamenton<S>) -> Result<CheckReport<S>> {
    let mut set = twins.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.is_empty() || set.iter().any(|&v| v >= h.order()) {
        return Err(Error::NotTwinClass(format!("{twins:?} is not a vertex set of H")));
    }
    let classes = twin_sets(h);
    if !classes.iter().any(|c| set.iter().all(|v| c.contains(v))) {
        return Err(Error::NotTwinClass(format!("{set:?} are not mutually twins")));
    }
    let extended = add_transitive_on(h, &set)?;
    let lhs = density(&extended, w)?;
    let rhs = S::pow2(-binom2(set.len())) * density(h, w)?;
    let relation = if set.len() <= 2 { Relation::Equal } else { Relation::AtLeast };
    Ok(CheckReport::new(Claim::Twin, relation, lhs, rhs, w.max_deviation())
        .with_detail(format!("twin set {set:?}")))
}

/// Product of the kernel values over the arcs of `t` under the part map `phi`.
fn integrand<S: Scalar>(t: &Tournament, w: &StepTournamenton<S>, phi: impl Fn(usize) -> usize) -> S {
    t.arcs().fold(S::one(), |acc, (u, v)| acc * w.block(phi(u), phi(v)).clone())
}

/// Largest order for which the propmax check evaluates `t(T, W)` in full.
pub const PROPMAX_EXACT_ORDER: usize = 5;

/// For the `2n`-part construction `W` of `T`: `W` is regular and
/// `t(T, W) ≥ 2·(2n)^{−n}`; from `n = 10` on also `2·(2n)^{−n} > 2^{−binom(n,2)}`.
///
/// Up to [`PROPMAX_EXACT_ORDER`] vertices the density is computed; beyond
/// that, the lower bound is certified by the two assignments sending every
/// vertex to its `A` part or to its `B` part, each with integrand 1.
pub fn check_propmax<S: Scalar>(t: &Tournament) -> Result<CheckReport<S>> {
    let n = t.order();
    require(n >= 1, || "tournament must have a vertex".into())?;
    let w = propmax_construction::<S>(t);
    w.check_regular()?;
    let part_mass = S::ratio(1, 2 * n as i64).powu(n as u32);
    let rhs = S::ratio(2, 1) * part_mass.clone();
    let (lhs, mut detail) = if n <= PROPMAX_EXACT_ORDER {
        (density(&t.to_digraph(), &w)?, "exact density".to_string())
    } else {
        let on_a = integrand(t, &w, |v| v);
        let on_b = integrand(t, &w, |v| n + v);
        let detail = format!("certificate integrands {on_a} and {on_b}");
        ((on_a + on_b) * part_mass, detail)
    };
    let mut report = CheckReport::new(Claim::Propmax, Relation::AtLeast, lhs, rhs.clone(), w.max_deviation());
    if n >= 10 {
        let beats_bound = rhs > S::pow2(-binom2(n));
        report.holds &= beats_bound;
        detail.push_str(&format!("; 2(2n)^-n > 2^-binom(n,2): {beats_bound}"));
    }
    Ok(report.with_detail(detail))
}

/// All `2^{binom(k,2)}` labeled `k`-vertex tournaments.
pub fn labeled_tournaments(k: usize) -> impl Iterator<Item = Tournament> {
    let pairs = binom2(k) as u32;
    (0u64..1 << pairs).map(move |mask| {
        let mut bit = 0;
        Tournament::from_fn(k, |_, _| {
            let forward = mask >> bit & 1 == 1;
            bit += 1;
            forward
        })
    })
}

/// `Σ_T t(T, W) = 1` over all labeled `k`-vertex tournaments.
pub fn check_partition_unity<S: Scalar>(w: &StepTournamenton<S>, k: usize) -> Result<CheckReport<S>> {
    require((1..=5).contains(&k), || format!("k must be in 1..=5, got {k}"))?;
    let mut total = S::zero();
    for t in labeled_tournaments(k) {
        total = total + density(&t.to_digraph(), w)?;
    }
    Ok(CheckReport::new(Claim::PartitionUnity, Relation::Equal, total, S::one(), w.max_deviation()))
}

/// `F + G ≡ 1/2` for regular `W`; reported through the worst entry.
///
/// For arbitrary `W` the sum at `(i, j)` is the row integral of part `i`,
/// which is why regularity is required.
pub fn check_fg_sum<S: Scalar>(w: &StepTournamenton<S>) -> Result<CheckReport<S>> {
    w.check_regular()?;
    let k = path2_kernel(w);
    let m = w.parts();
    let mut worst = (S::half(), 0, 0);
    let mut gap = S::zero();
    for i in 0..m {
        for j in 0..m {
            let sum = k.f[i][j].clone() + k.g[i][j].clone();
            let d = (sum.clone() - S::half()).abs();
            if d > gap {
                gap = d;
                worst = (sum, i, j);
            }
        }
    }
    let (sum, i, j) = worst;
    Ok(CheckReport::new(Claim::FgSum, Relation::Equal, sum, S::half(), w.max_deviation())
        .with_detail(format!("worst entry ({i},{j})")))
}

/// `t(C[1,1,k], W) = ∫ N⁺ D N⁻` for every `W`.
pub fn check_kernels_c11k<S: Scalar>(w: &StepTournamenton<S>, k: usize) -> Result<CheckReport<S>> {
    let lhs = density(&cabc(1, 1, k)?, w)?;
    let rhs = kernel_tables(w, k)?.c11k_density();
    Ok(CheckReport::new(Claim::KernelsC11k, Relation::Equal, lhs, rhs, w.max_deviation()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::*;
    use crate::tournamenton::{random_regular, random_tournamenton};
    use num_rational::BigRational;
    use num_traits::Signed;

    type Q = BigRational;

    fn half() -> StepTournamenton<Q> {
        StepTournamenton::constant_half()
    }

    #[test]
    fn constant_kernel_is_tight() {
        let r = check_forcing_b(&half(), 2).unwrap();
        assert!(r.holds && r.equality);
        let r = check_main_cabc(&half(), 2, 1, 1).unwrap();
        assert_eq!(r.lhs, Q::pow2(-5));
        assert!(r.equality);
        let r = check_main_tabc(&half(), 2, 1, 1).unwrap();
        assert_eq!(r.lhs, Q::pow2(-6));
        assert!(check_cabk_bound(&half(), 2, 2, 2).unwrap().equality);
        assert!(check_cb_half(&half(), 3).unwrap().holds);
    }

    #[test]
    fn carousel_is_strict() {
        let w = StepTournamenton::<Q>::from_tournament(&carousel(5).unwrap());
        let r = check_main_cabc(&w, 2, 1, 1).unwrap();
        assert!(r.holds && !r.equality);
        assert!(check_cb_half(&w, 2).unwrap().holds);
        let c3 = StepTournamenton::<Q>::from_tournament(&cyclic_triangle());
        let r = check_forcing_b(&c3, 2).unwrap();
        assert!(r.holds && r.slack.is_positive());
    }

    #[test]
    fn regularity_required() {
        let w = StepTournamenton::<Q>::from_tournament(&transitive(3));
        assert!(matches!(check_forcing_b(&w, 2), Err(Error::NotRegular { .. })));
        assert!(check_cabk_bound(&w, 1, 2, 2).unwrap().holds);
        assert!(check_main_cabc(&half(), 1, 1, 1).is_err());
    }

    #[test]
    fn twin_classes() {
        let sizes = |h: &Digraph| {
            let mut s: Vec<usize> = twin_sets(h).iter().map(Vec::len).collect();
            s.sort_unstable();
            s
        };
        assert_eq!(sizes(&cabc(2, 2, 1).unwrap()), vec![1, 2, 2]);
        assert_eq!(twin_sets(&b_graph(3).unwrap()), vec![vec![0], vec![1, 2, 3], vec![4]]);
        assert_eq!(sizes(&cabc(1, 1, 1).unwrap()), vec![1, 1, 1]);
    }

    #[test]
    fn twin_lemma_pairs_are_exact() {
        let h = cabc(2, 1, 1).unwrap();
        for seed in 0..5 {
            let w = random_tournamenton::<Q>(3, seed);
            let r = check_twin_lemma(&h, &[0, 1], &w).unwrap();
            assert!(r.holds && r.equality);
        }
        assert!(matches!(check_twin_lemma(&h, &[0, 2], &half()), Err(Error::NotTwinClass(_))));
        let r = check_twin_lemma(&cabc(3, 1, 1).unwrap(), &[0, 1, 2], &random_regular::<Q>(3, 2)).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn propmax_small_and_certificate() {
        let r = check_propmax::<Q>(&forbidden(Forbidden::W4)).unwrap();
        assert!(r.holds);
        assert_eq!(r.rhs, Q::pow2(-11));
        let single = check_propmax::<Q>(&transitive(1)).unwrap();
        assert!(single.holds);
        let big = check_propmax::<Q>(&carousel(11).unwrap()).unwrap();
        assert!(big.holds && big.detail.contains("true"));
    }

    #[test]
    fn unity_and_kernel_identities() {
        for seed in 0..5 {
            let w = random_tournamenton::<Q>(3, seed);
            assert!(check_partition_unity(&w, 3).unwrap().holds);
            assert!(check_kernels_c11k(&w, 2).unwrap().holds);
            assert!(check_fg_sum(&random_regular::<Q>(4, seed)).unwrap().holds);
        }
    }

    #[test]
    fn claim_ids_round_trip() {
        for c in Claim::ALL {
            assert_eq!(c.id().parse::<Claim>().unwrap(), c);
        }
        assert!("bogus".parse::<Claim>().is_err());
    }
}
