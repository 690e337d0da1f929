//! Seeded and exhaustive verification suites shared by the command line and
//! the test harness.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::canon::{canonical_form, enumerate_tournaments_capped, MAX_ENUMERATION_ORDER};
use crate::checks::*;
use crate::classify::{classify, decompose_tabc, find_forbidden, Verdict};
use crate::density::{density, density_and_gradient, DEFAULT_ASSIGNMENT_CAP};
use crate::digraph::{Digraph, Tournament};
use crate::embed::hom_count;
use crate::error::{Error, Result};
use crate::families::*;
use crate::scalar::Scalar;
use crate::search::{extremize, SearchConfig};
use crate::tournamenton::{random_regular, random_tournamenton, StepTournamenton};

type Q = BigRational;

/// Class counts of `n`-vertex tournaments for `n = 0..=8`.
pub const CLASS_COUNTS: [usize; 9] = [1, 1, 1, 2, 4, 12, 56, 456, 6880];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &str) -> Self {
        SuiteOutcome { name: name.to_string(), checked: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Shape parameters of a claim; unset values take per-claim defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClaimParams {
    pub a: Option<usize>,
    pub b: Option<usize>,
    pub c: Option<usize>,
    pub k: Option<usize>,
}

impl ClaimParams {
    pub fn abc(a: usize, b: usize, c: usize) -> Self {
        ClaimParams { a: Some(a), b: Some(b), c: Some(c), k: None }
    }

    pub fn with_k(k: usize) -> Self {
        ClaimParams { k: Some(k), ..Self::default() }
    }

    fn arity(&self, default: usize) -> usize {
        self.k.or(self.c).unwrap_or(default)
    }

    fn triple(&self, default: (usize, usize, usize)) -> (usize, usize, usize) {
        (self.a.unwrap_or(default.0), self.b.unwrap_or(default.1), self.c.unwrap_or(default.2))
    }

    /// A readable rendering of the effective parameters of `claim`.
    pub fn describe(&self, claim: Claim) -> String {
        match claim {
            Claim::ForcingB | Claim::CbHalf | Claim::PartitionUnity | Claim::KernelsC11k => {
                format!("k={}", self.arity(default_arity(claim)))
            }
            Claim::Cabk => {
                let (a, b, _) = self.triple((1, 1, 0));
                format!("a={a} b={b} k={}", self.k.or(self.c).unwrap_or(2))
            }
            Claim::MainCabc | Claim::MainTabc | Claim::Twin => {
                let (a, b, c) = self.triple((2, 1, 1));
                format!("a={a} b={b} c={c}")
            }
            Claim::FgSum | Claim::Propmax => String::new(),
        }
    }
}

fn default_arity(claim: Claim) -> usize {
    match claim {
        Claim::PartitionUnity => 3,
        _ => 2,
    }
}

/// Part count of seeded instance `index`: cycles through `3..=parts`.
///
/// Two equal parts admit only the constant regular tournamenton, so they are
/// skipped unless `parts < 3`.
pub fn seeded_parts(index: usize, parts: usize) -> usize {
    if parts < 3 {
        parts.max(1)
    } else {
        3 + index % (parts - 2)
    }
}

/// The tournamenton for seeded instance `index`. Claims stated for every
/// tournamenton alternate between non-regular (even index) and regular samples.
pub fn seeded_instance<S: Scalar>(claim: Claim, index: usize, seed: u64, parts: usize) -> StepTournamenton<S> {
    let m = seeded_parts(index, parts);
    let s = seed.wrapping_add(index as u64);
    if !claim.needs_regular() && index.is_multiple_of(2) {
        random_tournamenton(m, s)
    } else {
        random_regular(m, s)
    }
}

/// Runs `claim` on one tournamenton (every claim except `propmax`).
pub fn run_check<S: Scalar>(claim: Claim, params: &ClaimParams, w: &StepTournamenton<S>) -> Result<CheckReport<S>> {
    match claim {
        Claim::ForcingB => check_forcing_b(w, params.arity(2)),
        Claim::CbHalf => check_cb_half(w, params.arity(2)),
        Claim::Cabk => {
            let (a, b, _) = params.triple((1, 1, 0));
            check_cabk_bound(w, a, b, params.k.or(params.c).unwrap_or(2))
        }
        Claim::MainCabc => {
            let (a, b, c) = params.triple((2, 1, 1));
            check_main_cabc(w, a, b, c)
        }
        Claim::MainTabc => {
            let (a, b, c) = params.triple((2, 1, 1));
            check_main_tabc(w, a, b, c)
        }
        Claim::Twin => {
            let (a, b, c) = params.triple((2, 1, 1));
            let twins: Vec<usize> = (0..a).collect();
            check_twin_lemma(&cabc(a, b, c)?, &twins, w)
        }
        Claim::PartitionUnity => check_partition_unity(w, params.arity(3)),
        Claim::FgSum => check_fg_sum(w),
        Claim::KernelsC11k => check_kernels_c11k(w, params.arity(2)),
        Claim::Propmax => Err(Error::InvalidParameter("propmax takes a tournament, not a tournamenton".into())),
    }
}

/// Uniformly random labeled tournament on `n` vertices.
pub fn random_tournament(n: usize, seed: u64) -> Tournament {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Tournament::from_fn(n, |_, _| rng.gen_bool(0.5))
}

/// Seeded instances `0..seeds` of `claim`, in parallel, in index order.
pub fn run_seeded<S: Scalar>(
    claim: Claim,
    params: &ClaimParams,
    seeds: usize,
    seed: u64,
    parts: usize,
) -> Result<Vec<(StepTournamenton<S>, CheckReport<S>)>> {
    (0..seeds)
        .into_par_iter()
        .map(|i| {
            let w = seeded_instance::<S>(claim, i, seed, parts);
            run_check(claim, params, &w).map(|r| (w, r))
        })
        .collect()
}

fn claim_suite(name: &str, claim: Claim, grid: &[ClaimParams], seeds: usize, seed: u64, parts: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new(name);
    for params in grid {
        for (i, (_, r)) in run_seeded::<Q>(claim, params, seeds, seed, parts)?.into_iter().enumerate() {
            out.record(r.passes(), || format!("{claim} {} instance {i}: slack {}", params.describe(claim), r.slack));
        }
    }
    Ok(out)
}

/// Exhaustive check, over all classes up to `max_n` vertices, that a
/// non-transitive tournament avoids `W4`, `L4` and `C5` exactly when it
/// decomposes as `T[a,b,c]`; also checks the class counts.
pub fn lemma_sub(max_n: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("lemma-sub");
    for n in 1..=max_n {
        let classes = enumerate_tournaments_capped(n, MAX_ENUMERATION_ORDER)?;
        out.record(classes.len() == CLASS_COUNTS[n], || format!("{n} vertices: {} classes", classes.len()));
        let bad: Vec<String> = classes
            .par_iter()
            .filter(|t| {
                let avoids = !t.is_transitive() && find_forbidden(t).is_none();
                avoids != decompose_tabc(t).is_some()
            })
            .map(|t| canonical_form(t).to_bit_string())
            .collect();
        out.checked += classes.len();
        out.failures.extend(bad.into_iter().map(|b| format!("equivalence fails for {b}")));
    }
    Ok(out)
}

/// Witness soundness over all classes up to `max_n` vertices, plus the
/// carousel and iterated blow-up families themselves.
pub fn witnesses(max_n: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("witnesses");
    for k in 1..=6 {
        let c = carousel(2 * k + 1)?;
        for kind in [Forbidden::W4, Forbidden::L4] {
            out.record(hom_count(&forbidden(kind), &c) == 0, || format!("{} in carousel({})", kind.name(), 2 * k + 1));
        }
        let regular = StepTournamenton::<Q>::from_tournament(&c).check_regular().is_ok();
        out.record(regular, || format!("carousel({}) not regular", 2 * k + 1));
    }
    for depth in 1..=3 {
        let t = iterated_blowup(depth)?;
        out.record(hom_count(&forbidden(Forbidden::C5), &t) == 0, || format!("C5 in blow-up({depth})"));
        let regular = StepTournamenton::<Q>::from_tournament(&t).check_regular().is_ok();
        out.record(regular, || format!("blow-up({depth}) not regular"));
    }
    for n in 1..=max_n {
        let classes = enumerate_tournaments_capped(n, MAX_ENUMERATION_ORDER)?;
        let results: Vec<Option<String>> = classes
            .par_iter()
            .filter_map(|t| match classify(t).verdict {
                Verdict::NotSidorenko { witness, .. } => Some((t, witness)),
                _ => None,
            })
            .map(|(t, witness)| {
                let host = witness.realize_tournament().ok().flatten()?;
                let zero = hom_count(t, &host) == 0;
                let regular = StepTournamenton::<Q>::from_tournament(&host).check_regular().is_ok();
                (!(zero && regular)).then(|| format!("witness {witness} fails for {}", canonical_form(t)))
            })
            .collect();
        for r in results {
            out.record(r.is_none(), || r.unwrap_or_default());
        }
    }
    Ok(out)
}

/// `t(H, W)` for an arbitrary (not necessarily skew) block matrix, used as
/// a finite-difference reference.
fn raw_density(h: &Digraph, weights: &[f64], blocks: &[Vec<f64>]) -> f64 {
    let m = weights.len();
    let n = h.order();
    let mut total = 0.0;
    let mut phi = vec![0; n];
    for code in 0..m.pow(n as u32) {
        let mut c = code;
        for slot in phi.iter_mut() {
            *slot = c % m;
            c /= m;
        }
        let mut term: f64 = phi.iter().map(|&p| weights[p]).product();
        for &(u, v) in h.edges() {
            term *= blocks[phi[u]][phi[v]];
        }
        total += term;
    }
    total
}

/// Largest entrywise gap between the analytic gradient and a central
/// difference with step `h`, relative to the largest gradient entry.
pub fn gradient_fd_error(h: &Digraph, w: &StepTournamenton<f64>, step: f64) -> Result<f64> {
    let (_, grad) = density_and_gradient(h, w, DEFAULT_ASSIGNMENT_CAP)?;
    let m = w.parts();
    let base = w.block_rows();
    let mut gap: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            let mut up = base.clone();
            let mut down = base.clone();
            up[i][j] += step;
            down[i][j] -= step;
            let fd = (raw_density(h, w.weights(), &up) - raw_density(h, w.weights(), &down)) / (2.0 * step);
            gap = gap.max((fd - grad[i][j]).abs());
            scale = scale.max(grad[i][j].abs());
        }
    }
    Ok(if scale == 0.0 { gap } else { gap / scale })
}

/// Random pattern digraph on `n` vertices: each pair independently absent
/// or oriented either way.
pub fn random_digraph(n: usize, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            match rng.gen_range(0..3) {
                0 => edges.push((u, v)),
                1 => edges.push((v, u)),
                _ => {}
            }
        }
    }
    Digraph::new(n, edges).expect("pairs are distinct")
}

fn baseline() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("baseline-densities");
    let half = StepTournamenton::<Q>::constant_half();
    let mut patterns: Vec<(String, Digraph)> = (1..=5).map(|n| (format!("TT{n}"), transitive(n).to_digraph())).collect();
    for a in 1..=4 {
        for b in 1..=4 {
            for c in 1..=4 {
                if a + b + c <= 6 {
                    patterns.push((format!("C[{a},{b},{c}]"), cabc(a, b, c)?));
                }
            }
        }
    }
    for k in 1..=4 {
        patterns.push((format!("B[{k}]"), b_graph(k)?));
        patterns.push((format!("S+[{k}]"), star(k, StarOrientation::Source)?));
        patterns.push((format!("S-[{k}]"), star(k, StarOrientation::Sink)?));
    }
    for (name, h) in patterns {
        let t = density(&h, &half)?;
        out.record(t == Q::pow2(-(h.edge_count() as i64)), || format!("{name}: {t}"));
    }
    Ok(out)
}

fn regular_slice(seeds: usize, seed: u64, parts: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("regular-slice");
    let eighth = Q::ratio(1, 8);
    let tt3 = transitive(3).to_digraph();
    let c3 = cabc(1, 1, 1)?;
    for i in 0..seeds {
        let w = random_regular::<Q>(seeded_parts(i, parts), seed.wrapping_add(i as u64));
        out.record(density(&tt3, &w)? == eighth, || format!("TT3 instance {i}"));
        out.record(density(&c3, &w)? == eighth, || format!("C3 instance {i}"));
    }
    Ok(out)
}

fn propmax_suite(seed: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("propmax");
    for n in 1..=MAX_ENUMERATION_ORDER {
        let classes = enumerate_tournaments_capped(n, MAX_ENUMERATION_ORDER)?;
        let irregular = classes
            .par_iter()
            .filter(|t| crate::tournamenton::propmax_construction::<Q>(t).check_regular().is_err())
            .count();
        out.checked += classes.len();
        if irregular > 0 {
            out.failures.push(format!("{irregular} irregular constructions at {n} vertices"));
        }
        if n <= PROPMAX_EXACT_ORDER {
            for t in &classes {
                let r = check_propmax::<Q>(t)?;
                out.record(r.holds, || format!("density bound fails for {}", canonical_form(t)));
            }
        }
    }
    let r = check_propmax::<Q>(&random_tournament(10, seed))?;
    out.record(r.holds, || format!("certificate fails: {}", r.detail));
    Ok(out)
}

fn gradient_suite(count: usize, seed: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("gradient");
    for i in 0..count {
        let s = seed.wrapping_add(i as u64);
        let h = random_digraph(2 + i % 4, s);
        let w = random_tournamenton::<f64>(1 + i % 4, s);
        let err = gradient_fd_error(&h, &w, 1e-6)?;
        out.record(err <= 1e-6, || format!("instance {i}: relative error {err:e}"));
    }
    Ok(out)
}

fn search_suite(seed: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("search");
    let targets = [
        ("TT4", transitive(4).to_digraph(), -6),
        ("C[2,1,1]", cabc(2, 1, 1)?, -5),
        ("C[1,1,2]", cabc(1, 1, 2)?, -5),
    ];
    for (name, h, e) in targets {
        let config = SearchConfig { parts: 4, restarts: 20, seed, ..SearchConfig::default() };
        let r = extremize(&h, &config)?;
        let gap = (r.objective - 2f64.powi(e)).abs();
        out.record(gap <= 1e-6 && r.deviation <= 1e-3, || {
            format!("{name}: gap {gap:e}, deviation {:e}", r.deviation)
        });
    }
    Ok(out)
}

/// Every suite, sized by `seeds` seeded instances and `parts` maximum parts.
pub fn all(seeds: usize, seed: u64, parts: usize) -> Result<Vec<SuiteOutcome>> {
    let cb = [ClaimParams::with_k(2), ClaimParams::with_k(3)];
    let mut cabk = Vec::new();
    for a in 1..=2 {
        for b in 1..=2 {
            for k in 2..=3 {
                cabk.push(ClaimParams { a: Some(a), b: Some(b), k: Some(k), c: None });
            }
        }
    }
    let triples: Vec<ClaimParams> = (1..=3)
        .flat_map(|a| (1..=3).flat_map(move |b| (1..=3).map(move |c| (a, b, c))))
        .filter(|(a, b, c)| (4..=5).contains(&(a + b + c)))
        .map(|(a, b, c)| ClaimParams::abc(a, b, c))
        .collect();
    Ok(vec![
        baseline()?,
        regular_slice(seeds, seed, parts)?,
        claim_suite("cb-half", Claim::CbHalf, &cb, seeds, seed, parts)?,
        claim_suite("forcing-b", Claim::ForcingB, &cb, seeds, seed, parts)?,
        claim_suite("cabk", Claim::Cabk, &cabk, seeds, seed, parts)?,
        claim_suite("main-cabc", Claim::MainCabc, &triples, 2 * seeds, seed, parts)?,
        claim_suite(
            "twin",
            Claim::Twin,
            &[ClaimParams::abc(2, 1, 1), ClaimParams::abc(2, 2, 1), ClaimParams::abc(3, 1, 1)],
            seeds,
            seed,
            parts.min(4),
        )?,
        claim_suite("main-tabc", Claim::MainTabc, &triples, seeds, seed, parts)?,
        lemma_sub(7)?,
        witnesses(6)?,
        propmax_suite(seed)?,
        gradient_suite(50, seed)?,
        search_suite(seed)?,
        claim_suite("partition-unity", Claim::PartitionUnity, &cb, seeds.min(50), seed, parts)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(lemma_sub(5).unwrap().passed());
        assert!(witnesses(5).unwrap().passed());
        assert!(baseline().unwrap().passed());
        assert!(gradient_suite(10, 3).unwrap().passed());
    }

    #[test]
    fn seeded_parts_cycle() {
        let ms: Vec<usize> = (0..6).map(|i| seeded_parts(i, 5)).collect();
        assert_eq!(ms, vec![3, 4, 5, 3, 4, 5]);
        assert_eq!(seeded_parts(3, 1), 1);
        assert_eq!(seeded_parts(3, 2), 2);
    }

    #[test]
    fn seeded_claims() {
        let r = claim_suite("cb", Claim::CbHalf, &[ClaimParams::with_k(2)], 10, 1, 5).unwrap();
        assert!(r.passed() && r.checked == 10);
        let w: StepTournamenton<Q> = seeded_instance(Claim::Cabk, 0, 1, 4);
        assert!(w.check_regular().is_err());
    }
}
