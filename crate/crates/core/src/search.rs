//! Multi-start projected gradient search for extremal densities over regular
//! step tournamentons with equal part weights.
//!
//! Points are parameterized as `M = 1/2 + S` with `S` antisymmetric, with
//! zero row sums and entries in `[-1/2, 1/2]`. Steps use Barzilai-Borwein
//! lengths safeguarded by monotone Armijo backtracking, since near the
//! constant tournamenton objectives are typically very flat.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::density::{density_and_gradient, DEFAULT_ASSIGNMENT_CAP};
use crate::digraph::Digraph;
use crate::error::{Error, ParseError, Result};
use crate::tournamenton::{project_zero_row_sums, random_regular, StepTournamenton, BOX_REPAIR_ROUNDS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Min => "min",
            Sense::Max => "max",
        })
    }
}

impl FromStr for Sense {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "min" => Ok(Sense::Min),
            "max" => Ok(Sense::Max),
            other => Err(ParseError::new(format!("unknown sense `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub parts: usize,
    pub sense: Sense,
    pub restarts: usize,
    pub max_iterations: usize,
    pub initial_step: f64,
    /// Step shrink factor in `(0, 1)` used when the sufficient-decrease test fails.
    pub backtrack: f64,
    /// Stop once the projected-gradient norm is at most this.
    pub tolerance: f64,
    pub seed: u64,
    /// Restart 0 starts at the constant tournamenton instead of a random point.
    pub warm_start: bool,
    pub cap: u128,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            parts: 4,
            sense: Sense::Min,
            restarts: 20,
            max_iterations: 3000,
            initial_step: 1.0,
            backtrack: 0.5,
            tolerance: 1e-13,
            seed: 1,
            warm_start: true,
            cap: DEFAULT_ASSIGNMENT_CAP,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
        if self.parts == 0 || self.restarts == 0 || self.max_iterations == 0 {
            return bad("parts, restarts and iterations must be positive");
        }
        if !(self.initial_step > 0.0 && self.tolerance > 0.0) {
            return bad("step size and tolerance must be positive");
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return bad("backtracking factor must lie in (0, 1)");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestartTrace {
    pub index: usize,
    pub seed: u64,
    /// Density after each accepted step, starting with the initial point.
    pub objectives: Vec<f64>,
    pub gradient_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub best: StepTournamenton<f64>,
    /// Density `t(H, best)` (not negated for maximization).
    pub objective: f64,
    pub gradient_norm: f64,
    pub best_restart: usize,
    pub traces: Vec<RestartTrace>,
    /// `max |M − 1/2|` of the best point.
    pub deviation: f64,
}

type Matrix = Vec<Vec<f64>>;

fn max_abs(s: &Matrix) -> f64 {
    s.iter().flatten().fold(0.0, |a, v| a.max(v.abs()))
}

fn inner(a: &Matrix, b: &Matrix) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| x * y).sum()
}

fn combine(a: &Matrix, b: &Matrix, t: f64) -> Matrix {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + t * y).collect()).collect()
}

/// Clip into `[-1/2, 1/2]` and re-project onto zero row sums, alternating;
/// `None` if the box is still violated afterwards.
fn box_repair(mut s: Matrix) -> Option<Matrix> {
    for _ in 0..BOX_REPAIR_ROUNDS {
        if max_abs(&s) <= 0.5 {
            return Some(s);
        }
        for v in s.iter_mut().flatten() {
            *v = v.clamp(-0.5, 0.5);
        }
        s = project_zero_row_sums(&s);
    }
    (max_abs(&s) <= 0.5).then_some(s)
}

struct Problem<'a> {
    h: &'a Digraph,
    sign: f64,
    cap: u128,
}

impl Problem<'_> {
    /// Signed objective and its gradient projected onto the feasible directions.
    fn evaluate(&self, s: &Matrix) -> Result<(f64, Matrix)> {
        let w = StepTournamenton::from_antisymmetric(s)?;
        let (value, g) = density_and_gradient(self.h, &w, self.cap)?;
        let m = s.len();
        let anti: Matrix =
            (0..m).map(|i| (0..m).map(|j| self.sign * (g[i][j] - g[j][i]) / 2.0).collect()).collect();
        Ok((self.sign * value, project_zero_row_sums(&anti)))
    }

    fn run(&self, start: Matrix, config: &SearchConfig, index: usize, seed: u64) -> Result<(Matrix, f64, RestartTrace)> {
        let mut s = start;
        let (mut f, mut d) = self.evaluate(&s)?;
        let mut objectives = vec![self.sign * f];
        let mut step = config.initial_step;
        let mut previous: Option<(Matrix, Matrix)> = None;
        for _ in 0..config.max_iterations {
            if inner(&d, &d).sqrt() <= config.tolerance {
                break;
            }
            if let Some((ps, pd)) = &previous {
                let ds = combine(&s, ps, -1.0);
                let dd = combine(&d, pd, -1.0);
                let sy = inner(&ds, &dd);
                step = if sy > 0.0 { inner(&ds, &ds) / sy } else { step * 2.0 };
                step = step.clamp(1e-12, 1e12);
            }
            let mut accepted = None;
            for _ in 0..60 {
                if let Some(candidate) = box_repair(combine(&s, &d, -step)) {
                    let (cf, cd) = self.evaluate(&candidate)?;
                    let moved = inner(&d, &combine(&s, &candidate, -1.0));
                    if cf <= f - 1e-4 * moved && cf <= f {
                        accepted = Some((candidate, cf, cd));
                        break;
                    }
                }
                step *= config.backtrack;
            }
            let Some((candidate, cf, cd)) = accepted else { break };
            previous = Some((std::mem::replace(&mut s, candidate), std::mem::replace(&mut d, cd)));
            f = cf;
            objectives.push(self.sign * f);
        }
        let gradient_norm = inner(&d, &d).sqrt();
        Ok((s, f, RestartTrace { index, seed, objectives, gradient_norm }))
    }
}

fn starting_point(m: usize, seed: u64, warm: bool) -> Matrix {
    if warm {
        vec![vec![0.0; m]; m]
    } else {
        random_regular::<f64>(m, seed).antisymmetric_part()
    }
}

/// Best regular step tournamenton found for `t(H, ·)` in the configured sense.
///
/// Restart `r` starts from a random regular point seeded with `seed ^ r`
/// (restart 0 from the constant when `warm_start` is set). Restarts run in
/// parallel; the best objective wins, ties going to the lower index.
pub fn extremize(h: &Digraph, config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let sign = match config.sense {
        Sense::Min => 1.0,
        Sense::Max => -1.0,
    };
    let problem = Problem { h, sign, cap: config.cap };
    let runs: Vec<(Matrix, f64, RestartTrace)> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let seed = config.seed ^ r as u64;
            let start = starting_point(config.parts, seed, config.warm_start && r == 0);
            problem.run(start, config, r, seed)
        })
        .collect::<Result<_>>()?;
    let best = runs
        .iter()
        .enumerate()
        .fold(0, |best, (i, run)| if run.1 < runs[best].1 { i } else { best });
    let (s, f, _) = &runs[best];
    let w = StepTournamenton::from_antisymmetric(s)?;
    let gradient_norm = runs[best].2.gradient_norm;
    Ok(SearchResult {
        deviation: w.max_deviation(),
        best: w,
        objective: sign * f,
        gradient_norm,
        best_restart: best,
        traces: runs.into_iter().map(|r| r.2).collect(),
    })
}

/// Spread of `t(H, W) − bound` over sampled regular points and the search endpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct Landscape {
    pub bound: f64,
    pub sampled_slack: Vec<f64>,
    pub endpoint_slack: f64,
    pub min_slack: f64,
    pub max_slack: f64,
}

pub fn slack_landscape(h: &Digraph, bound: f64, config: &SearchConfig, samples: usize) -> Result<Landscape> {
    config.validate()?;
    let sampled_slack = (0..samples)
        .into_par_iter()
        .map(|i| {
            let w = random_regular::<f64>(config.parts, config.seed.wrapping_add(1 + i as u64).rotate_left(17));
            density_and_gradient(h, &w, config.cap).map(|(v, _)| v - bound)
        })
        .collect::<Result<Vec<f64>>>()?;
    let endpoint_slack = extremize(h, config)?.objective - bound;
    let all = sampled_slack.iter().copied().chain([endpoint_slack]);
    let (min_slack, max_slack) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    Ok(Landscape { bound, sampled_slack, endpoint_slack, min_slack, max_slack })
}
