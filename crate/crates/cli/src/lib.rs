//! Command-line front end: file generation, density evaluation, claim
//! verification, classification, extremal search and verification suites.
//!
//! Exit codes: 0 when everything checked holds, 1 when a claim is violated,
//! 2 on usage or input errors.

pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use regtourn::canon::{enumerate_tournaments_capped, DEFAULT_ENUMERATION_CAP, MAX_ENUMERATION_ORDER};
use regtourn::checks::{check_propmax, check_twin_lemma, twin_sets, Claim};
use regtourn::classify::{classify, Verdict};
use regtourn::density::{hom_density_capped, DEFAULT_ASSIGNMENT_CAP};
use regtourn::digraph::{Digraph, Tournament};
use regtourn::error::Error;
use regtourn::families::{self, Forbidden, StarOrientation};
use regtourn::io::{parse_dgr, parse_stw, parse_trn, write_dgr, write_stw, write_trn};
use regtourn::scalar::{Mode, Scalar};
use regtourn::search::{extremize, slack_landscape, SearchConfig, Sense};
use regtourn::suites::{self, random_tournament, run_check, seeded_instance, ClaimParams};
use regtourn::tournamenton::{propmax_construction, random_regular, StepTournamenton};

use report::*;

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "REGTOURN_THREADS";

/// Floating-point slack below which `search --bound` reports a violation.
pub const SEARCH_SLACK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "regtourn", version, about = "Tournament densities over regular tournamentons")]
pub struct Cli {
    /// Arithmetic for densities and tournamentons.
    #[arg(long, global = true, default_value = "exact")]
    pub mode: Mode,
    /// Base seed for seeded instances and search restarts.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Number of seeded instances.
    #[arg(long, global = true, default_value_t = 100)]
    pub seeds: usize,
    /// Number of parts (maximum part count for seeded instances).
    #[arg(long, global = true)]
    pub parts: Option<usize>,
    /// Print a JSON run report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Assignment cap for density evaluation.
    #[arg(long, global = true)]
    pub cap: Option<u128>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a tournament (TRN1), digraph (DGR1) or tournamenton (STW1).
    Gen {
        kind: GenKind,
        params: Vec<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Homomorphism density t(H, W).
    Density { h: PathBuf, w: PathBuf },
    /// Check a claim on a given tournamenton or on seeded instances.
    Verify {
        claim: Claim,
        /// Tournamenton (STW1) to check instead of seeded instances.
        #[arg(long)]
        w: Option<PathBuf>,
        /// Tournament (TRN1) for `propmax`.
        #[arg(long)]
        t: Option<PathBuf>,
        /// Digraph (DGR1) for `twin`; defaults to C[a,b,c].
        #[arg(long)]
        h: Option<PathBuf>,
        /// Comma-separated twin vertices for `twin` with `--h`.
        #[arg(long, value_delimiter = ',')]
        twins: Option<Vec<usize>>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        c: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Order of the seeded random tournaments for `propmax`.
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Classify a tournament and report its zero-density witness.
    Classify { t: PathBuf },
    /// List isomorphism classes of n-vertex tournaments.
    Enumerate {
        n: usize,
        /// Largest order allowed (at most 8).
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        limit: usize,
    },
    /// Extremal search for t(H, W) over regular step tournamentons.
    Search {
        h: PathBuf,
        #[arg(long, default_value = "min")]
        sense: Sense,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 3000)]
        max_iter: usize,
        /// Start every restart at a random point.
        #[arg(long)]
        no_warm_start: bool,
        /// Also report t(H, W) - bound over samples and the endpoint.
        #[arg(long)]
        bound: Option<String>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Write the best tournamenton as STW1.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run bundled verification suites.
    Suite { name: SuiteName },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Transitive,
    Carousel,
    Tabc,
    Cabc,
    B,
    Star,
    Forbidden,
    Blowup,
    Propmax,
    Constant,
    RandomRegular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    LemmaSub,
    Witnesses,
    All,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
    Io(PathBuf, std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<regtourn::error::ParseError> for CliError {
    fn from(e: regtourn::error::ParseError) -> Self {
        CliError::Lib(e.into())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    let command: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut ctx = Context { cli: &cli, inputs: Vec::new(), results: Vec::new(), lines: Vec::new() };
    let started = Instant::now();
    match ctx.dispatch() {
        Ok(holds) => {
            let report = RunReport {
                command,
                mode: cli.mode,
                inputs: ctx.inputs,
                results: ctx.results,
                holds,
                elapsed_seconds: started.elapsed().as_secs_f64(),
            };
            let text = if cli.json {
                serde_json::to_string_pretty(&report).expect("reports serialize")
            } else {
                ctx.lines.join("\n")
            };
            // a closed pipe (for example `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if holds {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        // a pool may already exist when several commands run in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

struct Context<'a> {
    cli: &'a Cli,
    inputs: Vec<InputDigest>,
    results: Vec<ResultEntry>,
    lines: Vec<String>,
}

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn parse_param<T: std::str::FromStr>(params: &[String], i: usize, name: &str) -> CliResult<T> {
    let raw = params.get(i).ok_or_else(|| CliError::Usage(format!("missing parameter <{name}>")))?;
    raw.parse().map_err(|_| CliError::Usage(format!("bad value `{raw}` for <{name}>")))
}

enum Generated {
    Trn(Tournament),
    Dgr(Digraph),
    Stw(String),
}

impl Context<'_> {
    fn read(&mut self, path: &Path) -> CliResult<String> {
        let bytes = fs::read(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        self.inputs.push(InputDigest { path: path.display().to_string(), sha256: sha256_hex(&bytes) });
        String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{}: not UTF-8 text", path.display())))
    }

    fn tournament(&mut self, path: &Path) -> CliResult<Tournament> {
        let text = self.read(path)?;
        Ok(parse_trn(&text)?)
    }

    /// A pattern digraph from DGR1, or from TRN1 when the file ends in `.trn`.
    fn pattern(&mut self, path: &Path) -> CliResult<Digraph> {
        let text = self.read(path)?;
        if path.extension().is_some_and(|e| e == "trn") {
            Ok(parse_trn(&text)?.to_digraph())
        } else {
            Ok(parse_dgr(&text)?)
        }
    }

    fn tournamenton<S: Scalar>(&mut self, path: &Path) -> CliResult<StepTournamenton<S>> {
        let text = self.read(path)?;
        Ok(parse_stw(&text)?)
    }

    fn say(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn dispatch(&mut self) -> CliResult<bool> {
        let cli = self.cli;
        match &cli.command {
            Command::Gen { kind, params, out } => self.gen(*kind, params, out.as_deref()),
            Command::Density { h, w } => match cli.mode {
                Mode::Exact => self.density::<BigRational>(h, w),
                Mode::Float => self.density::<f64>(h, w),
            },
            Command::Verify { claim, .. } => match cli.mode {
                Mode::Exact => self.verify::<BigRational>(*claim),
                Mode::Float => self.verify::<f64>(*claim),
            },
            Command::Classify { t } => self.classify(t),
            Command::Enumerate { n, limit } => self.enumerate(*n, *limit),
            Command::Search { .. } => self.search(),
            Command::Suite { name } => self.suite(*name),
        }
    }

    fn gen(&mut self, kind: GenKind, params: &[String], out: Option<&Path>) -> CliResult<bool> {
        let generated = match kind {
            GenKind::Transitive => Generated::Trn(families::transitive(parse_param(params, 0, "n")?)),
            GenKind::Carousel => Generated::Trn(families::carousel(parse_param(params, 0, "v")?)?),
            GenKind::Tabc => Generated::Trn(families::tabc(
                parse_param(params, 0, "a")?,
                parse_param(params, 1, "b")?,
                parse_param(params, 2, "c")?,
            )?),
            GenKind::Cabc => Generated::Dgr(families::cabc(
                parse_param(params, 0, "a")?,
                parse_param(params, 1, "b")?,
                parse_param(params, 2, "c")?,
            )?),
            GenKind::B => Generated::Dgr(families::b_graph(parse_param(params, 0, "c")?)?),
            GenKind::Star => {
                let orientation = match params.get(1).map(String::as_str) {
                    Some("source") => StarOrientation::Source,
                    Some("sink") => StarOrientation::Sink,
                    _ => return usage("star needs <k> <source|sink>"),
                };
                Generated::Dgr(families::star(parse_param(params, 0, "k")?, orientation)?)
            }
            GenKind::Forbidden => {
                let name: String = parse_param(params, 0, "W4|L4|C5")?;
                Generated::Trn(families::forbidden(name.parse::<Forbidden>()?))
            }
            GenKind::Blowup => Generated::Trn(families::iterated_blowup(parse_param(params, 0, "depth")?)?),
            GenKind::Propmax => {
                let path: PathBuf = parse_param(params, 0, "T.trn")?;
                let t = self.tournament(&path)?;
                Generated::Stw(self.stw_text(|mode| match mode {
                    Mode::Exact => write_stw(&propmax_construction::<BigRational>(&t)),
                    Mode::Float => write_stw(&propmax_construction::<f64>(&t)),
                }))
            }
            GenKind::Constant => Generated::Stw(self.stw_text(|mode| match mode {
                Mode::Exact => write_stw(&StepTournamenton::<BigRational>::constant_half()),
                Mode::Float => write_stw(&StepTournamenton::<f64>::constant_half()),
            })),
            GenKind::RandomRegular => {
                let m = match params.first() {
                    Some(_) => parse_param(params, 0, "m")?,
                    None => self.cli.parts.unwrap_or(4),
                };
                if m == 0 {
                    return usage("part count must be positive");
                }
                let seed = self.cli.seed;
                Generated::Stw(self.stw_text(|mode| match mode {
                    Mode::Exact => write_stw(&random_regular::<BigRational>(m, seed)),
                    Mode::Float => write_stw(&random_regular::<f64>(m, seed)),
                }))
            }
        };
        let (format, text) = match generated {
            Generated::Trn(t) => ("TRN1", write_trn(&t)),
            Generated::Dgr(h) => ("DGR1", write_dgr(&h)),
            Generated::Stw(s) => ("STW1", s),
        };
        let sha256 = sha256_hex(text.as_bytes());
        match out {
            Some(path) => {
                fs::write(path, &text).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
                self.say(format!("wrote {format} to {}", path.display()));
            }
            None => self.say(text.trim_end().to_string()),
        }
        let family = kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
        self.results.push(ResultEntry::Generated(GeneratedEntry {
            family,
            format: format.into(),
            path: out.map(|p| p.display().to_string()),
            sha256,
        }));
        Ok(true)
    }

    fn stw_text(&self, f: impl FnOnce(Mode) -> String) -> String {
        f(self.cli.mode)
    }

    fn density<S: Scalar>(&mut self, h: &Path, w: &Path) -> CliResult<bool> {
        let h = self.pattern(h)?;
        let w = self.tournamenton::<S>(w)?;
        let r = hom_density_capped(&h, &w, self.cli.cap.unwrap_or(DEFAULT_ASSIGNMENT_CAP))?;
        self.say(format!("t(H, W) = {}", r.value.pretty()));
        self.say(format!("assignments with non-zero weight: {}", r.assignments));
        self.results.push(ResultEntry::Density(DensityEntry {
            value: r.value.to_string(),
            decimal: r.value.to_f64(),
            assignments: r.assignments,
        }));
        Ok(true)
    }

    fn verify<S: Scalar>(&mut self, claim: Claim) -> CliResult<bool> {
        let Command::Verify { w, t, h, twins, a, b, c, k, n, .. } = &self.cli.command else {
            unreachable!("verify dispatch")
        };
        let params = ClaimParams { a: *a, b: *b, c: *c, k: *k };
        let mut reports: Vec<(String, CheckEntry)> = Vec::new();
        if claim == Claim::Propmax {
            let instances: Vec<(String, Tournament)> = match t {
                Some(path) => vec![(path.display().to_string(), self.tournament(path)?)],
                None => (0..self.cli.seeds)
                    .map(|i| {
                        let seed = self.cli.seed.wrapping_add(i as u64);
                        (format!("random tournament n={n} seed={seed}"), random_tournament(*n, seed))
                    })
                    .collect(),
            };
            for (label, t) in instances {
                let r = check_propmax::<S>(&t)?;
                let witness = (!r.passes()).then(|| write_trn(&t));
                reports.push((label.clone(), CheckEntry::from_report(label, &r, witness)));
            }
        } else if let Some(path) = w {
            let w = self.tournamenton::<S>(path)?;
            let r = match (claim, h) {
                (Claim::Twin, Some(hp)) => {
                    let h = self.pattern(hp)?;
                    let set = match twins {
                        Some(set) => set.clone(),
                        None => twin_sets(&h)
                            .into_iter()
                            .find(|c| c.len() >= 2)
                            .ok_or_else(|| CliError::Usage("H has no twin pair".into()))?,
                    };
                    check_twin_lemma(&h, &set, &w)?
                }
                _ => run_check(claim, &params, &w)?,
            };
            let label = path.display().to_string();
            let witness = (!r.passes()).then(|| write_stw(&w));
            reports.push((label.clone(), CheckEntry::from_report(label, &r, witness)));
        } else {
            let parts = self.cli.parts.unwrap_or(5);
            if parts == 0 {
                return usage("part count must be positive");
            }
            let runs = suites::run_seeded::<S>(claim, &params, self.cli.seeds, self.cli.seed, parts)?;
            for (i, (w, r)) in runs.iter().enumerate() {
                let label = format!("seed={} parts={}", self.cli.seed.wrapping_add(i as u64), w.parts());
                let witness = (!r.passes()).then(|| write_stw(w));
                reports.push((label.clone(), CheckEntry::from_report(label, r, witness)));
            }
            debug_assert!(runs.iter().enumerate().all(|(i, (w, _))| *w
                == seeded_instance::<S>(claim, i, self.cli.seed, parts)));
        }
        let total = reports.len();
        let held = reports.iter().filter(|(_, e)| e.holds).count();
        let equal = reports.iter().filter(|(_, e)| e.equality).count();
        let min_slack = reports.iter().map(|(_, e)| e.slack_decimal).fold(f64::INFINITY, f64::min);
        let shape = params.describe(claim);
        self.say(format!("claim {claim} {shape} ({} arithmetic)", self.cli.mode).replace("  ", " "));
        if total == 1 {
            let e = &reports[0].1;
            self.say(format!("lhs   = {}", e.lhs));
            self.say(format!("rhs   = {}", e.rhs));
            self.say(format!("slack = {} (~{:.12e})", e.slack, e.slack_decimal));
            if !e.detail.is_empty() {
                self.say(format!("note: {}", e.detail));
            }
        }
        self.say(format!("holds on {held}/{total} instances; equality on {equal}; least slack {min_slack:.12e}"));
        for (label, e) in reports.iter().filter(|(_, e)| !e.holds) {
            self.say(format!("VIOLATED at {label}: lhs {} rhs {} slack {}", e.lhs, e.rhs, e.slack));
            if let Some(wit) = &e.witness {
                self.say(wit.trim_end().to_string());
            }
        }
        self.results.extend(reports.into_iter().map(|(_, e)| ResultEntry::Check(e)));
        Ok(held == total)
    }

    fn classify(&mut self, path: &Path) -> CliResult<bool> {
        let t = self.tournament(path)?;
        let c = classify(&t);
        let mut entry = ClassificationEntry {
            vertices: t.order(),
            verdict: c.verdict.name().into(),
            sizes: None,
            parts: None,
            forbidden: None,
            embedding: None,
            witness: None,
            forcing: c.forcing.to_string(),
        };
        match &c.verdict {
            Verdict::Transitive(n) => self.say(format!("transitive tournament on {n} vertices")),
            Verdict::Tabc(d) => {
                let [a, b, cc] = d.sizes;
                self.say(format!("T[{a},{b},{cc}] with parts {:?} {:?} {:?}", d.parts[0], d.parts[1], d.parts[2]));
                entry.sizes = Some(d.sizes);
                entry.parts = Some(d.parts.to_vec());
            }
            Verdict::NotSidorenko { kind, embedding, witness } => {
                self.say(format!("contains {} at vertices {:?}", kind.name(), embedding.0));
                self.say(format!("zero-density witness: {witness}"));
                entry.forbidden = Some(kind.name().into());
                entry.embedding = Some(embedding.0.clone());
                entry.witness = Some(witness.to_string());
            }
        }
        self.say(format!("constant tournamenton: {}", c.forcing));
        self.results.push(ResultEntry::Classification(entry));
        Ok(true)
    }

    fn enumerate(&mut self, n: usize, limit: usize) -> CliResult<bool> {
        if limit > MAX_ENUMERATION_ORDER {
            return usage(format!("enumeration is limited to {MAX_ENUMERATION_ORDER} vertices"));
        }
        if n == MAX_ENUMERATION_ORDER && limit == MAX_ENUMERATION_ORDER {
            eprintln!("warning: enumerating 8-vertex tournaments (6880 classes) takes noticeably longer");
        }
        let classes = enumerate_tournaments_capped(n, limit)?;
        let canonical: Vec<String> =
            classes.iter().map(|t| regtourn::canon::canonical_form(t).to_bit_string()).collect();
        self.say(format!("{} classes of {n}-vertex tournaments", classes.len()));
        for c in &canonical {
            self.say(c.clone());
        }
        self.results.push(ResultEntry::Enumeration(EnumerationEntry { order: n, classes: classes.len(), canonical }));
        Ok(true)
    }

    fn search(&mut self) -> CliResult<bool> {
        let Command::Search { h, sense, restarts, max_iter, no_warm_start, bound, samples, out } = &self.cli.command
        else {
            unreachable!("search dispatch")
        };
        let pattern = self.pattern(h)?;
        let config = SearchConfig {
            parts: self.cli.parts.unwrap_or(4),
            sense: *sense,
            restarts: *restarts,
            max_iterations: *max_iter,
            seed: self.cli.seed,
            warm_start: !no_warm_start,
            cap: self.cli.cap.unwrap_or(DEFAULT_ASSIGNMENT_CAP),
            ..SearchConfig::default()
        };
        let r = extremize(&pattern, &config)?;
        let best = write_stw(&r.best);
        self.say(format!("best t(H, W) = {:.15e} (restart {})", r.objective, r.best_restart));
        self.say(format!("projected gradient norm {:.3e}; max |M - 1/2| = {:.3e}", r.gradient_norm, r.deviation));
        let mut holds = true;
        let landscape = match bound {
            Some(text) => {
                let b = f64::parse_value(text)?;
                let l = slack_landscape(&pattern, b, &config, *samples)?;
                self.say(format!(
                    "slack against {text}: min {:.6e}, max {:.6e}, endpoint {:.6e}",
                    l.min_slack, l.max_slack, l.endpoint_slack
                ));
                // a lower bound is violated when some sampled or optimized point falls below it
                if *sense == Sense::Min && l.min_slack < -SEARCH_SLACK_TOLERANCE {
                    holds = false;
                    self.say(format!("VIOLATED: t(H, W) falls below {text}"));
                }
                Some(LandscapeEntry {
                    bound: b,
                    samples: *samples,
                    min_slack: l.min_slack,
                    max_slack: l.max_slack,
                    endpoint_slack: l.endpoint_slack,
                })
            }
            None => None,
        };
        if let Some(path) = out {
            fs::write(path, &best).map_err(|e| CliError::Io(path.clone(), e))?;
            self.say(format!("wrote best tournamenton to {}", path.display()));
        }
        self.results.push(ResultEntry::Search(SearchEntry {
            sense: sense.to_string(),
            parts: config.parts,
            restarts: config.restarts,
            objective: r.objective,
            gradient_norm: r.gradient_norm,
            deviation: r.deviation,
            best_restart: r.best_restart,
            restart_objectives: r.traces.iter().map(|t| *t.objectives.last().expect("initial point")).collect(),
            best,
            landscape,
        }));
        Ok(holds)
    }

    fn suite(&mut self, name: SuiteName) -> CliResult<bool> {
        let outcomes = match name {
            SuiteName::LemmaSub => vec![suites::lemma_sub(7)?],
            SuiteName::Witnesses => vec![suites::witnesses(6)?],
            SuiteName::All => suites::all(self.cli.seeds, self.cli.seed, self.cli.parts.unwrap_or(5))?,
        };
        for o in &outcomes {
            let status = if o.passed() { "PASS" } else { "FAIL" };
            self.say(format!("{status} {:<18} {} checks", o.name, o.checked));
            for f in o.failures.iter().take(10) {
                self.say(format!("     {f}"));
            }
        }
        self.results.extend(outcomes.iter().map(|o| ResultEntry::Suite(o.into())));
        Ok(outcomes.iter().all(|o| o.passed()))
    }
}
