//! Variable neighbourhood search composites, named algorithms and the
//! multistart driver.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::brute::brute_force_solve;
use crate::construct::{random_xy_greedy, Constructor};
use crate::error::{invalid, BapError, Result};
use crate::exec::Exec;
use crate::instance::BapInstance;
use crate::neighborhoods::{descend, reopt_x, reopt_y, step, Clock, Family, SearchVariant, State, Step};
use crate::report::SearchReport;
use crate::rng::derive_seed;
use crate::solution::Solution;

/// Stopping rule for multistart runs: a wall-clock limit, a restart count, or both.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub time_limit: Option<Duration>,
    pub restarts: Option<u64>,
}

impl Budget {
    pub fn time(limit: Duration) -> Self {
        Self {
            time_limit: Some(limit),
            restarts: None,
        }
    }

    pub fn restarts(count: u64) -> Self {
        Self {
            time_limit: None,
            restarts: Some(count),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.time_limit, self.restarts) {
            (None, None) => invalid("a budget needs a time limit, a restart limit, or both"),
            (_, Some(0)) => invalid("restart limit must be at least 1"),
            _ => Ok(()),
        }
    }
}

/// Composite searches that alternate a cheap and an expensive neighbourhood.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VnsVariant {
    /// 2-exchange to convergence, then the Alternating Algorithm.
    TwoExPlusAa,
    /// 2-exchange to convergence, then one Alternating Algorithm improvement, repeated.
    TwoExAaStep,
    /// Alternating Algorithm once, then first-improvement optimized 2-exchange.
    AaPlus2ExOptFirst,
    /// Alternating Algorithm to convergence, then one best optimized 2-exchange move, repeated.
    Aa2ExOptStep,
    /// Alternating Algorithm to convergence, then one first optimized 2-exchange move, repeated.
    Aa2ExOptFirstStep,
}

impl VnsVariant {
    pub const ALL: [VnsVariant; 5] = [
        Self::TwoExPlusAa,
        Self::TwoExAaStep,
        Self::AaPlus2ExOptFirst,
        Self::Aa2ExOptStep,
        Self::Aa2ExOptFirstStep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::TwoExPlusAa => "2ex+aa",
            Self::TwoExAaStep => "2ex-aa-step",
            Self::AaPlus2ExOptFirst => "aa+2exopt-first",
            Self::Aa2ExOptStep => "aa-2exopt-step",
            Self::Aa2ExOptFirstStep => "aa-2exopt-first-step",
        }
    }

    /// The neighbourhoods a converged run is locally optimal for.
    pub fn constituents(self) -> [SearchVariant; 2] {
        let aa = SearchVariant::best(Family::Aa);
        match self {
            Self::TwoExPlusAa | Self::TwoExAaStep => [SearchVariant::best(Family::TwoEx), aa],
            _ => [aa, SearchVariant::best(Family::TwoExOpt)],
        }
    }
}

impl fmt::Display for VnsVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VnsVariant {
    type Err = BapError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|v| v.as_str() == lower)
            .ok_or_else(|| BapError::InvalidArgument(format!("unknown composite '{s}'")))
    }
}

/// Runs a composite on `st`; returns whether it terminated naturally.
/// `st.iterations` ends up counting neighbourhood switches.
fn run_vns(st: &mut State<'_>, variant: VnsVariant, clock: &Clock) -> bool {
    let two_ex = SearchVariant::best(Family::TwoEx);
    let aa = SearchVariant::best(Family::Aa);
    let mut switches = 0u64;
    let converged = match variant {
        VnsVariant::TwoExPlusAa => {
            switches = 1;
            descend(st, two_ex, clock) && descend(st, aa, clock)
        }
        VnsVariant::AaPlus2ExOptFirst => {
            switches = 1;
            descend(st, aa, clock) && descend(st, SearchVariant::first(Family::TwoExOpt), clock)
        }
        VnsVariant::TwoExAaStep => loop {
            if !descend(st, two_ex, clock) {
                break false;
            }
            switches += 1;
            if reopt_x(st) {
                continue;
            }
            if clock.expired() {
                break false;
            }
            if !reopt_y(st) {
                break true;
            }
        },
        VnsVariant::Aa2ExOptStep | VnsVariant::Aa2ExOptFirstStep => {
            let escape = if variant == VnsVariant::Aa2ExOptStep {
                SearchVariant::best(Family::TwoExOpt)
            } else {
                SearchVariant::first(Family::TwoExOpt)
            };
            loop {
                if !descend(st, aa, clock) {
                    break false;
                }
                switches += 1;
                match step(st, escape, clock) {
                    Step::Improved => {}
                    Step::Optimal => break true,
                    Step::Expired => break false,
                }
            }
        }
    };
    st.iterations = switches;
    converged
}

/// Runs a composite from `start`. The report's `iterations` is the number of
/// switches to the second neighbourhood.
pub fn vns(
    inst: &BapInstance,
    start: &Solution,
    variant: VnsVariant,
    time_limit: Option<Duration>,
) -> Result<SearchReport> {
    let started = Instant::now();
    let clock = Clock::after(time_limit);
    let mut st = State::new(inst, start.clone())?;
    let converged = run_vns(&mut st, variant, &clock);
    Ok(st.into_report(started, converged))
}

fn h_start_until(
    inst: &BapInstance,
    h: usize,
    master_seed: u64,
    clock: &Clock,
    started: Instant,
) -> Result<SearchReport> {
    if h == 0 {
        return invalid("h_start_vns needs h >= 1");
    }
    let aa = SearchVariant::best(Family::Aa);
    let mut best: Option<State<'_>> = None;
    let mut converged = true;
    let mut evaluations = 0;
    for r in 0..h as u64 {
        if r > 0 && clock.expired() {
            converged = false;
            break;
        }
        let mut st = State::new(inst, random_xy_greedy(inst, derive_seed(master_seed, r)))?;
        converged &= descend(&mut st, aa, clock);
        evaluations += st.evaluations;
        if best.as_ref().is_none_or(|b| st.value < b.value) {
            best = Some(st);
        }
    }
    let mut st = best.expect("h >= 1 starts");
    st.iterations = 0;
    st.evaluations = evaluations;
    converged &= run_vns(&mut st, VnsVariant::Aa2ExOptFirstStep, clock);
    Ok(st.into_report(started, converged))
}

/// Builds `h` RandomXYGreedy starts (restart `r` uses `derive_seed(master_seed, r)`),
/// runs the Alternating Algorithm on each, keeps the best (lowest `r` on
/// ties) and continues from it with [`VnsVariant::Aa2ExOptFirstStep`].
pub fn h_start_vns(
    inst: &BapInstance,
    h: usize,
    time_limit: Option<Duration>,
    master_seed: u64,
) -> Result<SearchReport> {
    h_start_until(inst, h, master_seed, &Clock::after(time_limit), Instant::now())
}

/// What runs after construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Search {
    /// Construction only.
    None,
    Local(SearchVariant),
    Vns(VnsVariant),
    /// [`h_start_vns`] with the given `h`; it builds its own starts.
    HStart(usize),
    /// Exhaustive enumeration; ignores the start.
    Brute,
}

impl fmt::Display for Search {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::None => f.write_str("none"),
            Self::Local(v) => v.fmt(f),
            Self::Vns(v) => v.fmt(f),
            Self::HStart(h) => write!(f, "h-aa-2exopt-first-step:{h}"),
            Self::Brute => f.write_str("brute"),
        }
    }
}

impl FromStr for Search {
    type Err = BapError;

    /// Local search names (`2ex`, `3exopt-first`, …), composite names
    /// (`aa-2exopt-first-step`, …), `h-aa-2exopt-first-step:<h>`, `none` or `brute`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "none" => return Ok(Self::None),
            "brute" => return Ok(Self::Brute),
            _ => {}
        }
        if let Some(h) = lower.strip_prefix("h-aa-2exopt-first-step") {
            let h = h.strip_prefix(':').unwrap_or(h);
            return match h.parse::<usize>() {
                Ok(h) if h >= 1 => Ok(Self::HStart(h)),
                _ if h.is_empty() => invalid(format!("'{s}' needs a start count, e.g. h-aa-2exopt-first-step:10")),
                _ => invalid(format!("bad start count in '{s}'")),
            };
        }
        if let Ok(v) = lower.parse::<VnsVariant>() {
            return Ok(Self::Vns(v));
        }
        lower
            .parse::<SearchVariant>()
            .map(Self::Local)
            .map_err(|_| BapError::InvalidArgument(format!("unknown algorithm '{s}'")))
    }
}

/// A constructor followed by a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Algorithm {
    pub constructor: Constructor,
    pub search: Search,
}

impl Algorithm {
    pub fn new(constructor: Constructor, search: Search) -> Self {
        Self { constructor, search }
    }

    /// One run with `seed` driving the randomized parts.
    pub fn run(&self, inst: &BapInstance, seed: u64, time_limit: Option<Duration>) -> Result<SearchReport> {
        self.run_until(inst, seed, time_limit.map(|d| Instant::now() + d))
    }

    pub(crate) fn run_until(&self, inst: &BapInstance, seed: u64, deadline: Option<Instant>) -> Result<SearchReport> {
        let started = Instant::now();
        let clock = Clock::until(deadline);
        match self.search {
            Search::Brute => {
                let mut report = brute_force_solve(inst)?;
                report.elapsed = started.elapsed();
                Ok(report)
            }
            Search::HStart(h) => h_start_until(inst, h, seed, &clock, started),
            Search::None | Search::Local(_) | Search::Vns(_) => {
                let start = self.constructor.build(inst, seed)?;
                let mut st = State::new(inst, start)?;
                let converged = match self.search {
                    Search::Local(v) => {
                        v.validate()?;
                        descend(&mut st, v, &clock)
                    }
                    Search::Vns(v) => run_vns(&mut st, v, &clock),
                    _ => true,
                };
                Ok(st.into_report(started, converged))
            }
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.constructor, self.search)
    }
}

impl FromStr for Algorithm {
    type Err = BapError;

    /// `<constructor>/<search>`, e.g. `randomxygreedy/aa`.
    fn from_str(s: &str) -> Result<Self> {
        let (c, search) = s
            .split_once('/')
            .ok_or_else(|| BapError::InvalidArgument(format!("expected '<constructor>/<search>', got '{s}'")))?;
        Ok(Self::new(c.parse()?, search.parse()?))
    }
}

/// Outcome of a multistart run.
#[derive(Clone, Debug)]
pub struct MetaReport {
    pub best: SearchReport,
    /// Number of restarts performed.
    pub restarts: u64,
    /// Restart index that produced `best` (lowest on ties).
    pub best_iter: u64,
    /// Final value of every restart, in restart order.
    pub log: Vec<i64>,
    /// `(finish time, value)` of every restart that beat all lower-numbered
    /// restarts: the best-value-versus-time curve.
    pub trace: Vec<(Duration, i64)>,
    pub elapsed: Duration,
}

/// Repeats `algorithm` from fresh starts until the budget is spent; restart
/// `r` uses `derive_seed(master_seed, r)`. At least one restart always runs.
///
/// With a restart limit and no time limit the result does not depend on
/// `exec`. With a time limit, parallel mode launches restarts in waves of
/// [`Exec::width`], so the number of restarts differs from sequential mode.
pub fn multistart(
    inst: &BapInstance,
    algorithm: &Algorithm,
    budget: Budget,
    master_seed: u64,
    exec: Exec,
) -> Result<MetaReport> {
    budget.validate()?;
    let started = Instant::now();
    let deadline = budget.time_limit.map(|d| started + d);
    let limit = budget.restarts.unwrap_or(u64::MAX);
    let run = |r: u64| {
        algorithm
            .run_until(inst, derive_seed(master_seed, r), deadline)
            .map(|report| (report, started.elapsed()))
    };
    let past_deadline = || deadline.is_some_and(|d| Instant::now() >= d);

    let mut reports: Vec<(SearchReport, Duration)> = Vec::new();
    if exec == Exec::Sequential || exec.width() == 1 {
        for r in 0..limit {
            if r > 0 && past_deadline() {
                break;
            }
            reports.push(run(r)?);
        }
    } else if deadline.is_none() {
        reports = exec
            .map(limit as usize, |r| run(r as u64))
            .into_iter()
            .collect::<Result<_>>()?;
    } else {
        let width = exec.width() as u64;
        let mut next = 0u64;
        while next < limit && (next == 0 || !past_deadline()) {
            let wave = width.min(limit - next);
            let batch = exec.map(wave as usize, |t| run(next + t as u64));
            for report in batch {
                reports.push(report?);
            }
            next += wave;
        }
    }

    let log: Vec<i64> = reports.iter().map(|(r, _)| r.value).collect();
    let mut trace: Vec<(Duration, i64)> = Vec::new();
    for (r, at) in &reports {
        if trace.last().is_none_or(|&(_, v)| r.value < v) {
            trace.push((*at, r.value));
        }
    }
    let best_iter = log
        .iter()
        .enumerate()
        .min_by_key(|&(r, &v)| (v, r))
        .map(|(r, _)| r)
        .expect("at least one restart");
    let restarts = reports.len() as u64;
    let best = reports.swap_remove(best_iter).0;
    Ok(MetaReport {
        best,
        restarts,
        best_iter: best_iter as u64,
        log,
        trace,
        elapsed: started.elapsed(),
    })
}

/// Duration of one first-improvement optimized 3-exchange descent from a
/// random start: a machine-dependent multistart budget that scales with the
/// instance.
pub fn calibrated_budget(inst: &BapInstance, seed: u64) -> Result<Duration> {
    let algorithm = Algorithm::new(
        Constructor::Random,
        Search::Local(SearchVariant::first(Family::ThreeExOpt)),
    );
    Ok(algorithm.run(inst, seed, None)?.elapsed)
}
