//! Local searches over exchange, alternating, optimized-exchange and shift
//! neighbourhoods.
//!
//! Every search keeps the solution together with its [`DeltaCaches`] and the
//! current objective value, accepts only strictly improving moves, and stops
//! at a local optimum or when the time budget runs out. Scan order is fixed
//! (x side before y side, indices ascending) so runs are reproducible.

mod alternating;
mod certify;
mod exchange;
mod optimized;
mod shifts;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::caches::DeltaCaches;
use crate::error::{invalid, BapError, Result};
use crate::instance::BapInstance;
use crate::objective::evaluate_perms;
use crate::report::SearchReport;
use crate::solution::Solution;

pub use certify::{certify_local_optimum, Certification, Witness};
pub use shifts::shuffle_images;

/// Neighbourhood family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Pairwise swaps on one side.
    TwoEx,
    /// Pairwise swaps and 3-cycles on one side.
    ThreeEx,
    /// Full re-optimization of one side at a time by an assignment solve.
    Aa,
    /// Swaps on either side or on both at once.
    Dual2Ex,
    /// Up to two changes on one side, the other side re-optimized.
    TwoExOpt,
    /// Up to three changes on one side, the other side re-optimized.
    ThreeExOpt,
    /// Cyclic image shifts of one side.
    Shift,
    /// Shifts plus bucket shuffles of one side.
    ShiftShuffle,
    /// Simultaneous shifts of both sides.
    DualShift,
    /// Shifts of one side, the other side re-optimized.
    ShiftOpt,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Self::TwoEx,
        Self::ThreeEx,
        Self::Aa,
        Self::Dual2Ex,
        Self::TwoExOpt,
        Self::ThreeExOpt,
        Self::Shift,
        Self::ShiftShuffle,
        Self::DualShift,
        Self::ShiftOpt,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::TwoEx => "2ex",
            Self::ThreeEx => "3ex",
            Self::Aa => "aa",
            Self::Dual2Ex => "dual2ex",
            Self::TwoExOpt => "2exopt",
            Self::ThreeExOpt => "3exopt",
            Self::Shift => "shift",
            Self::ShiftShuffle => "shift-shuffle",
            Self::DualShift => "dual-shift",
            Self::ShiftOpt => "shift-opt",
        }
    }

    /// Whether the first/best rule changes anything for this family.
    pub fn has_rule(self) -> bool {
        self != Self::Aa
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Rule {
    First,
    #[default]
    Best,
}

/// Assignment subsolver used by the optimized exchange families.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LapMode {
    #[default]
    Exact,
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchVariant {
    pub family: Family,
    pub rule: Rule,
    pub lap_mode: LapMode,
}

impl SearchVariant {
    pub fn new(family: Family, rule: Rule, lap_mode: LapMode) -> Result<Self> {
        let v = Self { family, rule, lap_mode };
        v.validate()?;
        Ok(v)
    }

    pub fn best(family: Family) -> Self {
        Self {
            family,
            rule: Rule::Best,
            lap_mode: LapMode::Exact,
        }
    }

    pub fn first(family: Family) -> Self {
        Self {
            family,
            rule: Rule::First,
            lap_mode: LapMode::Exact,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lap_mode == LapMode::Greedy && self.family != Family::TwoExOpt {
            return invalid(format!(
                "greedy assignment mode is only defined for 2exopt, not {}",
                self.family
            ));
        }
        Ok(())
    }
}

impl fmt::Display for SearchVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.family.as_str())?;
        if self.lap_mode == LapMode::Greedy {
            f.write_str("-heuristic")?;
        }
        if self.rule == Rule::First && self.family.has_rule() {
            f.write_str("-first")?;
        }
        Ok(())
    }
}

impl FromStr for SearchVariant {
    type Err = BapError;

    /// `<family>[-heuristic][-first]`, e.g. `2ex`, `3exopt-first`, `2exopt-heuristic`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (rest, rule) = match lower.strip_suffix("-first") {
            Some(rest) => (rest, Rule::First),
            None => (lower.as_str(), Rule::Best),
        };
        let (rest, lap_mode) = match rest.strip_suffix("-heuristic") {
            Some(rest) => (rest, LapMode::Greedy),
            None => (rest, LapMode::Exact),
        };
        let family = Family::ALL
            .into_iter()
            .find(|f| f.as_str() == rest)
            .ok_or_else(|| BapError::InvalidArgument(format!("unknown search '{s}'")))?;
        if rule == Rule::First && !family.has_rule() {
            return invalid(format!("'{family}' has no first-improvement form"));
        }
        Self::new(family, rule, lap_mode)
    }
}

/// A neighbourhood move. Index triples `[a, b, c]` denote the 3-cycle
/// `p'(a) = p(b), p'(b) = p(c), p'(c) = p(a)`. Moves named `…Reopt…` also
/// replace the other side by an optimal assignment for the changed side;
/// `ReoptX`/`ReoptY` re-optimize one side and leave the other unchanged.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    SwapX(usize, usize),
    SwapY(usize, usize),
    RotateX([usize; 3]),
    RotateY([usize; 3]),
    DualSwap((usize, usize), (usize, usize)),
    ReoptX,
    ReoptY,
    SwapXReoptY(usize, usize),
    SwapYReoptX(usize, usize),
    RotateXReoptY([usize; 3]),
    RotateYReoptX([usize; 3]),
    ShiftX(usize),
    ShiftY(usize),
    ShuffleX { u: usize, a: usize },
    ShuffleY { v: usize, b: usize },
    DualShift(usize, usize),
    ShiftXReoptY(usize),
    ShiftYReoptX(usize),
}

/// `p` with the images of `i1` and `i2` exchanged.
pub fn swap_images(p: &[usize], i1: usize, i2: usize) -> Vec<usize> {
    let mut out = p.to_vec();
    out.swap(i1, i2);
    out
}

/// `p` with the 3-cycle `p'(a) = p(b), p'(b) = p(c), p'(c) = p(a)` applied.
pub fn rotate_images(p: &[usize], [a, b, c]: [usize; 3]) -> Vec<usize> {
    let mut out = p.to_vec();
    out[a] = p[b];
    out[b] = p[c];
    out[c] = p[a];
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Side {
    X,
    Y,
}

/// Cooperative wall-clock limit, checked between moves.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Clock {
    deadline: Option<Instant>,
}

impl Clock {
    pub(crate) fn until(deadline: Option<Instant>) -> Self {
        Self { deadline }
    }

    pub(crate) fn after(limit: Option<Duration>) -> Self {
        Self {
            deadline: limit.map(|d| Instant::now() + d),
        }
    }

    pub(crate) fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// An accepted move: the objective change and the reassigned rows per side.
pub(crate) struct Candidate {
    pub(crate) mv: Move,
    pub(crate) delta: i64,
    pub(crate) x: Changes,
    pub(crate) y: Changes,
}

/// Reassigned rows as `(row, new image)`.
pub(crate) type Changes = Vec<(usize, usize)>;

/// Rows where `new` differs from `old`, as `(row, new image)`.
pub(crate) fn changes(old: &[usize], new: &[usize]) -> Changes {
    old.iter()
        .zip(new)
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(r, (_, &b))| (r, b))
        .collect()
}

/// Collects the move to apply under a first- or best-improvement rule.
pub(crate) struct Picker<'c> {
    rule: Rule,
    clock: &'c Clock,
    pub(crate) best: Option<Candidate>,
    pub(crate) evaluations: u64,
    pub(crate) expired: bool,
    poll_mask: u64,
}

impl<'c> Picker<'c> {
    /// `poll_stride` (a power of two) is how many offers pass between clock reads.
    pub(crate) fn new(rule: Rule, clock: &'c Clock, poll_stride: u64) -> Self {
        debug_assert!(poll_stride.is_power_of_two());
        Self {
            rule,
            clock,
            best: None,
            evaluations: 0,
            expired: false,
            poll_mask: poll_stride - 1,
        }
    }

    /// Records a candidate with objective change `delta`; `make` builds it only
    /// when it becomes the incumbent. Returns `true` when the scan should stop.
    pub(crate) fn offer(&mut self, delta: i64, make: impl FnOnce() -> (Move, Changes, Changes)) -> bool {
        self.evaluations += 1;
        if delta < 0 && self.best.as_ref().is_none_or(|b| delta < b.delta) {
            let (mv, x, y) = make();
            self.best = Some(Candidate { mv, delta, x, y });
        }
        self.done()
    }

    /// Whether the scan should stop, polling the clock as a side effect.
    pub(crate) fn done(&mut self) -> bool {
        if self.rule == Rule::First && self.best.is_some() {
            return true;
        }
        self.evaluations & self.poll_mask == 0 && self.poll()
    }

    pub(crate) fn poll(&mut self) -> bool {
        if !self.expired && self.clock.expired() {
            self.expired = true;
        }
        self.expired
    }
}

/// Search state: solution, caches in step with it, and its objective value.
pub(crate) struct State<'a> {
    pub(crate) inst: &'a BapInstance,
    pub(crate) sol: Solution,
    pub(crate) caches: DeltaCaches,
    pub(crate) value: i64,
    pub(crate) iterations: u64,
    pub(crate) evaluations: u64,
    pub(crate) last_move: Option<Move>,
}

impl<'a> State<'a> {
    pub(crate) fn new(inst: &'a BapInstance, start: Solution) -> Result<Self> {
        start.check_dims(inst)?;
        let caches = DeltaCaches::build_unchecked(inst, &start);
        let value = evaluate_perms(inst, start.pi(), start.phi());
        Ok(Self {
            inst,
            sol: start,
            caches,
            value,
            iterations: 0,
            evaluations: 0,
            last_move: None,
        })
    }

    pub(crate) fn side(&self, side: Side) -> (&crate::matrix::SquareMatrix, &[usize]) {
        match side {
            Side::X => (self.caches.e(), self.sol.pi()),
            Side::Y => (self.caches.g(), self.sol.phi()),
        }
    }

    pub(crate) fn apply(&mut self, cand: Candidate) {
        if !cand.x.is_empty() {
            self.caches.reassign_x(self.inst, &mut self.sol, &cand.x);
        }
        if !cand.y.is_empty() {
            self.caches.reassign_y(self.inst, &mut self.sol, &cand.y);
        }
        self.value += cand.delta;
        self.iterations += 1;
        self.last_move = Some(cand.mv);
        debug_assert_eq!(self.value, evaluate_perms(self.inst, self.sol.pi(), self.sol.phi()));
    }

    pub(crate) fn into_report(self, started: Instant, converged: bool) -> SearchReport {
        SearchReport {
            solution: self.sol,
            value: self.value,
            iterations: self.iterations,
            evaluations: self.evaluations,
            elapsed: started.elapsed(),
            converged,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Step {
    Improved,
    Optimal,
    Expired,
}

/// One scan of the variant's neighbourhood, applying the chosen move.
pub(crate) fn step(st: &mut State<'_>, variant: SearchVariant, clock: &Clock) -> Step {
    if variant.family == Family::Aa {
        return alternating::aa_step(st, clock);
    }
    let cheap = matches!(
        variant.family,
        Family::TwoEx | Family::ThreeEx | Family::Dual2Ex | Family::Shift | Family::ShiftShuffle
    );
    let mut picker = Picker::new(variant.rule, clock, if cheap { 1024 } else { 1 });
    match variant.family {
        Family::TwoEx => exchange::scan(st, &mut picker, false),
        Family::ThreeEx => exchange::scan(st, &mut picker, true),
        Family::Dual2Ex => exchange::scan_dual(st, &mut picker),
        Family::TwoExOpt => optimized::scan(st, &mut picker, 2, variant.lap_mode),
        Family::ThreeExOpt => optimized::scan(st, &mut picker, 3, variant.lap_mode),
        Family::Shift => shifts::scan_shift(st, &mut picker, false),
        Family::ShiftShuffle => shifts::scan_shift(st, &mut picker, true),
        Family::DualShift => shifts::scan_dual_shift(st, &mut picker),
        Family::ShiftOpt => shifts::scan_shift_opt(st, &mut picker),
        Family::Aa => unreachable!(),
    }
    st.evaluations += picker.evaluations;
    match picker.best {
        Some(cand) => {
            st.apply(cand);
            Step::Improved
        }
        None if picker.expired => Step::Expired,
        None => Step::Optimal,
    }
}

/// Runs `variant` to a local optimum; `false` if the clock stopped it first.
pub(crate) fn descend(st: &mut State<'_>, variant: SearchVariant, clock: &Clock) -> bool {
    loop {
        if clock.expired() {
            return false;
        }
        match step(st, variant, clock) {
            Step::Improved => {}
            Step::Optimal => return true,
            Step::Expired => return false,
        }
    }
}

pub(crate) use alternating::{reopt_x, reopt_y};

/// Local search from `start` until no improving move exists or `time_limit`
/// elapses (then the best solution so far is returned with
/// `converged = false`).
pub fn local_search(
    inst: &BapInstance,
    start: &Solution,
    variant: SearchVariant,
    time_limit: Option<Duration>,
) -> Result<SearchReport> {
    variant.validate()?;
    let started = Instant::now();
    let clock = Clock::after(time_limit);
    let mut st = State::new(inst, start.clone())?;
    let converged = descend(&mut st, variant, &clock);
    Ok(st.into_report(started, converged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::brute_force_solve;
    use crate::construct::random_solution;
    use crate::instgen::{fixtures, generate_one, InstanceKind};
    use crate::objective::{at_most, average_value, evaluate, two_exchange_bound};

    fn all_variants() -> Vec<SearchVariant> {
        let mut out = Vec::new();
        for family in Family::ALL {
            out.push(SearchVariant::best(family));
            if family.has_rule() {
                out.push(SearchVariant::first(family));
            }
        }
        out.push(SearchVariant::new(Family::TwoExOpt, Rule::Best, LapMode::Greedy).unwrap());
        out.push(SearchVariant::new(Family::TwoExOpt, Rule::First, LapMode::Greedy).unwrap());
        out
    }

    #[test]
    fn names_round_trip() {
        for v in all_variants() {
            assert_eq!(v.to_string().parse::<SearchVariant>().unwrap(), v, "{v}");
        }
        assert!("3ex-heuristic".parse::<SearchVariant>().is_err());
        assert!("aa-first".parse::<SearchVariant>().is_err());
        assert!("4ex".parse::<SearchVariant>().is_err());
        assert!(SearchVariant::new(Family::ShiftOpt, Rule::Best, LapMode::Greedy).is_err());
    }

    #[test]
    fn rotations_are_three_cycles() {
        assert_eq!(rotate_images(&[10, 11, 12, 13], [0, 2, 3]), vec![12, 11, 13, 10]);
        assert_eq!(changes(&[0, 1, 2], &[0, 2, 1]), vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn zero_instance_converges_immediately() {
        let inst = BapInstance::zeros(4, 5).unwrap();
        let start = random_solution(4, 5, 3);
        for v in all_variants() {
            let r = local_search(&inst, &start, v, None).unwrap();
            assert_eq!((r.value, r.iterations, r.converged), (0, 0, true), "{v}");
            assert_eq!(r.solution, start);
        }
    }

    #[test]
    fn reports_are_consistent_and_monotone() {
        for seed in 0..6 {
            let kind = InstanceKind::ALL[seed as usize % 4];
            let inst = generate_one(kind, 4, 5, seed, 0).unwrap();
            let start = random_solution(4, 5, seed);
            let start_value = evaluate(&inst, &start).unwrap();
            for v in all_variants() {
                let r = local_search(&inst, &start, v, None).unwrap();
                assert_eq!(r.value, evaluate(&inst, &r.solution).unwrap(), "{v}");
                assert!(r.value <= start_value);
                assert_eq!(r.value < start_value, r.iterations > 0, "{v}");
                assert!(r.converged);
            }
        }
    }

    #[test]
    fn exchange_trap_from_identity() {
        let inst = fixtures::exchange_trap();
        let start = Solution::identity(2, 2);
        for name in ["2ex", "2ex-first", "3ex", "3ex-first", "aa", "shift", "shift-shuffle"] {
            let r = local_search(&inst, &start, name.parse().unwrap(), None).unwrap();
            assert_eq!(r.value, -4, "{name}");
        }
        for name in [
            "dual2ex",
            "dual2ex-first",
            "2exopt",
            "2exopt-first",
            "3exopt",
            "3exopt-first",
        ] {
            let r = local_search(&inst, &start, name.parse().unwrap(), None).unwrap();
            assert_eq!(r.value, -fixtures::EXCHANGE_TRAP_L, "{name}");
        }
    }

    #[test]
    fn dual_exchange_escapes_the_trap_in_one_move() {
        let inst = fixtures::exchange_trap();
        let mut st = State::new(&inst, Solution::identity(2, 2)).unwrap();
        assert_eq!(
            step(&mut st, "dual2ex".parse().unwrap(), &Clock::after(None)),
            Step::Improved
        );
        assert_eq!(st.last_move, Some(Move::DualSwap((0, 1), (0, 1))));
        assert_eq!(st.value, -100);
    }

    #[test]
    fn hp_trap_holds_exchange_searches() {
        let inst = fixtures::hp_trap(5, 5, 2).unwrap();
        let start = Solution::identity(5, 5);
        for name in ["2ex", "3ex", "dual2ex"] {
            let r = local_search(&inst, &start, name.parse().unwrap(), None).unwrap();
            assert_eq!(r.value, -25, "{name}");
        }
        assert_eq!(
            brute_force_solve(&fixtures::hp_trap(3, 3, 1).unwrap()).unwrap().value,
            -9 * 200
        );
    }

    #[test]
    fn rank_one_reaches_the_optimum() {
        for seed in 0..8 {
            let inst = generate_one(InstanceKind::Rank1, 3, 3, seed, 0).unwrap();
            let opt = brute_force_solve(&inst).unwrap().value;
            for name in [
                "aa",
                "2exopt",
                "2exopt-first",
                "shift-opt",
                "shift-opt-first",
                "3exopt-first",
            ] {
                let start = random_solution(3, 3, seed + 100);
                let r = local_search(&inst, &start, name.parse().unwrap(), None).unwrap();
                assert_eq!(r.value, opt, "{name} seed {seed}");
            }
        }
    }

    #[test]
    fn average_guarantees() {
        for seed in 0..20 {
            let inst = generate_one(InstanceKind::Uniform, 5, 6, seed, 0).unwrap();
            let start = random_solution(5, 6, seed);
            let avg = average_value(&inst);
            for name in ["dual-shift", "shift-opt", "dual-shift-first", "shift-opt-first"] {
                let r = local_search(&inst, &start, name.parse().unwrap(), None).unwrap();
                assert!(at_most(r.value, &avg), "{name} seed {seed}");
            }
            let r = local_search(&inst, &start, SearchVariant::best(Family::TwoEx), None).unwrap();
            assert!(at_most(r.value, &two_exchange_bound(&inst)));
        }
    }

    #[test]
    fn time_limit_stops_early() {
        let inst = generate_one(InstanceKind::Uniform, 30, 30, 1, 0).unwrap();
        let start = random_solution(30, 30, 1);
        let r = local_search(&inst, &start, "3exopt".parse().unwrap(), Some(Duration::from_millis(1))).unwrap();
        assert!(!r.converged);
        assert_eq!(r.value, evaluate(&inst, &r.solution).unwrap());
        assert!(r.elapsed < Duration::from_secs(2));
    }

    #[test]
    fn rejects_mismatched_start() {
        let inst = BapInstance::zeros(2, 3).unwrap();
        assert!(local_search(
            &inst,
            &Solution::identity(3, 3),
            SearchVariant::best(Family::TwoEx),
            None
        )
        .is_err());
    }
}
