use std::time::Duration;

use crate::solution::Solution;

/// Outcome of a construction, search or composite run.
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub solution: Solution,
    /// Always `evaluate(instance, &solution)`.
    pub value: i64,
    /// Accepted moves; for VNS composites, neighbourhood switches.
    pub iterations: u64,
    /// Candidate moves examined.
    pub evaluations: u64,
    pub elapsed: Duration,
    /// `false` when a time budget cut the run short of a local optimum.
    pub converged: bool,
}
