//! Exhaustive enumeration, for testing on tiny instances.

use std::time::Instant;

use crate::caches::build_g;
use crate::error::{BapError, Result};
use crate::instance::BapInstance;
use crate::report::SearchReport;
use crate::solution::Solution;

/// Default ceiling on `m!·n!`.
pub const DEFAULT_ENUMERATION_LIMIT: u128 = 10_000_000;

pub fn brute_force_solve(inst: &BapInstance) -> Result<SearchReport> {
    brute_force_solve_with_limit(inst, DEFAULT_ENUMERATION_LIMIT)
}

/// Global optimum by enumerating every `(π, φ)`; the first optimum in
/// lexicographic `(π, φ)` order is returned.
pub fn brute_force_solve_with_limit(inst: &BapInstance, limit: u128) -> Result<SearchReport> {
    let candidates = factorial(inst.m()).saturating_mul(factorial(inst.n()));
    if candidates > limit {
        return Err(BapError::Capacity { candidates, limit });
    }
    let start = Instant::now();
    let (m, n) = (inst.m(), inst.n());
    let mut pi: Vec<usize> = (0..m).collect();
    let mut best: Option<(i64, Vec<usize>, Vec<usize>)> = None;
    loop {
        let g = build_g(inst, &pi);
        let c_sum: i64 = pi.iter().enumerate().map(|(i, &j)| inst.c()[(i, j)]).sum();
        let mut phi: Vec<usize> = (0..n).collect();
        loop {
            let value = c_sum + phi.iter().enumerate().map(|(k, &l)| g[(k, l)]).sum::<i64>();
            if best.as_ref().is_none_or(|b| value < b.0) {
                best = Some((value, pi.clone(), phi.clone()));
            }
            if !next_permutation(&mut phi) {
                break;
            }
        }
        if !next_permutation(&mut pi) {
            break;
        }
    }
    let (value, pi, phi) = best.expect("at least one solution");
    Ok(SearchReport {
        solution: Solution::from_parts_unchecked(pi, phi),
        value,
        iterations: 0,
        evaluations: candidates as u64,
        elapsed: start.elapsed(),
        converged: true,
    })
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128)
        .try_fold(1u128, |acc, v| acc.checked_mul(v))
        .unwrap_or(u128::MAX)
}

/// Advances `p` to the next permutation in lexicographic order; `false` after the last.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let Some(pivot) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let succ = p.iter().rposition(|&v| v > p[pivot]).expect("pivot has a successor");
    p.swap(pivot, succ);
    p[pivot + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instgen::fixtures;
    use crate::objective::evaluate;

    #[test]
    fn next_permutation_enumerates_all() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(p, vec![3, 2, 1, 0]);
    }

    #[test]
    fn zero_instance() {
        let report = brute_force_solve(&BapInstance::zeros(2, 3).unwrap()).unwrap();
        assert_eq!(report.value, 0);
        assert_eq!(report.evaluations, 12);
    }

    #[test]
    fn fixture_optima() {
        // Swapping x cancels every nonzero entry, so the optimum is 0.
        let report = brute_force_solve(&fixtures::greedy_pathology()).unwrap();
        assert_eq!(report.value, 0);
        assert_eq!(evaluate(&fixtures::greedy_pathology(), &report.solution).unwrap(), 0);
        assert_eq!(brute_force_solve(&fixtures::exchange_trap()).unwrap().value, -100);
    }

    #[test]
    fn capacity_limit() {
        let inst = BapInstance::zeros(7, 7).unwrap();
        assert!(matches!(brute_force_solve(&inst), Err(BapError::Capacity { .. })));
        assert!(brute_force_solve_with_limit(&BapInstance::zeros(3, 3).unwrap(), 35).is_err());
        assert!(brute_force_solve_with_limit(&BapInstance::zeros(3, 3).unwrap(), 36).is_ok());
    }
}
