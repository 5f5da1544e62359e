//! Scan of the cyclic-shift equivalence class of a solution.

use std::time::Instant;

use crate::error::Result;
use crate::instance::BapInstance;
use crate::objective::evaluate_perms;
use crate::report::SearchReport;
use crate::solution::Solution;

/// `p` with every image advanced by `offset` modulo `p.len()`.
pub fn shift_images(p: &[usize], offset: usize) -> Vec<usize> {
    let len = p.len();
    p.iter().map(|&v| (v + offset) % len).collect()
}

/// Evaluates all `mn` members `(π + a, φ + b)` of the shift class of `s` and
/// returns the best one (lowest `(a, b)` on ties, `(0, 0)` being `s` itself).
///
/// The best member is never worse than the instance average. Runs in
/// `O(m²n²)`.
pub fn shift_class_scan(inst: &BapInstance, s: &Solution) -> Result<SearchReport> {
    s.check_dims(inst)?;
    let start = Instant::now();
    let (m, n) = (inst.m(), inst.n());
    let mut best = (evaluate_perms(inst, s.pi(), s.phi()), 0, 0);
    for a in 0..m {
        let pi = shift_images(s.pi(), a);
        for b in 0..n {
            if a == 0 && b == 0 {
                continue;
            }
            let value = evaluate_perms(inst, &pi, &shift_images(s.phi(), b));
            if value < best.0 {
                best = (value, a, b);
            }
        }
    }
    let (value, a, b) = best;
    let solution = Solution::from_parts_unchecked(shift_images(s.pi(), a), shift_images(s.phi(), b));
    Ok(SearchReport {
        solution,
        value,
        iterations: u64::from((a, b) != (0, 0)),
        evaluations: (m * n) as u64,
        elapsed: start.elapsed(),
        converged: true,
    })
}
