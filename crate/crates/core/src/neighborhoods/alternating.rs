//! Alternating Algorithm: re-optimize x against `E(φ)`, then y against `G(π)`.

use super::{changes, Candidate, Clock, Move, State, Step};
use crate::lap::hungarian;
use crate::matrix::SquareMatrix;

/// Optimal assignment for `w` and its cost.
fn solve(w: &SquareMatrix) -> (Vec<usize>, i64) {
    let p = hungarian(w.n(), |r, c| w[(r, c)] as i128);
    let cost = p.iter().enumerate().map(|(r, &c)| w[(r, c)]).sum();
    (p, cost)
}

/// Replaces `π` by an optimal assignment for `E(φ)` if that is a strict
/// improvement; returns whether it was.
pub(crate) fn reopt_x(st: &mut State<'_>) -> bool {
    let (pi_star, cost) = solve(st.caches.e());
    st.evaluations += 1;
    let current = st.caches.x_side_sum(st.sol.pi());
    if cost >= current {
        return false;
    }
    let x = changes(st.sol.pi(), &pi_star);
    st.apply(Candidate {
        mv: Move::ReoptX,
        delta: cost - current,
        x,
        y: Vec::new(),
    });
    true
}

/// Replaces `φ` by an optimal assignment for `G(π)` if that is a strict improvement.
pub(crate) fn reopt_y(st: &mut State<'_>) -> bool {
    let (phi_star, cost) = solve(st.caches.g());
    st.evaluations += 1;
    let current = st.caches.y_side_sum(st.sol.phi());
    if cost >= current {
        return false;
    }
    let y = changes(st.sol.phi(), &phi_star);
    st.apply(Candidate {
        mv: Move::ReoptY,
        delta: cost - current,
        x: Vec::new(),
        y,
    });
    true
}

/// One x-then-y cycle. Each half is adopted only on strict improvement, so at
/// a local optimum `π` is optimal for `E(φ)` and `φ` is optimal for `G(π)`.
pub(super) fn aa_step(st: &mut State<'_>, clock: &Clock) -> Step {
    let x = reopt_x(st);
    if clock.expired() {
        return if x { Step::Improved } else { Step::Expired };
    }
    let y = reopt_y(st);
    if x || y {
        Step::Improved
    } else {
        Step::Optimal
    }
}
