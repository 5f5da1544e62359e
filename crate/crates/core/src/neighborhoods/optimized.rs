//! Optimized h-exchange (h = 2, 3): each change of at most `h` rows on one
//! side is paired with an optimal assignment of the other side.
//!
//! For an x-side change the y-side cost matrix `G` is patched in `O(n²)` per
//! changed row and solved; y-side changes patch `E` symmetrically. The empty
//! change (plain re-optimization of the other side) is part of the
//! neighbourhood.

use super::{changes, Changes, LapMode, Move, Picker, Side, State};
use crate::lap::{greedy_assignment, hungarian};
use crate::matrix::SquareMatrix;

struct Scratch {
    g: SquareMatrix,
    e: SquareMatrix,
}

fn solve(w: &SquareMatrix, mode: LapMode) -> (Vec<usize>, i64) {
    let p = match mode {
        LapMode::Exact => hungarian(w.n(), |r, c| w[(r, c)] as i128),
        LapMode::Greedy => greedy_assignment(w),
    };
    let cost = p.iter().enumerate().map(|(r, &c)| w[(r, c)]).sum();
    (p, cost)
}

/// Value of changing `rows` on `side` and re-optimizing the other side,
/// together with the other side's new permutation.
fn evaluate_change(
    st: &State<'_>,
    side: Side,
    rows: &[(usize, usize)],
    scratch: &mut Scratch,
    mode: LapMode,
) -> (i64, Vec<usize>) {
    let inst = st.inst;
    let n = inst.n();
    match side {
        Side::X => {
            let pi = st.sol.pi();
            let w = &mut scratch.g;
            w.as_mut_slice().copy_from_slice(st.caches.g().as_slice());
            let mut linear: i64 = pi.iter().enumerate().map(|(i, &j)| inst.c()[(i, j)]).sum();
            for &(i, new_j) in rows {
                let old_j = pi[i];
                linear += inst.c()[(i, new_j)] - inst.c()[(i, old_j)];
                for ((acc, &add), &sub) in w
                    .as_mut_slice()
                    .iter_mut()
                    .zip(inst.q_block(i, new_j))
                    .zip(inst.q_block(i, old_j))
                {
                    *acc += add - sub;
                }
            }
            let (phi, cost) = solve(w, mode);
            (linear + cost, phi)
        }
        Side::Y => {
            let phi = st.sol.phi();
            let m = inst.m();
            let w = &mut scratch.e;
            w.as_mut_slice().copy_from_slice(st.caches.e().as_slice());
            let mut linear: i64 = phi.iter().enumerate().map(|(k, &l)| inst.d()[(k, l)]).sum();
            for &(k, new_l) in rows {
                let old_l = phi[k];
                linear += inst.d()[(k, new_l)] - inst.d()[(k, old_l)];
                for i in 0..m {
                    for j in 0..m {
                        let block = inst.q_block(i, j);
                        w[(i, j)] += block[k * n + new_l] - block[k * n + old_l];
                    }
                }
            }
            let (pi, cost) = solve(w, mode);
            (linear + cost, pi)
        }
    }
}

fn reopt_move(side: Side) -> Move {
    match side {
        Side::X => Move::ReoptY,
        Side::Y => Move::ReoptX,
    }
}

fn swap_move(side: Side, a: usize, b: usize) -> Move {
    match side {
        Side::X => Move::SwapXReoptY(a, b),
        Side::Y => Move::SwapYReoptX(a, b),
    }
}

fn rotate_move(side: Side, t: [usize; 3]) -> Move {
    match side {
        Side::X => Move::RotateXReoptY(t),
        Side::Y => Move::RotateYReoptX(t),
    }
}

/// Offers one change; returns `true` when the scan should stop.
fn offer(
    st: &State<'_>,
    picker: &mut Picker<'_>,
    scratch: &mut Scratch,
    mode: LapMode,
    side: Side,
    mv: Move,
    rows: Changes,
) -> bool {
    let (value, other) = evaluate_change(st, side, &rows, scratch, mode);
    picker.offer(value - st.value, || {
        let other_perm = match side {
            Side::X => st.sol.phi(),
            Side::Y => st.sol.pi(),
        };
        let other_rows = changes(other_perm, &other);
        match side {
            Side::X => (mv, rows, other_rows),
            Side::Y => (mv, other_rows, rows),
        }
    })
}

/// Scan order per side (x first): re-optimization alone, pairs, then (for
/// `h = 3`) both 3-cycles of every triple.
pub(super) fn scan(st: &State<'_>, picker: &mut Picker<'_>, h: usize, mode: LapMode) {
    let (m, n) = (st.inst.m(), st.inst.n());
    let mut scratch = Scratch {
        g: SquareMatrix::zeros(n),
        e: SquareMatrix::zeros(m),
    };
    for side in [Side::X, Side::Y] {
        let p = match side {
            Side::X => st.sol.pi().to_vec(),
            Side::Y => st.sol.phi().to_vec(),
        };
        let len = p.len();
        if offer(st, picker, &mut scratch, mode, side, reopt_move(side), Vec::new()) {
            return;
        }
        for a in 0..len {
            for b in a + 1..len {
                if offer(
                    st,
                    picker,
                    &mut scratch,
                    mode,
                    side,
                    swap_move(side, a, b),
                    vec![(a, p[b]), (b, p[a])],
                ) {
                    return;
                }
            }
        }
        if h < 3 {
            continue;
        }
        for a in 0..len {
            for b in a + 1..len {
                for c in b + 1..len {
                    for [r0, r1, r2] in [[a, b, c], [a, c, b]] {
                        let rows = vec![(r0, p[r1]), (r1, p[r2]), (r2, p[r0])];
                        if offer(
                            st,
                            picker,
                            &mut scratch,
                            mode,
                            side,
                            rotate_move(side, [r0, r1, r2]),
                            rows,
                        ) {
                            return;
                        }
                    }
                }
            }
        }
    }
}
