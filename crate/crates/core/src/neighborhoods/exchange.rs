//! One-sided 2- and 3-exchange, and the simultaneous [2,2]-exchange.

use super::{Changes, Move, Picker, Side, State};
use crate::caches::swap_interaction;
use crate::matrix::SquareMatrix;

fn swap_move(side: Side, a: usize, b: usize) -> Move {
    match side {
        Side::X => Move::SwapX(a, b),
        Side::Y => Move::SwapY(a, b),
    }
}

fn rotate_move(side: Side, t: [usize; 3]) -> Move {
    match side {
        Side::X => Move::RotateX(t),
        Side::Y => Move::RotateY(t),
    }
}

#[inline]
pub(super) fn swap_delta(w: &SquareMatrix, p: &[usize], a: usize, b: usize) -> i64 {
    w[(a, p[b])] + w[(b, p[a])] - w[(a, p[a])] - w[(b, p[b])]
}

#[inline]
pub(super) fn rotate_delta(w: &SquareMatrix, p: &[usize], [a, b, c]: [usize; 3]) -> i64 {
    w[(a, p[b])] + w[(b, p[c])] + w[(c, p[a])] - w[(a, p[a])] - w[(b, p[b])] - w[(c, p[c])]
}

fn split(side: Side, rows: Changes) -> (Changes, Changes) {
    match side {
        Side::X => (rows, Vec::new()),
        Side::Y => (Vec::new(), rows),
    }
}

/// Pairs, then (with `triples`) both 3-cycles of every index triple, x side first.
pub(super) fn scan(st: &State<'_>, picker: &mut Picker<'_>, triples: bool) {
    for side in [Side::X, Side::Y] {
        let (w, p) = st.side(side);
        let len = p.len();
        for a in 0..len {
            for b in a + 1..len {
                let delta = swap_delta(w, p, a, b);
                let stop = picker.offer(delta, || {
                    let (x, y) = split(side, vec![(a, p[b]), (b, p[a])]);
                    (swap_move(side, a, b), x, y)
                });
                if stop {
                    return;
                }
            }
        }
        if !triples {
            continue;
        }
        for a in 0..len {
            for b in a + 1..len {
                for c in b + 1..len {
                    for t in [[a, b, c], [a, c, b]] {
                        let delta = rotate_delta(w, p, t);
                        let stop = picker.offer(delta, || {
                            let [r0, r1, r2] = t;
                            let (x, y) = split(side, vec![(r0, p[r1]), (r1, p[r2]), (r2, p[r0])]);
                            (rotate_move(side, t), x, y)
                        });
                        if stop {
                            return;
                        }
                    }
                }
            }
        }
    }
}

/// x swaps, y swaps, then every combination of one x swap with one y swap.
pub(super) fn scan_dual(st: &State<'_>, picker: &mut Picker<'_>) {
    scan(st, picker, false);
    if picker.done() {
        return;
    }
    let (pi, phi) = (st.sol.pi(), st.sol.phi());
    let (e, g) = (st.caches.e(), st.caches.g());
    let (m, n) = (pi.len(), phi.len());
    let y_pairs: Vec<(usize, usize, i64)> = (0..n)
        .flat_map(|k1| (k1 + 1..n).map(move |k2| (k1, k2)))
        .map(|(k1, k2)| (k1, k2, swap_delta(g, phi, k1, k2)))
        .collect();
    for i1 in 0..m {
        for i2 in i1 + 1..m {
            let dx = swap_delta(e, pi, i1, i2);
            for &(k1, k2, dy) in &y_pairs {
                let delta = dx + dy + swap_interaction(st.inst, pi, phi, (i1, i2), (k1, k2));
                let stop = picker.offer(delta, || {
                    (
                        Move::DualSwap((i1, i2), (k1, k2)),
                        vec![(i1, pi[i2]), (i2, pi[i1])],
                        vec![(k1, phi[k2]), (k2, phi[k1])],
                    )
                });
                if stop {
                    return;
                }
            }
        }
    }
}
