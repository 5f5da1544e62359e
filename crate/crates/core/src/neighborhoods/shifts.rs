//! Shift, shift+shuffle, dual shift and optimized shift.

use super::{changes, Changes, Move, Picker, Side, State};
use crate::caches::{build_e, build_g};
use crate::lap::hungarian;
use crate::matrix::SquareMatrix;
use crate::shift::shift_images;

/// Bucket shuffle of positions followed by a rotation by `a`:
/// `p'(i) = p(σ(i))` with `σ(i) = ((i mod B)·u + ⌊i / B⌋ + a) mod len` for
/// `i < B·u`, where `B = ⌊len / u⌋`. When `u` does not divide `len`, the
/// leftover positions `i ≥ B·u` take `σ(i) = (i + a) mod len`, which are
/// exactly the positions not yet used; with `a = 0` they stay fixed.
pub fn shuffle_images(p: &[usize], u: usize, a: usize) -> Vec<usize> {
    let len = p.len();
    assert!(u >= 1 && u <= len, "bucket count out of range");
    let buckets = len / u;
    let covered = buckets * u;
    (0..len)
        .map(|i| {
            let src = if i < covered {
                (i % buckets) * u + i / buckets + a
            } else {
                i + a
            };
            p[src % len]
        })
        .collect()
}

fn side_sum(w: &SquareMatrix, p: &[usize]) -> i64 {
    p.iter().enumerate().map(|(r, &c)| w[(r, c)]).sum()
}

fn one_sided(side: Side, mv: Move, rows: Changes) -> (Move, Changes, Changes) {
    match side {
        Side::X => (mv, rows, Vec::new()),
        Side::Y => (mv, Vec::new(), rows),
    }
}

/// Image shifts of each side by every nonzero offset; with `shuffle`, also
/// every bucket shuffle `u ∈ 1..=len/2`, `a ∈ 0..len` that changes the side.
pub(super) fn scan_shift(st: &State<'_>, picker: &mut Picker<'_>, shuffle: bool) {
    for side in [Side::X, Side::Y] {
        let (w, p) = st.side(side);
        let len = p.len();
        let current = side_sum(w, p);
        for a in 1..len {
            let delta: i64 = p.iter().enumerate().map(|(r, &c)| w[(r, (c + a) % len)]).sum::<i64>() - current;
            let mv = match side {
                Side::X => Move::ShiftX(a),
                Side::Y => Move::ShiftY(a),
            };
            if picker.offer(delta, || one_sided(side, mv, changes(p, &shift_images(p, a)))) {
                return;
            }
        }
    }
    if !shuffle {
        return;
    }
    for side in [Side::X, Side::Y] {
        let (w, p) = st.side(side);
        let len = p.len();
        let current = side_sum(w, p);
        for u in 1..=len / 2 {
            for a in 0..len {
                let q = shuffle_images(p, u, a);
                if q == p {
                    continue;
                }
                let delta = side_sum(w, &q) - current;
                let mv = match side {
                    Side::X => Move::ShuffleX { u, a },
                    Side::Y => Move::ShuffleY { v: u, b: a },
                };
                if picker.offer(delta, || one_sided(side, mv, changes(p, &q))) {
                    return;
                }
            }
        }
    }
}

/// Every `(π + a, φ + b)` with `(a, b) ≠ (0, 0)`, in lexicographic `(a, b)` order.
pub(super) fn scan_dual_shift(st: &State<'_>, picker: &mut Picker<'_>) {
    let inst = st.inst;
    let (m, n) = (inst.m(), inst.n());
    let (pi, phi) = (st.sol.pi(), st.sol.phi());
    // E(φ + b) and Σ d over φ + b for every b, O(m²n²) in total.
    let shifted_e: Vec<(Vec<usize>, SquareMatrix, i64)> = (0..n)
        .map(|b| {
            let phi_b = shift_images(phi, b);
            let e = if b == 0 {
                st.caches.e().clone()
            } else {
                build_e(inst, &phi_b)
            };
            let d_sum: i64 = phi_b.iter().enumerate().map(|(k, &l)| inst.d()[(k, l)]).sum();
            (phi_b, e, d_sum)
        })
        .collect();
    for a in 0..m {
        let pi_a = shift_images(pi, a);
        for (b, (phi_b, e, d_sum)) in shifted_e.iter().enumerate() {
            if a == 0 && b == 0 {
                continue;
            }
            let delta = side_sum(e, &pi_a) + d_sum - st.value;
            if picker.offer(delta, || {
                (Move::DualShift(a, b), changes(pi, &pi_a), changes(phi, phi_b))
            }) {
                return;
            }
        }
    }
}

/// For every shift of one side, including the zero shift, the other side is
/// replaced by an optimal assignment. x side first.
pub(super) fn scan_shift_opt(st: &State<'_>, picker: &mut Picker<'_>) {
    let inst = st.inst;
    let (pi, phi) = (st.sol.pi(), st.sol.phi());
    for a in 0..inst.m() {
        let pi_a = shift_images(pi, a);
        let g = if a == 0 {
            st.caches.g().clone()
        } else {
            build_g(inst, &pi_a)
        };
        let phi_star = hungarian(g.n(), |k, l| g[(k, l)] as i128);
        let c_sum: i64 = pi_a.iter().enumerate().map(|(i, &j)| inst.c()[(i, j)]).sum();
        let delta = c_sum + side_sum(&g, &phi_star) - st.value;
        if picker.offer(delta, || {
            (Move::ShiftXReoptY(a), changes(pi, &pi_a), changes(phi, &phi_star))
        }) {
            return;
        }
    }
    for b in 0..inst.n() {
        let phi_b = shift_images(phi, b);
        let e = if b == 0 {
            st.caches.e().clone()
        } else {
            build_e(inst, &phi_b)
        };
        let pi_star = hungarian(e.n(), |i, j| e[(i, j)] as i128);
        let d_sum: i64 = phi_b.iter().enumerate().map(|(k, &l)| inst.d()[(k, l)]).sum();
        let delta = d_sum + side_sum(&e, &pi_star) - st.value;
        if picker.offer(delta, || {
            (Move::ShiftYReoptX(b), changes(pi, &pi_star), changes(phi, &phi_b))
        }) {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::is_permutation;

    #[test]
    fn shuffle_matches_bucket_picture() {
        // three buckets of three: first elements, then second elements, then third
        let p: Vec<usize> = (0..9).collect();
        assert_eq!(shuffle_images(&p, 3, 0), vec![0, 3, 6, 1, 4, 7, 2, 5, 8]);
        assert_eq!(shuffle_images(&p, 1, 2), vec![2, 3, 4, 5, 6, 7, 8, 0, 1]);
    }

    #[test]
    fn shuffle_is_a_permutation_with_remainders() {
        for len in 1..12 {
            let p: Vec<usize> = (0..len).rev().collect();
            for u in 1..=len.max(2) / 2 {
                for a in 0..len {
                    let q = shuffle_images(&p, u, a);
                    assert!(is_permutation(&q), "len {len} u {u} a {a}");
                    if a == 0 {
                        for i in (len / u) * u..len {
                            assert_eq!(q[i], p[i]);
                        }
                    }
                }
            }
        }
    }
}
