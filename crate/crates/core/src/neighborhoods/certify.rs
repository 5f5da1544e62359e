//! Exhaustive neighbourhood scans that certify local optimality.
//!
//! Every neighbour is materialized and evaluated from scratch with the
//! objective and fresh cost matrices, so the check shares no incremental
//! state with the searches it audits.

use super::{rotate_images, swap_images, Family, LapMode, Move, SearchVariant};
use crate::caches::{build_e, build_g};
use crate::error::Result;
use crate::instance::BapInstance;
use crate::lap::{lap_exact, lap_greedy};
use crate::objective::evaluate_perms;
use crate::shift::shift_images;
use crate::solution::Solution;

use super::shifts::shuffle_images;

/// An improving neighbour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub mv: Move,
    pub solution: Solution,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certification {
    pub locally_optimal: bool,
    /// First improving neighbour in scan order, when one exists.
    pub witness: Option<Witness>,
}

struct Scan<'a> {
    inst: &'a BapInstance,
    value: i64,
    lap_mode: LapMode,
    found: Option<Witness>,
}

impl Scan<'_> {
    fn check(&mut self, mv: Move, pi: Vec<usize>, phi: Vec<usize>) -> bool {
        if self.found.is_some() {
            return true;
        }
        let value = evaluate_perms(self.inst, &pi, &phi);
        if value < self.value {
            self.found = Some(Witness {
                mv,
                solution: Solution::from_parts_unchecked(pi, phi),
                value,
            });
        }
        self.found.is_some()
    }

    fn best_phi(&self, pi: &[usize]) -> Vec<usize> {
        let g = build_g(self.inst, pi);
        let lap = match self.lap_mode {
            LapMode::Exact => lap_exact(&g),
            LapMode::Greedy => lap_greedy(&g),
        };
        lap.expect("cost matrix sums fit i64").assignment
    }

    fn best_pi(&self, phi: &[usize]) -> Vec<usize> {
        let e = build_e(self.inst, phi);
        let lap = match self.lap_mode {
            LapMode::Exact => lap_exact(&e),
            LapMode::Greedy => lap_greedy(&e),
        };
        lap.expect("cost matrix sums fit i64").assignment
    }
}

fn pairs(len: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..len).flat_map(move |a| (a + 1..len).map(move |b| (a, b)))
}

fn cycles(len: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..len).flat_map(move |a| (a + 1..len).flat_map(move |b| (b + 1..len).flat_map(move |c| [[a, b, c], [a, c, b]])))
}

/// Whether no neighbour of `s` in `variant`'s neighbourhood is strictly better.
pub fn certify_local_optimum(inst: &BapInstance, s: &Solution, variant: SearchVariant) -> Result<Certification> {
    variant.validate()?;
    s.check_dims(inst)?;
    let (pi, phi) = (s.pi(), s.phi());
    let (m, n) = (inst.m(), inst.n());
    let mut scan = Scan {
        inst,
        value: evaluate_perms(inst, pi, phi),
        lap_mode: variant.lap_mode,
        found: None,
    };
    let family = variant.family;
    let with_triples = matches!(family, Family::ThreeEx | Family::ThreeExOpt);
    match family {
        Family::TwoEx | Family::ThreeEx | Family::Dual2Ex => {
            let _ = pairs(m).any(|(a, b)| scan.check(Move::SwapX(a, b), swap_images(pi, a, b), phi.to_vec()))
                || (with_triples
                    && cycles(m).any(|t| scan.check(Move::RotateX(t), rotate_images(pi, t), phi.to_vec())))
                || pairs(n).any(|(a, b)| scan.check(Move::SwapY(a, b), pi.to_vec(), swap_images(phi, a, b)))
                || (with_triples
                    && cycles(n).any(|t| scan.check(Move::RotateY(t), pi.to_vec(), rotate_images(phi, t))))
                || (family == Family::Dual2Ex
                    && pairs(m).any(|x| {
                        pairs(n).any(|y| {
                            scan.check(
                                Move::DualSwap(x, y),
                                swap_images(pi, x.0, x.1),
                                swap_images(phi, y.0, y.1),
                            )
                        })
                    }));
        }
        Family::Aa => {
            let _ = scan.check(Move::ReoptX, scan.best_pi(phi), phi.to_vec())
                || scan.check(Move::ReoptY, pi.to_vec(), scan.best_phi(pi));
        }
        Family::TwoExOpt | Family::ThreeExOpt => {
            let x_side = |scan: &mut Scan<'_>, mv: Move, pi2: Vec<usize>| {
                let phi2 = scan.best_phi(&pi2);
                scan.check(mv, pi2, phi2)
            };
            let y_side = |scan: &mut Scan<'_>, mv: Move, phi2: Vec<usize>| {
                let pi2 = scan.best_pi(&phi2);
                scan.check(mv, pi2, phi2)
            };
            let _ = x_side(&mut scan, Move::ReoptY, pi.to_vec())
                || pairs(m).any(|(a, b)| x_side(&mut scan, Move::SwapXReoptY(a, b), swap_images(pi, a, b)))
                || (with_triples && cycles(m).any(|t| x_side(&mut scan, Move::RotateXReoptY(t), rotate_images(pi, t))))
                || y_side(&mut scan, Move::ReoptX, phi.to_vec())
                || pairs(n).any(|(a, b)| y_side(&mut scan, Move::SwapYReoptX(a, b), swap_images(phi, a, b)))
                || (with_triples
                    && cycles(n).any(|t| y_side(&mut scan, Move::RotateYReoptX(t), rotate_images(phi, t))));
        }
        Family::Shift | Family::ShiftShuffle => {
            let _ = (1..m).any(|a| scan.check(Move::ShiftX(a), shift_images(pi, a), phi.to_vec()))
                || (1..n).any(|b| scan.check(Move::ShiftY(b), pi.to_vec(), shift_images(phi, b)))
                || (family == Family::ShiftShuffle
                    && ((1..=m / 2).any(|u| {
                        (0..m).any(|a| scan.check(Move::ShuffleX { u, a }, shuffle_images(pi, u, a), phi.to_vec()))
                    }) || (1..=n / 2).any(|v| {
                        (0..n).any(|b| scan.check(Move::ShuffleY { v, b }, pi.to_vec(), shuffle_images(phi, v, b)))
                    })));
        }
        Family::DualShift => {
            let _ = (0..m).any(|a| {
                (0..n).any(|b| {
                    (a, b) != (0, 0) && scan.check(Move::DualShift(a, b), shift_images(pi, a), shift_images(phi, b))
                })
            });
        }
        Family::ShiftOpt => {
            let _ = (0..m).any(|a| {
                let pi2 = shift_images(pi, a);
                let phi2 = scan.best_phi(&pi2);
                scan.check(Move::ShiftXReoptY(a), pi2, phi2)
            }) || (0..n).any(|b| {
                let phi2 = shift_images(phi, b);
                let pi2 = scan.best_pi(&phi2);
                scan.check(Move::ShiftYReoptX(b), pi2, phi2)
            });
        }
    }
    Ok(Certification {
        locally_optimal: scan.found.is_none(),
        witness: scan.found,
    })
}
