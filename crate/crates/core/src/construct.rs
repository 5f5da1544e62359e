//! Construction heuristics producing feasible starting solutions.
//!
//! The greedy constructors keep running partial-cost arrays: `ex[i][j]` is the
//! bilinear cost of adding `π(i) = j` against the y-assignments made so far,
//! and `gy[k][l]` the cost of adding `φ(k) = l` against the x-assignments made
//! so far. Linear terms are added on top. Ties go to the lowest index.

use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::caches::build_e;
use crate::error::{invalid, BapError, Result};
use crate::instance::BapInstance;
use crate::lap::hungarian;
use crate::matrix::SquareMatrix;
use crate::rng::rng_from_seed;
use crate::solution::Solution;

/// Uniformly random `(π, φ)`; its expected value is the instance average.
pub fn random_solution(m: usize, n: usize, seed: u64) -> Solution {
    let mut rng = rng_from_seed(seed);
    let mut pi: Vec<usize> = (0..m).collect();
    let mut phi: Vec<usize> = (0..n).collect();
    pi.shuffle(&mut rng);
    phi.shuffle(&mut rng);
    Solution::from_parts_unchecked(pi, phi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    X,
    Y,
}

/// A partial solution with the running costs of every possible extension.
struct Partial<'a> {
    inst: &'a BapInstance,
    pi: Vec<Option<usize>>,
    phi: Vec<Option<usize>>,
    x_col_used: Vec<bool>,
    y_col_used: Vec<bool>,
    ex: SquareMatrix,
    gy: SquareMatrix,
    assigned: usize,
}

impl<'a> Partial<'a> {
    fn new(inst: &'a BapInstance) -> Self {
        let (m, n) = (inst.m(), inst.n());
        Self {
            inst,
            pi: vec![None; m],
            phi: vec![None; n],
            x_col_used: vec![false; m],
            y_col_used: vec![false; n],
            ex: inst.c().clone(),
            gy: inst.d().clone(),
            assigned: 0,
        }
    }

    fn complete(&self) -> bool {
        self.assigned == self.pi.len() + self.phi.len()
    }

    fn assign_x(&mut self, i: usize, j: usize) {
        debug_assert!(self.pi[i].is_none() && !self.x_col_used[j]);
        self.pi[i] = Some(j);
        self.x_col_used[j] = true;
        self.assigned += 1;
        for (acc, &q) in self.gy.as_mut_slice().iter_mut().zip(self.inst.q_block(i, j)) {
            *acc += q;
        }
    }

    fn assign_y(&mut self, k: usize, l: usize) {
        debug_assert!(self.phi[k].is_none() && !self.y_col_used[l]);
        self.phi[k] = Some(l);
        self.y_col_used[l] = true;
        self.assigned += 1;
        let (m, n) = (self.inst.m(), self.inst.n());
        for i in 0..m {
            for j in 0..m {
                self.ex[(i, j)] += self.inst.q_block(i, j)[k * n + l];
            }
        }
    }

    fn assign(&mut self, side: Side, a: usize, b: usize) {
        match side {
            Side::X => self.assign_x(a, b),
            Side::Y => self.assign_y(a, b),
        }
    }

    /// Cheapest free partner of row `i` (x side) or `k` (y side).
    fn best_partner(&self, side: Side, a: usize) -> usize {
        let (row, used) = match side {
            Side::X => (self.ex.row(a), &self.x_col_used),
            Side::Y => (self.gy.row(a), &self.y_col_used),
        };
        let mut best: Option<(i64, usize)> = None;
        for (b, &cost) in row.iter().enumerate() {
            if !used[b] && best.is_none_or(|(v, _)| cost < v) {
                best = Some((cost, b));
            }
        }
        best.expect("a free partner exists").1
    }

    /// Every free extension as `(Δ, side, row, column)`.
    fn candidates(&self, out: &mut Vec<(i64, Side, usize, usize)>) {
        out.clear();
        for (side, rows, matrix, used) in [
            (Side::X, &self.pi, &self.ex, &self.x_col_used),
            (Side::Y, &self.phi, &self.gy, &self.y_col_used),
        ] {
            for (a, slot) in rows.iter().enumerate() {
                if slot.is_some() {
                    continue;
                }
                for (b, &cost) in matrix.row(a).iter().enumerate() {
                    if !used[b] {
                        out.push((cost, side, a, b));
                    }
                }
            }
        }
    }

    fn cheapest(&self) -> (Side, usize, usize) {
        let mut best: Option<(i64, Side, usize, usize)> = None;
        for (side, rows, matrix, used) in [
            (Side::X, &self.pi, &self.ex, &self.x_col_used),
            (Side::Y, &self.phi, &self.gy, &self.y_col_used),
        ] {
            for (a, slot) in rows.iter().enumerate() {
                if slot.is_some() {
                    continue;
                }
                for (b, &cost) in matrix.row(a).iter().enumerate() {
                    // strict: x wins ties against y, lower indices win within a side
                    if !used[b] && best.is_none_or(|(v, ..)| cost < v) {
                        best = Some((cost, side, a, b));
                    }
                }
            }
        }
        let (_, side, a, b) = best.expect("partial solution is incomplete");
        (side, a, b)
    }

    fn finish(self) -> Solution {
        let pi = self.pi.into_iter().map(|v| v.expect("complete")).collect();
        let phi = self.phi.into_iter().map(|v| v.expect("complete")).collect();
        Solution::from_parts_unchecked(pi, phi)
    }
}

/// Repeatedly picks an unassigned index uniformly from `M ∪ N` and gives it
/// the cheapest free partner against the current partial solution.
pub fn random_xy_greedy(inst: &BapInstance, seed: u64) -> Solution {
    let mut rng = rng_from_seed(seed);
    let mut partial = Partial::new(inst);
    let mut pending: Vec<(Side, usize)> = (0..inst.m())
        .map(|i| (Side::X, i))
        .chain((0..inst.n()).map(|k| (Side::Y, k)))
        .collect();
    while !pending.is_empty() {
        let (side, a) = pending.swap_remove(rng.random_range(0..pending.len()));
        let b = partial.best_partner(side, a);
        partial.assign(side, a, b);
    }
    partial.finish()
}

/// Starting point of the greedy family: the entries of `q + c + d` in
/// increasing `(value, i, j, k, l)` order, truncated to the `h` best.
fn best_entries(inst: &BapInstance, h: usize) -> Vec<(i64, usize, usize, usize, usize)> {
    let (m, n) = (inst.m(), inst.n());
    let mut heap: BinaryHeap<(i64, usize, usize, usize, usize)> = BinaryHeap::with_capacity(h + 1);
    for i in 0..m {
        for j in 0..m {
            let c = inst.c()[(i, j)];
            let block = inst.q_block(i, j);
            for k in 0..n {
                for l in 0..n {
                    let entry = (block[k * n + l] + c + inst.d()[(k, l)], i, j, k, l);
                    if heap.len() < h {
                        heap.push(entry);
                    } else if entry < *heap.peek().expect("h >= 1") {
                        heap.pop();
                        heap.push(entry);
                    }
                }
            }
        }
    }
    heap.into_sorted_vec()
}

/// Deterministic greedy: seed with the smallest cost entry, then add the
/// cheapest x- or y-assignment until complete (x wins exact ties).
pub fn greedy(inst: &BapInstance) -> Solution {
    let (_, i, j, k, l) = best_entries(inst, 1)[0];
    let mut partial = Partial::new(inst);
    partial.assign_x(i, j);
    partial.assign_y(k, l);
    while !partial.complete() {
        let (side, a, b) = partial.cheapest();
        partial.assign(side, a, b);
    }
    partial.finish()
}

/// Semi-greedy variant: each step, including the seeding one, picks uniformly
/// among the `h` best extensions of the joint x/y candidate pool. `h = 1` is
/// [`greedy`].
pub fn greedy_randomized(inst: &BapInstance, h: usize, seed: u64) -> Result<Solution> {
    if h == 0 {
        return invalid("greedy_randomized needs h >= 1");
    }
    let mut rng = rng_from_seed(seed);
    let seeds = best_entries(inst, h);
    let (_, i, j, k, l) = seeds[rng.random_range(0..seeds.len())];
    let mut partial = Partial::new(inst);
    partial.assign_x(i, j);
    partial.assign_y(k, l);
    let mut pool = Vec::new();
    while !partial.complete() {
        partial.candidates(&mut pool);
        let top = h.min(pool.len());
        if top < pool.len() {
            pool.select_nth_unstable(top - 1);
            pool.truncate(top);
        }
        pool.sort_unstable();
        let (_, side, a, b) = pool[rng.random_range(0..top)];
        partial.assign(side, a, b);
    }
    Ok(partial.finish())
}

/// Rounds the uniform fractional solution: `φ` solves the assignment problem
/// against `x ≡ 1/m` (scaled by `m` to stay integral), then `π` solves it
/// against that `φ`. Never worse than the instance average.
pub fn rounding(inst: &BapInstance) -> Solution {
    let (m, n) = (inst.m(), inst.n());
    let mut ky = vec![0i128; n * n];
    for i in 0..m {
        for j in 0..m {
            for (acc, &q) in ky.iter_mut().zip(inst.q_block(i, j)) {
                *acc += q as i128;
            }
        }
    }
    for (acc, &d) in ky.iter_mut().zip(inst.d().as_slice()) {
        *acc += m as i128 * d as i128;
    }
    let phi = hungarian(n, |k, l| ky[k * n + l]);
    let e = build_e(inst, &phi);
    let pi = hungarian(m, |i, j| e[(i, j)] as i128);
    Solution::from_parts_unchecked(pi, phi)
}

/// Named constructor, as used in algorithm configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constructor {
    Random,
    RandomXyGreedy,
    Greedy,
    GreedyRandomized(usize),
    Rounding,
}

impl Constructor {
    pub const DEFAULT_CANDIDATES: usize = 2;

    /// Builds a start; deterministic constructors ignore `seed`.
    pub fn build(self, inst: &BapInstance, seed: u64) -> Result<Solution> {
        Ok(match self {
            Self::Random => random_solution(inst.m(), inst.n(), seed),
            Self::RandomXyGreedy => random_xy_greedy(inst, seed),
            Self::Greedy => greedy(inst),
            Self::GreedyRandomized(h) => greedy_randomized(inst, h, seed)?,
            Self::Rounding => rounding(inst),
        })
    }

    pub fn is_randomized(self) -> bool {
        matches!(self, Self::Random | Self::RandomXyGreedy | Self::GreedyRandomized(_))
    }
}

impl fmt::Display for Constructor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Random => f.write_str("random"),
            Self::RandomXyGreedy => f.write_str("randomxygreedy"),
            Self::Greedy => f.write_str("greedy"),
            Self::GreedyRandomized(h) => write!(f, "greedyrandomized:{h}"),
            Self::Rounding => f.write_str("rounding"),
        }
    }
}

impl FromStr for Constructor {
    type Err = BapError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Ok(match lower.as_str() {
            "random" => Self::Random,
            "randomxygreedy" => Self::RandomXyGreedy,
            "greedy" => Self::Greedy,
            "greedyrandomized" => Self::GreedyRandomized(Self::DEFAULT_CANDIDATES),
            "rounding" => Self::Rounding,
            other => match other.strip_prefix("greedyrandomized:") {
                Some(h) => match h.parse::<usize>() {
                    Ok(h) if h >= 1 => Self::GreedyRandomized(h),
                    _ => return invalid(format!("bad candidate list size in '{s}'")),
                },
                None => return invalid(format!("unknown constructor '{s}'")),
            },
        })
    }
}
