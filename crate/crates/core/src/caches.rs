//! Conditional assignment-cost matrices `E` and `G` for constant-time swap deltas.
//!
//! For a solution `(π, φ)`:
//!
//! * `e[i][j] = Σ_k q[i][j][k][φ(k)] + c[i][j]` depends on `φ` only,
//! * `g[k][l] = Σ_i q[i][π(i)][k][l] + d[k][l]` depends on `π` only.
//!
//! An x-side move leaves `E` untouched and patches `G` in `O(n²)` per
//! reassigned row; a y-side move patches `E` in `O(m²)` per reassigned row.

use crate::error::{invalid, BapError, Result};
use crate::instance::BapInstance;
use crate::matrix::SquareMatrix;
use crate::solution::Solution;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaCaches {
    e: SquareMatrix,
    g: SquareMatrix,
    stamp: u64,
}

/// `E(φ)` built from scratch in `O(m²n)`.
pub fn build_e(inst: &BapInstance, phi: &[usize]) -> SquareMatrix {
    let n = inst.n();
    SquareMatrix::from_fn(inst.m(), |i, j| {
        let block = inst.q_block(i, j);
        let bilinear: i64 = phi.iter().enumerate().map(|(k, &l)| block[k * n + l]).sum();
        bilinear + inst.c()[(i, j)]
    })
}

/// `G(π)` built from scratch in `O(n²m)`.
pub fn build_g(inst: &BapInstance, pi: &[usize]) -> SquareMatrix {
    let mut g = inst.d().clone();
    for (i, &j) in pi.iter().enumerate() {
        for (acc, &q) in g.as_mut_slice().iter_mut().zip(inst.q_block(i, j)) {
            *acc += q;
        }
    }
    g
}

impl DeltaCaches {
    pub fn build(inst: &BapInstance, s: &Solution) -> Result<Self> {
        s.check_dims(inst)?;
        Ok(Self::build_unchecked(inst, s))
    }

    pub(crate) fn build_unchecked(inst: &BapInstance, s: &Solution) -> Self {
        Self {
            e: build_e(inst, s.phi()),
            g: build_g(inst, s.pi()),
            stamp: s.stamp(),
        }
    }

    pub fn e(&self) -> &SquareMatrix {
        &self.e
    }

    pub fn g(&self) -> &SquareMatrix {
        &self.g
    }

    pub fn stamp(&self) -> u64 {
        self.stamp
    }

    /// Fails when the caches were not built for (or kept in step with) `s`.
    pub fn check(&self, s: &Solution) -> Result<()> {
        if self.stamp == s.stamp() {
            Ok(())
        } else {
            Err(BapError::StaleCache {
                cache: self.stamp,
                solution: s.stamp(),
            })
        }
    }

    /// `Σ_i e[i][π(i)]`, which equals `f(π, φ) − Σ_k d[k][φ(k)]`.
    pub fn x_side_sum(&self, pi: &[usize]) -> i64 {
        pi.iter().enumerate().map(|(i, &j)| self.e[(i, j)]).sum()
    }

    /// `Σ_k g[k][φ(k)]`, which equals `f(π, φ) − Σ_i c[i][π(i)]`.
    pub fn y_side_sum(&self, phi: &[usize]) -> i64 {
        phi.iter().enumerate().map(|(k, &l)| self.g[(k, l)]).sum()
    }

    /// Objective change of swapping `π(i1)` and `π(i2)`.
    pub fn delta_x_swap(&self, s: &Solution, i1: usize, i2: usize) -> Result<i64> {
        self.check(s)?;
        check_pair(i1, i2, s.m(), "x")?;
        Ok(self.dx(s.pi(), i1, i2))
    }

    /// Objective change of swapping `φ(k1)` and `φ(k2)`.
    pub fn delta_y_swap(&self, s: &Solution, k1: usize, k2: usize) -> Result<i64> {
        self.check(s)?;
        check_pair(k1, k2, s.n(), "y")?;
        Ok(self.dy(s.phi(), k1, k2))
    }

    /// Objective change of swapping `π(i1), π(i2)` and `φ(k1), φ(k2)` together.
    pub fn dual_swap_delta(
        &self,
        inst: &BapInstance,
        s: &Solution,
        (i1, i2): (usize, usize),
        (k1, k2): (usize, usize),
    ) -> Result<i64> {
        self.check(s)?;
        check_pair(i1, i2, s.m(), "x")?;
        check_pair(k1, k2, s.n(), "y")?;
        Ok(self.dx(s.pi(), i1, i2)
            + self.dy(s.phi(), k1, k2)
            + swap_interaction(inst, s.pi(), s.phi(), (i1, i2), (k1, k2)))
    }

    pub fn apply_x_swap(&mut self, inst: &BapInstance, s: &mut Solution, i1: usize, i2: usize) -> Result<()> {
        self.check(s)?;
        check_pair(i1, i2, s.m(), "x")?;
        let (j1, j2) = (s.pi()[i1], s.pi()[i2]);
        self.reassign_x(inst, s, &[(i1, j2), (i2, j1)]);
        Ok(())
    }

    pub fn apply_y_swap(&mut self, inst: &BapInstance, s: &mut Solution, k1: usize, k2: usize) -> Result<()> {
        self.check(s)?;
        check_pair(k1, k2, s.n(), "y")?;
        let (l1, l2) = (s.phi()[k1], s.phi()[k2]);
        self.reassign_y(inst, s, &[(k1, l2), (k2, l1)]);
        Ok(())
    }

    #[inline]
    pub(crate) fn dx(&self, pi: &[usize], i1: usize, i2: usize) -> i64 {
        let (j1, j2) = (pi[i1], pi[i2]);
        self.e[(i1, j2)] + self.e[(i2, j1)] - self.e[(i1, j1)] - self.e[(i2, j2)]
    }

    #[inline]
    pub(crate) fn dy(&self, phi: &[usize], k1: usize, k2: usize) -> i64 {
        let (l1, l2) = (phi[k1], phi[k2]);
        self.g[(k1, l2)] + self.g[(k2, l1)] - self.g[(k1, l1)] - self.g[(k2, l2)]
    }

    /// Sets `π(i) = j` for each pair, patching `G`; the caller guarantees the
    /// result is a permutation.
    pub(crate) fn reassign_x(&mut self, inst: &BapInstance, s: &mut Solution, assignments: &[(usize, usize)]) {
        debug_assert_eq!(self.stamp, s.stamp());
        let g = self.g.as_mut_slice();
        for &(i, new_j) in assignments {
            let old_j = s.pi()[i];
            if old_j == new_j {
                continue;
            }
            for ((acc, &add), &sub) in g.iter_mut().zip(inst.q_block(i, new_j)).zip(inst.q_block(i, old_j)) {
                *acc += add - sub;
            }
        }
        s.reassign_x(assignments);
        self.stamp = s.stamp();
    }

    /// Sets `φ(k) = l` for each pair, patching `E`.
    pub(crate) fn reassign_y(&mut self, inst: &BapInstance, s: &mut Solution, assignments: &[(usize, usize)]) {
        debug_assert_eq!(self.stamp, s.stamp());
        let (m, n) = (inst.m(), inst.n());
        for &(k, new_l) in assignments {
            let old_l = s.phi()[k];
            if old_l == new_l {
                continue;
            }
            for i in 0..m {
                for j in 0..m {
                    let block = inst.q_block(i, j);
                    self.e[(i, j)] += block[k * n + new_l] - block[k * n + old_l];
                }
            }
        }
        s.reassign_y(assignments);
        self.stamp = s.stamp();
    }
}

/// `f(π',φ') − f(π',φ) − f(π,φ') + f(π,φ)` for a simultaneous x-swap and
/// y-swap: only the 16 terms on the changed `2×2×2×2` block survive.
pub(crate) fn swap_interaction(
    inst: &BapInstance,
    pi: &[usize],
    phi: &[usize],
    (i1, i2): (usize, usize),
    (k1, k2): (usize, usize),
) -> i64 {
    let rows = [(i1, pi[i1], pi[i2]), (i2, pi[i2], pi[i1])];
    let cols = [(k1, phi[k1], phi[k2]), (k2, phi[k2], phi[k1])];
    let mut total = 0;
    for &(i, old_j, new_j) in &rows {
        for &(k, old_l, new_l) in &cols {
            total += inst.q(i, new_j, k, new_l) - inst.q(i, new_j, k, old_l) - inst.q(i, old_j, k, new_l)
                + inst.q(i, old_j, k, old_l);
        }
    }
    total
}

fn check_pair(a: usize, b: usize, len: usize, side: &str) -> Result<()> {
    if a >= len || b >= len {
        return invalid(format!("{side}-swap index out of range: ({a}, {b}) with size {len}"));
    }
    if a == b {
        return invalid(format!("{side}-swap needs two distinct indices, got ({a}, {b})"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instgen::fixtures;
    use crate::objective::evaluate;

    #[test]
    fn zero_instance_has_zero_caches() {
        let inst = BapInstance::zeros(3, 3).unwrap();
        let mut s = Solution::new(vec![1, 2, 0], vec![0, 2, 1]).unwrap();
        let mut caches = DeltaCaches::build(&inst, &s).unwrap();
        assert!(caches.e().as_slice().iter().all(|&v| v == 0));
        assert!(caches.g().as_slice().iter().all(|&v| v == 0));
        assert_eq!(caches.delta_x_swap(&s, 0, 2).unwrap(), 0);
        caches.apply_x_swap(&inst, &mut s, 0, 2).unwrap();
        caches.apply_y_swap(&inst, &mut s, 1, 2).unwrap();
        assert!(caches.e().as_slice().iter().all(|&v| v == 0));
        assert!(caches.g().as_slice().iter().all(|&v| v == 0));
    }

    #[test]
    fn equal_indices_are_rejected() {
        let inst = BapInstance::zeros(2, 2).unwrap();
        let s = Solution::identity(2, 2);
        let caches = DeltaCaches::build(&inst, &s).unwrap();
        assert!(matches!(
            caches.delta_x_swap(&s, 1, 1),
            Err(BapError::InvalidArgument(_))
        ));
        assert!(matches!(
            caches.delta_y_swap(&s, 0, 5),
            Err(BapError::InvalidArgument(_))
        ));
    }

    #[test]
    fn stale_caches_are_reported() {
        let inst = BapInstance::zeros(2, 2).unwrap();
        let mut s = Solution::identity(2, 2);
        let caches = DeltaCaches::build(&inst, &s).unwrap();
        s.swap_x(0, 1);
        assert!(matches!(
            caches.delta_x_swap(&s, 0, 1),
            Err(BapError::StaleCache { .. })
        ));
        assert!(matches!(
            caches.delta_y_swap(&s, 0, 1),
            Err(BapError::StaleCache { .. })
        ));
    }

    #[test]
    fn trap_dual_swap_escapes_to_the_optimum() {
        let inst = fixtures::exchange_trap();
        let s = Solution::identity(2, 2);
        let caches = DeltaCaches::build(&inst, &s).unwrap();
        assert_eq!(evaluate(&inst, &s).unwrap(), -4);
        assert_eq!(caches.dual_swap_delta(&inst, &s, (0, 1), (0, 1)).unwrap(), -96);
        // each swap on its own is worsening
        assert!(caches.delta_x_swap(&s, 0, 1).unwrap() > 0);
        assert!(caches.delta_y_swap(&s, 0, 1).unwrap() > 0);
    }

    #[test]
    fn x_swap_is_an_involution_on_solution_and_caches() {
        let inst = BapInstance::from_fn(3, 3, |i, j, k, l| ((i * 7 + j * 5 + k * 3 + l) % 11) as i64).unwrap();
        let mut s = Solution::new(vec![2, 0, 1], vec![1, 2, 0]).unwrap();
        let mut caches = DeltaCaches::build(&inst, &s).unwrap();
        let before = (s.clone(), caches.e().clone(), caches.g().clone());
        let d = caches.delta_x_swap(&s, 0, 2).unwrap();
        caches.apply_x_swap(&inst, &mut s, 0, 2).unwrap();
        assert_eq!(caches.delta_x_swap(&s, 0, 2).unwrap(), -d);
        caches.apply_x_swap(&inst, &mut s, 0, 2).unwrap();
        assert_eq!((s, caches.e().clone(), caches.g().clone()), before);
    }
}
