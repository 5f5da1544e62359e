use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{BapError, Result};
use crate::instance::BapInstance;

static NEXT_STAMP: AtomicU64 = AtomicU64::new(1);

pub(crate) fn fresh_stamp() -> u64 {
    NEXT_STAMP.fetch_add(1, Ordering::Relaxed)
}

/// A feasible solution as a pair of permutations.
///
/// `pi[i] = j` encodes `x_ij = 1` and `phi[k] = l` encodes `y_kl = 1`.
/// Every mutation draws a new stamp from a global counter, which is how
/// [`DeltaCaches`](crate::caches::DeltaCaches) detect that they are stale.
/// Equality and hashing ignore the stamp.
#[derive(Clone, Debug)]
pub struct Solution {
    pi: Vec<usize>,
    phi: Vec<usize>,
    stamp: u64,
}

impl PartialEq for Solution {
    fn eq(&self, other: &Self) -> bool {
        self.pi == other.pi && self.phi == other.phi
    }
}

impl Eq for Solution {}

impl Hash for Solution {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.pi.hash(state);
        self.phi.hash(state);
    }
}

/// True when `p` is a bijection on `0..p.len()`.
pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&v| v < p.len() && !std::mem::replace(&mut seen[v], true))
}

fn check_permutation(p: &[usize], side: &str) -> Result<()> {
    if is_permutation(p) {
        Ok(())
    } else {
        Err(BapError::InvalidArgument(format!("{side} is not a permutation: {p:?}")))
    }
}

impl Solution {
    pub fn new(pi: Vec<usize>, phi: Vec<usize>) -> Result<Self> {
        check_permutation(&pi, "pi")?;
        check_permutation(&phi, "phi")?;
        Ok(Self::from_parts_unchecked(pi, phi))
    }

    pub(crate) fn from_parts_unchecked(pi: Vec<usize>, phi: Vec<usize>) -> Self {
        debug_assert!(is_permutation(&pi) && is_permutation(&phi));
        Self {
            pi,
            phi,
            stamp: fresh_stamp(),
        }
    }

    pub fn identity(m: usize, n: usize) -> Self {
        Self::from_parts_unchecked((0..m).collect(), (0..n).collect())
    }

    #[inline]
    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    #[inline]
    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.pi.len()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.phi.len()
    }

    #[inline]
    pub fn stamp(&self) -> u64 {
        self.stamp
    }

    pub fn into_parts(self) -> (Vec<usize>, Vec<usize>) {
        (self.pi, self.phi)
    }

    /// Fails unless the permutation lengths match the instance's `m` and `n`.
    pub fn check_dims(&self, inst: &BapInstance) -> Result<()> {
        if self.m() != inst.m() || self.n() != inst.n() {
            return Err(BapError::DimensionMismatch(format!(
                "solution is {}x{}, instance is {}x{}",
                self.m(),
                self.n(),
                inst.m(),
                inst.n()
            )));
        }
        Ok(())
    }

    pub fn swap_x(&mut self, i1: usize, i2: usize) {
        self.pi.swap(i1, i2);
        self.stamp = fresh_stamp();
    }

    pub fn swap_y(&mut self, k1: usize, k2: usize) {
        self.phi.swap(k1, k2);
        self.stamp = fresh_stamp();
    }

    pub fn set_pi(&mut self, pi: Vec<usize>) -> Result<()> {
        check_permutation(&pi, "pi")?;
        if pi.len() != self.pi.len() {
            return Err(BapError::DimensionMismatch("pi length changed".into()));
        }
        self.pi = pi;
        self.stamp = fresh_stamp();
        Ok(())
    }

    pub fn set_phi(&mut self, phi: Vec<usize>) -> Result<()> {
        check_permutation(&phi, "phi")?;
        if phi.len() != self.phi.len() {
            return Err(BapError::DimensionMismatch("phi length changed".into()));
        }
        self.phi = phi;
        self.stamp = fresh_stamp();
        Ok(())
    }

    /// Applies `pi[i] = j` for every `(i, j)` in `assignments`; the result must stay a permutation.
    pub(crate) fn reassign_x(&mut self, assignments: &[(usize, usize)]) {
        for &(i, j) in assignments {
            self.pi[i] = j;
        }
        debug_assert!(is_permutation(&self.pi));
        self.stamp = fresh_stamp();
    }

    pub(crate) fn reassign_y(&mut self, assignments: &[(usize, usize)]) {
        for &(k, l) in assignments {
            self.phi[k] = l;
        }
        debug_assert!(is_permutation(&self.phi));
        self.stamp = fresh_stamp();
    }
}
