//! Linear assignment subsolvers.
//!
//! [`lap_exact`] is the shortest-augmenting-path form of the Hungarian method
//! with row/column potentials, `O(n³)`. Rows are inserted in index order and
//! each Dijkstra phase selects the lowest-indexed column among equal reduced
//! distances, so the returned assignment is a deterministic function of the
//! matrix. Arithmetic runs in `i128` so potentials cannot overflow for any
//! `i64` input.
//!
//! [`lap_greedy`] repeatedly takes the globally smallest entry whose row and
//! column are both free, breaking ties by `(row, column)`.

use crate::error::{BapError, Result};
use crate::matrix::SquareMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LapResult {
    /// `assignment[row] = column`.
    pub assignment: Vec<usize>,
    pub value: i64,
}

pub fn lap_exact(cost: &SquareMatrix) -> Result<LapResult> {
    let n = cost.n();
    let assignment = hungarian(n, |r, c| cost[(r, c)] as i128);
    finish(cost, assignment)
}

pub fn lap_greedy(cost: &SquareMatrix) -> Result<LapResult> {
    let assignment = greedy_assignment(cost);
    finish(cost, assignment)
}

/// [`lap_exact`] on nested rows; non-square input is an invalid argument.
pub fn lap_exact_rows(rows: &[Vec<i64>]) -> Result<LapResult> {
    lap_exact(&SquareMatrix::from_rows(rows)?)
}

/// [`lap_greedy`] on nested rows; non-square input is an invalid argument.
pub fn lap_greedy_rows(rows: &[Vec<i64>]) -> Result<LapResult> {
    lap_greedy(&SquareMatrix::from_rows(rows)?)
}

fn finish(cost: &SquareMatrix, assignment: Vec<usize>) -> Result<LapResult> {
    let value = assignment
        .iter()
        .enumerate()
        .try_fold(0i64, |acc, (r, &c)| acc.checked_add(cost[(r, c)]))
        .ok_or(BapError::Overflow)?;
    Ok(LapResult { assignment, value })
}

/// Minimum-cost assignment for an `n×n` cost oracle; returns `row -> column`.
pub(crate) fn hungarian(n: usize, cost: impl Fn(usize, usize) -> i128) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    // 1-based with a virtual column 0, following the classic potentials formulation.
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; n + 1];
    let mut col_owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut min_to = vec![0i128; n + 1];
    let mut used = vec![false; n + 1];

    for row in 1..=n {
        col_owner[0] = row;
        let mut j0 = 0usize;
        min_to.fill(i128::MAX);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = col_owner[j0];
            let mut delta = i128::MAX;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if reduced < min_to[j] {
                    min_to[j] = reduced;
                    way[j] = j0;
                }
                if min_to[j] < delta {
                    delta = min_to[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[col_owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_to[j] -= delta;
                }
            }
            j0 = j1;
            if col_owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            col_owner[j0] = col_owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        assignment[col_owner[j] - 1] = j - 1;
    }
    assignment
}

pub(crate) fn greedy_assignment(cost: &SquareMatrix) -> Vec<usize> {
    let n = cost.n();
    let mut entries: Vec<(i64, usize, usize)> = Vec::with_capacity(n * n);
    for r in 0..n {
        for (c, &v) in cost.row(r).iter().enumerate() {
            entries.push((v, r, c));
        }
    }
    entries.sort_unstable();
    let mut assignment = vec![usize::MAX; n];
    let mut col_taken = vec![false; n];
    let mut remaining = n;
    for (_, r, c) in entries {
        if remaining == 0 {
            break;
        }
        if assignment[r] == usize::MAX && !col_taken[c] {
            assignment[r] = c;
            col_taken[c] = true;
            remaining -= 1;
        }
    }
    assignment
}
