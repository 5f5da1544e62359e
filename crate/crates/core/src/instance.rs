//! Problem data: the four-index cost array `Q` and the linear matrices `C`, `D`.

use crate::error::{BapError, Result};
use crate::matrix::SquareMatrix;

/// Point sets a Euclidean instance was generated from, kept for auditing `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSets {
    pub a: Vec<[f64; 2]>,
    pub b: Vec<[f64; 2]>,
    pub u: Vec<[f64; 2]>,
    pub v: Vec<[f64; 2]>,
}

/// A bilinear assignment instance.
///
/// The objective of a solution `(π, φ)` is
/// `Σ_i Σ_k q[i][π(i)][k][φ(k)] + Σ_i c[i][π(i)] + Σ_k d[k][φ(k)]`.
/// `Q` is stored contiguously at index `((i·m + j)·n + k)·n + l`, so the
/// `n×n` block for a fixed `(i, j)` is a single slice.
///
/// Construction enforces `1 ≤ m ≤ n` and that `Σ|q| + Σ|c| + Σ|d|` fits in
/// an `i64`; every objective value and move delta is then overflow free.
/// Instances are immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct BapInstance {
    m: usize,
    n: usize,
    q: Vec<i64>,
    c: SquareMatrix,
    d: SquareMatrix,
    name: String,
    points: Option<PointSets>,
    magnitude: i64,
}

impl BapInstance {
    pub fn new(m: usize, n: usize, q: Vec<i64>, c: SquareMatrix, d: SquareMatrix) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(BapError::InvalidArgument("m and n must be positive".into()));
        }
        if m > n {
            return Err(BapError::InvalidArgument(format!(
                "instances must satisfy m <= n (got m={m}, n={n})"
            )));
        }
        let expected = m
            .checked_mul(m)
            .and_then(|v| v.checked_mul(n))
            .and_then(|v| v.checked_mul(n))
            .ok_or(BapError::Overflow)?;
        if q.len() != expected {
            return Err(BapError::DimensionMismatch(format!(
                "Q must have {m}x{m}x{n}x{n} = {expected} entries, got {}",
                q.len()
            )));
        }
        if c.n() != m {
            return Err(BapError::DimensionMismatch(format!(
                "C must be {m}x{m}, got {0}x{0}",
                c.n()
            )));
        }
        if d.n() != n {
            return Err(BapError::DimensionMismatch(format!(
                "D must be {n}x{n}, got {0}x{0}",
                d.n()
            )));
        }
        let magnitude = q
            .iter()
            .chain(c.as_slice())
            .chain(d.as_slice())
            .try_fold(0i64, |acc, &v| acc.checked_add(v.checked_abs()?))
            .ok_or(BapError::Overflow)?;
        Ok(Self {
            m,
            n,
            q,
            c,
            d,
            name: String::new(),
            points: None,
            magnitude,
        })
    }

    /// Instance with `Q`, `C`, `D` all zero.
    pub fn zeros(m: usize, n: usize) -> Result<Self> {
        Self::new(
            m,
            n,
            vec![0; m * m * n * n],
            SquareMatrix::zeros(m),
            SquareMatrix::zeros(n),
        )
    }

    /// Builds `Q` from a function of `(i, j, k, l)` with zero linear terms.
    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> i64) -> Result<Self> {
        let mut q = Vec::with_capacity(m * m * n * n);
        for i in 0..m {
            for j in 0..m {
                for k in 0..n {
                    for l in 0..n {
                        q.push(f(i, j, k, l));
                    }
                }
            }
        }
        Self::new(m, n, q, SquareMatrix::zeros(m), SquareMatrix::zeros(n))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_points(mut self, points: PointSets) -> Result<Self> {
        if points.a.len() != self.m || points.b.len() != self.m || points.u.len() != self.n || points.v.len() != self.n
        {
            return Err(BapError::DimensionMismatch(
                "point sets must have sizes m, m, n, n".into(),
            ));
        }
        self.points = Some(points);
        Ok(self)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> Option<&PointSets> {
        self.points.as_ref()
    }

    #[inline]
    pub fn q(&self, i: usize, j: usize, k: usize, l: usize) -> i64 {
        self.q[((i * self.m + j) * self.n + k) * self.n + l]
    }

    /// The `n×n` block `q[i][j][·][·]`, row-major in `(k, l)`.
    #[inline]
    pub fn q_block(&self, i: usize, j: usize) -> &[i64] {
        let nn = self.n * self.n;
        let start = (i * self.m + j) * nn;
        &self.q[start..start + nn]
    }

    pub fn q_slice(&self) -> &[i64] {
        &self.q
    }

    pub fn c(&self) -> &SquareMatrix {
        &self.c
    }

    pub fn d(&self) -> &SquareMatrix {
        &self.d
    }

    /// `Σ|q| + Σ|c| + Σ|d|`; bounds the absolute value of every objective.
    pub fn magnitude(&self) -> i64 {
        self.magnitude
    }

    pub fn q_is_nonnegative(&self) -> bool {
        self.q.iter().all(|&v| v >= 0)
    }

    pub fn linear_terms_are_zero(&self) -> bool {
        self.c.as_slice().iter().chain(self.d.as_slice()).all(|&v| v == 0)
    }

    /// Non-negative `Q` with zero `C` and `D`: the setting of the local-optimum bounds.
    pub fn is_bound_eligible(&self) -> bool {
        self.q_is_nonnegative() && self.linear_terms_are_zero()
    }
}
