//! Benchmark instance generators, proof fixtures and the text file format.
//!
//! Generated values are rounded half away from zero. Instance `index` of a
//! [`GenSpec`] is drawn from the seed `spec.seed ^ index`, so every instance
//! can be regenerated on its own and batches can be built in parallel.

pub mod fixtures;
pub mod io;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid, BapError, Result};
use crate::instance::{BapInstance, PointSets};
use crate::matrix::SquareMatrix;
use crate::rng::{rng_from_seed, BapRng};

pub use io::{format_instance, parse_instance, read_instance, write_instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    Uniform,
    Normal,
    Euclidean,
    Rank1,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 4] = [Self::Uniform, Self::Normal, Self::Euclidean, Self::Rank1];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::Normal => "normal",
            Self::Euclidean => "euclidean",
            Self::Rank1 => "rank1",
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InstanceKind {
    type Err = BapError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| BapError::InvalidArgument(format!("unknown instance kind '{s}'")))
    }
}

/// A batch of generated instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: InstanceKind,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub count: usize,
    /// Number given to the first instance of the batch.
    pub first_index: usize,
}

impl GenSpec {
    pub fn new(kind: InstanceKind, m: usize, n: usize, seed: u64, count: usize) -> Self {
        Self {
            kind,
            m,
            n,
            seed,
            count,
            first_index: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return invalid("m and n must be positive");
        }
        if self.m > self.n {
            return invalid(format!("generator requires m <= n (got m={}, n={})", self.m, self.n));
        }
        if self.count == 0 {
            return invalid("count must be at least 1");
        }
        Ok(())
    }
}

/// `"type size number"`, e.g. `uniform 4x4 0`.
pub fn instance_name(kind: InstanceKind, m: usize, n: usize, index: usize) -> String {
    format!("{kind} {m}x{n} {index}")
}

/// All instances of `spec`, named by convention.
pub fn generate(spec: &GenSpec) -> Result<Vec<BapInstance>> {
    spec.validate()?;
    (0..spec.count)
        .map(|t| generate_one(spec.kind, spec.m, spec.n, spec.seed, spec.first_index + t))
        .collect()
}

/// Instance number `index` of the `(kind, m, n, seed)` family.
pub fn generate_one(kind: InstanceKind, m: usize, n: usize, seed: u64, index: usize) -> Result<BapInstance> {
    let mut rng = rng_from_seed(seed ^ index as u64);
    let inst = match kind {
        InstanceKind::Uniform => gen_uniform(m, n, &mut rng)?,
        InstanceKind::Normal => gen_normal(m, n, &mut rng)?,
        InstanceKind::Euclidean => gen_euclidean(m, n, &mut rng)?,
        InstanceKind::Rank1 => gen_rank1(&Rank1Spec::random(m, n, &mut rng)?)?,
    };
    Ok(inst.with_name(instance_name(kind, m, n, index)))
}

fn round_half_away(v: f64) -> i64 {
    // f64::round rounds half away from zero
    v.round() as i64
}

/// `q` i.i.d. uniform on `[0, mn]`, rounded; `C = D = 0`.
pub fn gen_uniform(m: usize, n: usize, rng: &mut BapRng) -> Result<BapInstance> {
    let hi = (m * n) as f64;
    BapInstance::from_fn(m, n, |_, _, _, _| round_half_away(rng.random_range(0.0..=hi)))
}

/// `q` i.i.d. normal with mean `mn/2` and deviation `mn/6`, rounded and not clipped.
pub fn gen_normal(m: usize, n: usize, rng: &mut BapRng) -> Result<BapInstance> {
    let mn = (m * n) as f64;
    let dist = Normal::new(mn / 2.0, mn / 6.0).map_err(|e| BapError::InvalidArgument(e.to_string()))?;
    BapInstance::from_fn(m, n, |_, _, _, _| round_half_away(dist.sample(rng)))
}

/// Four point sets uniform in `[0, 1.5·√(mn)]²`, `q = round(‖a_i − u_k‖·‖b_j − v_l‖)`.
pub fn gen_euclidean(m: usize, n: usize, rng: &mut BapRng) -> Result<BapInstance> {
    let side = 1.5 * ((m * n) as f64).sqrt();
    let mut points = |count: usize| -> Vec<[f64; 2]> {
        (0..count)
            .map(|_| [rng.random_range(0.0..=side), rng.random_range(0.0..=side)])
            .collect()
    };
    let a = points(m);
    let b = points(m);
    let u = points(n);
    let v = points(n);
    euclidean_from_points(PointSets { a, b, u, v })
}

pub fn euclidean_q(points: &PointSets, i: usize, j: usize, k: usize, l: usize) -> i64 {
    let dist = |p: [f64; 2], r: [f64; 2]| (p[0] - r[0]).hypot(p[1] - r[1]);
    round_half_away(dist(points.a[i], points.u[k]) * dist(points.b[j], points.v[l]))
}

/// Euclidean instance from explicit point sets (sizes `m, m, n, n`).
pub fn euclidean_from_points(points: PointSets) -> Result<BapInstance> {
    let (m, n) = (points.a.len(), points.u.len());
    if points.b.len() != m || points.v.len() != n {
        return invalid("point sets must have sizes m, m, n, n");
    }
    BapInstance::from_fn(m, n, |i, j, k, l| euclidean_q(&points, i, j, k, l))?.with_points(points)
}

/// Factors of a rank-1 cost array `q[i][j][k][l] = a[i][j]·b[k][l]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank1Spec {
    pub a: SquareMatrix,
    pub b: SquareMatrix,
}

impl Rank1Spec {
    pub fn new(a: SquareMatrix, b: SquareMatrix) -> Result<Self> {
        if a.as_slice().iter().chain(b.as_slice()).any(|&v| v < 0) {
            return invalid("rank-1 factors must be non-negative");
        }
        Ok(Self { a, b })
    }

    /// Factors with entries uniform on the integers `0..=mn`.
    pub fn random(m: usize, n: usize, rng: &mut BapRng) -> Result<Self> {
        let hi = (m * n) as i64;
        let a = SquareMatrix::from_fn(m, |_, _| rng.random_range(0..=hi));
        let b = SquareMatrix::from_fn(n, |_, _| rng.random_range(0..=hi));
        Self::new(a, b)
    }
}

pub fn gen_rank1(spec: &Rank1Spec) -> Result<BapInstance> {
    let (a, b) = (&spec.a, &spec.b);
    let mut overflow = false;
    let inst = BapInstance::from_fn(a.n(), b.n(), |i, j, k, l| {
        a[(i, j)].checked_mul(b[(k, l)]).unwrap_or_else(|| {
            overflow = true;
            0
        })
    })?;
    if overflow {
        return Err(BapError::Overflow);
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_uniform() {
        for seed in 0..20 {
            let inst = generate_one(InstanceKind::Uniform, 1, 1, seed, 0).unwrap();
            assert!((0..=1).contains(&inst.q(0, 0, 0, 0)));
            assert_eq!(inst.c().as_slice(), &[0]);
            assert_eq!(inst.d().as_slice(), &[0]);
        }
    }

    #[test]
    fn uniform_range_and_naming() {
        let insts = generate(&GenSpec::new(InstanceKind::Uniform, 3, 5, 11, 3)).unwrap();
        assert_eq!(insts.len(), 3);
        assert_eq!(insts[2].name(), "uniform 3x5 2");
        for inst in &insts {
            assert!(inst.q_slice().iter().all(|&q| (0..=15).contains(&q)));
            assert!(inst.linear_terms_are_zero());
        }
    }

    #[test]
    fn same_seed_same_instance() {
        for kind in InstanceKind::ALL {
            let a = generate_one(kind, 3, 4, 5, 1).unwrap();
            let b = generate_one(kind, 3, 4, 5, 1).unwrap();
            assert_eq!(a, b);
            assert_eq!(format_instance(&a), format_instance(&b));
            assert_ne!(a, generate_one(kind, 3, 4, 5, 2).unwrap());
        }
    }

    #[test]
    fn normal_moments() {
        let inst = generate_one(InstanceKind::Normal, 20, 20, 3, 0).unwrap();
        let q = inst.q_slice();
        let len = q.len() as f64;
        let mean = q.iter().map(|&v| v as f64).sum::<f64>() / len;
        let var = q.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / (len - 1.0);
        assert!((mean - 200.0).abs() <= 0.05 * 200.0, "mean {mean}");
        let target_sd = 400.0 / 6.0;
        assert!((var.sqrt() - target_sd).abs() <= 0.10 * target_sd, "sd {}", var.sqrt());
    }

    #[test]
    fn euclidean_q_recomputes_from_points() {
        let inst = generate_one(InstanceKind::Euclidean, 3, 4, 9, 0).unwrap();
        let points = inst.points().expect("points are kept");
        let side = 1.5 * 12f64.sqrt();
        for p in points.a.iter().chain(&points.b).chain(&points.u).chain(&points.v) {
            assert!((0.0..=side).contains(&p[0]) && (0.0..=side).contains(&p[1]));
        }
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..4 {
                    for l in 0..4 {
                        let da = ((points.a[i][0] - points.u[k][0]).powi(2)
                            + (points.a[i][1] - points.u[k][1]).powi(2))
                        .sqrt();
                        let db = ((points.b[j][0] - points.v[l][0]).powi(2)
                            + (points.b[j][1] - points.v[l][1]).powi(2))
                        .sqrt();
                        assert_eq!(inst.q(i, j, k, l), (da * db).round() as i64);
                        assert!(inst.q(i, j, k, l) >= 0);
                    }
                }
            }
        }
    }

    #[test]
    fn coincident_points_give_zero_q() {
        let p = vec![[1.25, 3.5]; 2];
        let inst = euclidean_from_points(PointSets {
            a: p.clone(),
            b: p.clone(),
            u: p.clone(),
            v: p,
        })
        .unwrap();
        assert!(inst.q_slice().iter().all(|&q| q == 0));
    }

    #[test]
    fn rank1_identity() {
        let ones = Rank1Spec::new(SquareMatrix::from_fn(2, |_, _| 1), SquareMatrix::from_fn(3, |_, _| 1)).unwrap();
        assert!(gen_rank1(&ones).unwrap().q_slice().iter().all(|&q| q == 1));
        let spec = Rank1Spec::random(3, 3, &mut rng_from_seed(4)).unwrap();
        let inst = gen_rank1(&spec).unwrap();
        for (idx, &q) in inst.q_slice().iter().enumerate() {
            let (i, j, k, l) = (idx / 27, idx / 9 % 3, idx / 3 % 3, idx % 3);
            assert_eq!(q, spec.a[(i, j)] * spec.b[(k, l)]);
        }
        assert!(Rank1Spec::new(SquareMatrix::from_fn(1, |_, _| -1), SquareMatrix::zeros(1)).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(generate(&GenSpec::new(InstanceKind::Uniform, 4, 3, 0, 1)).is_err());
        assert!(generate(&GenSpec::new(InstanceKind::Uniform, 3, 3, 0, 0)).is_err());
        assert_eq!("euclidean".parse::<InstanceKind>().unwrap(), InstanceKind::Euclidean);
        assert!("cubic".parse::<InstanceKind>().is_err());
    }
}
