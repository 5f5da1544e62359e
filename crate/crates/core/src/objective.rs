//! Objective evaluation and the closed-form average over all feasible solutions.

use num_rational::Ratio;

use crate::error::Result;
use crate::instance::BapInstance;
use crate::solution::Solution;

/// Exact rational used for averages and bounds.
pub type Rational = Ratio<i128>;

/// Objective value of `s`, in `O(mn)`.
pub fn evaluate(inst: &BapInstance, s: &Solution) -> Result<i64> {
    s.check_dims(inst)?;
    Ok(evaluate_perms(inst, s.pi(), s.phi()))
}

pub(crate) fn evaluate_perms(inst: &BapInstance, pi: &[usize], phi: &[usize]) -> i64 {
    let n = inst.n();
    let mut total = 0i64;
    for (i, &j) in pi.iter().enumerate() {
        let block = inst.q_block(i, j);
        for (k, &l) in phi.iter().enumerate() {
            total += block[k * n + l];
        }
        total += inst.c()[(i, j)];
    }
    for (k, &l) in phi.iter().enumerate() {
        total += inst.d()[(k, l)];
    }
    total
}

/// Average objective value over all `m!·n!` feasible solutions:
/// `ΣQ/(mn) + ΣC/m + ΣD/n`, computed exactly.
pub fn average_value(inst: &BapInstance) -> Rational {
    let (m, n) = (inst.m() as i128, inst.n() as i128);
    let sum_q: i128 = inst.q_slice().iter().map(|&v| v as i128).sum();
    let sum_c: i128 = inst.c().as_slice().iter().map(|&v| v as i128).sum();
    let sum_d: i128 = inst.d().as_slice().iter().map(|&v| v as i128).sum();
    Rational::new(sum_q + n * sum_c + m * sum_d, m * n)
}

/// `2mn/(m+n) · A`, the guaranteed ceiling on 2-exchange local optima for
/// non-negative `Q` with zero `C`, `D`.
pub fn two_exchange_bound(inst: &BapInstance) -> Rational {
    let (m, n) = (inst.m() as i128, inst.n() as i128);
    average_value(inst) * Rational::new(2 * m * n, m + n)
}

/// `(m+n) · A`, the ceiling on the best optimized 2-exchange neighbour of any
/// solution for non-negative `Q` with zero `C`, `D`.
pub fn optimized_two_exchange_bound(inst: &BapInstance) -> Rational {
    average_value(inst) * Rational::from_integer((inst.m() + inst.n()) as i128)
}

/// `value ≤ bound`, exactly.
pub fn at_most(value: i64, bound: &Rational) -> bool {
    Rational::from_integer(value as i128) <= *bound
}

/// Renders a rational as `p/q`, or just `p` when integral.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
