//! Small adversarial instances with known optima, instantiated with `ε = 1`.

use crate::error::{invalid, Result};
use crate::instance::BapInstance;
use crate::matrix::SquareMatrix;

/// `L` used by [`greedy_pathology`].
pub const GREEDY_PATHOLOGY_L: i64 = 1000;
/// `L` used by [`exchange_trap`].
pub const EXCHANGE_TRAP_L: i64 = 100;

/// `2×2×3×3` instance on which Greedy builds a solution of cost `3 + 2L = 2003`.
/// The solution `x = id`, `y = (0, 2, 1)` costs `5`, and the average is
/// `(7 + 2L)/6`. The true optimum is `0`: swapping `x` avoids every nonzero entry.
pub fn greedy_pathology() -> BapInstance {
    let l = GREEDY_PATHOLOGY_L;
    let mut q = vec![0i64; 36];
    let mut set = |i: usize, j: usize, k: usize, lidx: usize, v: i64| q[((i * 2 + j) * 3 + k) * 3 + lidx] = v;
    set(0, 0, 0, 0, -1);
    set(0, 0, 1, 1, 1);
    set(0, 0, 2, 2, 1);
    set(1, 1, 0, 0, 2);
    set(0, 0, 1, 2, 2);
    set(0, 0, 2, 1, 2);
    set(1, 1, 1, 1, l);
    set(1, 1, 2, 2, l);
    BapInstance::new(2, 3, q, SquareMatrix::zeros(2), SquareMatrix::zeros(3))
        .expect("fixture is valid")
        .with_name("greedy_pathology 2x3 0")
}

/// `2×2` instance where identity/identity (value `−4`) is a local optimum for
/// every one-sided exchange, while the optimum `−L = −100` needs both sides to
/// change at once.
pub fn exchange_trap() -> BapInstance {
    let mut q = vec![0i64; 16];
    // q[0][1][0][1]
    q[5] = -EXCHANGE_TRAP_L;
    let diag = SquareMatrix::from_rows(&[vec![-1, 0], vec![0, -1]]).expect("square");
    BapInstance::new(2, 2, q, diag.clone(), diag)
        .expect("fixture is valid")
        .with_name("exchange_trap 2x2 0")
}

/// `L` used by [`hp_trap`] for a given `(m, h)`; chosen so `hL/(m−h) = 100h`.
pub fn hp_trap_l(m: usize, h: usize) -> i64 {
    100 * (m - h) as i64
}

/// Family that traps `[h, p]`-exchange searches at identity/identity:
/// `q[i][i][k][k] = −1`, `q[i][i+1][k][k+1] = −L`, `q[i][i][k][k+1] = hL/(m−h)`
/// (indices modulo `m`, `n`). Identity costs `−mn`; shifting both sides by one
/// costs `−mnL`.
pub fn hp_trap(m: usize, n: usize, h: usize) -> Result<BapInstance> {
    if h == 0 || h >= m {
        return invalid(format!("hp_trap requires 1 <= h < m (got h={h}, m={m})"));
    }
    if m > n {
        return invalid("hp_trap requires m <= n");
    }
    let l = hp_trap_l(m, h);
    let penalty = h as i64 * l / (m - h) as i64;
    Ok(BapInstance::from_fn(m, n, |i, j, k, lidx| {
        let next_j = j == (i + 1) % m;
        let next_l = lidx == (k + 1) % n;
        match (j == i, next_j, lidx == k, next_l) {
            (true, _, true, _) => -1,
            (_, true, _, true) => -l,
            (true, _, _, true) => penalty,
            _ => 0,
        }
    })?
    .with_name(format!("hp_trap {m}x{n} {h}")))
}

/// Looks up a fixture by name: `greedy_pathology`, `exchange_trap`, or `hp_trap:<m>:<n>:<h>`.
pub fn by_name(name: &str) -> Result<BapInstance> {
    match name {
        "greedy_pathology" => Ok(greedy_pathology()),
        "exchange_trap" => Ok(exchange_trap()),
        _ => {
            let parts: Vec<&str> = name.split(':').collect();
            match parts.as_slice() {
                ["hp_trap", m, n, h] => {
                    let parse = |s: &str| {
                        s.parse::<usize>().map_err(|_| {
                            crate::error::BapError::InvalidArgument(format!("bad hp_trap parameter '{s}'"))
                        })
                    };
                    hp_trap(parse(m)?, parse(n)?, parse(h)?)
                }
                _ => invalid(format!("unknown fixture '{name}'")),
            }
        }
    }
}
