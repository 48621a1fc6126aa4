//! Triangular sums and the feasible interval of magic constants.
//!
//! Summing the weights of all `n` edges of a path counts every label once,
//! plus each internal vertex a second time:
//!
//! ```text
//! n * k = f(2n+1) + (sum of the n-1 internal vertex labels)
//! ```
//!
//! The internal vertices carry at least `f(n-1)` and at most
//! `f(2n+1) - f(n+2)`, which bounds `k`. On a cycle every vertex is internal,
//! so `n * k = f(2n) + (sum of all n vertex labels)`.

use crate::error::{Error, Result};
use crate::model::KRange;

/// `r (r + 1) / 2`.
pub fn triangular(r: i64) -> i64 {
    r * (r + 1) / 2
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// Magic constants attainable on `P_n`, rounded inward to integers.
pub fn k_bounds(n: u32) -> Result<KRange> {
    if n == 0 {
        return Err(Error::LengthOutOfRange {
            n,
            min: 1,
            max: u32::MAX,
        });
    }
    let n = i64::from(n);
    let all = triangular(2 * n + 1);
    Ok(KRange {
        k_min: ceil_div(all + triangular(n - 1), n),
        k_max: (2 * all - triangular(n + 2)).div_euclid(n),
    })
}

/// Magic constants attainable on `C_n`, rounded inward to integers.
pub fn cycle_k_bounds(n: u32) -> Result<KRange> {
    if n < 3 {
        return Err(Error::LengthOutOfRange {
            n,
            min: 3,
            max: u32::MAX,
        });
    }
    let n = i64::from(n);
    let all = triangular(2 * n);
    Ok(KRange {
        k_min: ceil_div(all + triangular(n), n),
        k_max: (2 * all - triangular(n)).div_euclid(n),
    })
}
