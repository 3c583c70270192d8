//! Exact binomial coefficients.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `C(n, r)` as an arbitrary-precision integer; zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Number of `k`-multisets of `[m]`, i.e. `C(m+k-1, k)`.
pub fn multichoose(m: u64, k: u64) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::EmptyGroundSet);
    }
    Ok(binomial(m + k - 1, k))
}

/// `C(n, r)` in machine arithmetic, `None` on overflow.
pub(crate) fn binomial_u128(n: usize, r: usize) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Rows of Pascal's triangle below this are tabulated.
const PASCAL_ROWS: usize = 256;

/// Row-major lower triangle; `u64::MAX` marks values that overflow.
fn pascal() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t: Vec<u64> = Vec::with_capacity(PASCAL_ROWS * (PASCAL_ROWS + 1) / 2);
        for n in 0..PASCAL_ROWS {
            let row = n * (n + 1) / 2;
            for r in 0..=n {
                let v = if r == 0 || r == n {
                    1
                } else {
                    let prev = row - n;
                    t[prev + r - 1].saturating_add(t[prev + r])
                };
                t.push(v);
            }
        }
        t
    })
}

pub(crate) fn binomial_usize(n: usize, r: usize) -> Option<usize> {
    if r > n {
        return Some(0);
    }
    if n < PASCAL_ROWS {
        let v = pascal()[n * (n + 1) / 2 + r];
        return (v != u64::MAX).then_some(v).and_then(|v| usize::try_from(v).ok());
    }
    binomial_u128(n, r).and_then(|v| usize::try_from(v).ok())
}

pub(crate) fn multichoose_usize(m: usize, k: usize) -> Option<usize> {
    if m == 0 {
        return None;
    }
    binomial_usize(m + k - 1, k)
}
