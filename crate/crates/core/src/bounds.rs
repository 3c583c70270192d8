//! Closed-form extremal bounds and the families that attain them.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::binom::binomial;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::multiset::Multiset;
use crate::universe::Universe;

fn c(n: usize, r: usize) -> BigInt {
    BigInt::from(binomial(n as u64, r as u64))
}

/// Which closed form a [`BoundRecord`] carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    /// Largest intersecting family, `C(m+k-2, k-1)`.
    Star,
    /// Largest t-intersecting family, `C(m+k-t-1, k-t)`.
    Fgv,
    /// Largest `|F| + |G|` for a non-empty cross t-intersecting multiset pair.
    Sum,
    /// Uniform set version of [`Formula::Sum`] over `[n]`.
    SetSum,
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formula::Star => "star",
            Formula::Fgv => "fgv",
            Formula::Sum => "sum",
            Formula::SetSum => "set_sum",
        })
    }
}

/// A bound value plus whether the parameters satisfy the hypothesis of the
/// theorem behind it. Values outside the hypothesis are still computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundRecord {
    pub m: usize,
    pub k: usize,
    pub t: usize,
    /// Ground-set size of the set version; `m + k - 1` unless given directly.
    pub n: Option<usize>,
    pub formula: Formula,
    pub value: BigInt,
    pub hypothesis_ok: bool,
}

fn check_t(k: usize, t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    if t > k {
        return Err(Error::InvalidParameter(format!("t={t} exceeds k={k}")));
    }
    Ok(())
}

fn check_mk(m: usize, k: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    Ok(())
}

pub fn star_bound(m: usize, k: usize) -> Result<BigInt> {
    check_mk(m, k)?;
    Ok(c(m + k - 2, k - 1))
}

pub fn fgv_bound(m: usize, k: usize, t: usize) -> Result<BigInt> {
    check_mk(m, k)?;
    check_t(k, t)?;
    Ok(c(m + k - t - 1, k - t))
}

/// `C(m+k-1,k) - sum_{i<t} C(k,i) C(m-1,k-i) + 1`.
pub fn sum_bound(m: usize, k: usize, t: usize) -> Result<BigInt> {
    check_mk(m, k)?;
    check_t(k, t)?;
    let below: BigInt = (0..t).map(|i| c(k, i) * c(m - 1, k - i)).sum();
    Ok(c(m + k - 1, k) - below + 1)
}

/// `C(n,k) - sum_{i<t} C(k,i) C(n-k,k-i) + 1`.
pub fn set_sum_bound(n: usize, k: usize, t: usize) -> Result<BigInt> {
    if k == 0 || t == 0 || t > k || n < k {
        return Err(Error::InvalidParameter(format!(
            "set bound needs 1 <= t <= k <= n, got n={n} k={k} t={t}"
        )));
    }
    let below: BigInt = (0..t).map(|i| c(k, i) * c(n - k, k - i)).sum();
    Ok(c(n, k) - below + 1)
}

pub fn star_hypothesis(m: usize, k: usize) -> bool {
    m > k
}

pub fn fgv_hypothesis(m: usize, k: usize, t: usize) -> bool {
    t >= 1 && t <= k && m >= t * (k - t) + 2
}

pub fn sum_hypothesis(m: usize, k: usize, t: usize) -> bool {
    match t {
        0 => false,
        1 => m > k,
        _ => t <= k && m + t >= 2 * k,
    }
}

pub fn set_sum_hypothesis(n: usize, k: usize, t: usize) -> bool {
    k > t && t >= 1 && n + t > 2 * k && !(n == 2 * k && t == 1)
}

/// All four bound families for `(m, k, t)`; the set bound uses `n`, or
/// `m + k - 1` when `n` is `None`.
pub fn bound_records(m: usize, k: usize, t: usize, n: Option<usize>) -> Result<Vec<BoundRecord>> {
    let n_eff = n.unwrap_or(m + k - 1);
    let rec = |formula, value, hypothesis_ok, n| BoundRecord {
        m,
        k,
        t,
        n,
        formula,
        value,
        hypothesis_ok,
    };
    Ok(vec![
        rec(Formula::Star, star_bound(m, k)?, star_hypothesis(m, k), None),
        rec(Formula::Fgv, fgv_bound(m, k, t)?, fgv_hypothesis(m, k, t), None),
        rec(Formula::Sum, sum_bound(m, k, t)?, sum_hypothesis(m, k, t), None),
        rec(
            Formula::SetSum,
            set_sum_bound(n_eff, k, t)?,
            set_sum_hypothesis(n_eff, k, t),
            Some(n_eff),
        ),
    ])
}

/// `{F : i ∈ F}`.
pub fn star_family(universe: &Arc<Universe>, i: usize) -> Result<Family> {
    let m = universe.m();
    if i == 0 || i > m {
        return Err(Error::ElementOutOfRange { element: i, bound: m });
    }
    Family::from_members(universe, universe.members().iter().filter(|f| f.contains(i)))
}

/// `({[k]}, {G : |G ∩ [k]| >= t})`.
pub fn hm_pair(universe: &Arc<Universe>, t: usize) -> Result<(Family, Family)> {
    let (m, k) = universe.dims();
    check_t(k, t)?;
    let prefix = Multiset::prefix(m, k)?;
    let f = Family::from_members(universe, [&prefix])?;
    let g = Family::from_members(
        universe,
        universe.members().iter().filter(|g| g.meet_size(&prefix) >= t),
    )?;
    Ok((f, g))
}

/// The extremal pairs a theorem claims, one per isomorphism class.
#[derive(Clone, Debug)]
pub struct Prediction {
    pub pairs: Vec<(Family, Family)>,
    /// Set when no theorem covers the parameters, or when the statement is
    /// silent and a default was applied.
    pub diagnostic: Option<String>,
}

impl Prediction {
    pub fn applicable(&self) -> bool {
        !self.pairs.is_empty()
    }
}

pub fn predicted_optima(universe: &Arc<Universe>, t: usize) -> Result<Prediction> {
    let (m, k) = universe.dims();
    check_t(k, t)?;
    if !sum_hypothesis(m, k, t) {
        let need = if t == 1 {
            format!("m >= k+1 = {}", k + 1)
        } else {
            format!("m >= 2k-t = {}", 2 * k - t)
        };
        return Ok(Prediction {
            pairs: Vec::new(),
            diagnostic: Some(format!(
                "(m,k,t)=({m},{k},{t}) is outside the theorem hypotheses ({need})"
            )),
        });
    }
    let hm = hm_pair(universe, t)?;
    if t >= 2 || k > 2 {
        return Ok(Prediction {
            pairs: vec![hm],
            diagnostic: None,
        });
    }
    if k == 1 {
        return Ok(Prediction {
            pairs: vec![hm],
            diagnostic: Some("k = 1: the unique optimum ({[1]}, {[1]}) is assumed".into()),
        });
    }
    // k = 2, t = 1
    let star = star_family(universe, 1)?;
    let mut pairs = Vec::new();
    if m == 3 {
        let triangle = Family::from_element_lists(universe, &[&[1, 2], &[2, 3], &[1, 3]])?;
        pairs.push((triangle.clone(), triangle));
    }
    pairs.push(hm);
    pairs.push((star.clone(), star));
    Ok(Prediction {
        pairs,
        diagnostic: None,
    })
}
