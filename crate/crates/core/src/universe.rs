//! The universe `((m choose k))` of all `k`-multisets of `[m]`, densely ranked
//! in lexicographic order of sorted element lists.

use std::collections::HashMap;
use std::sync::Arc;

use crate::binom::multichoose_usize;
use crate::error::{Error, Result};
use crate::multiset::Multiset;

/// Largest universe that will be materialized.
pub const MAX_UNIVERSE: usize = 5_000_000;

fn count(m: usize, k: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::EmptyGroundSet);
    }
    multichoose_usize(m, k)
        .ok_or_else(|| Error::Budget(format!("C({}+{}-1, {}) overflows", m, k, k)))
}

/// Number of non-decreasing sequences of length `len` over `{v, ..., m}`.
fn tails(m: usize, v: usize, len: usize) -> usize {
    multichoose_usize(m - v + 1, len).expect("bounded by the universe size")
}

/// 0-based rank of `f` among all `k`-multisets of `[m]`, `k = |f|`.
pub fn rank(f: &Multiset) -> Result<usize> {
    let m = f.m();
    let k = f.cardinality();
    count(m, k)?;
    let mut r = 0usize;
    let mut prev = 1usize;
    for (pos, a) in f.element_iter().enumerate() {
        let rest = k - pos - 1;
        for v in prev..a {
            r += tails(m, v, rest);
        }
        prev = a;
    }
    Ok(r)
}

/// Inverse of [`rank`].
pub fn unrank(m: usize, k: usize, mut r: usize) -> Result<Multiset> {
    let size = count(m, k)?;
    if r >= size {
        return Err(Error::RankOutOfRange { rank: r, size });
    }
    let mut mult = vec![0u32; m];
    let mut v = 1usize;
    for pos in 0..k {
        let rest = k - pos - 1;
        loop {
            let block = tails(m, v, rest);
            if r < block {
                break;
            }
            r -= block;
            v += 1;
        }
        mult[v - 1] += 1;
    }
    Multiset::from_multiplicities(mult)
}

/// A materialized universe. Shared behind an [`Arc`] by every family built
/// on it.
#[derive(Debug)]
pub struct Universe {
    m: usize,
    k: usize,
    members: Vec<Multiset>,
    index: HashMap<Multiset, usize>,
}

impl Universe {
    pub fn new(m: usize, k: usize) -> Result<Arc<Self>> {
        let size = count(m, k)?;
        if size > MAX_UNIVERSE {
            return Err(Error::Budget(format!(
                "universe of size {size} exceeds {MAX_UNIVERSE}"
            )));
        }
        let mut members = Vec::with_capacity(size);
        let mut seq = vec![1usize; k];
        loop {
            members.push(Multiset::from_elements(m, &seq)?);
            // next non-decreasing sequence in lexicographic order
            let Some(p) = seq.iter().rposition(|&x| x < m) else {
                break;
            };
            let v = seq[p] + 1;
            seq[p..].iter_mut().for_each(|x| *x = v);
        }
        debug_assert_eq!(members.len(), size);
        let index = members
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        Ok(Arc::new(Self {
            m,
            k,
            members,
            index,
        }))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Multiset] {
        &self.members
    }

    pub fn member(&self, r: usize) -> Result<&Multiset> {
        self.members.get(r).ok_or(Error::RankOutOfRange {
            rank: r,
            size: self.len(),
        })
    }

    pub fn rank_of(&self, f: &Multiset) -> Result<usize> {
        if f.m() != self.m {
            return Err(Error::GroundSetMismatch {
                left: self.m,
                right: f.m(),
            });
        }
        if f.cardinality() != self.k {
            return Err(Error::CardinalityMismatch {
                expected: self.k,
                found: f.cardinality(),
            });
        }
        Ok(self.index[f])
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.k)
    }

    /// Rank permutation induced by relabeling the ground set with `perm`.
    pub fn relabel_ranks(&self, perm: &[usize]) -> Vec<u32> {
        self.members
            .iter()
            .map(|f| {
                let g = f.relabel(perm).expect("perm has length m");
                self.index[&g] as u32
            })
            .collect()
    }
}
