//! A support-preserving bijection between `k`-subsets of `[n]`, `n = m+k-1`,
//! and `k`-multisets of `[m]`.
//!
//! A subset `B` splits into `A = B ∩ [m]` (with `a = |A| >= 1`, since the tail
//! `{m+1, ..., n}` has only `k-1` elements) and a tail `T` of size `k-a`. The
//! tail is ranked in colex order among `(k-a)`-subsets of the `(k-1)`-element
//! tail, and that rank selects a weak composition `(x_1, ..., x_a)` of `k-a`
//! in lexicographic order. The `i`-th smallest element of `A` gets
//! multiplicity `x_i + 1`. Both sides of a support class have
//! `C(k-1, k-a)` elements, so the pairing is a bijection per class.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use fixedbitset::FixedBitSet;

use crate::binom::binomial_usize;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::multiset::Multiset;
use crate::universe::Universe;

fn binom(n: usize, r: usize) -> usize {
    binomial_usize(n, r).expect("table sizes are bounded by the universe")
}

/// Colex rank of a strictly increasing list of 1-based elements.
pub fn colex_rank(subset: &[usize]) -> usize {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| binom(c - 1, i + 1))
        .sum()
}

/// The `r`-th `size`-subset of the positive integers in colex order.
pub fn colex_unrank(size: usize, mut r: usize) -> Vec<usize> {
    let mut out = vec![0; size];
    // elements strictly decrease as i goes down, so each search is bounded
    // by the element placed before it
    let mut hi = None;
    for i in (1..=size).rev() {
        // largest c with C(c-1, i) <= r
        let fits = |c: usize| binomial_usize(c - 1, i).is_some_and(|b| b <= r);
        let mut upper = match hi {
            Some(h) => h,
            None => {
                let mut u = i + 1;
                while fits(u) {
                    u *= 2;
                }
                u
            }
        };
        let mut lower = i;
        while upper - lower > 1 {
            let mid = lower + (upper - lower) / 2;
            if fits(mid) {
                lower = mid;
            } else {
                upper = mid;
            }
        }
        r -= binom(lower - 1, i);
        out[i - 1] = lower;
        hi = Some(lower);
    }
    out
}

/// Rank of a weak composition among all weak compositions of the same total
/// into the same number of parts, lexicographic order.
pub fn composition_rank(parts: &[usize]) -> usize {
    let mut rest: usize = parts.iter().sum();
    let mut r = 0;
    for (p, &x) in parts.iter().enumerate() {
        let later = parts.len() - p - 1;
        if later == 0 {
            break;
        }
        for v in 0..x {
            // compositions of rest - v into `later` parts
            r += binom(rest - v + later - 1, later - 1);
        }
        rest -= x;
    }
    r
}

pub fn composition_unrank(total: usize, parts: usize, mut r: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(parts);
    let mut rest = total;
    for p in 0..parts {
        let later = parts - p - 1;
        if later == 0 {
            out.push(rest);
            break;
        }
        let mut v = 0;
        loop {
            let block = binom(rest - v + later - 1, later - 1);
            if r < block {
                break;
            }
            r -= block;
            v += 1;
        }
        out.push(v);
        rest -= v;
    }
    out
}

fn check_dims(m: usize, k: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    Ok(m + k - 1)
}

/// `f(B)` for a `k`-subset `B` of `[m+k-1]` given as any list of distinct
/// elements.
pub fn forward_map(m: usize, k: usize, subset: &[usize]) -> Result<Multiset> {
    let n = check_dims(m, k)?;
    let mut b = subset.to_vec();
    b.sort_unstable();
    b.dedup();
    if b.len() != subset.len() || b.len() != k {
        return Err(Error::CardinalityMismatch {
            expected: k,
            found: b.len(),
        });
    }
    if let Some(&bad) = b.iter().find(|&&x| x == 0 || x > n) {
        return Err(Error::ElementOutOfRange { element: bad, bound: n });
    }
    let split = b.partition_point(|&x| x <= m);
    let (head, tail) = b.split_at(split);
    let a = head.len();
    debug_assert!(a >= 1);
    let tail_local: Vec<usize> = tail.iter().map(|&x| x - m).collect();
    let comp = composition_unrank(k - a, a, colex_rank(&tail_local));
    let mut mult = vec![0u32; m];
    for (&e, &x) in head.iter().zip(&comp) {
        mult[e - 1] = x as u32 + 1;
    }
    Multiset::from_multiplicities(mult)
}

/// `f^{-1}(F)`, returned sorted. Here `n = m + |F| - 1`.
pub fn inverse_map(f: &Multiset) -> Result<Vec<usize>> {
    let m = f.m();
    let k = f.cardinality();
    check_dims(m, k)?;
    let support = f.support();
    let a = support.len();
    let comp: Vec<usize> = support
        .iter()
        .map(|&e| f.multiplicity(e) as usize - 1)
        .collect();
    let tail = colex_unrank(k - a, composition_rank(&comp));
    let mut out = support;
    out.extend(tail.into_iter().map(|x| x + m));
    Ok(out)
}

/// A family of `k`-subsets of `[n]`, stored over colex ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    n: usize,
    k: usize,
    members: FixedBitSet,
}

impl SetFamily {
    pub fn empty(n: usize, k: usize) -> Result<Self> {
        let size = binomial_usize(n, k)
            .ok_or_else(|| Error::Budget(format!("C({n}, {k}) overflows")))?;
        Ok(Self {
            n,
            k,
            members: FixedBitSet::with_capacity(size),
        })
    }

    pub fn full(n: usize, k: usize) -> Result<Self> {
        let mut s = Self::empty(n, k)?;
        s.members.insert_range(..);
        Ok(s)
    }

    pub fn insert(&mut self, subset: &[usize]) -> Result<bool> {
        let mut b = subset.to_vec();
        b.sort_unstable();
        b.dedup();
        if b.len() != self.k || subset.len() != self.k {
            return Err(Error::CardinalityMismatch {
                expected: self.k,
                found: b.len(),
            });
        }
        if let Some(&bad) = b.iter().find(|&&x| x == 0 || x > self.n) {
            return Err(Error::ElementOutOfRange {
                element: bad,
                bound: self.n,
            });
        }
        Ok(!self.members.put(colex_rank(&b)))
    }

    pub fn contains(&self, subset: &[usize]) -> bool {
        let mut b = subset.to_vec();
        b.sort_unstable();
        b.len() == self.k
            && b.iter().all(|&x| x >= 1 && x <= self.n)
            && self.members.contains(colex_rank(&b))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    /// Members as sorted element lists, colex order.
    pub fn subsets(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.members.ones().map(|r| colex_unrank(self.k, r))
    }
}

/// The bijection tabulated over ranks: subset colex rank to multiset rank and
/// back.
#[derive(Debug)]
pub struct BijectionTable {
    universe: Arc<Universe>,
    forward: Vec<u32>,
    inverse: Vec<u32>,
}

type TableCache = Mutex<HashMap<(usize, usize), Arc<BijectionTable>>>;

impl BijectionTable {
    pub fn build(universe: &Arc<Universe>) -> Result<Self> {
        let (m, k) = universe.dims();
        let n = check_dims(m, k)?;
        let size = universe.len();
        let mut forward = vec![0u32; size];
        let mut inverse = vec![u32::MAX; size];
        for (r, slot) in forward.iter_mut().enumerate() {
            let b = colex_unrank(k, r);
            debug_assert!(b.last().is_none_or(|&x| x <= n));
            let image = universe.rank_of(&forward_map(m, k, &b)?)?;
            *slot = image as u32;
            if inverse[image] != u32::MAX {
                return Err(Error::Postcondition(format!(
                    "forward map is not injective at multiset rank {image}"
                )));
            }
            inverse[image] = r as u32;
        }
        Ok(Self {
            universe: universe.clone(),
            forward,
            inverse,
        })
    }

    /// Memoized table for `(m, k)`.
    pub fn get(m: usize, k: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<TableCache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().expect("cache poisoned").get(&(m, k)) {
            return Ok(t.clone());
        }
        let table = Arc::new(Self::build(&Universe::new(m, k)?)?);
        cache
            .lock()
            .expect("cache poisoned")
            .insert((m, k), table.clone());
        Ok(table)
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn n(&self) -> usize {
        self.universe.m() + self.universe.k() - 1
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn forward_rank(&self, subset_rank: usize) -> usize {
        self.forward[subset_rank] as usize
    }

    pub fn inverse_rank(&self, multiset_rank: usize) -> usize {
        self.inverse[multiset_rank] as usize
    }

    /// `(subset, multiset)` rows in colex order of the subsets.
    pub fn rows(&self) -> impl Iterator<Item = (Vec<usize>, &Multiset)> + '_ {
        let k = self.universe.k();
        self.forward
            .iter()
            .enumerate()
            .map(move |(r, &img)| (colex_unrank(k, r), &self.universe.members()[img as usize]))
    }

    /// CSV dump with columns `subset,multiset`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["subset", "multiset"])?;
        for (subset, f) in self.rows() {
            let subset = serde_json::to_string(&subset).expect("list serializes");
            w.write_record([subset, f.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `f(A)` applied member-wise.
pub fn map_family(sets: &SetFamily, universe: &Arc<Universe>) -> Result<Family> {
    let (m, k) = universe.dims();
    if sets.k != k || sets.n != m + k - 1 {
        return Err(Error::InvalidParameter(format!(
            "set family over ([{}], {}) does not match n = m+k-1 for m={m}, k={k}",
            sets.n, sets.k
        )));
    }
    let table = BijectionTable::get(m, k)?;
    Family::from_ranks(universe, sets.members.ones().map(|r| table.forward_rank(r)))
}

/// `f^{-1}(F)` applied member-wise.
pub fn unmap_family(family: &Family) -> Result<SetFamily> {
    let (m, k) = family.universe().dims();
    let table = BijectionTable::get(m, k)?;
    let mut out = SetFamily::empty(m + k - 1, k)?;
    for r in family.ranks() {
        out.members.insert(table.inverse_rank(r));
    }
    Ok(out)
}
