//! Exact search for extremal cross t-intersecting pairs and t-intersecting
//! families, with isomorphism classification of every optimum.
//!
//! Everything here runs on the Galois connection `Γ(𝓐) = ∩_{A ∈ 𝓐} N(A)`,
//! where `N(A)` is the set of universe members meeting `A` in at least `t`
//! elements. A pair `(𝓕, 𝓖)` is cross t-intersecting iff `𝓖 ⊆ Γ(𝓕)`, so a
//! maximum pair always has the form `(X, Γ(X))` with `X = Γ(Γ(X))` closed.

mod brute;
mod clique;
mod moore;
mod pipeline;
mod report;

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::universe::Universe;

pub use brute::{max_sum_bruteforce, max_sum_unpruned};
pub use clique::max_t_intersecting;
pub use moore::max_sum_closure;
pub use pipeline::{random_cross_pair, verify_kernel_pipeline, PipelineFailure, PipelineReport};
pub use report::{
    classify_and_verify, max_sum_both, Engine, OptimalClass, SearchReport, Verdict, VerdictStatus,
};

/// Per-member compatibility masks `N(A)` for one universe and threshold.
#[derive(Debug, Clone)]
pub struct CompatibilityIndex {
    universe: Arc<Universe>,
    t: usize,
    masks: Vec<FixedBitSet>,
}

impl CompatibilityIndex {
    pub fn new(universe: &Arc<Universe>, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidParameter("t must be positive".into()));
        }
        let members = universe.members();
        let n = members.len();
        let mut masks = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for b in a..n {
                if members[a].meet_size(&members[b]) >= t {
                    masks[a].insert(b);
                    masks[b].insert(a);
                }
            }
        }
        Ok(Self {
            universe: universe.clone(),
            t,
            masks,
        })
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// `N(A)` for the member of rank `a`.
    pub fn neighbors(&self, a: usize) -> &FixedBitSet {
        &self.masks[a]
    }

    /// `Γ` on a raw mask; `Γ(∅)` is the whole universe.
    pub fn gamma_mask(&self, x: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        out.insert_range(..);
        for a in x.ones() {
            out.intersect_with(&self.masks[a]);
            if out.is_clear() {
                break;
            }
        }
        out
    }

    pub fn closure_mask(&self, x: &FixedBitSet) -> FixedBitSet {
        self.gamma_mask(&self.gamma_mask(x))
    }

    /// Masks as `u64` words, for universes of at most 64 members.
    pub(crate) fn masks_u64(&self) -> Option<Vec<u64>> {
        if self.len() > 64 {
            return None;
        }
        Some(
            self.masks
                .iter()
                .map(|m| m.ones().fold(0u64, |acc, b| acc | (1u64 << b)))
                .collect(),
        )
    }

    fn check(&self, family: &Family) -> Result<()> {
        if family.universe().dims() != self.universe.dims() {
            return Err(Error::UniverseMismatch {
                left: self.universe.dims(),
                right: family.universe().dims(),
            });
        }
        Ok(())
    }
}

/// `Γ(𝓐)`: every member that t-intersects all of `𝓐`.
pub fn gamma(index: &CompatibilityIndex, family: &Family) -> Result<Family> {
    index.check(family)?;
    Ok(Family::from_mask(&index.universe, index.gamma_mask(family.mask())))
}

/// `Γ(Γ(𝓐))`, the largest family with the same partner set as `𝓐`.
pub fn closure(index: &CompatibilityIndex, family: &Family) -> Result<Family> {
    index.check(family)?;
    Ok(Family::from_mask(&index.universe, index.closure_mask(family.mask())))
}

/// Enumeration limits; `MEKR_BUDGET` overrides the defaults.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest universe the brute-force engine accepts (at most 64).
    pub brute: usize,
    /// Most closed sets the closure engine will hold.
    pub closure: usize,
    /// Largest universe for the clique search.
    pub clique: usize,
    /// Largest bijection table to dump.
    pub table: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            brute: 24,
            closure: 2_000_000,
            clique: 400,
            table: 100_000,
        }
    }
}

impl Budget {
    /// Parses `MEKR_BUDGET`. A bare integer sets the brute-force limit;
    /// otherwise a comma list such as `brute=28,closure=5000000`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut b = Self::default();
        let num = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad budget value {v:?}")))
        };
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(b);
        }
        if !spec.contains('=') {
            b.brute = num(spec)?;
            return Ok(b);
        }
        for part in spec.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad budget entry {part:?}")))?;
            let v = num(value)?;
            match key.trim() {
                "brute" => b.brute = v,
                "closure" => b.closure = v,
                "clique" => b.clique = v,
                "table" => b.table = v,
                other => return Err(Error::Parse(format!("unknown budget key {other:?}"))),
            }
        }
        Ok(b)
    }

    pub fn from_env() -> Result<Self> {
        match std::env::var("MEKR_BUDGET") {
            Ok(v) => Self::parse(&v),
            Err(_) => Ok(Self::default()),
        }
    }
}

/// Knobs shared by the search engines.
#[derive(Clone, Copy, Debug, Default)]
pub struct SearchOptions {
    pub budget: Budget,
    /// Keep every optimal `(X, Γ(X))` pair, not just class representatives.
    pub keep_witnesses: bool,
}
