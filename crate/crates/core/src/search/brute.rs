//! Branch-and-bound over all families `𝓕`, carrying `Γ(𝓕)` as a running
//! intersection of `N(A)` words.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Instant;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use super::report::{sum_report, Engine, SearchReport};
use super::{CompatibilityIndex, SearchOptions};
use crate::error::{Error, Result};
use crate::universe::Universe;

struct Branch<'a> {
    nb: &'a [u64],
    incumbent: &'a AtomicUsize,
    best: usize,
    found: Vec<u64>,
}

impl Branch<'_> {
    fn record(&mut self, f: u64, value: usize) {
        if value > self.best {
            self.best = value;
            self.found.clear();
            self.incumbent.fetch_max(value, Ordering::Relaxed);
        }
        if value == self.best {
            self.found.push(f);
        }
    }

    fn descend(&mut self, start: usize, f: u64, size: usize, gamma: u64) {
        let n = self.nb.len();
        for x in start..n {
            let g = gamma & self.nb[x];
            if g == 0 {
                continue;
            }
            let f2 = f | (1u64 << x);
            let gsize = g.count_ones() as usize;
            self.record(f2, size + 1 + gsize);
            // only members that keep Γ non-empty can still join 𝓕
            let addable = (x + 1..n).filter(|&y| g & self.nb[y] != 0).count();
            if size + 1 + addable + gsize < self.incumbent.load(Ordering::Relaxed) {
                continue;
            }
            self.descend(x + 1, f2, size + 1, g);
        }
    }
}

fn check_budget(index: &CompatibilityIndex, opts: &SearchOptions) -> Result<Vec<u64>> {
    let n = index.len();
    let limit = opts.budget.brute.min(64);
    if n > limit {
        return Err(Error::Budget(format!(
            "universe of size {n} exceeds the brute-force limit {limit}; use the closure engine"
        )));
    }
    Ok(index.masks_u64().expect("n <= 64"))
}

fn to_bitset(n: usize, word: u64) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(n);
    for i in 0..n {
        if word >> i & 1 == 1 {
            b.insert(i);
        }
    }
    b
}

/// Exact maximum of `|𝓕| + |Γ(𝓕)|` over non-empty `𝓕` with non-empty
/// `Γ(𝓕)`, branching on the smallest member first. Top-level branches run
/// on the current rayon pool and share the incumbent.
pub fn max_sum_bruteforce(universe: &Arc<Universe>, t: usize, opts: &SearchOptions) -> Result<SearchReport> {
    let started = Instant::now();
    let index = CompatibilityIndex::new(universe, t)?;
    let nb = check_budget(&index, opts)?;
    let n = nb.len();
    let incumbent = AtomicUsize::new(0);
    let branches: Vec<(usize, Vec<u64>)> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut br = Branch {
                nb: &nb,
                incumbent: &incumbent,
                best: 0,
                found: Vec::new(),
            };
            let g = nb[x];
            br.record(1u64 << x, 1 + g.count_ones() as usize);
            br.descend(x + 1, 1u64 << x, 1, g);
            (br.best, br.found)
        })
        .collect();
    let optimum = branches.iter().map(|b| b.0).max().unwrap_or(0);
    let mut closed: Vec<u64> = branches
        .into_iter()
        .filter(|b| b.0 == optimum)
        .flat_map(|b| b.1)
        .collect();
    closed.sort_unstable();
    closed.dedup();
    let closed: Vec<FixedBitSet> = closed.into_iter().map(|w| to_bitset(n, w)).collect();
    sum_report(&index, Engine::Brute, optimum, &closed, opts, started)
}

/// Reference enumeration of all `2^N - 1` non-empty families with no
/// pruning at all. Only meant for small universes.
pub fn max_sum_unpruned(universe: &Arc<Universe>, t: usize, opts: &SearchOptions) -> Result<SearchReport> {
    let started = Instant::now();
    let index = CompatibilityIndex::new(universe, t)?;
    let nb = check_budget(&index, opts)?;
    let n = nb.len();
    if n > 30 {
        return Err(Error::Budget(format!("unpruned enumeration of 2^{n} families")));
    }
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut optimum = 0;
    let mut found = Vec::new();
    for f in 1..=full {
        let g = (0..n)
            .filter(|&x| f >> x & 1 == 1)
            .fold(full, |acc, x| acc & nb[x]);
        if g == 0 {
            continue;
        }
        let value = (f.count_ones() + g.count_ones()) as usize;
        if value > optimum {
            optimum = value;
            found.clear();
        }
        if value == optimum {
            found.push(f);
        }
    }
    let closed: Vec<FixedBitSet> = found.into_iter().map(|w| to_bitset(n, w)).collect();
    sum_report(&index, Engine::Brute, optimum, &closed, opts, started)
}
