//! Closure-lattice engine: enumerate every closed family (an intersection of
//! `N(A)` masks, or the whole universe) and score `|X| + |Γ(X)|`.

use std::collections::HashSet;
use std::sync::Arc;
use std::time::Instant;

use fixedbitset::FixedBitSet;

use super::report::{sum_report, Engine, SearchReport};
use super::{CompatibilityIndex, SearchOptions};
use crate::error::{Error, Result};
use crate::universe::Universe;

/// All closed families of the Galois connection, including the empty one.
pub(crate) fn closed_sets(index: &CompatibilityIndex, cap: usize) -> Result<Vec<FixedBitSet>> {
    let n = index.len();
    let mut full = FixedBitSet::with_capacity(n);
    full.insert_range(..);
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut stack = Vec::new();
    seen.insert(full.clone());
    stack.push(full);
    while let Some(x) = stack.pop() {
        for a in 0..n {
            let na = index.neighbors(a);
            if x.is_subset(na) {
                continue;
            }
            let mut y = x.clone();
            y.intersect_with(na);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::Budget(format!(
                        "closure lattice exceeds {cap} closed families"
                    )));
                }
                seen.insert(y.clone());
                stack.push(y);
            }
        }
    }
    let mut out: Vec<FixedBitSet> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

pub fn max_sum_closure(universe: &Arc<Universe>, t: usize, opts: &SearchOptions) -> Result<SearchReport> {
    let started = Instant::now();
    let index = CompatibilityIndex::new(universe, t)?;
    let lattice = closed_sets(&index, opts.budget.closure)?;
    let mut optimum = 0;
    let mut best = Vec::new();
    for x in lattice {
        if x.is_clear() {
            continue;
        }
        let gx = index.gamma_mask(&x);
        if gx.is_clear() {
            continue;
        }
        let value = x.count_ones(..) + gx.count_ones(..);
        if value > optimum {
            optimum = value;
            best.clear();
        }
        if value == optimum {
            best.push(x);
        }
    }
    sum_report(&index, Engine::Closure, optimum, &best, opts, started)
}
