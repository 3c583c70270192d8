//! Maximum t-intersecting families as maximum cliques of the compatibility
//! graph (vertices: the universe; edges: pairs meeting in at least `t`).

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use fixedbitset::FixedBitSet;

use super::report::{classify_and_verify, Engine, OptimalClass, SearchReport, Verdict, VerdictStatus};
use super::{CompatibilityIndex, SearchOptions};
use crate::bounds::{fgv_bound, fgv_hypothesis, star_family, star_hypothesis};
use crate::canon::canonical_masks;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::universe::Universe;

struct Cliques<'a> {
    adj: &'a [FixedBitSet],
    best: usize,
    found: Vec<FixedBitSet>,
}

impl Cliques<'_> {
    fn expand(&mut self, r: &mut FixedBitSet, size: usize, mut p: FixedBitSet, mut x: FixedBitSet) {
        let p_count = p.count_ones(..);
        if p_count == 0 {
            if x.is_clear() {
                if size > self.best {
                    self.best = size;
                    self.found.clear();
                }
                if size == self.best {
                    self.found.push(r.clone());
                }
            }
            return;
        }
        if size + p_count < self.best {
            return;
        }
        let pivot = p
            .ones()
            .chain(x.ones())
            .max_by_key(|&u| p.intersection_count(&self.adj[u]))
            .expect("p is non-empty");
        let mut todo = p.clone();
        todo.difference_with(&self.adj[pivot]);
        for v in todo.ones() {
            let mut np = p.clone();
            np.intersect_with(&self.adj[v]);
            let mut nx = x.clone();
            nx.intersect_with(&self.adj[v]);
            r.insert(v);
            self.expand(r, size + 1, np, nx);
            r.set(v, false);
            p.set(v, false);
            x.insert(v);
        }
    }
}

/// All maximum t-intersecting families, up to isomorphism, checked against
/// the closed-form maximum and (for `t = 1`, `m > k + 1`) the uniqueness of
/// the star.
pub fn max_t_intersecting(universe: &Arc<Universe>, t: usize, opts: &SearchOptions) -> Result<SearchReport> {
    let started = Instant::now();
    let (m, k) = universe.dims();
    if universe.len() > opts.budget.clique {
        return Err(Error::Budget(format!(
            "universe of size {} exceeds the clique-search limit {}",
            universe.len(),
            opts.budget.clique
        )));
    }
    let index = CompatibilityIndex::new(universe, t)?;
    let n = index.len();
    let adj: Vec<FixedBitSet> = (0..n)
        .map(|a| {
            let mut nb = index.neighbors(a).clone();
            nb.set(a, false);
            nb
        })
        .collect();
    let mut search = Cliques {
        adj: &adj,
        best: 0,
        found: Vec::new(),
    };
    let mut p = FixedBitSet::with_capacity(n);
    p.insert_range(..);
    search.expand(&mut FixedBitSet::with_capacity(n), 0, p, FixedBitSet::with_capacity(n));

    let forms: BTreeSet<_> = search
        .found
        .iter()
        .map(|c| canonical_masks(universe, c, c))
        .collect();
    let classes = forms
        .into_iter()
        .map(|form| {
            let (f, g) = form.families(universe)?;
            Ok(OptimalClass { form, f, g })
        })
        .collect::<Result<Vec<_>>>()?;
    let applicable = if t == 1 {
        star_hypothesis(m, k)
    } else {
        fgv_hypothesis(m, k, t)
    };
    let witnesses = if opts.keep_witnesses {
        search
            .found
            .iter()
            .map(|c| {
                let f = Family::from_mask(universe, c.clone());
                (f.clone(), f)
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut report = SearchReport {
        universe: universe.clone(),
        t,
        engine: Engine::Clique,
        optimum: search.best,
        optimal_pairs: search.found.len(),
        bound: Some(fgv_bound(m, k, t)?),
        bound_applicable: applicable,
        classes,
        verdict: Verdict {
            status: VerdictStatus::Exploratory,
            bound_met: None,
            matched: vec![],
            extra: vec![],
            missing: vec![],
            notes: vec![],
        },
        elapsed_ms: 0,
        seed: None,
        witnesses,
    };
    let unique_star = t == 1 && m > k + 1;
    let predicted = if unique_star {
        let star = star_family(universe, 1)?;
        Some(vec![(star.clone(), star)])
    } else {
        None
    };
    report.verdict = classify_and_verify(&report, predicted.as_deref())?;
    if !unique_star && applicable {
        report
            .verdict
            .notes
            .push("extremal families are not claimed unique for these parameters".into());
    }
    report.elapsed_ms = started.elapsed().as_millis();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::is_t_intersecting;

    /// Largest t-intersecting family by checking every subset.
    fn oracle(u: &Arc<Universe>, t: usize) -> usize {
        let n = u.len();
        let ms = u.members();
        (1u32..1 << n)
            .filter(|bits| {
                let idx: Vec<usize> = (0..n).filter(|i| bits >> i & 1 == 1).collect();
                idx.iter()
                    .all(|&a| idx.iter().all(|&b| ms[a].meet_size(&ms[b]) >= t))
            })
            .map(|bits| bits.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn matches_subset_oracle() {
        let opts = SearchOptions::default();
        for (m, k) in [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3), (2, 5)] {
            let u = Universe::new(m, k).unwrap();
            for t in 1..=k {
                let r = max_t_intersecting(&u, t, &opts).unwrap();
                assert_eq!(r.optimum, oracle(&u, t), "({m},{k},{t})");
                for c in &r.classes {
                    assert!(is_t_intersecting(&c.f, t).unwrap());
                    assert_eq!(c.f.len(), r.optimum);
                }
            }
        }
    }

    #[test]
    fn three_two_has_star_and_triangle() {
        let u = Universe::new(3, 2).unwrap();
        let r = max_t_intersecting(&u, 1, &SearchOptions::default()).unwrap();
        assert_eq!(r.optimum, 3);
        assert_eq!(r.classes.len(), 2);
        assert_eq!(r.verdict.status, VerdictStatus::Match);
    }
}
