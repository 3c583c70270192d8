//! Isomorphism classes of family pairs: simultaneous relabeling of the ground
//! set, plus swapping the two families.

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::Result;
use crate::family::Family;
use crate::multiset::Multiset;
use crate::universe::Universe;

/// Lexicographically least `(sorted ranks of one side, sorted ranks of the
/// other)` over a labeling set determined by the pair's isomorphism type.
/// Equal forms mean isomorphic pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PairCanonicalForm {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

impl PairCanonicalForm {
    /// Materializes the representative pair as families.
    pub fn families(&self, universe: &Arc<Universe>) -> Result<(Family, Family)> {
        Ok((
            Family::from_ranks(universe, self.first.iter().copied())?,
            Family::from_ranks(universe, self.second.iter().copied())?,
        ))
    }
}

pub fn canonicalize_pair(a: &Family, b: &Family) -> Result<PairCanonicalForm> {
    a.same_universe(b)?;
    Ok(canonical_masks(a.universe(), a.mask(), b.mask()))
}

/// Canonical form of a single family (the pair `(a, a)` with the swap inert).
pub fn canonicalize_family(a: &Family) -> PairCanonicalForm {
    canonical_masks(a.universe(), a.mask(), a.mask())
}

pub(crate) fn canonical_masks(
    universe: &Universe,
    a: &FixedBitSet,
    b: &FixedBitSet,
) -> PairCanonicalForm {
    let a_ranks: Vec<usize> = a.ones().collect();
    let b_ranks: Vec<usize> = b.ones().collect();
    let x = ordered_form(universe, &a_ranks, &b_ranks);
    let y = ordered_form(universe, &b_ranks, &a_ranks);
    x.min(y)
}

/// Per-element profile: how many members of each side give the element each
/// multiplicity. Relabeling carries profiles along with elements.
fn profiles(universe: &Universe, a: &[usize], b: &[usize]) -> Vec<Vec<u32>> {
    let (m, k) = universe.dims();
    let mut out = vec![vec![0u32; 2 * (k + 1)]; m];
    for (side, ranks) in [a, b].into_iter().enumerate() {
        for &r in ranks {
            for (e, &mult) in universe.members()[r].multiplicities().iter().enumerate() {
                out[e][side * (k + 1) + mult as usize] += 1;
            }
        }
    }
    out
}

/// Whether swapping elements `x` and `y` maps the ordered pair onto itself.
fn swap_fixes(universe: &Universe, sides: [&FixedBitSet; 2], ranks: [&[usize]; 2], x: usize, y: usize) -> bool {
    ranks.iter().zip(sides).all(|(rs, side)| {
        rs.iter().all(|&r| {
            let mut mult = universe.members()[r].multiplicities().to_vec();
            mult.swap(x, y);
            let image = Multiset::from_multiplicities(mult).expect("same ground set");
            side.contains(universe.rank_of(&image).expect("same universe"))
        })
    })
}

/// Next distinct permutation of `v` in lexicographic order.
fn next_arrangement(v: &mut [usize]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("v[i+1] > v[i]");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Least `(sorted image of a, sorted image of b)` over labelings that list
/// elements in profile order. Elements interchangeable by a transposition
/// automorphism give identical images, so only distinct arrangements of
/// their classes are tried.
fn ordered_form(universe: &Universe, a: &[usize], b: &[usize]) -> PairCanonicalForm {
    let m = universe.m();
    let n = universe.len();
    let mask = |ranks: &[usize]| {
        let mut s = FixedBitSet::with_capacity(n);
        ranks.iter().for_each(|&r| s.insert(r));
        s
    };
    let (sa, sb) = (mask(a), mask(b));
    let prof = profiles(universe, a, b);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&x, &y| prof[x].cmp(&prof[y]).then(x.cmp(&y)));

    // cells of equal profile, each split into swap classes
    let mut members_of: Vec<Vec<usize>> = Vec::new();
    let mut cells: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut start = 0;
    while start < m {
        let end = (start..m)
            .find(|&p| prof[order[p]] != prof[order[start]])
            .unwrap_or(m);
        let mut reps: Vec<usize> = Vec::new();
        let mut ids = Vec::new();
        for &e in &order[start..end] {
            let found = reps
                .iter()
                .copied()
                .find(|&c| swap_fixes(universe, [&sa, &sb], [a, b], members_of[c][0], e));
            let c = found.unwrap_or_else(|| {
                members_of.push(Vec::new());
                reps.push(members_of.len() - 1);
                members_of.len() - 1
            });
            members_of[c].push(e);
            ids.push(c);
        }
        ids.sort_unstable();
        cells.push((start, ids));
        start = end;
    }

    let mut arrangement: Vec<Vec<usize>> = cells.iter().map(|c| c.1.clone()).collect();
    let mut best: Option<PairCanonicalForm> = None;
    let mut perm = vec![0usize; m];
    let mut x = Vec::with_capacity(a.len());
    let mut y = Vec::with_capacity(b.len());
    loop {
        let mut next_in_class = vec![0usize; members_of.len()];
        for ((offset, _), arr) in cells.iter().zip(&arrangement) {
            for (pos, &c) in arr.iter().enumerate() {
                let e = members_of[c][next_in_class[c]];
                next_in_class[c] += 1;
                perm[e] = offset + pos;
            }
        }
        let image = |r: usize| {
            let g = universe.members()[r].relabel(&perm).expect("perm has length m");
            universe.rank_of(&g).expect("same universe")
        };
        x.clear();
        x.extend(a.iter().map(|&r| image(r)));
        x.sort_unstable();
        y.clear();
        y.extend(b.iter().map(|&r| image(r)));
        y.sort_unstable();
        let better = match &best {
            None => true,
            Some(cur) => (x.as_slice(), y.as_slice()) < (cur.first.as_slice(), cur.second.as_slice()),
        };
        if better {
            best = Some(PairCanonicalForm {
                first: x.clone(),
                second: y.clone(),
            });
        }
        // odometer over the cells' arrangements
        let mut advanced = false;
        for arr in arrangement.iter_mut().rev() {
            if next_arrangement(arr) {
                advanced = true;
                break;
            }
            arr.sort_unstable();
        }
        if !advanced {
            break;
        }
    }
    best.expect("at least one labeling is visited")
}
