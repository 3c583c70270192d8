//! Families of `k`-multisets over one universe, and the intersecting
//! predicates.

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::multiset::Multiset;
use crate::universe::Universe;

/// A set of distinct members of a [`Universe`], stored as a membership
/// bitmap over ranks.
#[derive(Clone, Debug)]
pub struct Family {
    universe: Arc<Universe>,
    members: FixedBitSet,
}

impl Family {
    pub fn empty(universe: &Arc<Universe>) -> Self {
        Self {
            universe: universe.clone(),
            members: FixedBitSet::with_capacity(universe.len()),
        }
    }

    pub fn full(universe: &Arc<Universe>) -> Self {
        let mut members = FixedBitSet::with_capacity(universe.len());
        members.insert_range(..);
        Self {
            universe: universe.clone(),
            members,
        }
    }

    pub fn from_mask(universe: &Arc<Universe>, members: FixedBitSet) -> Self {
        assert_eq!(members.len(), universe.len(), "mask length must match universe");
        Self {
            universe: universe.clone(),
            members,
        }
    }

    pub fn from_ranks(universe: &Arc<Universe>, ranks: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut fam = Self::empty(universe);
        for r in ranks {
            if r >= universe.len() {
                return Err(Error::RankOutOfRange {
                    rank: r,
                    size: universe.len(),
                });
            }
            fam.members.insert(r);
        }
        Ok(fam)
    }

    pub fn from_members<'a>(
        universe: &Arc<Universe>,
        members: impl IntoIterator<Item = &'a Multiset>,
    ) -> Result<Self> {
        let mut fam = Self::empty(universe);
        for f in members {
            fam.insert(f)?;
        }
        Ok(fam)
    }

    /// Convenience constructor from element lists, e.g. `&[&[1, 2], &[1, 3]]`.
    pub fn from_element_lists(universe: &Arc<Universe>, lists: &[&[usize]]) -> Result<Self> {
        let mut fam = Self::empty(universe);
        for list in lists {
            fam.insert(&Multiset::from_elements(universe.m(), list)?)?;
        }
        Ok(fam)
    }

    /// Returns whether the member was newly added.
    pub fn insert(&mut self, f: &Multiset) -> Result<bool> {
        let r = self.universe.rank_of(f)?;
        Ok(!self.members.put(r))
    }

    pub fn contains(&self, f: &Multiset) -> bool {
        self.universe
            .rank_of(f)
            .map(|r| self.members.contains(r))
            .unwrap_or(false)
    }

    pub fn contains_rank(&self, r: usize) -> bool {
        self.members.contains(r)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn mask(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn ranks(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    /// Members in universe order.
    pub fn iter(&self) -> impl Iterator<Item = &Multiset> + '_ {
        self.members.ones().map(|r| &self.universe.members()[r])
    }

    pub fn same_universe(&self, other: &Self) -> Result<()> {
        if self.universe.dims() != other.universe.dims() {
            return Err(Error::UniverseMismatch {
                left: self.universe.dims(),
                right: other.universe.dims(),
            });
        }
        Ok(())
    }

    /// Applies a relabeling of the ground set to every member.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.universe.m() {
            return Err(Error::GroundSetMismatch {
                left: self.universe.m(),
                right: perm.len(),
            });
        }
        let table = self.universe.relabel_ranks(perm);
        let mut out = Self::empty(&self.universe);
        for r in self.members.ones() {
            out.members.insert(table[r] as usize);
        }
        Ok(out)
    }

    /// Element lists of the members, the JSON family form.
    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.iter().map(Multiset::elements).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_lists()).expect("lists serialize")
    }

    /// Parses the JSON family form `[[1,1],[1,2]]`. Duplicate members collapse.
    pub fn parse_json(universe: &Arc<Universe>, text: &str) -> Result<Self> {
        let lists: Vec<Vec<usize>> =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut fam = Self::empty(universe);
        for list in lists {
            fam.insert(&Multiset::from_elements(universe.m(), &list)?)?;
        }
        Ok(fam)
    }

    /// Order-independent 64-bit FNV-1a digest of the member ranks.
    pub fn checksum(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in [self.universe.m() as u64, self.universe.k() as u64]
            .into_iter()
            .chain(self.members.ones().map(|r| r as u64))
            .flat_map(u64::to_le_bytes)
        {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.universe.dims() == other.universe.dims() && self.members == other.members
    }
}

impl Eq for Family {}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (n, member) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{member}")?;
        }
        f.write_str("]")
    }
}

/// `|A ∩ B| >= t` for every `A` in `a`, `B` in `b`. Vacuously true when
/// either family is empty.
pub fn is_cross_t_intersecting(a: &Family, b: &Family, t: usize) -> Result<bool> {
    a.same_universe(b)?;
    if t == 0 {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    Ok(a
        .iter()
        .all(|f| b.iter().all(|g| f.meet_size(g) >= t)))
}

pub fn is_t_intersecting(a: &Family, t: usize) -> Result<bool> {
    is_cross_t_intersecting(a, a, t)
}
