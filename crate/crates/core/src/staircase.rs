//! Rectangle representation: a multiset as a row-wise downward-closed set of
//! cells inside `M(m, l) = [m] x [l]`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::multiset::Multiset;

/// A downward-closed cell set in `M(m, l)`. Cells are `(row, column)`,
/// both 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Staircase {
    m: usize,
    l: usize,
    cells: BTreeSet<(usize, usize)>,
}

impl Staircase {
    /// Validates range and downward closure of an arbitrary cell set.
    pub fn new(m: usize, l: usize, cells: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyGroundSet);
        }
        let cells: BTreeSet<_> = cells.into_iter().collect();
        for &(i, j) in &cells {
            if i == 0 || i > m {
                return Err(Error::ElementOutOfRange { element: i, bound: m });
            }
            if j == 0 || j > l {
                return Err(Error::RectangleTooNarrow { m, l, needed: j });
            }
            if j > 1 && !cells.contains(&(i, j - 1)) {
                return Err(Error::NotDownwardClosed { row: i });
            }
        }
        Ok(Self { m, l, cells })
    }

    /// The full rectangle `M(m, l)`.
    pub fn rectangle(m: usize, l: usize) -> Result<Self> {
        Self::new(m, l, (1..=m).flat_map(|i| (1..=l).map(move |j| (i, j))))
    }

    pub fn from_multiset(f: &Multiset, l: usize) -> Result<Self> {
        let needed = f.max_multiplicity() as usize;
        if needed > l {
            return Err(Error::RectangleTooNarrow { m: f.m(), l, needed });
        }
        let cells = f
            .multiplicities()
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| (1..=c as usize).map(move |j| (i + 1, j)))
            .collect();
        Ok(Self { m: f.m(), l, cells })
    }

    /// `m(i, A) = max { j : (i, j) in A }`, zero for an empty row.
    pub fn to_multiset(&self) -> Multiset {
        let mut mult = vec![0u32; self.m];
        for &(i, j) in &self.cells {
            mult[i - 1] = mult[i - 1].max(j as u32);
        }
        Multiset::from_multiplicities(mult).expect("m >= 1 checked on construction")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn cells(&self) -> &BTreeSet<(usize, usize)> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: (usize, usize)) -> bool {
        self.cells.contains(&cell)
    }
}

impl Multiset {
    pub fn to_staircase(&self, l: usize) -> Result<Staircase> {
        Staircase::from_multiset(self, l)
    }

    pub fn from_staircase(s: &Staircase) -> Multiset {
        s.to_multiset()
    }
}
