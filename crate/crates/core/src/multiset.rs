//! Multisets over a ground set `[m]`, stored as multiplicity vectors.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A multiset over `[m]`. Position `i` of the multiplicity vector holds the
/// multiplicity of element `i + 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Multiset {
    mult: Vec<u32>,
}

impl Multiset {
    pub fn from_multiplicities(mult: Vec<u32>) -> Result<Self> {
        if mult.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        Ok(Self { mult })
    }

    /// Builds a multiset from a list of (1-based) elements with repetition.
    pub fn from_elements(m: usize, elements: &[usize]) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyGroundSet);
        }
        let mut mult = vec![0u32; m];
        for &e in elements {
            if e == 0 || e > m {
                return Err(Error::ElementOutOfRange { element: e, bound: m });
            }
            mult[e - 1] += 1;
        }
        Ok(Self { mult })
    }

    /// The empty multiset over `[m]`.
    pub fn empty(m: usize) -> Result<Self> {
        Self::from_multiplicities(vec![0; m])
    }

    /// The set `{1, ..., k}` as a multiset over `[m]` (all multiplicities one).
    pub fn prefix(m: usize, k: usize) -> Result<Self> {
        if k > m {
            return Err(Error::InvalidParameter(format!(
                "[{k}] does not fit in ground set [{m}]"
            )));
        }
        let mut mult = vec![0u32; m];
        mult[..k].iter_mut().for_each(|x| *x = 1);
        Self::from_multiplicities(mult)
    }

    /// Ground-set size.
    pub fn m(&self) -> usize {
        self.mult.len()
    }

    /// `|F|`, the sum of all multiplicities.
    pub fn cardinality(&self) -> usize {
        self.mult.iter().map(|&x| x as usize).sum()
    }

    /// `m(i, F)` for a 1-based element `i`; zero outside `[m]`.
    pub fn multiplicity(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.mult.get(i - 1).copied().unwrap_or(0)
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    pub(crate) fn multiplicities_mut(&mut self) -> &mut [u32] {
        &mut self.mult
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.mult.iter().copied().max().unwrap_or(0)
    }

    /// Sorted element list with repetition, e.g. `[1, 1, 3]`.
    pub fn elements(&self) -> Vec<usize> {
        self.element_iter().collect()
    }

    pub fn element_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mult
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i + 1, c as usize))
    }

    /// `supp(F)`: the elements with positive multiplicity, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn contains(&self, element: usize) -> bool {
        self.multiplicity(element) > 0
    }

    fn check_same_ground(&self, other: &Self) -> Result<()> {
        if self.m() != other.m() {
            return Err(Error::GroundSetMismatch {
                left: self.m(),
                right: other.m(),
            });
        }
        Ok(())
    }

    /// Element-wise minimum of multiplicities.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_same_ground(other)?;
        Ok(Self {
            mult: self
                .mult
                .iter()
                .zip(&other.mult)
                .map(|(&a, &b)| a.min(b))
                .collect(),
        })
    }

    /// `|F ∩ G|` without materializing the intersection.
    pub fn intersection_size(&self, other: &Self) -> Result<usize> {
        self.check_same_ground(other)?;
        Ok(self.meet_size(other))
    }

    /// Unchecked `|F ∩ G|`; callers guarantee equal ground sets.
    #[inline]
    pub(crate) fn meet_size(&self, other: &Self) -> usize {
        self.mult
            .iter()
            .zip(&other.mult)
            .map(|(&a, &b)| a.min(b) as usize)
            .sum()
    }

    /// Unchecked `|F ∩ G ∩ T|`.
    #[inline]
    pub(crate) fn meet3_size(&self, g: &Self, t: &Self) -> usize {
        self.mult
            .iter()
            .zip(&g.mult)
            .zip(&t.mult)
            .map(|((&a, &b), &c)| a.min(b).min(c) as usize)
            .sum()
    }

    /// Relabels the ground set: element `i` (1-based) becomes `perm[i-1] + 1`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.m() {
            return Err(Error::GroundSetMismatch {
                left: self.m(),
                right: perm.len(),
            });
        }
        let mut mult = vec![0u32; self.m()];
        for (i, &c) in self.mult.iter().enumerate() {
            let target = perm[i];
            if target >= self.m() {
                return Err(Error::ElementOutOfRange {
                    element: target + 1,
                    bound: self.m(),
                });
            }
            mult[target] = c;
        }
        Ok(Self { mult })
    }

    /// Parses the text form `[1,1,3]` over ground set `[m]`.
    pub fn parse(m: usize, text: &str) -> Result<Self> {
        let elements: Vec<usize> =
            serde_json::from_str(text.trim()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_elements(m, &elements)
    }
}

impl Ord for Multiset {
    /// Lexicographic order on the sorted element lists: `[1,1] < [1,2] < [2,2]`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.element_iter()
            .cmp(other.element_iter())
            .then_with(|| self.m().cmp(&other.m()))
    }
}

impl PartialOrd for Multiset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (n, e) in self.element_iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ms(m: usize, e: &[usize]) -> Multiset {
        Multiset::from_elements(m, e).unwrap()
    }

    #[test]
    fn intersection_examples() {
        let f = ms(4, &[1, 1, 2]);
        let g = ms(4, &[1, 3, 3]);
        assert_eq!(f.intersection(&g).unwrap(), ms(4, &[1]));
        assert_eq!(f.intersection_size(&g).unwrap(), 1);
        assert_eq!(f.intersection(&f).unwrap(), f);
        assert_eq!(f.intersection_size(&f).unwrap(), 3);
        let a = ms(4, &[1, 2, 3]);
        let b = ms(4, &[4, 4, 4]);
        assert_eq!(a.intersection(&b).unwrap(), Multiset::empty(4).unwrap());
        assert_eq!(a.intersection_size(&b).unwrap(), 0);
    }

    #[test]
    fn intersection_rejects_ground_mismatch() {
        let a = ms(3, &[1, 2]);
        let b = ms(4, &[1, 2]);
        assert_eq!(
            a.intersection(&b),
            Err(Error::GroundSetMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn support_examples() {
        assert_eq!(ms(3, &[1, 1, 3]).support(), vec![1, 3]);
        assert_eq!(ms(3, &[2, 2, 2]).support(), vec![2]);
        assert_eq!(ms(3, &[1, 2, 3]).support(), vec![1, 2, 3]);
    }

    #[test]
    fn text_form() {
        let f = Multiset::parse(3, "[1, 1,3]").unwrap();
        assert_eq!(f.to_string(), "[1,1,3]");
        assert_eq!(Multiset::empty(2).unwrap().to_string(), "[]");
        assert!(matches!(
            Multiset::parse(3, "[4]"),
            Err(Error::ElementOutOfRange { element: 4, bound: 3 })
        ));
        assert!(matches!(Multiset::parse(3, "1,2"), Err(Error::Parse(_))));
        assert_eq!(Multiset::from_elements(0, &[]), Err(Error::EmptyGroundSet));
    }

    #[test]
    fn order_is_lexicographic_on_elements() {
        let order = [[1, 1], [1, 2], [1, 3], [2, 2], [2, 3], [3, 3]];
        for w in order.windows(2) {
            assert!(ms(3, &w[0]) < ms(3, &w[1]));
        }
    }

    fn multiset_strategy() -> impl Strategy<Value = (Multiset, Multiset)> {
        (1usize..6).prop_flat_map(|m| {
            (
                proptest::collection::vec(0u32..4, m),
                proptest::collection::vec(0u32..4, m),
            )
                .prop_map(|(a, b)| {
                    (
                        Multiset::from_multiplicities(a).unwrap(),
                        Multiset::from_multiplicities(b).unwrap(),
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn intersection_laws((f, g) in multiset_strategy()) {
            let fg = f.intersection(&g).unwrap();
            let size = f.intersection_size(&g).unwrap();
            prop_assert_eq!(fg.cardinality(), size);
            prop_assert!(size <= f.cardinality().min(g.cardinality()));
            prop_assert_eq!(&fg, &g.intersection(&f).unwrap());
            prop_assert_eq!(f.intersection(&f).unwrap(), f.clone());
            prop_assert!(fg.support().len() <= size);
            // monotone: raising a multiplicity of f never shrinks the meet
            let mut bigger = f.clone();
            bigger.multiplicities_mut()[0] += 1;
            prop_assert!(bigger.intersection_size(&g).unwrap() >= size);
        }
    }
}
