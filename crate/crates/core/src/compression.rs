//! Down-compression `S((i,s),j)`, t-kernels, and kernel reduction.
//!
//! A shift truncates row `i` of a staircase at level `s` and pours the removed
//! cells into the empty row `j`. Applied to a family it only moves a member
//! when the image is not already present, so family sizes never change.
//! Kernel reduction repeatedly applies the composite shift
//! `S((i, m(i,T)), m) ∘ ... ∘ S((i, m(i,T)), 1)` and peels the top cell of row
//! `i` off the kernel until the kernel is the bottom row block `M(m, 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{is_cross_t_intersecting, Family};
use crate::multiset::Multiset;
use crate::staircase::Staircase;

/// A staircase containing `M(m, 1)`, stored by row heights.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Kernel(Multiset);

impl Kernel {
    pub fn new(heights: Multiset) -> Result<Self> {
        if let Some(row) = heights.multiplicities().iter().position(|&h| h == 0) {
            return Err(Error::KernelMissingBaseRow { row: row + 1 });
        }
        Ok(Self(heights))
    }

    /// `M(m, l)`.
    pub fn rectangle(m: usize, l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidParameter("kernel needs l >= 1".into()));
        }
        Self::new(Multiset::from_multiplicities(vec![l as u32; m])?)
    }

    pub fn from_staircase(s: &Staircase) -> Result<Self> {
        Self::new(s.to_multiset())
    }

    pub fn to_staircase(&self) -> Staircase {
        let l = self.0.max_multiplicity() as usize;
        Staircase::from_multiset(&self.0, l).expect("l is the max height")
    }

    pub fn as_multiset(&self) -> &Multiset {
        &self.0
    }

    /// `m(i, T)` for a 1-based row.
    pub fn height(&self, row: usize) -> u32 {
        self.0.multiplicity(row)
    }

    pub fn cells(&self) -> usize {
        self.0.cardinality()
    }

    pub fn m(&self) -> usize {
        self.0.m()
    }

    pub fn is_base(&self) -> bool {
        self.0.multiplicities().iter().all(|&h| h == 1)
    }

    /// `T \ {(i, m(i,T))}`; refuses to empty a row.
    pub fn without_top(&self, row: usize) -> Result<Self> {
        if self.height(row) < 2 {
            return Err(Error::Precondition(format!(
                "row {row} of the kernel has height {}; removing its top would leave M(m,1)",
                self.height(row)
            )));
        }
        let mut t = self.0.clone();
        t.multiplicities_mut()[row - 1] -= 1;
        Ok(Self(t))
    }
}

fn check_rows(m: usize, i: usize, j: usize) -> Result<()> {
    for x in [i, j] {
        if x == 0 || x > m {
            return Err(Error::ElementOutOfRange { element: x, bound: m });
        }
    }
    if i == j {
        return Err(Error::SameRow(i));
    }
    Ok(())
}

/// `F'` for `(F, i, j, s)`: row `i` cut to `s-1`, row `j` set to
/// `m(i,F)-s+1`. Returns `F` unchanged when `s > m(i,F)` or `j ∈ supp(F)`.
pub fn shift_multiset(f: &Multiset, i: usize, s: usize, j: usize) -> Result<Multiset> {
    check_rows(f.m(), i, j)?;
    if s == 0 {
        return Err(Error::InvalidParameter("shift level s must be >= 1".into()));
    }
    let mi = f.multiplicity(i) as usize;
    if s > mi || f.contains(j) {
        return Ok(f.clone());
    }
    let mut out = f.clone();
    let mult = out.multiplicities_mut();
    mult[i - 1] = (s - 1) as u32;
    mult[j - 1] = (mi - s + 1) as u32;
    Ok(out)
}

/// `S((i,s),j)(𝓕)`: every member moves to its image unless the image is
/// already in the original family.
pub fn shift_family(family: &Family, i: usize, s: usize, j: usize) -> Result<Family> {
    Ok(shift_family_counted(family, i, s, j)?.0)
}

fn shift_family_counted(family: &Family, i: usize, s: usize, j: usize) -> Result<(Family, usize)> {
    let universe = family.universe();
    check_rows(universe.m(), i, j)?;
    let mut out = Family::empty(universe);
    let mut changed = 0;
    for f in family.iter() {
        let image = shift_multiset(f, i, s, j)?;
        if image != *f && !family.contains(&image) {
            out.insert(&image)?;
            changed += 1;
        } else {
            out.insert(f)?;
        }
    }
    debug_assert_eq!(out.len(), family.len());
    Ok((out, changed))
}

/// `|F ∩ G ∩ T| >= t` for every cross pair.
pub fn is_t_kernel(kernel: &Kernel, f: &Family, g: &Family, t: usize) -> Result<bool> {
    f.same_universe(g)?;
    if kernel.m() != f.universe().m() {
        return Err(Error::GroundSetMismatch {
            left: kernel.m(),
            right: f.universe().m(),
        });
    }
    let tm = kernel.as_multiset();
    Ok(f.iter().all(|a| g.iter().all(|b| a.meet3_size(b, tm) >= t)))
}

/// Elements of the universe whose support misses `supp(F)`. For `t = 1` no
/// partner of a family containing `F` may contain any of them.
pub fn blocked_mask(f: &Multiset, universe: &std::sync::Arc<crate::universe::Universe>) -> Result<Family> {
    if f.m() != universe.m() {
        return Err(Error::GroundSetMismatch {
            left: universe.m(),
            right: f.m(),
        });
    }
    let mut out = Family::empty(universe);
    for (r, g) in universe.members().iter().enumerate() {
        if f.meet_size(g) == 0 {
            out.insert(&universe.members()[r])?;
        }
    }
    Ok(out)
}

/// One elementary shift `S((i,s),j)` applied to both families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftStep {
    pub i: usize,
    pub s: usize,
    pub j: usize,
    /// Members moved, summed over both families.
    pub changed_count: usize,
    /// Kernel size certified once the enclosing composite shift completes.
    pub kernel_cells: usize,
    #[serde(skip)]
    pub checksums_before: (u64, u64),
    #[serde(skip)]
    pub checksums_after: (u64, u64),
}

/// Ordered record of every shift applied by [`kernel_reduce`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CompressionTrace {
    pub steps: Vec<ShiftStep>,
}

impl CompressionTrace {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    /// Re-applies every step to the inputs.
    pub fn replay(&self, f: &Family, g: &Family) -> Result<(Family, Family)> {
        let (mut f, mut g) = (f.clone(), g.clone());
        for step in &self.steps {
            f = shift_family(&f, step.i, step.s, step.j)?;
            g = shift_family(&g, step.i, step.s, step.j)?;
        }
        Ok((f, g))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }
}

fn check_pair(f: &Family, g: &Family, t: usize) -> Result<()> {
    let (m, k) = f.universe().dims();
    if m + t < 2 * k {
        return Err(Error::Precondition(format!(
            "m >= 2k - t fails: m={m}, k={k}, t={t}"
        )));
    }
    if !is_cross_t_intersecting(f, g, t)? {
        return Err(Error::Precondition("pair is not cross t-intersecting".into()));
    }
    Ok(())
}

/// Result of one composite shift on row `i`.
#[derive(Clone, Debug)]
pub struct CompositeShift {
    pub f: Family,
    pub g: Family,
    pub kernel: Kernel,
    pub steps: Vec<ShiftStep>,
}

/// Applies `S((i, m(i,T)), j)` for `j = 1..=m` (skipping `j = i`) to both
/// families and returns the shifted pair with kernel `T \ {(i, m(i,T))}`.
pub fn composite_shift(f: &Family, g: &Family, kernel: &Kernel, i: usize, t: usize) -> Result<CompositeShift> {
    check_pair(f, g, t)?;
    let m = f.universe().m();
    if i == 0 || i > m {
        return Err(Error::ElementOutOfRange { element: i, bound: m });
    }
    let s = kernel.height(i) as usize;
    if s < 2 {
        return Err(Error::Precondition(format!(
            "composite shift needs m(i,T) >= 2, row {i} has {s}"
        )));
    }
    if !is_t_kernel(kernel, f, g, t)? {
        return Err(Error::Precondition("T is not a t-kernel of the pair".into()));
    }
    let next = kernel.without_top(i)?;
    let (mut cf, mut cg) = (f.clone(), g.clone());
    let mut steps = Vec::with_capacity(m - 1);
    for j in (1..=m).filter(|&j| j != i) {
        let before = (cf.checksum(), cg.checksum());
        let (nf, a) = shift_family_counted(&cf, i, s, j)?;
        let (ng, b) = shift_family_counted(&cg, i, s, j)?;
        cf = nf;
        cg = ng;
        steps.push(ShiftStep {
            i,
            s,
            j,
            changed_count: a + b,
            kernel_cells: next.cells(),
            checksums_before: before,
            checksums_after: (cf.checksum(), cg.checksum()),
        });
    }
    if cf.len() != f.len() || cg.len() != g.len() {
        return Err(Error::Postcondition("composite shift changed a family size".into()));
    }
    if !is_t_kernel(&next, &cf, &cg, t)? {
        return Err(Error::Postcondition(format!(
            "kernel lost the t-kernel property after removing the top of row {i}"
        )));
    }
    Ok(CompositeShift {
        f: cf,
        g: cg,
        kernel: next,
        steps,
    })
}

/// Greedily drops top cells while the kernel property survives.
pub fn trim_kernel(kernel: Kernel, f: &Family, g: &Family, t: usize) -> Result<Kernel> {
    let mut kernel = kernel;
    loop {
        let mut progressed = false;
        for i in 1..=kernel.m() {
            while kernel.height(i) >= 2 {
                let smaller = kernel.without_top(i)?;
                if !is_t_kernel(&smaller, f, g, t)? {
                    break;
                }
                kernel = smaller;
                progressed = true;
            }
        }
        if !progressed {
            return Ok(kernel);
        }
    }
}

/// Output of [`kernel_reduce`].
#[derive(Clone, Debug)]
pub struct Reduction {
    pub f: Family,
    pub g: Family,
    pub kernel: Kernel,
    pub trace: CompressionTrace,
}

/// Drives a cross t-intersecting pair to one with kernel `M(m, 1)`, keeping
/// both family sizes. Requires non-empty families and `m >= 2k - t`.
pub fn kernel_reduce(f: &Family, g: &Family, t: usize) -> Result<Reduction> {
    check_pair(f, g, t)?;
    if f.is_empty() || g.is_empty() {
        return Err(Error::Precondition("families must be non-empty".into()));
    }
    let (m, k) = f.universe().dims();
    let mut kernel = trim_kernel(Kernel::rectangle(m, k.max(1))?, f, g, t)?;
    let (mut cf, mut cg) = (f.clone(), g.clone());
    let mut trace = CompressionTrace::default();
    while let Some(i) = (1..=m).find(|&i| kernel.height(i) >= 2) {
        let cells = kernel.cells();
        let step = composite_shift(&cf, &cg, &kernel, i, t)?;
        cf = step.f;
        cg = step.g;
        trace.steps.extend(step.steps);
        kernel = trim_kernel(step.kernel, &cf, &cg, t)?;
        debug_assert!(kernel.cells() < cells);
    }
    Ok(Reduction {
        f: cf,
        g: cg,
        kernel,
        trace,
    })
}
