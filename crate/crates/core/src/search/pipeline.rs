//! Seeded end-to-end checks of kernel reduction on random cross
//! t-intersecting pairs.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::CompatibilityIndex;
use crate::bounds::hm_pair;
use crate::compression::{is_t_kernel, kernel_reduce, Kernel};
use crate::error::{Error, Result};
use crate::family::{is_cross_t_intersecting, Family};
use crate::universe::Universe;

/// Draws a non-empty cross t-intersecting pair: a closed family `X` generated
/// by up to three random members, its partner `Γ(X)`, then optionally thinned
/// and swapped.
pub fn random_cross_pair<R: Rng>(index: &CompatibilityIndex, rng: &mut R) -> (Family, Family) {
    let universe = index.universe();
    let n = index.len();
    loop {
        let picks = rng.gen_range(1..=3.min(n));
        let mut seed = Family::empty(universe);
        for _ in 0..picks {
            let r = rng.gen_range(0..n);
            seed = Family::from_ranks(universe, seed.ranks().chain([r])).expect("rank < n");
        }
        let g = index.gamma_mask(seed.mask());
        if g.is_clear() {
            continue;
        }
        let f = index.gamma_mask(&g);
        let (mut f, mut g) = (Family::from_mask(universe, f), Family::from_mask(universe, g));
        if rng.gen_bool(0.5) {
            f = thin(&f, rng);
            g = thin(&g, rng);
        }
        if rng.gen_bool(0.5) {
            std::mem::swap(&mut f, &mut g);
        }
        return (f, g);
    }
}

fn thin<R: Rng>(family: &Family, rng: &mut R) -> Family {
    let ranks: Vec<usize> = family.ranks().collect();
    let mut kept: Vec<usize> = ranks.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    if kept.is_empty() {
        kept.push(*ranks.choose(rng).expect("family is non-empty"));
    }
    Family::from_ranks(family.universe(), kept).expect("ranks come from the family")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineFailure {
    pub sample: usize,
    /// Reproduces the sample with `ChaCha8Rng::seed_from_u64`.
    pub seed: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub m: usize,
    pub k: usize,
    pub t: usize,
    pub samples: usize,
    pub passes: usize,
    pub compressions: usize,
    pub failures: Vec<PipelineFailure>,
    pub seed: u64,
}

impl PipelineReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.passes == self.samples
    }
}

pub(crate) fn sample_seed(seed: u64, sample: usize) -> u64 {
    seed ^ (sample as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Runs [`kernel_reduce`] on `samples` pairs and checks every postcondition.
/// Sample 0 is the HM pair, which must come back untouched. Refuses
/// parameters with `m < 2k - t`.
pub fn verify_kernel_pipeline(
    universe: &Arc<Universe>,
    t: usize,
    samples: usize,
    seed: u64,
) -> Result<PipelineReport> {
    let (m, k) = universe.dims();
    if t == 0 || t > k {
        return Err(Error::InvalidParameter(format!("need 1 <= t <= k, got t={t}")));
    }
    if m + t < 2 * k {
        return Err(Error::Precondition(format!(
            "m >= 2k - t fails: m={m}, k={k}, t={t}"
        )));
    }
    let index = CompatibilityIndex::new(universe, t)?;
    let base = Kernel::rectangle(m, 1)?;
    let mut report = PipelineReport {
        m,
        k,
        t,
        samples,
        passes: 0,
        compressions: 0,
        failures: Vec::new(),
        seed,
    };
    for sample in 0..samples {
        let s = sample_seed(seed, sample);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let (f, g) = if sample == 0 {
            hm_pair(universe, t)?
        } else if rng.gen_ratio(1, 3) {
            let (f, g) = hm_pair(universe, t)?;
            let mut perm: Vec<usize> = (0..m).collect();
            perm.shuffle(&mut rng);
            (f.relabel(&perm)?, g.relabel(&perm)?)
        } else {
            random_cross_pair(&index, &mut rng)
        };
        let mut fail = |reason: String| {
            report.failures.push(PipelineFailure {
                sample,
                seed: s,
                reason,
            })
        };
        let red = match kernel_reduce(&f, &g, t) {
            Ok(r) => r,
            Err(e) => {
                fail(format!("kernel_reduce failed on F={f} G={g}: {e}"));
                continue;
            }
        };
        let mut problems = Vec::new();
        if red.f.len() != f.len() || red.g.len() != g.len() {
            problems.push("sizes changed".to_string());
        }
        if !is_cross_t_intersecting(&red.f, &red.g, t)? {
            problems.push("output is not cross t-intersecting".into());
        }
        if !is_t_kernel(&base, &red.f, &red.g, t)? || !red.kernel.is_base() {
            problems.push("M(m,1) is not a t-kernel of the output".into());
        }
        if red.trace.replay(&f, &g)? != (red.f.clone(), red.g.clone()) {
            problems.push("trace replay does not reproduce the output".into());
        }
        if sample == 0 && (!red.trace.is_empty() || red.f != f || red.g != g) {
            problems.push("HM pair was not left unchanged".into());
        }
        if problems.is_empty() {
            report.passes += 1;
            if !red.trace.is_empty() {
                report.compressions += 1;
            }
        } else {
            fail(format!("F={f} G={g}: {}", problems.join("; ")));
        }
    }
    Ok(report)
}
