use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{max_sum_bruteforce, max_sum_closure, CompatibilityIndex, SearchOptions};
use crate::bounds::{predicted_optima, sum_bound, sum_hypothesis};
use crate::canon::{canonical_masks, canonicalize_pair, PairCanonicalForm};
use crate::error::Result;
use crate::family::Family;
use crate::universe::Universe;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Brute,
    Closure,
    Both,
    Clique,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Brute => "brute",
            Engine::Closure => "closure",
            Engine::Both => "both",
            Engine::Clique => "clique",
        })
    }
}

/// One isomorphism class of optima, with its canonical representative.
#[derive(Clone, Debug)]
pub struct OptimalClass {
    pub form: PairCanonicalForm,
    pub f: Family,
    pub g: Family,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    /// Optimum equals the bound and the classes equal the predicted ones.
    Match,
    /// Something differs; see the verdict lists and notes.
    Discrepancy,
    /// Parameters lie outside every theorem hypothesis; data only.
    Exploratory,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: VerdictStatus,
    /// `Some(optimum == bound)` when the bound applies.
    pub bound_met: Option<bool>,
    pub matched: Vec<PairCanonicalForm>,
    /// Found but not predicted.
    pub extra: Vec<PairCanonicalForm>,
    /// Predicted but not found.
    pub missing: Vec<PairCanonicalForm>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn is_discrepancy(&self) -> bool {
        self.status == VerdictStatus::Discrepancy
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub universe: Arc<Universe>,
    pub t: usize,
    pub engine: Engine,
    pub optimum: usize,
    /// Number of optimal (ordered) pairs or families found before
    /// isomorphism reduction.
    pub optimal_pairs: usize,
    pub bound: Option<BigInt>,
    pub bound_applicable: bool,
    /// Sorted by canonical form.
    pub classes: Vec<OptimalClass>,
    pub verdict: Verdict,
    pub elapsed_ms: u128,
    pub seed: Option<u64>,
    /// Every optimal pair, when [`SearchOptions::keep_witnesses`] is set.
    pub witnesses: Vec<(Family, Family)>,
}

impl SearchReport {
    pub fn m(&self) -> usize {
        self.universe.m()
    }

    pub fn k(&self) -> usize {
        self.universe.k()
    }

    pub fn class_forms(&self) -> Vec<PairCanonicalForm> {
        self.classes.iter().map(|c| c.form.clone()).collect()
    }

    pub fn to_json(&self) -> String {
        let class_json = |form: &PairCanonicalForm| {
            let (f, g) = form.families(&self.universe).expect("forms come from this universe");
            ClassJson {
                f: f.to_lists(),
                g: g.to_lists(),
            }
        };
        let bound = match &self.bound {
            None => serde_json::Value::Null,
            Some(b) => match b.to_i64() {
                Some(v) => v.into(),
                None => b.to_string().into(),
            },
        };
        let out = ReportJson {
            m: self.m(),
            k: self.k(),
            t: self.t,
            engine: self.engine,
            optimum: self.optimum,
            optimal_pairs: self.optimal_pairs,
            bound,
            bound_applicable: self.bound_applicable,
            classes: self.classes.iter().map(|c| class_json(&c.form)).collect(),
            verdict: VerdictJson {
                status: self.verdict.status,
                bound_met: self.verdict.bound_met,
                matched: self.verdict.matched.iter().map(class_json).collect(),
                extra: self.verdict.extra.iter().map(class_json).collect(),
                missing: self.verdict.missing.iter().map(class_json).collect(),
                notes: self.verdict.notes.clone(),
            },
            elapsed_ms: self.elapsed_ms,
            seed: self.seed,
        };
        serde_json::to_string_pretty(&out).expect("report serializes")
    }
}

#[derive(Serialize)]
struct ClassJson {
    #[serde(rename = "F")]
    f: Vec<Vec<usize>>,
    #[serde(rename = "G")]
    g: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct VerdictJson {
    status: VerdictStatus,
    bound_met: Option<bool>,
    matched: Vec<ClassJson>,
    extra: Vec<ClassJson>,
    missing: Vec<ClassJson>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct ReportJson {
    m: usize,
    k: usize,
    t: usize,
    engine: Engine,
    optimum: usize,
    optimal_pairs: usize,
    bound: serde_json::Value,
    bound_applicable: bool,
    classes: Vec<ClassJson>,
    verdict: VerdictJson,
    elapsed_ms: u128,
    seed: Option<u64>,
}

/// Compares the optimum against the report's bound and the found classes
/// against `predicted` (`None` when no extremal structure is claimed).
pub fn classify_and_verify(
    report: &SearchReport,
    predicted: Option<&[(Family, Family)]>,
) -> Result<Verdict> {
    let found: BTreeSet<PairCanonicalForm> = report.class_forms().into_iter().collect();
    let mut notes = Vec::new();
    let bound_met = match (&report.bound, report.bound_applicable) {
        (Some(b), true) => Some(BigInt::from(report.optimum) == *b),
        _ => None,
    };
    if let (Some(b), false) = (&report.bound, report.bound_applicable) {
        notes.push(format!(
            "bound {b} not applicable; observed optimum {} recorded as data",
            report.optimum
        ));
    }
    let (mut matched, mut extra, mut missing) = (Vec::new(), Vec::new(), Vec::new());
    if let Some(pred) = predicted {
        let expected: BTreeSet<PairCanonicalForm> = pred
            .iter()
            .map(|(f, g)| canonicalize_pair(f, g))
            .collect::<Result<_>>()?;
        matched = found.intersection(&expected).cloned().collect();
        extra = found.difference(&expected).cloned().collect();
        missing = expected.difference(&found).cloned().collect();
    }
    let status = if !report.bound_applicable {
        VerdictStatus::Exploratory
    } else if bound_met == Some(false) || !extra.is_empty() || !missing.is_empty() {
        VerdictStatus::Discrepancy
    } else {
        VerdictStatus::Match
    };
    if !extra.is_empty() {
        notes.push(format!(
            "{} optimal class(es) not listed among the predicted extremal structures",
            extra.len()
        ));
    }
    if !missing.is_empty() {
        notes.push(format!("{} predicted class(es) not optimal", missing.len()));
    }
    Ok(Verdict {
        status,
        bound_met,
        matched,
        extra,
        missing,
        notes,
    })
}

/// Assembles a max-sum report from the optimal closed sets an engine found.
pub(super) fn sum_report(
    index: &CompatibilityIndex,
    engine: Engine,
    optimum: usize,
    closed: &[FixedBitSet],
    opts: &SearchOptions,
    started: Instant,
) -> Result<SearchReport> {
    let universe = index.universe().clone();
    let (m, k) = universe.dims();
    let t = index.t();
    let mut forms = BTreeSet::new();
    let mut witnesses = Vec::new();
    for x in closed {
        let gx = index.gamma_mask(x);
        forms.insert(canonical_masks(&universe, x, &gx));
        if opts.keep_witnesses {
            witnesses.push((
                Family::from_mask(&universe, x.clone()),
                Family::from_mask(&universe, gx),
            ));
        }
    }
    let classes = forms
        .into_iter()
        .map(|form| {
            let (f, g) = form.families(&universe)?;
            Ok(OptimalClass { form, f, g })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = SearchReport {
        universe: universe.clone(),
        t,
        engine,
        optimum,
        optimal_pairs: closed.len(),
        bound: Some(sum_bound(m, k, t)?),
        bound_applicable: sum_hypothesis(m, k, t),
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
    let prediction = predicted_optima(&universe, t)?;
    let predicted = prediction.applicable().then_some(prediction.pairs.as_slice());
    report.verdict = classify_and_verify(&report, predicted)?;
    if let Some(d) = prediction.diagnostic {
        report.verdict.notes.push(d);
    }
    report.elapsed_ms = started.elapsed().as_millis();
    Ok(report)
}

/// Runs both max-sum engines and cross-checks optimum and class sets.
pub fn max_sum_both(universe: &Arc<Universe>, t: usize, opts: &SearchOptions) -> Result<SearchReport> {
    let started = Instant::now();
    let brute = max_sum_bruteforce(universe, t, opts)?;
    let mut report = max_sum_closure(universe, t, opts)?;
    report.engine = Engine::Both;
    if brute.optimum != report.optimum || brute.class_forms() != report.class_forms() {
        report.verdict.status = VerdictStatus::Discrepancy;
        report.verdict.notes.push(format!(
            "engines disagree: brute optimum {} with {} classes, closure optimum {} with {} classes",
            brute.optimum,
            brute.classes.len(),
            report.optimum,
            report.classes.len()
        ));
    }
    report.elapsed_ms = started.elapsed().as_millis();
    Ok(report)
}
