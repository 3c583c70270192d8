//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigInt;
use rayon::prelude::*;

use mekr::bijection::{forward_map, inverse_map};
use mekr::bounds::{fgv_bound, hm_pair, set_sum_bound, star_family, sum_bound};
use mekr::compression::{is_t_kernel, kernel_reduce, shift_family, Kernel};
use mekr::search::{
    gamma, max_sum_bruteforce, max_sum_closure, max_t_intersecting, verify_kernel_pipeline,
    CompatibilityIndex, SearchOptions, VerdictStatus,
};
use mekr::{canonicalize_pair, is_cross_t_intersecting, Family, Multiset, Universe};

type Check = Result<String, String>;

/// Preimage bitsets and ranks of the members sharing one support.
type SupportClass = (Vec<[u64; 3]>, Vec<usize>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Exact binomial by Pascal's rule, independent of the library.
fn choose(n: i64, r: i64) -> i64 {
    if r < 0 || n < 0 || r > n {
        return 0;
    }
    let mut row = vec![1i64];
    for _ in 0..n {
        let mut next = vec![1i64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1].saturating_add(row[i]);
        }
        row = next;
    }
    row[r as usize]
}

fn within(started: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = started.elapsed();
    if took < limit {
        Ok(())
    } else {
        Err(format!("{what} took {took:?}, limit {limit:?}"))
    }
}

fn universe(m: usize, k: usize) -> Arc<Universe> {
    Universe::new(m, k).expect("small universe")
}

fn pair(u: &Arc<Universe>, f: &[&[usize]], g: &[&[usize]]) -> (Family, Family) {
    (
        Family::from_element_lists(u, f).unwrap(),
        Family::from_element_lists(u, g).unwrap(),
    )
}

fn optimum_and_time(m: usize, k: usize, t: usize, limit: Duration) -> Result<(usize, usize), String> {
    let u = universe(m, k);
    let opts = SearchOptions::default();
    let started = Instant::now();
    let brute = max_sum_bruteforce(&u, t, &opts).map_err(|e| e.to_string())?;
    within(started, limit, "brute-force engine")?;
    let started = Instant::now();
    let closure = max_sum_closure(&u, t, &opts).map_err(|e| e.to_string())?;
    within(started, limit, "closure engine")?;
    Ok((brute.optimum, closure.optimum))
}

fn criterion_1() -> Check {
    let started = Instant::now();
    let expected = (1 + choose(4, 2) - choose(2, 2)) as usize;
    let (b, c) = optimum_and_time(3, 2, 1, Duration::from_secs(1))?;
    ensure!(b == 6 && c == 6 && expected == 6, "optima brute={b} closure={c}, expected {expected}");

    let u = universe(3, 2);
    let report = mekr::search::max_sum_both(&u, 1, &SearchOptions::default()).map_err(|e| e.to_string())?;
    let triangle = pair(&u, &[&[1, 2], &[2, 3], &[1, 3]], &[&[1, 2], &[2, 3], &[1, 3]]);
    let hm = pair(&u, &[&[1, 2]], &[&[1, 1], &[1, 2], &[1, 3], &[2, 2], &[2, 3]]);
    let stars = (star_family(&u, 1).unwrap(), star_family(&u, 1).unwrap());
    let listed: Vec<_> = [triangle, hm, stars]
        .iter()
        .map(|(f, g)| canonicalize_pair(f, g).unwrap())
        .collect();
    let forms = report.class_forms();
    for form in &listed {
        ensure!(forms.contains(form), "listed structure {form:?} missing from the optimal classes");
    }
    // the |F| = 2 configuration is optimal and is not among the listed ones
    let two = pair(&u, &[&[1, 2], &[1, 3]], &[&[1, 1], &[1, 2], &[1, 3], &[2, 3]]);
    ensure!(
        is_cross_t_intersecting(&two.0, &two.1, 1).unwrap(),
        "|F|=2 witness is not cross-intersecting"
    );
    let two_form = canonicalize_pair(&two.0, &two.1).unwrap();
    ensure!(forms.contains(&two_form), "|F|=2 configuration not reported as optimal");
    ensure!(
        report.verdict.status == VerdictStatus::Discrepancy && report.verdict.extra == vec![two_form],
        "verdict {:?} does not single out the |F|=2 class",
        report.verdict
    );
    ensure!(forms.len() == 4, "expected 4 optimal classes, found {}", forms.len());

    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = mekr::cli::run(
        ["mekr", "search", "--m", "3", "--k", "2", "--t", "1", "--engine", "both"],
        &mut out,
        &mut err,
    );
    ensure!(code == 3, "CLI exit code {code}, expected 3");
    let json: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    ensure!(json["verdict"]["status"] == "discrepancy", "CLI verdict {}", json["verdict"]);
    within(started, Duration::from_secs(1), "criterion")?;
    Ok("optimum 6 on both engines; 4 classes, |F|=2 class flagged, exit 3".into())
}

fn criterion_2() -> Check {
    let mut notes = Vec::new();
    for m in [4usize, 5] {
        let started = Instant::now();
        let expected = (1 + choose(m as i64 + 1, 2) - choose(m as i64 - 1, 2)) as usize;
        let (b, c) = optimum_and_time(m, 2, 1, Duration::from_secs(10))?;
        ensure!(b == expected && c == expected, "({m},2,1): brute={b} closure={c}, expected {expected}");
        let u = universe(m, 2);
        let r = mekr::search::max_sum_both(&u, 1, &SearchOptions::default()).map_err(|e| e.to_string())?;
        if m == 5 {
            let (hf, hg) = hm_pair(&u, 1).unwrap();
            let star = star_family(&u, 1).unwrap();
            let mut want = vec![
                canonicalize_pair(&hf, &hg).unwrap(),
                canonicalize_pair(&star, &star).unwrap(),
            ];
            want.sort();
            let mut got = r.class_forms();
            got.sort();
            ensure!(got == want, "(5,2,1) classes {got:?}, expected HM and star-star");
            ensure!(r.verdict.status == VerdictStatus::Match, "(5,2,1) verdict {:?}", r.verdict);
        }
        within(started, Duration::from_secs(10), &format!("({m},2,1)"))?;
        notes.push(format!("({m},2,1)={expected}"));
    }
    Ok(format!("{}; (5,2,1) classes exactly HM and star-star", notes.join(", ")))
}

fn criterion_3() -> Check {
    let opts = SearchOptions::default();
    let started = Instant::now();
    let u = universe(4, 3);
    let r = max_sum_bruteforce(&u, 2, &opts).map_err(|e| e.to_string())?;
    let c = max_sum_closure(&u, 2, &opts).map_err(|e| e.to_string())?;
    ensure!(r.optimum == 11 && c.optimum == 11, "(4,3,2) optimum {} / {}", r.optimum, c.optimum);
    let (hf, hg) = hm_pair(&u, 2).unwrap();
    ensure!(hf.len() + hg.len() == 11, "hm_pair size {}", hf.len() + hg.len());
    let hm = canonicalize_pair(&hf, &hg).unwrap();
    ensure!(r.class_forms() == vec![hm.clone()], "(4,3,2) classes {:?}", r.class_forms());
    ensure!(c.class_forms() == vec![hm], "(4,3,2) closure classes differ");
    within(started, Duration::from_secs(60), "(4,3,2)")?;

    let started = Instant::now();
    let r = max_sum_bruteforce(&u, 3, &opts).map_err(|e| e.to_string())?;
    let c = max_sum_closure(&u, 3, &opts).map_err(|e| e.to_string())?;
    ensure!(r.optimum == 2 && c.optimum == 2, "(4,3,3) optimum {} / {}", r.optimum, c.optimum);
    within(started, Duration::from_secs(60), "(4,3,3)")?;

    let started = Instant::now();
    let u = universe(5, 3);
    let r = max_sum_closure(&u, 2, &opts).map_err(|e| e.to_string())?;
    let (hf, hg) = hm_pair(&u, 2).unwrap();
    ensure!(r.optimum == 14, "(5,3,2) optimum {}", r.optimum);
    ensure!(hf.len() + hg.len() == 14, "hm_pair(5,3,2) size {}", hf.len() + hg.len());
    within(started, Duration::from_secs(60), "(5,3,2)")?;
    Ok("(4,3,2)=11 single HM class, (4,3,3)=2, (5,3,2)=14".into())
}

fn criterion_4() -> Check {
    let opts = SearchOptions::default();
    for (m, k, t, expected) in [(3usize, 2usize, 1usize, 3usize), (4, 2, 1, 4), (4, 3, 2, 4)] {
        let started = Instant::now();
        let u = universe(m, k);
        let r = max_t_intersecting(&u, t, &opts).map_err(|e| e.to_string())?;
        ensure!(r.optimum == expected, "({m},{k},{t}) optimum {}, expected {expected}", r.optimum);
        let bound = fgv_bound(m, k, t).unwrap();
        if (m, k, t) == (4, 3, 2) {
            ensure!(bound == BigInt::from(expected), "fgv_bound(4,3,2) = {bound}");
            // members containing both 1 and 2
            let star12 = u
                .members()
                .iter()
                .filter(|a| a.multiplicity(1) >= 1 && a.multiplicity(2) >= 1)
                .count();
            ensure!(star12 == expected, "members through [1,2]: {star12}");
        }
        if (m, k, t) == (4, 2, 1) {
            let star = star_family(&u, 1).unwrap();
            ensure!(
                r.class_forms() == vec![canonicalize_pair(&star, &star).unwrap()],
                "(4,2,1) classes {:?}, expected the star only",
                r.class_forms()
            );
            ensure!(r.verdict.status == VerdictStatus::Match, "(4,2,1) verdict {:?}", r.verdict);
        }
        within(started, Duration::from_secs(10), &format!("({m},{k},{t})"))?;
    }
    Ok("3 at (3,2,1), 4 at (4,2,1) unique star, 4 at (4,3,2) = fgv_bound".into())
}

/// Bitset over 1..=150 in three words.
fn bits(items: impl IntoIterator<Item = usize>) -> [u64; 3] {
    let mut w = [0u64; 3];
    for x in items {
        w[(x - 1) / 64] |= 1 << ((x - 1) % 64);
    }
    w
}

#[inline(always)]
fn meet<const W: usize>(a: &[u64; 3], b: &[u64; 3]) -> u32 {
    let mut c = 0u32;
    for i in 0..W {
        c = c.wrapping_add((a[i] & b[i]).count_ones());
    }
    c
}

/// First `(x, y)` with `|left[x] ∩ right[y]| < common`, taking `y >= x` when
/// both sides are the same class. `P` is the number of words in use.
#[inline(always)]
fn block_violation<const P: usize>(left: &[[u64; 3]], right: &[[u64; 3]], same: bool, common: u32) -> Option<(usize, usize)> {
    for (x, a) in left.iter().enumerate() {
        let from = if same { x } else { 0 };
        let mut bad = false;
        for b in &right[from..] {
            bad |= meet::<P>(a, b) < common;
        }
        if bad {
            let y = (from..right.len()).find(|&y| meet::<3>(a, &right[y]) < common).expect("violation");
            return Some((x, y));
        }
    }
    None
}

fn block_words<const P: usize>(left: &[[u64; 3]], right: &[[u64; 3]], same: bool, common: u32) -> Option<(usize, usize)> {
    #[cfg(target_arch = "x86_64")]
    if std::is_x86_feature_detected!("popcnt") {
        #[target_feature(enable = "popcnt")]
        unsafe fn fast<const P: usize>(l: &[[u64; 3]], r: &[[u64; 3]], same: bool, c: u32) -> Option<(usize, usize)> {
            block_violation::<P>(l, r, same, c)
        }
        // SAFETY: the feature was detected at runtime
        return unsafe { fast::<P>(left, right, same, common) };
    }
    block_violation::<P>(left, right, same, common)
}

fn block(left: &[[u64; 3]], right: &[[u64; 3]], same: bool, common: u32, n: usize) -> Option<(usize, usize)> {
    match n.div_ceil(64) {
        1 => block_words::<1>(left, right, same, common),
        2 => block_words::<2>(left, right, same, common),
        _ => block_words::<3>(left, right, same, common),
    }
}

/// Ground sets of size at most 150 keep the domain finite: without it m = 1
/// admits every k, and m = 2 reaches k = 9999.
const MAX_GROUND: usize = 150;

fn criterion_5() -> Check {
    let started = Instant::now();
    let mut domains = 0;
    let mut elements = 0usize;
    let mut pairs = 0u64;
    for m in 1..=MAX_GROUND {
        for k in 1..=MAX_GROUND {
            let n = m + k - 1;
            let size = choose((m + k - 1) as i64, k as i64);
            if n > MAX_GROUND || size > 10_000 {
                continue;
            }
            let u = universe(m, k);
            ensure!(u.len() as i64 == size, "|(({m},{k}))| = {}, expected {size}", u.len());
            // preimages grouped by support, with their ranks
            let mut classes: BTreeMap<[u64; 3], SupportClass> = BTreeMap::new();
            let mut hit = vec![false; u.len()];
            for subset in (1..=n).combinations(k) {
                let a = forward_map(m, k, &subset).map_err(|e| e.to_string())?;
                ensure!(a.cardinality() == k, "f({subset:?}) has size {}", a.cardinality());
                let low: Vec<usize> = subset.iter().copied().filter(|&x| x <= m).collect();
                ensure!(a.support() == low, "supp f({subset:?}) = {:?}", a.support());
                let back = inverse_map(&a).map_err(|e| e.to_string())?;
                ensure!(back == subset, "f^-1(f({subset:?})) = {back:?}");
                let r = u.rank_of(&a).map_err(|e| e.to_string())?;
                ensure!(!hit[r], "f is not injective at ({m},{k}): {a} hit twice");
                hit[r] = true;
                let class = classes.entry(bits(a.support())).or_default();
                class.0.push(bits(subset.iter().copied()));
                class.1.push(r);
            }
            ensure!(hit.iter().all(|&h| h), "f is not onto at ({m},{k})");
            for a in u.members() {
                let b = inverse_map(a).map_err(|e| e.to_string())?;
                let again = forward_map(m, k, &b).map_err(|e| e.to_string())?;
                ensure!(&again == a, "f(f^-1({a})) = {again}");
            }
            let classes: Vec<_> = classes.into_iter().collect();
            let blocks: Vec<(usize, usize, u32)> = (0..classes.len())
                .flat_map(|i| (i..classes.len()).map(move |j| (i, j)))
                .filter_map(|(i, j)| {
                    let common = meet::<3>(&classes[i].0, &classes[j].0);
                    (common > 0).then_some((i, j, common))
                })
                .collect();
            let bad = blocks.par_iter().find_map_any(|&(i, j, common)| {
                block(&classes[i].1 .0, &classes[j].1 .0, i == j, common, n)
                    .map(|(x, y)| (classes[i].1 .1[x], classes[j].1 .1[y]))
            });
            if let Some((a, b)) = bad {
                return Err(format!(
                    "preservation fails at ({m},{k}) for {} and {}",
                    u.member(a).unwrap(),
                    u.member(b).unwrap()
                ));
            }
            pairs += blocks
                .iter()
                .map(|&(i, j, _)| {
                    let (x, y) = (classes[i].1 .0.len() as u64, classes[j].1 .0.len() as u64);
                    if i == j {
                        x * (x + 1) / 2
                    } else {
                        x * y
                    }
                })
                .sum::<u64>();
            domains += 1;
            elements += u.len();
        }
    }
    within(started, Duration::from_secs(30), "bijection suite")?;
    Ok(format!(
        "{domains} (m,k) domains with n <= {MAX_GROUND}, {elements} elements, {pairs} intersecting pairs"
    ))
}

/// |F ∩ G ∩ T| from multiplicities.
fn triple(f: &Multiset, g: &Multiset, t: &Multiset) -> usize {
    (1..=f.m())
        .map(|i| f.multiplicity(i).min(g.multiplicity(i)).min(t.multiplicity(i)) as usize)
        .sum()
}

fn kernel_holds(t_cells: &Multiset, f: &Family, g: &Family, t: usize) -> bool {
    f.iter().all(|a| g.iter().all(|b| triple(a, b, t_cells) >= t))
}

fn criterion_6() -> Check {
    let started = Instant::now();
    let (m, k, t) = (4usize, 3usize, 2usize);
    let u = universe(m, k);
    let index = CompatibilityIndex::new(&u, t).unwrap();
    let kernels: Vec<Multiset> = (0..m)
        .map(|_| 1..=k as u32)
        .multi_cartesian_product()
        .map(|h| Multiset::from_multiplicities(h).unwrap())
        .collect();
    let mut checked = 0;
    for a in u.members() {
        let single = Family::from_members(&u, [a]).unwrap();
        let partner = gamma(&index, &single).unwrap();
        for (f, g) in [(single.clone(), partner.clone()), (partner, single.clone())] {
            ensure!(is_cross_t_intersecting(&f, &g, t).unwrap(), "generated pair not cross t-intersecting");
            for cells in &kernels {
                if !kernel_holds(cells, &f, &g, t) {
                    continue;
                }
                let kernel = Kernel::new(cells.clone()).unwrap();
                ensure!(is_t_kernel(&kernel, &f, &g, t).unwrap(), "is_t_kernel disagrees on {cells}");
                for i in 1..=m {
                    let s = cells.multiplicity(i) as usize;
                    for j in (1..=m).filter(|&j| j != i) {
                        let sf = shift_family(&f, i, s, j).unwrap();
                        let sg = shift_family(&g, i, s, j).unwrap();
                        ensure!(
                            sf.len() == f.len() && sg.len() == g.len(),
                            "shift changed sizes for F={f} G={g} i={i} j={j}"
                        );
                        ensure!(
                            kernel_holds(cells, &sf, &sg, t),
                            "kernel {cells} lost for F={f} G={g} under S(({i},{s}),{j})"
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    let mut runs = 0;
    for (m, k, t) in [(4usize, 3usize, 2usize), (5, 3, 2)] {
        let u = universe(m, k);
        let report = verify_kernel_pipeline(&u, t, 100, 2024).map_err(|e| e.to_string())?;
        ensure!(
            report.all_passed(),
            "pipeline at ({m},{k},{t}): {:?}",
            report.failures.first()
        );
        // recheck a handful of reductions with the local oracle
        let index = CompatibilityIndex::new(&u, t).unwrap();
        let base = Multiset::from_multiplicities(vec![1; m]).unwrap();
        for a in u.members().iter().take(10) {
            let f = Family::from_members(&u, [a]).unwrap();
            let g = gamma(&index, &f).unwrap();
            let red = kernel_reduce(&f, &g, t).map_err(|e| e.to_string())?;
            ensure!(red.f.len() == f.len() && red.g.len() == g.len(), "sizes changed");
            ensure!(kernel_holds(&base, &red.f, &red.g, t), "M(m,1) is not a kernel of the output");
            ensure!(red.kernel.is_base(), "final kernel is not M(m,1)");
            let mut cells = m * k;
            for step in &red.trace.steps {
                ensure!(step.kernel_cells <= cells, "kernel grew during reduction");
                cells = step.kernel_cells;
            }
            ensure!(cells == m || red.trace.is_empty(), "trace ends with {cells} kernel cells");
        }
        runs += report.samples;
    }
    within(started, Duration::from_secs(60), "compression suite")?;
    Ok(format!("{checked} kernel-preservation checks, {runs} pipeline samples, zero failures"))
}

fn criterion_7() -> Check {
    let started = Instant::now();
    let opts = SearchOptions::default();
    let mut cases = 0;
    for m in 1..=20usize {
        for k in 1..=20usize {
            if choose((m + k - 1) as i64, k as i64) > 20 {
                continue;
            }
            let u = universe(m, k);
            for t in 1..=k {
                let b = max_sum_bruteforce(&u, t, &opts).map_err(|e| e.to_string())?;
                let c = max_sum_closure(&u, t, &opts).map_err(|e| e.to_string())?;
                ensure!(b.optimum == c.optimum, "({m},{k},{t}): brute {} vs closure {}", b.optimum, c.optimum);
                ensure!(b.class_forms() == c.class_forms(), "({m},{k},{t}): class sets differ");
                ensure!(b.optimal_pairs == c.optimal_pairs, "({m},{k},{t}): pair counts differ");
                cases += 1;
            }
        }
    }
    within(started, Duration::from_secs(300), "engine equivalence")?;
    Ok(format!("{cases} (m,k,t) cases agree"))
}

fn criterion_8() -> Check {
    let started = Instant::now();
    let mut cases = 0;
    for k in 1..=8usize {
        for m in k..=16usize {
            let expected = 1 + choose((m + k - 1) as i64, k as i64) - choose(m as i64 - 1, k as i64);
            let got = sum_bound(m, k, 1).map_err(|e| e.to_string())?;
            ensure!(got == BigInt::from(expected), "sum_bound({m},{k},1) = {got}, expected {expected}");
            for t in 1..=k {
                let a = sum_bound(m, k, t).map_err(|e| e.to_string())?;
                let b = set_sum_bound(m + k - 1, k, t).map_err(|e| e.to_string())?;
                ensure!(a == b, "sum_bound({m},{k},{t}) = {a} but set_sum_bound = {b}");
                cases += 1;
            }
        }
    }
    within(started, Duration::from_secs(1), "formula identities")?;
    Ok(format!("{cases} identities hold"))
}

fn main() {
    #[allow(clippy::type_complexity)]
    let criteria: [(&str, fn() -> Check); 8] = [
        ("max-sum at (3,2,1) and classification", criterion_1),
        ("max-sum at (4,2,1) and (5,2,1)", criterion_2),
        ("t >= 2 optima at (4,3,2), (4,3,3), (5,3,2)", criterion_3),
        ("maximum t-intersecting families", criterion_4),
        ("bijection suite", criterion_5),
        ("compression suite", criterion_6),
        ("engine equivalence", criterion_7),
        ("formula identities", criterion_8),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let took = started.elapsed();
        match result {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{took:.2?}]", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why} [{took:.2?}]", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
