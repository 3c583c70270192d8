//! Exact maximum of |F| + |G| over cross t-intersecting pairs, with both
//! engines cross-checked and every optimum classified up to isomorphism.
//!
//! Usage: cargo run --release --example max_sum_search -- [m k t]

use mekr::search::{max_sum_both, SearchOptions};
use mekr::Universe;

fn main() -> mekr::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (m, k, t) = match args[..] {
        [m, k, t] => (m, k, t),
        _ => (3, 2, 1),
    };
    let u = Universe::new(m, k)?;
    let report = max_sum_both(&u, t, &SearchOptions::default())?;
    let bound = report.bound.as_ref().map_or("-".to_string(), |b| b.to_string());
    println!(
        "(m,k,t)=({m},{k},{t}): optimum {} over {} optimal pairs, bound {bound}",
        report.optimum, report.optimal_pairs
    );
    for c in &report.classes {
        let tag = if report.verdict.extra.contains(&c.form) { "  <- not predicted" } else { "" };
        println!("  |F|={} |G|={}  F={}  G={}{tag}", c.f.len(), c.g.len(), c.f, c.g);
    }
    println!("verdict: {:?}", report.verdict.status);
    for note in &report.verdict.notes {
        println!("  {note}");
    }
    Ok(())
}
