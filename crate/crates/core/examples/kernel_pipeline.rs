//! Seeded batch of random reductions with every postcondition checked.
//!
//! Usage: cargo run --release --example kernel_pipeline -- [samples seed]

use mekr::search::verify_kernel_pipeline;
use mekr::Universe;

fn main() -> mekr::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let samples = args.first().copied().unwrap_or(100) as usize;
    let seed = args.get(1).copied().unwrap_or(0);
    for (m, k, t) in [(4, 3, 2), (5, 3, 2), (6, 4, 2)] {
        let u = Universe::new(m, k)?;
        let r = verify_kernel_pipeline(&u, t, samples, seed)?;
        println!(
            "({m},{k},{t}): {}/{} passed, {} needed compression",
            r.passes, r.samples, r.compressions
        );
        for f in &r.failures {
            println!("  sample {} (seed {}): {}", f.sample, f.seed, f.reason);
        }
    }
    Ok(())
}
