//! Closed-form bounds over a small grid, with hypothesis flags.

use mekr::bounds::bound_records;

fn main() -> mekr::Result<()> {
    println!("{:>3} {:>3} {:>3}  {:<8} {:>12}  applies", "m", "k", "t", "formula", "value");
    for (m, k) in [(3, 2), (5, 2), (5, 3), (8, 4)] {
        for t in 1..=k {
            for r in bound_records(m, k, t, None)? {
                println!(
                    "{:>3} {:>3} {:>3}  {:<8} {:>12}  {}",
                    r.m, r.k, r.t, r.formula.to_string(), r.value.to_string(), r.hypothesis_ok
                );
            }
        }
    }
    Ok(())
}
