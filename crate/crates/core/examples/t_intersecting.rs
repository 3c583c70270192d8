//! Largest t-intersecting families by maximum-clique search, against the
//! closed-form maximum.

use mekr::search::{max_t_intersecting, SearchOptions};
use mekr::Universe;

fn main() -> mekr::Result<()> {
    let opts = SearchOptions::default();
    for (m, k, t) in [(3, 2, 1), (4, 2, 1), (4, 3, 2), (5, 3, 1)] {
        let u = Universe::new(m, k)?;
        let r = max_t_intersecting(&u, t, &opts)?;
        let bound = r.bound.as_ref().map(|b| b.to_string()).unwrap_or_default();
        println!(
            "({m},{k},{t}): max {} (bound {bound}), {} class(es), verdict {:?}",
            r.optimum,
            r.classes.len(),
            r.verdict.status
        );
        for c in &r.classes {
            println!("    {}", c.f);
        }
    }
    Ok(())
}
