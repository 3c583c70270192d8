//! The subset-to-multiset bijection for one (m, k), and a mapped family.

use mekr::bijection::{forward_map, inverse_map, map_family, BijectionTable, SetFamily};
use mekr::Universe;

fn main() -> mekr::Result<()> {
    let (m, k) = (3, 3);
    let table = BijectionTable::get(m, k)?;
    println!("k-subsets of [{}] -> k-multisets of [{m}]", table.n());
    for (subset, multiset) in table.rows() {
        println!("  {subset:?} -> {multiset}");
    }

    let f = forward_map(m, k, &[1, 4, 5])?;
    println!("f({{1,4,5}}) = {f}, back to {:?}", inverse_map(&f)?);

    // the star at 1 among 3-subsets of [5] maps into multisets containing 1
    let mut star = SetFamily::empty(table.n(), k)?;
    for s in SetFamily::full(table.n(), k)?.subsets() {
        if s.contains(&1) {
            star.insert(&s)?;
        }
    }
    let u = Universe::new(m, k)?;
    println!("image of the star: {}", map_family(&star, &u)?);
    Ok(())
}
