//! Multisets, their staircase picture, and ranking in the universe.

use mekr::{Multiset, Universe};

fn main() -> mekr::Result<()> {
    let a = Multiset::from_elements(4, &[1, 1, 3])?;
    let b = Multiset::parse(4, "[1,3,3]")?;
    println!("A = {a}, B = {b}");
    println!("A ∩ B = {} (size {})", a.intersection(&b)?, a.intersection_size(&b)?);
    println!("supp(A) = {:?}, m(1,A) = {}", a.support(), a.multiplicity(1));

    let stairs = a.to_staircase(3)?;
    println!("A as cells of M(4,3): {:?}", stairs.cells());

    let u = Universe::new(4, 3)?;
    println!("|((4 choose 3))| = {}", u.len());
    for r in [0, 1, u.len() - 1] {
        println!("  rank {r:>2} -> {}", u.member(r)?);
    }
    println!("rank of A = {}", u.rank_of(&a)?);
    Ok(())
}
