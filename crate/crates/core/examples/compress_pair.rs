//! Reduce one cross t-intersecting pair to kernel M(m,1) and show the trace.

use mekr::compression::{is_t_kernel, kernel_reduce, Kernel};
use mekr::search::{gamma, CompatibilityIndex};
use mekr::{Family, Universe};

fn main() -> mekr::Result<()> {
    let (m, k, t) = (4, 3, 2);
    let u = Universe::new(m, k)?;
    let index = CompatibilityIndex::new(&u, t)?;
    let f = Family::from_element_lists(&u, &[&[1, 1, 2]])?;
    let g = gamma(&index, &f)?;
    println!("F = {f}\nG = {g}");

    let red = kernel_reduce(&f, &g, t)?;
    println!("F* = {}\nG* = {}", red.f, red.g);
    for step in &red.trace.steps {
        println!(
            "  S(({},{}),{}) moved {} member(s), kernel now {} cells",
            step.i, step.s, step.j, step.changed_count, step.kernel_cells
        );
    }
    let base = Kernel::rectangle(m, 1)?;
    println!("M({m},1) is a {t}-kernel of the result: {}", is_t_kernel(&base, &red.f, &red.g, t)?);
    println!("trace JSON: {}", red.trace.to_json());
    Ok(())
}
