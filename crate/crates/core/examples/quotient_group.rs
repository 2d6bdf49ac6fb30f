//! Elements of `Z^n / M Z^n` in mixed-radix order and their canonical
//! representatives.

use cayley_symmetry::abelian::QuotientGroup;
use cayley_symmetry::IntMatrix;

fn main() -> cayley_symmetry::Result<()> {
    let m = IntMatrix::from_rows(&[[2, -1], [0, 3]]);
    let g = QuotientGroup::new(&m)?;
    println!("|Z^2 / M Z^2| = {}", g.order());
    for (i, x) in g.elements()?.enumerate() {
        println!("  {i}: {x}");
    }
    // (5, 7) and (5, 7) + M (1, 1) name the same element
    println!("{} == {}", g.canonical(&[5, 7]), g.canonical(&[6, 10]));
    Ok(())
}
