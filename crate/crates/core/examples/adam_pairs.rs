//! Isomorphic graphs that are not isomorphic through any signed permutation.

use cayley_symmetry::autgroup;
use cayley_symmetry::cayley::{CayleyGraph, View};
use cayley_symmetry::IntMatrix;

fn main() -> cayley_symmetry::Result<()> {
    for k in 1..=5 {
        let a = IntMatrix::from_rows(&[[2 * k + 1, 2], [1, 2]]);
        let b = IntMatrix::from_rows(&[[2 * k, 2], [0, 2]]);
        let ga = CayleyGraph::build(&a, View::Simple)?;
        let gb = CayleyGraph::build(&b, View::Simple)?;
        let iso = autgroup::are_isomorphic(&ga, &gb)?.is_some();
        let adam = autgroup::adam_isomorphic(&a, &b)?;
        println!("k = {k}: {a} vs {b}  isomorphic {iso}, by a signed permutation {}", adam.is_some());
    }
    let p = autgroup::adam_isomorphic(
        &IntMatrix::from_rows(&[[3, 1], [1, 3]]),
        &IntMatrix::from_rows(&[[3, -1], [-1, 3]]),
    )?;
    println!("3,1;1,3 vs 3,-1;-1,3: {}", p.map_or("none".into(), |p| p.to_string()));
    Ok(())
}
