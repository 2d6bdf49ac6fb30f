//! Exact automorphism groups by refinement and backtracking, with the
//! orbit-stabilizer identity as a sanity check.

use cayley_symmetry::autgroup;
use cayley_symmetry::cayley::{CayleyGraph, View};
use cayley_symmetry::IntMatrix;

fn main() -> cayley_symmetry::Result<()> {
    for rows in [[[2, -1], [0, 3]], [[4, 0], [0, 4]], [[5, 2], [1, 2]]] {
        let m = IntMatrix::from_rows(&rows);
        let g = CayleyGraph::build(&m, View::Simple)?;
        let aut = autgroup::automorphism_group(&g)?;
        let et = autgroup::edge_transitivity(&g, &aut);
        println!(
            "{m}: |V| = {}, |Aut| = {} = {} x {}, {} generators, edge orbits {:?}",
            g.order(),
            aut.order,
            aut.zero_orbit,
            aut.stabilizer0_order,
            aut.generators.len(),
            et.orbits.iter().map(Vec::len).collect::<Vec<_>>()
        );
    }
    Ok(())
}
