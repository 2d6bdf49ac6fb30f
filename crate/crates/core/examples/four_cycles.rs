//! Nontrivial 4-cycle relations and the taxonomy by shape.

use cayley_symmetry::cayley;
use cayley_symmetry::classify::fourcycle_case_taxonomy;
use cayley_symmetry::IntMatrix;

fn main() -> cayley_symmetry::Result<()> {
    for rows in [[[4, 0], [0, 4]], [[3, 1], [1, 2]], [[5, 0], [0, 7]]] {
        let m = IntMatrix::from_rows(&rows);
        println!("M = {m}");
        for r in cayley::nontrivial_relations(&m)? {
            let terms: Vec<String> = r.terms.iter().map(ToString::to_string).collect();
            println!("  {:<6} {}  (M x = {:?})", r.shape, terms.join(" "), r.coeffs);
        }
        let t = fourcycle_case_taxonomy(&m)?;
        println!("  {} nontrivial; C columns in the lattice: {:?}", t.nontrivial(), t.c_members.map(|c| c.len()));
    }
    Ok(())
}
