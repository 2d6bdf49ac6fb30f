//! The linear stabilizer `{P : P M = M Q}` and the linear edge-transitivity
//! decision it implies.

use cayley_symmetry::linaut;
use cayley_symmetry::IntMatrix;

fn main() -> cayley_symmetry::Result<()> {
    for rows in [[[3, 1], [1, 3]], [[3, 1], [1, 2]], [[6, 0], [0, 2]]] {
        let m = IntMatrix::from_rows(&rows);
        let stab = linaut::linear_stabilizer(&m)?;
        println!("M = {m}: |LAut| = {}", stab.order());
        for x in &stab.members {
            println!("  P = {}  Q = {}", x.p, x.q);
        }
        let let_ = linaut::is_linearly_edge_transitive(&m)?;
        println!("  linearly edge-transitive: {}", let_.transitive);
    }
    Ok(())
}
