//! Small matrices with nontrivial 4-cycles: which are edge-transitive, which
//! have nonlinear automorphisms fixing zero, and whether a family explains
//! them.

use cayley_symmetry::classify::{full_report, ReportOptions};
use cayley_symmetry::IntMatrix;

fn main() -> cayley_symmetry::Result<()> {
    let opts = ReportOptions {
        full_certificates: false,
        ..ReportOptions::default()
    };
    let catalog: [[[i64; 2]; 2]; 10] = [
        [[1, 0], [3, 2]],
        [[2, 0], [0, 2]],
        [[4, 3], [0, 1]],
        [[4, 1], [0, 3]],
        [[4, 0], [0, 2]],
        [[2, -1], [0, 3]],
        [[3, 1], [1, 2]],
        [[4, 0], [0, 4]],
        [[3, 1], [1, 3]],
        [[3, -1], [1, 3]],
    ];
    println!("{:<14} {:>5} {:>6} {:>9} {:>10}  family", "matrix", "order", "ET", "linear", "nonlinear");
    for rows in catalog {
        let r = full_report(&IntMatrix::from_rows(&rows), &opts)?;
        println!(
            "{:<14} {:>5} {:>6} {:>9} {:>10}  {}",
            r.matrix.to_string(),
            r.order,
            r.edge_transitive.to_string(),
            r.linear_et,
            r.nonlinear_stab.to_string(),
            r.family
        );
    }
    Ok(())
}
