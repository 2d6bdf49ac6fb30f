//! Hermite and Smith normal forms of a matrix and a right-equivalent copy.

use cayley_symmetry::intlin::{self, IntMatrix};

fn main() -> cayley_symmetry::Result<()> {
    let m = IntMatrix::from_rows(&[[4, 1], [2, 5]]);
    let u = IntMatrix::from_rows(&[[2, 1], [1, 1]]);
    let mu = &m * &u;

    let h = intlin::hnf(&m)?;
    println!("M        = {m}");
    println!("hnf(M)   = {}  via U = {}", h.h, h.u);
    println!("hnf(M U) = {}", intlin::hnf(&mu)?.h);

    let s = intlin::snf(&m)?;
    let d: Vec<String> = s.d.iter().map(ToString::to_string).collect();
    println!("invariant factors {}  (|det| = {})", d.join(", "), intlin::det(&m).magnitude());
    Ok(())
}
