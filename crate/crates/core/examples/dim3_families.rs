//! Three-dimensional family detection: the order-3 witness, the similarity
//! class of `Q`, and parameter recovery for a scrambled circulant.

use cayley_symmetry::classify::{self, families};
use cayley_symmetry::IntMatrix;

fn main() -> cayley_symmetry::Result<()> {
    let scramble = IntMatrix::from_rows(&[[1, 1, 0], [0, 1, 0], [2, 0, 1]]);
    let inputs = [
        families::dim3_m1(2, 1, 0),
        families::dim3_m1_prime(1, 1, 0),
        &families::dim3_m1(3, -1, 1) * &scramble,
        IntMatrix::from_rows(&[[7, 0, 0], [0, 3, 0], [0, 0, 2]]),
    ];
    for m in inputs {
        let fam = classify::classify_dim3(&m)?;
        print!("{m}: {} {:?}", fam.tag, fam.parameters);
        if let Some(ev) = &fam.dim3 {
            print!("  order-3 witness {}  class {:?}", ev.order3_witness, ev.q_class);
        }
        println!("  certificate checks: {}", fam.verify(&m));
    }
    Ok(())
}
