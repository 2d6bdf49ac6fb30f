//! Parametrized matrices whose graphs are linearly edge-transitive.

use crate::intlin::IntMatrix;

pub fn dim2_m1(a: i64, b: i64) -> IntMatrix {
    IntMatrix::from_rows(&[[a, b], [b, a]])
}

pub fn dim2_m2(a: i64, b: i64) -> IntMatrix {
    IntMatrix::from_rows(&[[a, -b], [b, a]])
}

pub fn dim2_m3(a: i64, b: i64) -> IntMatrix {
    IntMatrix::from_rows(&[[a, -b], [a, b]])
}

/// Circulant commuting with the cyclic shift.
pub fn dim3_m1(a: i64, b: i64, c: i64) -> IntMatrix {
    IntMatrix::from_rows(&[[a, c, b], [b, a, c], [c, b, a]])
}

pub fn dim3_m2(a: i64, b: i64, c: i64) -> IntMatrix {
    IntMatrix::from_rows(&[[a, -c, -b], [b, a, -c], [c, b, a]])
}

pub fn dim3_m3(a: i64, b: i64, c: i64) -> IntMatrix {
    IntMatrix::from_rows(&[[a, -c, -b], [b, a, c], [c, -b, a]])
}

pub fn dim3_m4(a: i64, b: i64, c: i64) -> IntMatrix {
    IntMatrix::from_rows(&[[a, c, b], [b, a, -c], [c, -b, a]])
}

pub fn dim3_m1_prime(a: i64, b: i64, c: i64) -> IntMatrix {
    IntMatrix::from_rows(&[[a, b, c], [a, c, -b - c], [a, -b - c, b]])
}

pub fn dim3_m2_prime(a: i64, b: i64, c: i64) -> IntMatrix {
    IntMatrix::from_rows(&[[a, b, c], [-a, -c, b + c], [a, -b - c, b]])
}

pub fn dim3_m3_prime(a: i64, b: i64, c: i64) -> IntMatrix {
    IntMatrix::from_rows(&[[a, b, c], [a, c, -b - c], [-a, b + c, -b]])
}

pub fn dim3_m4_prime(a: i64, b: i64, c: i64) -> IntMatrix {
    IntMatrix::from_rows(&[[a, b, c], [-a, -c, b + c], [-a, b + c, -b]])
}

/// `det dim3_m1(a,b,c) = (a+b+c)·((a−b)² + (b−c)² + (c−a)²) / 2`.
pub fn dim3_m1_det(a: i64, b: i64, c: i64) -> i128 {
    let (a, b, c) = (a as i128, b as i128, c as i128);
    a * a * a + b * b * b + c * c * c - 3 * a * b * c
}

/// `det dim3_m1_prime(a,b,c) = −3a(b² + bc + c²)`.
pub fn dim3_m1_prime_det(a: i64, b: i64, c: i64) -> i128 {
    let (a, b, c) = (a as i128, b as i128, c as i128);
    -3 * a * (b * b + b * c + c * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::det;
    use num_bigint::BigInt;

    #[test]
    fn closed_form_determinants() {
        for a in -3..=3 {
            for b in -3..=3 {
                for c in -3..=3 {
                    assert_eq!(det(&dim3_m1(a, b, c)), BigInt::from(dim3_m1_det(a, b, c)));
                    assert_eq!(
                        det(&dim3_m1_prime(a, b, c)),
                        BigInt::from(dim3_m1_prime_det(a, b, c))
                    );
                }
            }
        }
    }
}
