//! Exact integer linear algebra: determinants, rational inverses, Hermite and
//! Smith normal forms, integer kernels and integral solvability.
//!
//! Everything here works on [`IntMatrix`] with arbitrary-precision entries.
//! No floating point is involved anywhere.

mod matrix;
mod parse;

pub use matrix::IntMatrix;
pub(crate) use matrix::{serialize_bigint, serialize_bigints, serialize_opt_bigint};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact determinant of a square matrix.
///
/// Cofactor expansion up to dimension 3, Bareiss fraction-free elimination
/// above that.
pub fn det(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    assert!(m.is_square(), "determinant of a non-square matrix");
    match n {
        0 => BigInt::one(),
        1 => m[(0, 0)].clone(),
        2 => &m[(0, 0)] * &m[(1, 1)] - &m[(0, 1)] * &m[(1, 0)],
        3 => {
            let e = |i, j| &m[(i, j)];
            e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
                - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
        }
        _ => bareiss(m),
    }
}

fn bareiss(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Classical adjugate: `m · adj(m) = det(m) · I`.
pub fn adjugate(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    assert!(m.is_square());
    if n == 1 {
        return IntMatrix::identity(1);
    }
    IntMatrix::from_fn(n, n, |i, j| {
        // adj[i][j] = (-1)^(i+j) · det(minor with row j and column i removed)
        let minor = IntMatrix::from_fn(n - 1, n - 1, |r, c| {
            let rr = if r < j { r } else { r + 1 };
            let cc = if c < i { c } else { c + 1 };
            m[(rr, cc)].clone()
        });
        let d = det(&minor);
        if (i + j) % 2 == 0 {
            d
        } else {
            -d
        }
    })
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.is_square() && det(m).abs().is_one()
}

/// Column echelon form under unimodular column operations: `a · w = h`.
///
/// Rows are scanned top to bottom; each row that still has a nonzero entry in
/// the unused columns receives a positive pivot, with everything to its right
/// cleared and every entry to its left reduced into `[0, pivot)`. Columns of
/// `h` past the last pivot are zero, so the matching columns of `w` span the
/// integer kernel of `a`.
#[derive(Debug, Clone)]
pub struct ColumnEchelon {
    pub h: IntMatrix,
    pub w: IntMatrix,
    /// `(row, column)` of each pivot, in order.
    pub pivots: Vec<(usize, usize)>,
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn column_echelon(a: &IntMatrix) -> ColumnEchelon {
    let (rows, cols) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut w = IntMatrix::identity(cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for i in 0..rows {
        if r == cols {
            break;
        }
        for j in r + 1..cols {
            if h[(i, j)].is_zero() {
                continue;
            }
            if h[(i, r)].is_zero() {
                h.swap_cols(r, j);
                w.swap_cols(r, j);
                continue;
            }
            let x = h[(i, r)].clone();
            let y = h[(i, j)].clone();
            let eg = x.extended_gcd(&y);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let p = -(&y / &g);
            let q = &x / &g;
            h.combine_cols(r, j, &s, &t, &p, &q);
            w.combine_cols(r, j, &s, &t, &p, &q);
        }
        if h[(i, r)].is_zero() {
            continue;
        }
        if h[(i, r)].is_negative() {
            h.negate_col(r);
            w.negate_col(r);
        }
        let pivot = h[(i, r)].clone();
        for k in 0..r {
            let q = h[(i, k)].div_floor(&pivot);
            h.sub_col_multiple(k, r, &q);
            w.sub_col_multiple(k, r, &q);
        }
        pivots.push((i, r));
        r += 1;
    }
    ColumnEchelon { h, w, pivots }
}

/// Basis (as columns) of the lattice `{x ∈ Z^k : a·x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let e = column_echelon(a);
    let r = e.rank();
    e.w.select_cols(r..a.cols())
}

/// Column-style Hermite normal form together with its transform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteForm {
    /// Lower triangular, positive diagonal, entries left of the diagonal
    /// reduced into `[0, diagonal)`.
    pub h: IntMatrix,
    /// Unimodular with `m · u = h`.
    pub u: IntMatrix,
}

/// Canonical representative of the right-equivalence class `{m·U}`.
pub fn hnf(m: &IntMatrix) -> Result<HermiteForm> {
    let n = m.require_square()?;
    let e = column_echelon(m);
    if e.rank() < n {
        return Err(Error::SingularMatrix);
    }
    debug_assert!(e.pivots.iter().all(|&(i, j)| i == j));
    Ok(HermiteForm { h: e.h, u: e.w })
}

/// Smith normal form `left · m · right = diag(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Invariant factors, positive, each dividing the next.
    pub d: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

/// `(g, s, u)` with `s·x + u·y = g = ±gcd`, keeping `x` as the pivot when it
/// already divides `y`.
fn pivot_gcd(x: &BigInt, y: &BigInt) -> (BigInt, BigInt, BigInt) {
    if y.is_multiple_of(x) {
        return (x.clone(), BigInt::one(), BigInt::zero());
    }
    let eg = x.extended_gcd(y);
    (eg.gcd, eg.x, eg.y)
}

pub fn snf(m: &IntMatrix) -> Result<SmithForm> {
    let n = m.require_square()?;
    if det(m).is_zero() {
        return Err(Error::SingularMatrix);
    }
    let mut a = m.clone();
    let mut left = IntMatrix::identity(n);
    let mut right = IntMatrix::identity(n);

    for t in 0..n {
        if a[(t, t)].is_zero() {
            let (pi, pj) = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_zero())
                .expect("non-singular matrix has a nonzero entry in every trailing block");
            a.swap_rows(t, pi);
            left.swap_rows(t, pi);
            a.swap_cols(t, pj);
            right.swap_cols(t, pj);
        }
        loop {
            for i in t + 1..n {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let x = a[(t, t)].clone();
                let y = a[(i, t)].clone();
                // A gcd step with s = 0 would only swap rows and never end.
                let (g, s, u) = pivot_gcd(&x, &y);
                let p = -(&y / &g);
                let q = &x / &g;
                a.combine_rows(t, i, &s, &u, &p, &q);
                left.combine_rows(t, i, &s, &u, &p, &q);
            }
            for j in t + 1..n {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let x = a[(t, t)].clone();
                let y = a[(t, j)].clone();
                let (g, s, u) = pivot_gcd(&x, &y);
                let p = -(&y / &g);
                let q = &x / &g;
                a.combine_cols(t, j, &s, &u, &p, &q);
                right.combine_cols(t, j, &s, &u, &p, &q);
            }
            if (t + 1..n).all(|i| a[(i, t)].is_zero()) {
                break;
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }

    // Enforce the divisibility chain with the 2x2 gcd/lcm transform.
    for i in 0..n {
        for j in i + 1..n {
            let x = a[(i, i)].clone();
            let y = a[(j, j)].clone();
            if y.is_multiple_of(&x) {
                continue;
            }
            let eg = x.extended_gcd(&y);
            let (g, s, u) = (eg.gcd, eg.x, eg.y);
            let yg = &y / &g;
            let xg = &x / &g;
            let one = BigInt::one();
            a.combine_rows(i, j, &s, &u, &-&yg, &xg);
            left.combine_rows(i, j, &s, &u, &-&yg, &xg);
            let r_ij = -(&u * &yg);
            let r_jj = &s * &xg;
            a.combine_cols(i, j, &one, &one, &r_ij, &r_jj);
            right.combine_cols(i, j, &one, &one, &r_ij, &r_jj);
            debug_assert!(a[(i, j)].is_zero() && a[(j, i)].is_zero());
            if a[(i, i)].is_negative() {
                a.negate_row(i);
                left.negate_row(i);
            }
            if a[(j, j)].is_negative() {
                a.negate_row(j);
                left.negate_row(j);
            }
        }
    }

    let d = (0..n).map(|i| a[(i, i)].clone()).collect();
    Ok(SmithForm { d, left, right })
}

/// `m⁻¹` kept as `adj(m) / det(m)` so integrality questions stay exact.
#[derive(Debug, Clone)]
pub struct RationalInverse {
    m: IntMatrix,
    adj: IntMatrix,
    det: BigInt,
}

/// Outcome of forming `m⁻¹·p·m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conjugate {
    Integral(IntMatrix),
    /// The first entry (row-major) that is not an integer, as a reduced
    /// fraction with positive denominator.
    NotIntegral {
        row: usize,
        col: usize,
        numer: BigInt,
        denom: BigInt,
    },
}

impl Conjugate {
    pub fn integral(self) -> Option<IntMatrix> {
        match self {
            Conjugate::Integral(q) => Some(q),
            Conjugate::NotIntegral { .. } => None,
        }
    }
}

impl RationalInverse {
    pub fn new(m: &IntMatrix) -> Result<Self> {
        m.require_square()?;
        let d = det(m);
        if d.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(RationalInverse {
            m: m.clone(),
            adj: adjugate(m),
            det: d,
        })
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    /// `m⁻¹ · x` if every entry is an integer.
    pub fn apply_integral(&self, x: &IntMatrix) -> Conjugate {
        let scaled = &self.adj * x;
        let mut out = IntMatrix::zeros(scaled.rows(), scaled.cols());
        for i in 0..scaled.rows() {
            for j in 0..scaled.cols() {
                let (q, r) = scaled[(i, j)].div_rem(&self.det);
                if !r.is_zero() {
                    let g = scaled[(i, j)].gcd(&self.det);
                    let mut numer = &scaled[(i, j)] / &g;
                    let mut denom = &self.det / &g;
                    if denom.is_negative() {
                        numer = -numer;
                        denom = -denom;
                    }
                    return Conjugate::NotIntegral {
                        row: i,
                        col: j,
                        numer,
                        denom,
                    };
                }
                out[(i, j)] = q;
            }
        }
        Conjugate::Integral(out)
    }

    /// `Q = m⁻¹·p·m`, integral exactly when `p·m = m·Q` has an integer solution.
    pub fn conjugate(&self, p: &IntMatrix) -> Conjugate {
        self.apply_integral(&(p * &self.m))
    }

    pub fn solve(&self, k: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(k.len(), self.m.rows());
        let col = IntMatrix::from_fn(k.len(), 1, |i, _| k[i].clone());
        self.apply_integral(&col).integral().map(|x| x.column(0))
    }
}

/// `Q = m⁻¹·p·m` when integral, otherwise the offending entry.
pub fn rational_conjugate(m: &IntMatrix, p: &IntMatrix) -> Result<Conjugate> {
    let n = m.require_square()?;
    if p.rows() != n || p.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.rows(),
        });
    }
    Ok(RationalInverse::new(m)?.conjugate(p))
}

/// Integer `x` with `m·x = k`, or `None` if no integer solution exists.
pub fn solve_integral(m: &IntMatrix, k: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    let n = m.require_square()?;
    if k.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: k.len(),
        });
    }
    Ok(RationalInverse::new(m)?.solve(k))
}

/// Coefficients `c_0, …, c_n` of `det(λI − a) = Σ c_i λ^i` (Faddeev–LeVerrier).
pub fn char_poly(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.rows();
    assert!(a.is_square());
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let id = IntMatrix::identity(n);
    let mut mk = IntMatrix::zeros(n, n);
    for k in 1..=n {
        let shifted = &id * &IntMatrix::diagonal(&vec![coeffs[n - k + 1].clone(); n]);
        mk = &(a * &mk) + &shifted;
        let t = (a * &mk).trace();
        coeffs[n - k] = -(t / BigInt::from(k));
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    /// Permutation-expansion determinant, used as an oracle.
    fn leibniz(a: &IntMatrix) -> BigInt {
        use itertools::Itertools;
        let n = a.rows();
        (0..n)
            .permutations(n)
            .map(|p| {
                let inversions = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| p[i] > p[j])
                    .count();
                let prod: BigInt = (0..n).map(|i| a[(i, p[i])].clone()).product();
                if inversions % 2 == 0 {
                    prod
                } else {
                    -prod
                }
            })
            .sum()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det(&m(&[&[4, 0], &[0, 4]])), 16.into());
        assert_eq!(det(&m(&[&[2, -1], &[0, 3]])), 6.into());
        assert_eq!(det(&m(&[&[2, 0, 1], &[1, 2, 0], &[0, 1, 2]])), 9.into());
    }

    #[test]
    fn bareiss_matches_leibniz() {
        let a = m(&[
            &[2, -1, 0, 3, 1],
            &[0, 0, 4, -2, 2],
            &[1, 5, -3, 0, 0],
            &[-2, 1, 1, 1, 7],
            &[0, 3, 0, -1, 2],
        ]);
        assert_eq!(det(&a), leibniz(&a));
        let singular = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 0, 1], &[5, 5, 5, 5]]);
        assert_eq!(det(&singular), BigInt::zero());
        let zero_pivot = m(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        assert_eq!(det(&zero_pivot), leibniz(&zero_pivot));
    }

    #[test]
    fn adjugate_identity() {
        let a = m(&[&[3, 1, 4], &[1, -5, 9], &[2, 6, 5]]);
        let prod = &a * &adjugate(&a);
        assert_eq!(prod, IntMatrix::diagonal(&vec![det(&a); 3]));
    }

    #[test]
    fn hnf_examples() {
        let h = hnf(&m(&[&[4, 0], &[0, 4]])).unwrap();
        assert_eq!(h.h, m(&[&[4, 0], &[0, 4]]));

        let a = m(&[&[2, -1], &[0, 3]]);
        let h = hnf(&a).unwrap();
        assert_eq!(h.h, m(&[&[1, 0], &[3, 6]]));
        assert_eq!(&a * &h.u, h.h);
        assert!(is_unimodular(&h.u));

        let b = m(&[&[1, 0], &[3, 2]]);
        let u = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(hnf(&b).unwrap().h, hnf(&(&b * &u)).unwrap().h);
    }

    #[test]
    fn hnf_rejects_singular() {
        assert_eq!(hnf(&m(&[&[1, 2], &[2, 4]])), Err(Error::SingularMatrix));
        assert!(matches!(
            hnf(&m(&[&[1, 2, 3], &[4, 5, 6]])),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf(&m(&[&[4, 0], &[0, 4]])).unwrap().d, big(&[4, 4]));
        assert_eq!(snf(&m(&[&[2, -1], &[0, 3]])).unwrap().d, big(&[1, 6]));
        assert_eq!(snf(&m(&[&[2, 0], &[0, 2]])).unwrap().d, big(&[2, 2]));
        // diag(6, 4) must become (2, 12)
        let a = m(&[&[6, 0], &[0, 4]]);
        let s = snf(&a).unwrap();
        assert_eq!(s.d, big(&[2, 12]));
        assert_eq!(&(&s.left * &a) * &s.right, IntMatrix::diagonal(&s.d));
        assert_eq!(snf(&m(&[&[0, 0], &[0, 0]])), Err(Error::SingularMatrix));
    }

    #[test]
    fn snf_with_zero_leading_entry() {
        let a = m(&[&[0, 2, 0], &[3, 0, 0], &[0, 0, 5]]);
        let s = snf(&a).unwrap();
        assert_eq!(s.d, big(&[1, 1, 30]));
        assert_eq!(&(&s.left * &a) * &s.right, IntMatrix::diagonal(&s.d));
        assert!(is_unimodular(&s.left) && is_unimodular(&s.right));
    }

    #[test]
    fn snf_when_pivot_divides() {
        // negative pivots that divide every entry used to cycle forever
        let a = m(&[&[-3, -3, -3], &[-3, -3, 6], &[-3, 6, -3]]);
        let s = snf(&a).unwrap();
        assert_eq!(s.d, big(&[3, 9, 9]));
        assert_eq!(&(&s.left * &a) * &s.right, IntMatrix::diagonal(&s.d));
        assert!(is_unimodular(&s.left) && is_unimodular(&s.right));
    }

    #[test]
    fn unimodularity() {
        assert!(is_unimodular(&IntMatrix::identity(3)));
        assert!(is_unimodular(&m(&[&[1, 1], &[0, 1]])));
        assert!(!is_unimodular(&m(&[&[2, 0], &[0, 1]])));
    }

    #[test]
    fn conjugation_examples() {
        let swap = m(&[&[0, 1], &[1, 0]]);
        let q = rational_conjugate(&m(&[&[3, 1], &[1, 3]]), &swap).unwrap();
        assert_eq!(q, Conjugate::Integral(swap.clone()));

        let p = m(&[&[0, -1], &[1, 0]]);
        let q = rational_conjugate(&IntMatrix::identity(2), &p).unwrap();
        assert_eq!(q, Conjugate::Integral(p));

        match rational_conjugate(&m(&[&[5, 0], &[0, 1]]), &swap).unwrap() {
            Conjugate::NotIntegral { numer, denom, .. } => {
                assert_eq!(denom, 5.into());
                assert_eq!(numer, 1.into());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn solve_examples() {
        let a = m(&[&[2, -1], &[0, 3]]);
        assert_eq!(solve_integral(&a, &big(&[2, 0])).unwrap(), Some(big(&[1, 0])));
        let b = m(&[&[4, 0], &[0, 4]]);
        assert_eq!(solve_integral(&b, &big(&[4, 0])).unwrap(), Some(big(&[1, 0])));
        assert_eq!(solve_integral(&b, &big(&[2, 0])).unwrap(), None);
        assert_eq!(
            solve_integral(&m(&[&[1, 1], &[1, 1]]), &big(&[1, 1])),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn kernel_of_rectangular() {
        let a = m(&[&[3, -1, 2]]);
        let k = integer_kernel(&a);
        assert_eq!(k.cols(), 2);
        assert!((&a * &k).is_zero());
        // The kernel lattice has index 1 in its saturation: some 2x2 minor is ±1.
        let minors = [(0, 1), (0, 2), (1, 2)].map(|(r0, r1)| {
            det(&IntMatrix::from_fn(2, 2, |i, j| {
                k[([r0, r1][i], j)].clone()
            }))
            .abs()
        });
        assert!(minors.iter().any(One::is_one));
    }

    #[test]
    fn characteristic_polynomial() {
        let p1 = m(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(char_poly(&p1), big(&[-1, 0, 0, 1]));
        let a = m(&[&[2, 1], &[1, 3]]);
        assert_eq!(char_poly(&a), big(&[5, -5, 1]));
    }
}
