//! Linear automorphisms of `G(M)`: signed permutations `P` with `P·M = M·Q`
//! for an integer `Q`.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cayley::CayleyGraph;
use crate::error::{Error, Result};
use crate::intlin::{self, IntMatrix, RationalInverse};

/// Largest dimension for which the `2^n · n!` candidates are enumerated.
pub const MAX_DIM: usize = 8;

/// Default entry bound for [`bounded_similarity_search`].
pub const DEFAULT_SIMILARITY_BOUND: i64 = 3;

/// `e_j ↦ signs[j] · e_{sigma[j]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    sigma: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(sigma: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = sigma.len();
        if signs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: signs.len(),
            });
        }
        let mut seen = vec![false; n];
        for &s in &sigma {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::Degenerate(format!("{sigma:?} is not a permutation")));
            }
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Degenerate("signs must be ±1".into()));
        }
        Ok(SignedPermutation { sigma, signs })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            sigma: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    /// Diagonal sign change.
    pub fn diagonal(signs: &[i8]) -> Self {
        SignedPermutation {
            sigma: (0..signs.len()).collect(),
            signs: signs.to_vec(),
        }
    }

    pub fn from_matrix(p: &IntMatrix) -> Result<Self> {
        let n = p.require_square()?;
        let mut sigma = vec![usize::MAX; n];
        let mut signs = vec![0i8; n];
        for j in 0..n {
            for i in 0..n {
                let e = &p[(i, j)];
                if e.is_zero() {
                    continue;
                }
                if sigma[j] != usize::MAX || e.abs() != BigInt::one() {
                    return Err(Error::Degenerate(format!("{p} is not a signed permutation")));
                }
                sigma[j] = i;
                signs[j] = if e.is_positive() { 1 } else { -1 };
            }
            if sigma[j] == usize::MAX {
                return Err(Error::Degenerate(format!("{p} is not a signed permutation")));
            }
        }
        SignedPermutation::new(sigma, signs)
    }

    /// All `2^n · n!` signed permutations, identity first.
    pub fn all(n: usize) -> impl Iterator<Item = SignedPermutation> {
        (0..n).permutations(n).flat_map(move |sigma| {
            (0u32..1 << n).map(move |mask| SignedPermutation {
                sigma: sigma.clone(),
                signs: (0..n)
                    .map(|j| if mask >> j & 1 == 1 { -1 } else { 1 })
                    .collect(),
            })
        })
    }

    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Image of `e_j` as `(axis, sign)`.
    pub fn image_of_axis(&self, j: usize) -> (usize, i8) {
        (self.sigma[j], self.signs[j])
    }

    pub fn matrix(&self) -> IntMatrix {
        let n = self.dim();
        let mut p = IntMatrix::zeros(n, n);
        for j in 0..n {
            p[(self.sigma[j], j)] = BigInt::from(self.signs[j]);
        }
        p
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let mut w = vec![0; v.len()];
        for (j, &x) in v.iter().enumerate() {
            w[self.sigma[j]] = self.signs[j] as i64 * x;
        }
        w
    }

    /// `self ∘ other`, i.e. the matrix product `self · other`.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        let (sigma, signs) = (0..self.dim())
            .map(|j| {
                let k = other.sigma[j];
                (self.sigma[k], self.signs[k] * other.signs[j])
            })
            .unzip();
        SignedPermutation { sigma, signs }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let n = self.dim();
        let mut sigma = vec![0; n];
        let mut signs = vec![1; n];
        for j in 0..n {
            sigma[self.sigma[j]] = j;
            signs[self.sigma[j]] = self.signs[j];
        }
        SignedPermutation { sigma, signs }
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(j, &s)| s == j) && self.signs.iter().all(|&s| s == 1)
    }

    pub fn pow(&self, e: u32) -> SignedPermutation {
        (0..e).fold(SignedPermutation::identity(self.dim()), |acc, _| {
            acc.compose(self)
        })
    }

    pub fn order(&self) -> u32 {
        let mut k = 1;
        let mut acc = self.clone();
        while !acc.is_identity() {
            acc = acc.compose(self);
            k += 1;
        }
        k
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.matrix(), f)
    }
}

impl Serialize for SignedPermutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix().serialize(s)
    }
}

/// A pair with `P·M = M·Q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearMember {
    pub p: SignedPermutation,
    pub q: IntMatrix,
}

/// `LAut(G(M), 0)` as the list of admissible signed permutations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearStabilizer {
    pub members: Vec<LinearMember>,
}

impl LinearStabilizer {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, p: &SignedPermutation) -> bool {
        self.members.iter().any(|m| &m.p == p)
    }

    pub fn find(&self, p: &SignedPermutation) -> Option<&LinearMember> {
        self.members.iter().find(|m| &m.p == p)
    }
}

/// Integrality test for `M⁻¹·P·M` on machine integers when entries allow.
struct FastConjugator {
    n: usize,
    m: Vec<Vec<i128>>,
    adj: Vec<Vec<i128>>,
    det: i128,
}

impl FastConjugator {
    fn new(inv: &RationalInverse, m: &IntMatrix) -> Option<Self> {
        let n = m.rows();
        let adj = intlin::adjugate(m);
        let to = |a: &IntMatrix| -> Option<Vec<Vec<i128>>> {
            (0..n)
                .map(|i| (0..n).map(|j| a[(i, j)].to_i64().map(i128::from)).collect())
                .collect()
        };
        let (mm, aa) = (to(m)?, to(&adj)?);
        let bound = |a: &Vec<Vec<i128>>| a.iter().flatten().map(|x| x.abs()).max().unwrap_or(0);
        // every partial sum stays below n · |adj| · |m| < 2^120
        let prod = (bound(&mm) as f64) * (bound(&aa) as f64) * n as f64;
        if prod >= 2f64.powi(120) {
            return None;
        }
        Some(FastConjugator {
            n,
            m: mm,
            adj: aa,
            det: inv.det().to_i128()?,
        })
    }

    /// `Q` if `adj·P·M` is divisible by `det` entrywise.
    fn conjugate(&self, p: &SignedPermutation) -> Option<IntMatrix> {
        let n = self.n;
        let mut q = vec![0i128; n * n];
        for c in 0..n {
            for i in 0..n {
                let mut s = 0i128;
                for j in 0..n {
                    s += p.signs[j] as i128 * self.adj[i][p.sigma[j]] * self.m[j][c];
                }
                if s % self.det != 0 {
                    return None;
                }
                q[i * n + c] = s / self.det;
            }
        }
        Some(IntMatrix::from_fn(n, n, |i, j| BigInt::from(q[i * n + j])))
    }
}

/// Every signed permutation `P` with `M⁻¹·P·M` integral, with its `Q`.
pub fn linear_stabilizer(m: &IntMatrix) -> Result<LinearStabilizer> {
    let n = m.require_square()?;
    if n > MAX_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    let inv = RationalInverse::new(m)?;
    let fast = FastConjugator::new(&inv, m);
    let members = SignedPermutation::all(n)
        .filter_map(|p| {
            let q = match &fast {
                Some(f) => f.conjugate(&p),
                None => inv.conjugate(&p.matrix()).integral(),
            }?;
            Some(LinearMember { p, q })
        })
        .collect();
    Ok(LinearStabilizer { members })
}

/// Vertex permutation `v ↦ P·v` of `G(M)`; only meaningful for members of
/// the linear stabilizer.
pub fn vertex_action(graph: &CayleyGraph, p: &SignedPermutation) -> Vec<u32> {
    (0..graph.order() as u32)
        .map(|v| graph.vertex(&p.apply(graph.element(v).coords())))
        .collect()
}

/// Per-axis witnesses: `witnesses[i]` maps `e_1` to `±e_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearEdgeTransitivity {
    pub transitive: bool,
    pub witnesses: Vec<Option<SignedPermutation>>,
}

pub fn is_linearly_edge_transitive(m: &IntMatrix) -> Result<LinearEdgeTransitivity> {
    Ok(linear_edge_transitivity_from(&linear_stabilizer(m)?, m.rows()))
}

pub fn linear_edge_transitivity_from(
    stab: &LinearStabilizer,
    n: usize,
) -> LinearEdgeTransitivity {
    let witnesses: Vec<_> = (0..n)
        .map(|i| {
            stab.members
                .iter()
                .find(|mem| mem.p.sigma[0] == i)
                .map(|mem| mem.p.clone())
        })
        .collect();
    LinearEdgeTransitivity {
        transitive: witnesses.iter().all(Option::is_some),
        witnesses,
    }
}

/// The four order-3 signed permutations cycling `e_1 → e_2 → e_3`.
pub fn p_matrices() -> [IntMatrix; 4] {
    [
        IntMatrix::from_rows(&[[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
        IntMatrix::from_rows(&[[0, 0, 1], [-1, 0, 0], [0, -1, 0]]),
        IntMatrix::from_rows(&[[0, 0, -1], [1, 0, 0], [0, -1, 0]]),
        IntMatrix::from_rows(&[[0, 0, -1], [-1, 0, 0], [0, 1, 0]]),
    ]
}

/// Block representative `1 ⊕ [[-1,1],[-1,0]]` of the split similarity class.
pub fn q1() -> IntMatrix {
    IntMatrix::from_rows(&[[1, 0, 0], [0, -1, 1], [0, -1, 0]])
}

/// Representative of the class containing the cyclic shift.
pub fn q2() -> IntMatrix {
    IntMatrix::from_rows(&[[1, 0, 1], [0, -1, 1], [0, -1, 0]])
}

/// An order-3 member of the linear stabilizer, preferring the four standard
/// cycles in order.
///
/// The stabilizer is a group, so if it has an element `f` of order 6 then
/// `f²` is itself a member of order 3 and the plain search finds it.
pub fn dim3_order3_witness(m: &IntMatrix) -> Result<Option<SignedPermutation>> {
    let n = m.require_square()?;
    if n != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: n,
        });
    }
    Ok(order3_in(&linear_stabilizer(m)?))
}

pub(crate) fn order3_in(stab: &LinearStabilizer) -> Option<SignedPermutation> {
    let standard: Vec<SignedPermutation> = p_matrices()
        .iter()
        .map(|p| SignedPermutation::from_matrix(p).expect("signed permutation"))
        .collect();
    standard
        .into_iter()
        .find(|p| stab.contains(p))
        .or_else(|| {
            stab.members
                .iter()
                .map(|mem| &mem.p)
                .find(|p| p.order() == 3)
                .cloned()
        })
}

/// `a·u == u·b` for unimodular `u`.
pub fn similarity_witness_check(a: &IntMatrix, b: &IntMatrix, u: &IntMatrix) -> Result<bool> {
    let n = u.require_square()?;
    for x in [a, b] {
        if x.rows() != n || x.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.rows(),
            });
        }
    }
    if !intlin::is_unimodular(u) {
        return Err(Error::NotUnimodular);
    }
    Ok(a * u == u * b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimilaritySearch {
    Found(IntMatrix),
    /// No witness within the bound. Says nothing about non-similarity.
    Undecided,
}

impl SimilaritySearch {
    pub fn witness(self) -> Option<IntMatrix> {
        match self {
            SimilaritySearch::Found(u) => Some(u),
            SimilaritySearch::Undecided => None,
        }
    }
}

/// A unimodular `U` with `A·U = U·B` and entries in `[-bound, bound]`.
///
/// Solutions of `A·U = U·B` form a lattice; its basis is put in column
/// echelon form so that each pivot entry of `U` depends only on the first
/// few coefficients, which bounds the enumeration coordinate by coordinate.
pub fn bounded_similarity_search(a: &IntMatrix, b: &IntMatrix, bound: i64) -> SimilaritySearch {
    let n = a.rows();
    if !a.is_square() || b.rows() != n || !b.is_square() || bound < 1 {
        return SimilaritySearch::Undecided;
    }
    if a == b {
        return SimilaritySearch::Found(IntMatrix::identity(n));
    }
    let mut l = IntMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                l[(i * n + j, k * n + j)] += &a[(i, k)];
                l[(i * n + j, i * n + k)] -= &b[(k, j)];
            }
        }
    }
    let kernel = intlin::integer_kernel(&l);
    if kernel.cols() == 0 {
        return SimilaritySearch::Undecided;
    }
    let ech = intlin::column_echelon(&kernel);
    let k = ech.rank();
    let Some(basis) = (0..k)
        .map(|c| {
            (0..n * n)
                .map(|r| ech.h[(r, c)].to_i64())
                .collect::<Option<Vec<i64>>>()
        })
        .collect::<Option<Vec<Vec<i64>>>>()
    else {
        return SimilaritySearch::Undecided;
    };
    let pivots: Vec<usize> = ech.pivots.iter().map(|&(r, _)| r).collect();

    let mut coeffs = vec![0i64; k];
    let mut found = None;
    search_coeffs(&basis, &pivots, bound, 0, &mut coeffs, &mut |t| {
        let u = IntMatrix::from_fn(n, n, |i, j| {
            BigInt::from((0..k).map(|c| t[c] * basis[c][i * n + j]).sum::<i64>())
        });
        if u.max_abs() <= BigInt::from(bound) && intlin::is_unimodular(&u) {
            found = Some(u);
            true
        } else {
            false
        }
    });
    match found {
        Some(u) => SimilaritySearch::Found(u),
        None => SimilaritySearch::Undecided,
    }
}

/// Depth-first over coefficients, smallest magnitude first. Stops when
/// `accept` returns `true`.
fn search_coeffs(
    basis: &[Vec<i64>],
    pivots: &[usize],
    bound: i64,
    depth: usize,
    t: &mut Vec<i64>,
    accept: &mut dyn FnMut(&[i64]) -> bool,
) -> bool {
    if depth == basis.len() {
        return accept(t);
    }
    let row = pivots[depth];
    let partial: i64 = (0..depth).map(|c| t[c] * basis[c][row]).sum();
    let p = basis[depth][row];
    debug_assert!(p > 0);
    let lo = (-bound - partial).div_euclid(p) + i64::from((-bound - partial).rem_euclid(p) != 0);
    let hi = (bound - partial).div_euclid(p);
    let mut values: Vec<i64> = (lo..=hi).collect();
    values.sort_by_key(|v| (v.abs(), *v < 0));
    for v in values {
        t[depth] = v;
        if search_coeffs(basis, pivots, bound, depth + 1, t, accept) {
            return true;
        }
    }
    false
}

/// Similarity class of an integer matrix with characteristic polynomial `λ³ − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum QClass {
    Q1,
    Q2,
}

/// Exact class decision via the index `[Z³ : ker(Q − I) ⊕ ker(Q² + Q + I)]`,
/// which is a similarity invariant equal to 1 for `Q₁` and 3 for `Q₂`.
///
/// `None` when `q` is not 3×3 with characteristic polynomial `λ³ − 1`.
pub fn q_class(q: &IntMatrix) -> Option<QClass> {
    if q.rows() != 3 || !q.is_square() {
        return None;
    }
    let want: Vec<BigInt> = [-1, 0, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
    if intlin::char_poly(q) != want {
        return None;
    }
    let id = IntMatrix::identity(3);
    let fixed = intlin::integer_kernel(&(q - &id));
    let q2 = q * q;
    let rot = intlin::integer_kernel(&(&(&q2 + q) + &id));
    if fixed.cols() != 1 || rot.cols() != 2 {
        return None;
    }
    let index = intlin::det(&fixed.hstack(&rot)).abs();
    if index == BigInt::one() {
        Some(QClass::Q1)
    } else if index == BigInt::from(3) {
        Some(QClass::Q2)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(SignedPermutation::all(2).count(), 8);
        assert_eq!(SignedPermutation::all(3).count(), 48);
        assert!(SignedPermutation::all(3).next().unwrap().is_identity());
        let distinct: HashSet<_> = SignedPermutation::all(3).collect();
        assert_eq!(distinct.len(), 48);
    }

    #[test]
    fn orthogonal_matrices() {
        for p in SignedPermutation::all(3) {
            let a = p.matrix();
            assert!((&a * &a.transpose()).is_identity());
            assert_eq!(SignedPermutation::from_matrix(&a).unwrap(), p);
            assert!(p.compose(&p.inverse()).is_identity());
            assert!(p.pow(p.order()).is_identity());
        }
    }

    #[test]
    fn compose_matches_product() {
        let all: Vec<_> = SignedPermutation::all(3).collect();
        for p in all.iter().step_by(5) {
            for q in all.iter().step_by(7) {
                assert_eq!(p.compose(q).matrix(), &p.matrix() * &q.matrix());
                let v = [2, -3, 5];
                assert_eq!(p.compose(q).apply(&v), p.apply(&q.apply(&v)));
            }
        }
    }

    #[test]
    fn scalar_matrix_keeps_everything() {
        let s = linear_stabilizer(&m(&[&[5, 0], &[0, 5]])).unwrap();
        assert_eq!(s.order(), 8);
        let s = linear_stabilizer(&m(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]])).unwrap();
        assert_eq!(s.order(), 48);
        for mem in &s.members {
            assert_eq!(mem.q, mem.p.matrix());
        }
    }

    #[test]
    fn swap_examples() {
        let s = linear_stabilizer(&m(&[&[3, 1], &[1, 3]])).unwrap();
        let swap = SignedPermutation::new(vec![1, 0], vec![1, 1]).unwrap();
        assert_eq!(s.find(&swap).unwrap().q, m(&[&[0, 1], &[1, 0]]));

        let s = linear_stabilizer(&m(&[&[6, 0], &[0, 2]])).unwrap();
        assert!(s.members.iter().all(|mem| mem.p.sigma()[0] == 0));
        assert!(!is_linearly_edge_transitive(&m(&[&[6, 0], &[0, 2]]))
            .unwrap()
            .transitive);
    }

    #[test]
    fn stabilizer_is_a_group() {
        for rows in [
            m(&[&[3, 1], &[1, 3]]),
            m(&[&[4, 0], &[0, 4]]),
            m(&[&[2, 0, 1], &[1, 2, 0], &[0, 1, 2]]),
        ] {
            let s = linear_stabilizer(&rows).unwrap();
            let n = rows.rows();
            assert!(s.contains(&SignedPermutation::identity(n)));
            assert!(s.contains(&SignedPermutation::diagonal(&vec![-1; n])));
            for a in &s.members {
                assert!(s.contains(&a.p.inverse()));
                for b in &s.members {
                    assert!(s.contains(&a.p.compose(&b.p)));
                }
            }
        }
    }

    #[test]
    fn linear_et_examples() {
        assert!(is_linearly_edge_transitive(&m(&[&[3, 1], &[1, 3]])).unwrap().transitive);
        assert!(!is_linearly_edge_transitive(&m(&[&[2, -1], &[0, 3]])).unwrap().transitive);
        let circ = m(&[&[2, 0, 1], &[1, 2, 0], &[0, 1, 2]]);
        let r = is_linearly_edge_transitive(&circ).unwrap();
        assert!(r.transitive);
        assert_eq!(dim3_order3_witness(&circ).unwrap().unwrap().matrix(), p_matrices()[0]);
    }

    #[test]
    fn order3_examples() {
        let mp = m(&[&[1, 1, 0], &[1, 0, -1], &[1, -1, 1]]);
        let p = dim3_order3_witness(&mp).unwrap().unwrap();
        assert_eq!(p.order(), 3);
        assert_eq!(dim3_order3_witness(&m(&[&[7, 0, 0], &[0, 3, 0], &[0, 0, 2]])).unwrap(), None);
        assert!(matches!(
            dim3_order3_witness(&m(&[&[1, 0], &[0, 1]])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn standard_cycles() {
        let one = BigInt::one();
        let want = vec![-one.clone(), BigInt::zero(), BigInt::zero(), one];
        for p in p_matrices() {
            assert!(p.pow(3).is_identity());
            assert_eq!(intlin::char_poly(&p), want);
            assert_eq!(q_class(&p), Some(QClass::Q2));
        }
        assert_eq!(q_class(&q1()), Some(QClass::Q1));
        assert_eq!(q_class(&q2()), Some(QClass::Q2));
        assert_eq!(q_class(&IntMatrix::identity(3)), None);
    }

    #[test]
    fn similarity_witnesses() {
        let a = q2();
        let b = m(&[&[1, 0, 2], &[0, -1, 1], &[0, -1, 0]]);
        let u = m(&[&[1, 0, 1], &[0, 0, 1], &[0, -1, 1]]);
        assert!(similarity_witness_check(&a, &b, &u).unwrap());
        let id = IntMatrix::identity(3);
        assert!(similarity_witness_check(&id, &id, &id).unwrap());
        let u = m(&[&[1, 0, 0], &[1, -1, 1], &[1, 0, 1]]);
        assert!(similarity_witness_check(&p_matrices()[0], &q2(), &u).unwrap());
        assert_eq!(
            similarity_witness_check(&id, &id, &m(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]])),
            Err(Error::NotUnimodular)
        );
    }

    #[test]
    fn bounded_search_examples() {
        assert_eq!(
            bounded_similarity_search(&q1(), &q2(), 5),
            SimilaritySearch::Undecided
        );
        let p1 = p_matrices()[0].clone();
        let u = bounded_similarity_search(&p1, &q2(), 2).witness().unwrap();
        assert!(similarity_witness_check(&p1, &q2(), &u).unwrap());
        assert_eq!(
            bounded_similarity_search(&q1(), &q1(), 1),
            SimilaritySearch::Found(IntMatrix::identity(3))
        );
    }
}
