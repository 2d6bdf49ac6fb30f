//! Arithmetic in the quotient group `Z^n / M Z^n`.
//!
//! Elements are represented by the unique vector in the box
//! `[0, h_00) × … × [0, h_{n-1,n-1})`, where `h` is the column Hermite form of
//! `M`. Because `h` is lower triangular, reducing coordinate `i` with column
//! `i` never disturbs coordinates `< i`, so canonicalization is a single
//! forward sweep.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intlin::{self, HermiteForm, IntMatrix, RationalInverse, SmithForm};

/// Default ceiling on the number of group elements that may be enumerated.
pub const DEFAULT_ENUMERATION_CAP: u64 = 20_000;

#[derive(Debug, Clone)]
pub struct QuotientGroup {
    m: IntMatrix,
    hermite: HermiteForm,
    smith: SmithForm,
    inverse: RationalInverse,
    order: BigInt,
    /// Hermite form as machine integers (entries are bounded by `order`).
    h: Vec<Vec<i128>>,
    strides: Vec<u128>,
}

/// Canonical representative of a coset `v + M Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct GroupElement {
    coords: Vec<i64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl QuotientGroup {
    pub fn new(m: &IntMatrix) -> Result<Self> {
        m.require_square()?;
        let inverse = RationalInverse::new(m)?;
        let order = inverse.det().abs();
        if order.to_i64().is_none() {
            return Err(Error::too_large("group order", order, i64::MAX as u64));
        }
        let hermite = intlin::hnf(m)?;
        let smith = intlin::snf(m)?;
        let n = m.rows();
        let h: Vec<Vec<i128>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| hermite.h[(i, j)].to_i128().expect("bounded by the order"))
                    .collect()
            })
            .collect();
        let mut strides = Vec::with_capacity(n);
        let mut acc: u128 = 1;
        for (i, row) in h.iter().enumerate() {
            strides.push(acc);
            acc *= row[i] as u128;
        }
        Ok(QuotientGroup {
            m: m.clone(),
            hermite,
            smith,
            inverse,
            order,
            h,
            strides,
        })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn hermite(&self) -> &HermiteForm {
        &self.hermite
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    /// Invariant factors larger than one.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.smith
            .d
            .iter()
            .filter(|d| *d > &BigInt::from(1))
            .cloned()
            .collect()
    }

    pub fn canonical(&self, v: &[i64]) -> GroupElement {
        assert_eq!(v.len(), self.dim(), "vector length must match dimension");
        let n = self.dim();
        let mut x: Vec<i128> = v.iter().map(|&c| c as i128).collect();
        for i in 0..n {
            let q = x[i].div_euclid(self.h[i][i]);
            if q != 0 {
                for (j, xj) in x.iter_mut().enumerate().skip(i) {
                    *xj -= q * self.h[j][i];
                }
            }
        }
        GroupElement {
            coords: x.into_iter().map(|c| c as i64).collect(),
        }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.dim()],
        }
    }

    /// Whether `v ∈ M Z^n`.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.inverse.solve(v).is_some()
    }

    /// `v ≡ w (mod M)`, decided by integral solvability of `M x = v − w`.
    pub fn congruent(&self, v: &[i64], w: &[i64]) -> bool {
        let diff: Vec<BigInt> = v
            .iter()
            .zip(w)
            .map(|(a, b)| BigInt::from(*a) - BigInt::from(*b))
            .collect();
        self.contains(&diff)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let s: Vec<i64> = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        self.canonical(&s)
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let s: Vec<i64> = a.coords.iter().map(|x| -x).collect();
        self.canonical(&s)
    }

    /// Position of `g` in the enumeration order of [`elements`](Self::elements).
    pub fn index_of(&self, g: &GroupElement) -> usize {
        g.coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as u128 * s)
            .sum::<u128>() as usize
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let coords = (0..self.dim())
            .map(|i| {
                let r = self.h[i][i] as usize;
                let c = idx % r;
                idx /= r;
                c as i64
            })
            .collect();
        GroupElement { coords }
    }

    pub fn elements(&self) -> Result<impl ExactSizeIterator<Item = GroupElement> + '_> {
        self.elements_capped(DEFAULT_ENUMERATION_CAP)
    }

    /// All `order` elements, the zero element first.
    pub fn elements_capped(
        &self,
        cap: u64,
    ) -> Result<impl ExactSizeIterator<Item = GroupElement> + '_> {
        let order = self.order_u64().filter(|&o| o <= cap).ok_or_else(|| {
            Error::too_large("group order", self.order.clone(), cap)
        })?;
        Ok((0..order as usize).map(move |i| self.element_at(i)))
    }

    pub(crate) fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }
}

/// Free description of a finite Abelian group `Z_{f1} × … × Z_{fk}` with a
/// list of generators. Parses from `Z6 x Z2 : [3,0],[1,1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractGroupSpec {
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<Vec<i64>>,
}

impl AbstractGroupSpec {
    pub fn new(invariant_factors: Vec<u64>, generators: Vec<Vec<i64>>) -> Result<Self> {
        if invariant_factors.is_empty() || invariant_factors.contains(&0) {
            return Err(Error::Degenerate(
                "invariant factors must be positive and non-empty".into(),
            ));
        }
        if generators.is_empty() {
            return Err(Error::Degenerate("at least one generator is required".into()));
        }
        let k = invariant_factors.len();
        if let Some(g) = generators.iter().find(|g| g.len() != k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: g.len(),
            });
        }
        let generators = generators
            .into_iter()
            .map(|g| {
                g.iter()
                    .zip(&invariant_factors)
                    .map(|(&c, &f)| c.rem_euclid(f as i64))
                    .collect()
            })
            .collect();
        Ok(AbstractGroupSpec {
            invariant_factors,
            generators,
        })
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        v.iter()
            .zip(&self.invariant_factors)
            .map(|(&c, &f)| c.rem_euclid(f as i64))
            .collect()
    }

    /// Mixed-radix index of a reduced element, first factor least significant.
    pub fn index_of(&self, v: &[i64]) -> usize {
        let mut idx = 0usize;
        for (&c, &f) in v.iter().zip(&self.invariant_factors).rev() {
            idx = idx * f as usize + c as usize;
        }
        idx
    }

    pub fn element_at(&self, mut idx: usize) -> Vec<i64> {
        self.invariant_factors
            .iter()
            .map(|&f| {
                let c = idx % f as usize;
                idx /= f as usize;
                c as i64
            })
            .collect()
    }

    fn scaled(&self, g: &[i64], t: i64) -> Vec<i64> {
        self.reduce(&g.iter().map(|c| c * t).collect::<Vec<_>>())
    }
}

impl FromStr for AbstractGroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(1, 1, "expected `factors : generators`"))?;
        let mut factors = Vec::new();
        for part in head.split(['x', '×', '*']) {
            let part = part.trim();
            let digits = part
                .strip_prefix('Z')
                .or_else(|| part.strip_prefix('z'))
                .ok_or_else(|| Error::parse(1, 1, format!("expected `Z<n>`, found `{part}`")))?;
            let f = digits
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::parse(1, 1, format!("invalid factor `{part}`")))?;
            factors.push(f);
        }
        let col0 = head.chars().count() + 2;
        let gens = parse_generators(tail, factors.len(), col0)?;
        AbstractGroupSpec::new(factors, gens)
    }
}

fn parse_generators(s: &str, k: usize, col0: usize) -> Result<Vec<Vec<i64>>> {
    let s = s.trim();
    if !s.contains('[') {
        // Bare integers are allowed for cyclic groups: `Z6 : 3, 1`.
        if k != 1 {
            return Err(Error::parse(1, col0, "generators must be bracketed vectors"));
        }
        return s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map(|v| vec![v])
                    .map_err(|_| Error::parse(1, col0, format!("invalid generator `{t}`")))
            })
            .collect();
    }
    let mut out = Vec::new();
    let mut rest = s;
    while let Some(open) = rest.find('[') {
        let close = rest[open..]
            .find(']')
            .map(|c| c + open)
            .ok_or_else(|| Error::parse(1, col0 + open, "unclosed `[`"))?;
        let body = &rest[open + 1..close];
        let v = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::parse(1, col0 + open, format!("invalid entry `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(v);
        rest = &rest[close + 1..];
    }
    Ok(out)
}

/// Matrix `M` with `Cay(Γ; ±{g_i}) ≅ G(M)` under `g_i ↦ e_i`.
///
/// Built one generator at a time: `M₁ = (o(g₁))`, then for `g_i` the smallest
/// `a > 0` with `a·g_i` in the span of the earlier generators, and the column
/// `(y; a)` where `y` is the box-reduced solution of `Σ y_j g_j + a·g_i = 0`.
/// The result is upper triangular.
pub fn matrix_from_group(spec: &AbstractGroupSpec) -> Result<IntMatrix> {
    matrix_from_group_capped(spec, DEFAULT_ENUMERATION_CAP)
}

pub fn matrix_from_group_capped(spec: &AbstractGroupSpec, cap: u64) -> Result<IntMatrix> {
    let order = spec.order();
    if order > cap {
        return Err(Error::too_large("group order", order, cap));
    }
    let n = spec.generators.len();
    let k = spec.invariant_factors.len();
    let zero = vec![0i64; k];

    // Span of the generators processed so far, element -> box coordinates.
    let mut span: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
    span.insert(zero.clone(), Vec::new());
    let mut columns: Vec<Vec<i64>> = Vec::with_capacity(n);

    for (i, g) in spec.generators.iter().enumerate() {
        let mut a = 1i64;
        let y = loop {
            let target = spec.scaled(g, -a);
            if let Some(y) = span.get(&target) {
                break y.clone();
            }
            a += 1;
            debug_assert!(a as u64 <= order);
        };
        let mut col = y;
        col.push(a);
        debug_assert_eq!(col.len(), i + 1);
        columns.push(col);

        let mut grown = HashMap::with_capacity(span.len() * a as usize);
        for (elem, coords) in &span {
            for t in 0..a {
                let e = spec.reduce(
                    &elem
                        .iter()
                        .zip(g)
                        .map(|(x, gi)| x + t * gi)
                        .collect::<Vec<_>>(),
                );
                let mut c = coords.clone();
                c.push(t);
                grown.insert(e, c);
            }
        }
        span = grown;
    }

    if span.len() as u64 != order {
        return Err(Error::NotGenerating {
            spanned: span.len().into(),
            order: order.into(),
        });
    }
    Ok(IntMatrix::from_fn(n, n, |r, c| {
        BigInt::from(columns[c].get(r).copied().unwrap_or(0))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn canonical_examples() {
        let g = QuotientGroup::new(&m(&[&[4, 0], &[0, 4]])).unwrap();
        assert_eq!(g.canonical(&[5, 1]).coords(), &[1, 1]);
        assert_eq!(g.canonical(&[-1, 9]).coords(), &[3, 1]);
        assert!(g.canonical(&[0, 0]).is_zero());

        let g = QuotientGroup::new(&m(&[&[2, -1], &[0, 3]])).unwrap();
        assert_eq!(g.canonical(&[1, 0]), g.canonical(&[0, 3]));
        assert!(g.canonical(&[2, 0]).is_zero());
        assert!(g.canonical(&[0, 0]).is_zero());
    }

    #[test]
    fn congruence_examples() {
        let g = QuotientGroup::new(&m(&[&[4, 0], &[0, 4]])).unwrap();
        assert!(g.congruent(&[5, 1], &[1, 1]));
        assert!(!g.congruent(&[2, 0], &[0, 0]));
        let g = QuotientGroup::new(&m(&[&[2, -1], &[0, 3]])).unwrap();
        assert!(g.congruent(&[2, 0], &[0, 0]));
        assert!(g.congruent(&[1, 0], &[0, 3]));
    }

    #[test]
    fn element_counts() {
        for (rows, want) in [
            (m(&[&[2, 0], &[0, 2]]), 4),
            (m(&[&[2, -1], &[0, 3]]), 6),
            (m(&[&[4, 0], &[0, 4]]), 16),
        ] {
            let g = QuotientGroup::new(&rows).unwrap();
            let all: Vec<_> = g.elements().unwrap().collect();
            assert_eq!(all.len(), want);
            let distinct: std::collections::HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), want);
            for (i, e) in all.iter().enumerate() {
                assert_eq!(g.index_of(e), i);
                assert_eq!(&g.canonical(e.coords()), e);
            }
        }
    }

    #[test]
    fn enumeration_cap() {
        let g = QuotientGroup::new(&m(&[&[200, 0], &[0, 200]])).unwrap();
        assert!(matches!(g.elements(), Err(Error::TooLarge { .. })));
        assert_eq!(g.elements_capped(40_000).unwrap().count(), 40_000);
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(
            QuotientGroup::new(&m(&[&[1, 2], &[2, 4]])).err(),
            Some(Error::SingularMatrix)
        );
    }

    #[test]
    fn group_to_matrix_examples() {
        let s: AbstractGroupSpec = "Z4 : [1]".parse().unwrap();
        assert_eq!(matrix_from_group(&s).unwrap(), m(&[&[4]]));

        let s: AbstractGroupSpec = "Z6 : [3],[1]".parse().unwrap();
        let mm = matrix_from_group(&s).unwrap();
        assert_eq!(mm, m(&[&[2, 1], &[0, 3]]));
        assert_eq!(intlin::det(&mm), 6.into());

        let s: AbstractGroupSpec = "Z2 x Z2 : [1,0],[0,1]".parse().unwrap();
        assert_eq!(matrix_from_group(&s).unwrap(), m(&[&[2, 0], &[0, 2]]));
    }

    #[test]
    fn group_to_matrix_relations_hold() {
        let s: AbstractGroupSpec = "Z6 x Z2 : [3,0],[1,1],[2,1]".parse().unwrap();
        let mm = matrix_from_group(&s).unwrap();
        assert_eq!(intlin::det(&mm).abs(), 12.into());
        // every column is a relation among the generators
        for c in 0..3 {
            let mut acc = vec![0i64; 2];
            for r in 0..3 {
                let coef = mm[(r, c)].to_i64().unwrap();
                for (a, g) in acc.iter_mut().zip(&s.generators[r]) {
                    *a += coef * g;
                }
            }
            assert_eq!(s.reduce(&acc), vec![0, 0]);
        }
    }

    #[test]
    fn not_generating() {
        let s: AbstractGroupSpec = "Z6 x Z2 : [2,0],[0,1]".parse().unwrap();
        assert!(matches!(
            matrix_from_group(&s),
            Err(Error::NotGenerating { .. })
        ));
    }

    #[test]
    fn spec_parsing() {
        let s: AbstractGroupSpec = "Z6 x Z2 : [3,0],[1,1]".parse().unwrap();
        assert_eq!(s.invariant_factors, vec![6, 2]);
        assert_eq!(s.generators, vec![vec![3, 0], vec![1, 1]]);
        let s: AbstractGroupSpec = "Z5 : 1, 2".parse().unwrap();
        assert_eq!(s.generators, vec![vec![1], vec![2]]);
        assert!("Z6 x Q2 : [1,0]".parse::<AbstractGroupSpec>().is_err());
        assert!("Z6 x Z2 : [1]".parse::<AbstractGroupSpec>().is_err());
        assert!("Z6".parse::<AbstractGroupSpec>().is_err());
    }

    #[test]
    fn zero_is_first() {
        let g = QuotientGroup::new(&m(&[&[3, 1], &[1, 2]])).unwrap();
        assert!(g.elements().unwrap().next().unwrap().is_zero());
    }
}
