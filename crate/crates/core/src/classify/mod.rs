//! Decision procedures for the linearly edge-transitive families in
//! dimensions 2 and 3, the 4-cycle taxonomy, full reports and scans.

pub mod families;
mod report;
mod scan;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::cayley::{self, FourCycleRelation, FourCycleShape};
use crate::error::{Error, Result};
use crate::intlin::{self, IntMatrix, RationalInverse};
use crate::linaut::{
    self, LinearStabilizer, QClass, SignedPermutation, SimilaritySearch, DEFAULT_SIMILARITY_BOUND,
};

pub use report::{full_report, Certificates, ClassificationReport, ReportOptions, Verdict};
pub use scan::{dedup_isomorphic, hnf_classes, scan, scan_each, ScanSummary};

/// Escalated entry bound for the similarity certificate.
pub const ESCALATED_SIMILARITY_BOUND: i64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyTag {
    #[serde(rename = "Dim2-M1")]
    Dim2M1,
    #[serde(rename = "Dim2-M2")]
    Dim2M2,
    #[serde(rename = "Dim2-M3")]
    Dim2M3,
    #[serde(rename = "Dim3-M1")]
    Dim3M1,
    #[serde(rename = "Dim3-M1prime")]
    Dim3M1Prime,
    None,
}

impl FamilyTag {
    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Dim2M1 => "Dim2-M1",
            FamilyTag::Dim2M2 => "Dim2-M2",
            FamilyTag::Dim2M3 => "Dim2-M3",
            FamilyTag::Dim3M1 => "Dim3-M1",
            FamilyTag::Dim3M1Prime => "Dim3-M1prime",
            FamilyTag::None => "None",
        }
    }

    /// The canonical matrix of this family at the given parameters.
    pub fn instantiate(self, p: &[i64]) -> Option<IntMatrix> {
        use families::*;
        Some(match (self, p) {
            (FamilyTag::Dim2M1, &[a, b]) => dim2_m1(a, b),
            (FamilyTag::Dim2M2, &[a, b]) => dim2_m2(a, b),
            (FamilyTag::Dim2M3, &[a, b]) => dim2_m3(a, b),
            (FamilyTag::Dim3M1, &[a, b, c]) => dim3_m1(a, b, c),
            (FamilyTag::Dim3M1Prime, &[a, b, c]) => dim3_m1_prime(a, b, c),
            _ => return None,
        })
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Evidence from the order-3 symmetry in dimension 3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Dim3Evidence {
    pub order3_witness: SignedPermutation,
    /// `M⁻¹·P·M` for the witness.
    pub q: IntMatrix,
    pub q_class: Option<QClass>,
    /// `U` with `Q·U = U·R`, `R` the class representative, when found within
    /// the escalated bound.
    pub similarity_witness: Option<IntMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalFamily {
    pub tag: FamilyTag,
    pub parameters: Vec<i64>,
    /// `U` with `S·M·U` equal to the instantiated form.
    pub witness_unimodular: Option<IntMatrix>,
    /// Signed permutation `S` applied on the left; absent means identity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left_witness: Option<SignedPermutation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim3: Option<Dim3Evidence>,
}

impl CanonicalFamily {
    fn none() -> Self {
        CanonicalFamily {
            tag: FamilyTag::None,
            parameters: Vec::new(),
            witness_unimodular: None,
            left_witness: None,
            dim3: None,
        }
    }

    pub fn is_none(&self) -> bool {
        self.tag == FamilyTag::None
    }

    pub fn canonical(&self) -> Option<IntMatrix> {
        self.tag.instantiate(&self.parameters)
    }

    /// Rechecks `S·M·U == F(params)` with `U` unimodular.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let (Some(f), Some(u)) = (self.canonical(), &self.witness_unimodular) else {
            return self.is_none();
        };
        let sm = match &self.left_witness {
            Some(s) => &s.matrix() * m,
            None => m.clone(),
        };
        intlin::is_unimodular(u) && &sm * u == f
    }
}

fn require_dim(m: &IntMatrix, n: usize) -> Result<BigInt> {
    let k = m.require_square()?;
    if k != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: k,
        });
    }
    let d = intlin::det(m);
    if d.sign() == num_bigint::Sign::NoSign {
        return Err(Error::SingularMatrix);
    }
    Ok(d.abs())
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn param_key(p: &[i64]) -> (i64, Vec<bool>, Vec<i64>) {
    (
        p.iter().map(|x| x.abs()).sum(),
        p.iter().map(|&x| x < 0).collect(),
        p.to_vec(),
    )
}

fn sorted_unique(mut v: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    v.sort_by_key(|p| param_key(p));
    v.dedup();
    v
}

/// `(a, b)` with `a² − b² = ±d`.
fn dim2_m1_params(d: u64) -> Vec<Vec<i64>> {
    let d = d as i64;
    let mut out = Vec::new();
    for u in divisors(d as u64) {
        let u = u as i64;
        let v = d / u;
        for (x, y) in [(u, v), (u, -v), (-u, v), (-u, -v)] {
            // x = a − b, y = a + b
            if (x + y) % 2 == 0 {
                out.push(vec![(x + y) / 2, (y - x) / 2]);
            }
        }
    }
    sorted_unique(out)
}

/// `(a, b)` with `a² + b² = d`.
fn dim2_m2_params(d: u64) -> Vec<Vec<i64>> {
    let d = d as i64;
    let mut out = Vec::new();
    let mut a = 0;
    while a * a <= d {
        let r = d - a * a;
        let b = r.sqrt();
        if b * b == r {
            for (x, y) in [(a, b), (a, -b), (-a, b), (-a, -b)] {
                out.push(vec![x, y]);
            }
        }
        a += 1;
    }
    sorted_unique(out)
}

/// `(a, b)` with `2ab = ±d`.
fn dim2_m3_params(d: u64) -> Vec<Vec<i64>> {
    if d % 2 == 1 {
        return Vec::new();
    }
    let h = (d / 2) as i64;
    let mut out = Vec::new();
    for u in divisors(h as u64) {
        let u = u as i64;
        let v = h / u;
        for (x, y) in [(u, v), (u, -v), (-u, v), (-u, -v)] {
            out.push(vec![x, y]);
        }
    }
    sorted_unique(out)
}

/// `(a, b, c)` with `det dim3_m1(a,b,c) = ±d`.
fn dim3_m1_params(d: u64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for q in divisors(d) {
        let q = q as i64;
        let s_abs = d as i64 / q;
        let r = (2 * q).sqrt() + 1;
        for d1 in -r..=r {
            let disc = 4 * q - 3 * d1 * d1;
            if disc < 0 {
                continue;
            }
            let sq = disc.sqrt();
            if sq * sq != disc {
                continue;
            }
            for d2 in [(-d1 + sq) / 2, (-d1 - sq) / 2] {
                if d1 * d1 + d1 * d2 + d2 * d2 != q {
                    continue;
                }
                for s in [s_abs, -s_abs] {
                    let num = s - d1 + d2;
                    if num % 3 != 0 {
                        continue;
                    }
                    let b = num / 3;
                    out.push(vec![b + d1, b, b - d2]);
                }
            }
        }
    }
    out.retain(|p| families::dim3_m1_det(p[0], p[1], p[2]).unsigned_abs() == d as u128);
    sorted_unique(out)
}

/// `(a, b, c)` with `det dim3_m1_prime(a,b,c) = ±d`.
fn dim3_m1_prime_params(d: u64) -> Vec<Vec<i64>> {
    if !d.is_multiple_of(3) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for a_abs in divisors(d / 3) {
        let r = (d / 3 / a_abs) as i64;
        let bound = (4 * r / 3).sqrt() + 1;
        for b in -bound..=bound {
            let disc = 4 * r - 3 * b * b;
            if disc < 0 {
                continue;
            }
            let sq = disc.sqrt();
            if sq * sq != disc {
                continue;
            }
            for c in [(-b + sq) / 2, (-b - sq) / 2] {
                if b * b + b * c + c * c == r {
                    for a in [a_abs as i64, -(a_abs as i64)] {
                        out.push(vec![a, b, c]);
                    }
                }
            }
        }
    }
    out.retain(|p| families::dim3_m1_prime_det(p[0], p[1], p[2]).unsigned_abs() == d as u128);
    sorted_unique(out)
}

fn magnitude_u64(d: &BigInt) -> Result<u64> {
    d.to_u64().ok_or(Error::Overflow("determinant does not fit in 64 bits"))
}

/// Tries `F(params)` against `targets` (left multipliers and the Hermite forms
/// of `S·M`), smallest parameters first.
fn recover(
    m: &IntMatrix,
    tag: FamilyTag,
    candidates: &[Vec<i64>],
    targets: &[(Option<SignedPermutation>, IntMatrix)],
) -> Result<Option<CanonicalFamily>> {
    for (s, h) in targets {
        for p in candidates {
            let f = tag.instantiate(p).expect("parameter arity matches family");
            if &intlin::hnf(&f)?.h != h {
                continue;
            }
            let sm = match s {
                Some(s) => &s.matrix() * m,
                None => m.clone(),
            };
            let u = RationalInverse::new(&sm)?
                .apply_integral(&f)
                .integral()
                .expect("equal Hermite forms imply an integral transform");
            return Ok(Some(CanonicalFamily {
                tag,
                parameters: p.clone(),
                witness_unimodular: Some(u),
                left_witness: s.clone(),
                dim3: None,
            }));
        }
    }
    Ok(None)
}

fn direct(m: &IntMatrix, tag: FamilyTag, params: Vec<i64>) -> Option<CanonicalFamily> {
    let f = tag.instantiate(&params)?;
    (&f == m).then(|| CanonicalFamily {
        tag,
        parameters: params,
        witness_unimodular: Some(IntMatrix::identity(m.rows())),
        left_witness: None,
        dim3: None,
    })
}

/// Right-equivalence to `M1(a,b) = [[a,b],[b,a]]`, `M2(a,b) = [[a,-b],[b,a]]`
/// or `M3(a,b) = [[a,-b],[a,b]]`.
///
/// The search is exact: every `(a, b)` whose form has the right determinant
/// is compared by Hermite form. It does not consult the linear stabilizer,
/// so agreement with [`linaut::is_linearly_edge_transitive`] is a genuine
/// cross-check.
pub fn classify_dim2(m: &IntMatrix) -> Result<CanonicalFamily> {
    let d = magnitude_u64(&require_dim(m, 2)?)?;
    if let Some(r) = m.to_i64_rows() {
        let [[a, b], [c, e]] = [[r[0][0], r[0][1]], [r[1][0], r[1][1]]];
        let tries = [
            (FamilyTag::Dim2M1, a == e && b == c, vec![a, b]),
            (FamilyTag::Dim2M2, a == e && b == -c, vec![a, c]),
            (FamilyTag::Dim2M3, a == c && b == -e, vec![a, e]),
        ];
        for (tag, ok, p) in tries {
            if ok {
                if let Some(f) = direct(m, tag, p) {
                    return Ok(f);
                }
            }
        }
    }
    let targets = [(None, intlin::hnf(m)?.h)];
    for (tag, cands) in [
        (FamilyTag::Dim2M1, dim2_m1_params(d)),
        (FamilyTag::Dim2M2, dim2_m2_params(d)),
        (FamilyTag::Dim2M3, dim2_m3_params(d)),
    ] {
        if let Some(f) = recover(m, tag, &cands, &targets)? {
            return Ok(f);
        }
    }
    Ok(CanonicalFamily::none())
}

/// Graph isomorphism (left signed permutation, right unimodular) to
/// `dim3_m1(a,b,c)` or `dim3_m1_prime(a,b,c)`.
pub fn classify_dim3(m: &IntMatrix) -> Result<CanonicalFamily> {
    require_dim(m, 3)?;
    classify_dim3_with(m, &linaut::linear_stabilizer(m)?)
}

pub fn classify_dim3_with(m: &IntMatrix, laut: &LinearStabilizer) -> Result<CanonicalFamily> {
    let d = magnitude_u64(&require_dim(m, 3)?)?;
    let evidence = dim3_evidence(laut);
    let order = match evidence.as_ref().and_then(|e| e.q_class) {
        Some(QClass::Q1) => [FamilyTag::Dim3M1Prime, FamilyTag::Dim3M1],
        _ => [FamilyTag::Dim3M1, FamilyTag::Dim3M1Prime],
    };

    let mut found = None;
    if let Some(r) = m.to_i64_rows() {
        for tag in order {
            let p = match tag {
                FamilyTag::Dim3M1 => vec![r[0][0], r[1][0], r[2][0]],
                _ => r[0].clone(),
            };
            if let Some(f) = direct(m, tag, p) {
                found = Some(f);
                break;
            }
        }
    }
    if found.is_none() {
        let mut targets = vec![(None, intlin::hnf(m)?.h)];
        for s in SignedPermutation::all(3).skip(1) {
            targets.push((Some(s.clone()), intlin::hnf(&(&s.matrix() * m))?.h));
        }
        'outer: for stage in [&targets[..1], &targets[1..]] {
            for tag in order {
                let cands = match tag {
                    FamilyTag::Dim3M1 => dim3_m1_params(d),
                    _ => dim3_m1_prime_params(d),
                };
                if let Some(f) = recover(m, tag, &cands, stage)? {
                    found = Some(f);
                    break 'outer;
                }
            }
        }
    }
    let mut fam = found.unwrap_or_else(CanonicalFamily::none);
    fam.dim3 = evidence;
    Ok(fam)
}

fn dim3_evidence(laut: &LinearStabilizer) -> Option<Dim3Evidence> {
    let p = linaut::order3_in(laut)?;
    let q = laut.find(&p)?.q.clone();
    let q_class = linaut::q_class(&q);
    let rep = match q_class {
        Some(QClass::Q1) => linaut::q1(),
        _ => linaut::q2(),
    };
    let similarity_witness = [DEFAULT_SIMILARITY_BOUND, ESCALATED_SIMILARITY_BOUND]
        .into_iter()
        .find_map(|b| match linaut::bounded_similarity_search(&q, &rep, b) {
            SimilaritySearch::Found(u) => Some(u),
            SimilaritySearch::Undecided => None,
        });
    Some(Dim3Evidence {
        order3_witness: p,
        q,
        q_class,
        similarity_witness,
    })
}

/// Column of the candidate set `C` lying in `M Z²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CMember {
    pub column: [i64; 2],
    #[serde(serialize_with = "crate::intlin::serialize_bigints")]
    pub witness: Vec<BigInt>,
}

/// Columns whose pairs generate every two-dimensional lattice with several
/// nontrivial 4-cycles.
pub const C_COLUMNS: [[i64; 2]; 8] = [
    [4, 0],
    [3, 1],
    [1, 3],
    [0, 4],
    [3, -1],
    [1, -3],
    [2, 0],
    [0, 2],
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FourCycleTaxonomy {
    /// Nontrivial relations up to sign, counted by shape.
    pub counts: BTreeMap<FourCycleShape, usize>,
    pub relations: Vec<FourCycleRelation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_members: Option<Vec<CMember>>,
}

impl FourCycleTaxonomy {
    pub fn nontrivial(&self) -> usize {
        self.relations.len()
    }

    pub fn count(&self, shape: FourCycleShape) -> usize {
        self.counts.get(&shape).copied().unwrap_or(0)
    }
}

pub fn fourcycle_case_taxonomy(m: &IntMatrix) -> Result<FourCycleTaxonomy> {
    let relations = cayley::nontrivial_relations(m)?;
    let mut counts = BTreeMap::new();
    for r in &relations {
        *counts.entry(r.shape).or_insert(0) += 1;
    }
    let c_members = if m.rows() == 2 {
        let inv = RationalInverse::new(m)?;
        Some(
            C_COLUMNS
                .iter()
                .filter_map(|c| {
                    let k = [BigInt::from(c[0]), BigInt::from(c[1])];
                    inv.solve(&k).map(|witness| CMember {
                        column: *c,
                        witness,
                    })
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(FourCycleTaxonomy {
        counts,
        relations,
        c_members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn dim2_examples() {
        let f = classify_dim2(&m(&[&[3, 1], &[1, 3]])).unwrap();
        assert_eq!((f.tag, f.parameters.clone()), (FamilyTag::Dim2M1, vec![3, 1]));
        assert!(f.witness_unimodular.as_ref().unwrap().is_identity());
        assert!(f.verify(&m(&[&[3, 1], &[1, 3]])));

        let f = classify_dim2(&m(&[&[3, -1], &[1, 3]])).unwrap();
        assert_eq!((f.tag, f.parameters), (FamilyTag::Dim2M2, vec![3, 1]));

        assert!(classify_dim2(&m(&[&[6, 0], &[0, 2]])).unwrap().is_none());
    }

    #[test]
    fn dim2_recovers_through_right_equivalence() {
        let base = families::dim2_m3(2, 3);
        let u = m(&[&[2, 1], &[1, 1]]);
        let mu = &base * &u;
        let f = classify_dim2(&mu).unwrap();
        assert!(!f.is_none());
        assert!(f.verify(&mu));
    }

    #[test]
    fn dim3_examples() {
        let circ = m(&[&[2, 0, 1], &[1, 2, 0], &[0, 1, 2]]);
        let f = classify_dim3(&circ).unwrap();
        assert_eq!((f.tag, f.parameters.clone()), (FamilyTag::Dim3M1, vec![2, 1, 0]));
        assert_eq!(f.dim3.as_ref().unwrap().q_class, Some(QClass::Q2));
        assert!(f.verify(&circ));

        let mp = m(&[&[1, 1, 0], &[1, 0, -1], &[1, -1, 1]]);
        let f = classify_dim3(&mp).unwrap();
        assert_eq!((f.tag, f.parameters.clone()), (FamilyTag::Dim3M1Prime, vec![1, 1, 0]));
        assert_eq!(f.dim3.as_ref().unwrap().q_class, Some(QClass::Q1));

        let f = classify_dim3(&m(&[&[7, 0, 0], &[0, 3, 0], &[0, 0, 2]])).unwrap();
        assert!(f.is_none());
        assert!(f.dim3.is_none());
    }

    #[test]
    fn dim3_recovery_after_scrambling() {
        let f0 = families::dim3_m1_prime(2, 1, 1);
        let s = SignedPermutation::new(vec![2, 0, 1], vec![1, -1, 1]).unwrap();
        let u = m(&[&[1, 2, 0], &[0, 1, 0], &[0, 1, 1]]);
        let scrambled = &(&s.matrix() * &f0) * &u;
        let f = classify_dim3(&scrambled).unwrap();
        assert_eq!(f.tag, FamilyTag::Dim3M1Prime);
        assert!(f.verify(&scrambled));
    }

    #[test]
    fn parameter_generators_are_exact() {
        for d in 1..=60u64 {
            for p in dim2_m1_params(d) {
                assert_eq!((p[0] * p[0] - p[1] * p[1]).unsigned_abs(), d);
            }
            for p in dim2_m2_params(d) {
                assert_eq!((p[0] * p[0] + p[1] * p[1]) as u64, d);
            }
            for p in dim2_m3_params(d) {
                assert_eq!((2 * p[0] * p[1]).unsigned_abs(), d);
            }
        }
        // every small instance is produced by the generator of its determinant
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                for c in -4i64..=4 {
                    let d = families::dim3_m1_det(a, b, c).unsigned_abs() as u64;
                    if d > 0 {
                        assert!(dim3_m1_params(d).contains(&vec![a, b, c]), "{a} {b} {c}");
                    }
                    let d = families::dim3_m1_prime_det(a, b, c).unsigned_abs() as u64;
                    if d > 0 {
                        assert!(dim3_m1_prime_params(d).contains(&vec![a, b, c]));
                    }
                }
            }
        }
    }

    #[test]
    fn taxonomy_examples() {
        let t = fourcycle_case_taxonomy(&m(&[&[4, 0], &[0, 4]])).unwrap();
        assert_eq!(t.count(FourCycleShape::FourA), 2);
        let cols: Vec<_> = t.c_members.unwrap().iter().map(|c| c.column).collect();
        assert_eq!(cols, vec![[4, 0], [0, 4]]);

        let t = fourcycle_case_taxonomy(&m(&[&[3, 1], &[1, 2]])).unwrap();
        assert!(t.count(FourCycleShape::ThreeAB) >= 1);

        let t = fourcycle_case_taxonomy(&m(&[&[5, 0], &[0, 7]])).unwrap();
        assert_eq!(t.nontrivial(), 0);
        assert!(t.c_members.unwrap().is_empty());
    }
}
