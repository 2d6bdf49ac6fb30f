//! The graphs `G(M) = Cay(Z^n / M Z^n; ±e_1, …, ±e_n)` and their 4-cycles.

use std::fmt;
use std::fmt::Write as _;

use itertools::Itertools;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::abelian::{AbstractGroupSpec, GroupElement, QuotientGroup, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::intlin::{IntMatrix, RationalInverse};

/// How coincident generators are treated.
///
/// `Simple` keeps one edge per adjacent pair and drops loops. `Multigraph`
/// keeps one adjacency entry per signed generator, so every vertex has
/// degree `2n`, with parallel edges when `e_i ≡ -e_i` or `e_i ≡ ±e_j`, and
/// a loop (listed twice) when `e_i ≡ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum View {
    #[default]
    Simple,
    Multigraph,
}

impl std::str::FromStr for View {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simple" => Ok(View::Simple),
            "multigraph" | "multi" => Ok(View::Multigraph),
            other => Err(Error::parse(1, 1, format!("unknown view `{other}`"))),
        }
    }
}

impl fmt::Display for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            View::Simple => "simple",
            View::Multigraph => "multigraph",
        })
    }
}

/// One of `±e_1, …, ±e_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub axis: usize,
    pub positive: bool,
}

impl Generator {
    /// Signed generators in the order `+e_1, -e_1, +e_2, …`.
    pub fn all(n: usize) -> impl Iterator<Item = Generator> {
        (0..2 * n).map(Generator::from_slot)
    }

    pub(crate) fn from_slot(t: usize) -> Generator {
        Generator {
            axis: t / 2,
            positive: t.is_multiple_of(2),
        }
    }

    pub(crate) fn slot(self) -> usize {
        2 * self.axis + usize::from(!self.positive)
    }

    pub fn sign(self) -> i64 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    pub fn negated(self) -> Generator {
        Generator {
            axis: self.axis,
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}e{}", if self.positive { '+' } else { '-' }, self.axis + 1)
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone)]
pub struct CayleyGraph {
    group: QuotientGroup,
    view: View,
    /// `steps[v * 2n + slot]` is the neighbor of `v` along that generator.
    steps: Vec<u32>,
    graph: Graph,
}

impl CayleyGraph {
    pub fn build(m: &IntMatrix, view: View) -> Result<Self> {
        Self::build_capped(m, view, DEFAULT_ENUMERATION_CAP)
    }

    pub fn build_capped(m: &IntMatrix, view: View, cap: u64) -> Result<Self> {
        let group = QuotientGroup::new(m)?;
        let n = group.dim();
        let order = group.elements_capped(cap)?.len();
        let mut steps = Vec::with_capacity(order * 2 * n);
        for (v, g) in group.elements_capped(cap)?.enumerate() {
            debug_assert_eq!(group.index_of(&g), v);
            let mut x = g.coords().to_vec();
            for t in Generator::all(n) {
                x[t.axis] += t.sign();
                steps.push(group.index_of(&group.canonical(&x)) as u32);
                x[t.axis] -= t.sign();
            }
        }
        let mut cg = CayleyGraph {
            group,
            view,
            steps,
            graph: Graph::from_adjacency(Vec::new()),
        };
        cg.graph = cg.adjacency(view);
        Ok(cg)
    }

    fn adjacency(&self, view: View) -> Graph {
        let width = 2 * self.dim();
        let adj = self
            .steps
            .chunks(width)
            .enumerate()
            .map(|(v, row)| match view {
                View::Multigraph => row.to_vec(),
                View::Simple => row
                    .iter()
                    .copied()
                    .filter(|&w| w as usize != v)
                    .sorted_unstable()
                    .dedup()
                    .collect(),
            })
            .collect();
        Graph::from_adjacency(adj)
    }

    pub fn group(&self) -> &QuotientGroup {
        &self.group
    }

    pub fn matrix(&self) -> &IntMatrix {
        self.group.matrix()
    }

    pub fn view(&self) -> View {
        self.view
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    pub fn order(&self) -> usize {
        self.steps.len() / (2 * self.dim()).max(1)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The same Cayley graph seen through the other view.
    pub fn with_view(&self, view: View) -> CayleyGraph {
        CayleyGraph {
            group: self.group.clone(),
            view,
            steps: self.steps.clone(),
            graph: self.adjacency(view),
        }
    }

    pub fn step(&self, v: u32, t: Generator) -> u32 {
        self.steps[v as usize * 2 * self.dim() + t.slot()]
    }

    /// Neighbors of `v` together with the generator that reaches them.
    pub fn labeled_neighbors(&self, v: u32) -> impl Iterator<Item = (u32, Generator)> + '_ {
        Generator::all(self.dim()).map(move |t| (self.step(v, t), t))
    }

    pub fn vertex(&self, coords: &[i64]) -> u32 {
        self.group.index_of(&self.group.canonical(coords)) as u32
    }

    pub fn element(&self, v: u32) -> GroupElement {
        self.group.element_at(v as usize)
    }

    /// Degree of the simple graph underlying `G(M)`.
    pub fn degree_simple(&self) -> usize {
        if self.order() == 0 {
            return 0;
        }
        self.labeled_neighbors(0)
            .map(|(w, _)| w)
            .filter(|&w| w != 0)
            .unique()
            .count()
    }

    /// Some `e_i ≡ 0`, so the simple view loses a generator entirely.
    pub fn has_zero_generator(&self) -> bool {
        (0..self.dim()).any(|i| self.step(0, Generator::from_slot(2 * i)) == 0)
    }

    pub fn common_neighborhood(&self, vs: &[u32]) -> std::collections::BTreeSet<u32> {
        self.graph.common_neighborhood(vs)
    }

    /// One line per edge: `u v gen (coords of u) (coords of v)`.
    ///
    /// The multigraph view lists every `+e_i` step, so parallel edges and loops
    /// appear with their multiplicity. The simple view lists each adjacent
    /// pair once, labeled by its first generator.
    pub fn edge_dump(&self) -> String {
        let mut out = String::new();
        let mut seen = std::collections::HashSet::new();
        for u in 0..self.order() as u32 {
            for axis in 0..self.dim() {
                let t = Generator {
                    axis,
                    positive: true,
                };
                let v = self.step(u, t);
                if self.view == View::Simple && (u == v || !seen.insert((u.min(v), u.max(v)))) {
                    continue;
                }
                let _ = writeln!(out, "{u} {v} {t} {} {}", self.element(u), self.element(v));
            }
        }
        out
    }
}

/// Shape of a relation `a + b + c + d ≡ 0` among signed generators, named by
/// the multiset of absolute coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FourCycleShape {
    #[serde(rename = "4a")]
    FourA,
    #[serde(rename = "3a+b")]
    ThreeAB,
    #[serde(rename = "2a+2b")]
    TwoATwoB,
    #[serde(rename = "2a+b+c")]
    TwoABC,
    #[serde(rename = "a+b+c+d")]
    ABCD,
    /// Contains a pair `x, -x`; always a relation, never a genuine 4-cycle.
    #[serde(rename = "mixed-trivial")]
    MixedTrivial,
}

impl FourCycleShape {
    pub fn name(self) -> &'static str {
        match self {
            FourCycleShape::FourA => "4a",
            FourCycleShape::ThreeAB => "3a+b",
            FourCycleShape::TwoATwoB => "2a+2b",
            FourCycleShape::TwoABC => "2a+b+c",
            FourCycleShape::ABCD => "a+b+c+d",
            FourCycleShape::MixedTrivial => "mixed-trivial",
        }
    }

    fn of_coeffs(coeffs: &[i64]) -> FourCycleShape {
        let mut abs: Vec<i64> = coeffs.iter().map(|c| c.abs()).filter(|&c| c > 0).collect();
        abs.sort_unstable_by(|a, b| b.cmp(a));
        match abs.as_slice() {
            [4] => FourCycleShape::FourA,
            [3, 1] => FourCycleShape::ThreeAB,
            [2, 2] => FourCycleShape::TwoATwoB,
            [2, 1, 1] => FourCycleShape::TwoABC,
            [1, 1, 1, 1] => FourCycleShape::ABCD,
            _ => FourCycleShape::MixedTrivial,
        }
    }
}

impl fmt::Display for FourCycleShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A multiset `{a, b, c, d} ⊂ ±B_n` with `a + b + c + d ∈ M Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FourCycleRelation {
    /// Coefficient vector `a + b + c + d` in `Z^n`.
    pub coeffs: Vec<i64>,
    pub terms: [Generator; 4],
    /// Some term cancels another, so the relation holds in every group.
    pub trivial: bool,
    pub shape: FourCycleShape,
    /// Integer `x` with `M x = coeffs`.
    #[serde(serialize_with = "crate::intlin::serialize_bigints")]
    pub witness: Vec<BigInt>,
}

impl FourCycleRelation {
    pub fn is_nontrivial(&self) -> bool {
        !self.trivial
    }
}

/// Every 4-term relation among `±e_1, …, ±e_n` modulo `M`, trivial ones
/// included. Terms are listed in generator order.
pub fn four_cycles(m: &IntMatrix) -> Result<Vec<FourCycleRelation>> {
    let n = m.require_square()?;
    let inv = RationalInverse::new(m)?;
    let mut out = Vec::new();
    for slots in (0..2 * n).combinations_with_replacement(4) {
        let terms: [Generator; 4] = std::array::from_fn(|k| Generator::from_slot(slots[k]));
        let mut coeffs = vec![0i64; n];
        for t in &terms {
            coeffs[t.axis] += t.sign();
        }
        let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        let Some(witness) = inv.solve(&big) else {
            continue;
        };
        let trivial = terms
            .iter()
            .tuple_combinations()
            .any(|(a, b)| a.negated() == *b);
        let shape = if trivial {
            FourCycleShape::MixedTrivial
        } else {
            FourCycleShape::of_coeffs(&coeffs)
        };
        out.push(FourCycleRelation {
            coeffs,
            terms,
            trivial,
            shape,
            witness,
        });
    }
    Ok(out)
}

pub fn has_nontrivial_4cycles(m: &IntMatrix) -> Result<bool> {
    Ok(four_cycles(m)?.iter().any(|r| !r.trivial))
}

/// Nontrivial relations only, one per coefficient vector up to sign.
pub fn nontrivial_relations(m: &IntMatrix) -> Result<Vec<FourCycleRelation>> {
    let mut out: Vec<FourCycleRelation> = Vec::new();
    for r in four_cycles(m)?.into_iter().filter(|r| !r.trivial) {
        let neg: Vec<i64> = r.coeffs.iter().map(|c| -c).collect();
        if !out.iter().any(|s| s.coeffs == neg) {
            out.push(r);
        }
    }
    Ok(out)
}

/// `Cay(Γ; ±g_1, …, ±g_n)` built directly on `Z_{f1} × … × Z_{fk}`.
///
/// Vertex numbering follows [`AbstractGroupSpec::index_of`].
pub fn abstract_cayley_graph(spec: &AbstractGroupSpec, view: View, cap: u64) -> Result<Graph> {
    let order = spec.order();
    if order > cap {
        return Err(Error::too_large("group order", order, cap));
    }
    let adj = (0..order as usize)
        .map(|v| {
            let x = spec.element_at(v);
            let mut row: Vec<u32> = Vec::with_capacity(2 * spec.generators.len());
            for g in &spec.generators {
                for s in [1, -1] {
                    let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| a + s * b).collect();
                    row.push(spec.index_of(&spec.reduce(&y)) as u32);
                }
            }
            if view == View::Simple {
                row.retain(|&w| w as usize != v);
                row.sort_unstable();
                row.dedup();
            }
            row
        })
        .collect();
    Ok(Graph::from_adjacency(adj))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn torus_4x4() {
        let g = CayleyGraph::build(&m(&[&[4, 0], &[0, 4]]), View::Simple).unwrap();
        assert_eq!(g.order(), 16);
        assert_eq!(g.degree_simple(), 4);
        assert!(g.graph().is_simple());
        assert!(g.graph().is_regular());
        assert_eq!(g.graph().edges().len(), 32);
        // 4e1 ≡ 0 closes a square along each axis
        let rels = nontrivial_relations(&m(&[&[4, 0], &[0, 4]])).unwrap();
        assert_eq!(rels.len(), 2);
        assert!(rels.iter().all(|r| r.shape == FourCycleShape::FourA));
        assert!(!has_nontrivial_4cycles(&m(&[&[5, 0], &[0, 5]])).unwrap());
    }

    #[test]
    fn small_torus_has_relations() {
        // 2e1 + 2e2 ≡ 0
        let rels = nontrivial_relations(&m(&[&[2, 0], &[0, 2]])).unwrap();
        assert!(rels.iter().any(|r| r.shape == FourCycleShape::TwoATwoB));
        let g = CayleyGraph::build(&m(&[&[2, 0], &[0, 2]]), View::Simple).unwrap();
        assert_eq!(g.degree_simple(), 2);
        let mg = g.with_view(View::Multigraph);
        assert_eq!(mg.graph().degree(0), 4);
        assert_eq!(mg.graph().multiplicity(0, 1), 2);
    }

    #[test]
    fn degree_examples() {
        for (rows, deg) in [
            (m(&[&[2, -1], &[0, 3]]), 3),
            (m(&[&[3, 0], &[0, 3]]), 4),
            (m(&[&[1, 0], &[0, 5]]), 2),
            (m(&[&[1, 0], &[0, 2]]), 1),
        ] {
            let g = CayleyGraph::build(&rows, View::Simple).unwrap();
            assert_eq!(g.degree_simple(), deg, "{rows}");
        }
    }

    #[test]
    fn zero_generator_loops() {
        let g = CayleyGraph::build(&m(&[&[1, 0], &[0, 5]]), View::Multigraph).unwrap();
        assert!(g.has_zero_generator());
        assert_eq!(g.graph().multiplicity(0, 0), 2);
        assert_eq!(g.graph().degree(0), 4);
    }

    #[test]
    fn trivial_relations_cancel() {
        for r in four_cycles(&m(&[&[5, 2], &[1, 3]])).unwrap() {
            let l1: i64 = r.coeffs.iter().map(|c| c.abs()).sum();
            assert_eq!(r.trivial, l1 < 4, "{:?}", r.terms);
        }
    }

    #[test]
    fn single_shapes() {
        let four_a = nontrivial_relations(&m(&[&[4, 1], &[0, 5]])).unwrap();
        assert_eq!(four_a.len(), 1);
        assert_eq!(four_a[0].shape, FourCycleShape::FourA);
        assert_eq!(four_a[0].coeffs, vec![4, 0]);
        let three = nontrivial_relations(&m(&[&[3, 2], &[1, 5]])).unwrap();
        assert_eq!(three.len(), 1);
        assert_eq!(three[0].shape, FourCycleShape::ThreeAB);
    }

    #[test]
    fn edge_dump_lines() {
        let g = CayleyGraph::build(&m(&[&[3, 0], &[0, 3]]), View::Simple).unwrap();
        let dump = g.edge_dump();
        assert_eq!(dump.lines().count(), 18);
        assert!(dump.starts_with("0 1 +e1 (0,0) (1,0)\n"));
    }

    #[test]
    fn abstract_graph_matches_matrix() {
        let spec: AbstractGroupSpec = "Z8 : [1],[3]".parse().unwrap();
        let g = abstract_cayley_graph(&spec, View::Simple, 100).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert!(g.is_regular());
        assert_eq!(g.degree(0), 4);
    }
}
