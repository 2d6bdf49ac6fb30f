//! Exact automorphism groups of small graphs by partition refinement and
//! backtracking, used as the independent check on every linear claim.

mod refine;
mod search;

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use serde::Serialize;

use crate::cayley::{CayleyGraph, Generator};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::intlin::{self, IntMatrix};
use crate::linaut::{self, LinearStabilizer, SignedPermutation};

/// Default vertex ceiling for brute-force computations.
pub const DEFAULT_BRUTE_FORCE_CAP: u64 = 512;

/// Stabilizers up to this order are listed element by element when looking
/// for nonlinear automorphisms; larger ones report nonlinear generators.
pub const STABILIZER_LISTING_LIMIT: u64 = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Automorphism {
    pub perm: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_linear: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_witness: Option<SignedPermutation>,
}

impl Automorphism {
    pub fn new(perm: Vec<u32>) -> Self {
        Automorphism {
            perm,
            is_linear: None,
            matrix_witness: None,
        }
    }

    pub fn fixes_zero(&self) -> bool {
        self.perm.first().is_none_or(|&v| v == 0)
    }

    pub fn apply(&self, v: u32) -> u32 {
        self.perm[v as usize]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AutGroup {
    pub generators: Vec<Automorphism>,
    /// Twin vertices make this exceed any machine integer.
    #[serde(serialize_with = "crate::intlin::serialize_bigint")]
    pub order: BigInt,
    #[serde(serialize_with = "crate::intlin::serialize_bigint")]
    pub stabilizer0_order: BigInt,
    /// Size of the orbit of vertex 0.
    pub zero_orbit: usize,
    pub base: Vec<u32>,
    pub orbit_sizes: Vec<usize>,
    /// Indices into `generators` of those that generate `Aut(G, 0)`.
    pub stabilizer_generators: Vec<usize>,
}

impl AutGroup {
    pub fn stabilizer_gens(&self) -> impl Iterator<Item = &Automorphism> {
        self.stabilizer_generators.iter().map(|&i| &self.generators[i])
    }
}

fn check_cap(g: &CayleyGraph, cap: u64) -> Result<()> {
    if g.order() as u64 > cap {
        return Err(Error::too_large("graph", g.order() as u64, cap));
    }
    Ok(())
}

/// Automorphism group of an arbitrary (multi)graph.
pub fn graph_automorphism_group(graph: &Graph, hints: &[Vec<u32>]) -> Result<AutGroup> {
    let n = graph.vertex_count();
    let first = (n > 0).then_some(0);
    let chain = search::stabilizer_chain(graph, first, hints);
    let order: BigInt = chain.orbit_sizes.iter().map(|&s| BigInt::from(s)).product();
    let zero_level = usize::from(chain.path.base.first() == Some(&0));
    let mut generators = Vec::with_capacity(chain.gens.len());
    let mut stabilizer_generators = Vec::new();
    for (level, perm) in chain.gens {
        if level >= zero_level {
            stabilizer_generators.push(generators.len());
        }
        generators.push(Automorphism::new(perm));
    }
    let zero_orbit = if n == 0 {
        0
    } else {
        orbit(0, n, generators.iter().map(|a| &a.perm)).len()
    };
    let stabilizer0_order = if zero_orbit == 0 {
        order.clone()
    } else {
        &order / zero_orbit
    };
    Ok(AutGroup {
        generators,
        order,
        stabilizer0_order,
        zero_orbit,
        base: chain.path.base,
        orbit_sizes: chain.orbit_sizes,
        stabilizer_generators,
    })
}

fn orbit<'a>(start: u32, n: usize, gens: impl Iterator<Item = &'a Vec<u32>> + Clone) -> Vec<u32> {
    let mut seen = vec![false; n];
    seen[start as usize] = true;
    let mut out = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for g in gens.clone() {
            let w = g[v as usize];
            if !seen[w as usize] {
                seen[w as usize] = true;
                out.push(w);
                queue.push_back(w);
            }
        }
    }
    out
}

/// Translations by `+e_i`, always automorphisms of a Cayley graph.
pub fn translations(g: &CayleyGraph) -> Vec<Vec<u32>> {
    (0..g.dim())
        .map(|axis| {
            (0..g.order() as u32)
                .map(|v| g.step(v, Generator { axis, positive: true }))
                .collect()
        })
        .collect()
}

pub fn automorphism_group(g: &CayleyGraph) -> Result<AutGroup> {
    automorphism_group_capped(g, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn automorphism_group_capped(g: &CayleyGraph, cap: u64) -> Result<AutGroup> {
    check_cap(g, cap)?;
    graph_automorphism_group(g.graph(), &translations(g))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeTransitivity {
    pub transitive: bool,
    /// Orbits of distinct vertex pairs `u <= v`.
    pub orbits: Vec<Vec<(u32, u32)>>,
}

/// Orbits of the generated group on the distinct edges of `graph`.
pub fn edge_orbits(graph: &Graph, generators: &[Automorphism]) -> Vec<Vec<(u32, u32)>> {
    let edges = graph.edges();
    let index: HashMap<(u32, u32), usize> =
        edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in generators {
        for (i, &(u, v)) in edges.iter().enumerate() {
            let (x, y) = (a.apply(u), a.apply(v));
            let j = index[&(x.min(y), x.max(y))];
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut groups: Vec<Vec<(u32, u32)>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for (i, &e) in edges.iter().enumerate() {
        let r = find(&mut parent, i);
        let s = *slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[s].push(e);
    }
    groups
}

pub fn edge_transitivity(g: &CayleyGraph, group: &AutGroup) -> EdgeTransitivity {
    let orbits = edge_orbits(g.graph(), &group.generators);
    EdgeTransitivity {
        transitive: orbits.len() <= 1,
        orbits,
    }
}

pub fn is_edge_transitive(g: &CayleyGraph) -> Result<EdgeTransitivity> {
    Ok(edge_transitivity(g, &automorphism_group(g)?))
}

/// Orbit check of vertex 0 under the searched group; translations are not
/// assumed, so this is a genuine test.
pub fn is_vertex_transitive(g: &CayleyGraph) -> Result<bool> {
    check_cap(g, DEFAULT_BRUTE_FORCE_CAP)?;
    let group = graph_automorphism_group(g.graph(), &[])?;
    Ok(group.zero_orbit == g.order())
}

/// A vertex bijection `g1 → g2` preserving adjacency with multiplicity.
pub fn are_isomorphic(g1: &CayleyGraph, g2: &CayleyGraph) -> Result<Option<Vec<u32>>> {
    check_cap(g1, DEFAULT_BRUTE_FORCE_CAP)?;
    check_cap(g2, DEFAULT_BRUTE_FORCE_CAP)?;
    Ok(search::find_isomorphism(g1.graph(), g2.graph(), true))
}

/// Isomorphism test for arbitrary graphs.
pub fn graphs_isomorphic(g: &Graph, h: &Graph) -> Option<Vec<u32>> {
    search::find_isomorphism(g, h, false)
}

/// The vertex map `x ↦ P·x` from `g` to `h`, when it is an isomorphism.
pub fn linear_isomorphism(
    g: &CayleyGraph,
    h: &CayleyGraph,
    p: &SignedPermutation,
) -> Option<Vec<u32>> {
    if p.dim() != g.dim() || g.dim() != h.dim() || g.order() != h.order() {
        return None;
    }
    let perm: Vec<u32> = (0..g.order() as u32)
        .map(|v| h.vertex(&p.apply(g.element(v).coords())))
        .collect();
    g.graph().is_isomorphism_to(h.graph(), &perm).then_some(perm)
}

/// A signed permutation `P` with `P·M1·Z^n = M2·Z^n`, i.e. a group
/// isomorphism carrying `±B_n` onto itself.
pub fn adam_isomorphic(m1: &IntMatrix, m2: &IntMatrix) -> Result<Option<SignedPermutation>> {
    let n = m1.require_square()?;
    if m2.rows() != n || m2.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m2.rows(),
        });
    }
    if n > linaut::MAX_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    let target = intlin::hnf(m2)?.h;
    if intlin::det(m1).magnitude() != intlin::det(m2).magnitude() {
        return Ok(None);
    }
    for p in SignedPermutation::all(n) {
        if intlin::hnf(&(&p.matrix() * m1))?.h == target {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Vertex action of every member of `LAut`, keyed by the permutation.
pub fn linear_actions(
    g: &CayleyGraph,
    laut: &LinearStabilizer,
) -> HashMap<Vec<u32>, SignedPermutation> {
    let mut out = HashMap::new();
    for mem in &laut.members {
        out.entry(linaut::vertex_action(g, &mem.p))
            .or_insert_with(|| mem.p.clone());
    }
    out
}

/// Marks `a` as linear or not, attaching a witness when it is.
pub fn annotate(a: &mut Automorphism, actions: &HashMap<Vec<u32>, SignedPermutation>) {
    let witness = actions.get(&a.perm).cloned();
    a.is_linear = Some(witness.is_some());
    a.matrix_witness = witness;
}

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    b.iter().map(|&x| a[x as usize]).collect()
}

/// Elements of `Aut(G, 0)` not induced by any signed permutation in `LAut`.
///
/// Small stabilizers are listed completely. Above
/// [`STABILIZER_LISTING_LIMIT`] the nonlinear generators are returned, which
/// is non-empty exactly when a nonlinear element exists.
pub fn nonlinear_stabilizer_elements(g: &CayleyGraph) -> Result<Vec<Automorphism>> {
    let group = automorphism_group(g)?;
    let laut = linaut::linear_stabilizer(g.matrix())?;
    Ok(nonlinear_from(g, &group, &laut))
}

pub fn nonlinear_from(
    g: &CayleyGraph,
    group: &AutGroup,
    laut: &LinearStabilizer,
) -> Vec<Automorphism> {
    let actions = linear_actions(g, laut);
    if BigInt::from(actions.len()) == group.stabilizer0_order {
        return Vec::new();
    }
    let gens: Vec<&Vec<u32>> = group.stabilizer_gens().map(|a| &a.perm).collect();
    let mut out = Vec::new();
    if group.stabilizer0_order <= BigInt::from(STABILIZER_LISTING_LIMIT) {
        let id: Vec<u32> = (0..g.order() as u32).collect();
        let mut seen: HashSet<Vec<u32>> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for s in &gens {
                let y = compose(s, &x);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
            if !actions.contains_key(&x) {
                out.push(Automorphism {
                    perm: x,
                    is_linear: Some(false),
                    matrix_witness: None,
                });
            }
        }
    } else {
        for s in gens {
            if !actions.contains_key(s) {
                out.push(Automorphism {
                    perm: s.clone(),
                    is_linear: Some(false),
                    matrix_witness: None,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::View;

    fn cg(rows: &[&[i64]]) -> CayleyGraph {
        CayleyGraph::build(&IntMatrix::from_rows(rows), View::Simple).unwrap()
    }

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn group_orders() {
        let g = automorphism_group(&cg(&[&[2, -1], &[0, 3]])).unwrap();
        assert_eq!((g.order, g.stabilizer0_order), (72.into(), 12.into()));
        let g = automorphism_group(&cg(&[&[4, 0], &[0, 4]])).unwrap();
        assert_eq!((g.order, g.stabilizer0_order), (384.into(), 24.into()));
        let g = automorphism_group(&cg(&[&[2]])).unwrap();
        assert_eq!(g.order, 2.into());
        let g = automorphism_group(&cg(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(g.order, 1.into());
    }

    #[test]
    fn generators_are_automorphisms() {
        let c = cg(&[&[3, 1], &[1, 2]]);
        let g = automorphism_group(&c).unwrap();
        for a in &g.generators {
            assert!(c.graph().is_automorphism(&a.perm));
        }
        for a in g.stabilizer_gens() {
            assert!(a.fixes_zero());
        }
        assert_eq!(g.order, c.order() * &g.stabilizer0_order);
    }

    #[test]
    fn edge_transitivity_examples() {
        assert!(is_edge_transitive(&cg(&[&[2, -1], &[0, 3]])).unwrap().transitive);
        assert!(is_edge_transitive(&cg(&[&[4, 0], &[0, 4]])).unwrap().transitive);
        let r = is_edge_transitive(&cg(&[&[6, 0], &[0, 2]])).unwrap();
        assert!(!r.transitive);
        assert_eq!(r.orbits.len(), 2);
    }

    #[test]
    fn vertex_transitivity() {
        for rows in [
            m(&[&[4, 0], &[0, 4]]),
            m(&[&[2, -1], &[0, 3]]),
            m(&[&[3, 1], &[1, 2]]),
        ] {
            let g = CayleyGraph::build(&rows, View::Simple).unwrap();
            assert!(is_vertex_transitive(&g).unwrap());
        }
    }

    #[test]
    fn isomorphism_examples() {
        let a = cg(&[&[2, 1], &[0, 3]]);
        let h = crate::intlin::hnf(&m(&[&[2, 1], &[0, 3]])).unwrap().h;
        let b = CayleyGraph::build(&h, View::Simple).unwrap();
        let perm = are_isomorphic(&a, &b).unwrap().unwrap();
        assert!(a.graph().is_isomorphism_to(b.graph(), &perm));

        assert!(are_isomorphic(&cg(&[&[3, 3], &[1, -1]]), &cg(&[&[2, -1], &[0, 3]]))
            .unwrap()
            .is_some());
        assert!(are_isomorphic(&cg(&[&[4, 0], &[0, 4]]), &cg(&[&[8, 0], &[0, 2]]))
            .unwrap()
            .is_none());
    }

    #[test]
    fn adam_examples() {
        assert!(adam_isomorphic(&m(&[&[5, 2], &[1, 2]]), &m(&[&[4, 2], &[0, 2]]))
            .unwrap()
            .is_none());
        assert!(are_isomorphic(&cg(&[&[5, 2], &[1, 2]]), &cg(&[&[4, 2], &[0, 2]]))
            .unwrap()
            .is_some());
        let p = adam_isomorphic(&m(&[&[3, 1], &[1, 3]]), &m(&[&[3, -1], &[-1, 3]]))
            .unwrap()
            .unwrap();
        assert!(!p.is_identity());
    }

    #[test]
    fn nonlinear_examples() {
        assert!(nonlinear_stabilizer_elements(&cg(&[&[4, 3], &[0, 1]])).unwrap().is_empty());
        assert!(!nonlinear_stabilizer_elements(&cg(&[&[3, 1], &[1, 2]])).unwrap().is_empty());
        assert!(nonlinear_stabilizer_elements(&cg(&[&[5, 0], &[0, 5]])).unwrap().is_empty());
    }

    #[test]
    fn twins_give_huge_orders() {
        // v and v + 121 have equal neighbourhoods
        let g = automorphism_group(&cg(&[&[1, 0], &[120, 242]])).unwrap();
        assert!(g.order > BigInt::from(u128::MAX));
        assert_eq!(g.order, BigInt::from(242) * &g.stabilizer0_order);
    }

    #[test]
    fn cap_enforced() {
        let g = cg(&[&[30, 0], &[0, 30]]);
        assert!(matches!(automorphism_group(&g), Err(Error::TooLarge { .. })));
        assert!(automorphism_group_capped(&g, 1000).is_ok());
    }
}
