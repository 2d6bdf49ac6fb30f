//! Individualize-refine backtracking and the stabilizer chain built on it.

use std::collections::VecDeque;

use super::refine::{Partition, Refiner};
use crate::graph::Graph;

/// The leftmost path of the search tree on the source graph.
#[derive(Debug, Clone)]
pub(crate) struct BasePath {
    /// `parts[j]` is the partition before `base[j]` is individualized; the
    /// last entry is discrete.
    pub parts: Vec<Partition>,
    pub base: Vec<u32>,
    /// Index of the cell holding `base[j]` in `parts[j]`.
    pub cells: Vec<usize>,
    /// Refinement trace after individualizing `base[j]`.
    pub traces: Vec<Vec<u64>>,
    pub root_trace: Vec<u64>,
}

pub(crate) fn root_partition(refiner: &mut Refiner<'_>, n: usize) -> (Partition, Vec<u64>) {
    let mut p = Partition::unit(n);
    let mut trace = Vec::new();
    if n > 0 {
        refiner.refine(&mut p, &[0], &mut trace);
    }
    (p, trace)
}

/// Base points are `first` (when it is not already a singleton) followed by
/// the first vertex of the first smallest non-singleton cell.
pub(crate) fn base_path(g: &Graph, first: Option<u32>) -> BasePath {
    let mut refiner = Refiner::new(g);
    let (mut p, root_trace) = root_partition(&mut refiner, g.vertex_count());
    let mut path = BasePath {
        parts: Vec::new(),
        base: Vec::new(),
        cells: Vec::new(),
        traces: Vec::new(),
        root_trace,
    };
    let mut first = first.filter(|&v| p.cells[p.cell_of[v as usize] as usize].len() > 1);
    while let Some(target) = p.target_cell() {
        let b = match first.take() {
            Some(v) => v,
            None => p.cells[target][0],
        };
        let c = p.cell_of[b as usize] as usize;
        path.parts.push(p.clone());
        path.base.push(b);
        path.cells.push(c);
        let new = p.individualize(b);
        let mut trace = Vec::new();
        refiner.refine(&mut p, &[new], &mut trace);
        path.traces.push(trace);
    }
    path.parts.push(p);
    path
}

/// Searches for maps from the source graph of `path` onto `target` that
/// follow the path's refinement traces.
pub(crate) struct Matcher<'a> {
    source: &'a Graph,
    target: &'a Graph,
    path: &'a BasePath,
    refiner: Refiner<'a>,
}

impl<'a> Matcher<'a> {
    pub fn new(source: &'a Graph, target: &'a Graph, path: &'a BasePath) -> Self {
        Matcher {
            source,
            target,
            path,
            refiner: Refiner::new(target),
        }
    }

    /// Extends `start` (aligned with `path.parts[depth]`) by sending
    /// `base[depth]` to `w`.
    pub fn try_map(&mut self, start: &Partition, depth: usize, w: u32) -> Option<Vec<u32>> {
        let mut r = start.clone();
        let new = r.individualize(w);
        let mut trace = Vec::new();
        self.refiner.refine(&mut r, &[new], &mut trace);
        if trace != self.path.traces[depth] {
            return None;
        }
        self.descend(depth + 1, &r)
    }

    pub fn descend(&mut self, depth: usize, rho: &Partition) -> Option<Vec<u32>> {
        if depth == self.path.base.len() {
            return self.leaf(rho);
        }
        let candidates = rho.cells[self.path.cells[depth]].clone();
        candidates
            .into_iter()
            .find_map(|y| self.try_map(rho, depth, y))
    }

    fn leaf(&self, rho: &Partition) -> Option<Vec<u32>> {
        let left = self.path.parts.last().expect("path has a leaf");
        let mut perm = vec![0u32; left.cell_of.len()];
        for (l, r) in left.cells.iter().zip(&rho.cells) {
            perm[l[0] as usize] = r[0];
        }
        self.source
            .is_isomorphism_to(self.target, &perm)
            .then_some(perm)
    }
}

/// Stabilizer chain along a base path.
#[derive(Debug, Clone)]
pub(crate) struct Chain {
    pub path: BasePath,
    /// Orbit of `base[j]` under the pointwise stabilizer of `base[..j]`.
    pub orbit_sizes: Vec<usize>,
    /// Generators tagged with the first base level they move.
    pub gens: Vec<(usize, Vec<u32>)>,
}

fn orbit_of(start: u32, n: usize, gens: &[&Vec<u32>]) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[start as usize] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for g in gens {
            let w = g[v as usize];
            if !seen[w as usize] {
                seen[w as usize] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Builds the chain with `base[0] = first` when possible. `hints` are known
/// automorphisms (translations for Cayley graphs) that spare searches.
pub(crate) fn stabilizer_chain(g: &Graph, first: Option<u32>, hints: &[Vec<u32>]) -> Chain {
    let n = g.vertex_count();
    let path = base_path(g, first);
    let k = path.base.len();
    let level_of = |perm: &[u32]| path.base.iter().position(|&b| perm[b as usize] != b);

    let mut gens: Vec<(usize, Vec<u32>)> = hints
        .iter()
        .filter(|h| g.is_automorphism(h))
        .filter_map(|h| level_of(h).map(|l| (l, h.clone())))
        .collect();
    let mut orbit_sizes = vec![1usize; k];
    let mut matcher = Matcher::new(g, g, &path);

    for j in (0..k).rev() {
        let b = path.base[j];
        let active = |gens: &[(usize, Vec<u32>)]| -> Vec<Vec<u32>> {
            gens.iter()
                .filter(|(l, _)| *l >= j)
                .map(|(_, p)| p.clone())
                .collect()
        };
        let mut current = active(&gens);
        let mut in_orbit = orbit_of(b, n, &current.iter().collect::<Vec<_>>());
        let mut failed = vec![false; n];
        for &w in &path.parts[j].cells[path.cells[j]] {
            if in_orbit[w as usize] || failed[w as usize] {
                continue;
            }
            match matcher.try_map(&path.parts[j], j, w) {
                Some(perm) => {
                    gens.push((j, perm));
                    current = active(&gens);
                    in_orbit = orbit_of(b, n, &current.iter().collect::<Vec<_>>());
                }
                None => {
                    let lost = orbit_of(w, n, &current.iter().collect::<Vec<_>>());
                    for (v, &x) in lost.iter().enumerate() {
                        failed[v] |= x;
                    }
                }
            }
        }
        orbit_sizes[j] = in_orbit.iter().filter(|&&x| x).count();
    }
    Chain {
        path,
        orbit_sizes,
        gens,
    }
}

/// An isomorphism `g → h`. With `h_transitive`, only one image of the first
/// base point is tried.
pub(crate) fn find_isomorphism(g: &Graph, h: &Graph, h_transitive: bool) -> Option<Vec<u32>> {
    let n = g.vertex_count();
    if n != h.vertex_count() {
        return None;
    }
    let mut degrees_g: Vec<usize> = (0..n as u32).map(|v| g.degree(v)).collect();
    let mut degrees_h: Vec<usize> = (0..n as u32).map(|v| h.degree(v)).collect();
    degrees_g.sort_unstable();
    degrees_h.sort_unstable();
    if degrees_g != degrees_h {
        return None;
    }
    let path = base_path(g, Some(0));
    let mut rh = Refiner::new(h);
    let (root, trace) = root_partition(&mut rh, n);
    if trace != path.root_trace || root.cells.len() != path.parts[0].cells.len() {
        return None;
    }
    let mut matcher = Matcher::new(g, h, &path);
    if path.base.is_empty() {
        return matcher.descend(0, &root);
    }
    let cell = root.cells[path.cells[0]].clone();
    let tries = if h_transitive { &cell[..1] } else { &cell[..] };
    tries.iter().find_map(|&w| matcher.try_map(&root, 0, w))
}
