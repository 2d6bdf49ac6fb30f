//! Plain adjacency-list graphs.
//!
//! A vertex may appear several times in a neighbor list (parallel edges) and
//! in its own list (a loop, listed once per incident half-edge).

use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// Neighbor lists are sorted on construction.
    pub fn from_adjacency(mut adj: Vec<Vec<u32>>) -> Self {
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { adj }
    }

    /// Undirected graph from an edge list; loops contribute two entries.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        Graph::from_adjacency(adj)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn is_regular(&self) -> bool {
        self.adj.windows(2).all(|w| w[0].len() == w[1].len())
    }

    /// `true` when there are no loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        self.adj.iter().enumerate().all(|(v, list)| {
            list.windows(2).all(|w| w[0] != w[1]) && list.binary_search(&(v as u32)).is_err()
        })
    }

    /// Number of adjacency entries from `u` to `v`.
    pub fn multiplicity(&self, u: u32, v: u32) -> usize {
        let list = &self.adj[u as usize];
        let lo = list.partition_point(|&x| x < v);
        let hi = list.partition_point(|&x| x <= v);
        hi - lo
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.multiplicity(u, v) > 0
    }

    /// Distinct vertex pairs `u <= v` joined by at least one edge.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for (u, list) in self.adj.iter().enumerate() {
            let u = u as u32;
            let mut prev = None;
            for &v in list {
                if v >= u && prev != Some(v) {
                    out.push((u, v));
                }
                prev = Some(v);
            }
        }
        out
    }

    /// Same vertex set, loops and repeated entries removed.
    pub fn simplified(&self) -> Graph {
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(v, list)| {
                let mut l: Vec<u32> = list.iter().copied().filter(|&w| w as usize != v).collect();
                l.dedup();
                l
            })
            .collect();
        Graph { adj }
    }

    /// Vertices adjacent to every vertex of `vs`.
    pub fn common_neighborhood(&self, vs: &[u32]) -> BTreeSet<u32> {
        let mut it = vs.iter();
        let Some(&first) = it.next() else {
            return (0..self.vertex_count() as u32).collect();
        };
        let mut acc: BTreeSet<u32> = self.neighbors(first).iter().copied().collect();
        for &v in it {
            let next: BTreeSet<u32> = self.neighbors(v).iter().copied().collect();
            acc.retain(|w| next.contains(w));
        }
        acc
    }

    /// Applies a vertex relabeling `v ↦ perm[v]`.
    pub fn relabeled(&self, perm: &[u32]) -> Graph {
        let mut adj = vec![Vec::new(); self.adj.len()];
        for (v, list) in self.adj.iter().enumerate() {
            adj[perm[v] as usize] = list.iter().map(|&w| perm[w as usize]).collect();
        }
        Graph::from_adjacency(adj)
    }

    /// Whether `perm` maps the adjacency multiset onto itself.
    pub fn is_automorphism(&self, perm: &[u32]) -> bool {
        self.is_isomorphism_to(self, perm)
    }

    /// Whether `perm` is an isomorphism from `self` onto `other`.
    pub fn is_isomorphism_to(&self, other: &Graph, perm: &[u32]) -> bool {
        if self.adj.len() != other.adj.len() || perm.len() != self.adj.len() {
            return false;
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p as usize >= perm.len() || std::mem::replace(&mut seen[p as usize], true) {
                return false;
            }
        }
        let mut buf = Vec::new();
        self.adj.iter().enumerate().all(|(v, list)| {
            buf.clear();
            buf.extend(list.iter().map(|&w| perm[w as usize]));
            buf.sort_unstable();
            buf == other.adj[perm[v] as usize]
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n as usize, &edges)
    }

    #[test]
    fn cycle_basics() {
        let g = cycle(5);
        assert!(g.is_simple());
        assert!(g.is_regular());
        assert_eq!(g.edges().len(), 5);
        assert!(g.is_automorphism(&[1, 2, 3, 4, 0]));
        assert!(g.is_automorphism(&[0, 4, 3, 2, 1]));
        assert!(!g.is_automorphism(&[1, 0, 2, 3, 4]));
        assert_eq!(g.common_neighborhood(&[0, 2]), [1].into());
    }

    #[test]
    fn loops_and_parallel_edges() {
        let g = Graph::from_edges(2, &[(0, 0), (0, 1), (0, 1), (1, 1)]);
        assert!(!g.is_simple());
        assert_eq!(g.degree(0), 4);
        assert_eq!(g.multiplicity(0, 1), 2);
        assert_eq!(g.edges(), vec![(0, 0), (0, 1), (1, 1)]);
        let s = g.simplified();
        assert!(s.is_simple());
        assert_eq!(s.degree(0), 1);
    }
}
