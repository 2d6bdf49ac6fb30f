//! Ordered partitions and equitable refinement.
//!
//! Refinement is deterministic given the cell indices, so two partitions that
//! started aligned and produce equal traces stay aligned cell by cell. That
//! alignment is what lets the search compare a candidate path with the base
//! path without canonical forms.

use std::collections::BTreeSet;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Partition {
    pub cells: Vec<Vec<u32>>,
    pub cell_of: Vec<u32>,
}

impl Partition {
    pub fn unit(n: usize) -> Self {
        Partition {
            cells: if n == 0 { Vec::new() } else { vec![(0..n as u32).collect()] },
            cell_of: vec![0; n],
        }
    }

    /// Moves `v` into a new singleton cell at the end; returns its index.
    pub fn individualize(&mut self, v: u32) -> usize {
        let c = self.cell_of[v as usize] as usize;
        let new = self.cells.len();
        self.cells[c].retain(|&x| x != v);
        self.cells.push(vec![v]);
        self.cell_of[v as usize] = new as u32;
        new
    }

    /// First smallest cell with more than one vertex.
    pub fn target_cell(&self) -> Option<usize> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i)
    }
}

/// Scratch buffers reused across refinements of the same graph.
pub(crate) struct Refiner<'g> {
    graph: &'g Graph,
    count: Vec<u32>,
    touched: Vec<u32>,
}

impl<'g> Refiner<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Refiner {
            graph,
            count: vec![0; graph.vertex_count()],
            touched: Vec::new(),
        }
    }

    /// Refines `p` to the coarsest equitable partition below it, using the
    /// given cells as initial splitters. Every split appends
    /// `cell, (count, size)…, u64::MAX` to `trace`.
    pub fn refine(&mut self, p: &mut Partition, splitters: &[usize], trace: &mut Vec<u64>) {
        let mut queue: BTreeSet<usize> = splitters.iter().copied().collect();
        while let Some(w) = queue.pop_first() {
            self.touched.clear();
            for &u in &p.cells[w] {
                for &v in self.graph.neighbors(u) {
                    if self.count[v as usize] == 0 {
                        self.touched.push(v);
                    }
                    self.count[v as usize] += 1;
                }
            }
            let mut cells: Vec<usize> = self
                .touched
                .iter()
                .map(|&v| p.cell_of[v as usize] as usize)
                .collect();
            cells.sort_unstable();
            cells.dedup();
            for c in cells {
                self.split(p, c, &mut queue, trace);
            }
            for &v in &self.touched {
                self.count[v as usize] = 0;
            }
        }
    }

    fn split(
        &self,
        p: &mut Partition,
        c: usize,
        queue: &mut BTreeSet<usize>,
        trace: &mut Vec<u64>,
    ) {
        let cell = &p.cells[c];
        if cell.len() < 2 {
            return;
        }
        let first = self.count[cell[0] as usize];
        if cell.iter().all(|&v| self.count[v as usize] == first) {
            return;
        }
        let mut members = std::mem::take(&mut p.cells[c]);
        members.sort_unstable_by_key(|&v| (self.count[v as usize], v));
        trace.push(c as u64);
        let mut start = 0;
        let mut first_piece = true;
        while start < members.len() {
            let k = self.count[members[start] as usize];
            let end = start
                + members[start..]
                    .iter()
                    .take_while(|&&v| self.count[v as usize] == k)
                    .count();
            trace.push(k as u64);
            trace.push((end - start) as u64);
            let piece = members[start..end].to_vec();
            let idx = if first_piece {
                first_piece = false;
                p.cells[c] = piece;
                c
            } else {
                let idx = p.cells.len();
                for &v in &piece {
                    p.cell_of[v as usize] = idx as u32;
                }
                p.cells.push(piece);
                idx
            };
            queue.insert(idx);
            start = end;
        }
        trace.push(u64::MAX);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_splits_ends() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let mut r = Refiner::new(&g);
        let mut p = Partition::unit(4);
        let mut trace = Vec::new();
        r.refine(&mut p, &[0], &mut trace);
        assert_eq!(p.cells, vec![vec![0, 3], vec![1, 2]]);
        assert!(!trace.is_empty());

        let c = p.individualize(0);
        let mut trace = Vec::new();
        r.refine(&mut p, &[c], &mut trace);
        assert_eq!(p.cells.len(), 4);
    }

    #[test]
    fn regular_graph_stays_unit() {
        let edges: Vec<_> = (0..6u32).map(|i| (i, (i + 1) % 6)).collect();
        let g = Graph::from_edges(6, &edges);
        let mut p = Partition::unit(6);
        let mut trace = Vec::new();
        Refiner::new(&g).refine(&mut p, &[0], &mut trace);
        assert_eq!(p.cells.len(), 1);
        assert!(trace.is_empty());
    }
}
