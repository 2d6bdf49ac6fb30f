use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::{full_report, ClassificationReport, FamilyTag, ReportOptions};
use crate::autgroup;
use crate::cayley::{CayleyGraph, View};
use crate::error::{Error, Result};
use crate::intlin::IntMatrix;

/// Reports are computed in parallel batches of this size and emitted in order.
const BATCH: usize = 512;

fn factorizations(det: u64, parts: usize) -> Vec<Vec<u64>> {
    if parts == 1 {
        return vec![vec![det]];
    }
    let mut out = Vec::new();
    for d in 1..=det {
        if det.is_multiple_of(d) {
            for mut rest in factorizations(det / d, parts - 1) {
                rest.insert(0, d);
                out.push(rest);
            }
        }
    }
    out
}

/// Odometer step with digit `k` in `[0, limit(k))`; false after the last.
fn advance(digits: &mut [u64], limit: impl Fn(usize) -> u64) -> bool {
    for k in (0..digits.len()).rev() {
        digits[k] += 1;
        if digits[k] < limit(k) {
            return true;
        }
        digits[k] = 0;
    }
    false
}

/// Every lower-triangular Hermite form of size `dim` with determinant at most
/// `det_max`, ordered by determinant, then diagonal, then entries. These are
/// exactly the lattices `M Z^dim` of index at most `det_max`.
pub fn hnf_classes(dim: usize, det_max: u64) -> Vec<IntMatrix> {
    let mut out = Vec::new();
    if dim == 0 {
        return out;
    }
    let slots: Vec<(usize, usize)> = (0..dim)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .collect();
    for det in 1..=det_max {
        for diag in factorizations(det, dim) {
            let mut entries = vec![0u64; slots.len()];
            loop {
                out.push(IntMatrix::from_fn(dim, dim, |i, j| {
                    if i == j {
                        BigInt::from(diag[i])
                    } else if j < i {
                        let k = slots.iter().position(|&s| s == (i, j)).expect("slot");
                        BigInt::from(entries[k])
                    } else {
                        BigInt::from(0)
                    }
                }));
                if !advance(&mut entries, |k| diag[slots[k].0]) {
                    break;
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub total: usize,
    pub errors: usize,
    pub linear_et: usize,
    pub edge_transitive: usize,
    pub et_not_linear: usize,
    pub nonlinear_stab: usize,
    pub families: BTreeMap<String, usize>,
}

impl ScanSummary {
    pub fn record(&mut self, r: &Result<ClassificationReport>) {
        self.total += 1;
        let Ok(r) = r else {
            self.errors += 1;
            return;
        };
        let et = r.edge_transitive.as_bool() == Some(true);
        self.linear_et += usize::from(r.linear_et);
        self.edge_transitive += usize::from(et);
        self.et_not_linear += usize::from(et && !r.linear_et);
        self.nonlinear_stab += usize::from(r.nonlinear_stab.as_bool() == Some(true));
        if r.family != FamilyTag::None {
            *self.families.entry(r.family.name().to_string()).or_insert(0) += 1;
        }
    }
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j);
    }
    b.build()
        .map_err(|e| Error::Degenerate(format!("thread pool: {e}")))
}

/// Calls `f` on the report of every matrix, in input order, computing
/// batches in parallel.
pub fn scan_each<F>(
    matrices: &[IntMatrix],
    opts: &ReportOptions,
    jobs: Option<usize>,
    mut f: F,
) -> Result<ScanSummary>
where
    F: FnMut(&IntMatrix, Result<ClassificationReport>),
{
    let pool = pool(jobs)?;
    let mut summary = ScanSummary::default();
    for chunk in matrices.chunks(BATCH) {
        let reports: Vec<_> =
            pool.install(|| chunk.par_iter().map(|m| full_report(m, opts)).collect());
        for (m, r) in chunk.iter().zip(reports) {
            summary.record(&r);
            f(m, r);
        }
    }
    Ok(summary)
}

/// Reports for all Hermite forms of size `dim` up to `det_max`.
pub fn scan(
    dim: usize,
    det_max: u64,
    opts: &ReportOptions,
    jobs: Option<usize>,
) -> Result<(Vec<Result<ClassificationReport>>, ScanSummary)> {
    let mut out = Vec::new();
    let summary = scan_each(&hnf_classes(dim, det_max), opts, jobs, |_, r| out.push(r))?;
    Ok((out, summary))
}

/// Graph invariant of a vertex-transitive graph: size, degree profile and
/// the sorted common-neighbour counts of vertex 0 with every vertex.
fn invariant(g: &CayleyGraph) -> (usize, Vec<usize>, Vec<usize>) {
    let graph = g.graph();
    let n = graph.vertex_count();
    let mut degrees: Vec<usize> = (0..n as u32).map(|v| graph.degree(v)).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut count = vec![0usize; n];
    for &u in graph.neighbors(0) {
        for &w in graph.neighbors(u) {
            count[w as usize] += 1;
        }
    }
    count.sort_unstable();
    (n, degrees, count)
}

/// Indices of one representative per graph-isomorphism class, in order of
/// first appearance.
pub fn dedup_isomorphic(matrices: &[IntMatrix], view: View, jobs: Option<usize>) -> Result<Vec<usize>> {
    let pool = pool(jobs)?;
    let graphs: Vec<CayleyGraph> = pool.install(|| {
        matrices
            .par_iter()
            .map(|m| CayleyGraph::build(m, view))
            .collect::<Result<_>>()
    })?;
    let keys: Vec<_> = pool.install(|| graphs.par_iter().map(invariant).collect());
    let mut buckets: HashMap<_, Vec<usize>> = HashMap::new();
    let mut reps = Vec::new();
    for (i, key) in keys.into_iter().enumerate() {
        let bucket = buckets.entry(key).or_default();
        let mut fresh = true;
        for &r in bucket.iter() {
            if autgroup::are_isomorphic(&graphs[r], &graphs[i])?.is_some() {
                fresh = false;
                break;
            }
        }
        if fresh {
            bucket.push(i);
            reps.push(i);
        }
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        // index-d sublattices of Z^2 number sigma(d)
        let counts: Vec<usize> = (1..=6).map(|d| hnf_classes(2, d).len()).collect();
        assert_eq!(counts, vec![1, 4, 8, 15, 21, 33]);
        assert_eq!(hnf_classes(1, 5).len(), 5);
        // index-2 sublattices of Z^3: 7
        assert_eq!(hnf_classes(3, 2).len(), 8);
        for h in hnf_classes(3, 12) {
            assert_eq!(crate::intlin::hnf(&h).unwrap().h, h);
        }
    }

    #[test]
    fn scan_small() {
        let opts = ReportOptions {
            full_certificates: false,
            ..ReportOptions::default()
        };
        let (reports, summary) = scan(2, 6, &opts, Some(2)).unwrap();
        assert_eq!(reports.len(), 33);
        assert_eq!(summary.total, 33);
        assert_eq!(summary.errors, 0);
        let orders: Vec<u64> = reports.iter().map(|r| r.as_ref().unwrap().order).collect();
        assert!(orders.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn dedup_merges_isomorphic() {
        let ms = vec![
            IntMatrix::from_rows(&[[2, 0], [1, 3]]),
            IntMatrix::from_rows(&[[3, 0], [1, 2]]),
            IntMatrix::from_rows(&[[6, 0], [0, 1]]),
            IntMatrix::from_rows(&[[1, 0], [0, 6]]),
        ];
        let reps = dedup_isomorphic(&ms, View::Simple, None).unwrap();
        assert!(reps.len() < ms.len());
        assert_eq!(reps[0], 0);
    }
}
