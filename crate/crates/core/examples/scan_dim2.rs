//! Scans every two-dimensional Hermite form up to a determinant bound and
//! tallies edge-transitivity, linearity and family membership.
//!
//! Usage: `cargo run --example scan_dim2 -- [DET_MAX]` (default 64).

use std::time::Instant;

use cayley_symmetry::classify::{hnf_classes, scan_each, ReportOptions};

fn main() -> cayley_symmetry::Result<()> {
    let det_max: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(64);
    let classes = hnf_classes(2, det_max);
    let opts = ReportOptions {
        full_certificates: false,
        ..ReportOptions::default()
    };
    let start = Instant::now();
    let mut et_nonlinear = Vec::new();
    let summary = scan_each(&classes, &opts, None, |m, r| {
        if let Ok(r) = r {
            if r.edge_transitive.as_bool() == Some(true) && !r.linear_et {
                et_nonlinear.push(m.to_string());
            }
        }
    })?;
    println!("{} classes with det <= {det_max} in {:.1?}", classes.len(), start.elapsed());
    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
    println!("edge-transitive but not linearly: {}", et_nonlinear.join("  "));
    Ok(())
}
