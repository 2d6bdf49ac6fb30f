use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use super::{classify_dim2, classify_dim3_with, CanonicalFamily, FamilyTag, FourCycleTaxonomy};
use crate::abelian::{QuotientGroup, DEFAULT_ENUMERATION_CAP};
use crate::autgroup::{self, Automorphism, DEFAULT_BRUTE_FORCE_CAP};
use crate::cayley::{CayleyGraph, View};
use crate::error::{Error, Result};
use crate::intlin::IntMatrix;
use crate::linaut::{self, LinearMember, SignedPermutation};

/// A yes/no answer that may be out of reach; serialized as a boolean or
/// `"unknown"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::Yes => Some(true),
            Verdict::No => Some(false),
            Verdict::Unknown => None,
        }
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "true",
            Verdict::No => "false",
            Verdict::Unknown => "unknown",
        })
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.as_bool() {
            Some(b) => s.serialize_bool(b),
            None => s.serialize_str("unknown"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    /// Forced view; by default the multigraph is used exactly when some
    /// `e_i ≡ 0`.
    pub view: Option<View>,
    /// Largest graph on which automorphism groups are computed.
    pub brute_force_cap: u64,
    /// Largest group that is enumerated at all; a brute-force cap above it
    /// makes large inputs fail with `TooLarge`.
    pub enumeration_cap: u64,
    /// Include permutations, full edge orbits and `LAut` members.
    pub full_certificates: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            view: None,
            brute_force_cap: DEFAULT_BRUTE_FORCE_CAP,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            full_certificates: true,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Certificates {
    /// `linear_witnesses[i]` sends `e_1` to `±e_{i+1}`.
    pub linear_witnesses: Vec<Option<SignedPermutation>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub laut: Option<Vec<LinearMember>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<CanonicalFamily>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::intlin::serialize_opt_bigint"
    )]
    pub aut_order: Option<BigInt>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::intlin::serialize_opt_bigint"
    )]
    pub stabilizer0_order: Option<BigInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aut_generators: Option<Vec<Automorphism>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_orbit_sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_orbits: Option<Vec<Vec<(u32, u32)>>>,
    /// Nonlinear elements found (all of them for small stabilizers).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonlinear_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonlinear_witness: Option<Automorphism>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub matrix: IntMatrix,
    pub hnf: IntMatrix,
    pub order: u64,
    /// Degree of the simple graph.
    pub degree: usize,
    pub view: View,
    pub degenerate_generator: bool,
    pub four_cycles: FourCycleTaxonomy,
    pub laut_order: usize,
    pub linear_et: bool,
    pub edge_transitive: Verdict,
    pub nonlinear_stab: Verdict,
    pub family: FamilyTag,
    pub params: Vec<i64>,
    pub certificates: Certificates,
}

/// Everything known about `G(M)`: normal forms, 4-cycles, the linear
/// stabilizer, the family decision and, for small graphs, the exact
/// automorphism group.
pub fn full_report(m: &IntMatrix, opts: &ReportOptions) -> Result<ClassificationReport> {
    let n = m.require_square()?;
    let group = QuotientGroup::new(m)?;
    let order = group
        .order_u64()
        .ok_or(Error::Overflow("group order"))?;

    let mut images = Vec::with_capacity(2 * n);
    let mut degenerate = false;
    for i in 0..n {
        let mut e = vec![0i64; n];
        for s in [1, -1] {
            e[i] = s;
            let g = group.canonical(&e);
            degenerate |= g.is_zero();
            if !g.is_zero() {
                images.push(g);
            }
        }
    }
    images.sort_by(|a, b| a.coords().cmp(b.coords()));
    images.dedup();
    let view = opts.view.unwrap_or(if degenerate {
        View::Multigraph
    } else {
        View::Simple
    });

    let four_cycles = super::fourcycle_case_taxonomy(m)?;
    let laut = linaut::linear_stabilizer(m)?;
    let let_ = linaut::linear_edge_transitivity_from(&laut, n);
    let family = match n {
        2 => Some(classify_dim2(m)?),
        3 => Some(classify_dim3_with(m, &laut)?),
        _ => None,
    };

    let mut certificates = Certificates {
        linear_witnesses: let_.witnesses,
        laut: opts.full_certificates.then(|| laut.members.clone()),
        family: family.clone(),
        ..Certificates::default()
    };
    let (mut edge_transitive, mut nonlinear_stab) = (Verdict::Unknown, Verdict::Unknown);
    if order <= opts.brute_force_cap {
        let g = CayleyGraph::build_capped(m, view, opts.enumeration_cap)?;
        let mut aut = autgroup::automorphism_group_capped(&g, opts.brute_force_cap)?;
        let et = autgroup::edge_transitivity(&g, &aut);
        let nonlinear = autgroup::nonlinear_from(&g, &aut, &laut);
        edge_transitive = et.transitive.into();
        nonlinear_stab = (!nonlinear.is_empty()).into();
        certificates.aut_order = Some(aut.order.clone());
        certificates.stabilizer0_order = Some(aut.stabilizer0_order.clone());
        certificates.edge_orbit_sizes = Some(et.orbits.iter().map(Vec::len).collect());
        certificates.nonlinear_count = Some(nonlinear.len());
        certificates.nonlinear_witness = nonlinear.into_iter().next();
        if opts.full_certificates {
            let actions = autgroup::linear_actions(&g, &laut);
            for a in &mut aut.generators {
                autgroup::annotate(a, &actions);
            }
            certificates.aut_generators = Some(aut.generators);
            certificates.edge_orbits = Some(et.orbits);
        }
    }

    let (tag, params) = match &family {
        Some(f) => (f.tag, f.parameters.clone()),
        None => (FamilyTag::None, Vec::new()),
    };
    Ok(ClassificationReport {
        matrix: m.clone(),
        hnf: group.hermite().h.clone(),
        order,
        degree: images.len(),
        view,
        degenerate_generator: degenerate,
        four_cycles,
        laut_order: laut.order(),
        linear_et: let_.transitive,
        edge_transitive,
        nonlinear_stab,
        family: tag,
        params,
        certificates,
    })
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "matrix            {}", self.matrix)?;
        writeln!(f, "hnf               {}", self.hnf)?;
        writeln!(f, "order             {}", self.order)?;
        writeln!(f, "degree            {}", self.degree)?;
        writeln!(
            f,
            "view              {}{}",
            self.view,
            if self.degenerate_generator { " (some e_i = 0)" } else { "" }
        )?;
        let shapes: Vec<String> = self
            .four_cycles
            .counts
            .iter()
            .map(|(s, c)| format!("{s}:{c}"))
            .collect();
        writeln!(
            f,
            "4-cycles          {} nontrivial [{}]",
            self.four_cycles.nontrivial(),
            shapes.join(" ")
        )?;
        writeln!(f, "|LAut(G,0)|       {}", self.laut_order)?;
        writeln!(f, "linearly ET       {}", self.linear_et)?;
        writeln!(f, "edge-transitive   {}", self.edge_transitive)?;
        writeln!(f, "nonlinear stab    {}", self.nonlinear_stab)?;
        if let Some(o) = &self.certificates.aut_order {
            writeln!(f, "|Aut(G)|          {o}")?;
        }
        write!(f, "family            {}", self.family)?;
        if !self.params.is_empty() {
            let p: Vec<String> = self.params.iter().map(i64::to_string).collect();
            write!(f, " ({})", p.join(","))?;
        }
        writeln!(f)?;
        if let Some(ev) = self.certificates.family.as_ref().and_then(|c| c.dim3.as_ref()) {
            writeln!(f, "order-3 witness   {}", ev.order3_witness)?;
            match ev.q_class {
                Some(c) => writeln!(f, "Q class           {c:?}")?,
                None => writeln!(f, "Q class           none")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(rows: &[&[i64]]) -> ClassificationReport {
        full_report(&IntMatrix::from_rows(rows), &ReportOptions::default()).unwrap()
    }

    #[test]
    fn torus_report() {
        let r = report(&[&[4, 0], &[0, 4]]);
        assert_eq!((r.order, r.degree, r.laut_order), (16, 4, 8));
        assert!(r.linear_et);
        assert_eq!(r.edge_transitive, Verdict::Yes);
        assert_eq!(r.nonlinear_stab, Verdict::Yes);
        assert_eq!(r.family, FamilyTag::Dim2M1);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["edge_transitive"], serde_json::json!(true));
        assert_eq!(json["family"], serde_json::json!("Dim2-M1"));
    }

    #[test]
    fn degenerate_uses_multigraph() {
        let r = report(&[&[1, 0], &[0, 3]]);
        assert!(r.degenerate_generator);
        assert_eq!(r.view, View::Multigraph);
        assert_eq!(r.degree, 2);
    }

    #[test]
    fn caps() {
        let m = IntMatrix::from_rows(&[[30, 0], [0, 30]]);
        let r = full_report(&m, &ReportOptions::default()).unwrap();
        assert_eq!(r.edge_transitive, Verdict::Unknown);
        assert_eq!(serde_json::to_value(&r).unwrap()["nonlinear_stab"], "unknown");
        let m = IntMatrix::from_rows(&[[300, 0], [0, 300]]);
        let r = full_report(&m, &ReportOptions::default()).unwrap();
        assert!(r.linear_et);
        assert_eq!(r.family, FamilyTag::Dim2M1);
        let opts = ReportOptions {
            brute_force_cap: 100_000,
            ..ReportOptions::default()
        };
        assert!(matches!(full_report(&m, &opts), Err(Error::TooLarge { .. })));
    }
}
