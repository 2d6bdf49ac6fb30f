//! Self-checking suites that replay the characterization results on concrete
//! matrices. Every check carries the certificate it relied on.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::autgroup::{self, DEFAULT_BRUTE_FORCE_CAP};
use crate::cayley::{self, CayleyGraph, FourCycleShape, Generator, View};
use crate::classify::{self, families, FamilyTag, ReportOptions, Verdict};
use crate::error::{Error, Result};
use crate::intlin::{self, IntMatrix};
use crate::linaut::{self, QClass, SignedPermutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Dim2,
    Dim3,
    FourCycles,
    Adam,
    Linearity,
    NormalForms,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Dim2,
        Suite::Dim3,
        Suite::FourCycles,
        Suite::Adam,
        Suite::Linearity,
        Suite::NormalForms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Dim2 => "dim2",
            Suite::Dim3 => "dim3",
            Suite::FourCycles => "fourcycles",
            Suite::Adam => "adam",
            Suite::Linearity => "linearity",
            Suite::NormalForms => "normal-forms",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::parse(1, 1, format!("unknown suite `{s}`")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Determinant bound for exhaustive scans.
    pub det_max: u64,
    /// Size of each random corpus.
    pub samples: usize,
    pub jobs: Option<usize>,
    pub brute_force_cap: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 20,
            det_max: 256,
            samples: 200,
            jobs: None,
            brute_force_cap: DEFAULT_BRUTE_FORCE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    match suite {
        Suite::Dim2 => dim2(opts),
        Suite::Dim3 => dim3(opts),
        Suite::FourCycles => fourcycles(opts),
        Suite::Adam => adam(opts),
        Suite::Linearity => linearity(opts),
        Suite::NormalForms => normal_forms(opts),
    }
}

fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(rows)
}

fn report_opts(opts: &VerifyOptions, view: Option<View>) -> ReportOptions {
    ReportOptions {
        view,
        brute_force_cap: opts.brute_force_cap,
        full_certificates: false,
        ..ReportOptions::default()
    }
}

fn default_view(m: &IntMatrix) -> Result<View> {
    let g = crate::abelian::QuotientGroup::new(m)?;
    let degenerate = (0..m.rows()).any(|i| {
        let mut e = vec![0; m.rows()];
        e[i] = 1;
        g.canonical(&e).is_zero()
    });
    Ok(if degenerate {
        View::Multigraph
    } else {
        View::Simple
    })
}

fn det_abs(m: &IntMatrix) -> BigInt {
    intlin::det(m).magnitude().clone().into()
}

/// Collects failures of a sweep into one summary line plus one line each.
struct Sweep {
    name: String,
    checked: usize,
    failures: Vec<String>,
}

impl Sweep {
    fn new(name: &str) -> Self {
        Sweep {
            name: name.to_string(),
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, out: &mut Vec<CheckOutcome>, extra: &str) {
        let passed = self.failures.is_empty();
        let detail = format!(
            "{} checked, {} failed{}",
            self.checked,
            self.failures.len(),
            extra
        );
        out.push(CheckOutcome::new(&self.name, passed, detail));
        for f in self.failures.into_iter().take(20) {
            out.push(CheckOutcome::new(&self.name, false, f));
        }
    }
}

fn dim2(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    family_soundness(opts, &mut out)?;
    out.extend(catalog()?);
    out.extend(aut_orders()?);
    completeness(opts, &mut out)?;
    Ok(out)
}

/// Every instantiation of the three two-dimensional forms is linearly and
/// genuinely edge-transitive.
fn family_soundness(opts: &VerifyOptions, out: &mut Vec<CheckOutcome>) -> Result<()> {
    let forms: [(&str, Dim2Form); 3] = [
        ("M1", families::dim2_m1),
        ("M2", families::dim2_m2),
        ("M3", families::dim2_m3),
    ];
    for (name, form) in forms {
        let mut sweep = Sweep::new(&format!("dim2 {name} soundness"));
        for a in -6..=6 {
            for b in -6..=6 {
                let f = form(a, b);
                let d = det_abs(&f);
                if d == BigInt::from(0) || d > BigInt::from(256) {
                    continue;
                }
                let r = classify::full_report(&f, &report_opts(opts, None))?;
                sweep.check(
                    r.linear_et && r.edge_transitive == Verdict::Yes,
                    || format!("({a},{b}) {f}: linear_et {} edge_transitive {}", r.linear_et, r.edge_transitive),
                );
            }
        }
        sweep.finish(out, "");
    }
    Ok(())
}

/// The three lists of small matrices with nontrivial 4-cycles.
pub fn catalog() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let opts = ReportOptions {
        full_certificates: false,
        ..ReportOptions::default()
    };
    let list1 = [
        m(&[&[1, 0], &[3, 2]]),
        m(&[&[2, 0], &[0, 2]]),
        m(&[&[4, 3], &[0, 1]]),
        m(&[&[4, 1], &[0, 3]]),
    ];
    for x in &list1 {
        let r = classify::full_report(x, &opts)?;
        out.push(CheckOutcome::new(
            format!("catalog list 1 {x}"),
            r.four_cycles.nontrivial() > 0 && r.nonlinear_stab == Verdict::No,
            format!(
                "nontrivial 4-cycles {}, nonlinear_stab {}, |Aut(G,0)| {} = |linear actions|",
                r.four_cycles.nontrivial(),
                r.nonlinear_stab,
                r.certificates.stabilizer0_order.clone().unwrap_or_default()
            ),
        ));
    }
    let list2 = [
        m(&[&[4, 0], &[0, 2]]),
        m(&[&[2, -1], &[0, 3]]),
        m(&[&[3, 1], &[1, 2]]),
    ];
    for (i, x) in list2.iter().enumerate() {
        let r = classify::full_report(x, &opts)?;
        let mut ok = r.four_cycles.nontrivial() > 0
            && r.edge_transitive == Verdict::Yes
            && !r.linear_et
            && r.nonlinear_stab == Verdict::Yes;
        let mut detail = format!(
            "nontrivial 4-cycles {}, edge_transitive {}, linear_et {}, nonlinear witness {:?}",
            r.four_cycles.nontrivial(),
            r.edge_transitive,
            r.linear_et,
            r.certificates.nonlinear_witness.as_ref().map(|a| &a.perm)
        );
        if i < 2 {
            let g = CayleyGraph::build(x, View::Multigraph)?;
            let nl = autgroup::nonlinear_stabilizer_elements(&g)?;
            ok &= nl.is_empty();
            detail.push_str(&format!(", multigraph nonlinear elements {}", nl.len()));
        }
        out.push(CheckOutcome::new(format!("catalog list 2 {x}"), ok, detail));
    }
    let list3 = [
        m(&[&[4, 0], &[0, 4]]),
        m(&[&[3, 1], &[1, 3]]),
        m(&[&[3, -1], &[1, 3]]),
    ];
    for x in &list3 {
        let r = classify::full_report(x, &opts)?;
        out.push(CheckOutcome::new(
            format!("catalog list 3 {x}"),
            r.four_cycles.nontrivial() > 0
                && r.linear_et
                && r.edge_transitive == Verdict::Yes
                && r.nonlinear_stab == Verdict::Yes,
            format!(
                "nontrivial 4-cycles {}, linear_et {} via {:?}, nonlinear witness {:?}",
                r.four_cycles.nontrivial(),
                r.linear_et,
                r.certificates.linear_witnesses.last().cloned().flatten().map(|p| p.matrix().to_string()),
                r.certificates.nonlinear_witness.as_ref().map(|a| &a.perm)
            ),
        ));
    }
    Ok(out)
}

fn aut_orders() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for (x, want) in [(m(&[&[2, -1], &[0, 3]]), 72u32), (m(&[&[4, 0], &[0, 4]]), 384)] {
        let g = CayleyGraph::build(&x, View::Simple)?;
        let a = autgroup::automorphism_group(&g)?;
        let gens_ok = a.generators.iter().all(|s| g.graph().is_automorphism(&s.perm));
        let orbit_stab = a.order == BigInt::from(g.order()) * &a.stabilizer0_order;
        out.push(CheckOutcome::new(
            format!("aut order {x}"),
            a.order == BigInt::from(want) && gens_ok && orbit_stab && a.zero_orbit == g.order(),
            format!(
                "|Aut| {} = {} * {} (orbit sizes {:?})",
                a.order,
                g.order(),
                a.stabilizer0_order,
                a.orbit_sizes
            ),
        ));
    }
    Ok(out)
}

/// Linear edge-transitivity coincides with membership in a family over all
/// Hermite forms up to `det_max`, and every edge-transitive graph that is not
/// linearly so has a nonlinear automorphism fixing zero.
fn completeness(opts: &VerifyOptions, out: &mut Vec<CheckOutcome>) -> Result<()> {
    let classes = classify::hnf_classes(2, opts.det_max);
    let mut fam = Sweep::new("dim2 completeness");
    let mut cert = Sweep::new("dim2 nonlinear certificates");
    let mut sound = Sweep::new("dim2 linear implies edge-transitive");
    let mut errors = Vec::new();
    let summary = classify::scan_each(&classes, &report_opts(opts, None), opts.jobs, |x, r| {
        let r = match r {
            Ok(r) => r,
            Err(e) => {
                errors.push(format!("{x}: {e}"));
                return;
            }
        };
        let found = r.certificates.family.as_ref();
        fam.check(
            r.linear_et == (r.family != FamilyTag::None)
                && found.is_none_or(|f| f.verify(x)),
            || format!("{x}: linear_et {} family {}", r.linear_et, r.family),
        );
        if r.edge_transitive == Verdict::Yes && !r.linear_et {
            cert.check(r.nonlinear_stab == Verdict::Yes, || {
                format!("{x}: edge-transitive without linear or nonlinear certificate")
            });
        }
        if r.linear_et {
            sound.check(r.edge_transitive != Verdict::No, || format!("{x}"));
        }
    })?;
    let extra = format!(
        " over {} classes with det <= {} ({} linearly ET, {} ET only by nonlinear maps)",
        summary.total, opts.det_max, summary.linear_et, summary.et_not_linear
    );
    fam.finish(out, &extra);
    cert.finish(out, "");
    sound.finish(out, "");
    out.push(CheckOutcome::new(
        "dim2 scan errors",
        errors.is_empty(),
        if errors.is_empty() {
            "none".to_string()
        } else {
            errors.join("; ")
        },
    ));
    Ok(())
}

type Dim2Form = fn(i64, i64) -> IntMatrix;
type Dim3Form = fn(i64, i64, i64) -> IntMatrix;

/// The sign changes relating the variants to the base forms:
/// `left · base(a', b', c') · right = variant(a, b, c)`.
pub struct SignRelation {
    pub name: &'static str,
    pub variant: Dim3Form,
    pub base: Dim3Form,
    pub left: [i8; 3],
    pub right: [i8; 3],
    /// Parameter signs: `(a', b', c') = (sa·a, sb·b, sc·c)`.
    pub params: [i64; 3],
}

pub fn sign_relations() -> [SignRelation; 6] {
    [
        SignRelation {
            name: "M2",
            variant: families::dim3_m2,
            base: families::dim3_m1,
            left: [1, -1, 1],
            right: [-1, 1, -1],
            params: [-1, 1, -1],
        },
        SignRelation {
            name: "M3",
            variant: families::dim3_m3,
            base: families::dim3_m1,
            left: [1, 1, -1],
            right: [1, 1, -1],
            params: [1, 1, -1],
        },
        SignRelation {
            name: "M4",
            variant: families::dim3_m4,
            base: families::dim3_m1,
            left: [-1, 1, 1],
            right: [1, -1, -1],
            params: [-1, 1, 1],
        },
        SignRelation {
            name: "M2'",
            variant: families::dim3_m2_prime,
            base: families::dim3_m1_prime,
            left: [1, -1, 1],
            right: [1, 1, 1],
            params: [1, 1, 1],
        },
        SignRelation {
            name: "M3'",
            variant: families::dim3_m3_prime,
            base: families::dim3_m1_prime,
            left: [1, 1, -1],
            right: [1, 1, 1],
            params: [1, 1, 1],
        },
        SignRelation {
            name: "M4'",
            variant: families::dim3_m4_prime,
            base: families::dim3_m1_prime,
            left: [1, -1, -1],
            right: [1, 1, 1],
            params: [1, 1, 1],
        },
    ]
}

fn dim3(_opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let range = || (-3i64..=3).flat_map(|a| (-3i64..=3).flat_map(move |b| (-3i64..=3).map(move |c| (a, b, c))));
    let admissible = |f: &IntMatrix| {
        let d = det_abs(f);
        d != BigInt::from(0) && d <= BigInt::from(512)
    };

    let bases: [(&str, Dim3Form, FamilyTag); 2] = [
        ("M1", families::dim3_m1, FamilyTag::Dim3M1),
        ("M1'", families::dim3_m1_prime, FamilyTag::Dim3M1Prime),
    ];
    for (name, form, tag) in bases {
        let mut sweep = Sweep::new(&format!("dim3 {name} linear with order-3 witness"));
        let mut class = Sweep::new(&format!("dim3 {name} classification"));
        for (a, b, c) in range() {
            let f = form(a, b, c);
            if !admissible(&f) {
                continue;
            }
            let laut = linaut::linear_stabilizer(&f)?;
            let let_ = linaut::linear_edge_transitivity_from(&laut, 3);
            let w = linaut::dim3_order3_witness(&f)?;
            sweep.check(let_.transitive && w.is_some(), || {
                format!("({a},{b},{c}) {f}: linear_et {} witness {:?}", let_.transitive, w)
            });
            let fam = classify::classify_dim3_with(&f, &laut)?;
            class.check(fam.tag == tag && fam.parameters == vec![a, b, c] && fam.verify(&f), || {
                format!("({a},{b},{c}): got {} {:?}", fam.tag, fam.parameters)
            });
        }
        sweep.finish(&mut out, "");
        class.finish(&mut out, "");
    }

    for rel in sign_relations() {
        let mut sweep = Sweep::new(&format!("dim3 {} isomorphic to base form", rel.name));
        let left = SignedPermutation::diagonal(&rel.left);
        let right = SignedPermutation::diagonal(&rel.right).matrix();
        for (a, b, c) in range() {
            let v = (rel.variant)(a, b, c);
            if !admissible(&v) {
                continue;
            }
            let base = (rel.base)(rel.params[0] * a, rel.params[1] * b, rel.params[2] * c);
            let identity = &(&left.matrix() * &base) * &right == v;
            let (gb, gv) = (
                CayleyGraph::build(&base, View::Simple)?,
                CayleyGraph::build(&v, View::Simple)?,
            );
            let explicit = autgroup::linear_isomorphism(&gb, &gv, &left).is_some();
            let searched = autgroup::are_isomorphic(&gb, &gv)?.is_some();
            sweep.check(identity && explicit && searched, || {
                format!(
                    "({a},{b},{c}): identity {identity} explicit map {explicit} search {searched}"
                )
            });
        }
        sweep.finish(&mut out, "");
    }

    out.extend(q_classes());
    Ok(out)
}

/// The similarity facts about the order-3 signed permutations and the two
/// representatives `Q₁`, `Q₂`.
pub fn q_classes() -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let (q1, q2) = (linaut::q1(), linaut::q2());
    out.push(CheckOutcome::new(
        "Q1 and Q2 in distinct classes",
        linaut::q_class(&q1) == Some(QClass::Q1) && linaut::q_class(&q2) == Some(QClass::Q2),
        "lattice index of ker(Q-I) + ker(Q^2+Q+I) is 1 for Q1 and 3 for Q2",
    ));
    let r = m(&[&[1, 0, 2], &[0, -1, 1], &[0, -1, 0]]);
    let u = m(&[&[1, 0, 1], &[0, 0, 1], &[0, -1, 1]]);
    out.push(CheckOutcome::new(
        "Q2 similar to its variant",
        linaut::similarity_witness_check(&q2, &r, &u).unwrap_or(false),
        format!("Q2 U = U R with U = {u}"),
    ));
    let p = linaut::p_matrices();
    let u1 = m(&[&[1, 0, 0], &[1, -1, 1], &[1, 0, 1]]);
    out.push(CheckOutcome::new(
        "P1 similar to Q2",
        linaut::similarity_witness_check(&p[0], &q2, &u1).unwrap_or(false),
        format!("P1 U = U Q2 with U = {u1}"),
    ));
    let diags: [[i8; 3]; 3] = [[-1, 1, -1], [1, 1, -1], [1, -1, -1]];
    for (i, d) in diags.iter().enumerate() {
        let dm = SignedPermutation::diagonal(d).matrix();
        let ok = linaut::similarity_witness_check(&p[0], &p[i + 1], &dm).unwrap_or(false);
        out.push(CheckOutcome::new(
            format!("P1 similar to P{}", i + 2),
            ok,
            format!("P1 D = D P{} with D = {dm}", i + 2),
        ));
    }
    for (i, pi) in p.iter().enumerate() {
        let class = linaut::q_class(pi);
        let found = linaut::bounded_similarity_search(pi, &q2, linaut::DEFAULT_SIMILARITY_BOUND).witness();
        out.push(CheckOutcome::new(
            format!("P{} in the class of Q2", i + 1),
            class == Some(QClass::Q2) && found.is_some(),
            format!("class {class:?}, bounded search witness {}", found.map_or("none".into(), |u| u.to_string())),
        ));
    }
    out
}

fn fourcycles(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let t = classify::fourcycle_case_taxonomy(&m(&[&[4, 0], &[0, 4]]))?;
    let cols: Vec<[i64; 2]> = t.c_members.iter().flatten().map(|c| c.column).collect();
    out.push(CheckOutcome::new(
        "taxonomy torus 4x4",
        t.count(FourCycleShape::FourA) == 2 && t.nontrivial() == 2 && cols == [[4, 0], [0, 4]],
        format!("counts {:?}, C members {cols:?}", t.counts),
    ));
    let t = classify::fourcycle_case_taxonomy(&m(&[&[3, 1], &[1, 2]]))?;
    out.push(CheckOutcome::new(
        "taxonomy [[3,1],[1,2]]",
        t.count(FourCycleShape::ThreeAB) >= 1,
        format!("counts {:?}", t.counts),
    ));
    let t = classify::fourcycle_case_taxonomy(&m(&[&[5, 0], &[0, 7]]))?;
    out.push(CheckOutcome::new(
        "taxonomy [[5,0],[0,7]]",
        t.nontrivial() == 0 && t.c_members.as_ref().is_some_and(Vec::is_empty),
        format!("counts {:?}", t.counts),
    ));

    for (dim, det_max) in [(2usize, opts.det_max.min(64)), (3, opts.det_max.min(27))] {
        let mut sweep = Sweep::new(&format!("dim{dim} 4-cycle enumeration against walks"));
        for x in classify::hnf_classes(dim, det_max) {
            let (ok, why) = check_four_cycles(&x)?;
            sweep.check(ok, || format!("{x}: {why}"));
        }
        sweep.finish(&mut out, &format!(" (all Hermite forms with det <= {det_max})"));
    }
    Ok(out)
}

/// Compares the lattice-based relation list with a direct search over all
/// 4-step walks from zero in the quotient group.
fn check_four_cycles(x: &IntMatrix) -> Result<(bool, String)> {
    let n = x.rows();
    let rels = cayley::four_cycles(x)?;
    let g = CayleyGraph::build(x, View::Multigraph)?;
    for r in &rels {
        let lhs: Vec<BigInt> = (0..n)
            .map(|i| (0..n).map(|j| &x[(i, j)] * &r.witness[j]).sum())
            .collect();
        let want: Vec<BigInt> = r.coeffs.iter().map(|&c| BigInt::from(c)).collect();
        if lhs != want {
            return Ok((false, format!("witness fails for {:?}", r.coeffs)));
        }
        let end = r.terms.iter().fold(0u32, |v, &t| g.step(v, t));
        if end != 0 {
            return Ok((false, format!("walk {:?} does not close", r.terms)));
        }
    }
    let gens: Vec<Generator> = Generator::all(n).collect();
    let mut closed = std::collections::BTreeSet::new();
    for a in 0..gens.len() {
        for b in a..gens.len() {
            for c in b..gens.len() {
                for d in c..gens.len() {
                    let t = [gens[a], gens[b], gens[c], gens[d]];
                    if t.iter().fold(0u32, |v, &s| g.step(v, s)) == 0 {
                        closed.insert(t.map(|s| (s.axis, s.positive)));
                    }
                }
            }
        }
    }
    let listed: std::collections::BTreeSet<_> =
        rels.iter().map(|r| r.terms.map(|s| (s.axis, s.positive))).collect();
    let nontrivial_walks = closed
        .iter()
        .filter(|t| !t.iter().any(|&(i, s)| t.contains(&(i, !s))))
        .count();
    let nontrivial_listed = rels.iter().filter(|r| !r.trivial).count();
    if closed != listed || nontrivial_walks != nontrivial_listed {
        return Ok((
            false,
            format!("{} closed walks vs {} listed relations", closed.len(), listed.len()),
        ));
    }
    Ok((true, String::new()))
}

/// The non-Ádám pairs `[[2k+1,2],[1,2]]`, `[[2k,2],[0,2]]`.
pub fn delorme_pair(k: i64) -> (IntMatrix, IntMatrix) {
    (
        m(&[&[2 * k + 1, 2], &[1, 2]]),
        m(&[&[2 * k, 2], &[0, 2]]),
    )
}

fn adam(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    // det = 4k
    let kmax = (opts.det_max / 4).max(1) as i64;
    let mut sweep = Sweep::new("Delorme pairs isomorphic, not Adam, linearly ET");
    for k in 1..=kmax {
        let (a, b) = delorme_pair(k);
        let (ga, gb) = (CayleyGraph::build(&a, View::Simple)?, CayleyGraph::build(&b, View::Simple)?);
        let iso = autgroup::are_isomorphic(&ga, &gb)?;
        let iso_ok = iso
            .as_ref()
            .is_some_and(|p| ga.graph().is_isomorphism_to(gb.graph(), p));
        let adam = autgroup::adam_isomorphic(&a, &b)?;
        let la = linaut::is_linearly_edge_transitive(&a)?.transitive;
        let lb = linaut::is_linearly_edge_transitive(&b)?.transitive;
        sweep.check(iso_ok && adam.is_none() && la && lb, || {
            format!("k={k}: isomorphic {iso_ok} adam {} linear {la}/{lb}", adam.is_some())
        });
    }
    sweep.finish(&mut out, &format!(" (k = 1..={kmax})"));

    let swap = m(&[&[0, 1], &[1, 0]]);
    let mut sweep = Sweep::new("odd first column gives a linear isomorphism");
    for k in 0..=20 {
        let lhs = intlin::hnf(&(&swap * &m(&[&[2 * k + 1, 2], &[0, 2]])))?.h;
        let rhs = intlin::hnf(&m(&[&[2 * k + 2, 2], &[1, 2]]))?.h;
        sweep.check(lhs == rhs, || format!("k={k}: {lhs} vs {rhs}"));
    }
    sweep.finish(&mut out, " (k = 0..=20)");

    let p = autgroup::adam_isomorphic(&m(&[&[3, 1], &[1, 3]]), &m(&[&[3, -1], &[-1, 3]]))?;
    out.push(CheckOutcome::new(
        "Adam isomorphism by a signed permutation",
        p.is_some(),
        format!("P = {}", p.map_or("none".into(), |p| p.to_string())),
    ));
    Ok(out)
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, det_max: u64) -> Option<IntMatrix> {
    let r = if n == 2 { 12 } else { 5 };
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(-r..=r)).collect())
        .collect();
    let x = IntMatrix::from_rows(&rows);
    let d = det_abs(&x);
    (d != BigInt::from(0) && d <= BigInt::from(det_max)).then_some(x)
}

/// Automorphisms fixing zero are linear when there is no nontrivial 4-cycle,
/// or exactly one of shape `4a` or `3a+b`.
fn linearity(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let det_max = opts.det_max.min(200);
    let mut none = Sweep::new("no nontrivial 4-cycles implies linear");
    let mut single = Sweep::new("single 4a or 3a+b relation implies linear");
    let (mut dims_none, mut dims_single) = ([0usize; 2], [0usize; 2]);
    let mut attempts = 0;
    while (none.checked < opts.samples || single.checked < opts.samples) && attempts < 400_000 {
        attempts += 1;
        let n = if attempts % 2 == 0 { 2 } else { 3 };
        let Some(x) = random_matrix(&mut rng, n, det_max) else {
            continue;
        };
        let rels = cayley::nontrivial_relations(&x)?;
        let target = match rels.as_slice() {
            [] if none.checked < opts.samples => &mut none,
            [r] if matches!(r.shape, FourCycleShape::FourA | FourCycleShape::ThreeAB)
                && single.checked < opts.samples =>
            {
                &mut single
            }
            _ => continue,
        };
        if rels.is_empty() {
            dims_none[n - 2] += 1;
        } else {
            dims_single[n - 2] += 1;
        }
        let g = CayleyGraph::build(&x, default_view(&x)?)?;
        let nl = autgroup::nonlinear_stabilizer_elements(&g)?;
        target.check(nl.is_empty(), || {
            format!("{x}: {} nonlinear elements, first {:?}", nl.len(), nl[0].perm)
        });
    }
    let enough = none.checked >= opts.samples && single.checked >= opts.samples;
    none.finish(
        &mut out,
        &format!(" ({} dim 2, {} dim 3, seed {})", dims_none[0], dims_none[1], opts.seed),
    );
    single.finish(
        &mut out,
        &format!(" ({} dim 2, {} dim 3, seed {})", dims_single[0], dims_single[1], opts.seed),
    );
    out.push(CheckOutcome::new(
        "linearity corpus size",
        enough,
        format!("{attempts} random matrices drawn"),
    ));
    Ok(out)
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let k: i64 = rng.gen_range(-2..=2);
        // column j += k * column i
        u = &u * &IntMatrix::from_fn(n, n, |r, c| {
            BigInt::from(i64::from(r == c) + if r == i && c == j { k } else { 0 })
        });
    }
    if rng.gen_bool(0.5) {
        let p = SignedPermutation::all(n).nth(rng.gen_range(0..8)).expect("at least 8");
        u = &u * &p.matrix();
    }
    u
}

fn random_signed_permutation(rng: &mut ChaCha8Rng, n: usize) -> SignedPermutation {
    let mut sigma: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        sigma.swap(i, rng.gen_range(0..=i));
    }
    let signs = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    SignedPermutation::new(sigma, signs).expect("valid signed permutation")
}

/// Right multiplication by a unimodular matrix fixes the Hermite form and the
/// graph; left multiplication by a signed permutation gives an isomorphic
/// graph.
fn normal_forms(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut right = Sweep::new("hnf(M) = hnf(MU) and G(M) = G(MU)");
    let mut left = Sweep::new("G(M) isomorphic to G(PM)");
    let pairs = opts.samples * 5;
    while right.checked < pairs {
        let n = if right.checked.is_multiple_of(2) { 2 } else { 3 };
        let Some(x) = random_matrix(&mut rng, n, 200) else {
            continue;
        };
        let u = random_unimodular(&mut rng, n);
        let xu = &x * &u;
        let same_hnf = intlin::hnf(&x)?.h == intlin::hnf(&xu)?.h;
        let g = CayleyGraph::build(&x, View::Multigraph)?;
        let gu = CayleyGraph::build(&xu, View::Multigraph)?;
        right.check(same_hnf && g.graph() == gu.graph(), || format!("M = {x}, U = {u}"));

        let p = random_signed_permutation(&mut rng, n);
        let gp = CayleyGraph::build(&(&p.matrix() * &x), View::Multigraph)?;
        let explicit = autgroup::linear_isomorphism(&g, &gp, &p).is_some();
        let searched = autgroup::are_isomorphic(&g, &gp)?.is_some();
        left.check(explicit && searched, || {
            format!("M = {x}, P = {p}: explicit {explicit} search {searched}")
        });
    }
    right.finish(&mut out, &format!(" (seed {})", opts.seed));
    left.finish(&mut out, "");
    Ok(out)
}
