//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification or other error, 2 bad input,
//! 3 a size cap was exceeded.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::abelian::DEFAULT_ENUMERATION_CAP;
use crate::autgroup::{self, DEFAULT_BRUTE_FORCE_CAP};
use crate::cayley::{CayleyGraph, View};
use crate::classify::{self, ReportOptions};
use crate::error::Error;
use crate::intlin::IntMatrix;
use crate::verify::{self, Suite, VerifyOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "cayley-symmetry",
    version,
    about = "Edge-transitivity and automorphisms of Cayley graphs of Z^n / M Z^n"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Graph view; the default is the multigraph exactly when some e_i = 0.
    #[arg(long, global = true, value_parser = parse_view)]
    pub view: Option<View>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Largest graph (vertices) on which automorphism groups are computed.
    #[arg(long, global = true, env = "CAYLEY_CAP", default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
    pub cap: u64,
    /// Largest group that may be enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub enumeration_cap: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, default_value_t = 20)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub det_max: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full report for one matrix, e.g. "2,-1;0,3" or "[[2,-1],[0,3]]".
    Analyze { matrix: String },
    /// Family membership with its unimodular witness (dimensions 2 and 3).
    Classify { matrix: String },
    /// One JSON line per Hermite form up to --det-max; summary on stderr.
    Scan {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Keep one matrix per graph-isomorphism class.
        #[arg(long)]
        dedup: bool,
        /// Omit permutations and full edge orbits from the certificates.
        #[arg(long)]
        compact: bool,
    },
    /// Run a verification suite (dim2, dim3, fourcycles, adam, linearity,
    /// normal-forms) or `all`.
    Verify {
        suite: String,
        /// Size of each random corpus.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Graph isomorphism versus isomorphism by a signed permutation.
    Adam { first: String, second: String },
}

fn parse_view(s: &str) -> std::result::Result<View, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 2,
        Error::TooLarge { .. } => 3,
        _ => 1,
    }
}

fn parse_matrix(s: &str) -> crate::Result<IntMatrix> {
    s.parse()
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string(value).expect("reports serialize"))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn report_options(g: &GlobalArgs, full: bool) -> ReportOptions {
    ReportOptions {
        view: g.view,
        brute_force_cap: g.cap,
        enumeration_cap: g.enumeration_cap,
        full_certificates: full,
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Degenerate(format!("output: {e}"))
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> crate::Result<i32> {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { matrix } => {
            let m = parse_matrix(matrix)?;
            let r = classify::full_report(&m, &report_options(g, true))?;
            match g.output {
                OutputFormat::Json => emit(out, &r).map_err(io)?,
                OutputFormat::Text => write!(out, "{r}").map_err(io)?,
            }
            Ok(0)
        }
        Command::Classify { matrix } => {
            let m = parse_matrix(matrix)?;
            let fam = match m.rows() {
                2 => classify::classify_dim2(&m)?,
                3 => classify::classify_dim3(&m)?,
                n => {
                    return Err(Error::DimensionMismatch {
                        expected: if n < 2 { 2 } else { 3 },
                        found: n,
                    })
                }
            };
            match g.output {
                OutputFormat::Json => emit(out, &fam).map_err(io)?,
                OutputFormat::Text => {
                    let p: Vec<String> = fam.parameters.iter().map(i64::to_string).collect();
                    writeln!(out, "family   {} ({})", fam.tag, p.join(",")).map_err(io)?;
                    if let Some(u) = &fam.witness_unimodular {
                        writeln!(out, "U        {u}").map_err(io)?;
                    }
                    if let Some(s) = &fam.left_witness {
                        writeln!(out, "S        {s}").map_err(io)?;
                    }
                    if let Some(f) = fam.canonical() {
                        writeln!(out, "form     {f}").map_err(io)?;
                    }
                    if let Some(ev) = &fam.dim3 {
                        writeln!(out, "P        {}", ev.order3_witness).map_err(io)?;
                        writeln!(out, "Q        {}", ev.q).map_err(io)?;
                        writeln!(out, "class    {:?}", ev.q_class).map_err(io)?;
                    }
                }
            }
            Ok(0)
        }
        Command::Scan { dim, dedup, compact } => {
            let det_max = g.det_max.unwrap_or(16);
            if *dim == 0 || *dim > crate::linaut::MAX_DIM {
                return Err(Error::DimensionTooLarge(*dim));
            }
            if det_max > g.enumeration_cap {
                return Err(Error::too_large("det_max", det_max, g.enumeration_cap));
            }
            let mut classes = classify::hnf_classes(*dim, det_max);
            if *dedup {
                let view = g.view.unwrap_or_default();
                let reps = classify::dedup_isomorphic(&classes, view, g.jobs)?;
                classes = reps.into_iter().map(|i| classes[i].clone()).collect();
            }
            let opts = report_options(g, !compact);
            let mut first_error = None;
            let summary = classify::scan_each(&classes, &opts, g.jobs, |m, r| match r {
                Ok(r) => {
                    let _ = emit(out, &r);
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {m}: {e}");
                    first_error.get_or_insert(e);
                }
            })?;
            match g.output {
                OutputFormat::Json => emit(err, &summary).map_err(io)?,
                OutputFormat::Text => {
                    writeln!(err, "classes          {}", summary.total).map_err(io)?;
                    writeln!(err, "errors           {}", summary.errors).map_err(io)?;
                    writeln!(err, "linear_et        {}", summary.linear_et).map_err(io)?;
                    writeln!(err, "edge_transitive  {}", summary.edge_transitive).map_err(io)?;
                    writeln!(err, "  not linearly   {}", summary.et_not_linear).map_err(io)?;
                    writeln!(err, "nonlinear_stab   {}", summary.nonlinear_stab).map_err(io)?;
                    for (tag, n) in &summary.families {
                        writeln!(err, "{tag:<16} {n}").map_err(io)?;
                    }
                }
            }
            Ok(first_error.map_or(0, |e| exit_code(&e)))
        }
        Command::Verify { suite, samples } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse()?]
            };
            let opts = VerifyOptions {
                seed: g.seed,
                det_max: g.det_max.unwrap_or(VerifyOptions::default().det_max),
                samples: *samples,
                jobs: g.jobs,
                brute_force_cap: g.cap,
            };
            let (mut total, mut failed) = (0, 0);
            for s in suites {
                for c in verify::run_suite(s, &opts)? {
                    total += 1;
                    failed += usize::from(!c.passed);
                    match g.output {
                        OutputFormat::Json => emit(out, &c).map_err(io)?,
                        OutputFormat::Text => writeln!(out, "[{s}] {c}").map_err(io)?,
                    }
                }
            }
            writeln!(err, "{total} checks, {failed} failed").map_err(io)?;
            Ok(i32::from(failed > 0))
        }
        Command::Adam { first, second } => {
            let (a, b) = (parse_matrix(first)?, parse_matrix(second)?);
            let view = g.view.unwrap_or_default();
            let ga = CayleyGraph::build_capped(&a, view, g.enumeration_cap)?;
            let gb = CayleyGraph::build_capped(&b, view, g.enumeration_cap)?;
            let iso = autgroup::are_isomorphic(&ga, &gb)?;
            let adam = autgroup::adam_isomorphic(&a, &b)?;
            #[derive(Serialize)]
            struct AdamReport {
                isomorphic: bool,
                adam_isomorphic: bool,
                isomorphism: Option<Vec<u32>>,
                signed_permutation: Option<crate::linaut::SignedPermutation>,
            }
            let r = AdamReport {
                isomorphic: iso.is_some(),
                adam_isomorphic: adam.is_some(),
                isomorphism: iso,
                signed_permutation: adam,
            };
            match g.output {
                OutputFormat::Json => emit(out, &r).map_err(io)?,
                OutputFormat::Text => {
                    writeln!(out, "isomorphic       {}", r.isomorphic).map_err(io)?;
                    writeln!(out, "adam isomorphic  {}", r.adam_isomorphic).map_err(io)?;
                    if let Some(p) = &r.signed_permutation {
                        writeln!(out, "P                {p}").map_err(io)?;
                    }
                }
            }
            Ok(0)
        }
    }
}
