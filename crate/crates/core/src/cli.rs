//! Command-line surface. [`run`] returns the exit code: 0 when the check
//! passed, 1 when it failed, 2 on an input error.

use crate::different_fn::{self, DifferentError};
use crate::elliptic_reduction::{build_pot_mult_cover, classify_pot_mult, EllipticError};
use crate::harmonic_cover::CoverMap;
use crate::io::{self, IoError};
use crate::metric_graph::{farey_multiplicity, MetricGraph};
use crate::quotient_sing::{build_quotient_cover, QuotientError};
use crate::rational::{self, Rational};
use crate::simultaneous::{Audit, SimultaneousSkeleton};
use clap::{Parser, Subcommand, ValueEnum};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(
    name = "skeleta",
    version,
    about = "Checks and builders for skeleta under base change"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Tikz,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Euler characteristic and canonical divisor of a graph.
    Chi { graph: PathBuf },
    /// Checks that every edge has length 1/(m1 m2).
    CheckModel { graph: PathBuf },
    /// Balancing and local degrees of a cover.
    CheckCover { cover: PathBuf },
    /// Riemann–Hurwitz residual of a function on the total graph.
    CheckRh { cover: PathBuf, function: PathBuf },
    /// Solves for the different from its values at anchor vertices.
    SolveDifferent {
        cover: PathBuf,
        /// `id=a/b`; repeatable.
        #[arg(long = "anchor", required = true)]
        anchors: Vec<String>,
    },
    /// Reduction types over k and k' of a potentially multiplicative curve.
    ClassifyElliptic {
        #[arg(long, allow_negative_numbers = true)]
        nu: i64,
        #[arg(long, allow_negative_numbers = true)]
        dlog: i64,
    },
    /// Writes the potentially multiplicative simultaneous skeleton.
    BuildElliptic {
        #[arg(long)]
        nu: u64,
        #[arg(long)]
        dlog: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Writes the ordinary Z/p simultaneous skeleton.
    BuildQuotient {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        j: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        genus: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Multiplicity of the point at distance `dist` on a neat interval.
    Farey {
        #[arg(long)]
        mult: u64,
        #[arg(long)]
        dist: String,
    },
    /// Renders a graph, optionally with a function on it.
    Render {
        graph: PathBuf,
        #[arg(long)]
        different: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
}

/// Input problems, reported with a machine-readable code and exit 2.
#[derive(Debug)]
struct InputError {
    code: &'static str,
    message: String,
}

impl From<IoError> for InputError {
    fn from(e: IoError) -> Self {
        Self {
            code: e.code(),
            message: e.to_string(),
        }
    }
}

impl From<DifferentError> for InputError {
    fn from(e: DifferentError) -> Self {
        IoError::from(e).into()
    }
}

impl From<EllipticError> for InputError {
    fn from(e: EllipticError) -> Self {
        Self {
            code: "invalid-parameters",
            message: e.to_string(),
        }
    }
}

impl From<QuotientError> for InputError {
    fn from(e: QuotientError) -> Self {
        Self {
            code: "invalid-parameters",
            message: e.to_string(),
        }
    }
}

impl From<crate::metric_graph::GraphError> for InputError {
    fn from(e: crate::metric_graph::GraphError) -> Self {
        IoError::from(e).into()
    }
}

impl From<crate::harmonic_cover::CoverError> for InputError {
    fn from(e: crate::harmonic_cover::CoverError) -> Self {
        IoError::from(e).into()
    }
}

fn input(code: &'static str, message: impl Into<String>) -> InputError {
    InputError {
        code,
        message: message.into(),
    }
}

/// Report lines and whether the check passed.
type Outcome = Result<(Vec<String>, bool), InputError>;

pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((lines, passed)) => {
            for line in lines {
                let _ = writeln!(out, "{line}");
            }
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {}", e.code, e.message);
            2
        }
    }
}

fn load_graph(path: &Path) -> Result<MetricGraph, InputError> {
    Ok(io::parse_graph(&io::read_file(path)?)?)
}

fn load_cover(path: &Path) -> Result<CoverMap, InputError> {
    let text = io::read_file(path)?;
    Ok(io::parse_cover(&text, path.parent())?)
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Chi { graph } => {
            let g = load_graph(&graph)?;
            Ok((
                vec![
                    format!("chi = {}", g.euler_char()),
                    format!("K = {}", g.canonical_divisor()),
                ],
                true,
            ))
        }
        Command::CheckModel { graph } => {
            let g = load_graph(&graph)?;
            let mut lines = Vec::new();
            for e in g.edges() {
                let expected = g.snc_length(e);
                if e.length != expected {
                    lines.push(format!(
                        "edge {}: length {}, expected {}",
                        e.id,
                        rational::format(&e.length),
                        rational::format(&expected)
                    ));
                }
            }
            lines.sort();
            let ok = lines.is_empty();
            lines.push(format!("snc: {}", pass_fail(ok)));
            Ok((lines, ok))
        }
        Command::CheckCover { cover } => check_cover(&load_cover(&cover)?),
        Command::CheckRh { cover, function } => {
            let cover = load_cover(&cover)?;
            let delta = io::parse_function(&io::read_file(&function)?, cover.total())?;
            let target = different_fn::ramification_divisor(&cover)?;
            let lap = different_fn::laplacian(cover.total(), &delta)?;
            let residual = &lap - &target;
            let ok = residual.is_zero();
            Ok((
                vec![
                    format!("K' - phi*K = {target}"),
                    format!("laplacian = {lap}"),
                    format!("residual = {residual}"),
                    format!("rh: {}", pass_fail(ok)),
                ],
                ok,
            ))
        }
        Command::SolveDifferent { cover, anchors } => {
            let cover = load_cover(&cover)?;
            let mut fixed = BTreeMap::new();
            for a in &anchors {
                let (id, value) = a.rsplit_once('=').ok_or_else(|| {
                    input(
                        "bad-anchor",
                        format!("anchor `{a}` is not of the form id=a/b"),
                    )
                })?;
                let value: Rational = rational::parse(value).ok_or_else(|| {
                    input(
                        "bad-rational",
                        format!("`{value}` in anchor `{a}` is not a rational number"),
                    )
                })?;
                fixed.insert(id.to_string(), value);
            }
            match different_fn::solve_different(&cover, &fixed) {
                Ok(f) => Ok((
                    vec![io::serialize_function(&f).trim_end().to_string()],
                    true,
                )),
                Err(DifferentError::InconsistentAnchors { vertex, residual }) => Ok((
                    vec![
                        format!("residual = {}[{vertex}]", rational::format(&residual)),
                        "solve: fail".to_string(),
                    ],
                    false,
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::ClassifyElliptic { nu, dlog } => {
            let (over_k, over_k2) = classify_pot_mult(nu, dlog)?;
            Ok((vec![format!("{over_k} / {over_k2}")], true))
        }
        Command::BuildElliptic { nu, dlog, out } => {
            let f = build_pot_mult_cover(nu, dlog)?;
            let (a, b) = classify_pot_mult(nu as i64, dlog as i64)?;
            let mut lines = vec![
                format!("types = {a} / {b}"),
                format!("d(x',y') = {}", rational::format(&f.total_tail_length()?)),
                format!("d(x,y) = {}", rational::format(&f.base_tail_length()?)),
            ];
            finish_build(&f.skeleton, &out, &mut lines)
        }
        Command::BuildQuotient {
            p,
            j,
            d,
            genus,
            out,
        } => {
            let f = build_quotient_cover(p, j, d, genus)?;
            let c = &f.counts;
            let mut lines = vec![
                format!("genus' = {}", c.genus_total),
                format!("chain_edges = {}", c.chain_edges),
                format!(
                    "chain_vertices = {} inclusive, {} excluding x, {} interior",
                    c.chain_vertices_inclusive,
                    c.chain_vertices_excluding_x,
                    c.chain_vertices_interior
                ),
                format!("d(x,y) = {}", rational::format(&c.base_distance)),
                format!("d(x',y') = {}", rational::format(&c.total_distance)),
            ];
            finish_build(&f.skeleton, &out, &mut lines)
        }
        Command::Farey { mult, dist } => {
            let d = rational::parse(&dist).ok_or_else(|| {
                input("bad-rational", format!("`{dist}` is not a rational number"))
            })?;
            let m = farey_multiplicity(mult, &d)
                .map_err(|e| input("invalid-parameters", e.to_string()))?;
            Ok((vec![m.to_string()], true))
        }
        Command::Render {
            graph,
            different,
            format,
        } => {
            let g = load_graph(&graph)?;
            let delta = match different {
                Some(path) => Some(io::parse_function(&io::read_file(&path)?, &g)?),
                None => None,
            };
            let text = match format {
                Format::Dot => io::render_dot(&g, delta.as_ref())?,
                Format::Tikz => io::render_tikz(&g, delta.as_ref())?,
            };
            Ok((vec![text.trim_end().to_string()], true))
        }
    }
}

fn check_cover(cover: &CoverMap) -> Outcome {
    let mut lines = vec![format!("degree = {}", cover.degree())];
    let balancing = cover.check_balancing();
    for (edge, sum) in &balancing.failures {
        lines.push(format!(
            "edge {edge}: preimage degrees sum to {sum}, expected {}",
            cover.degree()
        ));
    }
    lines.push(format!("balancing: {}", pass_fail(balancing.passed())));
    let mut degrees_ok = true;
    for v in cover.total().vertex_ids() {
        match cover.vertex_degree(v) {
            Ok(d) => lines.push(format!("vertex {v}: degree {d}")),
            Err(e) => {
                degrees_ok = false;
                lines.push(format!("vertex {v}: {e}"));
            }
        }
    }
    let ok = balancing.passed() && degrees_ok;
    lines.push(format!("result: {}", pass_fail(ok)));
    Ok((lines, ok))
}

fn finish_build(s: &SimultaneousSkeleton, out: &Path, lines: &mut Vec<String>) -> Outcome {
    let written = io::write_skeleton(out, s)?;
    for path in written {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        lines.push(format!("wrote {name}"));
    }
    let audit = s.audit()?;
    lines.extend(audit_lines(&audit));
    Ok((std::mem::take(lines), audit.passed()))
}

/// One line per check of an [`Audit`], with offenders listed on failure.
pub fn audit_lines(a: &Audit) -> Vec<String> {
    let list = |items: &[String]| {
        if items.is_empty() {
            "pass".to_string()
        } else {
            format!("fail ({})", items.join(", "))
        }
    };
    let pairs = |items: &[(String, Rational)]| {
        items
            .iter()
            .map(|(k, v)| format!("{k}={}", rational::format(v)))
            .collect::<Vec<_>>()
    };
    let balancing: Vec<String> = a
        .balancing
        .failures
        .iter()
        .map(|(e, s)| format!("{e}:{s}"))
        .collect();
    vec![
        format!("chi = {} over k, {} upstairs", a.base_chi, a.total_chi),
        format!("balancing: {}", list(&balancing)),
        format!("vertex degrees: {}", list(&a.vertex_degree_errors)),
        format!(
            "rh residual: {}",
            if a.residual.is_zero() {
                "pass".to_string()
            } else {
                format!("fail ({})", a.residual)
            }
        ),
        format!("different >= 0: {}", list(&pairs(&a.different.negative))),
        format!(
            "integral slopes: {}",
            list(&pairs(&a.different.non_integral_slopes))
        ),
        format!(
            "different <= {}: {}",
            a.different.bound,
            list(&pairs(&a.different.above_bound))
        ),
        format!("skeleton over k: {}", pass_fail(a.base_is_skeleton)),
        format!("skeleton over k': {}", pass_fail(a.total_is_skeleton)),
        format!("trivial locus: {}", list(&a.trivial_locus_mismatches)),
        format!("temperate value: {}", list(&a.temperate_mismatches)),
        format!("split edges: {}", list(&a.split_edge_mismatches)),
        format!("fibres: {}", list(&a.fiber_violations)),
        format!("markings: {}", list(&a.unmarked)),
        format!("audit: {}", pass_fail(a.passed())),
    ]
}
