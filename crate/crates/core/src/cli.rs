//! The `syncspace` command line.
//!
//! Exit codes: 0 success or PASS, 1 classification or verification FAIL,
//! 2 usage, input or I/O error.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::dynamics::{
    certify_flow_invariance, linear_span_check, restriction_consistency, SimulationOptions,
};
use crate::error::{Error, Result};
use crate::invariance::{classification_report, SystemClass};
use crate::lattice::{
    compute_lattice, hasse_dot, synchrony_antisynchrony_report, EigenOptions, LatticeMethod,
    LatticeResult, MatrixTag, DEFAULT_N_LIMIT,
};
use crate::network::{laplacian, laplacian_summary, Network};
use crate::partition::{canonicalize, parse_partition, TaggedPartition};
use crate::quotient::{quotient, QuotientKind};
use crate::rational::format_rational;
use crate::SCHEMA_VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "syncspace",
    version,
    about = "Synchrony and anti-synchrony subspaces of weighted coupled cell networks"
)]
struct Cli {
    /// Worker threads for lattice enumeration and simulation trials.
    #[arg(long, global = true, env = "SYNCSPACE_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Input valencies and the Laplacian matrix.
    Laplacian(LaplacianArgs),
    /// Invariance under W and L, balance classes and block-condition diagnostics.
    Classify(ClassifyArgs),
    /// Lattices of invariant generalized polydiagonals.
    Lattice(LatticeArgs),
    /// Quotient or symbolic quotient network.
    Quotient(QuotientArgs),
    /// Numerical checks with sampled coupled cell systems.
    Simulate(SimulateArgs),
    /// All synchrony and anti-synchrony subspaces with their classes.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Out {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MatrixChoice {
    #[value(name = "W", alias = "w")]
    W,
    #[value(name = "L", alias = "l")]
    L,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodChoice {
    Brute,
    Eigen,
    Both,
}

impl From<MethodChoice> for LatticeMethod {
    fn from(m: MethodChoice) -> Self {
        match m {
            MethodChoice::Brute => LatticeMethod::Brute,
            MethodChoice::Eigen => LatticeMethod::Eigen,
            MethodChoice::Both => LatticeMethod::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindChoice {
    Auto,
    Balanced,
    Exo,
    Odd,
    Linear,
    Eo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckChoice {
    /// Trajectories from the subspace stay in it.
    Flow,
    /// Full and quotient trajectories agree.
    Restriction,
    /// Linear members lie in the predicted matrix span.
    Span,
}

#[derive(Args, Debug)]
struct NetworkArg {
    /// Network JSON file.
    #[arg(long)]
    network: PathBuf,
}

#[derive(Args, Debug)]
struct LaplacianArgs {
    #[command(flatten)]
    net: NetworkArg,
    #[arg(long, value_enum, default_value = "text")]
    out: Out,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    net: NetworkArg,
    /// Labels such as "1,1,-1,0", or a JSON file with a "labels" array.
    #[arg(long, allow_hyphen_values = true)]
    partition: String,
    #[arg(long, value_enum, default_value = "text")]
    out: Out,
}

#[derive(Args, Debug)]
struct LatticeArgs {
    #[command(flatten)]
    net: NetworkArg,
    #[arg(long, value_enum, default_value = "both")]
    matrix: MatrixChoice,
    #[arg(long, value_enum, default_value = "brute")]
    method: MethodChoice,
    /// Largest cell count for brute-force enumeration.
    #[arg(long, default_value_t = DEFAULT_N_LIMIT)]
    max_n: usize,
    /// Entry tolerance of the eigen method.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    out: Out,
}

#[derive(Args, Debug)]
struct QuotientArgs {
    #[command(flatten)]
    net: NetworkArg,
    #[arg(long, allow_hyphen_values = true)]
    partition: String,
    #[arg(long, value_enum, default_value = "auto")]
    kind: KindChoice,
    #[arg(long, value_enum, default_value = "text")]
    out: Out,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    net: NetworkArg,
    /// Required for the flow and restriction checks.
    #[arg(long, allow_hyphen_values = true)]
    partition: Option<String>,
    /// I_G, I_G0, I_Godd, I_Gl or I_Geo.
    #[arg(long)]
    class: String,
    #[arg(long, value_enum, default_value = "flow")]
    check: CheckChoice,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    /// Largest total degree of g and h.
    #[arg(long, default_value_t = 3)]
    degree: u32,
    /// Sample raw coefficients without the stabilizing shifts of g.
    #[arg(long)]
    no_stabilize: bool,
    #[arg(long, value_enum, default_value = "text")]
    out: Out,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[command(flatten)]
    net: NetworkArg,
    #[arg(long, value_enum, default_value = "brute")]
    method: MethodChoice,
    #[arg(long, default_value_t = DEFAULT_N_LIMIT)]
    max_n: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    out: Out,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(Error::InvalidArgument("--jobs must be at least 1".into())),
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start {jobs} workers: {e}")))
            .and_then(|pool| {
                let mut buf = Vec::new();
                let code = pool.install(|| dispatch(&cli.command, &mut buf));
                out.write_all(&buf)?;
                code
            }),
        None => dispatch(&cli.command, out),
    };
    match result {
        Ok(code) => code,
        // A closed downstream pipe (e.g. `| head`) is not an error.
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Laplacian(a) => cmd_laplacian(a, out),
        Command::Classify(a) => cmd_classify(a, out),
        Command::Lattice(a) => cmd_lattice(a, out),
        Command::Quotient(a) => cmd_quotient(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Report(a) => cmd_report(a, out),
    }
}

fn load_network(path: &Path) -> Result<Network> {
    Network::from_json_file(path)
}

/// A partition given inline or as a JSON file with a `labels` array.
fn load_partition(spec: &str, n: usize) -> Result<TaggedPartition> {
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Io(std::io::Error::new(
                e.kind(),
                format!("{}: {e}", path.display()),
            ))
        })?;
        let value: Value = serde_json::from_str(&text)?;
        let labels = value
            .get("labels")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("partition file needs a \"labels\" array".into()))?;
        let raw: Vec<i64> = labels
            .iter()
            .map(|v| {
                v.as_i64()
                    .ok_or_else(|| Error::Parse(format!("label {v} is not an integer")))
            })
            .collect::<Result<_>>()?;
        if raw.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: raw.len(),
            });
        }
        canonicalize(&raw)
    } else {
        parse_partition(spec, n)
    }
}

fn emit_json(out: &mut dyn Write, command: &str, body: impl Serialize) -> Result<()> {
    let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    let body = serde_json::to_value(body)?;
    if let (Value::Object(map), Value::Object(extra)) = (&mut doc, body) {
        map.extend(extra);
    }
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)?;
    Ok(())
}

fn no_dot(command: &str) -> Error {
    Error::InvalidArgument(format!(
        "{command} has no DOT output; use --out text or --out json"
    ))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn class_list(c: &BTreeSet<SystemClass>) -> String {
    if c.is_empty() {
        "-".to_string()
    } else {
        c.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn cmd_laplacian(a: &LaplacianArgs, out: &mut dyn Write) -> Result<i32> {
    let net = load_network(&a.net.network)?;
    match a.out {
        Out::Json => emit_json(out, "laplacian", laplacian_summary(&net))?,
        Out::Dot => write!(out, "{}", net.to_dot())?,
        Out::Text => {
            let s = laplacian_summary(&net);
            writeln!(out, "cells: {}", s.n)?;
            let v: Vec<String> = s.valencies.iter().map(format_rational).collect();
            writeln!(out, "input valencies: {}", v.join(" "))?;
            match &s.regular_valency {
                Some(v) => writeln!(out, "regular of valency {}", format_rational(v))?,
                None => writeln!(out, "not regular")?,
            }
            writeln!(out, "Laplacian:")?;
            write!(out, "{}", laplacian(&net))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_classify(a: &ClassifyArgs, out: &mut dyn Write) -> Result<i32> {
    let net = load_network(&a.net.network)?;
    let p = load_partition(&a.partition, net.n())?;
    let report = classification_report(&net, &p)?;
    let f = &report.flags;
    match a.out {
        Out::Dot => return Err(no_dot("classify")),
        Out::Json => {
            let mut body = serde_json::to_value(&report)?;
            if let Value::Object(map) = &mut body {
                map.insert("invariant_under_W".into(), json!(f.invariant_under_w));
                map.insert("invariant_under_L".into(), json!(f.invariant_under_l));
                map.insert("standard".into(), json!(p.is_standard()));
            }
            emit_json(out, "classify", body)?;
        }
        Out::Text => {
            writeln!(
                out,
                "partition {}  (p={}, q={}, r={}, dim {})",
                p,
                p.p(),
                p.q(),
                p.r(),
                p.dim()
            )?;
            writeln!(
                out,
                "kind: {}",
                if p.is_standard() {
                    "standard"
                } else {
                    "non-standard"
                }
            )?;
            writeln!(out, "invariant under W: {}", yes(f.invariant_under_w))?;
            writeln!(out, "invariant under L: {}", yes(f.invariant_under_l))?;
            if p.is_standard() {
                writeln!(out, "balanced: {}", yes(f.balanced))?;
                writeln!(out, "exo-balanced: {}", yes(f.exo_balanced))?;
                writeln!(
                    out,
                    "strictly exo-balanced: {}",
                    yes(f.strictly_exo_balanced)
                )?;
            } else {
                writeln!(out, "odd-balanced: {}", yes(f.odd_balanced))?;
                writeln!(out, "linear-balanced: {}", yes(f.linear_balanced))?;
                writeln!(out, "even-odd-balanced: {}", yes(f.even_odd_balanced))?;
            }
            writeln!(
                out,
                "preserved by: {}",
                class_list(&report.preserving_classes)
            )?;
            let reports = [
                ("W block conditions", &report.adjacency_conditions),
                ("L block conditions", &report.laplacian_conditions),
                ("odd-balance conditions", &report.odd_conditions),
            ];
            for (title, r) in reports {
                let Some(r) = r else { continue };
                let failed: Vec<&str> = r.failures().map(|c| c.condition.as_str()).collect();
                if !failed.is_empty() {
                    writeln!(out, "{title} failing:")?;
                    for c in failed {
                        writeln!(out, "  {c}")?;
                    }
                }
            }
        }
    }
    Ok(if f.invariant_under_w || f.invariant_under_l {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

#[derive(Serialize)]
struct LatticeEntry<'a> {
    labels: &'a [i32],
    dim: usize,
    p: usize,
    q: usize,
    r: usize,
}

#[derive(Serialize)]
struct LatticeJson<'a> {
    matrix: MatrixTag,
    count: usize,
    elements: Vec<LatticeEntry<'a>>,
    methods_agree: Option<bool>,
    eigen_only: &'a [TaggedPartition],
    brute_only: &'a [TaggedPartition],
    warnings: &'a [String],
}

fn lattice_json(r: &LatticeResult) -> LatticeJson<'_> {
    LatticeJson {
        matrix: r.lattice.matrix_tag,
        count: r.lattice.len(),
        elements: r
            .lattice
            .elements
            .iter()
            .map(|p| LatticeEntry {
                labels: p.labels(),
                dim: p.dim(),
                p: p.p(),
                q: p.q(),
                r: p.r(),
            })
            .collect(),
        methods_agree: r.methods_agree,
        eigen_only: &r.eigen_only,
        brute_only: &r.brute_only,
        warnings: &r.warnings,
    }
}

fn cmd_lattice(a: &LatticeArgs, out: &mut dyn Write) -> Result<i32> {
    let net = load_network(&a.net.network)?;
    let opts = EigenOptions {
        tol: a.tol,
        ..EigenOptions::default()
    };
    let mut tags = Vec::new();
    if a.matrix != MatrixChoice::L {
        tags.push(MatrixTag::W);
    }
    if a.matrix != MatrixChoice::W {
        tags.push(MatrixTag::L);
    }
    let results: Vec<LatticeResult> = tags
        .iter()
        .map(|&tag| {
            let m = match tag {
                MatrixTag::W => net.adjacency().clone(),
                MatrixTag::L => laplacian(&net),
            };
            compute_lattice(&m, tag, a.method.into(), a.max_n, &opts)
        })
        .collect::<Result<_>>()?;
    let union: BTreeSet<&TaggedPartition> =
        results.iter().flat_map(|r| &r.lattice.elements).collect();
    let agree = results.iter().all(|r| r.methods_agree.unwrap_or(true));
    match a.out {
        Out::Json => {
            let lattices: Vec<LatticeJson> = results.iter().map(lattice_json).collect();
            emit_json(
                out,
                "lattice",
                json!({
                    "n": net.n(),
                    "method": LatticeMethod::from(a.method),
                    "lattices": lattices,
                    "union_count": union.len(),
                    "methods_agree": agree,
                }),
            )?;
        }
        Out::Dot => {
            for r in &results {
                write!(out, "{}", hasse_dot(&r.lattice))?;
            }
        }
        Out::Text => {
            for r in &results {
                writeln!(
                    out,
                    "lattice of {}: {} elements",
                    r.lattice.matrix_tag,
                    r.lattice.len()
                )?;
                for p in &r.lattice.elements {
                    writeln!(out, "  {:<24} dim {}", p.to_string(), p.dim())?;
                }
                if let Some(ok) = r.methods_agree {
                    writeln!(out, "  brute force and eigen method agree: {}", yes(ok))?;
                    for p in &r.brute_only {
                        writeln!(out, "  missed by eigen method: {p}")?;
                    }
                    for p in &r.eigen_only {
                        writeln!(out, "  only from eigen method: {p}")?;
                    }
                }
                for w in &r.warnings {
                    writeln!(out, "  warning: {w}")?;
                }
            }
            if results.len() == 2 {
                writeln!(out, "union: {} elements", union.len())?;
            }
        }
    }
    Ok(if agree { EXIT_OK } else { EXIT_FAIL })
}

fn auto_kind(net: &Network, p: &TaggedPartition) -> QuotientKind {
    let f = crate::invariance::classify(net, p);
    if p.is_standard() {
        if f.balanced {
            QuotientKind::Balanced
        } else {
            QuotientKind::Exo
        }
    } else if f.odd_balanced {
        QuotientKind::OddSymbolic
    } else if f.linear_balanced {
        QuotientKind::LinearSymbolic
    } else {
        QuotientKind::EoSymbolic
    }
}

fn cmd_quotient(a: &QuotientArgs, out: &mut dyn Write) -> Result<i32> {
    let net = load_network(&a.net.network)?;
    let p = load_partition(&a.partition, net.n())?;
    let kind = match a.kind {
        KindChoice::Auto => auto_kind(&net, &p),
        KindChoice::Balanced => QuotientKind::Balanced,
        KindChoice::Exo => QuotientKind::Exo,
        KindChoice::Odd => QuotientKind::OddSymbolic,
        KindChoice::Linear => QuotientKind::LinearSymbolic,
        KindChoice::Eo => QuotientKind::EoSymbolic,
    };
    let q = match quotient(&net, &p, kind) {
        Ok(q) => q,
        Err(e @ Error::NotInClass { .. }) => {
            match a.out {
                Out::Json => emit_json(
                    out,
                    "quotient",
                    json!({ "partition": p, "kind": kind, "error": e.to_string() }),
                )?,
                _ => writeln!(out, "{e}")?,
            }
            return Ok(EXIT_FAIL);
        }
        Err(e) => return Err(e),
    };
    match a.out {
        Out::Json => emit_json(out, "quotient", q.to_json())?,
        Out::Dot => write!(out, "{}", q.to_dot())?,
        Out::Text => {
            writeln!(out, "{} quotient of {}", kind.name(), p)?;
            for c in &q.cells {
                let members: Vec<String> = c.members.iter().map(|m| m.to_string()).collect();
                writeln!(
                    out,
                    "  cell {:<6} {:<14} members {}",
                    c.name,
                    c.tag.name(),
                    members.join(",")
                )?;
            }
            writeln!(out, "columns: {}", q.column_labels.join(" "))?;
            write!(out, "{}", q.matrix)?;
            for (from, to, w) in q.edges() {
                writeln!(out, "  {from} -> {to}  weight {}", format_rational(&w))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<i32> {
    let net = load_network(&a.net.network)?;
    let class: SystemClass = a.class.parse()?;
    let opts = SimulationOptions {
        seed: a.seed,
        trials: a.trials,
        dt: a.dt,
        horizon: a.dt * a.steps as f64,
        tol: a.tol,
        degree_bound: a.degree,
        stabilize: !a.no_stabilize,
        ..SimulationOptions::default()
    };
    let partition = |spec: &Option<String>| -> Result<TaggedPartition> {
        let spec = spec.as_deref().ok_or_else(|| {
            Error::InvalidArgument("--partition is required for this check".into())
        })?;
        load_partition(spec, net.n())
    };
    if a.out == Out::Dot {
        return Err(no_dot("simulate"));
    }
    let pass = match a.check {
        CheckChoice::Flow => {
            let p = partition(&a.partition)?;
            let r = certify_flow_invariance(&net, &p, class, &opts)?;
            if a.out == Out::Json {
                emit_json(out, "simulate", json!({ "check": "flow", "report": r }))?;
            } else {
                writeln!(
                    out,
                    "flow invariance of {} under {}: {}",
                    p,
                    class,
                    pass_word(r.pass)
                )?;
                for t in &r.trials {
                    writeln!(
                        out,
                        "  trial {}: max residual {:.3e}{}{}",
                        t.trial,
                        t.max_residual,
                        if t.retries > 0 {
                            format!(", {} retries", t.retries)
                        } else {
                            String::new()
                        },
                        if t.blew_up { ", blew up" } else { "" }
                    )?;
                }
            }
            r.pass
        }
        CheckChoice::Restriction => {
            let p = partition(&a.partition)?;
            let r = restriction_consistency(&net, &p, class, &opts)?;
            if a.out == Out::Json {
                emit_json(
                    out,
                    "simulate",
                    json!({ "check": "restriction", "report": r }),
                )?;
            } else {
                writeln!(
                    out,
                    "restriction of {} systems to {} vs {} quotient: {} (max deviation {:.3e})",
                    class,
                    p,
                    r.quotient_kind.name(),
                    pass_word(r.pass),
                    r.max_deviation
                )?;
            }
            r.pass
        }
        CheckChoice::Span => {
            let r = linear_span_check(&net, class, a.seed)?;
            if a.out == Out::Json {
                emit_json(out, "simulate", json!({ "check": "span", "report": r }))?;
            } else {
                let terms: Vec<String> = r
                    .basis
                    .iter()
                    .zip(&r.coefficients)
                    .map(|(b, c)| format!("{c:+.6} {b}"))
                    .collect();
                writeln!(out, "linear {} member = {}", class, terms.join(" "))?;
                writeln!(
                    out,
                    "fit residual {:.3e}: {}",
                    r.residual,
                    pass_word(r.pass)
                )?;
                writeln!(
                    out,
                    "span{{id, L}} = span{{id, W}}: {}",
                    yes(r.spans_coincide)
                )?;
            }
            r.pass
        }
    };
    Ok(if pass { EXIT_OK } else { EXIT_FAIL })
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_report(a: &ReportArgs, out: &mut dyn Write) -> Result<i32> {
    let net = load_network(&a.net.network)?;
    let opts = EigenOptions {
        tol: a.tol,
        ..EigenOptions::default()
    };
    let report = synchrony_antisynchrony_report(&net, a.method.into(), a.max_n, &opts)?;
    match a.out {
        Out::Dot => return Err(no_dot("report")),
        Out::Json => emit_json(out, "report", &report)?,
        Out::Text => {
            writeln!(
                out,
                "{} synchrony and anti-synchrony subspaces ({} invariant under W, {} under L)",
                report.union.len(),
                report.w.lattice.len(),
                report.l.lattice.len()
            )?;
            writeln!(
                out,
                "{:<24} {:>3} {:>2} {:>2}  preserved by",
                "partition", "dim", "W", "L"
            )?;
            for e in &report.union {
                writeln!(
                    out,
                    "{:<24} {:>3} {:>2} {:>2}  {}",
                    e.partition.to_string(),
                    e.dim,
                    if e.in_w { "x" } else { "" },
                    if e.in_l { "x" } else { "" },
                    class_list(&e.preserving_classes)
                )?;
            }
            let show = |name: &str, list: &[TaggedPartition], out: &mut dyn Write| -> Result<()> {
                let labels: Vec<String> = list.iter().map(|p| p.to_string()).collect();
                writeln!(
                    out,
                    "{name}: {}",
                    if labels.is_empty() {
                        "-".into()
                    } else {
                        labels.join(" ")
                    }
                )?;
                Ok(())
            };
            let c = &report.classes;
            show("balanced", &c.balanced, out)?;
            show("strictly exo-balanced", &c.strictly_exo_balanced, out)?;
            show("odd-balanced", &c.odd_balanced, out)?;
            show("linear-balanced", &c.linear_balanced, out)?;
            show("even-odd-balanced", &c.even_odd_balanced, out)?;
        }
    }
    Ok(if report.methods_agree() {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}
