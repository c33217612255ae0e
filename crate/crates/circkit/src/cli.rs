//! Command-line front end: parse → transform → certify → report.
//!
//! Every subcommand runs one library pipeline and prints a single
//! canonical JSON report (see [`crate::report`]) on standard output.
//! Reports are deterministic: identical inputs produce byte-identical
//! output once the `timings` key is dropped. Exit codes: 0 when every
//! requested check passed, 2 when a certification came back
//! INCONCLUSIVE, 1 for everything else (usage errors, unreadable or
//! malformed inputs, violated bounds).
//!
//! File formats are the library's text formats: circuits and polynomials
//! as in [`crate::circuit::parse_circuit`] and
//! [`crate::algebra::parse_poly`]; a polynomial *mapping* file is a plain
//! concatenation of polynomial blocks, each starting at its `field` line,
//! all over the same variable list; a matrix file is a `field` line
//! followed by one whitespace-separated row per line. Label assignments
//! and families are JSON with sorted keys.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde_json::{Map, Value};

use crate::algebra::{
    binomial, dim_pol_hom, parse_field_spec, parse_poly, parse_scalar, serialize_poly, FieldTag,
    Scalar, SparsePoly,
};
use crate::circuit::{expand, parse_circuit, serialize_circuit, DEFAULT_TERM_BUDGET};
use crate::elusive::{
    certificate_from_inequality, certify_by_dimension, inequality_check, lower_bound_report,
    poly_map, rank_criterion, size_threshold, span_minor_permanents, BoundCase, CertificateKind,
    ElusivenessCertificate, InequalityQuery, Matrix, PolyMap, Verdict, DEFAULT_DIM_BUDGET,
};
use crate::error::{Error, Result};
use crate::families::{
    decompose_case1, decompose_case2, permanent_objects, specialize, CaseTag, PermanentVariant,
    PolynomialFamily, Specialization,
};
use crate::normal::{
    check_normal_form, normalize_traced, normalize_with_budget, BoundsReport, GateCensus,
};
use crate::report::{big_uint_value, rational_value, uint128_value, uint_value, RunReport};
use crate::universal::{build_universal, embed, instantiate, SlotKind, UniversalGraph};

#[derive(Parser)]
#[command(
    name = "circkit",
    version,
    about = "Exact-arithmetic toolkit for arithmetic circuits",
    disable_help_subcommand = true
)]
struct Cli {
    /// Print the JSON report on stdout (the default output mode).
    #[arg(long, global = true)]
    json: bool,

    /// Print nothing; communicate through the exit code alone.
    #[arg(long, global = true)]
    quiet: bool,

    /// Cap on the term count of any one symbolic expansion.
    #[arg(long, global = true, default_value_t = DEFAULT_TERM_BUDGET)]
    budget_terms: u64,

    /// Cap on the dimension of any one homogeneous coefficient space.
    #[arg(long, global = true, default_value_t = DEFAULT_DIM_BUDGET)]
    budget_dim: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rewrite a circuit into normal homogeneous form and verify the
    /// gate-count budgets on the result.
    Normalize(NormalizeArgs),
    /// Expand a circuit into the polynomials its outputs compute.
    Expand(ExpandArgs),
    /// Universal circuit-graph construction, embedding, instantiation.
    #[command(subcommand)]
    Universal(UniversalCmd),
    /// Coefficient-family extraction and evaluation.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// One-sided weak-elusiveness certification.
    #[command(subcommand)]
    Elusive(ElusiveCmd),
    /// Circuit-size lower bound implied by a certificate's parameters.
    Bound(BoundArgs),
    /// End-to-end worked examples.
    #[command(subcommand)]
    Demo(DemoCmd),
}

#[derive(Args)]
struct NormalizeArgs {
    /// Input circuit file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Homogeneity degree of the circuit's outputs.
    #[arg(long)]
    degree: u32,
    /// Write the rewritten circuit here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write every intermediate stage into this directory.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct ExpandArgs {
    /// Input circuit file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Write the output polynomials here, one block per output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum UniversalCmd {
    /// Build the graph for parameters (s, r, n, m) and check its size.
    Build(UniversalBuildArgs),
    /// Place a normal-form circuit into the graph and verify the
    /// label assignment reproduces it.
    Embed(UniversalEmbedArgs),
    /// Instantiate a concrete circuit from a label-assignment file.
    Instantiate(UniversalInstantiateArgs),
}

#[derive(Args)]
struct UniversalBuildArgs {
    /// Size budget of the circuits the graph must accommodate.
    #[arg(long)]
    s: u64,
    /// Output degree.
    #[arg(long)]
    r: u32,
    /// Number of input slots.
    #[arg(long)]
    n: usize,
    /// Number of output slots.
    #[arg(long)]
    m: usize,
    /// Write the graph as JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct UniversalEmbedArgs {
    /// Normal-form circuit file to place.
    #[arg(long = "in")]
    input: PathBuf,
    /// Size parameter of the target graph; defaults to the circuit's size.
    #[arg(long)]
    s: Option<u64>,
    /// Degree parameter; defaults to the outputs' syntactic degree.
    #[arg(long)]
    r: Option<u32>,
    /// Input slots; defaults to the circuit's variable count.
    #[arg(long)]
    n: Option<usize>,
    /// Output slots; defaults to the circuit's output count.
    #[arg(long)]
    m: Option<usize>,
    /// Write the label assignment as JSON here.
    #[arg(long)]
    labels_out: Option<PathBuf>,
}

#[derive(Args)]
struct UniversalInstantiateArgs {
    /// Label-assignment file produced by `universal embed`.
    #[arg(long)]
    labels: PathBuf,
    /// Write the instantiated circuit here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Decompose a polynomial along its degree-r Z-monomials.
    Extract(FamilyExtractArgs),
    /// Decompose, then evaluate the coefficient rows at a point.
    Specialize(FamilySpecializeArgs),
    /// Build the permanent's row-block family for parameters (n, t).
    Perm(FamilyPermArgs),
}

#[derive(Args)]
struct FamilySource {
    /// Polynomial file to decompose.
    #[arg(long)]
    poly: PathBuf,
    /// Comma-separated Z variables (the homogeneous block).
    #[arg(long)]
    z: String,
    /// Comma-separated X variables; when given, rows are the X-derivatives.
    #[arg(long)]
    x: Option<String>,
    /// Circuit computing the polynomial, kept as a size witness.
    #[arg(long)]
    circuit: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyExtractArgs {
    #[command(flatten)]
    source: FamilySource,
    /// Write the family as JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FamilySpecializeArgs {
    #[command(flatten)]
    source: FamilySource,
    /// Comma-separated field elements, one per Y variable in sorted order.
    #[arg(long)]
    at: String,
    /// Write the specialized components here, one block per row.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the witness circuit here (requires --circuit).
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyPermArgs {
    /// Matrix size of the permanent.
    #[arg(long)]
    n: usize,
    /// Number of leading rows treated as parameters.
    #[arg(long)]
    t: usize,
    /// 1: decompose the permanent itself; 2: decompose its first-row
    /// derivatives.
    #[arg(long, default_value_t = 1)]
    case: u8,
    /// Write the family as JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ElusiveCmd {
    /// Certify by counting dimensions of polynomials vanishing on the image.
    DimCert(ElusiveDimCertArgs),
    /// Degree-1 criterion: exact rank of a point tuple against s.
    Rank(ElusiveRankArgs),
    /// Evaluate one of the named counting inequalities exactly.
    Ineq(ElusiveIneqArgs),
    /// Span of the minor permanents as coordinate specializations.
    SpanPer(ElusiveSpanPerArgs),
    /// Same as the top-level `bound` subcommand.
    Bound(BoundArgs),
}

#[derive(Args)]
struct ElusiveDimCertArgs {
    /// Polynomial-mapping file (concatenated polynomial blocks).
    #[arg(long)]
    poly: PathBuf,
    /// Domain dimension to certify against.
    #[arg(long)]
    s: u64,
    /// Degree of the mappings to rule out.
    #[arg(long)]
    r: u64,
    /// Largest counting degree to try.
    #[arg(long, default_value_t = 3)]
    d_max: u64,
}

#[derive(Args)]
struct ElusiveRankArgs {
    /// Matrix file: the k points of F^m as columns.
    #[arg(long)]
    points: PathBuf,
    /// Domain dimension to certify against.
    #[arg(long)]
    s: u64,
}

#[derive(Args)]
struct ElusiveIneqArgs {
    /// Which inequality: codi2, bih, or per.
    #[arg(long)]
    name: String,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    nx: Option<u64>,
    #[arg(long)]
    ny: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    t: Option<u64>,
}

#[derive(Args)]
struct ElusiveSpanPerArgs {
    /// Matrix size of the permanent.
    #[arg(long)]
    n: usize,
    /// Number of parameter rows.
    #[arg(long)]
    t: usize,
}

#[derive(Args)]
struct BoundArgs {
    /// Domain dimension of the certified mapping.
    #[arg(long)]
    s: u64,
    /// Degree parameter of the bound formula.
    #[arg(long)]
    r: u64,
    /// 1: divisor 8 (direct witnesses); 2: divisor 40 (gradient witnesses).
    #[arg(long)]
    case: u8,
    /// Also report the size threshold 64·l²·r³ for this l.
    #[arg(long)]
    l: Option<u64>,
}

#[derive(Subcommand)]
enum DemoCmd {
    /// Full permanent walkthrough: span, certificate, families, witnesses.
    Perm(DemoPermArgs),
}

#[derive(Args)]
struct DemoPermArgs {
    /// Matrix size of the permanent.
    #[arg(long)]
    n: usize,
    /// Number of parameter rows (2 ≤ t ≤ n−2).
    #[arg(long)]
    t: usize,
}

struct Budgets {
    terms: u64,
    dim: u64,
}

/// Runs the front end and prints the report; returns the process exit
/// code. The `json` flag is accepted for symmetry but is already the
/// default; `quiet` wins when both are given.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (code, output) = run_captured(args);
    if let Some(text) = output {
        println!("{text}");
    }
    code
}

/// As [`run`], returning what would be printed instead of printing it.
/// Errors go to stderr either way.
pub fn run_captured<I, T>(args: I) -> (i32, Option<String>)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, Some(e.to_string())),
                _ => {
                    eprint!("{e}");
                    (1, None)
                }
            };
        }
    };
    let quiet = cli.quiet;
    match dispatch(cli) {
        Ok(report) => {
            let code = report.exit_code();
            (code, if quiet { None } else { Some(report.render()) })
        }
        Err(err) => {
            eprintln!("circkit: error: {err}");
            (1, None)
        }
    }
}

fn dispatch(cli: Cli) -> Result<RunReport> {
    let budgets = Budgets {
        terms: cli.budget_terms,
        dim: cli.budget_dim,
    };
    match cli.cmd {
        Cmd::Normalize(a) => cmd_normalize(a, &budgets),
        Cmd::Expand(a) => cmd_expand(a, &budgets),
        Cmd::Universal(u) => match u {
            UniversalCmd::Build(a) => cmd_universal_build(a),
            UniversalCmd::Embed(a) => cmd_universal_embed(a, &budgets),
            UniversalCmd::Instantiate(a) => cmd_universal_instantiate(a),
        },
        Cmd::Family(f) => match f {
            FamilyCmd::Extract(a) => cmd_family_extract(a, &budgets),
            FamilyCmd::Specialize(a) => cmd_family_specialize(a, &budgets),
            FamilyCmd::Perm(a) => cmd_family_perm(a),
        },
        Cmd::Elusive(e) => match e {
            ElusiveCmd::DimCert(a) => cmd_dim_cert(a, &budgets),
            ElusiveCmd::Rank(a) => cmd_rank(a),
            ElusiveCmd::Ineq(a) => cmd_ineq(a),
            ElusiveCmd::SpanPer(a) => cmd_span_per(a),
            ElusiveCmd::Bound(a) => cmd_bound(a, "elusive bound"),
        },
        Cmd::Bound(a) => cmd_bound(a, "bound"),
        Cmd::Demo(d) => match d {
            DemoCmd::Perm(a) => cmd_demo_perm(a, &budgets),
        },
    }
}

// ---------------------------------------------------------------------------
// File and value helpers
// ---------------------------------------------------------------------------

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn path_value(p: &Path) -> Value {
    Value::String(p.display().to_string())
}

fn str_value(s: impl Into<String>) -> Value {
    Value::String(s.into())
}

fn equality_words(equal: bool) -> Value {
    str_value(if equal { "equal" } else { "different" })
}

/// Projects both polynomials onto their sorted joint variable frame and
/// compares exactly, so circuits or extractions that carry their
/// variables in different orders still compare by meaning.
fn polys_equal(a: &SparsePoly, b: &SparsePoly) -> Result<bool> {
    let mut names: BTreeSet<String> = a.vars().iter().cloned().collect();
    names.extend(b.vars().iter().cloned());
    let frame: Arc<Vec<String>> = Arc::new(names.into_iter().collect());
    Ok(a.project_to_vars(frame.clone())? == b.project_to_vars(frame)?)
}

fn tuples_equal(a: &[SparsePoly], b: &[SparsePoly]) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    for (x, y) in a.iter().zip(b) {
        if !polys_equal(x, y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Splits a mapping file into polynomial blocks. A block starts at each
/// `field` line; leading content before the first one is handed to the
/// polynomial parser as-is so its error reporting applies.
fn split_poly_blocks(text: &str) -> Vec<String> {
    let mut blocks: Vec<String> = Vec::new();
    for line in text.lines() {
        let t = line.trim();
        let is_field = t == "field" || t.starts_with("field ");
        let is_content = !t.is_empty() && !t.starts_with('#');
        if is_field || (blocks.is_empty() && is_content) {
            blocks.push(String::new());
        }
        if let Some(last) = blocks.last_mut() {
            last.push_str(line);
            last.push('\n');
        }
    }
    blocks
}

fn read_poly_map_file(path: &Path) -> Result<PolyMap> {
    let text = read_file(path)?;
    let blocks = split_poly_blocks(&text);
    if blocks.is_empty() {
        return Err(Error::Syntax {
            line: 0,
            msg: format!("{}: no polynomial blocks found", path.display()),
        });
    }
    let mut components = Vec::with_capacity(blocks.len());
    for block in &blocks {
        components.push(parse_poly(block)?);
    }
    poly_map(components)
}

/// Matrix file: a `field` line, then one row of whitespace-separated
/// entries per line.
fn read_matrix_file(path: &Path) -> Result<Matrix> {
    let text = read_file(path)?;
    let mut field: Option<FieldTag> = None;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match field {
            None => {
                let spec = line.strip_prefix("field ").ok_or_else(|| Error::Syntax {
                    line: i + 1,
                    msg: "expected `field ...` before the matrix rows".into(),
                })?;
                field = Some(parse_field_spec(spec.trim())?);
            }
            Some(tag) => {
                let mut row = Vec::new();
                for word in line.split_whitespace() {
                    row.push(parse_scalar(word, tag).map_err(|_| Error::Syntax {
                        line: i + 1,
                        msg: format!("bad matrix entry `{word}`"),
                    })?);
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::Syntax {
            line: 0,
            msg: format!("{}: matrix needs at least one row", path.display()),
        });
    }
    Matrix::from_rows(rows)
}

fn parse_var_set(text: &str) -> BTreeSet<String> {
    text.split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(String::from)
        .collect()
}

fn parse_scalar_list(text: &str, field: FieldTag) -> Result<Vec<Scalar>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let word = part.trim();
        if word.is_empty() {
            return Err(Error::Usage("empty entry in a scalar list".into()));
        }
        out.push(parse_scalar(word, field)?);
    }
    Ok(out)
}

fn certificate_value(cert: &ElusivenessCertificate) -> Value {
    let evidence: Vec<Value> = cert
        .evidence
        .iter()
        .map(|(k, v)| Value::Array(vec![str_value(k.clone()), str_value(v.clone())]))
        .collect();
    let mut map = Map::new();
    map.insert("evidence".into(), Value::Array(evidence));
    map.insert("kind".into(), str_value(cert.kind.to_string()));
    map.insert("r".into(), uint_value(cert.r));
    map.insert("s".into(), uint_value(cert.s));
    map.insert("verdict".into(), str_value(cert.verdict.to_string()));
    Value::Object(map)
}

fn certificate_result(cert: &ElusivenessCertificate, report: &mut RunReport) {
    report.set_verdict(cert.is_certified());
    report.result_entry("certificate", certificate_value(cert));
}

// ---------------------------------------------------------------------------
// normalize / expand
// ---------------------------------------------------------------------------

fn census_value(census: &GateCensus, bounds: &BoundsReport) -> Value {
    let mut by_degree = Map::new();
    for (j, counts) in &census.by_degree {
        let mut entry = Map::new();
        entry.insert("nPlus".into(), uint_value(counts.n_plus));
        entry.insert("nTimes".into(), uint_value(counts.n_times));
        by_degree.insert(j.to_string(), Value::Object(entry));
    }
    let mut bounds_map = Map::new();
    bounds_map.insert("NMax".into(), uint_value(bounds.n_total_bound));
    bounds_map.insert("nTimesMax".into(), uint_value(bounds.n_times_bound));
    bounds_map.insert("ok".into(), Value::Bool(bounds.ok));
    let mut census_map = Map::new();
    census_map.insert("N".into(), uint_value(census.total));
    census_map.insert("bounds".into(), Value::Object(bounds_map));
    census_map.insert("byDegree".into(), Value::Object(by_degree));
    Value::Object(census_map)
}

fn cmd_normalize(a: NormalizeArgs, budgets: &Budgets) -> Result<RunReport> {
    let mut report = RunReport::new("normalize");
    report.param("in", path_value(&a.input));
    report.param("degree", uint_value(u64::from(a.degree)));
    report.param("budgetTerms", uint_value(budgets.terms));

    let c = parse_circuit(&read_file(&a.input)?)?;
    let original = expand(&c, budgets.terms)?;
    let (outcome, stages) = if a.trace.is_some() {
        normalize_traced(&c, a.degree, budgets.terms)?
    } else {
        (normalize_with_budget(&c, a.degree, budgets.terms)?, Vec::new())
    };
    let bounds = &outcome.bounds;

    report.check(
        "nTimesMaxLe8s",
        uint_value(bounds.n_times_bound),
        uint_value(bounds.n_times_max),
        bounds.n_times_max <= bounds.n_times_bound,
    );
    report.check(
        "nTotalLe24sr",
        uint_value(bounds.n_total_bound),
        uint_value(bounds.n_total),
        bounds.n_total <= bounds.n_total_bound,
    );
    if let Some(bound) = bounds.sum_plus_bound {
        report.check(
            "innerSumsLt16sByRMinus1",
            uint_value(bound),
            uint_value(bounds.sum_plus_below_top),
            bounds.sum_plus_below_top < bound,
        );
    }
    let nf = check_normal_form(&outcome.circuit, budgets.terms)?;
    report.check(
        "normalForm",
        str_value("all six structural conditions"),
        if nf.ok {
            str_value("ok")
        } else {
            str_value(nf.violations[0].to_string())
        },
        nf.ok,
    );
    let rewritten = expand(&outcome.circuit, budgets.terms)?;
    let same = tuples_equal(&original, &rewritten)?;
    report.check(
        "expansionPreserved",
        str_value("exact equality"),
        equality_words(same),
        same,
    );

    report.result_entry("census", census_value(&outcome.census, bounds));
    report.result_entry("sizeIn", uint_value(c.size() as u64));
    report.result_entry("sizeOut", uint_value(outcome.circuit.size() as u64));
    let mut recorded = Map::new();
    recorded.insert(
        "nPlusPerDegreeLe8s".into(),
        Value::Bool(bounds.n_plus_claim_ok),
    );
    recorded.insert(
        "inputsAndOutputsBelowSize".into(),
        Value::Bool(bounds.hypothesis_ok),
    );
    report.result_entry("recorded", Value::Object(recorded));

    if let Some(out) = &a.out {
        write_file(out, &serialize_circuit(&outcome.circuit))?;
        report.artifact("out", out.display().to_string());
    }
    if let Some(dir) = &a.trace {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let mut labels = Vec::new();
        for (label, circ) in &stages {
            write_file(&dir.join(format!("{label}.circ")), &serialize_circuit(circ))?;
            labels.push(str_value(label.clone()));
        }
        report.artifact("trace", dir.display().to_string());
        report.result_entry("traceStages", Value::Array(labels));
    }
    Ok(report)
}

fn cmd_expand(a: ExpandArgs, budgets: &Budgets) -> Result<RunReport> {
    let mut report = RunReport::new("expand");
    report.param("in", path_value(&a.input));
    report.param("budgetTerms", uint_value(budgets.terms));
    let c = parse_circuit(&read_file(&a.input)?)?;
    let polys = expand(&c, budgets.terms)?;
    let blocks: Vec<String> = polys.iter().map(serialize_poly).collect();
    report.result_entry(
        "polynomials",
        Value::Array(blocks.iter().cloned().map(Value::String).collect()),
    );
    report.result_entry(
        "numTerms",
        Value::Array(
            polys
                .iter()
                .map(|p| uint_value(p.num_terms() as u64))
                .collect(),
        ),
    );
    if let Some(out) = &a.out {
        write_file(out, &blocks.concat())?;
        report.artifact("out", out.display().to_string());
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// universal
// ---------------------------------------------------------------------------

fn graph_params_value(g: &UniversalGraph) -> Value {
    let mut params = Map::new();
    params.insert("m".into(), uint_value(g.params.m as u64));
    params.insert("n".into(), uint_value(g.params.n as u64));
    params.insert("r".into(), uint_value(u64::from(g.params.r)));
    params.insert("s".into(), uint_value(g.params.s));
    Value::Object(params)
}

fn graph_json(g: &UniversalGraph) -> String {
    let mut levels: Vec<Vec<Value>> = vec![Vec::new(); 2 * g.params.r as usize];
    let mut slots = Vec::new();
    let mut edges = Vec::new();
    for (v, slot) in g.nodes.iter().enumerate() {
        levels[slot.level as usize - 1].push(uint_value(v as u64));
        let mut entry = Map::new();
        match &slot.kind {
            SlotKind::Input { ordinal } => {
                entry.insert("kind".into(), str_value("input"));
                entry.insert("ordinal".into(), uint_value(*ordinal as u64));
            }
            SlotKind::Sum { degree, ordinal } => {
                entry.insert("degree".into(), uint_value(u64::from(*degree)));
                entry.insert("kind".into(), str_value("sum"));
                entry.insert("ordinal".into(), uint_value(*ordinal));
            }
            SlotKind::Output { slot } => {
                entry.insert("kind".into(), str_value("output"));
                entry.insert("slot".into(), uint_value(*slot as u64));
            }
            SlotKind::Product {
                degree,
                ty,
                ordinal,
            } => {
                entry.insert("degree".into(), uint_value(u64::from(*degree)));
                entry.insert("kind".into(), str_value("product"));
                entry.insert("ordinal".into(), uint_value(*ordinal));
                entry.insert("ty".into(), uint_value(u64::from(*ty)));
            }
        }
        entry.insert("level".into(), uint_value(u64::from(slot.level)));
        slots.push(Value::Object(entry));
        for &ch in &slot.children {
            edges.push(Value::Array(vec![
                uint_value(ch as u64),
                uint_value(v as u64),
            ]));
        }
    }
    let sum_edge_ids: Vec<Value> = g
        .sum_edges
        .iter()
        .map(|&(src, dst)| Value::Array(vec![uint_value(src as u64), uint_value(dst as u64)]))
        .collect();
    let mut root = Map::new();
    root.insert("edges".into(), Value::Array(edges));
    root.insert(
        "levels".into(),
        Value::Array(levels.into_iter().map(Value::Array).collect()),
    );
    root.insert("params".into(), graph_params_value(g));
    root.insert("slots".into(), Value::Array(slots));
    root.insert("sumEdgeIds".into(), Value::Array(sum_edge_ids));
    serde_json::to_string_pretty(&Value::Object(root)).expect("graph serializes")
}

fn labels_json(g: &UniversalGraph, field: FieldTag, labels: &BTreeMap<usize, Scalar>) -> String {
    let entries: Vec<Value> = labels
        .iter()
        .map(|(&id, v)| Value::Array(vec![uint_value(id as u64), str_value(v.to_string())]))
        .collect();
    let mut root = Map::new();
    root.insert("field".into(), str_value(field.to_string()));
    root.insert("labels".into(), Value::Array(entries));
    root.insert("params".into(), graph_params_value(g));
    serde_json::to_string_pretty(&Value::Object(root)).expect("labels serialize")
}

fn sum_edge_check(g: &UniversalGraph, report: &mut RunReport) {
    let count = g.sum_edge_count() as u128;
    let bound = g.sum_edge_bound();
    report.check(
        "sumEdgesLt64s2r3",
        uint128_value(bound),
        uint128_value(count),
        count < bound,
    );
}

fn cmd_universal_build(a: UniversalBuildArgs) -> Result<RunReport> {
    let mut report = RunReport::new("universal build");
    report.param("s", uint_value(a.s));
    report.param("r", uint_value(u64::from(a.r)));
    report.param("n", uint_value(a.n as u64));
    report.param("m", uint_value(a.m as u64));
    let g = build_universal(a.s, a.r, a.n, a.m)?;
    sum_edge_check(&g, &mut report);
    report.result_entry("levels", uint_value(2 * u64::from(a.r)));
    report.result_entry("numNodes", uint_value(g.num_nodes() as u64));
    report.result_entry("sumEdgeCount", uint_value(g.sum_edge_count() as u64));
    if let Some(out) = &a.out {
        write_file(out, &graph_json(&g))?;
        report.artifact("out", out.display().to_string());
    }
    Ok(report)
}

fn cmd_universal_embed(a: UniversalEmbedArgs, budgets: &Budgets) -> Result<RunReport> {
    let mut report = RunReport::new("universal embed");
    report.param("in", path_value(&a.input));
    let psi = parse_circuit(&read_file(&a.input)?)?;
    let degs = psi.syntactic_degrees()?;
    let derived_r = psi.outputs().iter().map(|&o| degs[o]).max().unwrap_or(0);
    let s = a.s.unwrap_or(psi.size() as u64);
    let r = match a.r {
        Some(r) => r,
        None => u32::try_from(derived_r).map_err(|_| Error::DegreeOverflow)?,
    };
    if r == 0 {
        return Err(Error::ParamViolation(
            "cannot place a circuit whose outputs have syntactic degree 0".into(),
        ));
    }
    let n = a.n.unwrap_or_else(|| psi.input_vars().len());
    let m = a.m.unwrap_or_else(|| psi.outputs().len());
    report.param("s", uint_value(s));
    report.param("r", uint_value(u64::from(r)));
    report.param("n", uint_value(n as u64));
    report.param("m", uint_value(m as u64));

    let g = build_universal(s, r, n, m)?;
    let emb = embed(&g, &psi)?;
    sum_edge_check(&g, &mut report);

    // Round trip: the instantiated circuit names inputs z1..zn by sorted
    // ordinal, so rename this circuit's sorted variables the same way
    // before comparing expansions.
    let inst = instantiate(&g, psi.field(), &emb.labels)?;
    let sorted_vars = psi.input_vars();
    let renamed_frame: Arc<Vec<String>> = Arc::new(
        (0..sorted_vars.len())
            .map(|k| format!("z{}", k + 1))
            .collect(),
    );
    let psi_polys = expand(&psi, budgets.terms)?;
    let mut renamed = Vec::with_capacity(psi_polys.len());
    for p in &psi_polys {
        renamed.push(p.rename_vars(renamed_frame.clone())?);
    }
    let inst_polys = expand(&inst, budgets.terms)?;
    let same = tuples_equal(&renamed, &inst_polys)?;
    report.check(
        "roundTripExact",
        str_value("instantiated labels reproduce the circuit"),
        equality_words(same),
        same,
    );

    report.result_entry("assignedLabels", uint_value(emb.labels.len() as u64));
    report.result_entry("placedNodes", uint_value(emb.node_map.len() as u64));
    if let Some(path) = &a.labels_out {
        write_file(path, &labels_json(&g, psi.field(), &emb.labels))?;
        report.artifact("labels", path.display().to_string());
    }
    Ok(report)
}

fn bad_labels(msg: &str) -> Error {
    Error::Syntax {
        line: 0,
        msg: format!("labels file: {msg}"),
    }
}

type LabelsFile = ((u64, u32, usize, usize), FieldTag, BTreeMap<usize, Scalar>);

fn parse_labels_file(text: &str) -> Result<LabelsFile> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        msg: format!("labels file: {e}"),
    })?;
    let field = parse_field_spec(
        doc.get("field")
            .and_then(Value::as_str)
            .ok_or_else(|| bad_labels("missing string `field`"))?,
    )?;
    let params = doc
        .get("params")
        .ok_or_else(|| bad_labels("missing `params`"))?;
    let get = |key: &str| -> Result<u64> {
        params
            .get(key)
            .and_then(Value::as_u64)
            .ok_or_else(|| bad_labels(&format!("missing numeric `params.{key}`")))
    };
    let (s, r, n, m) = (get("s")?, get("r")?, get("n")?, get("m")?);
    let mut labels = BTreeMap::new();
    let entries = doc
        .get("labels")
        .and_then(Value::as_array)
        .ok_or_else(|| bad_labels("missing `labels` array"))?;
    for entry in entries {
        let pair = entry
            .as_array()
            .filter(|v| v.len() == 2)
            .ok_or_else(|| bad_labels("each label is an [id, value] pair"))?;
        let id = pair[0]
            .as_u64()
            .ok_or_else(|| bad_labels("label ids are numbers"))? as usize;
        let word = pair[1]
            .as_str()
            .ok_or_else(|| bad_labels("label values are strings"))?;
        labels.insert(id, parse_scalar(word, field)?);
    }
    let r = u32::try_from(r).map_err(|_| bad_labels("params.r does not fit a degree"))?;
    Ok(((s, r, n as usize, m as usize), field, labels))
}

fn cmd_universal_instantiate(a: UniversalInstantiateArgs) -> Result<RunReport> {
    let mut report = RunReport::new("universal instantiate");
    report.param("labels", path_value(&a.labels));
    let ((s, r, n, m), field, labels) = parse_labels_file(&read_file(&a.labels)?)?;
    let g = build_universal(s, r, n, m)?;
    let c = instantiate(&g, field, &labels)?;
    report.result_entry("numNodes", uint_value(c.num_nodes() as u64));
    report.result_entry("size", uint_value(c.size() as u64));
    if let Some(out) = &a.out {
        write_file(out, &serialize_circuit(&c))?;
        report.artifact("out", out.display().to_string());
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// family
// ---------------------------------------------------------------------------

fn family_json(fam: &PolynomialFamily) -> String {
    let basis: Vec<Value> = fam
        .basis
        .iter()
        .map(|mono| {
            Value::Array(
                mono.0
                    .iter()
                    .map(|&e| uint_value(u64::from(e)))
                    .collect(),
            )
        })
        .collect();
    let rows: Vec<Value> = fam
        .coeff_polys
        .iter()
        .map(|row| Value::Array(row.iter().map(|p| Value::String(serialize_poly(p))).collect()))
        .collect();
    let names = |set: &BTreeSet<String>| -> Value {
        Value::Array(set.iter().cloned().map(Value::String).collect())
    };
    let mut partition = Map::new();
    partition.insert("r".into(), uint_value(u64::from(fam.partition.r)));
    partition.insert("x".into(), names(&fam.partition.x));
    partition.insert("y".into(), names(&fam.partition.y));
    partition.insert("z".into(), names(&fam.partition.z));
    let mut root = Map::new();
    root.insert("basis".into(), Value::Array(basis));
    root.insert("caseTag".into(), str_value(fam.case_tag.to_string()));
    root.insert("coeffPolys".into(), Value::Array(rows));
    root.insert("partition".into(), Value::Object(partition));
    serde_json::to_string_pretty(&Value::Object(root)).expect("family serializes")
}

fn extract_family(
    source: &FamilySource,
    budgets: &Budgets,
    report: &mut RunReport,
) -> Result<(SparsePoly, PolynomialFamily)> {
    report.param("poly", path_value(&source.poly));
    report.param("z", str_value(source.z.clone()));
    if let Some(x) = &source.x {
        report.param("x", str_value(x.clone()));
    }
    let f = parse_poly(&read_file(&source.poly)?)?;
    let z = parse_var_set(&source.z);
    let x = source.x.as_deref().map(parse_var_set).unwrap_or_default();
    let all: BTreeSet<String> = f.vars().iter().cloned().collect();
    for v in z.iter().chain(x.iter()) {
        if !all.contains(v) {
            return Err(Error::UnknownVariable(v.clone()));
        }
    }
    let y: BTreeSet<String> = all
        .iter()
        .filter(|v| !z.contains(*v) && !x.contains(*v))
        .cloned()
        .collect();
    let mut fam = if x.is_empty() {
        decompose_case1(&f, &y, &z)?
    } else {
        decompose_case2(&f, &x, &y, &z)?
    };
    if let Some(cpath) = &source.circuit {
        report.param("circuit", path_value(cpath));
        let c = parse_circuit(&read_file(cpath)?)?;
        fam.attach_source_circuit(c, budgets.terms)?;
        report.check(
            "sourceCircuitComputesF",
            str_value("expansion equals the decomposed polynomial"),
            equality_words(true),
            true,
        );
        // The size-versus-|Z| relation is recorded for inspection only;
        // nothing downstream requires it.
        let z_count = fam.partition.z.len() as u64;
        let size = fam
            .source_circuit
            .as_ref()
            .expect("just attached")
            .size() as u64;
        let mut recorded = Map::new();
        recorded.insert("circuitSize".into(), uint_value(size));
        recorded.insert("zCount".into(), uint_value(z_count));
        recorded.insert("sizeExceedsZCount".into(), Value::Bool(size > z_count));
        report.result_entry("recorded", Value::Object(recorded));
    }
    Ok((f, fam))
}

/// Case 1: row 0 rebuilds the polynomial itself. Case 2: row j rebuilds
/// the derivative along the j-th sorted X variable. Both exact.
fn reconstruction_check(
    f: &SparsePoly,
    fam: &PolynomialFamily,
    report: &mut RunReport,
) -> Result<bool> {
    let frame = fam.sorted_frame();
    let target = f.project_to_vars(frame)?;
    let ok = match fam.case_tag {
        CaseTag::Case1 => polys_equal(&fam.reconstruct_row(0)?, &target)?,
        CaseTag::Case2 => {
            let mut all_ok = true;
            for (row, xv) in fam.x_list().iter().enumerate() {
                let want = target.partial_derivative(xv)?;
                if !polys_equal(&fam.reconstruct_row(row)?, &want)? {
                    all_ok = false;
                    break;
                }
            }
            all_ok
        }
    };
    report.check(
        "reconstructionExact",
        str_value("coefficient rows rebuild the decomposed polynomial"),
        equality_words(ok),
        ok,
    );
    Ok(ok)
}

fn family_shape_results(fam: &PolynomialFamily, report: &mut RunReport) {
    report.result_entry("caseTag", str_value(fam.case_tag.to_string()));
    report.result_entry("domainDim", uint_value(fam.domain_dim() as u64));
    report.result_entry("mPrime", uint_value(fam.m_prime() as u64));
    report.result_entry("mTotal", uint_value(fam.m_total() as u64));
    report.result_entry("r", uint_value(u64::from(fam.partition.r)));
    report.result_entry("rows", uint_value(fam.rows() as u64));
}

fn cmd_family_extract(a: FamilyExtractArgs, budgets: &Budgets) -> Result<RunReport> {
    let mut report = RunReport::new("family extract");
    let (f, fam) = extract_family(&a.source, budgets, &mut report)?;
    reconstruction_check(&f, &fam, &mut report)?;
    family_shape_results(&fam, &mut report);
    if let Some(out) = &a.out {
        write_file(out, &family_json(&fam))?;
        report.artifact("out", out.display().to_string());
    }
    Ok(report)
}

fn witness_checks(
    tag: &str,
    fam: &PolynomialFamily,
    spec: &Specialization,
    budgets: &Budgets,
    report: &mut RunReport,
) -> Result<()> {
    let (Some(witness), Some(src), Some(wsize)) =
        (&spec.witness, spec.source_size, spec.witness_size)
    else {
        return Ok(());
    };
    let (claim, ok) = match fam.case_tag {
        CaseTag::Case1 => (format!("size <= {src}"), wsize <= src),
        CaseTag::Case2 => (format!("size < {}", 5 * src), wsize < 5 * src),
    };
    report.check(
        format!("{tag}WitnessSizeBound"),
        str_value(claim),
        uint_value(wsize as u64),
        ok,
    );
    let wpolys = expand(witness, budgets.terms)?;
    let same = tuples_equal(&wpolys, &spec.components)?;
    report.check(
        format!("{tag}WitnessExpansionMatches"),
        str_value("exact equality"),
        equality_words(same),
        same,
    );
    Ok(())
}

fn cmd_family_specialize(a: FamilySpecializeArgs, budgets: &Budgets) -> Result<RunReport> {
    let mut report = RunReport::new("family specialize");
    report.param("at", str_value(a.at.clone()));
    let (_, fam) = extract_family(&a.source, budgets, &mut report)?;
    let lambda = parse_scalar_list(&a.at, fam.field())?;
    let spec = specialize(&fam, &lambda)?;

    let r = fam.partition.r;
    let homogeneous = spec.components.iter().all(|c| {
        c.is_zero() || (c.is_homogeneous() && c.degree() == Some(r))
    });
    report.check(
        "componentsHomogeneousOfDegreeR",
        uint_value(u64::from(r)),
        str_value(if homogeneous { "all components" } else { "violated" }),
        homogeneous,
    );
    witness_checks("", &fam, &spec, budgets, &mut report)?;

    family_shape_results(&fam, &mut report);
    let blocks: Vec<String> = spec.components.iter().map(serialize_poly).collect();
    report.result_entry(
        "components",
        Value::Array(blocks.iter().cloned().map(Value::String).collect()),
    );
    if let Some(size) = spec.source_size {
        report.result_entry("sourceSize", uint_value(size as u64));
    }
    if let Some(size) = spec.witness_size {
        report.result_entry("witnessSize", uint_value(size as u64));
    }
    if let Some(out) = &a.out {
        write_file(out, &blocks.concat())?;
        report.artifact("out", out.display().to_string());
    }
    if let Some(path) = &a.witness_out {
        match &spec.witness {
            Some(w) => {
                write_file(path, &serialize_circuit(w))?;
                report.artifact("witness", path.display().to_string());
            }
            None => {
                return Err(Error::Usage(
                    "--witness-out needs a source circuit; pass --circuit".into(),
                ))
            }
        }
    }
    Ok(report)
}

fn cmd_family_perm(a: FamilyPermArgs) -> Result<RunReport> {
    let mut report = RunReport::new("family perm");
    report.param("n", uint_value(a.n as u64));
    report.param("t", uint_value(a.t as u64));
    report.param("case", uint_value(u64::from(a.case)));
    let variant = match a.case {
        1 => PermanentVariant::Case1YZ,
        2 => PermanentVariant::Case2XYZ,
        other => {
            return Err(Error::Usage(format!("--case must be 1 or 2, got {other}")));
        }
    };
    let objs = permanent_objects(a.n, a.t, variant)?;
    reconstruction_check(&objs.poly, &objs.family, &mut report)?;
    let z_count = objs.family.z_list().len() as u64;
    let want = dim_pol_hom(z_count, u64::from(objs.family.partition.r))?;
    report.check(
        "basisLengthMatchesDimension",
        big_uint_value(&want),
        uint_value(objs.family.m_prime() as u64),
        BigUint::from(objs.family.m_prime()) == want,
    );
    family_shape_results(&objs.family, &mut report);
    if let Some(c) = &objs.family.source_circuit {
        report.result_entry("sourceSize", uint_value(c.size() as u64));
    }
    if let Some(out) = &a.out {
        write_file(out, &family_json(&objs.family))?;
        report.artifact("out", out.display().to_string());
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// elusive
// ---------------------------------------------------------------------------

fn cmd_dim_cert(a: ElusiveDimCertArgs, budgets: &Budgets) -> Result<RunReport> {
    let mut report = RunReport::new("elusive dim-cert");
    report.param("poly", path_value(&a.poly));
    report.param("s", uint_value(a.s));
    report.param("r", uint_value(a.r));
    report.param("dMax", uint_value(a.d_max));
    report.param("budgetDim", uint_value(budgets.dim));
    let f = read_poly_map_file(&a.poly)?;
    report.result_entry("components", uint_value(f.m() as u64));
    report.result_entry("variables", uint_value(f.n() as u64));
    let cert = certify_by_dimension(&f, a.s, a.r, a.d_max, budgets.dim)?;
    certificate_result(&cert, &mut report);
    Ok(report)
}

fn cmd_rank(a: ElusiveRankArgs) -> Result<RunReport> {
    let mut report = RunReport::new("elusive rank");
    report.param("points", path_value(&a.points));
    report.param("s", uint_value(a.s));
    let matrix = read_matrix_file(&a.points)?;
    report.result_entry("cols", uint_value(matrix.cols() as u64));
    report.result_entry("rows", uint_value(matrix.rows() as u64));
    let cert = rank_criterion(&matrix, a.s)?;
    certificate_result(&cert, &mut report);
    Ok(report)
}

fn cmd_ineq(a: ElusiveIneqArgs) -> Result<RunReport> {
    let mut report = RunReport::new("elusive ineq");
    let name = a.name.to_lowercase();
    report.param("name", str_value(name.clone()));
    for (key, value) in [
        ("m", a.m),
        ("n", a.n),
        ("nx", a.nx),
        ("ny", a.ny),
        ("p", a.p),
        ("q", a.q),
        ("r", a.r),
        ("s", a.s),
        ("t", a.t),
    ] {
        if let Some(v) = value {
            report.param(key, uint_value(v));
        }
    }
    let need = |flag: &str, v: Option<u64>| -> Result<u64> {
        v.ok_or_else(|| Error::Usage(format!("inequality `{name}` needs --{flag}")))
    };
    let (query, cert_r) = match name.as_str() {
        "codi2" => (
            InequalityQuery::Codi2 {
                n: need("n", a.n)?,
                p: need("p", a.p)?,
                m: need("m", a.m)?,
                s: need("s", a.s)?,
                r: need("r", a.r)?,
            },
            need("r", a.r)?,
        ),
        "bih" => {
            let q = need("q", a.q)?;
            let cert_r = q
                .checked_mul(2)
                .and_then(|x| x.checked_sub(1))
                .ok_or_else(|| Error::ParamViolation("q must be at least 1".into()))?;
            (
                InequalityQuery::Bih {
                    n_x: need("nx", a.nx)?,
                    p: need("p", a.p)?,
                    n_y: need("ny", a.ny)?,
                    q,
                    s: need("s", a.s)?,
                },
                cert_r,
            )
        }
        "per" => {
            let n = need("n", a.n)?;
            let t = need("t", a.t)?;
            let cert_r = n
                .checked_sub(t)
                .and_then(|d| d.checked_mul(2))
                .and_then(|x| x.checked_sub(1))
                .ok_or_else(|| Error::ParamViolation(format!("need t < n, got t={t}, n={n}")))?;
            (
                InequalityQuery::Per {
                    n,
                    t,
                    s: need("s", a.s)?,
                },
                cert_r,
            )
        }
        other => {
            return Err(Error::Usage(format!(
                "unknown inequality `{other}`; expected codi2, bih, or per"
            )));
        }
    };
    let outcome = inequality_check(&query)?;
    let s = need("s", a.s)?;
    let cert = certificate_from_inequality(&outcome, s, cert_r);
    report.result_entry("holds", Value::Bool(outcome.holds));
    report.result_entry("lhs", rational_value(&outcome.lhs));
    report.result_entry("name", str_value(outcome.name));
    report.result_entry("rhs", rational_value(&outcome.rhs));
    certificate_result(&cert, &mut report);
    Ok(report)
}

fn cmd_span_per(a: ElusiveSpanPerArgs) -> Result<RunReport> {
    let mut report = RunReport::new("elusive span-per");
    report.param("n", uint_value(a.n as u64));
    report.param("t", uint_value(a.t as u64));
    let cert = span_minor_permanents(a.n, a.t)?;
    let minors = binomial(a.n as u64, (a.n - a.t) as u64);
    let span_dim = cert
        .evidence
        .iter()
        .find(|(k, _)| k == "span dimension")
        .map(|(_, v)| v.clone())
        .unwrap_or_default();
    report.check(
        "spanEqualsMinorCount",
        big_uint_value(&minors),
        str_value(span_dim.clone()),
        span_dim == minors.to_string(),
    );
    certificate_result(&cert, &mut report);
    Ok(report)
}

fn cmd_bound(a: BoundArgs, command: &str) -> Result<RunReport> {
    let mut report = RunReport::new(command);
    report.param("s", uint_value(a.s));
    report.param("r", uint_value(a.r));
    report.param("case", uint_value(u64::from(a.case)));
    let case = match a.case {
        1 => BoundCase::Pt1,
        2 => BoundCase::Pt2,
        other => {
            return Err(Error::Usage(format!("--case must be 1 or 2, got {other}")));
        }
    };
    let cert_r = a
        .r
        .checked_mul(2)
        .and_then(|x| x.checked_sub(1))
        .ok_or_else(|| Error::ParamViolation("the bound needs r >= 1".into()))?;
    let cert = ElusivenessCertificate {
        kind: CertificateKind::Dimension { witness: None },
        s: a.s,
        r: cert_r,
        verdict: Verdict::CertifiedWeaklyElusive,
        evidence: Vec::new(),
    };
    let bound = lower_bound_report(&cert, case)?;

    // The squared bound times its divisor must reproduce s exactly.
    let factor = match case {
        BoundCase::Pt2 => 1600u64,
        _ => 64u64,
    };
    let mut scale = BigRational::from_integer(BigInt::from(factor));
    for _ in 0..3 {
        scale *= BigRational::from_integer(BigInt::from(a.r));
    }
    let product = bound.bound_squared.clone() * scale;
    let closes = product == BigRational::from_integer(BigInt::from(a.s));
    report.check(
        "squaredBoundTimesDivisorEqualsS",
        uint_value(a.s),
        rational_value(&product),
        closes,
    );

    report.result_entry("boundDecimal", str_value(bound.bound_decimal.clone()));
    report.result_entry(
        "boundSquared",
        str_value(format!(
            "{}/{}",
            bound.bound_squared.numer(),
            bound.bound_squared.denom()
        )),
    );
    report.result_entry("case", str_value(bound.case_tag.to_string()));
    report.result_entry("formula", str_value(bound.formula));
    if let Some(l) = a.l {
        report.param("l", uint_value(l));
        report.result_entry("sizeThreshold", big_uint_value(&size_threshold(l, a.r)));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// demo
// ---------------------------------------------------------------------------

fn cmd_demo_perm(a: DemoPermArgs, budgets: &Budgets) -> Result<RunReport> {
    let mut report = RunReport::new("demo perm");
    report.param("n", uint_value(a.n as u64));
    report.param("t", uint_value(a.t as u64));

    // 1. The minor permanents span the full coefficient space, which
    //    certifies one dimension below that count.
    let span_cert = span_minor_permanents(a.n, a.t)?;
    let minors = binomial(a.n as u64, (a.n - a.t) as u64);
    let span_dim = span_cert
        .evidence
        .iter()
        .find(|(k, _)| k == "span dimension")
        .map(|(_, v)| v.clone())
        .unwrap_or_default();
    report.check(
        "spanEqualsMinorCount",
        big_uint_value(&minors),
        str_value(span_dim.clone()),
        span_dim == minors.to_string(),
    );
    report.set_verdict(span_cert.is_certified());
    report.result_entry("spanCertificate", certificate_value(&span_cert));

    // 2. Both decompositions of the permanent, with exact reconstruction.
    let case1 = permanent_objects(a.n, a.t, PermanentVariant::Case1YZ)?;
    let frame1 = case1.family.sorted_frame();
    let target1 = case1.poly.project_to_vars(frame1)?;
    let rec1 = polys_equal(&case1.family.reconstruct_row(0)?, &target1)?;
    report.check(
        "case1ReconstructionExact",
        str_value("coefficient row rebuilds the permanent"),
        equality_words(rec1),
        rec1,
    );

    let case2 = permanent_objects(a.n, a.t, PermanentVariant::Case2XYZ)?;
    let frame2 = case2.family.sorted_frame();
    let target2 = case2.poly.project_to_vars(frame2)?;
    let mut rec2 = true;
    for (row, xv) in case2.family.x_list().iter().enumerate() {
        let want = target2.partial_derivative(xv)?;
        if !polys_equal(&case2.family.reconstruct_row(row)?, &want)? {
            rec2 = false;
            break;
        }
    }
    report.check(
        "case2ReconstructionExact",
        str_value("rows rebuild the first-row derivatives"),
        equality_words(rec2),
        rec2,
    );

    // 3. Specialize both families at the all-ones point and verify the
    //    witness circuits stay inside their size budgets.
    let ones1 = vec![Scalar::one(FieldTag::Rational); case1.family.domain_dim()];
    let spec1 = specialize(&case1.family, &ones1)?;
    witness_checks("case1", &case1.family, &spec1, budgets, &mut report)?;
    let ones2 = vec![Scalar::one(FieldTag::Rational); case2.family.domain_dim()];
    let spec2 = specialize(&case2.family, &ones2)?;
    witness_checks("case2", &case2.family, &spec2, budgets, &mut report)?;

    let shape = |objs: &crate::families::PermanentObjects, spec: &Specialization| -> Value {
        let mut map = Map::new();
        map.insert(
            "domainDim".into(),
            uint_value(objs.family.domain_dim() as u64),
        );
        map.insert("mPrime".into(), uint_value(objs.family.m_prime() as u64));
        map.insert("rows".into(), uint_value(objs.family.rows() as u64));
        if let Some(size) = spec.source_size {
            map.insert("sourceSize".into(), uint_value(size as u64));
        }
        if let Some(size) = spec.witness_size {
            map.insert("witnessSize".into(), uint_value(size as u64));
        }
        Value::Object(map)
    };
    report.result_entry("case1", shape(&case1, &spec1));
    report.result_entry("case2", shape(&case2, &spec2));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_vec(args: &[&str]) -> (i32, Option<String>) {
        run_captured(args.iter().copied())
    }

    fn report_of(args: &[&str]) -> (i32, Value) {
        let (code, text) = run_vec(args);
        let text = text.expect("report printed");
        (code, serde_json::from_str(&text).expect("valid JSON"))
    }

    fn per2_text() -> &'static str {
        "field Q\n\
         input x11\n\
         input x12\n\
         input x21\n\
         input x22\n\
         p1 = * 1:x11 1:x22\n\
         p2 = * 1:x12 1:x21\n\
         g = + 1:p1 1:p2\n\
         output g\n"
    }

    #[test]
    fn bound_reproduces_the_worked_values() {
        let (code, report) = report_of(&["circkit", "bound", "--s", "6400", "--r", "4", "--case", "1"]);
        assert_eq!(code, 0);
        assert_eq!(report["result"]["boundSquared"], "25/16");
        assert_eq!(report["result"]["boundDecimal"], "1.250000000000");
        assert_eq!(report["result"]["case"], "PT1");
        assert_eq!(report["checks"][0]["ok"], true);

        let (code, report) = report_of(&["circkit", "bound", "--s", "6400", "--r", "4", "--case", "2"]);
        assert_eq!(code, 0);
        assert_eq!(report["result"]["boundSquared"], "1/16");
        assert_eq!(report["result"]["boundDecimal"], "0.250000000000");
    }

    #[test]
    fn bound_reports_the_size_threshold_on_request() {
        let (code, report) = report_of(&[
            "circkit", "bound", "--s", "64", "--r", "1", "--case", "1", "--l", "2",
        ]);
        assert_eq!(code, 0);
        assert_eq!(report["result"]["sizeThreshold"], 256);
        assert_eq!(report["result"]["boundSquared"], "1/1");
    }

    #[test]
    fn elusive_bound_is_the_same_command() {
        let (code, report) = report_of(&[
            "circkit", "elusive", "bound", "--s", "6400", "--r", "4", "--case", "1",
        ]);
        assert_eq!(code, 0);
        assert_eq!(report["command"], "elusive bound");
        assert_eq!(report["result"]["boundSquared"], "25/16");
    }

    #[test]
    fn unknown_flags_and_bad_values_exit_with_one() {
        let (code, out) = run_vec(&["circkit", "bound", "--nonsense"]);
        assert_eq!(code, 1);
        assert!(out.is_none());
        let (code, _) = run_vec(&["circkit", "bound", "--s", "64", "--r", "1", "--case", "7"]);
        assert_eq!(code, 1);
        let (code, _) = run_vec(&["circkit"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn help_exits_cleanly() {
        let (code, out) = run_vec(&["circkit", "--help"]);
        assert_eq!(code, 0);
        assert!(out.unwrap().contains("normalize"));
    }

    #[test]
    fn quiet_suppresses_the_report() {
        let (code, out) = run_vec(&[
            "circkit", "--quiet", "bound", "--s", "6400", "--r", "4", "--case", "1",
        ]);
        assert_eq!(code, 0);
        assert!(out.is_none());
    }

    #[test]
    fn reports_are_deterministic_outside_timings() {
        let strip = |args: &[&str]| {
            let (_, mut v) = report_of(args);
            v.as_object_mut().unwrap().remove("timings");
            serde_json::to_string_pretty(&v).unwrap()
        };
        let args = ["circkit", "bound", "--s", "6400", "--r", "4", "--case", "1"];
        assert_eq!(strip(&args), strip(&args));
    }

    #[test]
    fn normalize_reports_census_and_writes_the_circuit() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("per2.circ");
        let output = dir.path().join("per2.nf.circ");
        std::fs::write(&input, per2_text()).unwrap();
        let (code, report) = report_of(&[
            "circkit",
            "normalize",
            "--in",
            input.to_str().unwrap(),
            "--degree",
            "2",
            "--out",
            output.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let census = &report["result"]["census"];
        assert_eq!(census["bounds"]["ok"], true);
        assert_eq!(census["bounds"]["nTimesMax"], 48); // 8 · 6 edges
        assert_eq!(census["bounds"]["NMax"], 288); // 24 · 6 · 2
        assert!(census["N"].as_u64().unwrap() <= 288);
        for check in report["checks"].as_array().unwrap() {
            assert_eq!(check["ok"], true, "failed: {}", check["name"]);
        }
        let written = std::fs::read_to_string(&output).unwrap();
        let reparsed = parse_circuit(&written).unwrap();
        assert!(check_normal_form(&reparsed, DEFAULT_TERM_BUDGET).unwrap().ok);
    }

    #[test]
    fn normalize_trace_writes_every_stage() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("per2.circ");
        std::fs::write(&input, per2_text()).unwrap();
        let trace = dir.path().join("stages");
        let (code, report) = report_of(&[
            "circkit",
            "normalize",
            "--in",
            input.to_str().unwrap(),
            "--degree",
            "2",
            "--trace",
            trace.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let stages = report["result"]["traceStages"].as_array().unwrap();
        assert!(stages.iter().any(|s| s == "step1"));
        for stage in stages {
            let path = trace.join(format!("{}.circ", stage.as_str().unwrap()));
            parse_circuit(&std::fs::read_to_string(path).unwrap()).unwrap();
        }
    }

    #[test]
    fn expand_writes_reloadable_blocks() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("per2.circ");
        let out = dir.path().join("per2.polys");
        std::fs::write(&input, per2_text()).unwrap();
        let (code, report) = report_of(&[
            "circkit",
            "expand",
            "--in",
            input.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert_eq!(report["result"]["numTerms"][0], 2);
        let reloaded = read_poly_map_file(&out).unwrap();
        assert_eq!(reloaded.m(), 1);
        assert_eq!(reloaded.components()[0].num_terms(), 2);
    }

    #[test]
    fn universal_round_trip_through_files() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("per2.circ");
        let normalized = dir.path().join("per2.nf.circ");
        std::fs::write(&input, per2_text()).unwrap();
        let (code, _) = report_of(&[
            "circkit",
            "normalize",
            "--in",
            input.to_str().unwrap(),
            "--degree",
            "2",
            "--out",
            normalized.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);

        let labels = dir.path().join("labels.json");
        let (code, report) = report_of(&[
            "circkit",
            "universal",
            "embed",
            "--in",
            normalized.to_str().unwrap(),
            "--s",
            "6",
            "--labels-out",
            labels.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "embed failed: {report}");
        for check in report["checks"].as_array().unwrap() {
            assert_eq!(check["ok"], true, "failed: {}", check["name"]);
        }

        let inst = dir.path().join("instantiated.circ");
        let (code, report) = report_of(&[
            "circkit",
            "universal",
            "instantiate",
            "--labels",
            labels.to_str().unwrap(),
            "--out",
            inst.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert!(report["result"]["size"].as_u64().unwrap() > 0);
        let c = parse_circuit(&std::fs::read_to_string(&inst).unwrap()).unwrap();
        let polys = expand(&c, DEFAULT_TERM_BUDGET).unwrap();
        assert_eq!(polys[0].num_terms(), 2);
    }

    #[test]
    fn universal_build_reports_the_edge_bound() {
        let (code, report) = report_of(&[
            "circkit", "universal", "build", "--s", "4", "--r", "2", "--n", "2", "--m", "1",
        ]);
        assert_eq!(code, 0);
        let check = &report["checks"][0];
        assert_eq!(check["name"], "sumEdgesLt64s2r3");
        assert_eq!(check["claimBound"], 8192); // 64 · 16 · 8
        assert_eq!(check["ok"], true);
    }

    #[test]
    fn family_extract_and_specialize_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let poly = dir.path().join("f.poly");
        // y1·z1² + y1·y2·z2²
        std::fs::write(&poly, "field Q\nvars y1 y2 z1 z2\n1 1 0 2 0\n1 1 1 0 2\n").unwrap();
        let out = dir.path().join("family.json");
        let (code, report) = report_of(&[
            "circkit",
            "family",
            "extract",
            "--poly",
            poly.to_str().unwrap(),
            "--z",
            "z1,z2",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert_eq!(report["result"]["caseTag"], "CASE1");
        assert_eq!(report["result"]["mPrime"], 3);
        assert_eq!(report["result"]["rows"], 1);
        let family: Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(family["partition"]["y"], serde_json::json!(["y1", "y2"]));

        let comps = dir.path().join("components.polys");
        let (code, report) = report_of(&[
            "circkit",
            "family",
            "specialize",
            "--poly",
            poly.to_str().unwrap(),
            "--z",
            "z1,z2",
            "--at",
            "1,2",
            "--out",
            comps.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        for check in report["checks"].as_array().unwrap() {
            assert_eq!(check["ok"], true, "failed: {}", check["name"]);
        }
        // f(1,2) = z1² + 2·z2²
        let reloaded = read_poly_map_file(&comps).unwrap();
        assert_eq!(reloaded.m(), 1);
        assert_eq!(reloaded.components()[0].num_terms(), 2);
        assert_eq!(reloaded.homogeneous_degree(), Some(2));
    }

    #[test]
    fn family_perm_reports_the_worked_shape() {
        let (code, report) = report_of(&[
            "circkit", "family", "perm", "--n", "4", "--t", "2", "--case", "2",
        ]);
        assert_eq!(code, 0);
        assert_eq!(report["result"]["caseTag"], "CASE2");
        assert_eq!(report["result"]["rows"], 4);
        assert_eq!(report["result"]["mPrime"], 36); // C(9, 2)
        assert_eq!(report["result"]["domainDim"], 4);
        for check in report["checks"].as_array().unwrap() {
            assert_eq!(check["ok"], true, "failed: {}", check["name"]);
        }
    }

    #[test]
    fn dim_cert_exit_codes_follow_the_verdict() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("planar.polys");
        // All six degree-2 monomials of three variables.
        let mut text = String::new();
        for exps in ["2 0 0", "1 1 0", "1 0 1", "0 2 0", "0 1 1", "0 0 2"] {
            text.push_str(&format!("field Q\nvars x y z\n1 {exps}\n"));
        }
        std::fs::write(&path, text).unwrap();

        let (code, report) = report_of(&[
            "circkit", "elusive", "dim-cert",
            "--poly", path.to_str().unwrap(),
            "--s", "2", "--r", "2", "--d-max", "1",
        ]);
        assert_eq!(code, 0);
        assert_eq!(report["result"]["verdict"], "CERTIFIED_WEAKLY_ELUSIVE");
        assert_eq!(report["result"]["certificate"]["kind"], "DIMENSION(1)");

        let (code, report) = report_of(&[
            "circkit", "elusive", "dim-cert",
            "--poly", path.to_str().unwrap(),
            "--s", "100", "--r", "2", "--d-max", "1",
        ]);
        assert_eq!(code, 2);
        assert_eq!(report["result"]["verdict"], "INCONCLUSIVE");
    }

    #[test]
    fn rank_exit_codes_follow_the_verdict() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("points.mat");
        std::fs::write(&path, "field Q\n1 0\n0 1\n").unwrap();
        let (code, report) = report_of(&[
            "circkit", "elusive", "rank", "--points", path.to_str().unwrap(), "--s", "1",
        ]);
        assert_eq!(code, 0);
        assert_eq!(report["result"]["verdict"], "CERTIFIED_WEAKLY_ELUSIVE");
        let (code, _) = report_of(&[
            "circkit", "elusive", "rank", "--points", path.to_str().unwrap(), "--s", "2",
        ]);
        assert_eq!(code, 2);
    }

    #[test]
    fn inequality_verdicts_and_missing_flags() {
        let (code, report) = report_of(&[
            "circkit", "elusive", "ineq", "--name", "per",
            "--n", "4", "--t", "2", "--s", "5",
        ]);
        assert_eq!(code, 2); // exact arithmetic rejects this shape
        assert_eq!(report["result"]["holds"], false);
        assert_eq!(report["result"]["lhs"], 36);
        assert_eq!(report["result"]["rhs"], 210);
        assert_eq!(report["result"]["certificate"]["r"], 3);

        let (code, report) = report_of(&[
            "circkit", "elusive", "ineq", "--name", "codi2",
            "--n", "2", "--p", "1", "--m", "3", "--s", "1", "--r", "1",
        ]);
        assert_eq!(code, 0);
        assert_eq!(report["result"]["holds"], true);
        assert_eq!(report["result"]["rhs"], "3/2");

        let (code, _) = run_vec(&["circkit", "elusive", "ineq", "--name", "per", "--n", "4"]);
        assert_eq!(code, 1);
        let (code, _) = run_vec(&[
            "circkit", "elusive", "ineq", "--name", "what", "--s", "1",
        ]);
        assert_eq!(code, 1);
    }

    #[test]
    fn span_per_certifies_the_small_cases() {
        let (code, report) = report_of(&["circkit", "elusive", "span-per", "--n", "3", "--t", "1"]);
        assert_eq!(code, 0);
        assert_eq!(report["result"]["verdict"], "CERTIFIED_WEAKLY_ELUSIVE");
        assert_eq!(report["result"]["certificate"]["s"], 2);
        assert_eq!(report["checks"][0]["measured"], "3");
    }

    #[test]
    fn demo_perm_walks_the_whole_chain() {
        let (code, report) = report_of(&["circkit", "demo", "perm", "--n", "4", "--t", "2"]);
        assert_eq!(code, 0, "demo failed: {report}");
        for check in report["checks"].as_array().unwrap() {
            assert_eq!(check["ok"], true, "failed: {}", check["name"]);
        }
        assert_eq!(report["result"]["spanCertificate"]["s"], 5);
        assert_eq!(report["result"]["spanCertificate"]["verdict"], "CERTIFIED_WEAKLY_ELUSIVE");
        assert_eq!(report["result"]["case2"]["mPrime"], 36);
        assert_eq!(report["result"]["verdict"], "CERTIFIED_WEAKLY_ELUSIVE");
    }

    #[test]
    fn missing_input_files_exit_with_one() {
        let (code, out) = run_vec(&[
            "circkit", "expand", "--in", "/nonexistent/nowhere.circ",
        ]);
        assert_eq!(code, 1);
        assert!(out.is_none());
    }

    #[test]
    fn mapping_files_reject_mixed_variable_lists() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.polys");
        std::fs::write(&path, "field Q\nvars x\n1 1\nfield Q\nvars y\n1 1\n").unwrap();
        assert!(read_poly_map_file(&path).is_err());
    }
}
