//! Command-line front end: identity verification, growth tables, series
//! fitting and inspection, and the end-to-end reproduction pipeline.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage error, 3 resource error.
//! Outputs are deterministic; timing lines (--timings) go to stderr so files
//! and stdout stay byte-identical across runs.

use clap::{Parser, Subcommand, ValueEnum};
use gentrace_core::error::Error as CoreError;
use gentrace_core::hilbert::{
    fit_numerator_dims, gkdim_from_series, parse_series, pole_multiplicity_at_one,
    search_fit_dims, RationalSeries, DEFAULT_FIT_GUARD, DEFAULT_HILBERT_DEPTH,
};
use gentrace_core::identities::{verify_identity, IdentityCheck, IdentityStatus, IDENTITY_COUNT};
use gentrace_core::matrix::Form;
use gentrace_core::scalar::CoeffMode;
use gentrace_core::span::{
    degree_cap, growth_table, sandwich_check, AlgebraKind, Backend, EngineOptions, GrowthTable,
    DEFAULT_PRIME,
};
use num::rational::BigRational;
use num::{BigInt, Zero};
use serde::Serialize;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "gentrace",
    version,
    about = "Exact growth and Hilbert-series computations for algebras of generic traceless 2x2 matrices"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify the catalog of matrix identities symbolically.
    Verify(VerifyArgs),
    /// Compute a graded-dimension table for one algebra.
    Growth(GrowthArgs),
    /// Fit a rational series numerator against a degree,dim CSV table.
    Fit(FitArgs),
    /// Expand a factored rational series and report its pole data.
    Series(SeriesArgs),
    /// Run the full pipeline: tables, sandwich, fits, GK-dimension verdicts.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Direct,
    Projected,
}

impl From<FormArg> for Form {
    fn from(f: FormArg) -> Form {
        match f {
            FormArg::Direct => Form::Direct,
            FormArg::Projected => Form::Projected,
        }
    }
}

fn form_str(f: Form) -> &'static str {
    match f {
        Form::Direct => "direct",
        Form::Projected => "projected",
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Modular,
    ModularThenExact,
}

impl BackendArg {
    fn build(self, prime: u64) -> Result<Backend, Failure> {
        match self {
            BackendArg::Exact => Ok(Backend::Exact),
            BackendArg::Modular | BackendArg::ModularThenExact => {
                CoeffMode::Mod(prime)
                    .validate()
                    .map_err(|e| Failure::usage(e.to_string()))?;
                Ok(match self {
                    BackendArg::Modular => Backend::Modular(prime),
                    _ => Backend::ModularThenExact(prime),
                })
            }
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Text,
}

#[derive(Parser)]
struct VerifyArgs {
    /// Coefficient field: `rational` or `mod:P` for a prime P > 3.
    #[arg(long, default_value = "rational", value_parser = parse_field)]
    field: CoeffMode,
    /// Traceless parametrization: fresh variables or projected generic.
    #[arg(long, value_enum, default_value = "direct")]
    form: FormArg,
    /// Check a single identity instead of the whole catalog.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=IDENTITY_COUNT as i64))]
    id: Option<u8>,
    /// Print both sides of each identity, not only the verdict.
    #[arg(long)]
    dump: bool,
}

#[derive(Parser)]
struct GrowthArgs {
    /// assoc | lie | trace0 | trace | mixed | mixed0
    #[arg(long, value_parser = parse_algebra)]
    algebra: AlgebraKind,
    /// Number of generic generators.
    #[arg(long)]
    m: u16,
    #[arg(long = "max-degree")]
    max_degree: u32,
    #[arg(long, value_enum, default_value = "exact")]
    backend: BackendArg,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Write to a file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Acknowledge a computation beyond the default degree caps.
    #[arg(long = "allow-large")]
    allow_large: bool,
    #[arg(long, value_enum, default_value = "direct")]
    form: FormArg,
    /// Report phase timings on stderr.
    #[arg(long)]
    timings: bool,
}

#[derive(Parser)]
struct FitArgs {
    /// CSV table of degree,dim rows (header optional).
    #[arg(long)]
    input: PathBuf,
    /// Denominator factor degrees, e.g. `2,2,2` for (1-t^2)^3.
    #[arg(long, value_delimiter = ',', conflicts_with = "search")]
    factors: Option<Vec<u32>>,
    /// Search denominators built from (1-t^2) and (1-t^3) factors.
    #[arg(long)]
    search: bool,
    #[arg(long = "max-twos", default_value_t = 6)]
    max_twos: u32,
    #[arg(long = "max-threes", default_value_t = 2)]
    max_threes: u32,
    /// Held-out degrees at the top of the table.
    #[arg(long, default_value_t = DEFAULT_FIT_GUARD)]
    guard: u32,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Parser)]
struct SeriesArgs {
    /// Factored series expression, e.g. `(1+2t+t^2)/((1-t^2)^3)`.
    #[arg(long)]
    expr: String,
    /// Expansion depth.
    #[arg(long, default_value_t = 16)]
    expand: u32,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Parser)]
struct ReproduceArgs {
    /// Number of generators: 2 or 3 (4 is best-effort behind --allow-large).
    #[arg(long, value_parser = clap::value_parser!(u16).range(2..=4))]
    m: u16,
    #[arg(long, value_enum, default_value = "modular-then-exact")]
    backend: BackendArg,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long = "allow-large")]
    allow_large: bool,
    #[arg(long, value_enum, default_value = "direct")]
    form: FormArg,
    #[arg(long)]
    timings: bool,
}

/// Failure that terminates a command: exit code plus message for stderr.
struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            msg: msg.into(),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Failure {
        let code = match &e {
            CoreError::Resource(_) => 3,
            CoreError::Parse(_)
            | CoreError::UnsupportedCharacteristic(_)
            | CoreError::Precondition(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure {
            code: 1,
            msg: e.to_string(),
        }
    }
}

fn parse_field(s: &str) -> Result<CoeffMode, String> {
    if s == "rational" {
        return Ok(CoeffMode::Exact);
    }
    if let Some(p) = s.strip_prefix("mod:") {
        let p: u64 = p.parse().map_err(|_| format!("bad prime in {s:?}"))?;
        let mode = CoeffMode::Mod(p);
        mode.validate().map_err(|e| e.to_string())?;
        return Ok(mode);
    }
    Err("expected 'rational' or 'mod:P'".into())
}

fn parse_algebra(s: &str) -> Result<AlgebraKind, String> {
    AlgebraKind::parse(s)
        .ok_or_else(|| "expected one of assoc, lie, trace0, trace, mixed, mixed0".into())
}

fn emit(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn timing(enabled: bool, phase: &str, t: Instant) {
    if enabled {
        let _ = writeln!(
            std::io::stderr(),
            "# timing: {phase} {:.3}s",
            t.elapsed().as_secs_f64()
        );
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Growth(args) => cmd_growth(args),
        Cmd::Fit(args) => cmd_fit(args),
        Cmd::Series(args) => cmd_series(args),
        Cmd::Reproduce(args) => cmd_reproduce(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            std::process::exit(f.code);
        }
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(args: VerifyArgs) -> Result<i32, Failure> {
    let form: Form = args.form.into();
    let ids: Vec<u8> = match args.id {
        Some(id) => vec![id],
        None => (1..=IDENTITY_COUNT).collect(),
    };
    let mut out = String::new();
    out.push_str(&format!(
        "# gentrace {ENGINE_VERSION} verify field={} form={}\n",
        args.field,
        form_str(form)
    ));
    let mut all_ok = true;
    for id in ids {
        let check: IdentityCheck = verify_identity(id, args.field, form)?;
        let verdict = match &check.status {
            IdentityStatus::Verified => "ok",
            IdentityStatus::Failed(_) => {
                all_ok = false;
                "FAILED"
            }
        };
        out.push_str(&format!("identity {id}: {verdict}  {}\n", check.description));
        if args.dump {
            out.push_str(&format!("  lhs = {}\n  rhs = {}\n", check.lhs, check.rhs));
        }
        if let IdentityStatus::Failed(diff) = &check.status {
            out.push_str(&format!("  difference = {diff}\n"));
        }
    }
    out.push_str(if all_ok {
        "result: all identities verified\n"
    } else {
        "result: FAILED\n"
    });
    emit(None, &out)?;
    Ok(if all_ok { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// growth
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct GrowthDoc<'a> {
    engine_version: &'a str,
    algebra: AlgebraKind,
    m: u16,
    form: &'a str,
    backend: String,
    cap: u32,
    max_degree: u32,
    rows: &'a [gentrace_core::span::GrowthRow],
}

fn render_growth(table: &GrowthTable, form: Form, format: FormatArg) -> String {
    match format {
        FormatArg::Csv => {
            let mut s = String::from("degree,dim\n");
            for r in &table.rows {
                s.push_str(&format!("{},{}\n", r.degree, r.dim));
            }
            s
        }
        FormatArg::Json => {
            let doc = GrowthDoc {
                engine_version: ENGINE_VERSION,
                algebra: table.algebra,
                m: table.m,
                form: form_str(form),
                backend: table.backend.to_string(),
                cap: degree_cap(table.algebra, table.m),
                max_degree: table.max_degree().unwrap_or(0),
                rows: &table.rows,
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("growth table serializes");
            s.push('\n');
            s
        }
        FormatArg::Text => {
            let modular = table.rows.iter().any(|r| r.modular_dim.is_some());
            let mut s = format!(
                "# gentrace {ENGINE_VERSION} growth algebra={} m={} form={} backend={}\n",
                table.algebra,
                table.m,
                form_str(form),
                table.backend
            );
            s.push_str(if modular {
                "degree dim modular_dim\n"
            } else {
                "degree dim\n"
            });
            for r in &table.rows {
                match r.modular_dim {
                    Some(md) if modular => s.push_str(&format!("{} {} {}\n", r.degree, r.dim, md)),
                    _ => s.push_str(&format!("{} {}\n", r.degree, r.dim)),
                }
            }
            s
        }
    }
}

fn cmd_growth(args: GrowthArgs) -> Result<i32, Failure> {
    let backend = args.backend.build(args.prime)?;
    let opts = EngineOptions {
        backend,
        form: args.form.into(),
        allow_large: args.allow_large,
    };
    let t = Instant::now();
    let table = growth_table(args.algebra, args.m, args.max_degree, &opts)?;
    timing(args.timings, "growth-table", t);
    let content = render_growth(&table, opts.form, args.format);
    emit(args.output.as_deref(), &content)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

/// degree,dim rows; degrees strictly increasing, padded with zeros down to
/// degree 0 (a Lie table starts at degree 1).
fn read_dims_csv(path: &Path) -> Result<Vec<u64>, Failure> {
    let text = std::fs::read_to_string(path)?;
    let mut rows: Vec<(u32, u64)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if lineno == 0 && line.starts_with("degree") {
            continue;
        }
        let mut parts = line.split(',');
        let bad = || Failure::usage(format!("bad CSV row {:?} in {}", line, path.display()));
        let degree: u32 = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(bad)?;
        let dim: u64 = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        rows.push((degree, dim));
    }
    if rows.is_empty() {
        return Err(Failure::usage(format!("no rows in {}", path.display())));
    }
    let first = rows[0].0;
    for (i, &(d, _)) in rows.iter().enumerate() {
        if d != first + i as u32 {
            return Err(Failure::usage(format!(
                "degrees must be contiguous; gap before degree {d}"
            )));
        }
    }
    let mut dims = vec![0u64; first as usize];
    dims.extend(rows.into_iter().map(|(_, dim)| dim));
    Ok(dims)
}

#[derive(Serialize)]
struct FitDoc<'a> {
    engine_version: &'a str,
    input: Vec<u64>,
    guard: u32,
    mode: String,
    fit: Option<&'a RationalSeries>,
    pole_multiplicity: Option<u32>,
    gkdim: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gkdim_error: Option<String>,
}

fn cmd_fit(args: FitArgs) -> Result<i32, Failure> {
    if args.factors.is_none() && !args.search {
        return Err(Failure::usage("pass --factors D,D,... or --search"));
    }
    let dims = read_dims_csv(&args.input)?;
    let (mode, fit) = match &args.factors {
        Some(factors) => (
            format!("factors {factors:?}"),
            fit_numerator_dims(&dims, factors, args.guard)?,
        ),
        None => (
            format!(
                "search twos<={} threes<={}",
                args.max_twos, args.max_threes
            ),
            search_fit_dims(&dims, args.max_twos, args.max_threes, args.guard)?,
        ),
    };
    let (pole, gkdim, gkdim_error) = match &fit {
        Some(series) => {
            let pole = pole_multiplicity_at_one(series)?;
            match gkdim_from_series(series, DEFAULT_HILBERT_DEPTH) {
                Ok(g) => (Some(pole), Some(g), None),
                Err(e) => (Some(pole), None, Some(e.to_string())),
            }
        }
        None => (None, None, None),
    };
    let doc = FitDoc {
        engine_version: ENGINE_VERSION,
        input: dims,
        guard: args.guard,
        mode,
        fit: fit.as_ref(),
        pole_multiplicity: pole,
        gkdim,
        gkdim_error: gkdim_error.clone(),
    };
    let mut content = serde_json::to_string_pretty(&doc).expect("fit report serializes");
    content.push('\n');
    emit(args.output.as_deref(), &content)?;
    Ok(if fit.is_some() && gkdim_error.is_none() {
        0
    } else {
        1
    })
}

// ---------------------------------------------------------------------------
// series
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SeriesDoc<'a> {
    engine_version: &'a str,
    series: &'a RationalSeries,
    expansion: Vec<String>,
    pole_multiplicity: u32,
    gkdim: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gkdim_error: Option<String>,
}

fn cmd_series(args: SeriesArgs) -> Result<i32, Failure> {
    let series = parse_series(&args.expr)?;
    let pole = pole_multiplicity_at_one(&series)?;
    let (gkdim, gkdim_error) = match gkdim_from_series(&series, args.expand.max(DEFAULT_HILBERT_DEPTH)) {
        Ok(g) => (Some(g), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let expansion = series.expand(args.expand);
    let content = match args.format {
        FormatArg::Json => {
            let doc = SeriesDoc {
                engine_version: ENGINE_VERSION,
                series: &series,
                expansion: expansion.iter().map(|c| c.to_string()).collect(),
                pole_multiplicity: pole,
                gkdim,
                gkdim_error: gkdim_error.clone(),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("series report serializes");
            s.push('\n');
            s
        }
        _ => {
            let coeffs: Vec<String> = expansion.iter().map(|c| c.to_string()).collect();
            let mut s = format!("series: {series}\n");
            s.push_str(&format!("expansion[0..={}]: {}\n", args.expand, coeffs.join(", ")));
            s.push_str(&format!("pole multiplicity at 1: {pole}\n"));
            match (gkdim, &gkdim_error) {
                (Some(g), _) => s.push_str(&format!("GK dimension: {g}\n")),
                (None, Some(e)) => s.push_str(&format!("GK dimension: undefined ({e})\n")),
                _ => {}
            }
            s
        }
    };
    emit(args.output.as_deref(), &content)?;
    Ok(if gkdim.is_some() { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Serialize)]
enum CheckStatus {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "INFO")]
    Info,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Pass => write!(f, "PASS"),
            CheckStatus::Fail => write!(f, "FAIL"),
            CheckStatus::Info => write!(f, "INFO"),
        }
    }
}

#[derive(Serialize)]
struct CheckLine {
    name: String,
    status: CheckStatus,
    detail: String,
}

#[derive(Serialize)]
struct FitSummary {
    algebra: String,
    fit: Option<RationalSeries>,
    pole_multiplicity: Option<u32>,
}

#[derive(Serialize)]
struct ReproduceDoc {
    engine_version: String,
    m: u16,
    form: String,
    backend: String,
    max_degree: u32,
    expected_gkdim: u32,
    tables: Vec<GrowthTable>,
    sandwich: Vec<gentrace_core::span::SandwichReport>,
    fits: Vec<FitSummary>,
    checks: Vec<CheckLine>,
    passed: bool,
}

/// Expected m=2 series, derived ahead of the build and pinned.
const EXPECTED_C0_M2: &str = "1/((1-t^2)^3)";
const EXPECTED_W_M2: &str = "(1+2t+t^2)/((1-t^2)^3)";
const EXPECTED_L_M2: &str = "2t+(t^2+2t^3)/((1-t^2)^3)";

fn dims_of(table: &GrowthTable) -> Vec<u64> {
    table.dense_dims().into_iter().map(|(_, d)| d).collect()
}

fn fmt_dims(dims: &[u64]) -> String {
    dims.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<i32, Failure> {
    let m = args.m;
    if m == 4 && !args.allow_large {
        return Err(Failure {
            code: 3,
            msg: "m=4 is outside the desk-scale envelope; pass --allow-large for a best-effort run"
                .into(),
        });
    }
    let backend = args.backend.build(args.prime)?;
    let opts = EngineOptions {
        backend,
        form: args.form.into(),
        allow_large: args.allow_large,
    };
    let cap = degree_cap(AlgebraKind::Lie, m);
    let expected_gkdim = 3 * (m as u32 - 1);
    let mut checks: Vec<CheckLine> = Vec::new();

    let t = Instant::now();
    let c0 = growth_table(AlgebraKind::Trace0, m, cap, &opts)?;
    let l = growth_table(AlgebraKind::Lie, m, cap, &opts)?;
    let w = growth_table(AlgebraKind::Assoc, m, cap, &opts)?;
    timing(args.timings, "growth-tables", t);

    // sandwich at every degree
    let t = Instant::now();
    let sandwich: Vec<_> = (1..=cap)
        .map(|n| sandwich_check(&c0, &l, &w, n))
        .collect::<Result<_, _>>()?;
    timing(args.timings, "sandwich", t);
    let sandwich_ok = sandwich.iter().all(|r| r.holds);
    checks.push(CheckLine {
        name: "sandwich".into(),
        status: if sandwich_ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        detail: match sandwich.iter().find(|r| !r.holds) {
            None => format!("c<=l<=w partial sums hold for n=1..{cap}"),
            Some(r) => format!(
                "violated at n={}: c={} l={} w={}",
                r.n, r.c_sum, r.l_sum, r.w_sum
            ),
        },
    });

    // backend agreement on every row of every table
    let rows_with_modular: Vec<&gentrace_core::span::GrowthRow> = [&c0, &l, &w]
        .iter()
        .flat_map(|t| t.rows.iter())
        .filter(|r| r.modular_dim.is_some())
        .collect();
    if rows_with_modular.is_empty() {
        checks.push(CheckLine {
            name: "backend-agreement".into(),
            status: CheckStatus::Info,
            detail: "single backend, nothing to compare".into(),
        });
    } else {
        let ok = rows_with_modular
            .iter()
            .all(|r| r.modular_dim == Some(r.dim));
        checks.push(CheckLine {
            name: "backend-agreement".into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            detail: if ok {
                format!(
                    "modular prescreen equals exact rank on all {} rows",
                    rows_with_modular.len()
                )
            } else {
                "modular and exact ranks disagree".into()
            },
        });
    }

    // fits: search over (1-t^2)/(1-t^3) denominators with pinned bounds
    let max_twos = (m as u32 * (m as u32 + 1)) / 2;
    let max_threes = if m >= 3 {
        (m as u32) * (m as u32 - 1) * (m as u32 - 2) / 6
    } else {
        0
    };
    let guard = DEFAULT_FIT_GUARD;
    let t = Instant::now();
    let c0_fit = search_fit_dims(&dims_of(&c0), max_twos, max_threes, guard)?;
    let w_fit = search_fit_dims(&dims_of(&w), max_twos, max_threes, guard)?;
    let mut l_ideal_dims = dims_of(&l);
    for d in l_ideal_dims.iter_mut().take(2) {
        *d = 0;
    }
    let l_fit = search_fit_dims(&l_ideal_dims, max_twos, max_threes, guard)?.map(|ideal| {
        // the full Lie series restores the m-dimensional linear component
        let linear = vec![
            BigRational::zero(),
            BigRational::from_integer(BigInt::from(m)),
        ];
        ideal.plus_polynomial(&linear)
    });
    timing(args.timings, "fits", t);

    let pole = |s: &Option<RationalSeries>| -> Result<Option<u32>, Failure> {
        s.as_ref()
            .map(|s| pole_multiplicity_at_one(s).map_err(Failure::from))
            .transpose()
    };
    let c0_pole = pole(&c0_fit)?;
    let w_pole = pole(&w_fit)?;
    let l_pole = pole(&l_fit)?;

    // At the m=4 best-effort depth the table is too shallow to falsify a
    // denominator hypothesis, so fits there are reported, never certified.
    let certify = matches!(m, 2 | 3);
    let mut fit_check = |name: &str,
                         fit: &Option<RationalSeries>,
                         pole: Option<u32>,
                         required: bool,
                         expected_text: Option<&str>|
     -> Result<(), Failure> {
        let line = match fit {
            None => CheckLine {
                name: name.into(),
                status: if required {
                    CheckStatus::Fail
                } else {
                    CheckStatus::Info
                },
                detail: format!("no fit at depth {cap} with guard {guard}"),
            },
            Some(series) => {
                let pole = pole.expect("pole computed for every fit");
                let mut detail = format!("{series} pole={pole}");
                if !certify {
                    detail.push_str(", not certifiable at this depth");
                    checks.push(CheckLine {
                        name: name.into(),
                        status: CheckStatus::Info,
                        detail,
                    });
                    return Ok(());
                }
                let mut ok = pole == expected_gkdim;
                if let Some(text) = expected_text {
                    let expected = parse_series(text)?;
                    if *series != expected {
                        ok = false;
                        detail.push_str(&format!(" (expected {text})"));
                    }
                }
                // a fitted Hilbert series must certify as one
                if gkdim_from_series(series, DEFAULT_HILBERT_DEPTH).is_err() {
                    ok = false;
                    detail.push_str(" (expansion not a Hilbert series)");
                }
                CheckLine {
                    name: name.into(),
                    status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
                    detail,
                }
            }
        };
        checks.push(line);
        Ok(())
    };

    match m {
        2 => {
            fit_check("fit-trace0", &c0_fit, c0_pole, true, Some(EXPECTED_C0_M2))?;
            fit_check("fit-assoc", &w_fit, w_pole, true, Some(EXPECTED_W_M2))?;
            fit_check("fit-lie", &l_fit, l_pole, true, Some(EXPECTED_L_M2))?;
        }
        3 => {
            fit_check("fit-trace0", &c0_fit, c0_pole, true, None)?;
            fit_check("fit-assoc", &w_fit, w_pole, false, None)?;
            fit_check("fit-lie", &l_fit, l_pole, false, None)?;
        }
        _ => {
            fit_check("fit-trace0", &c0_fit, c0_pole, false, None)?;
            fit_check("fit-assoc", &w_fit, w_pole, false, None)?;
            fit_check("fit-lie", &l_fit, l_pole, false, None)?;
        }
    }

    // GK-dimension verdicts
    let gk_line = |name: &str, got: Option<u32>| -> CheckLine {
        match got {
            Some(g) if g == expected_gkdim => CheckLine {
                name: name.into(),
                status: CheckStatus::Pass,
                detail: format!("{g} = 3(m-1)"),
            },
            Some(g) => CheckLine {
                name: name.into(),
                status: CheckStatus::Fail,
                detail: format!("{g} != expected {expected_gkdim}"),
            },
            None => CheckLine {
                name: name.into(),
                status: CheckStatus::Info,
                detail: "not certified at this depth".into(),
            },
        }
    };
    checks.push(gk_line("gkdim-trace0", c0_pole.filter(|_| certify)));
    match (l_pole, c0_pole, w_pole) {
        (Some(p), _, _) if certify => checks.push(gk_line("gkdim-lie", Some(p))),
        (None, Some(cp), Some(wp)) if certify && cp == wp && sandwich_ok => {
            // partial sums of L sit between those of C0 and W, so equal pole
            // multiplicities on both sides pin the Lie growth
            checks.push(gk_line("gkdim-lie", Some(cp)));
        }
        _ => checks.push(gk_line("gkdim-lie", None)),
    }

    let passed = checks.iter().all(|c| c.status != CheckStatus::Fail);
    let required_certified = match m {
        2 | 3 => checks
            .iter()
            .filter(|c| c.name.starts_with("gkdim"))
            .all(|c| c.status == CheckStatus::Pass),
        _ => true,
    };
    let passed = passed && required_certified;

    let fits = vec![
        FitSummary {
            algebra: AlgebraKind::Trace0.to_string(),
            fit: c0_fit,
            pole_multiplicity: c0_pole,
        },
        FitSummary {
            algebra: AlgebraKind::Lie.to_string(),
            fit: l_fit,
            pole_multiplicity: l_pole,
        },
        FitSummary {
            algebra: AlgebraKind::Assoc.to_string(),
            fit: w_fit,
            pole_multiplicity: w_pole,
        },
    ];

    let content = match args.format {
        FormatArg::Json => {
            let doc = ReproduceDoc {
                engine_version: ENGINE_VERSION.into(),
                m,
                form: form_str(opts.form).into(),
                backend: backend.to_string(),
                max_degree: cap,
                expected_gkdim,
                tables: vec![c0, l, w],
                sandwich,
                fits,
                checks,
                passed,
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("reproduce report serializes");
            s.push('\n');
            s
        }
        _ => {
            let mut s = format!(
                "# gentrace {ENGINE_VERSION} reproduce m={m} form={} backend={backend} max_degree={cap}\n",
                form_str(opts.form)
            );
            s.push_str(&format!("dims trace0: {}\n", fmt_dims(&dims_of(&c0))));
            s.push_str(&format!("dims lie:    {}\n", fmt_dims(&dims_of(&l))));
            s.push_str(&format!("dims assoc:  {}\n", fmt_dims(&dims_of(&w))));
            for f in &fits {
                match (&f.fit, f.pole_multiplicity) {
                    (Some(series), Some(p)) => s.push_str(&format!(
                        "series {}: {series} (pole multiplicity {p})\n",
                        f.algebra
                    )),
                    _ => s.push_str(&format!("series {}: no fit at this depth\n", f.algebra)),
                }
            }
            for c in &checks {
                s.push_str(&format!("check {}: {} ({})\n", c.name, c.status, c.detail));
            }
            s.push_str(&format!(
                "result: {}\n",
                if passed { "PASS" } else { "FAIL" }
            ));
            s
        }
    };
    emit(args.output.as_deref(), &content)?;
    Ok(if passed { 0 } else { 1 })
}
