//! Graded-dimension engine: spanning sets for the degree-n components of the
//! associative, Lie, pure-trace, and mixed-trace algebras built from generic
//! (traceless) 2x2 matrices, with exact rank (and a modular prescreen)
//! turning them into growth tables; membership, module, and sandwich checks.

use crate::error::{Error, Result};
use crate::lie::{all_words, lyndon_brackets, necklace_count, LieWord};
use crate::matrix::{
    generic_matrix, mat_add, mat_mul, mat_scale, mat_scale_poly, standard_s3, trace,
    traceless_generators, Form, GenericMatrix,
};
use crate::poly::MultiPoly;
use crate::rank::{ColumnMap, ExactEchelon, ModularEchelon};
use crate::scalar::{CoeffMode, Scalar};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

pub const DEFAULT_PRIME: u64 = (1 << 31) - 1;

/// The graded algebras the engine knows how to span.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    /// W: associative algebra generated by the traceless matrices.
    Assoc,
    /// L: Lie algebra generated by the traceless matrices.
    Lie,
    /// C0: pure trace algebra of the traceless matrices.
    Trace0,
    /// C: pure trace algebra of full generic matrices.
    Trace,
    /// T: mixed trace algebra over full generic matrices.
    Mixed,
    /// T0: mixed trace algebra over traceless matrices.
    Mixed0,
}

impl AlgebraKind {
    pub fn parse(s: &str) -> Option<AlgebraKind> {
        match s {
            "assoc" => Some(AlgebraKind::Assoc),
            "lie" => Some(AlgebraKind::Lie),
            "trace0" => Some(AlgebraKind::Trace0),
            "trace" => Some(AlgebraKind::Trace),
            "mixed" => Some(AlgebraKind::Mixed),
            "mixed0" => Some(AlgebraKind::Mixed0),
            _ => None,
        }
    }

    /// Lowest degree that carries a component: the Lie algebra has no
    /// degree-0 part, everything else contains the constants.
    pub fn first_degree(&self) -> u32 {
        match self {
            AlgebraKind::Lie => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlgebraKind::Assoc => "assoc-traceless",
            AlgebraKind::Lie => "lie",
            AlgebraKind::Trace0 => "pure-trace-traceless",
            AlgebraKind::Trace => "pure-trace",
            AlgebraKind::Mixed => "mixed-trace",
            AlgebraKind::Mixed0 => "mixed-trace-traceless",
        };
        write!(f, "{s}")
    }
}

impl Serialize for AlgebraKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Modular(u64),
    /// Modular prescreen followed by an exact recomputation; the headline
    /// dimension is the exact one and both are recorded.
    ModularThenExact(u64),
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => write!(f, "exact"),
            Backend::Modular(p) => write!(f, "modular({p})"),
            Backend::ModularThenExact(p) => write!(f, "modular-then-exact({p})"),
        }
    }
}

impl Serialize for Backend {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct EngineOptions {
    pub backend: Backend,
    pub form: Form,
    /// Acknowledges large computations, lifting the default degree caps.
    pub allow_large: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            backend: Backend::Exact,
            form: Form::Direct,
            allow_large: false,
        }
    }
}

impl EngineOptions {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn with_backend(backend: Backend) -> Self {
        EngineOptions {
            backend,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthRow {
    pub degree: u32,
    pub dim: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modular_dim: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct GrowthTable {
    pub algebra: AlgebraKind,
    pub m: u16,
    pub backend: Backend,
    pub rows: Vec<GrowthRow>,
}

impl Serialize for GrowthTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GrowthTable", 4)?;
        st.serialize_field("algebra", &self.algebra)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("backend", &self.backend)?;
        st.serialize_field("rows", &self.rows)?;
        st.end()
    }
}

impl GrowthTable {
    pub fn dim_at(&self, degree: u32) -> Option<u64> {
        self.rows
            .iter()
            .find(|r| r.degree == degree)
            .map(|r| r.dim)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.rows.iter().map(|r| r.degree).max()
    }

    /// (degree, dim) pairs from degree 0 up to the table's maximum, filling
    /// the degrees below `first_degree` with zeros so fits see a full table.
    pub fn dense_dims(&self) -> Vec<(u32, u64)> {
        let max = self.max_degree().unwrap_or(0);
        (0..=max)
            .map(|n| (n, self.dim_at(n).unwrap_or(0)))
            .collect()
    }

    /// Partial sum of dims over degrees <= n.
    pub fn partial_sum(&self, n: u32) -> u64 {
        self.rows
            .iter()
            .filter(|r| r.degree <= n)
            .map(|r| r.dim)
            .sum()
    }
}

/// One spanning element: a matrix or a bare (trace) polynomial.
#[derive(Debug, Clone)]
pub enum SpanElement {
    Matrix(GenericMatrix),
    Poly(MultiPoly),
}

impl SpanElement {
    pub fn entry_polys(&self) -> &[MultiPoly] {
        match self {
            SpanElement::Matrix(m) => m.entries(),
            SpanElement::Poly(p) => std::slice::from_ref(p),
        }
    }

    pub fn is_homogeneous_of(&self, n: u32) -> bool {
        self.entry_polys().iter().all(|p| p.is_homogeneous_of(n))
    }
}

#[derive(Debug, Clone)]
pub struct SpanningSet {
    pub degree: u32,
    pub elements: Vec<(String, SpanElement)>,
}

impl SpanningSet {
    fn views(&self) -> Vec<&[MultiPoly]> {
        self.elements
            .iter()
            .map(|(_, e)| e.entry_polys())
            .collect()
    }
}

/// Default degree caps keeping runs at desk scale. The explicit
/// `allow_large` acknowledgment in `EngineOptions` lifts them.
pub fn degree_cap(kind: AlgebraKind, m: u16) -> u32 {
    match kind {
        AlgebraKind::Assoc | AlgebraKind::Lie | AlgebraKind::Trace0 => match m {
            2 => 8,
            3 => 6,
            4 => 4,
            _ => 2,
        },
        AlgebraKind::Trace => match m {
            2 => 5,
            3 => 4,
            _ => 2,
        },
        AlgebraKind::Mixed | AlgebraKind::Mixed0 => match m {
            2 => 5,
            _ => 2,
        },
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Estimated coefficient-matrix shape (rows x cols) for a component
/// computation, used in resource errors.
fn estimate_shape(kind: AlgebraKind, m: u16, n: u32, form: Form) -> (u64, u64) {
    let mu = m as u64;
    let vars = match form {
        Form::Direct => 3 * mu,
        Form::Projected => 4 * mu,
    };
    let monos = |v: u64| binomial(v + n as u64 - 1, n as u64);
    match kind {
        AlgebraKind::Assoc => (mu.saturating_pow(n), 4 * monos(vars)),
        AlgebraKind::Lie => (necklace_count(m, n as usize), 4 * monos(vars)),
        AlgebraKind::Trace0 => (count_products(&generator_degrees_trace0(m), n), monos(vars)),
        AlgebraKind::Trace => (count_products(&generator_degrees_sibirskii(m), n), monos(4 * mu)),
        AlgebraKind::Mixed | AlgebraKind::Mixed0 => {
            let degs = if kind == AlgebraKind::Mixed0 {
                generator_degrees_trace0(m)
            } else {
                generator_degrees_sibirskii(m)
            };
            let mut rows = 0u64;
            for b in 0..=n {
                rows = rows.saturating_add(
                    count_products(&degs, b).saturating_mul(mu.saturating_pow(n - b)),
                );
            }
            let v = if kind == AlgebraKind::Mixed0 { vars } else { 4 * mu };
            (rows, 4 * monos(v))
        }
    }
}

fn generator_degrees_trace0(m: u16) -> Vec<u32> {
    let m = m as u64;
    let mut d = vec![2u32; (m * (m + 1) / 2) as usize];
    d.extend(vec![3u32; binomial(m, 3) as usize]);
    d
}

fn generator_degrees_sibirskii(m: u16) -> Vec<u32> {
    let mu = m as u64;
    let mut d = vec![1u32; m as usize];
    d.extend(vec![2u32; (mu * (mu + 1) / 2) as usize]);
    d.extend(vec![3u32; binomial(mu, 3) as usize]);
    d
}

fn count_products(degrees: &[u32], n: u32) -> u64 {
    // multisets of generators with degrees summing to n
    let mut ways = vec![0u64; n as usize + 1];
    ways[0] = 1;
    for &d in degrees {
        for t in d..=n {
            let add = ways[(t - d) as usize];
            ways[t as usize] = ways[t as usize].saturating_add(add);
        }
    }
    ways[n as usize]
}

fn check_m(m: u16) -> Result<()> {
    if m < 2 {
        Err(Error::Precondition(format!("need m >= 2 generators, got {m}")))
    } else {
        Ok(())
    }
}

fn check_cap(kind: AlgebraKind, m: u16, n: u32, opts: &EngineOptions) -> Result<()> {
    check_m(m)?;
    let cap = degree_cap(kind, m);
    if n > cap && !opts.allow_large {
        let (rows, cols) = estimate_shape(kind, m, n, opts.form);
        return Err(Error::Resource(format!(
            "{kind} at m={m}, degree {n} exceeds the default cap {cap}; \
             estimated coefficient matrix {rows}x{cols}; \
             pass the resource acknowledgment to proceed"
        )));
    }
    Ok(())
}

fn mode_of(backend: Backend) -> CoeffMode {
    match backend {
        Backend::Exact | Backend::ModularThenExact(_) => CoeffMode::Exact,
        Backend::Modular(p) => CoeffMode::Mod(p),
    }
}

// ---------------------------------------------------------------------------
// spanning-set builders
// ---------------------------------------------------------------------------

fn word_label(prefix: &str, word: &[u16]) -> String {
    word.iter()
        .map(|i| format!("{prefix}{i}"))
        .collect::<Vec<_>>()
        .join("*")
}

/// All m^n products of the generators, built along a prefix tree so shared
/// prefixes are multiplied once.
fn product_words(gens: &[GenericMatrix], n: u32) -> Result<Vec<(Vec<u16>, GenericMatrix)>> {
    let k = gens[0].k();
    let mode = gens[0].mode();
    let mut out = Vec::new();
    if n == 0 {
        out.push((Vec::new(), GenericMatrix::identity(k, mode)));
        return Ok(out);
    }
    let mut stack: Vec<(Vec<u16>, GenericMatrix)> = gens
        .iter()
        .enumerate()
        .rev()
        .map(|(i, g)| (vec![(i + 1) as u16], g.clone()))
        .collect();
    while let Some((word, mat)) = stack.pop() {
        if word.len() == n as usize {
            out.push((word, mat));
            continue;
        }
        for (i, g) in gens.iter().enumerate().rev() {
            let mut w = word.clone();
            w.push((i + 1) as u16);
            stack.push((w, mat_mul(&mat, g)?));
        }
    }
    Ok(out)
}

pub fn assoc_spanning_set(m: u16, n: u32, form: Form, mode: CoeffMode) -> Result<SpanningSet> {
    let gens = traceless_generators(m, form, mode)?;
    let words = product_words(&gens, n)?;
    let elements = words
        .into_iter()
        .map(|(w, mat)| {
            let label = if w.is_empty() {
                "1".to_string()
            } else {
                word_label("z", &w)
            };
            (label, SpanElement::Matrix(mat))
        })
        .collect();
    Ok(SpanningSet { degree: n, elements })
}

pub fn lie_spanning_set(m: u16, n: u32, form: Form, mode: CoeffMode) -> Result<SpanningSet> {
    if n == 0 {
        return Err(Error::Precondition(
            "the Lie algebra has no degree-0 component".into(),
        ));
    }
    let gens = traceless_generators(m, form, mode)?;
    let elements = lyndon_brackets(m, n as usize)
        .into_iter()
        .map(|b| {
            let img = b.eval(&gens)?;
            Ok((b.to_string(), SpanElement::Matrix(img)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpanningSet { degree: n, elements })
}

/// Left-normed spanning set (all m^n words), for the Lyndon cross-check.
pub fn left_normed_spanning_set(
    m: u16,
    n: u32,
    form: Form,
    mode: CoeffMode,
) -> Result<SpanningSet> {
    if n == 0 {
        return Err(Error::Precondition(
            "the Lie algebra has no degree-0 component".into(),
        ));
    }
    let gens = traceless_generators(m, form, mode)?;
    let mut elements = Vec::new();
    if n == 1 {
        for (i, g) in gens.iter().enumerate() {
            elements.push((format!("z{}", i + 1), SpanElement::Matrix(g.clone())));
        }
    } else {
        for w in all_words(m, n as usize) {
            let tree = LieWord::left_normed(&w)?;
            elements.push((tree.to_string(), SpanElement::Matrix(tree.eval(&gens)?)));
        }
    }
    Ok(SpanningSet { degree: n, elements })
}

/// A graded generator: label, degree, and the polynomial itself.
type TraceGen = (String, u32, MultiPoly);

/// Trace generators of the traceless family: tr(z_i z_j) for i <= j in
/// degree 2, tr(z_i z_j z_l) for i < j < l in degree 3.
pub fn trace0_generators(m: u16, form: Form, mode: CoeffMode) -> Result<Vec<TraceGen>> {
    let z = traceless_generators(m, form, mode)?;
    let mut out = Vec::new();
    for i in 0..m as usize {
        for j in i..m as usize {
            let t = trace(&mat_mul(&z[i], &z[j])?);
            out.push((format!("tr(z{}z{})", i + 1, j + 1), 2, t));
        }
    }
    for i in 0..m as usize {
        for j in (i + 1)..m as usize {
            for l in (j + 1)..m as usize {
                let t = trace(&mat_mul(&mat_mul(&z[i], &z[j])?, &z[l])?);
                out.push((format!("tr(z{}z{}z{})", i + 1, j + 1, l + 1), 3, t));
            }
        }
    }
    Ok(out)
}

/// Sibirskii generators of the full trace algebra: tr(y_i), tr(y_i y_j) for
/// i <= j, tr(y_i y_j y_l) for i < j < l.
pub fn sibirskii_generators(m: u16, mode: CoeffMode) -> Result<Vec<TraceGen>> {
    let y: Vec<GenericMatrix> = (1..=m)
        .map(|i| generic_matrix(2, i, mode))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (i, yi) in y.iter().enumerate() {
        out.push((format!("tr(y{})", i + 1), 1, trace(yi)));
    }
    for i in 0..m as usize {
        for j in i..m as usize {
            let t = trace(&mat_mul(&y[i], &y[j])?);
            out.push((format!("tr(y{}y{})", i + 1, j + 1), 2, t));
        }
    }
    for i in 0..m as usize {
        for j in (i + 1)..m as usize {
            for l in (j + 1)..m as usize {
                let t = trace(&mat_mul(&mat_mul(&y[i], &y[j])?, &y[l])?);
                out.push((format!("tr(y{}y{}y{})", i + 1, j + 1, l + 1), 3, t));
            }
        }
    }
    Ok(out)
}

/// All products of the given graded generators with total degree exactly n,
/// as (label, polynomial). Enumeration is by exponent vectors in a fixed
/// order, so output is deterministic.
fn products_of_degree(gens: &[TraceGen], n: u32, mode: CoeffMode) -> Result<Vec<(String, MultiPoly)>> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; gens.len()];
    fn rec(
        gens: &[TraceGen],
        at: usize,
        left: u32,
        exps: &mut Vec<u32>,
        acc: &MultiPoly,
        out: &mut Vec<(String, MultiPoly)>,
    ) -> Result<()> {
        if left == 0 {
            let label = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        gens[i].0.clone()
                    } else {
                        format!("{}^{}", gens[i].0, e)
                    }
                })
                .collect::<Vec<_>>()
                .join("*");
            let label = if label.is_empty() { "1".into() } else { label };
            out.push((label, acc.clone()));
            return Ok(());
        }
        if at == gens.len() {
            return Ok(());
        }
        let d = gens[at].1;
        let max_e = left / d;
        let mut power = acc.clone();
        for e in 0..=max_e {
            if e > 0 {
                power = power.mul(&gens[at].2)?;
            }
            exps[at] = e;
            rec(gens, at + 1, left - e * d, exps, &power, out)?;
            exps[at] = 0;
        }
        Ok(())
    }
    let one = MultiPoly::constant(Scalar::one(mode));
    rec(gens, 0, n, &mut exps, &one, &mut out)?;
    Ok(out)
}

pub fn trace0_spanning_set(m: u16, n: u32, form: Form, mode: CoeffMode) -> Result<SpanningSet> {
    let gens = trace0_generators(m, form, mode)?;
    let elements = products_of_degree(&gens, n, mode)?
        .into_iter()
        .map(|(label, p)| (label, SpanElement::Poly(p)))
        .collect();
    Ok(SpanningSet { degree: n, elements })
}

pub fn trace_spanning_set(m: u16, n: u32, mode: CoeffMode) -> Result<SpanningSet> {
    let gens = sibirskii_generators(m, mode)?;
    let elements = products_of_degree(&gens, n, mode)?
        .into_iter()
        .map(|(label, p)| (label, SpanElement::Poly(p)))
        .collect();
    Ok(SpanningSet { degree: n, elements })
}

/// The naive spanning set of the full trace algebra: products of traces of
/// arbitrary words. Used to confirm that the Sibirskii generators generate.
pub fn trace_naive_spanning_set(m: u16, n: u32, mode: CoeffMode) -> Result<SpanningSet> {
    let y: Vec<GenericMatrix> = (1..=m)
        .map(|i| generic_matrix(2, i, mode))
        .collect::<Result<_>>()?;
    let mut gens: Vec<TraceGen> = Vec::new();
    for len in 1..=n {
        for (w, mat) in product_words(&y, len)? {
            gens.push((format!("tr({})", word_label("y", &w)), len, trace(&mat)));
        }
    }
    let elements = products_of_degree(&gens, n, mode)?
        .into_iter()
        .map(|(label, p)| (label, SpanElement::Poly(p)))
        .collect();
    Ok(SpanningSet { degree: n, elements })
}

/// Mixed-trace spanning set: (trace-generator product of degree b) times
/// (generator word of degree n-b), over the traceless (T0) or full (T)
/// alphabet.
pub fn mixed_spanning_set(
    m: u16,
    n: u32,
    traceless: bool,
    form: Form,
    mode: CoeffMode,
) -> Result<SpanningSet> {
    let (tgens, words_gens): (Vec<TraceGen>, Vec<GenericMatrix>) = if traceless {
        (
            trace0_generators(m, form, mode)?,
            traceless_generators(m, form, mode)?,
        )
    } else {
        let y: Vec<GenericMatrix> = (1..=m)
            .map(|i| generic_matrix(2, i, mode))
            .collect::<Result<_>>()?;
        (sibirskii_generators(m, mode)?, y)
    };
    let letter = if traceless { "z" } else { "y" };
    let mut elements = Vec::new();
    for b in 0..=n {
        let scalars = products_of_degree(&tgens, b, mode)?;
        if scalars.is_empty() {
            continue;
        }
        let words = product_words(&words_gens, n - b)?;
        for (slabel, spoly) in &scalars {
            for (w, mat) in &words {
                let wlabel = if w.is_empty() {
                    "1".to_string()
                } else {
                    word_label(letter, w)
                };
                let label = match (slabel.as_str(), wlabel.as_str()) {
                    ("1", wl) => wl.to_string(),
                    (sl, "1") => sl.to_string(),
                    (sl, wl) => format!("{sl}*{wl}"),
                };
                elements.push((label, SpanElement::Matrix(mat_scale_poly(spoly, mat)?)));
            }
        }
    }
    Ok(SpanningSet { degree: n, elements })
}

pub fn spanning_set(
    kind: AlgebraKind,
    m: u16,
    n: u32,
    form: Form,
    mode: CoeffMode,
) -> Result<SpanningSet> {
    match kind {
        AlgebraKind::Assoc => assoc_spanning_set(m, n, form, mode),
        AlgebraKind::Lie => lie_spanning_set(m, n, form, mode),
        AlgebraKind::Trace0 => trace0_spanning_set(m, n, form, mode),
        AlgebraKind::Trace => trace_spanning_set(m, n, mode),
        AlgebraKind::Mixed => mixed_spanning_set(m, n, false, form, mode),
        AlgebraKind::Mixed0 => mixed_spanning_set(m, n, true, form, mode),
    }
}

// ---------------------------------------------------------------------------
// rank with backend
// ---------------------------------------------------------------------------

struct RankOutcome {
    dim: u64,
    modular_dim: Option<u64>,
}

fn rank_with_backend(set: &SpanningSet, backend: Backend) -> Result<RankOutcome> {
    let views = set.views();
    let map = ColumnMap::build(views.iter().copied());
    let modular = |p: u64| -> Result<u64> {
        let mut ech = ModularEchelon::new(p);
        for v in &views {
            if let Some(Some(row)) = map.modular_row(v, p)? {
                ech.insert(row);
            }
        }
        Ok(ech.rank() as u64)
    };
    let exact = || -> u64 {
        let mut ech = ExactEchelon::new();
        for v in &views {
            if let Some(Some(row)) = map.exact_row(v) {
                ech.insert(row);
            }
        }
        ech.rank() as u64
    };
    match backend {
        Backend::Exact => Ok(RankOutcome {
            dim: exact(),
            modular_dim: None,
        }),
        Backend::Modular(p) => {
            CoeffMode::Mod(p).validate()?;
            let r = modular(p)?;
            Ok(RankOutcome {
                dim: r,
                modular_dim: Some(r),
            })
        }
        Backend::ModularThenExact(p) => {
            CoeffMode::Mod(p).validate()?;
            let lower = modular(p)?;
            let dim = exact();
            debug_assert!(dim >= lower, "modular rank must lower-bound exact rank");
            Ok(RankOutcome {
                dim,
                modular_dim: Some(lower),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// component dims and tables
// ---------------------------------------------------------------------------

fn component_dim(kind: AlgebraKind, m: u16, n: u32, opts: &EngineOptions) -> Result<u64> {
    check_cap(kind, m, n, opts)?;
    let set = spanning_set(kind, m, n, opts.form, mode_of(opts.backend))?;
    Ok(rank_with_backend(&set, opts.backend)?.dim)
}

pub fn assoc_component_dim(m: u16, n: u32, opts: &EngineOptions) -> Result<u64> {
    component_dim(AlgebraKind::Assoc, m, n, opts)
}

pub fn lie_component_dim(m: u16, n: u32, opts: &EngineOptions) -> Result<u64> {
    if n == 0 {
        return Err(Error::Precondition(
            "the Lie algebra has no degree-0 component".into(),
        ));
    }
    component_dim(AlgebraKind::Lie, m, n, opts)
}

pub fn trace0_component_dim(m: u16, n: u32, opts: &EngineOptions) -> Result<u64> {
    component_dim(AlgebraKind::Trace0, m, n, opts)
}

pub fn trace_component_dim(m: u16, n: u32, opts: &EngineOptions) -> Result<u64> {
    component_dim(AlgebraKind::Trace, m, n, opts)
}

/// Rank of the naive all-trace-words span of the full trace algebra; must
/// agree with `trace_component_dim` (the generation property).
pub fn trace_component_dim_naive(m: u16, n: u32, opts: &EngineOptions) -> Result<u64> {
    check_cap(AlgebraKind::Trace, m, n, opts)?;
    let set = trace_naive_spanning_set(m, n, mode_of(opts.backend))?;
    Ok(rank_with_backend(&set, opts.backend)?.dim)
}

pub fn mixed_trace_component_dim(
    m: u16,
    n: u32,
    traceless: bool,
    opts: &EngineOptions,
) -> Result<u64> {
    let kind = if traceless {
        AlgebraKind::Mixed0
    } else {
        AlgebraKind::Mixed
    };
    component_dim(kind, m, n, opts)
}

/// Rank of the Lie component spanned by all left-normed words instead of
/// Lyndon bracketings; the two must agree.
pub fn lie_component_dim_left_normed(m: u16, n: u32, opts: &EngineOptions) -> Result<u64> {
    check_cap(AlgebraKind::Lie, m, n, opts)?;
    let set = left_normed_spanning_set(m, n, opts.form, mode_of(opts.backend))?;
    Ok(rank_with_backend(&set, opts.backend)?.dim)
}

/// Compute the full growth table of an algebra up to max_degree.
pub fn growth_table(
    kind: AlgebraKind,
    m: u16,
    max_degree: u32,
    opts: &EngineOptions,
) -> Result<GrowthTable> {
    check_cap(kind, m, max_degree, opts)?;
    let mut rows = Vec::new();
    for n in kind.first_degree()..=max_degree {
        let set = spanning_set(kind, m, n, opts.form, mode_of(opts.backend))?;
        let outcome = rank_with_backend(&set, opts.backend)?;
        rows.push(GrowthRow {
            degree: n,
            dim: outcome.dim,
            modular_dim: outcome.modular_dim,
        });
    }
    Ok(GrowthTable {
        algebra: kind,
        m,
        backend: opts.backend,
        rows,
    })
}

// ---------------------------------------------------------------------------
// membership / module / sandwich checks
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
}

/// Exact membership: is x in the linear span of the set's elements?
pub fn membership(x: &SpanElement, span: &SpanningSet) -> Result<Membership> {
    let deg = span.degree;
    if !x.is_homogeneous_of(deg) {
        return Err(Error::DegreeMismatch(
            x.entry_polys()
                .iter()
                .filter_map(|p| p.homogeneous_degree())
                .map(|d| d.to_string())
                .next()
                .unwrap_or_else(|| "mixed".into()),
            deg.to_string(),
        ));
    }
    let views = span.views();
    let map = ColumnMap::build(views.iter().copied());
    let mut ech = ExactEchelon::new();
    for v in &views {
        if let Some(Some(row)) = map.exact_row(v) {
            ech.insert(row);
        }
    }
    match map.exact_row(x.entry_polys()) {
        // a monomial outside the span's support proves independence
        None => Ok(Membership::Outside),
        Some(None) => Ok(Membership::Inside),
        Some(Some(row)) => {
            if ech.reduce(row).is_empty() {
                Ok(Membership::Inside)
            } else {
                Ok(Membership::Outside)
            }
        }
    }
}

/// Matrix representatives of the degree-2/3 trace generators used for module
/// products: 2 z_i^2, z_i z_j + z_j z_i, and s3 triples. Each equals its
/// trace generator times the identity.
pub fn trace0_generator_matrices(
    m: u16,
    form: Form,
    mode: CoeffMode,
) -> Result<Vec<(String, u32, GenericMatrix)>> {
    let z = traceless_generators(m, form, mode)?;
    let two = Scalar::from_integer(2, mode);
    let mut out = Vec::new();
    for i in 0..m as usize {
        for j in i..m as usize {
            if i == j {
                let rep = mat_scale(&two, &mat_mul(&z[i], &z[i])?)?;
                out.push((format!("2*z{}^2", i + 1), 2, rep));
            } else {
                let rep = mat_add(&mat_mul(&z[i], &z[j])?, &mat_mul(&z[j], &z[i])?)?;
                out.push((format!("z{i1}z{j1}+z{j1}z{i1}", i1 = i + 1, j1 = j + 1), 2, rep));
            }
        }
    }
    for i in 0..m as usize {
        for j in (i + 1)..m as usize {
            for l in (j + 1)..m as usize {
                let rep = standard_s3(&z[i], &z[j], &z[l])?;
                out.push((
                    format!("s3(z{},z{},z{})", i + 1, j + 1, l + 1),
                    3,
                    rep,
                ));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ModulePair {
    pub bracket: String,
    pub generator: String,
    pub degree: u32,
    pub inside: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuleCheckReport {
    pub m: u16,
    pub max_degree: u32,
    pub pairs: Vec<ModulePair>,
    pub all_inside: bool,
}

/// For every Lyndon bracket u of degree a >= 2 and every trace generator
/// representative v of degree b with a + b <= max_degree, check that u*v
/// stays inside the Lie span of degree a + b.
pub fn module_check(m: u16, max_degree: u32, opts: &EngineOptions) -> Result<ModuleCheckReport> {
    check_cap(AlgebraKind::Lie, m, max_degree, opts)?;
    let mode = CoeffMode::Exact;
    let gens = traceless_generators(m, opts.form, mode)?;
    let reps = trace0_generator_matrices(m, opts.form, mode)?;
    let mut pairs = Vec::new();
    for n in 4..=max_degree {
        // candidates of total degree n
        let mut cands: Vec<(String, String, GenericMatrix)> = Vec::new();
        for a in 2..=n.saturating_sub(2) {
            let b = n - a;
            let vs: Vec<_> = reps.iter().filter(|(_, d, _)| *d == b).collect();
            if vs.is_empty() {
                continue;
            }
            for bracket in lyndon_brackets(m, a as usize) {
                let u = bracket.eval(&gens)?;
                for (vlabel, _, v) in &vs {
                    cands.push((bracket.to_string(), vlabel.clone(), mat_mul(&u, v)?));
                }
            }
        }
        if cands.is_empty() {
            continue;
        }
        let span = lie_spanning_set(m, n, opts.form, mode)?;
        let views = span.views();
        let map = ColumnMap::build(views.iter().copied());
        let mut ech = ExactEchelon::new();
        for v in &views {
            if let Some(Some(row)) = map.exact_row(v) {
                ech.insert(row);
            }
        }
        for (ulabel, vlabel, prod) in cands {
            let inside = match map.exact_row(prod.entries()) {
                None => false,
                Some(None) => true,
                Some(Some(row)) => ech.reduce(row).is_empty(),
            };
            pairs.push(ModulePair {
                bracket: ulabel,
                generator: vlabel,
                degree: n,
                inside,
            });
        }
    }
    let all_inside = pairs.iter().all(|p| p.inside);
    Ok(ModuleCheckReport {
        m,
        max_degree,
        pairs,
        all_inside,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub n: u32,
    /// sum of trace-algebra dims over degrees <= n-2
    pub c_sum: u64,
    /// sum of Lie dims over degrees 1..=n
    pub l_sum: u64,
    /// sum of associative dims over degrees <= n
    pub w_sum: u64,
    pub holds: bool,
}

/// The partial-sum inequality chain c <= l <= w at threshold n, from already
/// computed growth tables.
pub fn sandwich_check(
    c0: &GrowthTable,
    l: &GrowthTable,
    w: &GrowthTable,
    n: u32,
) -> Result<SandwichReport> {
    if c0.algebra != AlgebraKind::Trace0
        || l.algebra != AlgebraKind::Lie
        || w.algebra != AlgebraKind::Assoc
    {
        return Err(Error::Precondition(
            "sandwich_check wants tables for trace0, lie, assoc in that order".into(),
        ));
    }
    if !(c0.m == l.m && l.m == w.m) {
        return Err(Error::Precondition("sandwich tables disagree on m".into()));
    }
    let need = |t: &GrowthTable, d: u32| -> Result<()> {
        if t.max_degree().unwrap_or(0) < d {
            Err(Error::Precondition(format!(
                "table for {} covers degrees up to {:?}, need {d}",
                t.algebra,
                t.max_degree()
            )))
        } else {
            Ok(())
        }
    };
    if n >= 2 {
        need(c0, n - 2)?;
    }
    need(l, n)?;
    need(w, n)?;
    let c_sum = if n >= 2 { c0.partial_sum(n - 2) } else { 0 };
    let l_sum = l.partial_sum(n);
    let w_sum = w.partial_sum(n);
    Ok(SandwichReport {
        n,
        c_sum,
        l_sum,
        w_sum,
        holds: c_sum <= l_sum && l_sum <= w_sum,
    })
}
