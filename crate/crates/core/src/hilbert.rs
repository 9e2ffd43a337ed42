//! Rational Hilbert series kept in factored form h(t)/prod(1-t^d): exact
//! expansion, product and free-ring division, pole multiplicity at t=1,
//! numerator fitting against growth tables with held-out rows, and
//! growth-exponent estimation from partial sums.

use crate::error::{Error, Result};
use crate::span::GrowthTable;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

pub const DEFAULT_FIT_GUARD: u32 = 2;
/// Expansion depth used when certifying that a series is a Hilbert series.
pub const DEFAULT_HILBERT_DEPTH: u32 = 32;

const MAX_FACTOR_DEGREE: u32 = 1000;

/// h(t) / prod_i (1 - t^{d_i}), numerator exact, denominator as a multiset
/// of the d_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    numerator: Vec<BigRational>,
    factors: Vec<u32>,
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// 1 - t^d as a coefficient vector.
fn one_minus_td(d: u32) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); d as usize + 1];
    v[0] = BigRational::one();
    v[d as usize] = -BigRational::one();
    v
}

impl RationalSeries {
    pub fn new(numerator: Vec<BigRational>, mut factors: Vec<u32>) -> Result<RationalSeries> {
        if factors.iter().any(|&d| d == 0 || d > MAX_FACTOR_DEGREE) {
            return Err(Error::Precondition(format!(
                "denominator factor degrees must be in 1..={MAX_FACTOR_DEGREE}"
            )));
        }
        factors.sort_unstable();
        Ok(RationalSeries {
            numerator: trim(numerator),
            factors,
        })
    }

    pub fn from_integer_numerator(numerator: &[i64], factors: Vec<u32>) -> Result<RationalSeries> {
        Self::new(
            numerator
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
            factors,
        )
    }

    pub fn numerator(&self) -> &[BigRational] {
        &self.numerator
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    /// Power-series coefficients a_0..a_N: the numerator, then one stride-d
    /// cumulative pass per denominator factor (convolution with the
    /// geometric series of t^d).
    pub fn expand(&self, n: u32) -> Vec<BigRational> {
        let len = n as usize + 1;
        let mut c = vec![BigRational::zero(); len];
        for (i, x) in self.numerator.iter().enumerate().take(len) {
            c[i] = x.clone();
        }
        for &d in &self.factors {
            let d = d as usize;
            for i in d..len {
                let prev = c[i - d].clone();
                c[i] += prev;
            }
        }
        c
    }

    /// Expansion as u64 dims; errors if any coefficient is negative or not
    /// an integer.
    pub fn expand_dims(&self, n: u32) -> Result<Vec<u64>> {
        self.expand(n)
            .into_iter()
            .map(|c| {
                if !c.is_integer() || c.is_negative() {
                    Err(Error::NotHilbertSeries(format!(
                        "expansion coefficient {c} is not a nonnegative integer"
                    )))
                } else {
                    c.to_integer()
                        .try_into()
                        .map_err(|_| Error::NotHilbertSeries("coefficient exceeds u64".into()))
                }
            })
            .collect()
    }

    /// Add a polynomial to the series: the numerator absorbs p(t) times the
    /// denominator product.
    pub fn plus_polynomial(&self, p: &[BigRational]) -> RationalSeries {
        let mut scaled = trim(p.to_vec());
        for &d in &self.factors {
            scaled = poly_mul(&scaled, &one_minus_td(d));
        }
        let len = scaled.len().max(self.numerator.len());
        let mut numerator = vec![BigRational::zero(); len];
        for (i, c) in self.numerator.iter().enumerate() {
            numerator[i] = c.clone();
        }
        for (i, c) in scaled.iter().enumerate() {
            numerator[i] += c;
        }
        RationalSeries {
            numerator: trim(numerator),
            factors: self.factors.clone(),
        }
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let num = poly_text(&self.numerator);
        if self.factors.is_empty() {
            return num;
        }
        let terms = self.numerator.iter().filter(|c| !c.is_zero()).count();
        let num = if terms > 1 { format!("({num})") } else { num };
        format!("{num}/{}", denominator_text(&self.factors))
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl Serialize for RationalSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RationalSeries", 3)?;
        st.serialize_field("text", &self.to_text())?;
        let numerator: Vec<String> = self.numerator.iter().map(|c| c.to_string()).collect();
        st.serialize_field("numerator", &numerator)?;
        st.serialize_field("factors", &self.factors)?;
        st.end()
    }
}

fn rational_text(c: &BigRational) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn poly_text(coeffs: &[BigRational]) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let a = c.abs();
        let coef = rational_text(&a);
        if k == 0 {
            out.push_str(&coef);
        } else {
            if !a.is_one() {
                out.push_str(&coef);
                if !a.is_integer() {
                    out.push('*');
                }
            }
            out.push('t');
            if k > 1 {
                out.push_str(&format!("^{k}"));
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn denominator_text(factors: &[u32]) -> String {
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for &d in factors {
        *counts.entry(d).or_insert(0) += 1;
    }
    let parts: Vec<String> = counts
        .iter()
        .map(|(&d, &e)| {
            let base = if d == 1 {
                "(1-t)".to_string()
            } else {
                format!("(1-t^{d})")
            };
            if e == 1 {
                base
            } else {
                format!("{base}^{e}")
            }
        })
        .collect();
    if parts.len() == 1 && counts.values().all(|&e| e == 1) {
        parts.into_iter().next().unwrap()
    } else {
        format!("({})", parts.concat())
    }
}

// ---------------------------------------------------------------------------
// series arithmetic
// ---------------------------------------------------------------------------

pub fn series_product(a: &RationalSeries, b: &RationalSeries) -> RationalSeries {
    let mut factors = a.factors.clone();
    factors.extend_from_slice(&b.factors);
    factors.sort_unstable();
    RationalSeries {
        numerator: trim(poly_mul(&a.numerator, &b.numerator)),
        factors,
    }
}

/// Divide by the free-ring series 1/(1-t)^m, i.e. multiply by (1-t)^m.
/// Literal (1-t) factors are removed from the denominator first; once they
/// run out the numerator absorbs the remaining (1-t) powers, which must
/// leave the expansion coefficients nonnegative (checked to a bounded
/// depth), otherwise the division does not factor and is an error.
pub fn series_divide_by_free_ring(a: &RationalSeries, m: u32) -> Result<RationalSeries> {
    let mut out = a.clone();
    let mut remaining = m;
    while remaining > 0 {
        if let Some(pos) = out.factors.iter().position(|&d| d == 1) {
            out.factors.remove(pos);
        } else {
            out.numerator = trim(poly_mul(&out.numerator, &one_minus_td(1)));
        }
        remaining -= 1;
    }
    if !out.is_zero() {
        let depth = out.numerator.len() as u32
            + out.factors.iter().sum::<u32>()
            + DEFAULT_HILBERT_DEPTH;
        if out.expand(depth).iter().any(|c| c.is_negative()) {
            return Err(Error::Factorization(format!(
                "dividing {a} by the rank-{m} free ring leaves negative expansion coefficients"
            )));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// pole multiplicity and GK dimension
// ---------------------------------------------------------------------------

/// Order of vanishing of a nonzero polynomial at t=1, by repeated synthetic
/// division by (1-t).
fn vanishing_order_at_one(coeffs: &[BigRational]) -> u32 {
    let mut cur = trim(coeffs.to_vec());
    let mut order = 0;
    loop {
        let at_one: BigRational = cur.iter().sum();
        if !at_one.is_zero() {
            return order;
        }
        // p = (1-t) q with q_i the prefix sums of p; the last prefix sum is
        // p(1) = 0 and drops off
        let mut q = Vec::with_capacity(cur.len().saturating_sub(1));
        let mut acc = BigRational::zero();
        for c in &cur[..cur.len() - 1] {
            acc += c;
            q.push(acc.clone());
        }
        cur = trim(q);
        order += 1;
    }
}

/// Multiplicity of 1 as a pole: denominator factors each contribute one,
/// minus the numerator's vanishing order at 1, floored at zero.
pub fn pole_multiplicity_at_one(s: &RationalSeries) -> Result<u32> {
    if s.is_zero() {
        return Err(Error::UndefinedSeries(
            "pole multiplicity of the zero series".into(),
        ));
    }
    let order = vanishing_order_at_one(&s.numerator);
    Ok((s.factors.len() as u32).saturating_sub(order))
}

/// GK dimension read off a rational Hilbert series: certify nonnegative
/// integer expansion coefficients up to `depth`, then return the pole
/// multiplicity at 1.
pub fn gkdim_from_series(s: &RationalSeries, depth: u32) -> Result<u32> {
    if s.is_zero() {
        return Err(Error::UndefinedSeries(
            "GK dimension of the zero series".into(),
        ));
    }
    s.expand_dims(depth)?;
    pole_multiplicity_at_one(s)
}

// ---------------------------------------------------------------------------
// numerator fitting
// ---------------------------------------------------------------------------

/// Fit h(t) of degree <= N-guard so that h/prod(1-t^d) reproduces dims
/// a_0..a_N; the top `guard` rows are held out and must still match. No fit
/// is a normal outcome.
pub fn fit_numerator_dims(
    dims: &[u64],
    factors: &[u32],
    guard: u32,
) -> Result<Option<RationalSeries>> {
    if dims.is_empty() {
        return Err(Error::Precondition("empty growth table".into()));
    }
    let n_max = dims.len() - 1;
    if (n_max as u32) < guard {
        return Err(Error::Precondition(format!(
            "table reaches degree {n_max}, too shallow for guard {guard}"
        )));
    }
    let deg_cap = n_max - guard as usize;
    // h = a * prod(1-t^d) truncated to degree N; the series fits iff h is
    // supported in degrees <= N - guard
    let mut q = vec![BigRational::one()];
    for &d in factors {
        q = poly_mul(&q, &one_minus_td(d));
    }
    let mut h = vec![BigRational::zero(); n_max + 1];
    for (j, hj) in h.iter_mut().enumerate() {
        for (i, qi) in q.iter().enumerate().take(j + 1) {
            if qi.is_zero() {
                continue;
            }
            let a = BigRational::from_integer(BigInt::from(dims[j - i]));
            *hj += qi * a;
        }
    }
    if h[deg_cap + 1..].iter().any(|c| !c.is_zero()) {
        return Ok(None);
    }
    h.truncate(deg_cap + 1);
    let series = RationalSeries::new(h, factors.to_vec())?;
    debug_assert_eq!(
        series.expand_dims(n_max as u32).ok().as_deref(),
        Some(dims),
        "fitted series must reproduce the whole table"
    );
    Ok(Some(series))
}

pub fn fit_numerator(
    table: &GrowthTable,
    factors: &[u32],
    guard: u32,
) -> Result<Option<RationalSeries>> {
    let dims: Vec<u64> = table.dense_dims().into_iter().map(|(_, d)| d).collect();
    fit_numerator_dims(&dims, factors, guard)
}

/// Search denominators made of (1-t^2) and (1-t^3) factors, smallest factor
/// count first and fewer cubes before more, returning the first fit.
pub fn search_fit_dims(
    dims: &[u64],
    max_twos: u32,
    max_threes: u32,
    guard: u32,
) -> Result<Option<RationalSeries>> {
    for count in 0..=(max_twos + max_threes) {
        for threes in 0..=count.min(max_threes) {
            let twos = count - threes;
            if twos > max_twos {
                continue;
            }
            let mut factors = vec![2u32; twos as usize];
            factors.extend(std::iter::repeat(3).take(threes as usize));
            if let Some(fit) = fit_numerator_dims(dims, &factors, guard)? {
                return Ok(Some(fit));
            }
        }
    }
    Ok(None)
}

pub fn search_fit(
    table: &GrowthTable,
    max_twos: u32,
    max_threes: u32,
    guard: u32,
) -> Result<Option<RationalSeries>> {
    let dims: Vec<u64> = table.dense_dims().into_iter().map(|(_, d)| d).collect();
    search_fit_dims(&dims, max_twos, max_threes, guard)
}

// ---------------------------------------------------------------------------
// growth-exponent estimation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorMethod {
    /// Least squares on (ln n, ln p_n) where p_n sums dims through degree n.
    LogPartialSums,
    /// Repeated differencing of partial sums along an arithmetic
    /// progression; detects the degree of quasi-polynomial growth.
    FiniteDifferences { stride: u32 },
}

impl fmt::Display for EstimatorMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimatorMethod::LogPartialSums => write!(f, "log-partial-sums"),
            EstimatorMethod::FiniteDifferences { stride } => {
                write!(f, "finite-differences(stride={stride})")
            }
        }
    }
}

impl Serialize for EstimatorMethod {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthEstimate {
    pub exponent: f64,
    pub window: (u32, u32),
    pub method: EstimatorMethod,
}

/// Estimate the growth exponent of a dims table (indexed from degree 0).
/// The window defaults to the upper half of the table; estimates converge
/// like log, so they are loose by design.
pub fn growth_exponent(
    dims: &[u64],
    window: Option<(u32, u32)>,
    method: EstimatorMethod,
) -> Result<GrowthEstimate> {
    if dims.is_empty() {
        return Err(Error::Precondition("empty growth table".into()));
    }
    let n_max = (dims.len() - 1) as u32;
    let (lo, hi) = window.unwrap_or((n_max.div_ceil(2).max(1), n_max));
    if lo < 1 || lo > hi || hi > n_max {
        return Err(Error::Precondition(format!(
            "window {lo}..{hi} not inside 1..{n_max}"
        )));
    }
    let mut partial: Vec<u64> = Vec::with_capacity(dims.len());
    let mut acc = 0u64;
    for &d in dims {
        acc = acc
            .checked_add(d)
            .ok_or_else(|| Error::Precondition("partial sums overflow u64".into()))?;
        partial.push(acc);
    }
    let exponent = match method {
        EstimatorMethod::LogPartialSums => {
            if hi - lo < 1 {
                return Err(Error::Precondition(
                    "log regression needs at least two window points".into(),
                ));
            }
            let pts: Vec<(f64, f64)> = (lo..=hi)
                .map(|n| {
                    let p = partial[n as usize];
                    if p == 0 {
                        Err(Error::Precondition(format!(
                            "partial sum vanishes at degree {n}"
                        )))
                    } else {
                        Ok(((n as f64).ln(), (p as f64).ln()))
                    }
                })
                .collect::<Result<_>>()?;
            let n = pts.len() as f64;
            let mx = pts.iter().map(|(x, _)| x).sum::<f64>() / n;
            let my = pts.iter().map(|(_, y)| y).sum::<f64>() / n;
            let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
            let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
            if sxx == 0.0 {
                return Err(Error::Precondition("degenerate regression window".into()));
            }
            (sxy / sxx).max(0.0)
        }
        EstimatorMethod::FiniteDifferences { stride } => {
            if stride == 0 {
                return Err(Error::Precondition("stride must be positive".into()));
            }
            let mut level: Vec<i128> = (lo..=hi)
                .step_by(stride as usize)
                .map(|n| partial[n as usize] as i128)
                .collect();
            if level.len() < 2 {
                return Err(Error::Precondition(
                    "window too short for the chosen stride".into(),
                ));
            }
            let mut depth = 0u32;
            loop {
                if level.iter().all(|&v| v == 0) {
                    break (depth.saturating_sub(1)) as f64;
                }
                if level.len() < 2 {
                    return Err(Error::Precondition(
                        "differences did not vanish inside the window; \
                         growth is not quasi-polynomial along this stride"
                            .into(),
                    ));
                }
                level = level.windows(2).map(|w| w[1] - w[0]).collect();
                depth += 1;
            }
        }
    };
    Ok(GrowthEstimate {
        exponent,
        window: (lo, hi),
        method,
    })
}

// ---------------------------------------------------------------------------
// series text
// ---------------------------------------------------------------------------

/// Parse a factored series expression: sums of polynomial or fraction terms
/// like `(1+2t+t^2)/((1-t^2)^3)` or `2t+(t^2+2t^3)/((1-t^2)^3)`, folded into
/// a single fraction over the union denominator.
pub fn parse_series(input: &str) -> Result<RationalSeries> {
    let cleaned: String = input
        .replace('\u{2212}', "-")
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty series expression".into()));
    }
    let terms = split_terms(&cleaned)?;
    let mut parsed: Vec<(Vec<BigRational>, Vec<u32>)> = Vec::new();
    for (sign, body) in terms {
        let (mut numerator, factors) = parse_term(body)?;
        if sign < 0 {
            for c in &mut numerator {
                *c = -c.clone();
            }
        }
        parsed.push((numerator, factors));
    }
    // common denominator: per degree d, the max multiplicity across terms
    let mut common: BTreeMap<u32, u32> = BTreeMap::new();
    for (_, factors) in &parsed {
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        for &d in factors {
            *counts.entry(d).or_insert(0) += 1;
        }
        for (d, e) in counts {
            let slot = common.entry(d).or_insert(0);
            *slot = (*slot).max(e);
        }
    }
    let mut numerator: Vec<BigRational> = Vec::new();
    for (num, factors) in parsed {
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        for &d in &factors {
            *counts.entry(d).or_insert(0) += 1;
        }
        let mut scaled = num;
        for (&d, &e) in &common {
            let have = counts.get(&d).copied().unwrap_or(0);
            for _ in have..e {
                scaled = poly_mul(&scaled, &one_minus_td(d));
            }
        }
        if numerator.len() < scaled.len() {
            numerator.resize(scaled.len(), BigRational::zero());
        }
        for (i, c) in scaled.into_iter().enumerate() {
            numerator[i] += c;
        }
    }
    let factors: Vec<u32> = common
        .into_iter()
        .flat_map(|(d, e)| std::iter::repeat(d).take(e as usize))
        .collect();
    RationalSeries::new(numerator, factors)
}

/// Split on top-level + and - (parenthesis depth 0), keeping signs.
fn split_terms(s: &str) -> Result<Vec<(i32, &str)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    let mut sign = 1i32;
    let mut i = 0usize;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse("unbalanced parentheses".into()));
                }
            }
            b'+' | b'-' if depth == 0 && i > start => {
                out.push((sign, &s[start..i]));
                sign = if bytes[i] == b'-' { -1 } else { 1 };
                start = i + 1;
            }
            b'-' if depth == 0 && i == start => {
                sign = -sign;
                start = i + 1;
            }
            b'+' if depth == 0 && i == start => {
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    if depth != 0 {
        return Err(Error::Parse("unbalanced parentheses".into()));
    }
    if start >= s.len() {
        return Err(Error::Parse("trailing operator in series expression".into()));
    }
    out.push((sign, &s[start..]));
    Ok(out)
}

/// One term: numerator, optionally /(...) denominator. A slash is a
/// denominator split only when a parenthesis follows; otherwise it is a
/// rational coefficient like 3/2.
fn parse_term(s: &str) -> Result<(Vec<BigRational>, Vec<u32>)> {
    let bytes = s.as_bytes();
    let mut depth = 0i32;
    for i in 0..bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'/' if depth == 0 && bytes.get(i + 1) == Some(&b'(') => {
                let numerator = parse_polynomial(strip_parens(&s[..i]))?;
                let factors = parse_denominator(&s[i + 1..])?;
                return Ok((numerator, factors));
            }
            _ => {}
        }
    }
    Ok((parse_polynomial(strip_parens(s))?, Vec::new()))
}

/// Strip outer parentheses while they wrap the whole string.
fn strip_parens(s: &str) -> &str {
    let mut cur = s;
    'outer: while cur.starts_with('(') && cur.ends_with(')') {
        let inner = &cur[1..cur.len() - 1];
        let mut depth = 0i32;
        for b in inner.bytes() {
            match b {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth < 0 {
                        break 'outer;
                    }
                }
                _ => {}
            }
        }
        if depth != 0 {
            break;
        }
        cur = inner;
    }
    cur
}

fn parse_polynomial(s: &str) -> Result<Vec<BigRational>> {
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut coeffs: Vec<BigRational> = Vec::new();
    for (sign, mono) in split_terms(s)? {
        let (mut coef, exp) = parse_monomial(mono)?;
        if sign < 0 {
            coef = -coef;
        }
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, BigRational::zero());
        }
        coeffs[exp] += coef;
    }
    Ok(trim(coeffs))
}

/// `3`, `t`, `2t^4`, `3/2*t^2`, `3/2t^2` all parse; exponents are decimal.
fn parse_monomial(s: &str) -> Result<(BigRational, usize)> {
    let err = || Error::Parse(format!("bad monomial {s:?}"));
    let bytes = s.as_bytes();
    let mut i = 0;
    let read_int = |i: &mut usize| -> Option<BigInt> {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        if *i == start {
            None
        } else {
            s[start..*i].parse().ok()
        }
    };
    let mut coef = BigRational::one();
    if let Some(n) = read_int(&mut i) {
        coef = BigRational::from_integer(n);
        if i < bytes.len() && bytes[i] == b'/' {
            i += 1;
            let d = read_int(&mut i).ok_or_else(err)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            coef /= BigRational::from_integer(d);
        }
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
        }
    }
    let mut exp = 0usize;
    if i < bytes.len() && bytes[i] == b't' {
        i += 1;
        exp = 1;
        if i < bytes.len() && bytes[i] == b'^' {
            i += 1;
            let e = read_int(&mut i).ok_or_else(err)?;
            exp = e.try_into().map_err(|_| err())?;
            if exp > MAX_FACTOR_DEGREE as usize {
                return Err(Error::Parse(format!("exponent too large in {s:?}")));
            }
        }
    }
    if i != bytes.len() {
        return Err(err());
    }
    Ok((coef, exp))
}

/// A product of factors, each `(1-t^d)` optionally raised to a power, with
/// redundant wrapping parentheses tolerated.
fn parse_denominator(s: &str) -> Result<Vec<u32>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        if bytes[i] != b'(' {
            return Err(Error::Parse(format!(
                "denominator must be a product of (1-t^d) factors, got {s:?}"
            )));
        }
        let start = i;
        let mut depth = 0i32;
        loop {
            if i >= bytes.len() {
                return Err(Error::Parse("unbalanced parentheses in denominator".into()));
            }
            match bytes[i] {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                _ => {}
            }
            i += 1;
        }
        let inner = &s[start + 1..i];
        i += 1;
        let mut exp = 1u32;
        if i < bytes.len() && bytes[i] == b'^' {
            i += 1;
            let estart = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            exp = s[estart..i]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in denominator {s:?}")))?;
            if exp == 0 || exp > 64 {
                return Err(Error::Parse(format!("denominator exponent {exp} out of range")));
            }
        }
        let base = if inner.starts_with('(') {
            parse_denominator(inner)?
        } else {
            vec![parse_one_minus_td(inner)?]
        };
        for _ in 0..exp {
            out.extend_from_slice(&base);
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("empty denominator".into()));
    }
    Ok(out)
}

fn parse_one_minus_td(s: &str) -> Result<u32> {
    let p = parse_polynomial(s)?;
    let d = p.len().saturating_sub(1);
    let ok = d >= 1
        && p[0].is_one()
        && p[d] == -BigRational::one()
        && p[1..d].iter().all(|c| c.is_zero());
    if ok {
        Ok(d as u32)
    } else {
        Err(Error::Parse(format!(
            "denominator factor {s:?} is not of the form 1-t^d"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ser(num: &[i64], factors: &[u32]) -> RationalSeries {
        RationalSeries::from_integer_numerator(num, factors.to_vec()).unwrap()
    }

    fn dims(s: &RationalSeries, n: u32) -> Vec<u64> {
        s.expand_dims(n).unwrap()
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(dims(&ser(&[1], &[1]), 4), vec![1, 1, 1, 1, 1]);
        assert_eq!(dims(&ser(&[1], &[2, 2, 2]), 6), vec![1, 0, 3, 0, 6, 0, 10]);
        assert_eq!(
            dims(&ser(&[1, 2, 1], &[2, 2, 2]), 8),
            vec![1, 2, 4, 6, 9, 12, 16, 20, 25]
        );
    }

    #[test]
    fn pole_multiplicity_examples() {
        assert_eq!(pole_multiplicity_at_one(&ser(&[1], &[1, 1, 1])).unwrap(), 3);
        assert_eq!(pole_multiplicity_at_one(&ser(&[1, -1], &[1, 1])).unwrap(), 1);
        // more numerator roots than factors floors at zero
        assert_eq!(pole_multiplicity_at_one(&ser(&[1, -2, 1], &[1])).unwrap(), 0);
        assert_eq!(pole_multiplicity_at_one(&ser(&[1], &[2, 2, 2])).unwrap(), 3);
        assert_eq!(pole_multiplicity_at_one(&ser(&[1, 1], &[])).unwrap(), 0);
        assert!(pole_multiplicity_at_one(&ser(&[], &[1])).is_err());
    }

    #[test]
    fn gkdim_checks_hilbert_expansion() {
        assert_eq!(gkdim_from_series(&ser(&[1], &[2, 2, 2]), 32).unwrap(), 3);
        assert_eq!(gkdim_from_series(&ser(&[1, 1], &[]), 32).unwrap(), 0);
        // 1/(1+t) written as (1-t)/(1-t^2) alternates in sign
        let r = gkdim_from_series(&ser(&[1, -1], &[2]), 32);
        assert!(matches!(r, Err(Error::NotHilbertSeries(_))));
        // rational but non-integer coefficients are rejected too
        let half = RationalSeries::new(
            vec![BigRational::new(BigInt::from(1), BigInt::from(2))],
            vec![1],
        )
        .unwrap();
        assert!(gkdim_from_series(&half, 32).is_err());
    }

    #[test]
    fn product_and_free_ring_division() {
        let a = ser(&[1], &[1, 1]);
        let b = ser(&[1], &[2, 2, 2]);
        let prod = series_product(&a, &b);
        assert_eq!(prod.factors(), &[1, 1, 2, 2, 2]);
        // expansion of a product is the convolution of expansions
        let (ea, eb, ep) = (a.expand(8), b.expand(8), prod.expand(8));
        for n in 0..=8usize {
            let conv: BigRational = (0..=n).map(|i| &ea[i] * &eb[n - i]).sum();
            assert_eq!(ep[n], conv);
        }
        // round trip
        let back = series_divide_by_free_ring(&prod, 2).unwrap();
        assert_eq!(back, b);
        // dividing 1/(1-t^2) by the free ring is not a factorization
        let r = series_divide_by_free_ring(&ser(&[1], &[2]), 1);
        assert!(matches!(r, Err(Error::Factorization(_))));
    }

    #[test]
    fn fit_frozen_tables_m2() {
        let w22 = [1, 2, 4, 6, 9, 12, 16, 20, 25];
        let fit = fit_numerator_dims(&w22, &[2, 2, 2], 2).unwrap().unwrap();
        assert_eq!(fit, ser(&[1, 2, 1], &[2, 2, 2]));
        assert_eq!(pole_multiplicity_at_one(&fit).unwrap(), 3);

        let c022 = [1, 0, 3, 0, 6, 0, 10, 0, 15];
        let fit = fit_numerator_dims(&c022, &[2, 2, 2], 2).unwrap().unwrap();
        assert_eq!(fit, ser(&[1], &[2, 2, 2]));

        // commutator-ideal table of the Lie algebra: degrees 0,1 zeroed
        let l22_ideal = [0, 0, 1, 2, 3, 6, 6, 12, 10];
        let fit = fit_numerator_dims(&l22_ideal, &[2, 2, 2], 2).unwrap().unwrap();
        assert_eq!(fit, ser(&[0, 0, 1, 2], &[2, 2, 2]));
        assert_eq!(pole_multiplicity_at_one(&fit).unwrap(), 3);
        // the full Lie series adds the linear span back
        let two_t = vec![
            BigRational::zero(),
            BigRational::from_integer(BigInt::from(2)),
        ];
        let l22 = fit.plus_polynomial(&two_t);
        assert_eq!(dims(&l22, 8), vec![0, 2, 1, 2, 3, 6, 6, 12, 10]);
        assert_eq!(pole_multiplicity_at_one(&l22).unwrap(), 3);
    }

    #[test]
    fn fit_frozen_tables_m3() {
        let w23 = [1, 3, 9, 19, 39, 69, 119];
        let fit = fit_numerator_dims(&w23, &[2; 6], 2).unwrap().unwrap();
        assert_eq!(fit, ser(&[1, 3, 3, 1], &[2; 6]));
        assert_eq!(pole_multiplicity_at_one(&fit).unwrap(), 6);

        let c023 = [1, 0, 6, 1, 21, 6, 56];
        let fit = fit_numerator_dims(&c023, &[2; 6], 2).unwrap().unwrap();
        assert_eq!(fit, ser(&[1, 0, 0, 1], &[2; 6]));
        assert_eq!(pole_multiplicity_at_one(&fit).unwrap(), 6);

        // the free Lie collapse at degree 5 admits no such fit
        let l23_ideal = [0, 0, 3, 8, 18, 42, 63];
        assert!(fit_numerator_dims(&l23_ideal, &[2; 6], 2).unwrap().is_none());
    }

    #[test]
    fn fit_negative_and_trivial_controls() {
        assert!(fit_numerator_dims(&[1, 1, 2, 3, 5], &[1], 2).unwrap().is_none());
        let ones = [1, 1, 1, 1, 1];
        let fit = fit_numerator_dims(&ones, &[1], 2).unwrap().unwrap();
        assert_eq!(fit, ser(&[1], &[1]));
        assert!(matches!(
            fit_numerator_dims(&[1], &[1], 2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn search_prefers_fewer_factors_then_fewer_cubes() {
        let w22 = [1, 2, 4, 6, 9, 12, 16, 20, 25];
        let fit = search_fit_dims(&w22, 3, 1, 2).unwrap().unwrap();
        assert_eq!(fit.factors(), &[2, 2, 2]);
        assert!(search_fit_dims(&[1, 1, 2, 3, 5, 8, 13], 3, 3, 2)
            .unwrap()
            .is_none());
    }

    #[test]
    fn growth_exponent_estimates() {
        let dims = ser(&[1], &[2, 2, 2]).expand_dims(40).unwrap();
        let est = growth_exponent(&dims, None, EstimatorMethod::LogPartialSums).unwrap();
        assert_eq!(est.window, (20, 40));
        assert!((est.exponent - 3.0).abs() < 0.35, "slope {}", est.exponent);
        assert!((est.exponent - 2.6692).abs() < 1e-3, "slope {}", est.exponent);

        let fd = growth_exponent(&dims, None, EstimatorMethod::FiniteDifferences { stride: 2 })
            .unwrap();
        assert_eq!(fd.exponent, 3.0);

        // constant dims: partial sums grow linearly
        let flat = vec![1u64; 41];
        let est = growth_exponent(&flat, None, EstimatorMethod::LogPartialSums).unwrap();
        assert!((est.exponent - 1.0).abs() < 0.1);

        // finite-dimensional: constant partial sums, exponent zero both ways
        let mut fin = vec![1u64, 2, 1];
        fin.extend([0; 20]);
        let est = growth_exponent(&fin, None, EstimatorMethod::LogPartialSums).unwrap();
        assert_eq!(est.exponent, 0.0);
        let fd = growth_exponent(&fin, None, EstimatorMethod::FiniteDifferences { stride: 1 })
            .unwrap();
        assert_eq!(fd.exponent, 0.0);

        assert!(growth_exponent(&[], None, EstimatorMethod::LogPartialSums).is_err());
        assert!(growth_exponent(&dims, Some((30, 20)), EstimatorMethod::LogPartialSums).is_err());
    }

    #[test]
    fn coefficient_bound_from_pole_multiplicity() {
        // pole multiplicity 3 means quadratically bounded coefficients; the
        // constants were measured once and frozen
        let dims = ser(&[1], &[2, 2, 2]).expand_dims(40).unwrap();
        for (n, &a) in dims.iter().enumerate().skip(1) {
            assert!(a <= (n * n) as u64, "a_{n} = {a}");
        }
        let dims = ser(&[1, 2, 1], &[2, 2, 2]).expand_dims(40).unwrap();
        for (n, &a) in dims.iter().enumerate().skip(1) {
            assert!(a <= 2 * (n * n) as u64, "a_{n} = {a}");
        }
    }

    #[test]
    fn parse_and_print_round_trips() {
        let s = parse_series("(1+2t+t^2)/((1-t^2)^3)").unwrap();
        assert_eq!(s, ser(&[1, 2, 1], &[2, 2, 2]));
        assert_eq!(s.to_text(), "(1+2t+t^2)/((1-t^2)^3)");
        assert_eq!(parse_series(&s.to_text()).unwrap(), s);

        let folded = parse_series("2t+(t^2+2t^3)/((1-t^2)^3)").unwrap();
        assert_eq!(folded, ser(&[0, 2, 1, -4, 0, 6, 0, -2], &[2, 2, 2]));
        assert_eq!(pole_multiplicity_at_one(&folded).unwrap(), 3);
        assert_eq!(gkdim_from_series(&folded, 32).unwrap(), 3);

        let cancel = parse_series("(1-t)/(1-t)^2").unwrap();
        assert_eq!(cancel.factors(), &[1, 1]);
        assert_eq!(pole_multiplicity_at_one(&cancel).unwrap(), 1);

        assert_eq!(parse_series("1/(1-t)").unwrap(), ser(&[1], &[1]));
        assert_eq!(ser(&[1], &[1]).to_text(), "1/(1-t)");
        assert_eq!(parse_series("1+t^2").unwrap(), ser(&[1, 0, 1], &[]));
        assert_eq!(parse_series("3/2*t^2-t").unwrap().to_text(), "-t+3/2*t^2");
        // a bare factored product is not a polynomial term
        assert!(parse_series("(1-t)^2(1-t^3)").is_err());
        let multi = parse_series("1/((1-t)^2(1-t^3))").unwrap();
        assert_eq!(multi.factors(), &[1, 1, 3]);
        assert_eq!(multi.to_text(), "1/((1-t)^2(1-t^3))");

        assert!(parse_series("").is_err());
        assert!(parse_series("1/(1+t)").is_err());
        assert!(parse_series("t^").is_err());
        assert!(parse_series("(1").is_err());
    }

    #[test]
    fn zero_and_display_edges() {
        let zero = ser(&[], &[2]);
        assert!(zero.is_zero());
        assert_eq!(zero.to_text(), "0");
        assert_eq!(ser(&[0, 2], &[2, 2, 2]).to_text(), "2t/((1-t^2)^3)");
        assert_eq!(ser(&[1, -1], &[]).to_text(), "1-t");
        assert_eq!(ser(&[-1, 0, 1], &[]).to_text(), "-1+t^2");
    }
}
