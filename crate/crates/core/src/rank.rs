//! Exact rank of spans of symbolic matrices/polynomials. Elements are
//! flattened to sparse integer rows over a deterministic column order
//! (canonical monomial order, then entry position), then fed into a
//! fraction-free Gaussian echelon. A prime-field variant provides a fast
//! certified lower bound; acceptance runs require it to match the exact rank.

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::{bigint_mod_u64, invmod, mulmod, Scalar};
use num::{BigInt, Integer, One, Signed, Zero};
use std::collections::BTreeMap;

/// One element of a span: a matrix (flattened entries) or a bare polynomial.
/// Both are just slices of polynomials by the time rank sees them.
pub type EntrySlice<'a> = &'a [MultiPoly];

/// Deterministic column indexing for a batch of elements: columns are the
/// observed (monomial, entry position) pairs, leading monomial first.
pub struct ColumnMap {
    index: BTreeMap<(std::cmp::Reverse<Monomial>, u16), u32>,
}

impl ColumnMap {
    pub fn build<'a, I>(elements: I) -> ColumnMap
    where
        I: IntoIterator<Item = EntrySlice<'a>>,
    {
        let mut keys: BTreeMap<(std::cmp::Reverse<Monomial>, u16), u32> = BTreeMap::new();
        for el in elements {
            for (pos, p) in el.iter().enumerate() {
                for (m, _) in p.terms() {
                    keys.entry((std::cmp::Reverse(m.clone()), pos as u16))
                        .or_insert(0);
                }
            }
        }
        let mut next = 0u32;
        for v in keys.values_mut() {
            *v = next;
            next += 1;
        }
        ColumnMap { index: keys }
    }

    pub fn width(&self) -> usize {
        self.index.len()
    }

    /// Exact integer row: denominators cleared, content and sign normalized.
    /// Returns None if the element mentions a monomial outside this map
    /// (which, for a membership test, proves it is outside the span).
    pub fn exact_row(&self, el: EntrySlice<'_>) -> Option<Option<SparseRow<BigInt>>> {
        let mut entries: Vec<(u32, &Scalar)> = Vec::new();
        for (pos, p) in el.iter().enumerate() {
            for (m, c) in p.terms() {
                match self
                    .index
                    .get(&(std::cmp::Reverse(m.clone()), pos as u16))
                {
                    Some(&col) => entries.push((col, c)),
                    None => return None,
                }
            }
        }
        if entries.is_empty() {
            return Some(None);
        }
        let mut lcm = BigInt::one();
        for (_, c) in &entries {
            let r = c.as_rational().expect("exact_row needs exact-mode scalars");
            lcm = lcm.lcm(r.denom());
        }
        let mut row: Vec<(u32, BigInt)> = entries
            .iter()
            .map(|(col, c)| {
                let r = c.as_rational().unwrap();
                (*col, r.numer() * (&lcm / r.denom()))
            })
            .collect();
        row.sort_by_key(|&(col, _)| col);
        normalize_content(&mut row);
        Some(Some(SparseRow(row)))
    }

    /// Prime-field row; coefficients may reduce to zero mod p, and a row that
    /// vanishes entirely is returned as None.
    pub fn modular_row(
        &self,
        el: EntrySlice<'_>,
        p: u64,
    ) -> Result<Option<Option<SparseRow<u64>>>> {
        let mut row: Vec<(u32, u64)> = Vec::new();
        for (pos, poly) in el.iter().enumerate() {
            for (m, c) in poly.terms() {
                let col = match self
                    .index
                    .get(&(std::cmp::Reverse(m.clone()), pos as u16))
                {
                    Some(&col) => col,
                    None => return Ok(None),
                };
                let v = match c {
                    Scalar::Mod { p: q, v } if *q == p => *v,
                    Scalar::Mod { .. } => {
                        return Err(Error::ModeMismatch(c.mode().to_string(), format!("mod:{p}")))
                    }
                    Scalar::Rat(r) => {
                        let num = bigint_mod_u64(r.numer(), p);
                        let den = bigint_mod_u64(r.denom(), p);
                        if den == 0 {
                            return Err(Error::UnsupportedCharacteristic(format!(
                                "denominator vanishes mod {p}"
                            )));
                        }
                        mulmod(num, invmod(den, p), p)
                    }
                };
                if v != 0 {
                    row.push((col, v));
                }
            }
        }
        if row.is_empty() {
            return Ok(Some(None));
        }
        row.sort_by_key(|&(col, _)| col);
        Ok(Some(Some(SparseRow(row))))
    }
}

/// Sparse row, entries sorted by column, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseRow<T>(pub Vec<(u32, T)>);

impl<T> SparseRow<T> {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn normalize_content(row: &mut Vec<(u32, BigInt)>) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if !g.is_one() && !g.is_zero() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    if row.first().map(|(_, v)| v.is_negative()).unwrap_or(false) {
        for (_, v) in row.iter_mut() {
            *v = -&*v;
        }
    }
}

/// Fraction-free echelon over the integers. Pivot rows are primitive
/// (content 1, positive lead) and keyed by leading column; insertion order
/// is deterministic, so the whole structure is reproducible.
#[derive(Default)]
pub struct ExactEchelon {
    pivots: BTreeMap<u32, Vec<(u32, BigInt)>>,
}

impl ExactEchelon {
    pub fn new() -> ExactEchelon {
        ExactEchelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Returns true if the row was independent (rank grew).
    pub fn insert(&mut self, row: SparseRow<BigInt>) -> bool {
        let mut row = row.0;
        while !row.is_empty() {
            let lead = row[0].0;
            match self.pivots.get(&lead) {
                None => {
                    normalize_content(&mut row);
                    self.pivots.insert(lead, row);
                    return true;
                }
                Some(e) => {
                    row = combine(e, &row);
                }
            }
        }
        false
    }

    /// Reduce without inserting; an empty result means the row lies in the
    /// span of the pivot rows.
    pub fn reduce(&self, row: SparseRow<BigInt>) -> SparseRow<BigInt> {
        let mut row = row.0;
        while !row.is_empty() {
            match self.pivots.get(&row[0].0) {
                None => break,
                Some(e) => row = combine(e, &row),
            }
        }
        SparseRow(row)
    }
}

/// r' = (le/g) r - (lr/g) e for pivot row e and target r sharing a leading
/// column, with the content gcd divided out of the result.
fn combine(e: &[(u32, BigInt)], r: &[(u32, BigInt)]) -> Vec<(u32, BigInt)> {
    let le = &e[0].1;
    let lr = &r[0].1;
    let g = le.gcd(lr);
    let fe = le / &g;
    let fr = lr / &g;
    let mut out: Vec<(u32, BigInt)> = Vec::with_capacity(e.len() + r.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < r.len() && j < e.len() {
        let (ci, cj) = (r[i].0, e[j].0);
        if ci == cj {
            let v = &fe * &r[i].1 - &fr * &e[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        } else if ci < cj {
            out.push((ci, &fe * &r[i].1));
            i += 1;
        } else {
            out.push((cj, -(&fr * &e[j].1)));
            j += 1;
        }
    }
    for (c, v) in &r[i..] {
        out.push((*c, &fe * v));
    }
    for (c, v) in &e[j..] {
        out.push((*c, -(&fr * v)));
    }
    normalize_content(&mut out);
    out
}

/// Gauss echelon over Z/p with monic pivot rows.
pub struct ModularEchelon {
    p: u64,
    pivots: BTreeMap<u32, Vec<(u32, u64)>>,
}

impl ModularEchelon {
    pub fn new(p: u64) -> ModularEchelon {
        ModularEchelon {
            p,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn insert(&mut self, row: SparseRow<u64>) -> bool {
        let mut row = row.0;
        while !row.is_empty() {
            let lead = row[0].0;
            match self.pivots.get(&lead) {
                None => {
                    let inv = invmod(row[0].1, self.p);
                    for (_, v) in row.iter_mut() {
                        *v = mulmod(*v, inv, self.p);
                    }
                    self.pivots.insert(lead, row);
                    return true;
                }
                Some(e) => row = self.eliminate(e, &row),
            }
        }
        false
    }

    pub fn reduce(&self, row: SparseRow<u64>) -> SparseRow<u64> {
        let mut row = row.0;
        while !row.is_empty() {
            match self.pivots.get(&row[0].0) {
                None => break,
                Some(e) => row = self.eliminate(e, &row),
            }
        }
        SparseRow(row)
    }

    /// r - lr * e with e monic, both sharing the leading column.
    fn eliminate(&self, e: &[(u32, u64)], r: &[(u32, u64)]) -> Vec<(u32, u64)> {
        let p = self.p;
        let lr = r[0].1;
        let mut out = Vec::with_capacity(e.len() + r.len());
        let (mut i, mut j) = (0usize, 0usize);
        while i < r.len() && j < e.len() {
            let (ci, cj) = (r[i].0, e[j].0);
            if ci == cj {
                let v = (r[i].1 + p - mulmod(lr, e[j].1, p)) % p;
                if v != 0 {
                    out.push((ci, v));
                }
                i += 1;
                j += 1;
            } else if ci < cj {
                out.push(r[i]);
                i += 1;
            } else {
                let v = p - mulmod(lr, e[j].1, p);
                if v != 0 {
                    out.push((cj, v));
                }
                j += 1;
            }
        }
        out.extend_from_slice(&r[i..]);
        for &(c, v) in &e[j..] {
            let w = p - mulmod(lr, v, p);
            if w != 0 {
                out.push((c, w));
            }
        }
        out
    }
}

/// Exact rank of a batch of elements (each a slice of entry polynomials).
pub fn exact_rank<'a, I>(elements: I) -> usize
where
    I: IntoIterator<Item = EntrySlice<'a>> + Clone,
{
    let map = ColumnMap::build(elements.clone());
    let mut ech = ExactEchelon::new();
    for el in elements {
        if let Some(Some(row)) = map.exact_row(el) {
            ech.insert(row);
        }
    }
    ech.rank()
}

/// Prime-field rank; a certified lower bound on the exact rank.
pub fn modular_rank<'a, I>(elements: I, p: u64) -> Result<usize>
where
    I: IntoIterator<Item = EntrySlice<'a>> + Clone,
{
    let map = ColumnMap::build(elements.clone());
    let mut ech = ModularEchelon::new(p);
    for el in elements {
        if let Some(Some(row)) = map.modular_row(el, p)? {
            ech.insert(row);
        }
    }
    Ok(ech.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{generic_traceless, mat_mul};
    use crate::poly::VarKind;
    use crate::poly::{MultiPoly, VarId};
    use crate::scalar::CoeffMode;

    const EX: CoeffMode = CoeffMode::Exact;

    fn xv(i: u16) -> MultiPoly {
        MultiPoly::variable(VarId::new(VarKind::Traceless, i, 1, 1), EX)
    }

    #[test]
    fn rank_of_dependent_rows() {
        // x, y, x+y has rank 2
        let x = xv(1);
        let y = xv(2);
        let s = x.add(&y).unwrap();
        let elems: Vec<Vec<MultiPoly>> = vec![vec![x], vec![y], vec![s]];
        let views: Vec<&[MultiPoly]> = elems.iter().map(|e| e.as_slice()).collect();
        assert_eq!(exact_rank(views.iter().copied()), 2);
        assert_eq!(modular_rank(views.iter().copied(), 10007).unwrap(), 2);
    }

    #[test]
    fn rank_with_rational_coefficients() {
        let x = xv(1);
        let half_x = x.scale(&Scalar::from_ratio(1, 2, EX).unwrap()).unwrap();
        let elems = vec![vec![x], vec![half_x]];
        let views: Vec<&[MultiPoly]> = elems.iter().map(|e| e.as_slice()).collect();
        assert_eq!(exact_rank(views.iter().copied()), 1);
    }

    #[test]
    fn matrix_span_rank() {
        // z1^2, z1 z2, z2 z1, z2^2 are independent: frozen value 4
        let z1 = generic_traceless(2, 1, EX).unwrap();
        let z2 = generic_traceless(2, 2, EX).unwrap();
        let words = [
            mat_mul(&z1, &z1).unwrap(),
            mat_mul(&z1, &z2).unwrap(),
            mat_mul(&z2, &z1).unwrap(),
            mat_mul(&z2, &z2).unwrap(),
        ];
        let views: Vec<&[MultiPoly]> = words.iter().map(|w| w.entries()).collect();
        assert_eq!(exact_rank(views.iter().copied()), 4);
        assert_eq!(modular_rank(views.iter().copied(), (1 << 31) - 1).unwrap(), 4);
    }

    #[test]
    fn reduce_detects_membership() {
        let x = xv(1);
        let y = xv(2);
        let span = vec![vec![x.clone()], vec![y.clone()]];
        let cand_in = vec![x.add(&y).unwrap()];
        let cand_out = vec![x.mul(&x).unwrap()];
        let views: Vec<&[MultiPoly]> = span.iter().map(|e| e.as_slice()).collect();
        let map = ColumnMap::build(views.iter().copied());
        let mut ech = ExactEchelon::new();
        for v in &views {
            if let Some(Some(r)) = map.exact_row(v) {
                ech.insert(r);
            }
        }
        match map.exact_row(cand_in.as_slice()) {
            Some(Some(r)) => assert!(ech.reduce(r).is_empty()),
            _ => panic!("candidate should map into the span's columns"),
        }
        // x^2 introduces a new monomial: not representable at all
        assert!(map.exact_row(cand_out.as_slice()).is_none());
    }

    #[test]
    fn monotone_rank_growth() {
        let z1 = generic_traceless(2, 1, EX).unwrap();
        let z2 = generic_traceless(2, 2, EX).unwrap();
        let words = [
            mat_mul(&z1, &z1).unwrap(),
            mat_mul(&z1, &z2).unwrap(),
            mat_mul(&z2, &z1).unwrap(),
            mat_mul(&z2, &z2).unwrap(),
        ];
        let views: Vec<&[MultiPoly]> = words.iter().map(|w| w.entries()).collect();
        let mut last = 0;
        for take in 1..=4 {
            let r = exact_rank(views[..take].iter().copied());
            assert!(r >= last);
            last = r;
        }
    }

    #[test]
    fn content_normalization_keeps_rows_primitive() {
        let mut row = vec![(0u32, BigInt::from(-6)), (3u32, BigInt::from(9))];
        normalize_content(&mut row);
        assert_eq!(row, vec![(0, BigInt::from(2)), (3, BigInt::from(-3))]);
    }
}
