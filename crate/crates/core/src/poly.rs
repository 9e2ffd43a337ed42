//! Sparse multivariate polynomials over `Scalar`, with variables indexed by
//! (matrix index, entry position). Terms live in a BTreeMap keyed by monomial
//! under graded-lexicographic order, so every polynomial has one canonical
//! form and iteration order is deterministic.

use crate::error::{Error, Result};
use crate::scalar::{CoeffMode, Scalar};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Which family of generic matrices a variable belongs to: entries of a full
/// generic matrix print as `y[i](r,c)`, fresh entries of a directly
/// parametrized traceless matrix as `z[i](r,c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VarKind {
    Full,
    Traceless,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarId {
    pub kind: VarKind,
    pub index: u16,
    pub row: u8,
    pub col: u8,
}

impl VarId {
    pub fn new(kind: VarKind, index: u16, row: u8, col: u8) -> VarId {
        VarId { kind, index, row, col }
    }
}

// Variables sort by (matrix index, row, col); the kind only breaks ties and
// never matters in practice since the two parametrizations are not mixed.
impl Ord for VarId {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.index, self.row, self.col, self.kind).cmp(&(
            other.index,
            other.row,
            other.col,
            other.kind,
        ))
    }
}

impl PartialOrd for VarId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.kind {
            VarKind::Full => 'y',
            VarKind::Traceless => 'z',
        };
        write!(f, "{}[{}]({},{})", letter, self.index, self.row, self.col)
    }
}

/// A monomial: sorted (variable, exponent) pairs, no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Monomial {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(VarId, u32)>) -> Monomial {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_by_key(|&(v, _)| v);
        // merge duplicates
        let mut out: Vec<(VarId, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }
}

// Graded-lexicographic: higher total degree wins; at equal degree the
// monomial with the larger exponent on the earliest differing variable wins,
// so with x < y in VarId order: x^2 > xy > y^2.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (va, ea) = self.0[i];
            let (vb, eb) = other.0[j];
            match va.cmp(&vb) {
                // self has a nonzero exponent on an earlier variable
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        // equal degrees: both must be exhausted
        debug_assert!(i == self.0.len() && j == other.0.len());
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    mode: CoeffMode,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(mode: CoeffMode) -> MultiPoly {
        MultiPoly {
            mode,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar) -> MultiPoly {
        let mode = c.mode();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MultiPoly { mode, terms }
    }

    pub fn variable(v: VarId, mode: CoeffMode) -> MultiPoly {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), Scalar::one(mode));
        MultiPoly { mode, terms }
    }

    pub fn mode(&self) -> CoeffMode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending (leading-first) canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    /// Homogeneous degree: Some(n) if every monomial has total degree n.
    /// The zero polynomial is homogeneous of every degree; by convention this
    /// returns None for it, and `is_homogeneous_of(n)` accepts it for any n.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let first = it.next()?.degree();
        if it.all(|m| m.degree() == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn is_homogeneous_of(&self, n: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == n)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    fn check_mode(&self, other: &MultiPoly) -> Result<()> {
        if self.mode == other.mode {
            Ok(())
        } else {
            Err(Error::ModeMismatch(
                self.mode.to_string(),
                other.mode.to_string(),
            ))
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_mode(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(acc) => {
                    let s = acc.add(c)?;
                    if s.is_zero() {
                        terms.remove(m);
                    } else {
                        *acc = s;
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(MultiPoly {
            mode: self.mode,
            terms,
        })
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            mode: self.mode,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Result<MultiPoly> {
        if s.mode() != self.mode {
            return Err(Error::ModeMismatch(
                self.mode.to_string(),
                s.mode().to_string(),
            ));
        }
        if s.is_zero() {
            return Ok(MultiPoly::zero(self.mode));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = c.mul(s)?;
            if !v.is_zero() {
                terms.insert(m.clone(), v);
            }
        }
        Ok(MultiPoly {
            mode: self.mode,
            terms,
        })
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_mode(other)?;
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb)?;
                match terms.get_mut(&m) {
                    Some(acc) => {
                        let s = acc.add(&c)?;
                        if s.is_zero() {
                            terms.remove(&m);
                        } else {
                            *acc = s;
                        }
                    }
                    None => {
                        if !c.is_zero() {
                            terms.insert(m, c);
                        }
                    }
                }
            }
        }
        Ok(MultiPoly {
            mode: self.mode,
            terms,
        })
    }

    /// Reduce every coefficient mod p, dropping terms that vanish.
    pub fn to_mod(&self, p: u64) -> Result<MultiPoly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = c.to_mod(p)?;
            if !v.is_zero() {
                terms.insert(m.clone(), v);
            }
        }
        Ok(MultiPoly {
            mode: CoeffMode::Mod(p),
            terms,
        })
    }

    /// Substitute scalar values for every variable (used by the random
    /// specialization tests). `assign` must cover all variables present.
    pub fn evaluate(&self, assign: &dyn Fn(VarId) -> Scalar) -> Result<Scalar> {
        let mut acc = Scalar::zero(self.mode);
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(v, e) in m.pairs() {
                let val = assign(v);
                for _ in 0..e {
                    term = term.mul(&val)?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let (neg, abs) = match c {
                Scalar::Rat(r) => {
                    use num::Signed;
                    (r.is_negative(), Scalar::Rat(r.abs()))
                }
                _ => (false, c.clone()),
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_is_one = abs == Scalar::one(self.mode);
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if coeff_is_one {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Flatten a polynomial into coordinates over an explicit monomial basis.
/// Errors if the polynomial contains a monomial outside the basis.
pub fn coefficient_vector(p: &MultiPoly, basis: &[Monomial]) -> Result<Vec<Scalar>> {
    let index: BTreeMap<&Monomial, usize> =
        basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut out = vec![Scalar::zero(p.mode()); basis.len()];
    for (m, c) in p.terms() {
        match index.get(m) {
            Some(&i) => out[i] = c.clone(),
            None => return Err(Error::IncompleteBasis(m.to_string())),
        }
    }
    Ok(out)
}

/// Rebuild a polynomial from coordinates over a monomial basis.
pub fn from_coefficient_vector(
    coeffs: &[Scalar],
    basis: &[Monomial],
    mode: CoeffMode,
) -> Result<MultiPoly> {
    if coeffs.len() != basis.len() {
        return Err(Error::Precondition(format!(
            "coefficient vector length {} != basis length {}",
            coeffs.len(),
            basis.len()
        )));
    }
    let mut acc = MultiPoly::zero(mode);
    for (c, m) in coeffs.iter().zip(basis) {
        if !c.is_zero() {
            let term = MultiPoly::constant(c.clone());
            let mono = MultiPoly {
                mode,
                terms: [(m.clone(), Scalar::one(mode))].into_iter().collect(),
            };
            acc = acc.add(&term.mul(&mono)?)?;
        }
    }
    Ok(acc)
}

/// All degree-n monomials over the given variables, leading-first in the
/// canonical order. Count is C(|vars| + n - 1, n).
pub fn monomials_of_degree(vars: &[VarId], n: u32) -> Vec<Monomial> {
    let mut sorted: Vec<VarId> = vars.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut out = Vec::new();
    let mut stack: Vec<(VarId, u32)> = Vec::new();
    gen_monomials(&sorted, 0, n, &mut stack, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

fn gen_monomials(
    vars: &[VarId],
    at: usize,
    left: u32,
    stack: &mut Vec<(VarId, u32)>,
    out: &mut Vec<Monomial>,
) {
    if left == 0 {
        out.push(Monomial::from_pairs(stack.clone()));
        return;
    }
    if at == vars.len() {
        return;
    }
    if at == vars.len() - 1 {
        stack.push((vars[at], left));
        out.push(Monomial::from_pairs(stack.clone()));
        stack.pop();
        return;
    }
    for e in (0..=left).rev() {
        if e > 0 {
            stack.push((vars[at], e));
        }
        gen_monomials(vars, at + 1, left - e, stack, out);
        if e > 0 {
            stack.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn var(i: u16) -> VarId {
        VarId::new(VarKind::Traceless, i, 1, 1)
    }

    fn x() -> MultiPoly {
        MultiPoly::variable(var(1), CoeffMode::Exact)
    }

    fn y() -> MultiPoly {
        MultiPoly::variable(var(2), CoeffMode::Exact)
    }

    #[test]
    fn add_cancels() {
        let s = x().add(&y()).unwrap().add(&x().neg()).unwrap();
        assert_eq!(s, y());
    }

    #[test]
    fn add_identity_and_collect() {
        let p = x().add(&y()).unwrap();
        assert_eq!(p.add(&MultiPoly::zero(CoeffMode::Exact)).unwrap(), p);
        let two_x = x().scale(&Scalar::from_integer(2, CoeffMode::Exact)).unwrap();
        let three_x = x().scale(&Scalar::from_integer(3, CoeffMode::Exact)).unwrap();
        let five_x = x().scale(&Scalar::from_integer(5, CoeffMode::Exact)).unwrap();
        assert_eq!(two_x.add(&three_x).unwrap(), five_x);
    }

    #[test]
    fn difference_of_squares() {
        let sum = x().add(&y()).unwrap();
        let diff = x().sub(&y()).unwrap();
        let prod = sum.mul(&diff).unwrap();
        let expect = x().mul(&x()).unwrap().sub(&y().mul(&y()).unwrap()).unwrap();
        assert_eq!(prod, expect);
    }

    #[test]
    fn mul_identity_and_grading() {
        let p = x().add(&y()).unwrap();
        let one = MultiPoly::constant(Scalar::one(CoeffMode::Exact));
        assert_eq!(p.mul(&one).unwrap(), p);
        let d2 = x().mul(&x()).unwrap().add(&y().mul(&y()).unwrap()).unwrap();
        let d3 = d2.mul(&y()).unwrap().add(&x().mul(&d2).unwrap()).unwrap();
        let prod = d2.mul(&d3).unwrap();
        assert_eq!(prod.homogeneous_degree(), Some(5));
    }

    #[test]
    fn graded_lex_order() {
        // x^2 > xy > y^2 with x earlier than y
        let x2 = Monomial::var(var(1)).mul(&Monomial::var(var(1)));
        let xy = Monomial::var(var(1)).mul(&Monomial::var(var(2)));
        let y2 = Monomial::var(var(2)).mul(&Monomial::var(var(2)));
        assert!(x2 > xy && xy > y2);
        // degree dominates
        let x3 = x2.mul(&Monomial::var(var(1)));
        assert!(x3 > x2);
        assert!(Monomial::one() < y2);
    }

    #[test]
    fn coefficient_vector_roundtrip() {
        let vars = [var(1), var(2)];
        let basis = monomials_of_degree(&vars, 2);
        assert_eq!(basis.len(), 3);
        // x^2 + 2xy over [x^2, xy, y^2] -> (1, 2, 0)
        let p = x()
            .mul(&x())
            .unwrap()
            .add(
                &x()
                    .mul(&y())
                    .unwrap()
                    .scale(&Scalar::from_integer(2, CoeffMode::Exact))
                    .unwrap(),
            )
            .unwrap();
        let v = coefficient_vector(&p, &basis).unwrap();
        assert_eq!(
            v,
            vec![
                Scalar::one(CoeffMode::Exact),
                Scalar::from_integer(2, CoeffMode::Exact),
                Scalar::zero(CoeffMode::Exact)
            ]
        );
        let q = from_coefficient_vector(&v, &basis, CoeffMode::Exact).unwrap();
        assert_eq!(p, q);
        // zero maps to the zero vector
        let z = coefficient_vector(&MultiPoly::zero(CoeffMode::Exact), &basis).unwrap();
        assert!(z.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn incomplete_basis_is_an_error() {
        let basis = vec![Monomial::var(var(1))];
        let r = coefficient_vector(&y(), &basis);
        assert!(matches!(r, Err(Error::IncompleteBasis(_))));
    }

    #[test]
    fn monomial_counts() {
        let vars = [var(1), var(2)];
        assert_eq!(monomials_of_degree(&vars, 0), vec![Monomial::one()]);
        // 6 variables, degree 3: C(8,3) = 56
        let six: Vec<VarId> = (1..=6).map(var).collect();
        assert_eq!(monomials_of_degree(&six, 3).len(), 56);
    }

    #[test]
    fn monomials_sorted_leading_first() {
        let vars = [var(1), var(2)];
        let ms = monomials_of_degree(&vars, 2);
        for w in ms.windows(2) {
            assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn mod_reduction_matches() {
        let p = 1_000_003u64;
        let a = x()
            .scale(&Scalar::from_ratio(3, 4, CoeffMode::Exact).unwrap())
            .unwrap()
            .add(&y())
            .unwrap();
        let b = x().sub(&y().scale(&Scalar::from_integer(7, CoeffMode::Exact).neg()).unwrap()).unwrap();
        let exact = a.mul(&b).unwrap().to_mod(p).unwrap();
        let modular = a.to_mod(p).unwrap().mul(&b.to_mod(p).unwrap()).unwrap();
        assert_eq!(exact, modular);
    }

    #[test]
    fn display_canonical_text() {
        let p = x()
            .mul(&x())
            .unwrap()
            .scale(&Scalar::from_ratio(3, 2, CoeffMode::Exact).unwrap())
            .unwrap()
            .sub(&y())
            .unwrap();
        assert_eq!(p.to_string(), "3/2*z[1](1,1)^2 - z[2](1,1)");
    }
}
