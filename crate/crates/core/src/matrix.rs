//! Generic and generic traceless k x k matrices over the polynomial ring,
//! with the noncommutative operations the identity catalog and the span
//! engine need: products, traces, commutators, standard polynomials.

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, VarId, VarKind};
use crate::scalar::{CoeffMode, Scalar};
use std::fmt;

/// Which construction realizes the traceless generators: `Direct` uses three
/// fresh variables per matrix (entries a, b; c, -a), `Projected` subtracts
/// half the trace from a full generic matrix. Ranks agree; Direct keeps the
/// monomial universe smaller.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Direct,
    Projected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericMatrix {
    k: usize,
    /// Row-major, length k*k.
    entries: Vec<MultiPoly>,
    mode: CoeffMode,
    /// Homogeneous degree tag, when known. Zero matrices keep their tag.
    degree: Option<u32>,
}

impl GenericMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> CoeffMode {
        self.mode
    }

    pub fn degree(&self) -> Option<u32> {
        self.degree
    }

    pub fn entry(&self, row: usize, col: usize) -> &MultiPoly {
        &self.entries[row * self.k + col]
    }

    pub fn entries(&self) -> &[MultiPoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn from_entries(k: usize, entries: Vec<MultiPoly>, mode: CoeffMode) -> Result<GenericMatrix> {
        if entries.len() != k * k {
            return Err(Error::Precondition(format!(
                "expected {} entries for a {k}x{k} matrix, got {}",
                k * k,
                entries.len()
            )));
        }
        let degree = infer_degree(&entries);
        Ok(GenericMatrix { k, entries, mode, degree })
    }

    pub fn zero(k: usize, mode: CoeffMode) -> GenericMatrix {
        GenericMatrix {
            k,
            entries: vec![MultiPoly::zero(mode); k * k],
            mode,
            degree: None,
        }
    }

    pub fn identity(k: usize, mode: CoeffMode) -> GenericMatrix {
        let mut m = GenericMatrix::zero(k, mode);
        for i in 0..k {
            m.entries[i * k + i] = MultiPoly::constant(Scalar::one(mode));
        }
        m.degree = Some(0);
        m
    }

    /// Scalar matrix p * I.
    pub fn scalar_matrix(k: usize, p: &MultiPoly) -> GenericMatrix {
        let mode = p.mode();
        let mut m = GenericMatrix::zero(k, mode);
        for i in 0..k {
            m.entries[i * k + i] = p.clone();
        }
        m.degree = p.homogeneous_degree();
        m
    }

    pub fn to_mod(&self, p: u64) -> Result<GenericMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.to_mod(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(GenericMatrix {
            k: self.k,
            entries,
            mode: CoeffMode::Mod(p),
            degree: self.degree,
        })
    }
}

fn infer_degree(entries: &[MultiPoly]) -> Option<u32> {
    let mut deg: Option<u32> = None;
    for e in entries {
        if e.is_zero() {
            continue;
        }
        match (deg, e.homogeneous_degree()) {
            (_, None) => return None,
            (None, d) => deg = d,
            (Some(a), Some(b)) if a == b => {}
            _ => return None,
        }
    }
    deg
}

impl fmt::Display for GenericMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.k {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.k {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(r, c))?;
            }
        }
        write!(f, "]")
    }
}

/// The i-th generic matrix: k*k independent variables, homogeneous degree 1.
pub fn generic_matrix(k: usize, i: u16, mode: CoeffMode) -> Result<GenericMatrix> {
    if k < 2 {
        return Err(Error::UnsupportedSize(k));
    }
    let mut entries = Vec::with_capacity(k * k);
    for r in 1..=k {
        for c in 1..=k {
            entries.push(MultiPoly::variable(
                VarId::new(VarKind::Full, i, r as u8, c as u8),
                mode,
            ));
        }
    }
    Ok(GenericMatrix {
        k,
        entries,
        mode,
        degree: Some(1),
    })
}

/// The i-th generic traceless matrix. For k = 2 this is the direct
/// three-variable parametrization (a, b; c, -a); for k > 2 it falls back to
/// the projection construction.
pub fn generic_traceless(k: usize, i: u16, mode: CoeffMode) -> Result<GenericMatrix> {
    if k < 2 {
        return Err(Error::UnsupportedSize(k));
    }
    if k != 2 {
        return generic_traceless_projected(k, i, mode);
    }
    let a = MultiPoly::variable(VarId::new(VarKind::Traceless, i, 1, 1), mode);
    let b = MultiPoly::variable(VarId::new(VarKind::Traceless, i, 1, 2), mode);
    let c = MultiPoly::variable(VarId::new(VarKind::Traceless, i, 2, 1), mode);
    let entries = vec![a.clone(), b, c, a.neg()];
    Ok(GenericMatrix {
        k: 2,
        entries,
        mode,
        degree: Some(1),
    })
}

/// Projection form: y_i - (1/k) tr(y_i) I, over the full 4-variable alphabet
/// for k = 2. Used to cross-check the direct parametrization.
pub fn generic_traceless_projected(k: usize, i: u16, mode: CoeffMode) -> Result<GenericMatrix> {
    let y = generic_matrix(k, i, mode)?;
    let t = trace(&y);
    let coeff = Scalar::from_ratio(1, k as i64, mode)?;
    let correction = GenericMatrix::scalar_matrix(k, &t.scale(&coeff)?);
    mat_sub(&y, &correction)
}

/// Traceless generators z_1..z_m in the requested construction.
pub fn traceless_generators(m: u16, form: Form, mode: CoeffMode) -> Result<Vec<GenericMatrix>> {
    (1..=m)
        .map(|i| match form {
            Form::Direct => generic_traceless(2, i, mode),
            Form::Projected => generic_traceless_projected(2, i, mode),
        })
        .collect()
}

fn check_sizes(a: &GenericMatrix, b: &GenericMatrix) -> Result<()> {
    if a.k != b.k {
        return Err(Error::SizeMismatch(a.k, b.k));
    }
    if a.mode != b.mode {
        return Err(Error::ModeMismatch(a.mode.to_string(), b.mode.to_string()));
    }
    Ok(())
}

pub fn mat_add(a: &GenericMatrix, b: &GenericMatrix) -> Result<GenericMatrix> {
    check_sizes(a, b)?;
    let entries = a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| x.add(y))
        .collect::<Result<Vec<_>>>()?;
    Ok(GenericMatrix {
        k: a.k,
        degree: combine_tags(a, b),
        entries,
        mode: a.mode,
    })
}

pub fn mat_sub(a: &GenericMatrix, b: &GenericMatrix) -> Result<GenericMatrix> {
    mat_add(a, &mat_neg(b))
}

pub fn mat_neg(a: &GenericMatrix) -> GenericMatrix {
    GenericMatrix {
        k: a.k,
        entries: a.entries.iter().map(|p| p.neg()).collect(),
        mode: a.mode,
        degree: a.degree,
    }
}

pub fn mat_scale(s: &Scalar, a: &GenericMatrix) -> Result<GenericMatrix> {
    let entries = a
        .entries
        .iter()
        .map(|p| p.scale(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(GenericMatrix {
        k: a.k,
        entries,
        mode: a.mode,
        degree: a.degree,
    })
}

/// Multiply every entry by a commuting polynomial (scalar from the matrix
/// algebra's point of view). Degrees add.
pub fn mat_scale_poly(p: &MultiPoly, a: &GenericMatrix) -> Result<GenericMatrix> {
    let entries = a
        .entries
        .iter()
        .map(|e| e.mul(p))
        .collect::<Result<Vec<_>>>()?;
    let degree = match (a.degree, p.homogeneous_degree()) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    };
    Ok(GenericMatrix {
        k: a.k,
        entries,
        mode: a.mode,
        degree,
    })
}

fn combine_tags(a: &GenericMatrix, b: &GenericMatrix) -> Option<u32> {
    match (a.degree, b.degree) {
        (Some(x), Some(y)) if x == y => Some(x),
        (Some(x), None) if b.is_zero() => Some(x),
        (None, Some(y)) if a.is_zero() => Some(y),
        _ => None,
    }
}

pub fn mat_mul(a: &GenericMatrix, b: &GenericMatrix) -> Result<GenericMatrix> {
    check_sizes(a, b)?;
    let k = a.k;
    let mut entries = Vec::with_capacity(k * k);
    for r in 0..k {
        for c in 0..k {
            let mut acc = MultiPoly::zero(a.mode);
            for j in 0..k {
                acc = acc.add(&a.entry(r, j).mul(b.entry(j, c))?)?;
            }
            entries.push(acc);
        }
    }
    let degree = match (a.degree, b.degree) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    };
    Ok(GenericMatrix {
        k,
        entries,
        mode: a.mode,
        degree,
    })
}

pub fn trace(a: &GenericMatrix) -> MultiPoly {
    let mut acc = MultiPoly::zero(a.mode);
    for i in 0..a.k {
        acc = acc
            .add(a.entry(i, i))
            .expect("trace entries share the matrix mode");
    }
    acc
}

pub fn commutator(a: &GenericMatrix, b: &GenericMatrix) -> Result<GenericMatrix> {
    mat_sub(&mat_mul(a, b)?, &mat_mul(b, a)?)
}

/// Left-normed bracket [[...[g_{i1}, g_{i2}], ...], g_{in}] over 1-based
/// generator indices.
pub fn left_normed(indices: &[usize], gens: &[GenericMatrix]) -> Result<GenericMatrix> {
    if indices.len() < 2 {
        return Err(Error::TooFewIndices(indices.len()));
    }
    let pick = |i: usize| -> Result<&GenericMatrix> {
        if i == 0 || i > gens.len() {
            Err(Error::IndexOutOfRange(i, gens.len()))
        } else {
            Ok(&gens[i - 1])
        }
    };
    let mut acc = pick(indices[0])?.clone();
    for &i in &indices[1..] {
        acc = commutator(&acc, pick(i)?)?;
    }
    Ok(acc)
}

const S3_PERMS: [([usize; 3], i64); 6] = [
    ([0, 1, 2], 1),
    ([0, 2, 1], -1),
    ([1, 0, 2], -1),
    ([1, 2, 0], 1),
    ([2, 0, 1], 1),
    ([2, 1, 0], -1),
];

/// Standard polynomial s3: the signed sum of all six products abc.
pub fn standard_s3(
    a: &GenericMatrix,
    b: &GenericMatrix,
    c: &GenericMatrix,
) -> Result<GenericMatrix> {
    check_sizes(a, b)?;
    check_sizes(b, c)?;
    let mats = [a, b, c];
    let mut acc: Option<GenericMatrix> = None;
    for (perm, sign) in S3_PERMS {
        let term = mat_mul(&mat_mul(mats[perm[0]], mats[perm[1]])?, mats[perm[2]])?;
        let term = mat_scale(&Scalar::from_integer(sign, a.mode), &term)?;
        acc = Some(match acc {
            None => term,
            Some(s) => mat_add(&s, &term)?,
        });
    }
    Ok(acc.expect("six permutation terms"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX: CoeffMode = CoeffMode::Exact;

    #[test]
    fn generic_matrix_shape() {
        let y1 = generic_matrix(2, 1, EX).unwrap();
        assert_eq!(y1.degree(), Some(1));
        let t = trace(&y1);
        assert_eq!(t.to_string(), "y[1](1,1) + y[1](2,2)");
        assert!(!t.is_zero());
        let y2 = generic_matrix(2, 2, EX).unwrap();
        // no shared variables: y1 + y2 has 8 distinct variables overall
        let s = mat_add(&y1, &y2).unwrap();
        let mut count = 0;
        for e in s.entries() {
            count += e.len();
        }
        assert_eq!(count, 8);
        assert!(matches!(generic_matrix(1, 1, EX), Err(Error::UnsupportedSize(1))));
    }

    #[test]
    fn traceless_constructions() {
        let z = generic_traceless(2, 3, EX).unwrap();
        assert!(trace(&z).is_zero());
        assert_eq!(z.degree(), Some(1));
        let zp = generic_traceless_projected(2, 3, EX).unwrap();
        assert!(trace(&zp).is_zero());
        // direct form uses exactly 3 fresh variables
        let vars: std::collections::BTreeSet<_> = z
            .entries()
            .iter()
            .flat_map(|p| p.terms().flat_map(|(m, _)| m.pairs().iter().map(|&(v, _)| v)).collect::<Vec<_>>())
            .collect();
        assert_eq!(vars.len(), 3);
    }

    #[test]
    fn traceless_square_is_scalar() {
        // Cayley-Hamilton for 2x2 traceless: z^2 = -det(z) I
        let z = generic_traceless(2, 1, EX).unwrap();
        let sq = mat_mul(&z, &z).unwrap();
        assert!(sq.entry(0, 1).is_zero());
        assert!(sq.entry(1, 0).is_zero());
        assert_eq!(sq.entry(0, 0), sq.entry(1, 1));
        assert_eq!(sq.entry(0, 0).to_string(), "z[1](1,1)^2 + z[1](1,2)*z[1](2,1)");
    }

    #[test]
    fn mul_identity_and_associativity() {
        let z1 = generic_traceless(2, 1, EX).unwrap();
        let z2 = generic_traceless(2, 2, EX).unwrap();
        let z3 = generic_traceless(2, 3, EX).unwrap();
        let id = GenericMatrix::identity(2, EX);
        assert_eq!(mat_mul(&z1, &id).unwrap(), z1);
        let ab_c = mat_mul(&mat_mul(&z1, &z2).unwrap(), &z3).unwrap();
        let a_bc = mat_mul(&z1, &mat_mul(&z2, &z3).unwrap()).unwrap();
        assert_eq!(ab_c, a_bc);
        assert_eq!(ab_c.degree(), Some(3));
    }

    #[test]
    fn additive_ops() {
        let a = generic_traceless(2, 1, EX).unwrap();
        let minus = mat_scale(&Scalar::from_integer(-1, EX), &a).unwrap();
        assert!(mat_add(&a, &minus).unwrap().is_zero());
        let zero = GenericMatrix::zero(2, EX);
        assert_eq!(mat_add(&zero, &a).unwrap(), a);
        let doubled = mat_scale(&Scalar::from_integer(2, EX), &a).unwrap();
        let halved = mat_scale(&Scalar::from_ratio(1, 2, EX).unwrap(), &doubled).unwrap();
        assert_eq!(halved, a);
    }

    #[test]
    fn commutator_properties() {
        let z1 = generic_traceless(2, 1, EX).unwrap();
        let z2 = generic_traceless(2, 2, EX).unwrap();
        let z3 = generic_traceless(2, 3, EX).unwrap();
        assert!(commutator(&z1, &z1).unwrap().is_zero());
        let anti = mat_add(
            &commutator(&z1, &z2).unwrap(),
            &commutator(&z2, &z1).unwrap(),
        )
        .unwrap();
        assert!(anti.is_zero());
        // Jacobi
        let j = mat_add(
            &mat_add(
                &commutator(&commutator(&z1, &z2).unwrap(), &z3).unwrap(),
                &commutator(&commutator(&z2, &z3).unwrap(), &z1).unwrap(),
            )
            .unwrap(),
            &commutator(&commutator(&z3, &z1).unwrap(), &z2).unwrap(),
        )
        .unwrap();
        assert!(j.is_zero());
    }

    #[test]
    fn left_normed_convention() {
        let gens: Vec<_> = (1..=3).map(|i| generic_traceless(2, i, EX).unwrap()).collect();
        let lhs = left_normed(&[1, 2, 3], &gens).unwrap();
        let rhs = commutator(&commutator(&gens[0], &gens[1]).unwrap(), &gens[2]).unwrap();
        assert_eq!(lhs, rhs);
        assert!(matches!(left_normed(&[1], &gens), Err(Error::TooFewIndices(1))));
    }

    #[test]
    fn s3_alternating() {
        let z1 = generic_traceless(2, 1, EX).unwrap();
        let z2 = generic_traceless(2, 2, EX).unwrap();
        let z3 = generic_traceless(2, 3, EX).unwrap();
        assert!(standard_s3(&z1, &z1, &z2).unwrap().is_zero());
        let a = standard_s3(&z1, &z2, &z3).unwrap();
        let b = standard_s3(&z2, &z1, &z3).unwrap();
        assert!(mat_add(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn trace_of_product_symmetry() {
        let y1 = generic_matrix(2, 1, EX).unwrap();
        let y2 = generic_matrix(2, 2, EX).unwrap();
        let ab = trace(&mat_mul(&y1, &y2).unwrap());
        let ba = trace(&mat_mul(&y2, &y1).unwrap());
        assert_eq!(ab, ba);
    }

    #[test]
    fn size_mismatch() {
        let a = generic_matrix(2, 1, EX).unwrap();
        let b = generic_matrix(3, 1, EX).unwrap();
        assert!(matches!(mat_mul(&a, &b), Err(Error::SizeMismatch(2, 3))));
    }
}
