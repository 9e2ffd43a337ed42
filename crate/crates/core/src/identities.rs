//! The fixed catalog of seven matrix identities that hold among generic
//! traceless 2x2 matrices. Each is verified exactly: lhs - rhs must be the
//! zero matrix of polynomials. The catalog is closed by design.

use crate::error::{Error, Result};
use crate::matrix::{
    commutator, left_normed, mat_add, mat_mul, mat_scale, mat_sub, standard_s3, trace,
    traceless_generators, Form, GenericMatrix,
};
use crate::scalar::{CoeffMode, Scalar};

pub const IDENTITY_COUNT: u8 = 7;

#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub id: u8,
    pub description: &'static str,
    pub lhs: GenericMatrix,
    pub rhs: GenericMatrix,
    pub status: IdentityStatus,
}

#[derive(Debug, Clone)]
pub enum IdentityStatus {
    Verified,
    /// The nonzero difference lhs - rhs; signals an implementation bug.
    Failed(GenericMatrix),
}

impl IdentityCheck {
    pub fn verified(&self) -> bool {
        matches!(self.status, IdentityStatus::Verified)
    }
}

pub fn describe(id: u8) -> &'static str {
    match id {
        1 => "[z1,z2]z3^2 as a combination of degree-4 brackets",
        2 => "[z1,z2](z3z4+z4z3) as a combination of degree-4 brackets",
        3 => "z4*s3(z1,z2,z3) as an alternating sum of left-normed brackets",
        4 => "tr(z1^2) I = 2 z1^2",
        5 => "tr(z1z2) I = z1z2 + z2z1",
        6 => "tr(z1z2z3) I = (1/3) s3(z1,z2,z3)",
        7 => "[z1,z2,z3] via right multiplications by symmetrized products",
        _ => "unknown",
    }
}

/// Verify one identity of the catalog over fully independent generic
/// traceless matrices in the requested coefficient mode and construction.
pub fn verify_identity(id: u8, mode: CoeffMode, form: Form) -> Result<IdentityCheck> {
    mode.validate()?;
    if !(1..=IDENTITY_COUNT).contains(&id) {
        return Err(Error::Precondition(format!(
            "identity id {id} outside 1..={IDENTITY_COUNT}"
        )));
    }
    let z = traceless_generators(4, form, mode)?;
    let (lhs, rhs) = build_sides(id, &z, mode)?;
    let diff = mat_sub(&lhs, &rhs)?;
    let status = if diff.is_zero() {
        IdentityStatus::Verified
    } else {
        IdentityStatus::Failed(diff)
    };
    Ok(IdentityCheck {
        id,
        description: describe(id),
        lhs,
        rhs,
        status,
    })
}

pub fn verify_all(mode: CoeffMode, form: Form) -> Result<Vec<IdentityCheck>> {
    (1..=IDENTITY_COUNT)
        .map(|id| verify_identity(id, mode, form))
        .collect()
}

fn build_sides(
    id: u8,
    z: &[GenericMatrix],
    mode: CoeffMode,
) -> Result<(GenericMatrix, GenericMatrix)> {
    let (z1, z2, z3, z4) = (&z[0], &z[1], &z[2], &z[3]);
    let quarter = Scalar::from_ratio(1, 4, mode)?;
    match id {
        1 => {
            // [z1,z2] z3^2 = (1/4)([z1,z2,z3,z3] - [[z1,z3],[z2,z3]])
            let lhs = mat_mul(&commutator(z1, z2)?, &mat_mul(z3, z3)?)?;
            let a = left_normed(&[1, 2, 3, 3], z)?;
            let b = commutator(&commutator(z1, z3)?, &commutator(z2, z3)?)?;
            let rhs = mat_scale(&quarter, &mat_sub(&a, &b)?)?;
            Ok((lhs, rhs))
        }
        2 => {
            // [z1,z2](z3z4+z4z3) =
            //   (1/4)([z1,z2,z3,z4]+[z1,z2,z4,z3]-[[z1,z3],[z2,z4]]-[[z1,z4],[z2,z3]])
            let sym = mat_add(&mat_mul(z3, z4)?, &mat_mul(z4, z3)?)?;
            let lhs = mat_mul(&commutator(z1, z2)?, &sym)?;
            let t1 = left_normed(&[1, 2, 3, 4], z)?;
            let t2 = left_normed(&[1, 2, 4, 3], z)?;
            let t3 = commutator(&commutator(z1, z3)?, &commutator(z2, z4)?)?;
            let t4 = commutator(&commutator(z1, z4)?, &commutator(z2, z3)?)?;
            let rhs = mat_scale(&quarter, &mat_sub(&mat_sub(&mat_add(&t1, &t2)?, &t3)?, &t4)?)?;
            Ok((lhs, rhs))
        }
        3 => {
            // z4 s3(z1,z2,z3) = (3/8) sum_{sigma} sign(sigma) [z4,zs1,zs2,zs3]
            let lhs = mat_mul(z4, &standard_s3(z1, z2, z3)?)?;
            let perms: [([usize; 3], i64); 6] = [
                ([1, 2, 3], 1),
                ([1, 3, 2], -1),
                ([2, 1, 3], -1),
                ([2, 3, 1], 1),
                ([3, 1, 2], 1),
                ([3, 2, 1], -1),
            ];
            let mut sum: Option<GenericMatrix> = None;
            for (p, sign) in perms {
                let term = left_normed(&[4, p[0], p[1], p[2]], z)?;
                let term = mat_scale(&Scalar::from_integer(sign, mode), &term)?;
                sum = Some(match sum {
                    None => term,
                    Some(s) => mat_add(&s, &term)?,
                });
            }
            let rhs = mat_scale(&Scalar::from_ratio(3, 8, mode)?, &sum.unwrap())?;
            Ok((lhs, rhs))
        }
        4 => {
            // tr(z1^2) I = 2 z1^2
            let sq = mat_mul(z1, z1)?;
            let lhs = GenericMatrix::scalar_matrix(2, &trace(&sq));
            let rhs = mat_scale(&Scalar::from_integer(2, mode), &sq)?;
            Ok((lhs, rhs))
        }
        5 => {
            // tr(z1z2) I = z1z2 + z2z1
            let lhs = GenericMatrix::scalar_matrix(2, &trace(&mat_mul(z1, z2)?));
            let rhs = mat_add(&mat_mul(z1, z2)?, &mat_mul(z2, z1)?)?;
            Ok((lhs, rhs))
        }
        6 => {
            // tr(z1z2z3) I = (1/3) s3(z1,z2,z3)
            let prod = mat_mul(&mat_mul(z1, z2)?, z3)?;
            let lhs = GenericMatrix::scalar_matrix(2, &trace(&prod));
            let rhs = mat_scale(&Scalar::from_ratio(1, 3, mode)?, &standard_s3(z1, z2, z3)?)?;
            Ok((lhs, rhs))
        }
        7 => {
            // [z1,z2,z3] = 2(z1(z2z3+z3z2) - z2(z1z3+z3z1))
            let lhs = left_normed(&[1, 2, 3], z)?;
            let s23 = mat_add(&mat_mul(z2, z3)?, &mat_mul(z3, z2)?)?;
            let s13 = mat_add(&mat_mul(z1, z3)?, &mat_mul(z3, z1)?)?;
            let inner = mat_sub(&mat_mul(z1, &s23)?, &mat_mul(z2, &s13)?)?;
            let rhs = mat_scale(&Scalar::from_integer(2, mode), &inner)?;
            Ok((lhs, rhs))
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::mat_add;

    #[test]
    fn all_seven_verify_exact_direct() {
        let checks = verify_all(CoeffMode::Exact, Form::Direct).unwrap();
        assert_eq!(checks.len(), 7);
        for c in &checks {
            assert!(c.verified(), "identity {} failed", c.id);
        }
    }

    #[test]
    fn all_seven_verify_exact_projected() {
        for c in verify_all(CoeffMode::Exact, Form::Projected).unwrap() {
            assert!(c.verified(), "identity {} failed in projected form", c.id);
        }
    }

    #[test]
    fn all_seven_verify_mod_p() {
        for c in verify_all(CoeffMode::Mod(7), Form::Direct).unwrap() {
            assert!(c.verified(), "identity {} failed mod 7", c.id);
        }
        for c in verify_all(CoeffMode::Mod((1 << 31) - 1), Form::Direct).unwrap() {
            assert!(c.verified(), "identity {} failed mod 2^31-1", c.id);
        }
    }

    #[test]
    fn small_characteristic_rejected() {
        assert!(matches!(
            verify_all(CoeffMode::Mod(2), Form::Direct),
            Err(Error::UnsupportedCharacteristic(_))
        ));
        assert!(matches!(
            verify_all(CoeffMode::Mod(3), Form::Direct),
            Err(Error::UnsupportedCharacteristic(_))
        ));
    }

    #[test]
    fn flipped_sign_negative_control() {
        // identity 3 with the rhs sign flipped must fail with a nonzero diff
        let mode = CoeffMode::Exact;
        let ok = verify_identity(3, mode, Form::Direct).unwrap();
        let flipped_rhs = mat_scale(&Scalar::from_integer(-1, mode), &ok.rhs).unwrap();
        let diff = mat_sub(&ok.lhs, &flipped_rhs).unwrap();
        assert!(!diff.is_zero());
        // and the difference is exactly 2*lhs
        let twice = mat_add(&ok.lhs, &ok.lhs).unwrap();
        assert_eq!(diff, twice);
    }

    #[test]
    fn out_of_range_id() {
        assert!(verify_identity(0, CoeffMode::Exact, Form::Direct).is_err());
        assert!(verify_identity(8, CoeffMode::Exact, Form::Direct).is_err());
    }
}
