//! Exact scalars: arbitrary-precision rationals by default, with an optional
//! prime-field mode used as a fast prescreen for rank computations.

use crate::error::{Error, Result};
use num::bigint::Sign;
use num::{BigInt, BigRational, One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Coefficient domain selector. `Mod(p)` requires a prime p > 3 so that the
/// denominators 2, 3, 4, 8 appearing in the identity catalog stay invertible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoeffMode {
    Exact,
    Mod(u64),
}

impl CoeffMode {
    pub fn validate(&self) -> Result<()> {
        match self {
            CoeffMode::Exact => Ok(()),
            CoeffMode::Mod(p) => {
                if *p <= 3 {
                    Err(Error::UnsupportedCharacteristic(format!(
                        "p = {p} is too small, need a prime > 3"
                    )))
                } else if !is_prime_u64(*p) {
                    Err(Error::UnsupportedCharacteristic(format!(
                        "{p} is not prime"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl fmt::Display for CoeffMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffMode::Exact => write!(f, "rational"),
            CoeffMode::Mod(p) => write!(f, "mod:{p}"),
        }
    }
}

/// A scalar in the active coefficient domain. Rational values are kept
/// normalized by `BigRational` itself (reduced, positive denominator).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rat(BigRational),
    Mod { p: u64, v: u64 },
}

impl Scalar {
    pub fn mode(&self) -> CoeffMode {
        match self {
            Scalar::Rat(_) => CoeffMode::Exact,
            Scalar::Mod { p, .. } => CoeffMode::Mod(*p),
        }
    }

    pub fn zero(mode: CoeffMode) -> Scalar {
        match mode {
            CoeffMode::Exact => Scalar::Rat(BigRational::zero()),
            CoeffMode::Mod(p) => Scalar::Mod { p, v: 0 },
        }
    }

    pub fn one(mode: CoeffMode) -> Scalar {
        match mode {
            CoeffMode::Exact => Scalar::Rat(BigRational::one()),
            CoeffMode::Mod(p) => Scalar::Mod { p, v: 1 % p },
        }
    }

    pub fn from_integer(n: i64, mode: CoeffMode) -> Scalar {
        match mode {
            CoeffMode::Exact => Scalar::Rat(BigRational::from(BigInt::from(n))),
            CoeffMode::Mod(p) => Scalar::Mod {
                p,
                v: n.rem_euclid(p as i64) as u64,
            },
        }
    }

    /// num/den in the active domain; in prime-field mode this is
    /// num * den^{-1} mod p.
    pub fn from_ratio(num: i64, den: i64, mode: CoeffMode) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Precondition("zero denominator".into()));
        }
        match mode {
            CoeffMode::Exact => Ok(Scalar::Rat(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
            CoeffMode::Mod(_) => {
                let n = Scalar::from_integer(num, mode);
                let d = Scalar::from_integer(den, mode);
                n.mul(&d.inverse()?)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { v, .. } => *v == 0,
        }
    }

    fn check_mode(&self, other: &Scalar) -> Result<()> {
        if self.mode() == other.mode() {
            Ok(())
        } else {
            Err(Error::ModeMismatch(
                self.mode().to_string(),
                other.mode().to_string(),
            ))
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.check_mode(other)?;
        Ok(match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { p, v: a }, Scalar::Mod { v: b, .. }) => Scalar::Mod {
                p: *p,
                v: addmod(*a, *b, *p),
            },
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check_mode(other)?;
        Ok(match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { p, v: a }, Scalar::Mod { v: b, .. }) => Scalar::Mod {
                p: *p,
                v: mulmod(*a, *b, *p),
            },
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { p, v } => Scalar::Mod {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            },
        }
    }

    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::Precondition("inverse of zero".into()));
        }
        Ok(match self {
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::Mod { p, v } => Scalar::Mod {
                p: *p,
                v: invmod(*v, *p),
            },
        })
    }

    /// Reduction of an exact rational into Z/p; fails if the denominator
    /// vanishes mod p.
    pub fn to_mod(&self, p: u64) -> Result<Scalar> {
        match self {
            Scalar::Mod { p: q, .. } if *q == p => Ok(self.clone()),
            Scalar::Mod { p: q, .. } => Err(Error::ModeMismatch(
                format!("mod:{q}"),
                format!("mod:{p}"),
            )),
            Scalar::Rat(r) => {
                let num = bigint_mod_u64(r.numer(), p);
                let den = bigint_mod_u64(r.denom(), p);
                if den == 0 {
                    return Err(Error::UnsupportedCharacteristic(format!(
                        "denominator of {r} vanishes mod {p}"
                    )));
                }
                Ok(Scalar::Mod {
                    p,
                    v: mulmod(num, invmod(den, p), p),
                })
            }
        }
    }

    /// The underlying rational, if in exact mode.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { v, .. } => write!(f, "{v}"),
        }
    }
}

pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse mod a prime, via Fermat.
pub fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

pub fn bigint_mod_u64(x: &BigInt, p: u64) -> u64 {
    let m = x.magnitude() % p;
    let m = m.to_u64_digits().first().copied().unwrap_or(0);
    if x.sign() == Sign::Minus && m != 0 {
        p - m
    } else {
        m
    }
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
