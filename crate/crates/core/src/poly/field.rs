use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Field elements are stored as rationals; over `F_p` they are kept reduced
/// to an integer in `[0, p)`.
pub type Scalar = BigRational;

/// The scalar field `K`: either the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldSpec {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "Fp")]
    Prime { p: u64 },
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::Prime { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime { p } => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::Prime { .. })
    }

    pub fn check_same(&self, other: &FieldSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.to_string(), other.to_string()))
        }
    }

    /// Canonical representative; `None` when the denominator vanishes mod p.
    pub fn try_reduce(&self, q: &Scalar) -> Option<Scalar> {
        match self {
            FieldSpec::Rationals => Some(q.clone()),
            FieldSpec::Prime { p } => {
                let p = BigInt::from(*p);
                let num = q.numer().mod_floor(&p);
                let den = q.denom().mod_floor(&p);
                if den.is_zero() {
                    return None;
                }
                let den_inv = den.modpow(&(&p - 2u32), &p);
                Some(BigRational::from_integer((num * den_inv).mod_floor(&p)))
            }
        }
    }

    pub fn reduce(&self, q: Scalar) -> Scalar {
        match self {
            FieldSpec::Rationals => q,
            FieldSpec::Prime { .. } => self
                .try_reduce(&q)
                .expect("scalar denominator divisible by the characteristic"),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.reduce(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.reduce(-a)
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!a.is_zero(), "inverse of zero scalar");
        self.reduce(a.recip())
    }

    /// All elements of a prime field, in increasing order.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime { p } => Some((0..*p).map(|v| self.from_i64(v as i64)).collect()),
        }
    }

    /// Residue of a canonical `F_p` scalar as a machine integer.
    pub fn to_u64(&self, a: &Scalar) -> u64 {
        debug_assert!(a.is_integer() && !a.is_negative());
        a.to_integer().to_u64().expect("F_p scalar out of range")
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime { p } => write!(f, "F_{p}"),
        }
    }
}
