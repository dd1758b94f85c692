use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::field::{FieldSpec, Scalar};
use crate::error::{Error, Result};

/// Univariate polynomial over a [`FieldSpec`], coefficients lowest degree first.
///
/// The zero polynomial has no coefficients; otherwise the last coefficient is
/// nonzero and every coefficient is in canonical form for the field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

/// Binary operation selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl Poly {
    pub fn new(field: FieldSpec, coeffs: Vec<Scalar>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| field.reduce(c)).collect();
        let mut p = Poly { field, coeffs };
        p.trim();
        p
    }

    pub fn from_ints(field: FieldSpec, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: FieldSpec) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: FieldSpec) -> Self {
        Poly::constant(field, Scalar::one())
    }

    pub fn constant(field: FieldSpec, c: Scalar) -> Self {
        Poly::new(field, vec![c])
    }

    /// The indeterminate `X`.
    pub fn x(field: FieldSpec) -> Self {
        Poly::monomial(field, Scalar::one(), 1)
    }

    pub fn monomial(field: FieldSpec, c: Scalar, power: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); power + 1];
        coeffs[power] = c;
        Poly::new(field, coeffs)
    }

    /// `X - c`.
    pub fn linear(field: FieldSpec, root: Scalar) -> Self {
        Poly::new(field, vec![-root, Scalar::one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial (degree minus infinity).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; for sizes and bounds.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(&self.lead());
        self.scale(&inv)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, at: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = self.field.reduce(acc * at + c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Scalar::from_integer((i as i64).into()))
            .collect();
        Poly::new(self.field, coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn add_impl(&self, rhs: &Poly, negate: bool) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let b = rhs.coeff(i);
                if negate {
                    self.coeff(i) - b
                } else {
                    self.coeff(i) + b
                }
            })
            .collect();
        Poly::new(self.field, coeffs)
    }

    fn mul_impl(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut coeffs = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(self.field, coeffs)
    }

    /// Euclidean division: `self = q * den + r` with `deg r < deg den`.
    pub fn div_rem(&self, den: &Poly) -> Result<(Poly, Poly)> {
        self.field.check_same(&den.field)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = self.field;
        let dd = den.coeffs.len() - 1;
        let lead_inv = field.inv(&den.lead());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(field), self.clone()));
        }
        let mut quot = vec![Scalar::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = field.mul(&rem[k + dd], &lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, b) in den.coeffs.iter().enumerate() {
                rem[k + j] = field.sub(&rem[k + j], &field.mul(&c, b));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(field, quot), Poly::new(field, rem)))
    }

    pub fn rem(&self, den: &Poly) -> Poly {
        self.div_rem(den).expect("rem by zero or across fields").1
    }

    /// Exact quotient; panics when `den` does not divide `self`.
    pub fn exact_div(&self, den: &Poly) -> Poly {
        let (q, r) = self.div_rem(den).expect("exact_div by zero or across fields");
        assert!(r.is_zero(), "exact_div: {den} does not divide {self}");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).is_zero()
    }

    /// Monic gcd with Bézout cofactors: `g = u*self + v*other`.
    pub fn gcd_bezout(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        self.field.check_same(&other.field)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let field = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(field), Poly::zero(field));
        let (mut t0, mut t1) = (Poly::zero(field), Poly::one(field));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let inv = field.inv(&r0.lead());
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() && other.is_zero() {
            return Poly::zero(self.field);
        }
        self.gcd_bezout(other).expect("gcd across fields").0
    }

    /// Monic lcm; zero if either input is zero.
    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        (self * other).exact_div(&self.gcd(other)).monic()
    }

    /// Largest `e` with `f^e | self`; `None` stands for infinity (`self = 0`).
    /// `f` is assumed nonconstant; irreducibility is checked by [`poly_valuation`].
    pub fn valuation(&self, f: &Poly) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut e = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(f).expect("valuation across fields");
            if !r.is_zero() {
                return Some(e);
            }
            cur = q;
            e += 1;
        }
    }

    /// Inverse modulo `m`, if `gcd(self, m) = 1`.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, u, _) = self.rem(m).gcd_bezout(m).ok()?;
        if g.is_one() {
            Some(u.rem(m))
        } else {
            None
        }
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        (self * other).rem(m)
    }

    /// `self^e mod m` with a big exponent.
    pub fn pow_mod_big(&self, e: &num_bigint::BigUint, m: &Poly) -> Poly {
        let mut acc = Poly::one(self.field).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, m);
            if e.bit(i) {
                acc = acc.mul_mod(&base, m);
            }
        }
        acc
    }

    /// Substitute `X^p` coefficients back: returns `g` with `g(X)^p = self`
    /// in characteristic `p` (only coefficients at multiples of `p` may be nonzero).
    pub(crate) fn pth_root(&self) -> Poly {
        let p = self.field.characteristic() as usize;
        debug_assert!(p > 0);
        let coeffs = self.coeffs.iter().step_by(p).cloned().collect();
        Poly::new(self.field, coeffs)
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by field, then degree, then coefficients from the leading term down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .cmp(&other.field)
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: &'a Poly) -> Poly {
                assert_eq!(self.field, rhs.field, "polynomial field mismatch");
                $body(self, rhs)
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &Poly, b: &Poly| a.add_impl(b, false));
forward_binop!(Sub, sub, |a: &Poly, b: &Poly| a.add_impl(b, true));
forward_binop!(Mul, mul, |a: &Poly, b: &Poly| a.mul_impl(b));

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Checked ring operation on two polynomials over the same field.
pub fn poly_arith(lhs: &Poly, rhs: &Poly, op: ArithOp) -> Result<Poly> {
    lhs.field.check_same(&rhs.field)?;
    Ok(match op {
        ArithOp::Add => lhs + rhs,
        ArithOp::Sub => lhs - rhs,
        ArithOp::Mul => lhs * rhs,
    })
}

pub fn euclid_div(num: &Poly, den: &Poly) -> Result<(Poly, Poly)> {
    num.div_rem(den)
}

pub fn poly_gcd_bezout(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
    a.gcd_bezout(b)
}

/// `v_f(a)`, `None` meaning infinity. Rejects `f` that is not monic irreducible.
pub fn poly_valuation(a: &Poly, f: &Poly) -> Result<Option<u32>> {
    a.field.check_same(&f.field)?;
    if !f.is_monic() || !super::factor::is_irreducible(f)? {
        return Err(Error::NotIrreducible(f.to_string()));
    }
    Ok(a.valuation(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldSpec {
        FieldSpec::Prime { p: 2 }
    }

    fn p2(s: &str) -> Poly {
        Poly::parse(f2(), s).unwrap()
    }

    #[test]
    fn char_two_cancellation() {
        assert!((&p2("X+1") + &p2("X+1")).is_zero());
        assert_eq!(&p2("X") * &p2("X+1"), p2("X^2+X"));
    }

    #[test]
    fn rational_scalars() {
        let q = FieldSpec::Rationals;
        let a = Poly::parse(q, "1/2*X").unwrap();
        assert_eq!(&a * &Poly::from_ints(q, &[2]), Poly::x(q));
    }

    #[test]
    fn euclid_examples() {
        let (q, r) = euclid_div(&p2("X^3"), &p2("X^2+X+1")).unwrap();
        assert_eq!((q, r), (p2("X+1"), p2("1")));
        let (q, r) = euclid_div(&p2("X^2"), &p2("X^2")).unwrap();
        assert_eq!((q, r), (p2("1"), Poly::zero(f2())));
        let (q, r) = euclid_div(&p2("1"), &p2("X")).unwrap();
        assert_eq!((q, r), (Poly::zero(f2()), p2("1")));
        assert_eq!(euclid_div(&p2("X"), &Poly::zero(f2())), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        let (g, u, v) = poly_gcd_bezout(&p2("X"), &p2("X+1")).unwrap();
        assert_eq!((g, u, v), (p2("1"), p2("1"), p2("1")));
        assert_eq!(p2("X^2+X").gcd(&p2("X^2+1")), p2("X+1"));
        assert_eq!(Poly::zero(f2()).gcd(&p2("X^2")), p2("X^2"));
        assert_eq!(
            poly_gcd_bezout(&Poly::zero(f2()), &Poly::zero(f2())),
            Err(Error::GcdOfZeros)
        );
    }

    #[test]
    fn field_mismatch_is_reported() {
        let a = Poly::x(f2());
        let b = Poly::x(FieldSpec::Rationals);
        assert!(matches!(poly_arith(&a, &b, ArithOp::Add), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(poly_valuation(&p2("X^2+X"), &p2("X")).unwrap(), Some(1));
        assert_eq!(poly_valuation(&Poly::zero(f2()), &p2("X")).unwrap(), None);
        assert_eq!(poly_valuation(&p2("X^2"), &p2("X+1")).unwrap(), Some(0));
        assert!(matches!(
            poly_valuation(&p2("X"), &p2("X^2+1")),
            Err(Error::NotIrreducible(_))
        ));
    }

    #[test]
    fn lcm_and_inverse() {
        assert_eq!(p2("X^2+X").lcm(&p2("X^2+1")), p2("X^3+X"));
        let m = p2("X^2+X+1");
        let inv = p2("X").inv_mod(&m).unwrap();
        assert!(p2("X").mul_mod(&inv, &m).is_one());
        assert!(p2("X+1").inv_mod(&p2("X^2+1")).is_none());
    }
}
