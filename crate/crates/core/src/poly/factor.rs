use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{FieldSpec, Scalar};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Default degree bound for factorization over `Q`.
pub const DEFAULT_Q_DEGREE_BOUND: usize = 4;

/// `unit * Π f^e` with monic irreducible keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Scalar,
    pub factors: BTreeMap<Poly, u32>,
}

impl Factorization {
    pub fn product(&self, field: FieldSpec) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(field, self.unit.clone()), |acc, (f, &e)| &acc * &f.pow(e))
    }

    pub fn irreducibles(&self) -> impl Iterator<Item = &Poly> {
        self.factors.keys()
    }
}

pub fn poly_factor(a: &Poly) -> Result<Factorization> {
    poly_factor_bounded(a, DEFAULT_Q_DEGREE_BOUND)
}

/// Complete factorization; over `Q` inputs of degree above `q_bound` are rejected.
pub fn poly_factor_bounded(a: &Poly, q_bound: usize) -> Result<Factorization> {
    if a.is_zero() {
        return Err(Error::UnsupportedFactorization("zero polynomial".into()));
    }
    let field = a.field();
    let unit = a.lead();
    let monic = a.monic();
    let mut factors = BTreeMap::new();
    let parts = match field {
        FieldSpec::Prime { .. } => factor_fp(&monic),
        FieldSpec::Rationals => {
            if monic.deg0() > q_bound {
                return Err(Error::UnsupportedFactorization(format!(
                    "degree {} over Q exceeds bound {q_bound}",
                    monic.deg0()
                )));
            }
            factor_q(&monic)?
        }
    };
    for (f, e) in parts {
        *factors.entry(f).or_insert(0) += e;
    }
    Ok(Factorization { unit, factors })
}

/// Monic irreducible factors without multiplicity.
pub fn irreducible_factors(a: &Poly) -> Result<Vec<Poly>> {
    Ok(poly_factor(a)?.factors.into_keys().collect())
}

pub fn is_irreducible(f: &Poly) -> Result<bool> {
    if f.deg0() == 0 {
        return Ok(false);
    }
    if f.deg0() == 1 {
        return Ok(true);
    }
    let fac = poly_factor(f)?;
    Ok(fac.factors.len() == 1 && fac.factors.values().all(|&e| e == 1))
}

fn factor_fp(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.deg0() == 0 {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (sq, mult) in squarefree(f) {
        for (g, d) in distinct_degree(&sq) {
            for h in equal_degree(&g, d, &mut rng) {
                out.push((h, mult));
            }
        }
    }
    out
}

/// Squarefree decomposition of a monic polynomial over `F_p`.
fn squarefree(f: &Poly) -> Vec<(Poly, u32)> {
    let field = f.field();
    let p = field.characteristic() as u32;
    let mut out = Vec::new();
    if f.deg0() == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        for (g, e) in squarefree(&f.pth_root()) {
            out.push((g, e * p));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.exact_div(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y);
        if !fac.is_one() {
            out.push((fac.monic(), i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w);
    }
    if !c.is_one() {
        for (g, e) in squarefree(&c.monic().pth_root()) {
            out.push((g, e * p));
        }
    }
    out
}

fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let p = BigUint::from(field.characteristic());
    let x = Poly::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut i = 1;
    while rest.deg0() >= 2 * i {
        h = h.pow_mod_big(&p, &rest);
        let g = rest.gcd(&(&h - &x));
        if !g.is_one() {
            rest = rest.exact_div(&g);
            h = h.rem(&rest);
            out.push((g, i));
        }
        i += 1;
    }
    if rest.deg0() > 0 {
        let d = rest.deg0();
        out.push((rest.monic(), d));
    }
    out
}

fn random_poly(field: FieldSpec, deg_lt: usize, rng: &mut ChaCha8Rng) -> Poly {
    let p = field.characteristic();
    let coeffs = (0..deg_lt).map(|_| field.from_i64(rng.gen_range(0..p) as i64)).collect();
    Poly::new(field, coeffs)
}

/// Cantor–Zassenhaus splitting of a product of distinct degree-`d` irreducibles.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.deg0();
    if n == d {
        return vec![f.monic()];
    }
    let field = f.field();
    let p = field.characteristic();
    loop {
        let a = random_poly(field, n, rng);
        if a.deg0() == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul_mod(&t, f);
                acc = &acc + &t;
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            &a.pow_mod_big(&e, f) - &Poly::one(field)
        };
        let g = f.gcd(&b);
        if g.deg0() > 0 && g.deg0() < n {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.exact_div(&g), d, rng));
            return out;
        }
    }
}

/// Primitive integer coefficients of a rational polynomial (positive lead).
fn primitive_integer(f: &Poly) -> Vec<BigInt> {
    let lcm = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f.coeffs().iter().map(|c| (c * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().is_some_and(|c| c.is_negative()) { -1 } else { 1 };
    ints.into_iter().map(|c| c / &g * sign).collect()
}

const DIVISOR_LIMIT: u64 = 1 << 40;

fn positive_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs();
    let small: u64 = u64::try_from(&n)
        .ok()
        .filter(|&v| v <= DIVISOR_LIMIT)
        .ok_or_else(|| Error::UnsupportedFactorization("coefficient too large".into()))?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= small {
        if small % d == 0 {
            out.push(BigInt::from(d));
            if d * d != small {
                out.push(BigInt::from(small / d));
            }
        }
        d += 1;
    }
    Ok(out)
}

fn eval_int(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn rational_root(f: &Poly) -> Result<Option<Scalar>> {
    let ints = primitive_integer(f);
    if ints[0].is_zero() {
        return Ok(Some(Scalar::zero()));
    }
    let nums = positive_divisors(&ints[0])?;
    let dens = positive_divisors(ints.last().unwrap())?;
    for n in &nums {
        for d in &dens {
            for s in [1, -1] {
                let r = Scalar::new(n * s, d.clone());
                if f.eval(&r).is_zero() {
                    return Ok(Some(r));
                }
            }
        }
    }
    Ok(None)
}

/// Lagrange interpolation through `(xs[i], ys[i])` over `Q`.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> Poly {
    let q = FieldSpec::Rationals;
    let mut acc = Poly::zero(q);
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = Poly::constant(q, Scalar::from_integer(yi.clone()));
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                let lin = Poly::linear(q, Scalar::from_integer(xj.clone()));
                basis = (&basis * &lin).scale(&Scalar::new(BigInt::one(), xi - xj));
            }
        }
        acc = &acc + &basis;
    }
    acc
}

/// Kronecker search for a factor of degree `k` of a polynomial without rational roots.
fn kronecker_factor(f: &Poly, k: usize) -> Result<Option<Poly>> {
    let ints = primitive_integer(f);
    let points: Vec<BigInt> = (0..=k as i64)
        .map(|i| BigInt::from(if i % 2 == 0 { -(i / 2) } else { i / 2 + 1 }))
        .collect();
    let mut choices = Vec::new();
    for x in &points {
        let v = eval_int(&ints, x);
        let mut ds = Vec::new();
        for d in positive_divisors(&v)? {
            ds.push(-d.clone());
            ds.push(d);
        }
        choices.push(ds);
    }
    let mut idx = vec![0usize; choices.len()];
    loop {
        let ys: Vec<BigInt> = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
        let g = interpolate(&points, &ys);
        if g.degree() == Some(k) && g.coeffs().iter().all(|c| c.is_integer()) && g.divides(f) {
            return Ok(Some(g.monic()));
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn factor_q(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let mut out = Vec::new();
    let mut stack = vec![f.clone()];
    while let Some(g) = stack.pop() {
        let n = g.deg0();
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push((g.monic(), 1));
            continue;
        }
        if let Some(r) = rational_root(&g)? {
            let lin = Poly::linear(g.field(), r);
            stack.push(g.exact_div(&lin));
            out.push((lin, 1));
            continue;
        }
        let mut split = None;
        for k in 2..=n / 2 {
            if let Some(h) = kronecker_factor(&g, k)? {
                split = Some(h);
                break;
            }
        }
        match split {
            Some(h) => {
                stack.push(g.exact_div(&h));
                stack.push(h);
            }
            None => out.push((g.monic(), 1)),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldSpec {
        FieldSpec::Prime { p: 2 }
    }

    fn keys(fac: &Factorization) -> Vec<(String, u32)> {
        fac.factors.iter().map(|(f, e)| (f.to_string(), *e)).collect()
    }

    #[test]
    fn factor_examples() {
        let a = Poly::parse(f2(), "X^4+X").unwrap();
        let fac = poly_factor(&a).unwrap();
        assert_eq!(keys(&fac), vec![("X".into(), 1), ("X+1".into(), 1), ("X^2+X+1".into(), 1)]);
        let q = FieldSpec::Rationals;
        let fac = poly_factor(&Poly::parse(q, "X-3").unwrap()).unwrap();
        assert_eq!(keys(&fac), vec![("X-3".into(), 1)]);
        let fac = poly_factor(&Poly::parse(f2(), "X^2").unwrap()).unwrap();
        assert_eq!(keys(&fac), vec![("X".into(), 2)]);
    }

    #[test]
    fn inseparable_parts() {
        let a = Poly::parse(f2(), "X^4+1").unwrap();
        let fac = poly_factor(&a).unwrap();
        assert_eq!(keys(&fac), vec![("X+1".into(), 4)]);
        let f3 = FieldSpec::Prime { p: 3 };
        let a = Poly::parse(f3, "X^6+2*X^3").unwrap();
        let fac = poly_factor(&a).unwrap();
        assert_eq!(fac.product(f3), a);
    }

    #[test]
    fn rational_quartics() {
        let q = FieldSpec::Rationals;
        let a = Poly::parse(q, "X^4+4").unwrap();
        let fac = poly_factor(&a).unwrap();
        assert_eq!(fac.factors.len(), 2);
        assert_eq!(fac.product(q), a);
        let a = Poly::parse(q, "2*X^4-2").unwrap();
        let fac = poly_factor(&a).unwrap();
        assert_eq!(fac.factors.len(), 3);
        assert_eq!(fac.product(q), a);
        assert!(is_irreducible(&Poly::parse(q, "X^4+X+1").unwrap()).unwrap());
        assert!(matches!(
            poly_factor(&Poly::parse(q, "X^5+1").unwrap()),
            Err(Error::UnsupportedFactorization(_))
        ));
        let fac = poly_factor_bounded(&Poly::parse(q, "X^6-1").unwrap(), 6).unwrap();
        assert_eq!(fac.factors.len(), 4);
    }
}
