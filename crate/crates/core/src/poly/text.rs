use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::field::{FieldSpec, Scalar};
use super::poly::Poly;
use crate::error::{Error, Result};

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset, message: message.into() }
}

/// Parses a non-negative scalar `n` or `n/d` starting at `pos`.
pub(crate) fn scan_scalar(src: &[u8], pos: &mut usize) -> Option<Scalar> {
    let start = *pos;
    while *pos < src.len() && src[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == start {
        return None;
    }
    let num: BigInt = std::str::from_utf8(&src[start..*pos]).ok()?.parse().ok()?;
    if *pos < src.len() && src[*pos] == b'/' {
        let dstart = *pos + 1;
        let mut end = dstart;
        while end < src.len() && src[end].is_ascii_digit() {
            end += 1;
        }
        if end > dstart {
            let den: BigInt = std::str::from_utf8(&src[dstart..end]).ok()?.parse().ok()?;
            if den.is_zero() {
                return None;
            }
            *pos = end;
            return Some(Scalar::new(num, den));
        }
    }
    Some(Scalar::from_integer(num))
}

/// Parses a scalar literal such as `3`, `-1/2`.
pub fn parse_scalar(field: FieldSpec, src: &str) -> Result<Scalar> {
    let bytes = src.trim().as_bytes();
    let mut pos = 0;
    let neg = bytes.first() == Some(&b'-');
    if neg {
        pos = 1;
    }
    let v = scan_scalar(bytes, &mut pos).ok_or_else(|| parse_err(pos, "expected scalar"))?;
    if pos != bytes.len() {
        return Err(parse_err(pos, "trailing input after scalar"));
    }
    let v = if neg { -v } else { v };
    field
        .try_reduce(&v)
        .ok_or_else(|| parse_err(0, "denominator vanishes in the field"))
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
    field: FieldSpec,
}

impl PolyParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn exponent(&mut self) -> Result<usize> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(start, "expected exponent"))
    }

    /// term := scalar ['*' 'X' ['^' n]] | 'X' ['^' n]
    fn term(&mut self) -> Result<(Scalar, usize)> {
        self.skip_ws();
        let at = self.pos;
        match self.peek() {
            Some(b'X') => {
                self.pos += 1;
                Ok((Scalar::one(), self.exponent()?))
            }
            Some(c) if c.is_ascii_digit() => {
                let c = scan_scalar(self.src, &mut self.pos)
                    .ok_or_else(|| parse_err(at, "malformed scalar"))?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    if self.peek() != Some(b'X') {
                        return Err(parse_err(self.pos, "expected X"));
                    }
                    self.pos += 1;
                    Ok((c, self.exponent()?))
                } else if self.peek() == Some(b'X') {
                    self.pos += 1;
                    Ok((c, self.exponent()?))
                } else {
                    Ok((c, 0))
                }
            }
            _ => Err(parse_err(at, "expected term")),
        }
    }

    fn poly(&mut self) -> Result<Poly> {
        let mut coeffs: Vec<Scalar> = Vec::new();
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') if !first => {
                    self.pos += 1;
                    false
                }
                _ if first => false,
                _ => break,
            };
            let at = self.pos;
            let (c, e) = self.term()?;
            let c = if neg { -c } else { c };
            let c = self
                .field
                .try_reduce(&c)
                .ok_or_else(|| parse_err(at, "denominator vanishes in the field"))?;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, Scalar::zero());
            }
            coeffs[e] += c;
            first = false;
        }
        Ok(Poly::new(self.field, coeffs))
    }
}

/// Parses a polynomial prefix of `src` starting at byte `start`; returns the
/// polynomial and the offset just past it.
pub(crate) fn parse_poly_prefix(field: FieldSpec, src: &str, start: usize) -> Result<(Poly, usize)> {
    let mut p = PolyParser { src: src.as_bytes(), pos: start, field };
    let poly = p.poly()?;
    Ok((poly, p.pos))
}

impl Poly {
    /// Parses the textual syntax, e.g. `X^2+X+1`, `1/2*X^3-2`, `0`.
    pub fn parse(field: FieldSpec, src: &str) -> Result<Poly> {
        let (poly, end) = parse_poly_prefix(field, src, 0)?;
        let rest = &src[end..];
        if !rest.trim().is_empty() {
            let off = end + (rest.len() - rest.trim_start().len());
            return Err(parse_err(off, "unexpected input"));
        }
        Ok(poly)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if neg {
                write!(out, "-")?;
            } else if !first {
                write!(out, "+")?;
            }
            first = false;
            match i {
                0 => write!(out, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(out, "{abs}*")?;
                    }
                    write!(out, "X")?;
                    if i > 1 {
                        write!(out, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let q = FieldSpec::Rationals;
        for s in ["X^2+X+1", "1/2*X^3-2", "0", "-X", "X-3", "-2/3*X^2+X"] {
            assert_eq!(Poly::parse(q, s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn prime_field_prints_residues() {
        let f3 = FieldSpec::Prime { p: 3 };
        assert_eq!(Poly::parse(f3, "X-1").unwrap().to_string(), "X+2");
        assert_eq!(Poly::parse(f3, "1/2*X").unwrap().to_string(), "2*X");
    }

    #[test]
    fn errors_carry_offsets() {
        let q = FieldSpec::Rationals;
        assert!(matches!(Poly::parse(q, "X^"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(Poly::parse(q, "X+)"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(Poly::parse(q, "X Y"), Err(Error::Parse { offset: 2, .. })));
    }

    #[test]
    fn scalars() {
        let q = FieldSpec::Rationals;
        assert_eq!(parse_scalar(q, "-1/2").unwrap(), Scalar::new((-1).into(), 2.into()));
        assert!(parse_scalar(FieldSpec::Prime { p: 2 }, "1/2").is_err());
    }
}
