use std::sync::Arc;

use super::ring::{RcElem, RcRing};
use crate::error::{Error, Result};
use crate::poly::text::parse_poly_prefix;
use crate::poly::Poly;

fn set_text(fs: &[&Poly]) -> String {
    fs.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(",")
}

/// Normal-form text: `poly(N)*inv(D)*projim{F} + poly(l)*projker{f} + ...`.
pub fn print_elem(a: &RcElem) -> String {
    let (num, den) = a.global();
    if a.ring().is_algebraic() {
        return format!("poly({num})");
    }
    let mut terms = Vec::new();
    let keys: Vec<&Poly> = a.corrections().keys().collect();
    if !num.is_zero() {
        let mut t = format!("poly({num})");
        if !den.is_one() {
            t.push_str(&format!("*inv({den})"));
        }
        if !keys.is_empty() {
            t.push_str(&format!("*projim{{{}}}", set_text(&keys)));
        }
        terms.push(t);
    }
    for (f, v) in a.corrections() {
        if !v.is_zero() {
            terms.push(format!("poly({v})*projker{{{f}}}"));
        }
    }
    if terms.is_empty() {
        "poly(0)".into()
    } else {
        terms.join(" + ")
    }
}

/// Whether the printed form is a single product (no top-level `+`).
pub fn is_product_form(a: &RcElem) -> bool {
    !print_elem(a).contains(" + ")
}

pub(crate) struct ElemParser<'a> {
    pub src: &'a str,
    pub pos: usize,
    pub ring: &'a Arc<RcRing>,
}

fn err(offset: usize, message: &str) -> Error {
    Error::Parse { offset, message: message.into() }
}

impl ElemParser<'_> {
    fn bytes(&self) -> &[u8] {
        self.src.as_bytes()
    }

    pub fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes().get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(err(self.pos, &format!("expected '{}'", c as char)))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn poly_arg(&mut self, close: u8) -> Result<Poly> {
        self.skip_ws();
        let (p, end) = parse_poly_prefix(self.ring.field(), self.src, self.pos)?;
        self.pos = end;
        self.expect(close)?;
        Ok(p)
    }

    fn poly_set(&mut self) -> Result<Vec<Poly>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let (p, end) = parse_poly_prefix(self.ring.field(), self.src, self.pos)?;
            self.pos = end;
            out.push(p);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(err(self.pos, "expected ',' or '}'")),
            }
        }
    }

    fn at_err(&self, at: usize, e: Error) -> Error {
        match e {
            Error::Parse { .. } => e,
            Error::Generator(m) => Error::Generator(format!("at offset {at}: {m}")),
            other => Error::Parse { offset: at, message: other.to_string() },
        }
    }

    pub fn atom(&mut self) -> Result<RcElem> {
        let at = self.pos;
        if self.keyword("poly(") {
            let p = self.poly_arg(b')')?;
            return Ok(RcElem::rho(self.ring, &p));
        }
        if self.keyword("inv(") {
            let p = self.poly_arg(b')')?;
            return RcElem::inv(self.ring, &p).map_err(|e| self.at_err(at, e));
        }
        if self.keyword("projim{") {
            let fs = self.poly_set()?;
            return RcElem::proj_im(self.ring, &fs).map_err(|e| self.at_err(at, e));
        }
        if self.keyword("projker{") {
            let fs = self.poly_set()?;
            return RcElem::proj_ker(self.ring, &fs).map_err(|e| self.at_err(at, e));
        }
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let e = self.elem()?;
            self.expect(b')')?;
            return Ok(e);
        }
        Err(err(self.pos, "expected poly(..), inv(..), projim{..}, projker{..} or '('"))
    }

    pub fn product(&mut self) -> Result<RcElem> {
        let mut acc = self.atom()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.atom()?;
        }
        Ok(acc)
    }

    pub fn elem(&mut self) -> Result<RcElem> {
        let mut acc = self.product()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            acc = &acc + &self.product()?;
        }
        Ok(acc)
    }
}

impl RcElem {
    /// Parses element syntax such as `poly(X)*inv(X+1) + projker{X}`.
    pub fn parse(ring: &Arc<RcRing>, src: &str) -> Result<RcElem> {
        let mut p = ElemParser { src, pos: 0, ring };
        let e = p.elem()?;
        p.skip_ws();
        if p.pos != src.len() {
            return Err(err(p.pos, "unexpected input"));
        }
        Ok(e)
    }
}
