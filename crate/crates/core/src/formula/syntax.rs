use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::ast::{Atom, Coeff, Formula, Placeholder, Rel, Term};
use crate::error::{Error, Result};
use crate::poly::text::scan_scalar;
use crate::poly::{FieldSpec, Poly, Scalar};
use crate::rc::text::{is_product_form, print_elem, ElemParser};
use crate::rc::{RcElem, RcRing};

/// Byte cursor shared by the term and formula parsers.
pub struct Cursor<'a> {
    pub src: &'a str,
    pub pos: usize,
}

pub(crate) fn perr(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset, message: message.into() }
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn bytes(&self) -> &'a [u8] {
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

    pub fn peek2(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes().get(self.pos + 1).copied()
    }

    pub fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(perr(self.pos, format!("expected '{}'", c as char)))
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    /// Identifier `[a-z][a-z0-9]*` without consuming it.
    pub fn peek_ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let b = self.bytes();
        if self.pos >= b.len() || !b[self.pos].is_ascii_lowercase() {
            return None;
        }
        let mut end = self.pos + 1;
        while end < b.len() && (b[end].is_ascii_lowercase() || b[end].is_ascii_digit()) {
            end += 1;
        }
        Some(&self.src[self.pos..end])
    }

    /// A variable: an identifier that is not a keyword and not followed by `(`/`{`.
    pub fn variable(&mut self) -> Result<String> {
        let at = self.pos;
        let id = self.peek_ident().ok_or_else(|| perr(self.pos, "expected variable"))?;
        let after = self.pos + id.len();
        let next = self.src[after..].trim_start().bytes().next();
        if matches!(id, "true" | "false") || matches!(next, Some(b'(') | Some(b'{')) {
            return Err(perr(at.max(self.pos), format!("'{id}' is not a variable")));
        }
        self.pos = after;
        Ok(id.to_string())
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.bytes()[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| perr(start, "expected exponent"))
    }

    /// Optional `^n` suffix (default 1).
    pub fn power(&mut self) -> Result<u32> {
        if self.eat(b'^') {
            self.number()
        } else {
            Ok(1)
        }
    }

    pub fn scalar(&mut self, field: FieldSpec) -> Result<Scalar> {
        self.skip_ws();
        let at = self.pos;
        let v = scan_scalar(self.bytes(), &mut self.pos).ok_or_else(|| perr(at, "expected scalar"))?;
        field.try_reduce(&v).ok_or_else(|| perr(at, "denominator vanishes in the field"))
    }
}

/// A term language: how summands are parsed and terms printed.
pub trait Lang {
    type Key: Ord + Clone;
    type C: Coeff;
    fn field(&self) -> FieldSpec;
    fn scalar_coeff(&self, c: Scalar) -> Self::C;
    /// One summand without a leading sign.
    fn item(&self, cur: &mut Cursor) -> Result<Term<Self::Key, Self::C>>;
    fn print_term(&self, t: &Term<Self::Key, Self::C>) -> String;
}

/// Parses `item (('+'|'-') item)*` with an optional leading `-`.
pub fn parse_sum<L: Lang>(lang: &L, cur: &mut Cursor) -> Result<Term<L::Key, L::C>> {
    let mut neg = cur.eat(b'-');
    let mut acc = Term::zero();
    loop {
        let t = lang.item(cur)?;
        acc = if neg { acc.sub(&t) } else { acc.add(&t) };
        match cur.peek() {
            Some(b'+') => {
                cur.pos += 1;
                neg = false;
            }
            Some(b'-') => {
                cur.pos += 1;
                neg = true;
            }
            _ => return Ok(acc),
        }
    }
}

/// Shared shape of an item: `scalar ['*' mono] | mono`; a bare scalar must be 0.
fn scaled_item<L: Lang>(
    lang: &L,
    cur: &mut Cursor,
    mono: impl Fn(&mut Cursor) -> Result<Term<L::Key, L::C>>,
) -> Result<Term<L::Key, L::C>> {
    if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
        let at = cur.pos;
        let c = cur.scalar(lang.field())?;
        if cur.eat(b'*') {
            let t = mono(cur)?;
            return Ok(t.scale(&lang.scalar_coeff(c)));
        }
        if !c.is_zero() {
            return Err(perr(at, "the only constant term is 0"));
        }
        return Ok(Term::zero());
    }
    mono(cur)
}

fn x_pow(field: FieldSpec, n: u32) -> Poly {
    Poly::monomial(field, Scalar::one(), n as usize)
}

/// The language of `θ`: terms `Σ c·T^i(x)`, coefficients collected per variable.
#[derive(Clone, Copy, Debug)]
pub struct EndoLang {
    pub field: FieldSpec,
}

impl Lang for EndoLang {
    type Key = String;
    type C = Poly;

    fn field(&self) -> FieldSpec {
        self.field
    }

    fn scalar_coeff(&self, c: Scalar) -> Poly {
        Poly::constant(self.field, c)
    }

    fn item(&self, cur: &mut Cursor) -> Result<Term<String, Poly>> {
        scaled_item(self, cur, |cur| {
            if cur.peek() == Some(b'T') {
                cur.pos += 1;
                let n = cur.power()?;
                cur.expect(b'(')?;
                let inner = parse_sum(self, cur)?;
                cur.expect(b')')?;
                return Ok(inner.scale(&x_pow(self.field, n)));
            }
            if cur.peek() == Some(b'(') {
                cur.pos += 1;
                let inner = parse_sum(self, cur)?;
                cur.expect(b')')?;
                return Ok(inner);
            }
            Ok(Term::single(cur.variable()?, Poly::one(self.field)))
        })
    }

    fn print_term(&self, t: &Term<String, Poly>) -> String {
        let mut parts = Vec::new();
        for (v, c) in t.iter() {
            for (i, a) in c.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let mono = match i {
                    0 => v.clone(),
                    1 => format!("T({v})"),
                    _ => format!("T^{i}({v})"),
                };
                parts.push((a.clone(), mono));
            }
        }
        join_scaled(parts)
    }
}

fn join_scaled(parts: Vec<(Scalar, String)>) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (c, mono)) in parts.into_iter().enumerate() {
        let neg = c.is_negative();
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let abs = c.abs();
        if !abs.is_one() {
            out.push_str(&format!("{abs}*"));
        }
        out.push_str(&mono);
    }
    out
}

/// The language of `R_C`-modules: terms `Σ r(x)` with `r ∈ R_C`.
#[derive(Clone, Debug)]
pub struct ModLang {
    pub ring: Arc<RcRing>,
}

impl ModLang {
    fn applied(&self, cur: &mut Cursor) -> Result<Term<String, RcElem>> {
        let mut ep = ElemParser { src: cur.src, pos: cur.pos, ring: &self.ring };
        let r = ep.product()?;
        cur.pos = ep.pos;
        cur.expect(b'(')?;
        let inner = parse_sum(self, cur)?;
        cur.expect(b')')?;
        Ok(inner.scale(&r))
    }
}

const ELEM_KEYWORDS: [&str; 4] = ["poly(", "inv(", "projim{", "projker{"];

impl Lang for ModLang {
    type Key = String;
    type C = RcElem;

    fn field(&self) -> FieldSpec {
        self.ring.field()
    }

    fn scalar_coeff(&self, c: Scalar) -> RcElem {
        RcElem::scalar(&self.ring, c)
    }

    fn item(&self, cur: &mut Cursor) -> Result<Term<String, RcElem>> {
        scaled_item(self, cur, |cur| {
            cur.skip_ws();
            let rest = &cur.src[cur.pos..];
            if ELEM_KEYWORDS.iter().any(|k| rest.starts_with(k)) {
                return self.applied(cur);
            }
            if cur.peek() == Some(b'T') {
                cur.pos += 1;
                let n = cur.power()?;
                cur.expect(b'(')?;
                let inner = parse_sum(self, cur)?;
                cur.expect(b')')?;
                let r = RcElem::rho(&self.ring, &x_pow(self.ring.field(), n));
                return Ok(inner.scale(&r));
            }
            if cur.peek() == Some(b'(') {
                let start = cur.pos;
                match self.applied(cur) {
                    Ok(t) => return Ok(t),
                    Err(e1) => {
                        cur.pos = start + 1;
                        let grouped = parse_sum(self, cur).and_then(|t| cur.expect(b')').map(|_| t));
                        return grouped.map_err(|e2| furthest(e1, e2));
                    }
                }
            }
            Ok(Term::single(cur.variable()?, RcElem::one(&self.ring)))
        })
    }

    fn print_term(&self, t: &Term<String, RcElem>) -> String {
        if t.is_zero() {
            return "0".into();
        }
        t.iter()
            .map(|(v, r)| {
                if r.is_one() {
                    v.clone()
                } else if is_product_form(r) {
                    format!("{}({v})", print_elem(r))
                } else {
                    format!("({})({v})", print_elem(r))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Placeholder language: `Σ c·x^i` with scalar coefficients.
#[derive(Clone, Copy, Debug)]
pub struct PhLang {
    pub field: FieldSpec,
}

impl Lang for PhLang {
    type Key = Placeholder;
    type C = Poly;

    fn field(&self) -> FieldSpec {
        self.field
    }

    fn scalar_coeff(&self, c: Scalar) -> Poly {
        Poly::constant(self.field, c)
    }

    fn item(&self, cur: &mut Cursor) -> Result<Term<Placeholder, Poly>> {
        scaled_item(self, cur, |cur| {
            let var = cur.variable()?;
            let power = if cur.peek() == Some(b'^') { cur.power()? } else { 0 };
            Ok(Term::single(Placeholder { var, power }, Poly::one(self.field)))
        })
    }

    fn print_term(&self, t: &Term<Placeholder, Poly>) -> String {
        let parts = t
            .iter()
            .map(|(ph, c)| {
                let mono = match ph.power {
                    0 => ph.var.clone(),
                    i => format!("{}^{i}", ph.var),
                };
                (c.coeff(0), mono)
            })
            .collect();
        join_scaled(parts)
    }
}

fn furthest(a: Error, b: Error) -> Error {
    match (&a, &b) {
        (Error::Parse { offset: x, .. }, Error::Parse { offset: y, .. }) if y > x => b,
        _ => a,
    }
}

struct FormulaParser<'l, 'a, L> {
    lang: &'l L,
    cur: Cursor<'a>,
}

impl<L: Lang> FormulaParser<'_, '_, L> {
    fn formula(&mut self) -> Result<Formula<Atom<L::Key, L::C>>> {
        if let Some(q) = self.quantifier()? {
            return Ok(q);
        }
        let first = self.conj()?;
        let mut parts = vec![first];
        while self.cur.eat(b'|') {
            parts.push(self.conj()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one") } else { Formula::Or(parts) })
    }

    fn quantifier(&mut self) -> Result<Option<Formula<Atom<L::Key, L::C>>>> {
        let c = self.cur.peek();
        if !matches!(c, Some(b'E') | Some(b'A')) {
            return Ok(None);
        }
        self.cur.pos += 1;
        let v = self.cur.variable()?;
        self.cur.expect(b'.')?;
        let body = self.formula()?;
        Ok(Some(if c == Some(b'E') {
            Formula::exists(v, body)
        } else {
            Formula::forall(v, body)
        }))
    }

    fn conj(&mut self) -> Result<Formula<Atom<L::Key, L::C>>> {
        let first = self.unary()?;
        let mut parts = vec![first];
        while self.cur.eat(b'&') {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one") } else { Formula::And(parts) })
    }

    fn unary(&mut self) -> Result<Formula<Atom<L::Key, L::C>>> {
        if self.cur.peek() == Some(b'!') && self.cur.peek2() != Some(b'=') {
            self.cur.pos += 1;
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula<Atom<L::Key, L::C>>> {
        if let Some(q) = self.quantifier()? {
            return Ok(q);
        }
        if let Some(id) = self.cur.peek_ident() {
            let after = &self.cur.src[self.cur.pos + id.len()..];
            let boundary = !after.bytes().next().is_some_and(|b| b.is_ascii_alphanumeric());
            if boundary && (id == "true" || id == "false") {
                self.cur.pos += id.len();
                return Ok(if id == "true" { Formula::True } else { Formula::False });
            }
        }
        if self.cur.peek() == Some(b'(') {
            let start = self.cur.pos;
            self.cur.pos += 1;
            let grouped = self.formula().and_then(|f| self.cur.expect(b')').map(|_| f));
            match grouped {
                Ok(f) => return Ok(f),
                Err(e1) => {
                    self.cur.pos = start;
                    return self.atom().map_err(|e2| furthest(e1, e2));
                }
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula<Atom<L::Key, L::C>>> {
        let lhs = parse_sum(self.lang, &mut self.cur)?;
        let rel = if self.cur.eat(b'=') {
            Rel::Eq
        } else if self.cur.peek() == Some(b'!') && self.cur.peek2() == Some(b'=') {
            self.cur.pos += 2;
            Rel::Ne
        } else {
            return Err(perr(self.cur.pos, "expected '=' or '!='"));
        };
        let rhs = parse_sum(self.lang, &mut self.cur)?;
        Ok(Formula::Atom(Atom::new(lhs, rel, rhs)))
    }
}

/// Parses a formula in the given term language.
pub fn parse_formula<L: Lang>(lang: &L, src: &str) -> Result<Formula<Atom<L::Key, L::C>>> {
    let mut p = FormulaParser { lang, cur: Cursor::new(src) };
    let f = p.formula()?;
    if !p.cur.at_end() {
        return Err(perr(p.cur.pos, "unexpected input"));
    }
    Ok(f)
}

/// Parses a single term.
pub fn parse_term<L: Lang>(lang: &L, src: &str) -> Result<Term<L::Key, L::C>> {
    let mut cur = Cursor::new(src);
    let t = parse_sum(lang, &mut cur)?;
    if !cur.at_end() {
        return Err(perr(cur.pos, "unexpected input"));
    }
    Ok(t)
}

pub fn print_atom<L: Lang>(lang: &L, a: &Atom<L::Key, L::C>) -> String {
    let rel = match a.rel {
        Rel::Eq => "=",
        Rel::Ne => "!=",
    };
    format!("{} {rel} {}", lang.print_term(&a.lhs), lang.print_term(&a.rhs))
}

/// Prints a formula; parsing the output yields the same tree.
pub fn print_formula<L: Lang>(lang: &L, f: &Formula<Atom<L::Key, L::C>>) -> String {
    match f {
        Formula::True => "true".into(),
        Formula::False => "false".into(),
        Formula::Atom(a) => print_atom(lang, a),
        Formula::Not(g) => match **g {
            Formula::True | Formula::False | Formula::Not(_) => format!("!{}", print_formula(lang, g)),
            _ => format!("!({})", print_formula(lang, g)),
        },
        Formula::And(gs) => gs
            .iter()
            .map(|g| match g {
                Formula::And(_) | Formula::Or(_) | Formula::Exists(..) | Formula::Forall(..) => {
                    format!("({})", print_formula(lang, g))
                }
                _ => print_formula(lang, g),
            })
            .collect::<Vec<_>>()
            .join(" & "),
        Formula::Or(gs) => gs
            .iter()
            .map(|g| match g {
                Formula::Or(_) | Formula::Exists(..) | Formula::Forall(..) => {
                    format!("({})", print_formula(lang, g))
                }
                _ => print_formula(lang, g),
            })
            .collect::<Vec<_>>()
            .join(" | "),
        Formula::Exists(v, g) => format!("E {v}. {}", print_formula(lang, g)),
        Formula::Forall(v, g) => format!("A {v}. {}", print_formula(lang, g)),
    }
}
