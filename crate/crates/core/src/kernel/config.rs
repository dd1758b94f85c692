use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{is_irreducible, poly_factor, FieldSpec, Poly};

/// An element of `N ∪ {∞}`; `Fin(_) < Inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Fin(u32),
    Inf,
}

impl ExtNat {
    pub fn is_inf(self) -> bool {
        self == ExtNat::Inf
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Inf => None,
        }
    }

    /// Converts a valuation (`None` = ∞).
    pub fn from_valuation(v: Option<u32>) -> Self {
        v.map_or(ExtNat::Inf, ExtNat::Fin)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Inf => write!(f, "inf"),
        }
    }
}

/// Value taken by irreducibles absent from the exception map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DefaultValue {
    Zero,
    Infinity,
}

impl DefaultValue {
    pub fn value(self) -> ExtNat {
        match self {
            DefaultValue::Zero => ExtNat::Fin(0),
            DefaultValue::Infinity => ExtNat::Inf,
        }
    }
}

/// A kernel configuration: a map from monic irreducibles to `N ∪ {∞}`
/// (finite exceptions over a default) together with its degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KernelConfig {
    field: FieldSpec,
    entries: BTreeMap<Poly, ExtNat>,
    default: DefaultValue,
    degree: ExtNat,
}

/// Result of [`kc_mipo`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiPo {
    pub poly: Poly,
    /// Degree one: θ is a scalar multiple of the identity.
    pub trivial: bool,
}

impl KernelConfig {
    /// Builds a configuration without validation; entries equal to the
    /// default are dropped.
    pub fn from_parts(
        field: FieldSpec,
        entries: BTreeMap<Poly, ExtNat>,
        default: DefaultValue,
        degree: ExtNat,
    ) -> Self {
        let entries = entries.into_iter().filter(|(_, v)| *v != default.value()).collect();
        KernelConfig { field, entries, default, degree }
    }

    /// `C_0`: transcendental, every irreducible mapped to 0.
    pub fn c_zero(field: FieldSpec) -> Self {
        KernelConfig::from_parts(field, BTreeMap::new(), DefaultValue::Zero, ExtNat::Inf)
    }

    /// `C_∞`: transcendental, every irreducible mapped to ∞.
    pub fn c_infinity(field: FieldSpec) -> Self {
        KernelConfig::from_parts(field, BTreeMap::new(), DefaultValue::Infinity, ExtNat::Inf)
    }

    /// Transcendental configuration with the given exceptions.
    pub fn transcendental(
        field: FieldSpec,
        default: DefaultValue,
        entries: impl IntoIterator<Item = (Poly, ExtNat)>,
    ) -> Result<Self> {
        let cfg =
            KernelConfig::from_parts(field, entries.into_iter().collect(), default, ExtNat::Inf);
        cfg.check()?;
        Ok(cfg)
    }

    /// Algebraic configuration with the given minimal polynomial.
    pub fn algebraic(mipo: &Poly) -> Result<Self> {
        let fac = poly_factor(mipo)?;
        let entries: BTreeMap<Poly, ExtNat> =
            fac.factors.into_iter().map(|(f, e)| (f, ExtNat::Fin(e))).collect();
        let field = mipo.field();
        let deg = mipo.deg0() as u32;
        let cfg = KernelConfig::from_parts(field, entries, DefaultValue::Zero, ExtNat::Fin(deg));
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        let v = kc_validate(self);
        if v.ok {
            Ok(())
        } else {
            Err(Error::Config(v.diagnostics.join("; ")))
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn entries(&self) -> &BTreeMap<Poly, ExtNat> {
        &self.entries
    }

    pub fn default_value(&self) -> DefaultValue {
        self.default
    }

    pub fn degree(&self) -> ExtNat {
        self.degree
    }

    pub fn is_algebraic(&self) -> bool {
        !self.degree.is_inf()
    }

    pub fn is_transcendental(&self) -> bool {
        self.degree.is_inf()
    }

    /// `C(f)` for a monic irreducible `f` (not re-checked).
    pub fn value(&self, f: &Poly) -> ExtNat {
        self.entries.get(f).copied().unwrap_or(self.default.value())
    }

    /// Irreducibles with `0 < C(f) < ∞`, ordered by degree then coefficients.
    pub fn finite_positive(&self) -> Vec<Poly> {
        self.entries
            .iter()
            .filter(|(_, v)| matches!(v, ExtNat::Fin(n) if *n > 0))
            .map(|(f, _)| f.clone())
            .collect()
    }

    pub fn is_finite_positive(&self, f: &Poly) -> bool {
        matches!(self.value(f), ExtNat::Fin(n) if n > 0)
    }

    /// `C(f) < ∞`.
    pub fn is_bounded(&self, f: &Poly) -> bool {
        !self.value(f).is_inf()
    }

    /// `C = C_0`.
    pub fn is_c_zero(&self) -> bool {
        self.is_transcendental() && self.default == DefaultValue::Zero && self.entries.is_empty()
    }

    /// The monic part of a nonzero `p` built from irreducibles with `C = ∞`.
    pub fn infinite_part(&self, p: &Poly) -> Poly {
        assert!(!p.is_zero(), "infinite part of the zero polynomial");
        match self.default {
            DefaultValue::Infinity => {
                let mut r = p.monic();
                for (f, v) in &self.entries {
                    if !v.is_inf() {
                        while f.divides(&r) {
                            r = r.exact_div(f);
                        }
                    }
                }
                r
            }
            DefaultValue::Zero => {
                let mut acc = Poly::one(self.field);
                for (g, v) in &self.entries {
                    if v.is_inf() {
                        acc = &acc * &g.pow(p.valuation(g).unwrap_or(0));
                    }
                }
                acc
            }
        }
    }

    pub fn mipo(&self) -> Result<MiPo> {
        kc_mipo(self)
    }

    /// Constraints whose reduction is this configuration. Transcendental
    /// configurations with default zero need infinitely many and are rejected.
    pub fn defining_constraints(&self) -> Result<Vec<super::KernelConstraint>> {
        use super::KernelConstraint as KC;
        if self.is_algebraic() {
            let m = kc_mipo(self)?.poly;
            return Ok(vec![KC::simple(Poly::zero(self.field), m)]);
        }
        if self.default == DefaultValue::Zero {
            return Err(Error::Config(
                "default zero needs infinitely many defining constraints".into(),
            ));
        }
        Ok(self
            .entries
            .iter()
            .filter_map(|(f, v)| v.finite().map(|c| KC::simple(f.pow(c), f.pow(c + 1))))
            .collect())
    }
}

impl fmt::Display for KernelConfig {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_algebraic() {
            if let Ok(m) = kc_mipo(self) {
                return write!(out, "algebraic over {}: MiPo = {}", self.field, m.poly);
            }
        }
        let default = match self.default {
            DefaultValue::Zero => "0",
            DefaultValue::Infinity => "inf",
        };
        write!(out, "transcendental over {}: default {default}", self.field)?;
        for (f, v) in &self.entries {
            write!(out, ", C({f}) = {v}")?;
        }
        Ok(())
    }
}

/// `C(f)`, checking that `f` is monic irreducible.
pub fn kc_classify(cfg: &KernelConfig, f: &Poly) -> Result<ExtNat> {
    cfg.field.check_same(&f.field())?;
    if !f.is_monic() || !is_irreducible(f)? {
        return Err(Error::NotIrreducible(f.to_string()));
    }
    Ok(cfg.value(f))
}

/// Outcome of [`kc_validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub ok: bool,
    pub algebraic: bool,
    pub diagnostics: Vec<String>,
}

pub fn kc_validate(cfg: &KernelConfig) -> Validation {
    let mut diagnostics = Vec::new();
    if let FieldSpec::Prime { p } = cfg.field {
        if !crate::poly::is_prime(p) {
            diagnostics.push(format!("field: {p} is not a prime"));
        }
    }
    for (f, v) in &cfg.entries {
        if f.field() != cfg.field {
            diagnostics.push(format!("entry {f}: polynomial over a different field"));
        } else if !f.is_monic() || !is_irreducible(f).unwrap_or(false) {
            diagnostics.push(format!("entry {f}: not monic irreducible"));
        }
        if *v == cfg.default.value() {
            diagnostics.push(format!("entry {f}: stores the default value"));
        }
    }
    let algebraic = cfg.is_algebraic();
    if let ExtNat::Fin(d) = cfg.degree {
        if cfg.default != DefaultValue::Zero {
            diagnostics.push("algebraic degree requires default zero".into());
        }
        if cfg.entries.values().any(|v| v.is_inf()) {
            diagnostics.push("algebraic degree requires finite entries".into());
        }
        let sum: u64 = cfg
            .entries
            .iter()
            .filter_map(|(f, v)| v.finite().map(|c| f.deg0() as u64 * c as u64))
            .sum();
        if sum != d as u64 {
            diagnostics.push(format!("degree equation: sum of deg(f)*C(f) is {sum}, degree is {d}"));
        }
        if d == 0 {
            diagnostics.push("degree must be positive".into());
        }
    }
    Validation { ok: diagnostics.is_empty(), algebraic, diagnostics }
}

/// `MiPo(C) = Π f^{C(f)}` for algebraic `C`.
pub fn kc_mipo(cfg: &KernelConfig) -> Result<MiPo> {
    if cfg.is_transcendental() {
        return Err(Error::Config("MiPo requested for a transcendental configuration".into()));
    }
    let poly = cfg.entries.iter().fold(Poly::one(cfg.field), |acc, (f, v)| {
        &acc * &f.pow(v.finite().expect("algebraic entries are finite"))
    });
    let trivial = poly.degree() == Some(1);
    Ok(MiPo { poly, trivial })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldSpec {
        FieldSpec::Prime { p: 2 }
    }

    fn p(s: &str) -> Poly {
        Poly::parse(f2(), s).unwrap()
    }

    #[test]
    fn classify_examples() {
        let c0 = KernelConfig::c_zero(f2());
        assert_eq!(kc_classify(&c0, &p("X")).unwrap(), ExtNat::Fin(0));
        let ci = KernelConfig::c_infinity(f2());
        assert_eq!(kc_classify(&ci, &p("X+1")).unwrap(), ExtNat::Inf);
        let alg = KernelConfig::algebraic(&p("X^2+X+1")).unwrap();
        assert_eq!(kc_classify(&alg, &p("X")).unwrap(), ExtNat::Fin(0));
        assert!(kc_classify(&alg, &p("X^2+1")).is_err());
    }

    #[test]
    fn validate_examples() {
        let one = |f: &str, c| BTreeMap::from([(p(f), c)]);
        let ok = KernelConfig::from_parts(
            f2(),
            one("X^2+X+1", ExtNat::Fin(1)),
            DefaultValue::Zero,
            ExtNat::Fin(2),
        );
        let v = kc_validate(&ok);
        assert!(v.ok && v.algebraic);
        let bad =
            KernelConfig::from_parts(f2(), one("X", ExtNat::Fin(1)), DefaultValue::Zero, ExtNat::Fin(3));
        let v = kc_validate(&bad);
        assert!(!v.ok);
        assert!(v.diagnostics[0].contains("degree equation"));
        let tr = KernelConfig::from_parts(
            f2(),
            one("X", ExtNat::Fin(2)),
            DefaultValue::Infinity,
            ExtNat::Inf,
        );
        let v = kc_validate(&tr);
        assert!(v.ok && !v.algebraic);
    }

    #[test]
    fn mipo_examples() {
        let m = KernelConfig::algebraic(&p("X^2")).unwrap().mipo().unwrap();
        assert_eq!(m.poly, p("X^2"));
        assert!(!m.trivial);
        let m = KernelConfig::algebraic(&p("X^2+X")).unwrap().mipo().unwrap();
        assert_eq!(m.poly, p("X^2+X"));
        let q = FieldSpec::Rationals;
        let m = KernelConfig::algebraic(&Poly::parse(q, "X-3").unwrap()).unwrap().mipo().unwrap();
        assert!(m.trivial);
        assert!(KernelConfig::c_zero(f2()).mipo().is_err());
    }
}
