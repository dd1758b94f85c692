use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::{DefaultValue, ExtNat, KernelConfig};
use crate::error::{Error, Result};
use crate::poly::{irreducible_factors, FieldSpec, Poly};

/// `Σ_k ∩_l Ker(lhs[k][l]) = Σ_k ∩_l Ker(rhs[k][l])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelConstraint {
    pub lhs: Vec<Vec<Poly>>,
    pub rhs: Vec<Vec<Poly>>,
}

/// Outcome of [`constraints_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduced {
    Config(KernelConfig),
    Inconsistent,
}

impl KernelConstraint {
    /// `Ker(a) = Ker(b)`.
    pub fn simple(a: Poly, b: Poly) -> Self {
        KernelConstraint { lhs: vec![vec![a]], rhs: vec![vec![b]] }
    }

    fn field(&self) -> Option<FieldSpec> {
        self.lhs.iter().chain(&self.rhs).flatten().next().map(|p| p.field())
    }

    /// The pair `(α, β)` with `Ker(α) = Ker(β)` equivalent to this constraint.
    pub fn collapse(&self) -> Result<(Poly, Poly)> {
        let field = self.field().ok_or_else(|| Error::Config("empty constraint".into()))?;
        let side = |s: &Vec<Vec<Poly>>| -> Result<Poly> {
            if s.is_empty() || s.iter().any(|l| l.is_empty()) {
                return Err(Error::Config("constraint side with an empty list".into()));
            }
            let mut acc = Poly::one(field);
            for inter in s {
                let mut g = Poly::zero(field);
                for p in inter {
                    field.check_same(&p.field())?;
                    g = g.gcd(p);
                }
                acc = acc.lcm(&g);
            }
            Ok(acc)
        };
        Ok((side(&self.lhs)?, side(&self.rhs)?))
    }
}

/// Normalizes a set of kernel constraints to a kernel configuration.
pub fn constraints_reduce(field: FieldSpec, cs: &[KernelConstraint]) -> Result<Reduced> {
    let mut bounds: BTreeMap<Poly, u32> = BTreeMap::new();
    let mut forced: Option<Poly> = None;
    let mut bound = |f: Poly, b: u32| {
        let e = bounds.entry(f).or_insert(b);
        *e = (*e).min(b);
    };
    for c in cs {
        let (a, b) = c.collapse()?;
        field.check_same(&a.field())?;
        match (a.is_zero(), b.is_zero()) {
            (true, true) => {}
            (true, false) | (false, true) => {
                let alpha = if a.is_zero() { b } else { a };
                forced = Some(match forced {
                    None => alpha.monic(),
                    Some(prev) => prev.gcd(&alpha),
                });
            }
            (false, false) => {
                let mut fs = irreducible_factors(&a)?;
                fs.extend(irreducible_factors(&b)?);
                for f in fs {
                    let (va, vb) = (a.valuation(&f), b.valuation(&f));
                    if va != vb {
                        bound(f, va.min(vb).expect("nonzero valuations are finite"));
                    }
                }
            }
        }
    }
    match forced {
        Some(alpha) => {
            let mut entries = BTreeMap::new();
            let mut deg = 0u32;
            for f in irreducible_factors(&alpha)? {
                let v = alpha.valuation(&f).expect("nonzero");
                let c = bounds.get(&f).map_or(v, |b| v.min(*b));
                if c > 0 {
                    deg += f.deg0() as u32 * c;
                    entries.insert(f, ExtNat::Fin(c));
                }
            }
            if deg == 0 {
                return Ok(Reduced::Inconsistent);
            }
            Ok(Reduced::Config(KernelConfig::from_parts(
                field,
                entries,
                DefaultValue::Zero,
                ExtNat::Fin(deg),
            )))
        }
        None => {
            let entries = bounds.into_iter().map(|(f, b)| (f, ExtNat::Fin(b))).collect();
            Ok(Reduced::Config(KernelConfig::from_parts(
                field,
                entries,
                DefaultValue::Infinity,
                ExtNat::Inf,
            )))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ConstraintJson {
    lhs: Vec<Vec<String>>,
    rhs: Vec<Vec<String>>,
}

/// Parses a constraint file: a JSON list of `{"lhs":[["X^2"]],"rhs":[["X^3"]]}`.
pub fn constraints_from_json(field: FieldSpec, src: &str) -> Result<Vec<KernelConstraint>> {
    let raw: Vec<ConstraintJson> = serde_json::from_str(src)?;
    let conv = |s: Vec<Vec<String>>| -> Result<Vec<Vec<Poly>>> {
        s.into_iter()
            .map(|l| l.iter().map(|p| Poly::parse(field, p)).collect())
            .collect()
    };
    raw.into_iter()
        .map(|c| Ok(KernelConstraint { lhs: conv(c.lhs)?, rhs: conv(c.rhs)? }))
        .collect()
}

pub fn constraints_to_json(cs: &[KernelConstraint]) -> String {
    let conv = |s: &Vec<Vec<Poly>>| -> Vec<Vec<String>> {
        s.iter().map(|l| l.iter().map(|p| p.to_string()).collect()).collect()
    };
    let raw: Vec<ConstraintJson> =
        cs.iter().map(|c| ConstraintJson { lhs: conv(&c.lhs), rhs: conv(&c.rhs) }).collect();
    serde_json::to_string(&raw).expect("constraint json")
}
