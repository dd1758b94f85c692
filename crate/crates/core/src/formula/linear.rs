use std::collections::BTreeMap;
use std::sync::Arc;

use super::ast::{
    EndoAtom, EndoFormula, EndoTerm, Formula, ModAtom, ModFormula, ModTerm, Rel,
};
use crate::error::{Error, Result};
use crate::rc::{RcElem, RcRing};

/// `Σ coeffs[v]·v ⋈ rhs` with `rhs` free of the solved variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LinEq {
    pub coeffs: BTreeMap<String, RcElem>,
    pub rhs: ModTerm,
}

/// Equations and disequations in the chosen variables; literals without them
/// are kept as residual conditions on the parameters (empty residual = true).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LinearSystem {
    pub equations: Vec<LinEq>,
    pub disequations: Vec<LinEq>,
    pub residual: Vec<ModAtom>,
}

impl LinearSystem {
    /// True when some residual literal is constantly false.
    pub fn residual_false(&self) -> bool {
        self.residual.iter().any(|a| a.constant_truth() == Some(false))
    }
}

pub fn endo_term_to_mod(ring: &Arc<RcRing>, t: &EndoTerm) -> ModTerm {
    t.iter().map(|(v, c)| (v.clone(), RcElem::rho(ring, c))).collect()
}

pub fn endo_atom_to_mod(ring: &Arc<RcRing>, a: &EndoAtom) -> ModAtom {
    ModAtom::new(endo_term_to_mod(ring, &a.lhs), a.rel, endo_term_to_mod(ring, &a.rhs))
}

/// Reads `Σ q_j θ^j(x)` as `Rho(Σ q_j X^j)(x)`.
pub fn endo_to_mod(ring: &Arc<RcRing>, phi: &EndoFormula) -> ModFormula {
    phi.map_atoms(&mut |a| Formula::Atom(endo_atom_to_mod(ring, a)))
}

fn literals(phi: &ModFormula) -> Result<Vec<ModAtom>> {
    match phi {
        Formula::True => Ok(vec![]),
        Formula::False => Ok(vec![ModAtom::new(ModTerm::zero(), Rel::Ne, ModTerm::zero())]),
        Formula::Atom(a) => Ok(vec![a.clone()]),
        Formula::Not(g) => match g.as_ref() {
            Formula::Atom(a) => Ok(vec![a.negated()]),
            _ => Err(Error::Formula("linear system: negation of a compound formula".into())),
        },
        Formula::And(gs) => {
            let mut out = Vec::new();
            for g in gs {
                out.extend(literals(g)?);
            }
            Ok(out)
        }
        _ => Err(Error::Formula("linear system: input is not a conjunction of literals".into())),
    }
}

/// Splits each literal into the part in `vars` and the parameter part.
pub fn mod_to_linear_system(phi: &ModFormula, vars: &[String]) -> Result<LinearSystem> {
    let mut sys = LinearSystem::default();
    for lit in literals(phi)? {
        let mut d = lit.difference();
        let mut coeffs = BTreeMap::new();
        for v in vars {
            if let Some(c) = d.take(v) {
                coeffs.insert(v.clone(), c);
            }
        }
        if coeffs.is_empty() {
            if lit.rel == Rel::Eq && d.is_zero() {
                continue;
            }
            sys.residual.push(ModAtom::new(d, lit.rel, ModTerm::zero()));
            continue;
        }
        let eq = LinEq { coeffs, rhs: d.neg() };
        match lit.rel {
            Rel::Eq => sys.equations.push(eq),
            Rel::Ne => sys.disequations.push(eq),
        }
    }
    Ok(sys)
}

/// Quantifier-free conjunction of `L_{K,θ}` literals to an `R_C`-linear system.
pub fn fml_to_linear_system(
    phi: &EndoFormula,
    ring: &Arc<RcRing>,
    vars: &[String],
) -> Result<LinearSystem> {
    mod_to_linear_system(&endo_to_mod(ring, phi), vars)
}

impl LinEq {
    pub fn to_atom(&self, rel: Rel) -> ModAtom {
        let lhs = self.coeffs.iter().map(|(v, c)| (v.clone(), c.clone())).collect();
        ModAtom::new(lhs, rel, self.rhs.clone())
    }
}

impl LinearSystem {
    /// The system as a conjunction again.
    pub fn to_formula(&self) -> ModFormula {
        let mut parts: Vec<ModFormula> = Vec::new();
        parts.extend(self.equations.iter().map(|e| Formula::Atom(e.to_atom(Rel::Eq))));
        parts.extend(self.disequations.iter().map(|e| Formula::Atom(e.to_atom(Rel::Ne))));
        parts.extend(self.residual.iter().cloned().map(Formula::Atom));
        Formula::and_all(parts)
    }
}
