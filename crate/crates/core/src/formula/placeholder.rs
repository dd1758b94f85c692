use super::ast::{EndoAtom, EndoFormula, EndoTerm, Formula, PhAtom, PhFormula, PhTerm, Placeholder};
use crate::poly::{FieldSpec, Poly, Scalar};

fn expand_term(field: FieldSpec, t: &PhTerm) -> EndoTerm {
    t.iter()
        .map(|(ph, c)| (ph.var.clone(), Poly::monomial(field, c.coeff(0), ph.power as usize)))
        .collect()
}

fn abstract_term(field: FieldSpec, t: &EndoTerm) -> PhTerm {
    let mut out = PhTerm::zero();
    for (v, c) in t.iter() {
        for (i, a) in c.coeffs().iter().enumerate() {
            out.add_to(
                Placeholder { var: v.clone(), power: i as u32 },
                Poly::constant(field, a.clone()),
            );
        }
    }
    out
}

/// Substitutes `θ^i(x)` for every placeholder `x^i`.
pub fn placeholder_expand(field: FieldSpec, psi: &PhFormula) -> EndoFormula {
    psi.map_atoms(&mut |a: &PhAtom| {
        Formula::Atom(EndoAtom::new(expand_term(field, &a.lhs), a.rel, expand_term(field, &a.rhs)))
    })
}

/// Replaces each `θ^i(x)` by the placeholder `x^i`; returns the bindings used.
pub fn placeholder_abstract(field: FieldSpec, phi: &EndoFormula) -> (PhFormula, Vec<Placeholder>) {
    let mut used = Vec::new();
    let f = phi.map_atoms(&mut |a: &EndoAtom| {
        let lhs = abstract_term(field, &a.lhs);
        let rhs = abstract_term(field, &a.rhs);
        used.extend(lhs.keys().chain(rhs.keys()).cloned());
        Formula::Atom(PhAtom::new(lhs, a.rel, rhs))
    });
    used.sort();
    used.dedup();
    (f, used)
}

/// Placeholder term for a scalar multiple of `x^i`.
pub fn ph_single(field: FieldSpec, var: &str, power: u32, c: Scalar) -> PhTerm {
    PhTerm::single(Placeholder { var: var.into(), power }, Poly::constant(field, c))
}
