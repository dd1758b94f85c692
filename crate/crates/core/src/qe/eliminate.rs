//! Quantifier elimination into the language of `R_C`-modules.
//!
//! One existential is removed from a conjunction of literals at a time. The
//! equations `a_i(x) = b_i` are merged into a single `a(x) = b` by working
//! componentwise in `R_C = L × Π K[X]/(f^c)`: in `L` the ideal of the
//! coefficients is generated by the `C = ∞` part of the gcd of numerators,
//! in a local factor by the least power of `f`. A disequation survives only
//! when its coefficient is a multiple of `a`; otherwise the solution coset
//! cannot be covered by finitely many proper cosets and it is dropped.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{
    dnf, endo_to_mod, mod_to_linear_system, nnf, print_atom, EndoFormula, Formula, LinEq, LinearSystem,
    ModAtom, ModFormula, ModLang, ModTerm, Rel,
};
use crate::poly::Poly;
use crate::rc::{RcElem, RcRing};

/// One elimination step, for auditing.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Step {
    pub var: String,
    pub pivot: String,
    pub conditions: Vec<String>,
    pub dropped_disequations: Vec<String>,
    pub residual_literals: Vec<String>,
}

/// Quantifier-free result of [`qe_full`].
#[derive(Clone, Debug)]
pub struct QfResult {
    pub formula: ModFormula,
    pub trace: Vec<Step>,
}

impl QfResult {
    pub fn trace_json(&self) -> String {
        serde_json::to_string_pretty(&self.trace).expect("trace serializes")
    }
}

/// `Σ_i u_i·p_i = gcd(p_i)` over the nonzero entries; `None` when all vanish.
fn bezout(ps: &[Poly]) -> Result<Option<(Poly, Vec<Poly>)>> {
    let field = match ps.first() {
        Some(p) => p.field(),
        None => return Ok(None),
    };
    let mut g = Poly::zero(field);
    let mut us: Vec<Poly> = Vec::with_capacity(ps.len());
    for p in ps {
        if p.is_zero() {
            us.push(Poly::zero(field));
            continue;
        }
        if g.is_zero() {
            let inv = field.inv(&p.lead());
            g = p.scale(&inv);
            us.push(Poly::constant(field, inv));
            continue;
        }
        let (g2, s, t) = g.gcd_bezout(p)?;
        us = us.iter().map(|u| u * &s).collect();
        us.push(t);
        g = g2;
    }
    Ok((!g.is_zero()).then_some((g, us)))
}

/// `v_f(r)` for `r` reduced modulo `f^c`, capped at `c`.
fn val(r: &Poly, f: &Poly, c: u32) -> u32 {
    r.valuation(f).map_or(c, |v| v.min(c))
}

/// Componentwise generator of the ideal of the coefficients.
struct Pivot {
    ring: Arc<RcRing>,
    /// Global generator (transcendental `C` only): a product of `C = ∞`
    /// primes, or zero.
    g: Poly,
    /// Per local factor: the exponent `s` of `f^s` (`s = c` means zero).
    s: Vec<u32>,
}

impl Pivot {
    fn elem(&self) -> Result<RcElem> {
        let field = self.ring.field();
        let locals = self
            .ring
            .locals()
            .iter()
            .zip(&self.s)
            .map(|(l, &s)| if s == l.c { Poly::zero(field) } else { l.f.pow(s) })
            .collect();
        RcElem::from_parts(&self.ring, self.g.clone(), Poly::one(field), locals)
    }

    /// `t` with `c = t·a` componentwise, if any.
    fn quotient(&self, c: &RcElem) -> Result<Option<RcElem>> {
        let field = self.ring.field();
        let (num, den) = c.global();
        let gq = if self.ring.is_algebraic() {
            Poly::zero(field)
        } else if self.g.is_zero() {
            if !num.is_zero() {
                return Ok(None);
            }
            Poly::zero(field)
        } else if self.g.divides(num) {
            num.exact_div(&self.g)
        } else {
            return Ok(None);
        };
        let mut locals = Vec::new();
        for (i, l) in self.ring.locals().iter().enumerate() {
            let r = c.local(i);
            if r.is_zero() {
                locals.push(r);
            } else if self.s[i] < l.c && val(&r, &l.f, l.c) >= self.s[i] {
                locals.push(r.exact_div(&l.f.pow(self.s[i])));
            } else {
                return Ok(None);
            }
        }
        let d = if gq.is_zero() { Poly::one(field) } else { den.clone() };
        RcElem::from_parts(&self.ring, gq, d, locals).map(Some)
    }
}

/// Rule (a): merges the equations into `a(x) = b` plus consistency
/// conditions `q_i·b = b_i`, with `a = Σ u_i·a_i` and `a_i = q_i·a`.
fn combine(ring: &Arc<RcRing>, eqs: &[(RcElem, ModTerm)]) -> Result<(Pivot, ModTerm, Vec<ModAtom>)> {
    let field = ring.field();
    let n = eqs.len();
    let zero = Poly::zero(field);
    let one = Poly::one(field);
    let mut g = zero.clone();
    let mut u_glob: Vec<(Poly, Poly)> = vec![(zero.clone(), one.clone()); n];
    let mut q_glob: Vec<(Poly, Poly)> = vec![(zero.clone(), one.clone()); n];
    if !ring.is_algebraic() {
        let nums: Vec<Poly> = eqs.iter().map(|(c, _)| c.global().0.clone()).collect();
        if let Some((gcd, vs)) = bezout(&nums)? {
            g = ring.cfg().infinite_part(&gcd);
            let unit = gcd.exact_div(&g);
            for (i, (c, _)) in eqs.iter().enumerate() {
                let (num, den) = c.global();
                u_glob[i] = (&vs[i] * den, unit.clone());
                if !num.is_zero() {
                    q_glob[i] = (num.exact_div(&g), den.clone());
                }
            }
        }
    }
    let locals = ring.locals();
    let mut s = Vec::with_capacity(locals.len());
    let mut u_loc = vec![Vec::with_capacity(locals.len()); n];
    let mut q_loc = vec![Vec::with_capacity(locals.len()); n];
    for (li, l) in locals.iter().enumerate() {
        let rs: Vec<Poly> = eqs.iter().map(|(c, _)| c.local(li)).collect();
        let vals: Vec<u32> = rs.iter().map(|r| val(r, &l.f, l.c)).collect();
        let (i0, &smin) = vals.iter().enumerate().min_by_key(|(_, v)| **v).expect("at least one equation");
        s.push(smin);
        let fs = l.f.pow(smin);
        for i in 0..n {
            if smin == l.c {
                u_loc[i].push(zero.clone());
                q_loc[i].push(zero.clone());
                continue;
            }
            let u = if i == i0 {
                rs[i].exact_div(&fs).inv_mod(&l.modulus).expect("unit part")
            } else {
                zero.clone()
            };
            u_loc[i].push(u);
            q_loc[i].push(if rs[i].is_zero() { zero.clone() } else { rs[i].exact_div(&fs) });
        }
    }
    let mut b = ModTerm::zero();
    let mut qs = Vec::with_capacity(n);
    for (i, (_, bi)) in eqs.iter().enumerate() {
        let (un, ud) = u_glob[i].clone();
        let u = RcElem::from_parts(ring, un, ud, std::mem::take(&mut u_loc[i]))?;
        let (qn, qd) = q_glob[i].clone();
        qs.push(RcElem::from_parts(ring, qn, qd, std::mem::take(&mut q_loc[i]))?);
        b = b.add(&bi.scale(&u));
    }
    let conds = qs
        .iter()
        .zip(eqs)
        .map(|(q, (_, bi))| ModAtom::new(b.scale(q), Rel::Eq, bi.clone()))
        .collect();
    Ok((Pivot { ring: ring.clone(), g, s }, b, conds))
}

/// Drops true literals; `None` when some literal is constantly false.
fn clean(atoms: Vec<ModAtom>) -> Option<Vec<ModAtom>> {
    let mut out: Vec<ModAtom> = Vec::new();
    for a in atoms {
        let a = a.normalized();
        match a.constant_truth() {
            Some(true) => continue,
            Some(false) => return None,
            None => {}
        }
        if !out.contains(&a) {
            out.push(a);
        }
    }
    Some(out)
}

fn conj(atoms: Option<Vec<ModAtom>>) -> ModFormula {
    match atoms {
        None => Formula::False,
        Some(v) => Formula::and_all(v.into_iter().map(Formula::Atom).collect()),
    }
}

/// Eliminates `∃x` from a system whose equations and disequations are
/// collected in `x` (residual literals are passed through).
pub fn qe_eliminate_one(x: &str, sys: &LinearSystem, ring: &Arc<RcRing>) -> Result<(ModFormula, Step)> {
    let lang = ModLang { ring: ring.clone() };
    let coeff = |e: &LinEq| -> Result<RcElem> {
        if e.coeffs.len() != 1 || !e.coeffs.contains_key(x) {
            return Err(Error::Formula(format!("system is not collected in {x}")));
        }
        Ok(e.coeffs[x].clone())
    };
    let eqs: Vec<(RcElem, ModTerm)> =
        sys.equations.iter().map(|e| Ok((coeff(e)?, e.rhs.clone()))).collect::<Result<_>>()?;
    let (pivot, b, mut conds) = if eqs.is_empty() {
        let s = ring.locals().iter().map(|l| l.c).collect();
        (Pivot { ring: ring.clone(), g: Poly::zero(ring.field()), s }, ModTerm::zero(), Vec::new())
    } else {
        combine(ring, &eqs)?
    };
    let mut step = Step { var: x.to_string(), pivot: pivot.elem()?.to_string(), ..Step::default() };
    // Rule (b): only local factors constrain solvability.
    let field = ring.field();
    for (li, l) in ring.locals().iter().enumerate() {
        let s = pivot.s[li];
        if s == 0 {
            continue;
        }
        let locals = (0..ring.locals().len())
            .map(|k| if k == li { l.f.pow(l.c - s) } else { Poly::zero(field) })
            .collect();
        let e = RcElem::from_parts(ring, Poly::zero(field), Poly::one(field), locals)?;
        conds.push(ModAtom::new(b.scale(&e), Rel::Eq, ModTerm::zero()));
    }
    // Rules (c) and (d).
    let mut kept = Vec::new();
    for e in &sys.disequations {
        let c = coeff(e)?;
        match pivot.quotient(&c)? {
            Some(t) => kept.push(ModAtom::new(b.scale(&t), Rel::Ne, e.rhs.clone())),
            None => step.dropped_disequations.push(print_atom(&lang, &e.to_atom(Rel::Ne))),
        }
    }
    // Trivial conditions such as `b = b` are left out of the trace.
    step.conditions = conds
        .iter()
        .filter(|a| a.normalized().constant_truth() != Some(true))
        .map(|a| print_atom(&lang, a))
        .collect();
    step.residual_literals = kept.iter().map(|a| print_atom(&lang, a)).collect();
    let mut all = sys.residual.clone();
    all.extend(conds);
    all.extend(kept);
    Ok((conj(clean(all)), step))
}

fn check_ring(phi: &ModFormula, ring: &Arc<RcRing>) -> Result<()> {
    for a in phi.atoms() {
        for (_, c) in a.lhs.iter().chain(a.rhs.iter()) {
            if c.cfg() != ring.cfg() {
                return Err(Error::ConfigMismatch);
            }
        }
    }
    Ok(())
}

fn simplify(f: ModFormula) -> ModFormula {
    match f {
        Formula::Atom(a) => match a.constant_truth() {
            Some(true) => Formula::True,
            Some(false) => Formula::False,
            None => Formula::Atom(a),
        },
        Formula::Not(g) => match simplify(*g) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Atom(a) => Formula::Atom(a.negated()),
            Formula::Not(h) => *h,
            h => Formula::not(h),
        },
        Formula::And(gs) => Formula::and_all(gs.into_iter().map(simplify).collect()),
        Formula::Or(gs) => Formula::or_all(gs.into_iter().map(simplify).collect()),
        other => other,
    }
}

fn eliminate(f: &ModFormula, ring: &Arc<RcRing>, trace: &mut Vec<Step>) -> Result<ModFormula> {
    Ok(match f {
        Formula::True | Formula::False | Formula::Atom(_) => simplify(f.clone()),
        Formula::Not(g) => simplify(Formula::not(eliminate(g, ring, trace)?)),
        Formula::And(gs) => {
            Formula::and_all(gs.iter().map(|g| eliminate(g, ring, trace)).collect::<Result<_>>()?)
        }
        Formula::Or(gs) => {
            Formula::or_all(gs.iter().map(|g| eliminate(g, ring, trace)).collect::<Result<_>>()?)
        }
        Formula::Exists(v, g) => {
            let body = eliminate(g, ring, trace)?;
            let vars = [v.clone()];
            let mut parts = Vec::new();
            let mut seen = BTreeSet::new();
            for lits in dnf(&nnf(&body)) {
                let sys = mod_to_linear_system(&conj(Some(lits)), &vars)?;
                let (out, step) = qe_eliminate_one(v, &sys, ring)?;
                trace.push(step);
                if out == Formula::True {
                    return Ok(Formula::True);
                }
                let key = format!("{out:?}");
                if seen.insert(key) {
                    parts.push(out);
                }
            }
            Formula::or_all(parts)
        }
        Formula::Forall(v, g) => {
            let inner = Formula::exists(v.clone(), Formula::not((**g).clone()));
            simplify(Formula::not(eliminate(&inner, ring, trace)?))
        }
    })
}

/// Innermost-first elimination of every quantifier of `phi`.
pub fn qe_full(phi: &ModFormula, ring: &Arc<RcRing>) -> Result<QfResult> {
    check_ring(phi, ring)?;
    let mut trace = Vec::new();
    let formula = eliminate(phi, ring, &mut trace)?;
    Ok(QfResult { formula, trace })
}

/// [`qe_full`] for a formula in the language of `θ`.
pub fn qe_full_endo(phi: &EndoFormula, ring: &Arc<RcRing>) -> Result<QfResult> {
    qe_full(&endo_to_mod(ring, phi), ring)
}

fn constant_value(f: &ModFormula) -> Result<bool> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => a
            .constant_truth()
            .ok_or_else(|| Error::Formula("literal with variables in a sentence".into()))?,
        Formula::Not(g) => !constant_value(g)?,
        Formula::And(gs) => gs.iter().map(constant_value).collect::<Result<Vec<_>>>()?.into_iter().all(|b| b),
        Formula::Or(gs) => gs.iter().map(constant_value).collect::<Result<Vec<_>>>()?.into_iter().any(|b| b),
        _ => return Err(Error::Formula("quantifier left after elimination".into())),
    })
}

/// Truth value of a sentence in the model companion.
pub fn qe_decide_sentence(phi: &ModFormula, ring: &Arc<RcRing>) -> Result<bool> {
    if !phi.free_vars().is_empty() {
        return Err(Error::Formula("sentence expected, found free variables".into()));
    }
    constant_value(&qe_full(phi, ring)?.formula)
}
