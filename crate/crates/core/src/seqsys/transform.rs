use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::smith::{diagonalize, PolyMat};
use super::system::{ss_rank_degree, SeqRow, SeqSystem};
use crate::error::{Error, Result};
use crate::formula::{EndoTerm, LinEq, ModAtom, ModTerm, Rel};
use crate::poly::{poly_factor, Poly};
use crate::rc::{RcElem, RcRing};

/// Old variable `x = endo(x') + param(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TauEntry {
    pub var: String,
    pub endo: EndoTerm,
    pub param: ModTerm,
}

/// `ν` maps old solutions to new ones, `τ` maps back.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformWitness {
    pub nu: Vec<(String, ModTerm)>,
    pub tau: Vec<TauEntry>,
}

/// `S ∧ E` rewritten as `φ'(y) ∧ S'(x'; μ'(y))`.
#[derive(Clone, Debug)]
pub struct Transformed {
    pub system: SeqSystem,
    pub conditions: Vec<ModAtom>,
    pub mu: Vec<ModTerm>,
    pub witness: TransformWitness,
}

impl Transformed {
    pub fn measure(&self) -> (usize, usize) {
        ss_rank_degree(&self.system)
    }
}

/// Coefficient of an equation as a polynomial in θ.
fn poly_coeff(c: &RcElem) -> Result<Poly> {
    let (num, den) = c.global();
    if c.ring().is_algebraic() || (den.is_one() && c.corrections().is_empty()) {
        return Ok(num.clone());
    }
    Err(Error::SeqSystem(format!("coefficient {c} is not a polynomial in theta")))
}

struct Names {
    used: BTreeSet<String>,
    next: usize,
}

impl Names {
    fn fresh(&mut self, prefix: &str) -> String {
        loop {
            self.next += 1;
            let n = format!("{prefix}{}", self.next);
            if self.used.insert(n.clone()) {
                return n;
            }
        }
    }
}

struct Ctx<'a> {
    ring: &'a Arc<RcRing>,
    names: Names,
    li: Vec<String>,
    rows: Vec<SeqRow>,
    mu: Vec<ModTerm>,
    conditions: Vec<ModAtom>,
    nu: Vec<(String, ModTerm)>,
}

impl Ctx<'_> {
    fn rho(&self, p: &Poly) -> RcElem {
        RcElem::rho(self.ring, p)
    }

    fn local_only(&self, l: usize, v: Poly) -> RcElem {
        let field = self.ring.field();
        let mut locals = vec![Poly::zero(field); self.ring.locals().len()];
        locals[l] = v;
        RcElem::from_parts(self.ring, Poly::zero(field), Poly::one(field), locals).expect("local element")
    }

    fn condition(&mut self, t: ModTerm) {
        if !t.is_zero() {
            self.conditions.push(ModAtom::new(t, Rel::Eq, ModTerm::zero()));
        }
    }

    fn new_row(&mut self, f: Poly, q: u32, mu: ModTerm, nu: ModTerm) -> String {
        let var = self.names.fresh("u");
        let param = self.names.fresh("w");
        self.rows.push(SeqRow { var: var.clone(), f, q, param });
        self.mu.push(mu);
        self.nu.push((var.clone(), nu));
        var
    }

    /// Solves `d(x'') = b` where `x'' = xs` in old variables; returns `x''` as
    /// a θ-term in new variables plus a parameter term.
    fn split(&mut self, d: &Poly, b: &ModTerm, xs: &ModTerm) -> Result<(EndoTerm, ModTerm)> {
        let field = self.ring.field();
        let ring = self.ring.clone();
        let mut endo = EndoTerm::zero();
        let mut param = ModTerm::zero();
        if !ring.is_algebraic() {
            let d_inf = ring.cfg().infinite_part(d);
            let h = d.exact_div(&d_inf);
            let zeros = vec![Poly::zero(field); ring.locals().len()];
            let im_inv = RcElem::from_parts(&ring, Poly::one(field), h, zeros)?;
            let beta = b.scale(&im_inv);
            if d_inf.is_one() {
                param = param.add(&beta);
            } else {
                let fs: Vec<Poly> = ring.locals().iter().map(|l| l.f.clone()).collect();
                let pim = RcElem::proj_im(&ring, &fs)?;
                let fac = poly_factor(&d_inf)?;
                let powers: Vec<(Poly, u32)> = fac.factors.into_iter().collect();
                let prods: Vec<Poly> = powers
                    .iter()
                    .map(|(g, e)| d_inf.exact_div(&g.pow(*e)))
                    .collect();
                let ts = bezout_all(&prods)?;
                for (((g, e), dj), tj) in powers.iter().zip(&prods).zip(&ts) {
                    let mu = beta.clone();
                    let nu = xs.scale(&(&self.rho(dj) * &pim));
                    let z = self.new_row(g.clone(), *e, mu, nu);
                    endo.add_to(z, tj.clone());
                }
            }
        }
        let locals: Vec<(Poly, u32, Poly)> =
            ring.locals().iter().map(|l| (l.f.clone(), l.c, l.modulus.clone())).collect();
        for (i, (f, c, modulus)) in locals.into_iter().enumerate() {
            let e = if d.is_zero() { c } else { d.valuation(&f).unwrap_or(c) };
            let s = e.min(c);
            let unit = if d.is_zero() { Poly::one(field) } else { d.exact_div(&f.pow(e)).rem(&modulus) };
            let unit_inv = unit.inv_mod(&modulus).ok_or_else(|| Error::SeqSystem("non-unit cofactor".into()))?;
            if s == 0 {
                param = param.add(&b.scale(&self.local_only(i, unit_inv)));
                continue;
            }
            let pf = self.local_only(i, Poly::one(field));
            self.condition(b.scale(&(&self.rho(&f.pow(c - s)) * &pf)));
            let mu = b.scale(&pf);
            let nu = xs.scale(&(&self.rho(&unit) * &pf));
            let z = self.new_row(f, s, mu, nu);
            endo.add_to(z, unit_inv);
        }
        Ok((endo, param))
    }
}

/// `t_j` with `Σ t_j·p_j = 1` for coprime `p_j`.
fn bezout_all(ps: &[Poly]) -> Result<Vec<Poly>> {
    let field = ps[0].field();
    let mut g = ps[0].clone();
    let mut ts = vec![Poly::one(field)];
    for p in &ps[1..] {
        let (g2, u, v) = g.gcd_bezout(p)?;
        ts = ts.iter().map(|t| t * &u).collect();
        ts.push(v);
        g = g2;
    }
    if !g.is_one() {
        return Err(Error::SeqSystem("cofactors are not coprime".into()));
    }
    Ok(ts)
}

fn identity_transform(s: &SeqSystem) -> Transformed {
    let ring = RcRing::new(s.cfg.clone());
    let one = RcElem::one(&ring);
    let field = s.cfg.field();
    let nu = s.vars().into_iter().map(|v| (v.clone(), ModTerm::single(v, one.clone()))).collect();
    let tau = s
        .vars()
        .into_iter()
        .map(|v| TauEntry { var: v.clone(), endo: EndoTerm::single(v, Poly::one(field)), param: ModTerm::zero() })
        .collect();
    Transformed {
        system: s.clone(),
        conditions: Vec::new(),
        mu: s.rows.iter().map(|r| ModTerm::single(r.param.clone(), one.clone())).collect(),
        witness: TransformWitness { nu, tau },
    }
}

/// Checks that `e` only uses system variables on the left, parameters on the
/// right, and is bounded by `s`.
fn check_equations(s: &SeqSystem, ring: &Arc<RcRing>, e: &[LinEq]) -> Result<Vec<BTreeMap<String, Poly>>> {
    let vars = s.vars();
    let mut out = Vec::new();
    for eq in e {
        let mut row = BTreeMap::new();
        for (v, c) in &eq.coeffs {
            if !vars.contains(v) {
                return Err(Error::SeqSystem(format!("{v} is not a variable of the system")));
            }
            if c.cfg() != ring.cfg() {
                return Err(Error::ConfigMismatch);
            }
            let p = poly_coeff(c)?;
            if let Some(r) = s.row_of(v) {
                if p.degree().is_some_and(|d| d >= r.degree()) {
                    return Err(Error::SeqSystem(format!(
                        "equation is not bounded by the system at {v}; substitute first"
                    )));
                }
            }
            row.insert(v.clone(), p);
        }
        if let Some(v) = eq.rhs.keys().find(|v| vars.contains(v)) {
            return Err(Error::SeqSystem(format!("right-hand side mentions variable {v}")));
        }
        out.push(row);
    }
    Ok(out)
}

/// Absorbs the equations `e` into `s`.
pub fn ss_transform(s: &SeqSystem, e: &[LinEq]) -> Result<Transformed> {
    s.validate()?;
    let ring = RcRing::new(s.cfg.clone());
    let rows_e = check_equations(s, &ring, e)?;
    if e.is_empty() {
        return Ok(identity_transform(s));
    }
    let field = s.cfg.field();
    let one = RcElem::one(&ring);
    let vars = s.vars();
    let nv = vars.len();
    let mut a: PolyMat = Vec::new();
    let mut b: Vec<ModTerm> = Vec::new();
    for r in &s.rows {
        a.push(vars.iter().map(|v| if *v == r.var { r.poly() } else { Poly::zero(field) }).collect());
        b.push(ModTerm::single(r.param.clone(), one.clone()));
    }
    for (row, eq) in rows_e.iter().zip(e) {
        a.push(vars.iter().map(|v| row.get(v).cloned().unwrap_or_else(|| Poly::zero(field))).collect());
        b.push(eq.rhs.clone());
    }
    let dz = diagonalize(field, &a, nv);
    let ub: Vec<ModTerm> = dz
        .u
        .iter()
        .map(|urow| {
            urow.iter().zip(&b).fold(ModTerm::zero(), |acc, (c, t)| acc.add(&t.scale(&RcElem::rho(&ring, c))))
        })
        .collect();
    let mut used: BTreeSet<String> = vars.iter().cloned().collect();
    used.extend(s.params());
    for eq in e {
        used.extend(eq.rhs.keys().cloned());
    }
    let mut ctx = Ctx {
        ring: &ring,
        names: Names { used, next: 0 },
        li: Vec::new(),
        rows: Vec::new(),
        mu: Vec::new(),
        conditions: Vec::new(),
        nu: Vec::new(),
    };
    let r = dz.diag.len();
    for t in ub.iter().skip(r) {
        ctx.condition(t.clone());
    }
    let mut parts: Vec<(EndoTerm, ModTerm)> = Vec::new();
    for i in 0..nv {
        let xs: ModTerm = vars
            .iter()
            .zip(&dz.v_inv[i])
            .map(|(v, c)| (v.clone(), RcElem::rho(&ring, c)))
            .collect();
        if i < r {
            parts.push(ctx.split(&dz.diag[i], &ub[i], &xs)?);
        } else if ring.is_algebraic() {
            parts.push(ctx.split(&Poly::zero(field), &ModTerm::zero(), &xs)?);
        } else {
            let z = ctx.names.fresh("u");
            ctx.li.push(z.clone());
            ctx.nu.push((z.clone(), xs));
            parts.push((EndoTerm::single(z, Poly::one(field)), ModTerm::zero()));
        }
    }
    let tau = vars
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let mut endo = EndoTerm::zero();
            let mut param = ModTerm::zero();
            for (i, (pe, pp)) in parts.iter().enumerate() {
                let c = &dz.v[k][i];
                endo = endo.add(&pe.scale(c));
                param = param.add(&pp.scale(&RcElem::rho(&ring, c)));
            }
            TauEntry { var: v.clone(), endo, param }
        })
        .collect();
    let Ctx { li, rows, mu, conditions, nu, .. } = ctx;
    let system = SeqSystem::new(s.cfg.clone(), li, rows)?;
    Ok(Transformed { system, conditions, mu, witness: TransformWitness { nu, tau } })
}
