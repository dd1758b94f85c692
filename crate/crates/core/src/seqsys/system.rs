use crate::error::{Error, Result};
use crate::finmodel::FinModel;
use crate::formula::{EndoFormula, EndoTerm, Formula, PhFormula};
use crate::kernel::{ExtNat, KernelConfig};
use crate::poly::{euclid_div, is_irreducible, Poly};

/// A constrained row `f^q[θ](var) = param`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqRow {
    pub var: String,
    pub f: Poly,
    pub q: u32,
    pub param: String,
}

impl SeqRow {
    pub fn poly(&self) -> Poly {
        self.f.pow(self.q)
    }

    pub fn degree(&self) -> usize {
        self.f.deg0() * self.q as usize
    }
}

/// A parametrized sequence system: free variables `li` and rows for `ld`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeqSystem {
    pub cfg: KernelConfig,
    pub li: Vec<String>,
    pub rows: Vec<SeqRow>,
}

impl SeqSystem {
    pub fn new(cfg: KernelConfig, li: Vec<String>, rows: Vec<SeqRow>) -> Result<SeqSystem> {
        let s = SeqSystem { cfg, li, rows };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::SeqSystem(m));
        if self.cfg.is_algebraic() && !self.li.is_empty() {
            return bad("algebraic configurations admit no li variables".into());
        }
        let mut names: Vec<&String> = self.li.iter().chain(self.rows.iter().map(|r| &r.var)).collect();
        let total = names.len();
        names.sort();
        names.dedup();
        if names.len() != total {
            return bad("variables must be pairwise distinct".into());
        }
        for r in &self.rows {
            if r.f.field() != self.cfg.field() || !r.f.is_monic() || !is_irreducible(&r.f)? {
                return bad(format!("row {}: {} is not monic irreducible", r.var, r.f));
            }
            if self.li.contains(&r.param) || self.rows.iter().any(|o| o.var == r.param) {
                return bad(format!("row {}: parameter {} clashes with a variable", r.var, r.param));
            }
            let c = self.cfg.value(&r.f);
            if c == ExtNat::Fin(0) || r.q == 0 || ExtNat::Fin(r.q) > c {
                return bad(format!("row {}: need 1 <= q <= C({}) = {c}", r.var, r.f));
            }
        }
        Ok(())
    }

    pub fn vars(&self) -> Vec<String> {
        self.li.iter().cloned().chain(self.rows.iter().map(|r| r.var.clone())).collect()
    }

    pub fn params(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.param.clone()).collect()
    }

    pub fn row_of(&self, var: &str) -> Option<&SeqRow> {
        self.rows.iter().find(|r| r.var == var)
    }
}

/// `(rk, deg)`; compare with the derived lexicographic order on tuples.
pub fn ss_rank_degree(s: &SeqSystem) -> (usize, usize) {
    (s.li.len(), s.rows.iter().map(SeqRow::degree).sum())
}

/// Whether `u_k ∈ Ker(f_k^{C-q_k})` for each row with `0 < C(f_k) < ∞`.
pub fn ss_compatible(s: &SeqSystem, u: &[Vec<u64>], m: &FinModel) -> Result<bool> {
    if u.len() != s.rows.len() {
        return Err(Error::SeqSystem(format!("expected {} parameters, got {}", s.rows.len(), u.len())));
    }
    for (r, v) in s.rows.iter().zip(u) {
        if v.len() != m.dim {
            return Err(Error::SeqSystem("parameter vector has the wrong dimension".into()));
        }
        if let ExtNat::Fin(c) = s.cfg.value(&r.f) {
            let img = m.eval_poly(&r.f.pow(c - r.q)).apply(v);
            if img.iter().any(|&x| x != 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// No placeholder `x_ld^i` with `i ≥ deg(f^q)` occurs.
pub fn ss_bounded_check(psi: &PhFormula, s: &SeqSystem) -> bool {
    psi.atoms().iter().all(|a| {
        a.lhs.keys().chain(a.rhs.keys()).all(|ph| {
            s.row_of(&ph.var).is_none_or(|r| (ph.power as usize) < r.degree())
        })
    })
}

/// Whether every coefficient on an ld variable has degree below its row's.
pub fn endo_bounded(psi: &EndoFormula, s: &SeqSystem) -> bool {
    psi.atoms().iter().all(|a| {
        a.lhs.iter().chain(a.rhs.iter()).all(|(v, c)| {
            s.row_of(v).is_none_or(|r| c.degree().is_none_or(|d| d < r.degree()))
        })
    })
}

fn substitute_term(t: &EndoTerm, s: &SeqSystem) -> EndoTerm {
    let mut out = EndoTerm::zero();
    for (v, c) in t.iter() {
        match s.row_of(v) {
            Some(r) => {
                let (chi, rem) = euclid_div(c, &r.poly()).expect("row polynomial is nonzero");
                out.add_to(v.clone(), rem);
                out.add_to(r.param.clone(), chi);
            }
            None => out.add_to(v.clone(), c.clone()),
        }
    }
    out
}

/// Rewrites `a[θ](x_ld)` as `χ[θ](y) + r[θ](x_ld)` where `a = χ·f^q + r`.
pub fn ss_euclid_substitute(psi: &EndoFormula, s: &SeqSystem) -> EndoFormula {
    psi.map_atoms(&mut |a| {
        let mut b = a.clone();
        b.lhs = substitute_term(&a.lhs, s);
        b.rhs = substitute_term(&a.rhs, s);
        Formula::Atom(b)
    })
}

/// Whether the formula mentions only system variables, parameters and `extra`.
pub fn ss_in_scope(psi: &EndoFormula, s: &SeqSystem, extra: &[String]) -> bool {
    let vars = s.vars();
    let params = s.params();
    psi.free_vars().iter().all(|v| vars.contains(v) || params.contains(v) || extra.contains(v))
}
