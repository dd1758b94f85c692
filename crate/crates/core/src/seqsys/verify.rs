use std::collections::BTreeSet;

use super::system::SeqSystem;
use super::transform::Transformed;
use crate::error::{Error, Result};
use crate::finmodel::eval::{add_into, solution_basis, sub_vec, Assignment, Evaluator};
use crate::finmodel::FinModel;
use crate::formula::LinEq;

/// Largest number of scalar unknowns handled by a single verification.
pub const VERIFY_CAP: usize = 4096;

/// Residuals of `f^q(x) - μ` for each row.
fn system_residual(
    ev: &mut Evaluator,
    s: &SeqSystem,
    mu: &[crate::formula::ModTerm],
    env: &Assignment,
) -> Result<Vec<u64>> {
    let p = ev.model.p();
    let mut out = Vec::new();
    for (r, m) in s.rows.iter().zip(mu) {
        let x = env.get(&r.var).ok_or_else(|| Error::Scope(r.var.clone()))?;
        let lhs = ev.poly_matrix(&r.poly()).apply(x);
        out.extend(sub_vec(&lhs, &ev.mod_term(m, env)?, p));
    }
    Ok(out)
}

fn equations_residual(ev: &mut Evaluator, e: &[LinEq], env: &Assignment) -> Result<Vec<u64>> {
    let p = ev.model.p();
    let mut out = Vec::new();
    for eq in e {
        let lhs: crate::formula::ModTerm =
            eq.coeffs.iter().map(|(v, c)| (v.clone(), c.clone())).collect();
        out.extend(sub_vec(&ev.mod_term(&lhs, env)?, &ev.mod_term(&eq.rhs, env)?, p));
    }
    Ok(out)
}

fn conditions_residual(ev: &mut Evaluator, t: &Transformed, env: &Assignment) -> Result<Vec<u64>> {
    let p = ev.model.p();
    let mut out = Vec::new();
    for a in &t.conditions {
        out.extend(sub_vec(&ev.mod_term(&a.lhs, env)?, &ev.mod_term(&a.rhs, env)?, p));
    }
    Ok(out)
}

fn zero(v: &[u64]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Checks both directions of transformability on one model, exactly.
///
/// All conditions are linear in the variables and parameters, so checking a
/// basis of each solution space is equivalent to checking every solution.
pub fn ss_witness_verify(s: &SeqSystem, e: &[LinEq], t: &Transformed, m: &FinModel) -> Result<bool> {
    let p = m.p();
    let mut ev = Evaluator::new(m);
    let mut params: BTreeSet<String> = s.params().into_iter().collect();
    for eq in e {
        params.extend(eq.rhs.keys().cloned());
    }
    for mu in &t.mu {
        params.extend(mu.keys().cloned());
    }
    for a in &t.conditions {
        params.extend(a.lhs.keys().chain(a.rhs.keys()).cloned());
    }
    let params: Vec<String> = params.into_iter().collect();
    let old: Vec<String> = s.vars().into_iter().chain(params.iter().cloned()).collect();
    let new: Vec<String> = t.system.vars().into_iter().chain(params.iter().cloned()).collect();
    if old.len().max(new.len()) * m.dim > VERIFY_CAP {
        return Err(Error::CapExceeded(format!(
            "verification needs more than {VERIFY_CAP} unknowns"
        )));
    }
    let old_mu: Vec<_> = {
        let ring = crate::rc::RcRing::new(s.cfg.clone());
        let one = crate::rc::RcElem::one(&ring);
        s.rows.iter().map(|r| crate::formula::ModTerm::single(r.param.clone(), one.clone())).collect()
    };
    let w = &t.witness;
    let w1 = solution_basis(m, &old, |env| {
        let mut r = system_residual(&mut ev, s, &old_mu, env)?;
        r.extend(equations_residual(&mut ev, e, env)?);
        Ok(r)
    })?;
    for env in &w1 {
        let mut env2: Assignment = params.iter().map(|y| (y.clone(), env[y].clone())).collect();
        for (z, term) in &w.nu {
            env2.insert(z.clone(), ev.mod_term(term, env)?);
        }
        if !zero(&conditions_residual(&mut ev, t, &env2)?)
            || !zero(&system_residual(&mut ev, &t.system, &t.mu, &env2)?)
        {
            return Ok(false);
        }
        for tau in &w.tau {
            let mut x = ev.endo_term(&tau.endo, &env2)?;
            add_into(&mut x, &ev.mod_term(&tau.param, &env2)?, p);
            if env.get(&tau.var) != Some(&x) {
                return Ok(false);
            }
        }
    }
    let w2 = solution_basis(m, &new, |env| {
        let mut r = conditions_residual(&mut ev, t, env)?;
        r.extend(system_residual(&mut ev, &t.system, &t.mu, env)?);
        Ok(r)
    })?;
    for env in &w2 {
        let mut env1: Assignment = params.iter().map(|y| (y.clone(), env[y].clone())).collect();
        for tau in &w.tau {
            let mut x = ev.endo_term(&tau.endo, env)?;
            add_into(&mut x, &ev.mod_term(&tau.param, env)?, p);
            env1.insert(tau.var.clone(), x);
        }
        if !zero(&system_residual(&mut ev, s, &old_mu, &env1)?)
            || !zero(&equations_residual(&mut ev, e, &env1)?)
        {
            return Ok(false);
        }
        for (z, term) in &w.nu {
            if env.get(z) != Some(&ev.mod_term(term, &env1)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
