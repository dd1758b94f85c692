//! Formula evaluation by exhaustive enumeration.

use super::eval::{add_into, Assignment, Evaluator};
use super::model::FinModel;
use super::oracle::ModelAtom;
use crate::error::{Error, Result};
use crate::formula::{Formula, Rel};

/// Upper bound on visited points, summed over the whole evaluation.
pub const ENUM_CAP: u128 = 1 << 24;

struct Walker<'m> {
    ev: Evaluator<'m>,
    budget: u128,
}

fn vector(p: u64, dim: usize, mut idx: u128) -> Vec<u64> {
    (0..dim)
        .map(|_| {
            let c = (idx % p as u128) as u64;
            idx /= p as u128;
            c
        })
        .collect()
}

impl Walker<'_> {
    fn atom<A: ModelAtom>(&mut self, a: &A, env: &Assignment) -> Result<bool> {
        let p = self.ev.model.p();
        let mut acc = vec![0; self.ev.model.dim];
        for (v, m) in a.matrices(&mut self.ev)? {
            let x = env.get(&v).ok_or_else(|| Error::Scope(format!("unassigned variable {v}")))?;
            add_into(&mut acc, &m.apply(x), p);
        }
        let zero = acc.iter().all(|&c| c == 0);
        Ok(zero == (a.rel() == Rel::Eq))
    }

    fn eval<A: ModelAtom>(&mut self, f: &Formula<A>, env: &mut Assignment) -> Result<bool> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => self.atom(a, env)?,
            Formula::Not(g) => !self.eval(g, env)?,
            Formula::And(gs) => {
                for g in gs {
                    if !self.eval(g, env)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(gs) => {
                for g in gs {
                    if self.eval(g, env)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let want = matches!(f, Formula::Exists(..));
                let (p, dim) = (self.ev.model.p(), self.ev.model.dim);
                let total = (p as u128).pow(dim as u32);
                let saved = env.remove(v);
                let mut found = !want;
                for idx in 0..total {
                    self.spend()?;
                    env.insert(v.clone(), vector(p, dim, idx));
                    if self.eval(g, env)? == want {
                        found = want;
                        break;
                    }
                }
                env.remove(v);
                if let Some(x) = saved {
                    env.insert(v.clone(), x);
                }
                found
            }
        })
    }

    fn spend(&mut self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::CapExceeded("enumeration budget exhausted".into()));
        }
        self.budget -= 1;
        Ok(())
    }
}

/// Truth of `phi` at one assignment.
pub fn fm_eval<A: ModelAtom>(phi: &Formula<A>, m: &FinModel, env: &Assignment) -> Result<bool> {
    let mut w = Walker { ev: Evaluator::new(m), budget: ENUM_CAP };
    w.eval(phi, &mut env.clone())
}

/// Truth table over all assignments of the free variables, in
/// lexicographic order of variable names.
pub fn fm_eval_all<A: ModelAtom>(phi: &Formula<A>, m: &FinModel) -> Result<Vec<(Assignment, bool)>> {
    let free: Vec<String> = phi.free_vars().into_iter().collect();
    let (p, dim) = (m.p(), m.dim);
    let per = (p as u128).pow(dim as u32);
    let total = per
        .checked_pow(free.len() as u32)
        .filter(|&t| t <= ENUM_CAP)
        .ok_or_else(|| Error::CapExceeded("too many assignments".into()))?;
    let mut w = Walker { ev: Evaluator::new(m), budget: ENUM_CAP };
    let mut out = Vec::with_capacity(total as usize);
    for idx in 0..total {
        let mut rest = idx;
        let mut env = Assignment::new();
        for v in free.iter().rev() {
            env.insert(v.clone(), vector(p, dim, rest % per));
            rest /= per;
        }
        let b = w.eval(phi, &mut env)?;
        out.push((env, b));
    }
    Ok(out)
}
