use std::collections::{BTreeMap, HashMap};

use super::decompose::rc_eval_matrix;
use super::matrix::Mat;
use super::model::FinModel;
use crate::error::{Error, Result};
use crate::formula::{EndoTerm, ModTerm};
use crate::poly::Poly;
use crate::rc::RcElem;

/// Variable assignment: name to coordinate vector.
pub type Assignment = BTreeMap<String, Vec<u64>>;

/// Evaluates terms on a model, caching element matrices.
pub struct Evaluator<'m> {
    pub model: &'m FinModel,
    elems: HashMap<RcElem, Mat>,
    polys: HashMap<Poly, Mat>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m FinModel) -> Self {
        Evaluator { model, elems: HashMap::new(), polys: HashMap::new() }
    }

    pub fn elem_matrix(&mut self, a: &RcElem) -> Result<&Mat> {
        if !self.elems.contains_key(a) {
            let m = rc_eval_matrix(a, self.model)?;
            self.elems.insert(a.clone(), m);
        }
        Ok(&self.elems[a])
    }

    pub fn poly_matrix(&mut self, f: &Poly) -> &Mat {
        let model = self.model;
        self.polys.entry(f.clone()).or_insert_with(|| model.eval_poly(f))
    }

    fn zero(&self) -> Vec<u64> {
        vec![0; self.model.dim]
    }

    fn lookup<'a>(&self, v: &str, env: &'a Assignment) -> Result<&'a Vec<u64>> {
        env.get(v).ok_or_else(|| Error::Scope(format!("unassigned variable {v}")))
    }

    pub fn mod_term(&mut self, t: &ModTerm, env: &Assignment) -> Result<Vec<u64>> {
        let p = self.model.p();
        let mut acc = self.zero();
        for (v, c) in t.iter() {
            let x = self.lookup(v, env)?;
            let y = self.elem_matrix(c)?.apply(x);
            add_into(&mut acc, &y, p);
        }
        Ok(acc)
    }

    pub fn endo_term(&mut self, t: &EndoTerm, env: &Assignment) -> Result<Vec<u64>> {
        let p = self.model.p();
        let mut acc = self.zero();
        for (v, c) in t.iter() {
            let x = self.lookup(v, env)?;
            let y = self.poly_matrix(c).apply(x);
            add_into(&mut acc, &y, p);
        }
        Ok(acc)
    }
}

pub fn add_into(acc: &mut [u64], y: &[u64], p: u64) {
    for (a, b) in acc.iter_mut().zip(y) {
        *a = (*a + b) % p;
    }
}

pub fn sub_vec(x: &[u64], y: &[u64], p: u64) -> Vec<u64> {
    x.iter().zip(y).map(|(a, b)| (a + p - b) % p).collect()
}

/// Basis of the assignments to `slots` on which the linear map `residual`
/// vanishes. `residual` must be linear in the assignment.
pub fn solution_basis(
    m: &FinModel,
    slots: &[String],
    mut residual: impl FnMut(&Assignment) -> Result<Vec<u64>>,
) -> Result<Vec<Assignment>> {
    let n = m.dim;
    let p = m.p();
    let unit = |k: usize| -> Assignment {
        slots
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut v = vec![0; n];
                if i == k / n {
                    v[k % n] = 1;
                }
                (s.clone(), v)
            })
            .collect()
    };
    let mut cols = Vec::new();
    for k in 0..slots.len() * n {
        cols.push(residual(&unit(k))?);
    }
    let rows = cols.first().map_or(0, |c| c.len());
    let basis = if rows == 0 {
        Mat::identity(p, slots.len() * n).image()
    } else {
        Mat::from_cols(p, rows, &cols).kernel()
    };
    Ok(basis
        .into_iter()
        .map(|w| slots.iter().enumerate().map(|(i, s)| (s.clone(), w[i * n..(i + 1) * n].to_vec())).collect())
        .collect())
}
