use super::matrix::Mat;
use super::model::FinModel;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rc::RcElem;

/// `V = Im(F^C) ⊕ ⊕_f Ker(f^C)` with its projection matrices.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub im_basis: Vec<Vec<u64>>,
    pub ker_bases: Vec<(Poly, Vec<Vec<u64>>)>,
    pub proj_im: Mat,
    pub proj_ker: Vec<(Poly, Mat)>,
}

pub fn fm_decompose(m: &FinModel, fs: &[Poly]) -> Result<Decomposition> {
    let p = m.p();
    let n = m.dim;
    let mut total = Poly::one(m.field);
    let mut ker_bases = Vec::new();
    for f in fs {
        let c = m.cfg.value(f).finite().filter(|&c| c > 0).ok_or_else(|| {
            Error::Model(format!("decomposition at {f} requires 0 < C(f) < inf"))
        })?;
        let fc = f.pow(c);
        total = &total * &fc;
        ker_bases.push((f.clone(), m.eval_poly(&fc).kernel()));
    }
    let im_basis = m.eval_poly(&total).image();
    let mut cols = im_basis.clone();
    for (_, kb) in &ker_bases {
        cols.extend(kb.iter().cloned());
    }
    let basis = Mat::from_cols(p, n, &cols);
    let inv = (cols.len() == n)
        .then(|| basis.inverse())
        .flatten()
        .ok_or_else(|| Error::Model("model is not image-complete for the requested factors".into()))?;
    let selector = |from: usize, len: usize| {
        let mut d = Mat::zeros(p, n, n);
        for i in from..from + len {
            d.set(i, i, 1);
        }
        basis.mul(&d).mul(&inv)
    };
    let proj_im = selector(0, im_basis.len());
    let mut off = im_basis.len();
    let mut proj_ker = Vec::new();
    for (f, kb) in &ker_bases {
        proj_ker.push((f.clone(), selector(off, kb.len())));
        off += kb.len();
    }
    Ok(Decomposition { im_basis, ker_bases, proj_im, proj_ker })
}

/// The matrix of an element of `R_C` acting on a model.
pub fn rc_eval_matrix(a: &RcElem, m: &FinModel) -> Result<Mat> {
    if a.cfg() != &m.cfg {
        return Err(Error::ConfigMismatch);
    }
    let ring = a.ring();
    if let Some(mp) = ring.mipo() {
        if !m.eval_poly(mp).is_zero() {
            return Err(Error::Model("MiPo(C) does not vanish on the model".into()));
        }
        return Ok(m.eval_poly(a.global().0));
    }
    let fs: Vec<Poly> = ring.locals().iter().map(|l| l.f.clone()).collect();
    let d = fm_decompose(m, &fs)?;
    let (num, den) = a.global();
    let mut ker_total = Mat::zeros(m.p(), m.dim, m.dim);
    for (_, pk) in &d.proj_ker {
        ker_total = ker_total.add(pk);
    }
    let q = m.eval_poly(den).mul(&d.proj_im).add(&ker_total);
    let q_inv = q
        .inverse()
        .ok_or_else(|| Error::Model(format!("denominator {den} is not invertible on the image part")))?;
    let mut out = m.eval_poly(num).mul(&q_inv).mul(&d.proj_im);
    for (i, (_, pk)) in d.proj_ker.iter().enumerate() {
        out = out.add(&m.eval_poly(&a.local(i)).mul(pk));
    }
    Ok(out)
}
