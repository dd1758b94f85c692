//! Closures `⟨A⟩_C` in finite models, closure types, patterns and exchange.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finmodel::{fm_build, rc_eval_matrix, vector_min_poly, BlockSpec, FinModel, Mat};
use crate::kernel::{ExtNat, KernelConfig};
use crate::poly::{irreducible_factors, FieldSpec, Poly};
use crate::rc::{rc_is_field, RcElem};

/// The `R_C`-submodule generated by a tuple.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureBasis {
    pub generators: Vec<Vec<u64>>,
    /// Reduced row echelon basis of the closure.
    pub basis: Vec<Vec<u64>>,
    /// `θ`-annihilator of each generator (its ideal in `R_C` is generated
    /// by the image of this polynomial).
    pub annihilators: Vec<String>,
}

impl ClosureBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, p: u64, v: &[u64]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Mat::from_rows(p, &rows).rank() == self.basis.len()
    }
}

/// Echelon basis of the smallest `θ`-invariant subspace containing `gens`.
fn krylov(theta: &Mat, gens: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let p = theta.p();
    let n = theta.rows();
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let mut frontier: Vec<Vec<u64>> = gens.to_vec();
    while let Some(v) = frontier.pop() {
        let mut rows = basis.clone();
        rows.push(v.clone());
        if Mat::from_rows(p, &rows).rank() > basis.len() {
            basis.push(v.clone());
            frontier.push(theta.apply(&v));
        }
        if basis.len() == n {
            break;
        }
    }
    if basis.is_empty() {
        return basis;
    }
    let (r, piv) = Mat::from_rows(p, &basis).rref();
    (0..piv.len()).map(|i| (0..n).map(|j| r.get(i, j)).collect()).collect()
}

/// `⟨gens⟩_C`: on a finite image-complete model every element of `R_C` acts
/// as a polynomial in `θ`, so the closure is the `θ`-cyclic span.
pub fn closure_cl_theta(m: &FinModel, gens: &[Vec<u64>]) -> Result<ClosureBasis> {
    for g in gens {
        if g.len() != m.dim {
            return Err(Error::Model(format!("vector of length {} in a model of dimension {}", g.len(), m.dim)));
        }
    }
    let annihilators = gens.iter().map(|g| vector_min_poly(&m.theta, g, m.field).to_string()).collect();
    Ok(ClosureBasis { generators: gens.to_vec(), basis: krylov(&m.theta, gens), annihilators })
}

/// Whether some `R_C`-isomorphism `⟨a⟩_C → ⟨b⟩_C` maps `a` to `b`.
///
/// The diagonal tuple `(a_i, b_i)` generates a submodule of `V_1 ⊕ V_2`
/// projecting onto both closures; the assignment extends to an isomorphism
/// exactly when both projections are injective.
pub fn closure_isomorphic(m1: &FinModel, a: &[Vec<u64>], m2: &FinModel, b: &[Vec<u64>]) -> Result<bool> {
    if m1.cfg != m2.cfg {
        return Err(Error::ConfigMismatch);
    }
    if a.len() != b.len() {
        return Ok(false);
    }
    let p = m1.p();
    let theta = Mat::block_diag(p, &[m1.theta.clone(), m2.theta.clone()]);
    let joint: Vec<Vec<u64>> = a.iter().zip(b).map(|(x, y)| x.iter().chain(y).copied().collect()).collect();
    let d = krylov(&theta, &joint).len();
    Ok(d == closure_cl_theta(m1, a)?.dim() && d == closure_cl_theta(m2, b)?.dim())
}

/// A candidate as a linear combination of parameters and earlier outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Param(usize),
    Prev(usize),
}

pub type Candidate = Vec<(u64, Source)>;

/// All tuples `(y_1, …)` with `y_i = r_i(x_i)` and `x_i` drawn from the
/// `i`-th candidate list, evaluated left to right.
pub fn pattern_eval(pat: &[(RcElem, Vec<Candidate>)], d: &[Vec<u64>], m: &FinModel) -> Result<Vec<Vec<Vec<u64>>>> {
    let p = m.p();
    let mut out: Vec<Vec<Vec<u64>>> = vec![Vec::new()];
    for (r, cands) in pat {
        let mat = rc_eval_matrix(r, m)?;
        let mut next = Vec::new();
        for ys in &out {
            for cand in cands {
                let mut x = vec![0; m.dim];
                for (c, src) in cand {
                    let v = match src {
                        Source::Param(i) => d.get(*i),
                        Source::Prev(i) => ys.get(*i),
                    }
                    .ok_or_else(|| Error::Formula(format!("pattern refers to missing {src:?}")))?;
                    for (xi, vi) in x.iter_mut().zip(v) {
                        *xi = (*xi + c % p * vi) % p;
                    }
                }
                let mut t = ys.clone();
                t.push(mat.apply(&x));
                if !next.contains(&t) {
                    next.push(t);
                }
            }
        }
        out = next;
    }
    Ok(out)
}

/// A finite model with `v ∈ ⟨u⟩_C \ ⟨∅⟩_C` and `u ∉ ⟨v⟩_C`.
#[derive(Clone, Debug)]
pub struct ExchangeWitness {
    pub model: FinModel,
    pub u: Vec<u64>,
    pub v: Vec<u64>,
}

#[derive(Clone, Debug)]
pub enum ExchangeVerdict {
    HasExchange,
    FailsExchange(ExchangeWitness),
}

fn unit(n: usize, i: usize) -> Vec<u64> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

fn small_irreducibles(field: FieldSpec, max_deg: usize) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    for d in 1..=max_deg {
        let p = field.characteristic();
        for idx in 0..p.pow(d as u32) {
            let mut coeffs = Vec::new();
            let mut k = idx;
            for _ in 0..d {
                coeffs.push(field.from_i64((k % p) as i64));
                k /= p;
            }
            coeffs.push(field.one());
            let g = Poly::new(field, coeffs);
            if crate::poly::is_irreducible(&g)? {
                out.push(g);
            }
        }
    }
    Ok(out)
}

/// Exchange holds exactly when `R_C` is a field; otherwise a witness is
/// built from a block where some `f` is a non-unit.
pub fn exchange_diagnose(cfg: &KernelConfig) -> Result<ExchangeVerdict> {
    if rc_is_field(cfg) {
        return Ok(ExchangeVerdict::HasExchange);
    }
    let field = cfg.field();
    let mut primes: Vec<Poly> = cfg.entries().keys().cloned().collect();
    if cfg.is_algebraic() {
        primes = irreducible_factors(&cfg.mipo()?.poly)?;
    } else {
        for g in small_irreducibles(field, 4)? {
            if !primes.contains(&g) {
                primes.push(g);
            }
        }
    }
    let height = |f: &Poly| match cfg.value(f) {
        ExtNat::Inf => 2,
        ExtNat::Fin(c) => c,
    };
    // A chain f^2: u generates the block, v = f(θ)u does not.
    if let Some(f) = primes.iter().find(|f| height(f) >= 2) {
        let m = fm_build(cfg, &[BlockSpec::new(f.clone(), 2, 1)], &[f.clone()])?;
        let u = unit(m.dim, 0);
        let v = m.eval_poly(f).apply(&u);
        return Ok(ExchangeVerdict::FailsExchange(ExchangeWitness { model: m, u, v }));
    }
    // Two coprime pieces: v is the projection of u onto one of them.
    let ones: Vec<&Poly> = primes.iter().filter(|f| height(f) == 1).collect();
    let (f, g) = match ones.as_slice() {
        [f, g, ..] => ((*f).clone(), (*g).clone()),
        [f] if !cfg.is_algebraic() => {
            let g = small_irreducibles(field, 4)?
                .into_iter()
                .find(|g| g != *f && !cfg.entries().contains_key(g))
                .ok_or_else(|| Error::Config("no filler polynomial available".into()))?;
            ((*f).clone(), g)
        }
        _ => return Err(Error::Config("ring is not a field but no witness shape applies".into())),
    };
    let blocks = if cfg.value(&g) == ExtNat::Fin(1) {
        vec![BlockSpec::new(f.clone(), 1, 1), BlockSpec::new(g.clone(), 1, 1)]
    } else {
        vec![BlockSpec::new(f.clone(), 1, 1), BlockSpec::filler(g.clone(), 1)]
    };
    let support = if cfg.value(&g) == ExtNat::Fin(1) { vec![f.clone(), g.clone()] } else { vec![f.clone()] };
    let m = fm_build(cfg, &blocks, &support)?;
    let u: Vec<u64> = (0..m.dim).map(|i| u64::from(i == 0 || i == f.deg0())).collect();
    let v = unit(m.dim, 0);
    Ok(ExchangeVerdict::FailsExchange(ExchangeWitness { model: m, u, v }))
}

/// Independent check of a witness by recomputing both closures.
pub fn check_witness(w: &ExchangeWitness) -> Result<bool> {
    let p = w.model.p();
    let cu = closure_cl_theta(&w.model, &[w.u.clone()])?;
    let cv = closure_cl_theta(&w.model, &[w.v.clone()])?;
    Ok(w.v.iter().any(|&c| c != 0) && cu.contains(p, &w.v) && !cv.contains(p, &w.u))
}
