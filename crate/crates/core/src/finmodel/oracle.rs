//! Exact formula evaluation on finite models and the stabilized-truth oracle.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::definable::DefSet;
use super::eval::Evaluator;
use super::gf::{Lin, Sub};
use super::matrix::Mat;
use super::model::{fm_build, BlockSpec, FinModel};
use crate::error::{Error, Result};
use crate::formula::{Atom, Coeff, EndoAtom, Formula, HasVars, ModAtom, Rel};
use crate::kernel::{ExtNat, KernelConfig};
use crate::poly::{irreducible_factors, FieldSpec, Poly};

/// Atoms whose sides are linear maps on a model.
pub trait ModelAtom: HasVars {
    /// `(variable, matrix)` pairs of `lhs - rhs`.
    fn matrices(&self, ev: &mut Evaluator) -> Result<Vec<(String, Mat)>>;
    fn rel(&self) -> Rel;
    /// Polynomial coefficient of each variable in `lhs - rhs`.
    fn row(&self) -> Vec<(String, Poly)>;
    /// Denominators, whose factors must stay invertible on every model.
    fn dens(&self) -> Vec<Poly> {
        Vec::new()
    }
}

fn collect<C: Coeff>(a: &Atom<String, C>, mut mat: impl FnMut(&C) -> Result<Mat>) -> Result<Vec<(String, Mat)>> {
    let mut out = Vec::new();
    for (v, c) in a.difference().iter() {
        out.push((v.clone(), mat(c)?));
    }
    Ok(out)
}

impl ModelAtom for EndoAtom {
    fn matrices(&self, ev: &mut Evaluator) -> Result<Vec<(String, Mat)>> {
        collect(self, |c| Ok(ev.poly_matrix(c).clone()))
    }
    fn rel(&self) -> Rel {
        self.rel
    }
    fn row(&self) -> Vec<(String, Poly)> {
        self.difference().iter().map(|(v, c)| (v.clone(), c.clone())).collect()
    }
}

impl ModelAtom for ModAtom {
    fn matrices(&self, ev: &mut Evaluator) -> Result<Vec<(String, Mat)>> {
        collect(self, |c| ev.elem_matrix(c).cloned())
    }
    fn rel(&self) -> Rel {
        self.rel
    }
    fn row(&self) -> Vec<(String, Poly)> {
        self.difference().iter().map(|(v, c)| (v.clone(), c.global().0.clone())).collect()
    }
    fn dens(&self) -> Vec<Poly> {
        self.lhs.iter().chain(self.rhs.iter()).map(|(_, c)| c.global().1.clone()).collect()
    }
}

/// Evaluation context: a model with one quantifier domain per nesting level.
pub struct Exact<'m> {
    pub ev: Evaluator<'m>,
    /// `domains[k]` constrains variables bound at nesting level `k`
    /// (level 0: free variables); missing levels are unrestricted.
    pub domains: Vec<Sub>,
}

fn too_large(_: super::definable::FamilyTooLarge) -> Error {
    Error::CapExceeded("definable-set family exceeded its size cap".into())
}

impl<'m> Exact<'m> {
    pub fn new(m: &'m FinModel) -> Self {
        Exact { ev: Evaluator::new(m), domains: Vec::new() }
    }

    fn n(&self) -> usize {
        self.ev.model.dim
    }

    fn lin(&self, slots: usize) -> Lin {
        Lin::new(self.ev.model.p(), self.n() * slots)
    }

    /// Domain of level `k` as a subspace of the first block of `lin`.
    fn domain(&self, k: usize, lin: &Lin) -> Option<Sub> {
        let d = self.domains.get(k)?;
        if d.codim() == 0 {
            return None;
        }
        let small = self.lin(1);
        let rows = d.rows.iter().map(|r| {
            let mut v = small.to_values(r);
            v.resize(lin.len, 0);
            lin.from_values(&v)
        });
        Some(Sub::from_rows(lin, rows))
    }

    fn atom<A: ModelAtom>(&mut self, a: &A, scope: &[String]) -> Result<DefSet> {
        let lin = self.lin(scope.len());
        let n = self.n();
        let mats = a.matrices(&mut self.ev)?;
        let mut rows: Vec<Vec<u64>> = vec![vec![0; lin.len]; n];
        for (v, m) in &mats {
            let pos = scope
                .iter()
                .rposition(|s| s == v)
                .ok_or_else(|| Error::Scope(format!("variable {v} is not in scope")))?;
            let off = (scope.len() - 1 - pos) * n;
            for (r, row) in rows.iter_mut().enumerate() {
                for c in 0..n {
                    row[off + c] = (row[off + c] + m.get(r, c)) % lin.p;
                }
            }
        }
        let sub = Sub::from_rows(&lin, rows.iter().map(|r| lin.from_values(r)));
        Ok(DefSet::atom(lin, sub, a.rel() == Rel::Eq))
    }

    /// The set defined by `f` over `scope` (outermost first); `level` is the
    /// nesting level of the innermost scope variable.
    pub fn eval<A: ModelAtom>(&mut self, f: &Formula<A>, scope: &mut Vec<String>, level: usize) -> Result<DefSet> {
        let lin = self.lin(scope.len());
        Ok(match f {
            Formula::True => DefSet::constant(lin, true),
            Formula::False => DefSet::constant(lin, false),
            Formula::Atom(a) => self.atom(a, scope)?,
            Formula::Not(g) => self.eval(g, scope, level)?.negate(),
            Formula::And(gs) | Formula::Or(gs) => {
                let and = matches!(f, Formula::And(_));
                let mut acc = DefSet::constant(lin, and);
                for g in gs {
                    let s = self.eval(g, scope, level)?;
                    acc = if and { acc.combine(&s, |a, b| a && b) } else { acc.combine(&s, |a, b| a || b) }
                        .map_err(too_large)?;
                    if acc.as_constant() == Some(!and) {
                        break;
                    }
                }
                acc
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let universal = matches!(f, Formula::Forall(..));
                scope.push(v.clone());
                let body = self.eval(g, scope, level + 1);
                scope.pop();
                let body = if universal { body?.negate() } else { body? };
                let s = self.project(body, level + 1)?;
                if universal {
                    s.negate()
                } else {
                    s
                }
            }
        })
    }

    /// `∃` over the innermost slot, restricted to the domain of `level`.
    fn project(&self, body: DefSet, level: usize) -> Result<DefSet> {
        let restricted = match self.domain(level, &body.lin) {
            Some(d) => body.combine(&DefSet::atom(body.lin, d, true), |a, b| a && b).map_err(too_large)?,
            None => body,
        };
        restricted.exists(self.n()).map_err(too_large)
    }

    /// Truth of a sentence.
    pub fn sentence<A: ModelAtom>(&mut self, f: &Formula<A>) -> Result<bool> {
        let s = self.eval(f, &mut Vec::new(), 0)?;
        Ok(s.as_constant().expect("sentence evaluates to a constant"))
    }

    /// Whether some assignment of `free` (all from the level-0 domain)
    /// satisfies the set.
    pub fn satisfiable(&self, mut set: DefSet, free: usize) -> Result<bool> {
        for _ in 0..free {
            set = self.project(set, 0)?;
        }
        Ok(set.as_constant().expect("projected to a point"))
    }
}

/// Constraint rows of the image of `g(θ)`.
pub fn image_sub(m: &FinModel, g: &Poly) -> Sub {
    let gm = m.eval_poly(g);
    let n = m.dim;
    let p = m.p();
    let t: Vec<Vec<u64>> = (0..n).map(|c| (0..n).map(|r| gm.get(r, c)).collect()).collect();
    let lin = Lin::new(p, n);
    Sub::from_rows(&lin, Mat::from_rows(p, &t).kernel().iter().map(|w| lin.from_values(w)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    /// Largest block multiplicity tried.
    pub n_cap: usize,
    /// Largest model dimension tried.
    pub dim_cap: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { n_cap: 5, dim_cap: 600 }
    }
}

/// Outcome of a stabilized evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct Stabilized {
    pub truth: Truth,
    /// Multiplicity at which the value was first constant for three steps.
    pub n: Option<usize>,
    /// `values[choice][n - 1]`.
    pub values: [Vec<bool>; 2],
    pub note: Option<String>,
}

/// The growing family of models for a formula with a given polynomial
/// support and quantifier depth.
#[derive(Clone, Debug)]
pub struct ModelFamily {
    pub cfg: KernelConfig,
    pub support: Vec<Poly>,
    pub depth: usize,
    /// Valuation each support prime must resolve (at least 1).
    pub vals: BTreeMap<Poly, u32>,
    /// Largest of `vals`.
    pub exp: usize,
    /// Filler degree `depth + exp + 1`.
    pub bound: usize,
}

fn monic_of_degree(field: FieldSpec, p: u64, d: usize, mut idx: u64) -> Poly {
    let mut coeffs = Vec::with_capacity(d + 1);
    for _ in 0..d {
        coeffs.push(field.from_i64((idx % p) as i64));
        idx /= p;
    }
    coeffs.push(field.one());
    Poly::new(field, coeffs)
}

impl ModelFamily {
    /// `primes` maps each relevant irreducible to the largest valuation
    /// it needs to resolve.
    pub fn new(cfg: &KernelConfig, primes: &BTreeMap<Poly, u32>, depth: usize) -> ModelFamily {
        let mut vals: BTreeMap<Poly, u32> = cfg.entries().keys().map(|f| (f.clone(), 1)).collect();
        if !cfg.is_algebraic() {
            for (f, &v) in primes {
                let e = vals.entry(f.clone()).or_insert(1);
                *e = (*e).max(v);
            }
        }
        let exp = vals.values().copied().max().unwrap_or(1) as usize;
        ModelFamily {
            cfg: cfg.clone(),
            support: vals.keys().cloned().collect(),
            depth,
            vals,
            exp,
            bound: depth + exp + 1,
        }
    }

    /// Height of the truncated block at a prime with `C = ∞`: enough room
    /// for `depth` divisions by `f^v` above the kernel of `f^v`.
    pub fn height(&self, f: &Poly) -> u32 {
        (self.depth as u32 + 1) * self.vals[f]
    }

    /// Family for a formula.
    pub fn for_formula<A: ModelAtom>(cfg: &KernelConfig, f: &Formula<A>) -> Result<ModelFamily> {
        let mut primes = BTreeMap::new();
        formula_primes(f, true, &mut primes)?;
        Ok(ModelFamily::new(cfg, &primes, f.quantifier_depth()))
    }

    fn filler(&self, choice: usize) -> Result<Poly> {
        let field = self.cfg.field();
        let p = field.characteristic();
        let mut found = 0;
        for d in self.bound.. {
            let total = p.checked_pow(d as u32).unwrap_or(u64::MAX);
            for idx in 0..total {
                let g = monic_of_degree(field, p, d, idx);
                if self.support.contains(&g) || !crate::poly::is_irreducible(&g)? {
                    continue;
                }
                if found == choice {
                    return Ok(g);
                }
                found += 1;
            }
        }
        unreachable!("irreducibles exist in every degree")
    }

    pub fn blocks(&self, n: usize, choice: usize) -> Result<Vec<BlockSpec>> {
        let mut out = Vec::new();
        for f in &self.support {
            match self.cfg.value(f) {
                ExtNat::Fin(0) => {}
                ExtNat::Fin(c) => out.push(BlockSpec::new(f.clone(), c, n)),
                ExtNat::Inf => out.push(BlockSpec::new(f.clone(), self.height(f), n)),
            }
        }
        if !self.cfg.is_algebraic() {
            out.push(BlockSpec::filler(self.filler(choice)?, n));
        }
        Ok(out)
    }

    pub fn dim(&self, n: usize, choice: usize) -> Result<usize> {
        Ok(self.blocks(n, choice)?.iter().map(BlockSpec::dim).sum())
    }

    /// Model with multiplicity `n`, plus one domain per nesting level.
    pub fn model(&self, n: usize, choice: usize) -> Result<(FinModel, Vec<Sub>)> {
        let m = fm_build(&self.cfg, &self.blocks(n, choice)?, &self.support)?;
        let field = self.cfg.field();
        let inf: Vec<&Poly> = self.support.iter().filter(|f| self.cfg.value(f).is_inf()).collect();
        let domains = (0..=self.depth)
            .map(|k| {
                let steps = (self.depth - k) as u32;
                let g = inf.iter().fold(Poly::one(field), |acc, f| &acc * &f.pow(steps * self.vals[*f]));
                image_sub(&m, &g)
            })
            .collect();
        Ok((m, domains))
    }

    /// Runs `eval` on the family until its value is constant for three
    /// consecutive multiplicities and both filler choices.
    pub fn stabilize(
        &self,
        opts: &OracleOptions,
        mut eval: impl FnMut(&mut Exact) -> Result<bool>,
    ) -> Result<Stabilized> {
        let choices = if self.cfg.is_algebraic() { 1 } else { 2 };
        let mut values: [Vec<bool>; 2] = [Vec::new(), Vec::new()];
        for n in 1..=opts.n_cap {
            for (c, vals) in values.iter_mut().enumerate().take(choices) {
                if self.dim(n, c)? > opts.dim_cap {
                    return Ok(unknown(values.clone(), format!("dimension cap reached at n = {n}")));
                }
                let (m, domains) = self.model(n, c)?;
                let mut ex = Exact::new(&m);
                ex.domains = domains;
                match eval(&mut ex) {
                    Ok(b) => vals.push(b),
                    Err(Error::CapExceeded(msg)) => return Ok(unknown(values.clone(), msg)),
                    Err(e) => return Err(e),
                }
            }
            if choices == 1 {
                values[1] = values[0].clone();
            }
            if n >= 3 {
                let last: Vec<bool> = values.iter().flat_map(|v| v[n - 3..n].iter().copied()).collect();
                if last.iter().all(|&b| b == last[0]) {
                    return Ok(Stabilized { truth: last[0].into(), n: Some(n - 2), values, note: None });
                }
            }
        }
        Ok(unknown(values, "no stabilization within the multiplicity cap".into()))
    }
}

fn unknown(values: [Vec<bool>; 2], note: String) -> Stabilized {
    Stabilized { truth: Truth::Unknown, n: None, values, note: Some(note) }
}

/// Upper bound on the minors examined for one formula.
pub const MINOR_CAP: usize = 200_000;

fn det(m: &[Vec<Poly>], field: FieldSpec) -> Poly {
    match m.len() {
        0 => Poly::one(field),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Poly::zero(field);
            for j in 0..m.len() {
                if m[0][j].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<Poly>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect()).collect();
                let t = &m[0][j] * &det(&sub, field);
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn note_primes(g: &Poly, primes: &mut BTreeMap<Poly, u32>) -> Result<()> {
    if g.is_zero() || g.deg0() == 0 {
        return Ok(());
    }
    for f in irreducible_factors(g)? {
        let v = g.valuation(&f).unwrap_or(0);
        let e = primes.entry(f).or_insert(0);
        *e = (*e).max(v);
    }
    Ok(())
}

/// Irreducibles that shape the sets a formula defines, with the valuation
/// each must resolve: the factors of every nonzero minor of the coefficient
/// matrix of its atoms (`minors`), or of single coefficients only.
pub fn formula_primes<A: ModelAtom>(f: &Formula<A>, minors: bool, primes: &mut BTreeMap<Poly, u32>) -> Result<()> {
    let vars: Vec<String> = f.all_vars().into_iter().collect();
    let mut rows: Vec<Vec<Poly>> = Vec::new();
    let mut field = None;
    for a in f.atoms() {
        for d in a.dens() {
            note_primes(&d, primes)?;
        }
        let entries = a.row();
        let Some((_, c0)) = entries.first() else { continue };
        let fs = c0.field();
        field = Some(fs);
        let mut r = vec![Poly::zero(fs); vars.len()];
        for (v, c) in entries {
            r[vars.binary_search(&v).expect("atom variable")] = c;
        }
        if !rows.contains(&r) {
            rows.push(r);
        }
    }
    let Some(field) = field else { return Ok(()) };
    if !minors {
        for r in &rows {
            for c in r {
                note_primes(c, primes)?;
            }
        }
        return Ok(());
    }
    let mut budget = MINOR_CAP;
    for k in 1..=vars.len().min(rows.len()) {
        let cols = subsets(vars.len(), k);
        for rs in subsets(rows.len(), k) {
            for cs in &cols {
                budget = budget
                    .checked_sub(1)
                    .ok_or_else(|| Error::CapExceeded("too many minors for the oracle support".into()))?;
                let m: Vec<Vec<Poly>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect()).collect();
                note_primes(&det(&m, field), primes)?;
            }
        }
    }
    Ok(())
}

/// Truth of a sentence in the stabilized model family of `cfg`.
pub fn fm_stabilized_truth<A: ModelAtom>(phi: &Formula<A>, cfg: &KernelConfig, opts: &OracleOptions) -> Result<Stabilized>
{
    if !phi.free_vars().is_empty() {
        return Err(Error::Scope("stabilized truth needs a sentence".into()));
    }
    let fam = ModelFamily::for_formula(cfg, phi)?;
    fam.stabilize(opts, |ex| ex.sentence(phi))
}

/// Whether `phi` and `psi` define the same set on every stabilized model.
/// Both formulas are evaluated on the family of their combined support.
pub fn fm_agreement<A: ModelAtom, B: ModelAtom>(cfg: &KernelConfig, phi: &Formula<A>, psi: &Formula<B>, opts: &OracleOptions) -> Result<Stabilized>
{
    let mut free: BTreeSet<String> = phi.free_vars();
    free.extend(psi.free_vars());
    let free: Vec<String> = free.into_iter().collect();
    let mut primes = BTreeMap::new();
    formula_primes(phi, true, &mut primes)?;
    formula_primes(psi, false, &mut primes)?;
    let depth = phi.quantifier_depth().max(psi.quantifier_depth());
    let fam = ModelFamily::new(cfg, &primes, depth);
    let st = fam.stabilize(opts, |ex| {
        let a = ex.eval(phi, &mut free.clone(), 0)?;
        let b = ex.eval(psi, &mut free.clone(), 0)?;
        let diff = a.combine(&b, |x, y| x != y).map_err(too_large)?;
        Ok(!ex.satisfiable(diff, free.len())?)
    })?;
    Ok(st)
}
