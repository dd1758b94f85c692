//! Seeded random formulas and the QE-versus-oracle campaign.

use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::eliminate::qe_full;
use crate::error::Result;
use crate::finmodel::oracle::{fm_agreement, OracleOptions, Truth};
use crate::formula::{print_formula, Formula, ModAtom, ModFormula, ModLang, ModTerm, Rel};
use crate::kernel::KernelConfig;
use crate::poly::Poly;
use crate::rc::{Generator, RcElem, RcRing};

#[derive(Clone, Debug)]
pub struct FuzzParams {
    pub max_depth: usize,
    pub vars: usize,
    pub max_literals: usize,
    pub max_degree: usize,
    /// Probability that a literal is a disequation.
    pub ne_bias: f64,
    /// Probability that a coefficient also carries a projection or inverse.
    pub generator_bias: f64,
}

impl Default for FuzzParams {
    fn default() -> Self {
        FuzzParams { max_depth: 3, vars: 4, max_literals: 6, max_degree: 2, ne_bias: 0.5, generator_bias: 0.25 }
    }
}

struct Gen<'a> {
    ring: &'a Arc<RcRing>,
    params: &'a FuzzParams,
    rng: ChaCha8Rng,
    extras: Vec<RcElem>,
}

fn var(i: usize) -> String {
    ["x", "y", "z", "w", "u", "v"].get(i).map_or_else(|| format!("x{i}"), |s| s.to_string())
}

/// Projections and inverses available in the ring, for richer coefficients.
fn extra_generators(ring: &Arc<RcRing>) -> Vec<RcElem> {
    let cfg = ring.cfg();
    let mut gens = Vec::new();
    for f in cfg.entries().keys() {
        gens.push(Generator::ProjIm(vec![f.clone()]));
        gens.push(Generator::ProjKer(vec![f.clone()]));
        gens.push(Generator::Inv(f.clone()));
    }
    gens.iter().filter_map(|g| RcElem::from_generator(ring, g).ok()).filter(|e| !e.is_zero()).collect()
}

impl Gen<'_> {
    fn poly(&mut self) -> Poly {
        let field = self.ring.field();
        let p = field.characteristic();
        loop {
            let d = self.rng.gen_range(0..=self.params.max_degree);
            let coeffs = (0..=d).map(|_| field.from_i64(self.rng.gen_range(0..p) as i64)).collect();
            let g = Poly::new(field, coeffs);
            if !g.is_zero() {
                return g;
            }
        }
    }

    fn coeff(&mut self) -> RcElem {
        let mut c = RcElem::rho(self.ring, &self.poly());
        if !self.extras.is_empty() && self.rng.gen_bool(self.params.generator_bias) {
            let e = self.extras.choose(&mut self.rng).expect("nonempty").clone();
            c = &c * &e;
        }
        c
    }

    fn literal(&mut self, bound: &[String]) -> ModFormula {
        let mut vars: Vec<String> = Vec::new();
        if let Some(last) = bound.last() {
            vars.push(last.clone());
        }
        for _ in 0..self.rng.gen_range(1..=2) {
            let v = if !bound.is_empty() && self.rng.gen_bool(0.5) {
                bound.choose(&mut self.rng).expect("nonempty").clone()
            } else {
                var(self.rng.gen_range(0..self.params.vars))
            };
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let (mut lhs, mut rhs) = (ModTerm::zero(), ModTerm::zero());
        for v in vars {
            let c = self.coeff();
            if self.rng.gen_bool(0.5) {
                lhs.add_to(v, c);
            } else {
                rhs.add_to(v, c);
            }
        }
        let rel = if self.rng.gen_bool(self.params.ne_bias) { Rel::Ne } else { Rel::Eq };
        Formula::Atom(ModAtom::new(lhs, rel, rhs))
    }

    fn formula(&mut self, depth: usize, budget: &mut usize, bound: &mut Vec<String>) -> ModFormula {
        if depth > 0 && self.rng.gen_bool(0.6) {
            let v = var(self.rng.gen_range(0..self.params.vars));
            bound.push(v.clone());
            let body = self.formula(depth - 1, budget, bound);
            bound.pop();
            return if self.rng.gen_bool(0.6) { Formula::exists(v, body) } else { Formula::forall(v, body) };
        }
        if *budget >= 2 && self.rng.gen_bool(0.5) {
            *budget -= 1;
            let a = self.formula(depth, budget, bound);
            let b = self.formula(depth.saturating_sub(1), budget, bound);
            let f = if self.rng.gen_bool(0.5) { Formula::And(vec![a, b]) } else { Formula::Or(vec![a, b]) };
            return if self.rng.gen_bool(0.2) { Formula::not(f) } else { f };
        }
        *budget = budget.saturating_sub(1);
        self.literal(bound)
    }
}

/// Deterministic random formula number `index` of a seeded stream.
pub fn random_formula(ring: &Arc<RcRing>, params: &FuzzParams, seed: u64, index: u64) -> ModFormula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut g = Gen { ring, params, rng, extras: extra_generators(ring) };
    let mut budget = params.max_literals;
    let depth = g.rng.gen_range(1..=params.max_depth);
    g.formula(depth, &mut budget, &mut Vec::new())
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzCase {
    pub index: u64,
    pub formula: String,
    pub result: String,
    pub outcome: Truth,
    pub stabilized_at: Option<usize>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub total: usize,
    pub agree: usize,
    pub disagree: Vec<FuzzCase>,
    pub unknown: Vec<FuzzCase>,
    pub seconds: f64,
}

impl FuzzReport {
    pub fn unknown_rate(&self) -> f64 {
        self.unknown.len() as f64 / self.total.max(1) as f64
    }

    pub fn summary(&self) -> String {
        format!(
            "{}/{} agree, {} disagree, {} unknown ({:.1}s)",
            self.agree,
            self.total,
            self.disagree.len(),
            self.unknown.len(),
            self.seconds
        )
    }
}

/// Runs QE on `count` seeded formulas and compares each with its result on
/// the stabilized model family.
pub fn fuzz_campaign(cfg: &KernelConfig, count: usize, seed: u64, params: &FuzzParams, opts: &OracleOptions) -> Result<FuzzReport> {
    let start = Instant::now();
    let ring = RcRing::new(cfg.clone());
    let cases: Vec<FuzzCase> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let phi = random_formula(&ring, params, seed, i);
            let psi = qe_full(&phi, &ring)?.formula;
            let st = fm_agreement(cfg, &phi, &psi, opts)?;
            let lang = ModLang { ring: ring.clone() };
            Ok(FuzzCase {
                index: i,
                formula: print_formula(&lang, &phi),
                result: print_formula(&lang, &psi),
                outcome: st.truth,
                stabilized_at: st.n,
                note: st.note,
            })
        })
        .collect::<Result<_>>()?;
    let mut report = FuzzReport { total: count, agree: 0, disagree: Vec::new(), unknown: Vec::new(), seconds: 0.0 };
    for c in cases {
        match c.outcome {
            Truth::True => report.agree += 1,
            Truth::False => report.disagree.push(c),
            Truth::Unknown => report.unknown.push(c),
        }
    }
    report.seconds = start.elapsed().as_secs_f64();
    Ok(report)
}
