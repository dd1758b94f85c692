use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use crate::poly::Poly;
use crate::rc::RcElem;

/// Coefficients of linear terms.
pub trait Coeff: Clone + PartialEq + Debug {
    fn is_zero_coeff(&self) -> bool;
    fn add_coeff(&self, other: &Self) -> Self;
    fn mul_coeff(&self, other: &Self) -> Self;
    fn neg_coeff(&self) -> Self;
}

impl Coeff for Poly {
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn add_coeff(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_coeff(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_coeff(&self) -> Self {
        -self
    }
}

impl Coeff for RcElem {
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn add_coeff(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_coeff(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_coeff(&self) -> Self {
        -self
    }
}

/// Placeholder variable `x^i` standing for `θ^i(x)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Placeholder {
    pub var: String,
    pub power: u32,
}

/// A collected linear combination `Σ c_k · k`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Term<K: Ord, C> {
    coeffs: BTreeMap<K, C>,
}

impl<K: Ord + Clone, C: Coeff> Term<K, C> {
    pub fn zero() -> Self {
        Term { coeffs: BTreeMap::new() }
    }

    pub fn single(k: K, c: C) -> Self {
        let mut t = Term::zero();
        t.add_to(k, c);
        t
    }

    pub fn add_to(&mut self, k: K, c: C) {
        let next = match self.coeffs.remove(&k) {
            Some(old) => old.add_coeff(&c),
            None => c,
        };
        if !next.is_zero_coeff() {
            self.coeffs.insert(k, next);
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<K, C> {
        &self.coeffs
    }

    pub fn get(&self, k: &K) -> Option<&C> {
        self.coeffs.get(k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_to(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg_coeff())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiplies every coefficient by `c` (on the left).
    pub fn scale(&self, c: &C) -> Self {
        self.map_coeffs(|a| c.mul_coeff(a))
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Term::zero();
        for (k, c) in &self.coeffs {
            out.add_to(k.clone(), f(c));
        }
        out
    }

    /// Drops the entry for `k`, returning its coefficient.
    pub fn take(&mut self, k: &K) -> Option<C> {
        self.coeffs.remove(k)
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.coeffs.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &C)> {
        self.coeffs.iter()
    }
}

impl<K: Ord + Clone, C: Coeff> FromIterator<(K, C)> for Term<K, C> {
    fn from_iter<I: IntoIterator<Item = (K, C)>>(iter: I) -> Self {
        let mut t = Term::zero();
        for (k, c) in iter {
            t.add_to(k, c);
        }
        t
    }
}

impl<C: Coeff> Term<String, C> {
    /// Replaces variable `v` by `c_v · t` where `c_v` is its coefficient.
    pub fn substitute(&self, v: &str, t: &Term<String, C>) -> Self {
        let mut out = self.clone();
        match out.take(&v.to_string()) {
            Some(c) => out.add(&t.scale(&c)),
            None => out,
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.coeffs.keys().cloned().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rel {
    Eq,
    Ne,
}

impl Rel {
    pub fn negate(self) -> Rel {
        match self {
            Rel::Eq => Rel::Ne,
            Rel::Ne => Rel::Eq,
        }
    }
}

/// `lhs = rhs` or `lhs != rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom<K: Ord, C> {
    pub lhs: Term<K, C>,
    pub rel: Rel,
    pub rhs: Term<K, C>,
}

impl<K: Ord + Clone, C: Coeff> Atom<K, C> {
    pub fn new(lhs: Term<K, C>, rel: Rel, rhs: Term<K, C>) -> Self {
        Atom { lhs, rel, rhs }
    }

    /// `lhs - rhs`, the single-sided form.
    pub fn difference(&self) -> Term<K, C> {
        self.lhs.sub(&self.rhs)
    }

    /// Moves everything to the left: `lhs - rhs ⋈ 0`.
    pub fn normalized(&self) -> Self {
        Atom { lhs: self.difference(), rel: self.rel, rhs: Term::zero() }
    }

    pub fn negated(&self) -> Self {
        Atom { lhs: self.lhs.clone(), rel: self.rel.negate(), rhs: self.rhs.clone() }
    }

    /// Truth value when both sides cancel to a constant.
    pub fn constant_truth(&self) -> Option<bool> {
        let d = self.difference();
        d.is_zero().then_some(self.rel == Rel::Eq)
    }
}

pub type EndoTerm = Term<String, Poly>;
pub type EndoAtom = Atom<String, Poly>;
pub type ModTerm = Term<String, RcElem>;
pub type ModAtom = Atom<String, RcElem>;
pub type PhTerm = Term<Placeholder, Poly>;
pub type PhAtom = Atom<Placeholder, Poly>;

/// First-order formula over atoms `A`; quantifiers bind vector variables.
#[derive(Clone, Debug, PartialEq)]
pub enum Formula<A> {
    True,
    False,
    Atom(A),
    Not(Box<Formula<A>>),
    And(Vec<Formula<A>>),
    Or(Vec<Formula<A>>),
    Exists(String, Box<Formula<A>>),
    Forall(String, Box<Formula<A>>),
}

pub type EndoFormula = Formula<EndoAtom>;
pub type ModFormula = Formula<ModAtom>;
pub type PhFormula = Formula<PhAtom>;

impl<A> Formula<A> {
    pub fn not(f: Formula<A>) -> Formula<A> {
        Formula::Not(Box::new(f))
    }

    pub fn exists(v: impl Into<String>, f: Formula<A>) -> Formula<A> {
        Formula::Exists(v.into(), Box::new(f))
    }

    pub fn forall(v: impl Into<String>, f: Formula<A>) -> Formula<A> {
        Formula::Forall(v.into(), Box::new(f))
    }

    /// Conjunction with trivial simplification of `true`/`false` operands.
    pub fn and_all(parts: Vec<Formula<A>>) -> Formula<A> {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().expect("one"),
            _ => Formula::And(out),
        }
    }

    /// Disjunction with trivial simplification of `true`/`false` operands.
    pub fn or_all(parts: Vec<Formula<A>>) -> Formula<A> {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().expect("one"),
            _ => Formula::Or(out),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(|f| f.is_quantifier_free()),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().map(|f| f.quantifier_depth()).max().unwrap_or(0)
            }
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_depth(),
        }
    }

    pub fn atoms(&self) -> Vec<&A> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| out.push(a));
        out
    }

    fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a A)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => f(a),
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit_atoms(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit_atoms(f)),
        }
    }

    /// Structural map over atoms.
    pub fn map_atoms<B>(&self, f: &mut impl FnMut(&A) -> Formula<B>) -> Formula<B> {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => f(a),
            Formula::Not(g) => Formula::Not(Box::new(g.map_atoms(f))),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Exists(v, g) => Formula::Exists(v.clone(), Box::new(g.map_atoms(f))),
            Formula::Forall(v, g) => Formula::Forall(v.clone(), Box::new(g.map_atoms(f))),
        }
    }

    /// Fallible structural map over atoms.
    pub fn try_map_atoms<B, E>(
        &self,
        f: &mut impl FnMut(&A) -> Result<Formula<B>, E>,
    ) -> Result<Formula<B>, E> {
        Ok(match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => f(a)?,
            Formula::Not(g) => Formula::Not(Box::new(g.try_map_atoms(f)?)),
            Formula::And(gs) => {
                Formula::And(gs.iter().map(|g| g.try_map_atoms(f)).collect::<Result<_, E>>()?)
            }
            Formula::Or(gs) => {
                Formula::Or(gs.iter().map(|g| g.try_map_atoms(f)).collect::<Result<_, E>>()?)
            }
            Formula::Exists(v, g) => Formula::Exists(v.clone(), Box::new(g.try_map_atoms(f)?)),
            Formula::Forall(v, g) => Formula::Forall(v.clone(), Box::new(g.try_map_atoms(f)?)),
        })
    }
}

/// Atoms whose variables can be listed.
pub trait HasVars {
    fn atom_vars(&self) -> BTreeSet<String>;
}

impl<C: Coeff> HasVars for Atom<String, C> {
    fn atom_vars(&self) -> BTreeSet<String> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }
}

impl HasVars for PhAtom {
    fn atom_vars(&self) -> BTreeSet<String> {
        self.lhs.keys().chain(self.rhs.keys()).map(|p| p.var.clone()).collect()
    }
}

impl<A: HasVars> Formula<A> {
    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            Formula::True | Formula::False => BTreeSet::new(),
            Formula::Atom(a) => a.atom_vars(),
            Formula::Not(g) => g.free_vars(),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().flat_map(|g| g.free_vars()).collect(),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let mut s = g.free_vars();
                s.remove(v);
                s
            }
        }
    }

    /// All variables, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        match self {
            Formula::True | Formula::False => BTreeSet::new(),
            Formula::Atom(a) => a.atom_vars(),
            Formula::Not(g) => g.all_vars(),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().flat_map(|g| g.all_vars()).collect(),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let mut s = g.all_vars();
                s.insert(v.clone());
                s
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }
}
