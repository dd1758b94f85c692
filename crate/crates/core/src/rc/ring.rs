use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{kc_classify, ExtNat, KernelConfig};
use crate::poly::{FieldSpec, Poly, Scalar};

/// A local factor `K[X]/(f^C(f))` of the ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Local {
    pub f: Poly,
    pub c: u32,
    pub modulus: Poly,
}

/// The ring `R_C` of a kernel configuration with its precomputed local data.
///
/// Transcendental: `L × Π K[X]/(f^C(f))` over `f` with `0 < C(f) < ∞`, where
/// `L` is `K[X]` localized at the irreducibles with `C < ∞`.
/// Algebraic: `K[X]/(MiPo(C))`, with locals the prime-power factors of MiPo.
#[derive(Debug)]
pub struct RcRing {
    cfg: KernelConfig,
    locals: Vec<Local>,
    mipo: Option<Poly>,
    idempotents: Vec<Poly>,
}

/// Generators of `R_C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    Rho(Poly),
    ProjIm(Vec<Poly>),
    ProjKer(Vec<Poly>),
    Inv(Poly),
}

/// Normal-form element of `R_C`.
#[derive(Clone, Debug)]
pub struct RcElem {
    ring: Arc<RcRing>,
    num: Poly,
    den: Poly,
    corr: BTreeMap<Poly, Poly>,
}

impl RcRing {
    pub fn new(cfg: KernelConfig) -> Arc<RcRing> {
        let locals: Vec<Local> = cfg
            .finite_positive()
            .into_iter()
            .map(|f| {
                let c = cfg.value(&f).finite().expect("finite");
                let modulus = f.pow(c);
                Local { f, c, modulus }
            })
            .collect();
        let mipo = cfg.mipo().ok().map(|m| m.poly);
        let idempotents = match &mipo {
            Some(m) => locals
                .iter()
                .map(|l| {
                    let co = m.exact_div(&l.modulus);
                    let inv = co.inv_mod(&l.modulus).expect("coprime prime powers");
                    (&co * &inv).rem(m)
                })
                .collect(),
            None => Vec::new(),
        };
        Arc::new(RcRing { cfg, locals, mipo, idempotents })
    }

    pub fn cfg(&self) -> &KernelConfig {
        &self.cfg
    }

    pub fn field(&self) -> FieldSpec {
        self.cfg.field()
    }

    pub fn locals(&self) -> &[Local] {
        &self.locals
    }

    pub fn mipo(&self) -> Option<&Poly> {
        self.mipo.as_ref()
    }

    pub fn is_algebraic(&self) -> bool {
        self.mipo.is_some()
    }

    fn local_index(&self, f: &Poly) -> Option<usize> {
        self.locals.iter().position(|l| &l.f == f)
    }

    /// Field test: `C = C_0`, or `C` algebraic with irreducible MiPo.
    pub fn is_field(&self) -> bool {
        self.cfg.is_c_zero()
            || (self.is_algebraic() && self.locals.len() == 1 && self.locals[0].c == 1)
    }
}

pub fn rc_is_field(cfg: &KernelConfig) -> bool {
    RcRing::new(cfg.clone()).is_field()
}

impl RcElem {
    fn build(ring: &Arc<RcRing>, num: Poly, den: Poly, locals: Vec<Poly>) -> RcElem {
        if let Some(m) = &ring.mipo {
            let mut acc = Poly::zero(ring.field());
            for (e, l) in ring.idempotents.iter().zip(&locals) {
                acc = &acc + &(e * l);
            }
            return RcElem {
                ring: ring.clone(),
                num: acc.rem(m),
                den: Poly::one(ring.field()),
                corr: BTreeMap::new(),
            };
        }
        let field = ring.field();
        let (num, den) = if num.is_zero() {
            (num, Poly::one(field))
        } else {
            let g = num.gcd(&den);
            let (n, d) = (num.exact_div(&g), den.exact_div(&g));
            let lead = field.inv(&d.lead());
            (n.scale(&lead), d.scale(&lead))
        };
        let mut corr = BTreeMap::new();
        for (l, v) in ring.locals.iter().zip(locals) {
            let v = v.rem(&l.modulus);
            if !l.f.divides(&den) {
                let g = num.mul_mod(&den.inv_mod(&l.modulus).expect("coprime"), &l.modulus);
                if g == v {
                    continue;
                }
            }
            corr.insert(l.f.clone(), v);
        }
        RcElem { ring: ring.clone(), num, den, corr }
    }

    fn from_global(ring: &Arc<RcRing>, num: Poly, den: Poly) -> RcElem {
        if let Some(m) = &ring.mipo {
            let inv = den.inv_mod(m).expect("denominator coprime to MiPo");
            let r = num.mul_mod(&inv, m);
            return RcElem {
                ring: ring.clone(),
                num: r,
                den: Poly::one(ring.field()),
                corr: BTreeMap::new(),
            };
        }
        let locals = ring
            .locals
            .iter()
            .map(|l| num.mul_mod(&den.inv_mod(&l.modulus).expect("coprime"), &l.modulus))
            .collect();
        RcElem::build(ring, num, den, locals)
    }

    pub fn zero(ring: &Arc<RcRing>) -> RcElem {
        RcElem::rho(ring, &Poly::zero(ring.field()))
    }

    pub fn one(ring: &Arc<RcRing>) -> RcElem {
        RcElem::rho(ring, &Poly::one(ring.field()))
    }

    pub fn scalar(ring: &Arc<RcRing>, c: Scalar) -> RcElem {
        RcElem::rho(ring, &Poly::constant(ring.field(), c))
    }

    /// `ρ[θ]`.
    pub fn rho(ring: &Arc<RcRing>, p: &Poly) -> RcElem {
        RcElem::from_global(ring, p.clone(), Poly::one(ring.field()))
    }

    fn check_local_set(ring: &Arc<RcRing>, fs: &[Poly]) -> Result<BTreeSet<usize>> {
        let mut idx = BTreeSet::new();
        for f in fs {
            let v = kc_classify(&ring.cfg, f).map_err(|e| Error::Generator(e.to_string()))?;
            match (v, ring.local_index(f)) {
                (ExtNat::Fin(c), Some(i)) if c > 0 => {
                    idx.insert(i);
                }
                _ => {
                    return Err(Error::Generator(format!(
                        "projection at {f} requires 0 < C(f) < inf, got C(f) = {v}"
                    )))
                }
            }
        }
        Ok(idx)
    }

    fn with_locals(&self, locals: Vec<Poly>, num: Poly, den: Poly) -> RcElem {
        RcElem::build(&self.ring, num, den, locals)
    }

    /// `π_{Im(F^C)}`.
    pub fn proj_im(ring: &Arc<RcRing>, fs: &[Poly]) -> Result<RcElem> {
        let idx = RcElem::check_local_set(ring, fs)?;
        let field = ring.field();
        let locals = (0..ring.locals.len())
            .map(|i| if idx.contains(&i) { Poly::zero(field) } else { Poly::one(field) })
            .collect();
        Ok(RcElem::build(ring, Poly::one(field), Poly::one(field), locals))
    }

    /// `π_{Ker(F^C)} = Id − π_{Im(F^C)}`.
    pub fn proj_ker(ring: &Arc<RcRing>, fs: &[Poly]) -> Result<RcElem> {
        Ok(&RcElem::one(ring) - &RcElem::proj_im(ring, fs)?)
    }

    /// The pseudo-inverse `η[θ]^{-1}`.
    pub fn inv(ring: &Arc<RcRing>, eta: &Poly) -> Result<RcElem> {
        let field = ring.field();
        field.check_same(&eta.field())?;
        if eta.is_zero() {
            return Err(Error::Generator("inverse of the zero polynomial".into()));
        }
        if ring.cfg.is_transcendental() && !ring.cfg.infinite_part(eta).is_one() {
            return Err(Error::Generator(format!(
                "inv({eta}): factor {} has C = inf",
                ring.cfg.infinite_part(eta)
            )));
        }
        let locals = ring
            .locals
            .iter()
            .map(|l| {
                if l.f.divides(eta) {
                    Poly::zero(field)
                } else {
                    eta.inv_mod(&l.modulus).expect("coprime")
                }
            })
            .collect();
        if ring.is_algebraic() {
            return Ok(RcElem::build(ring, Poly::zero(field), Poly::one(field), locals));
        }
        Ok(RcElem::build(ring, Poly::one(field), eta.clone(), locals))
    }

    pub fn from_generator(ring: &Arc<RcRing>, gen: &Generator) -> Result<RcElem> {
        match gen {
            Generator::Rho(p) => {
                ring.field().check_same(&p.field())?;
                Ok(RcElem::rho(ring, p))
            }
            Generator::ProjIm(fs) => RcElem::proj_im(ring, fs),
            Generator::ProjKer(fs) => RcElem::proj_ker(ring, fs),
            Generator::Inv(eta) => RcElem::inv(ring, eta),
        }
    }

    /// Builds an element from a global fraction and explicit local components.
    /// `den` must only have factors with `C < ∞`.
    pub fn from_parts(ring: &Arc<RcRing>, num: Poly, den: Poly, locals: Vec<Poly>) -> Result<RcElem> {
        if den.is_zero() || locals.len() != ring.locals.len() {
            return Err(Error::Generator("malformed element components".into()));
        }
        if ring.cfg.is_transcendental() && !ring.cfg.infinite_part(&den).is_one() {
            return Err(Error::Generator("denominator with a factor of C = inf".into()));
        }
        Ok(RcElem::build(ring, num, den, locals))
    }

    pub fn ring(&self) -> &Arc<RcRing> {
        &self.ring
    }

    pub fn cfg(&self) -> &KernelConfig {
        &self.ring.cfg
    }

    /// Global component `num/den` (for algebraic `C`: the residue mod MiPo over 1).
    pub fn global(&self) -> (&Poly, &Poly) {
        (&self.num, &self.den)
    }

    pub fn corrections(&self) -> &BTreeMap<Poly, Poly> {
        &self.corr
    }

    /// Residue in the `i`-th local factor.
    pub fn local(&self, i: usize) -> Poly {
        let l = &self.ring.locals[i];
        if let Some(v) = self.corr.get(&l.f) {
            return v.clone();
        }
        if self.ring.is_algebraic() {
            return self.num.rem(&l.modulus);
        }
        let inv = self.den.inv_mod(&l.modulus).expect("coprime");
        self.num.mul_mod(&inv, &l.modulus)
    }

    pub fn locals(&self) -> Vec<Poly> {
        (0..self.ring.locals.len()).map(|i| self.local(i)).collect()
    }

    pub fn local_at(&self, f: &Poly) -> Option<Poly> {
        self.ring.local_index(f).map(|i| self.local(i))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero() && self.corr.values().all(|v| v.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one() && self.corr.is_empty()
    }

    fn same_ring(&self, other: &RcElem) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring.cfg == other.ring.cfg {
            Ok(())
        } else {
            Err(Error::ConfigMismatch)
        }
    }

    fn combine(&self, other: &RcElem, mul: bool) -> RcElem {
        let ring = &self.ring;
        let locals = ring
            .locals
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let (a, b) = (self.local(i), other.local(i));
                if mul {
                    a.mul_mod(&b, &l.modulus)
                } else {
                    (&a + &b).rem(&l.modulus)
                }
            })
            .collect();
        let (num, den) = if mul {
            (&self.num * &other.num, &self.den * &other.den)
        } else {
            (&(&self.num * &other.den) + &(&other.num * &self.den), &self.den * &other.den)
        };
        match &ring.mipo {
            Some(m) => RcElem {
                ring: ring.clone(),
                num: num.rem(m),
                den: Poly::one(ring.field()),
                corr: BTreeMap::new(),
            },
            None => self.with_locals(locals, num, den),
        }
    }

    pub fn try_add(&self, other: &RcElem) -> Result<RcElem> {
        self.same_ring(other)?;
        Ok(self.combine(other, false))
    }

    pub fn try_mul(&self, other: &RcElem) -> Result<RcElem> {
        self.same_ring(other)?;
        Ok(self.combine(other, true))
    }

    pub fn scale(&self, c: &Scalar) -> RcElem {
        self * &RcElem::scalar(&self.ring, c.clone())
    }

    /// Unit test: every local component is a unit, and (transcendental) the
    /// global part is nonzero with no numerator factor of `C = ∞`.
    pub fn is_unit(&self) -> bool {
        let locals_ok = (0..self.ring.locals.len())
            .all(|i| !self.ring.locals[i].f.divides(&self.local(i)));
        if self.ring.is_algebraic() {
            return locals_ok;
        }
        locals_ok && !self.num.is_zero() && self.ring.cfg.infinite_part(&self.num).is_one()
    }

    pub fn inverse(&self) -> Option<RcElem> {
        if !self.is_unit() {
            return None;
        }
        let locals = self
            .ring
            .locals
            .iter()
            .enumerate()
            .map(|(i, l)| self.local(i).inv_mod(&l.modulus).expect("unit"))
            .collect();
        if self.ring.is_algebraic() {
            let field = self.ring.field();
            return Some(RcElem::build(&self.ring, Poly::zero(field), Poly::one(field), locals));
        }
        Some(self.with_locals(locals, self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: u32) -> RcElem {
        (0..e).fold(RcElem::one(&self.ring), |acc, _| &acc * self)
    }
}

impl PartialEq for RcElem {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other).is_ok()
            && self.num == other.num
            && self.den == other.den
            && self.corr == other.corr
    }
}

impl Eq for RcElem {}

impl PartialOrd for RcElem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order on normal forms (for canonical term ordering).
impl Ord for RcElem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.num, &self.den, &self.corr).cmp(&(&other.num, &other.den, &other.corr))
    }
}

impl std::hash::Hash for RcElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
        for (k, v) in &self.corr {
            k.hash(state);
            v.hash(state);
        }
    }
}

impl Add for &RcElem {
    type Output = RcElem;
    fn add(self, rhs: &RcElem) -> RcElem {
        self.try_add(rhs).expect("ring mismatch")
    }
}

impl Mul for &RcElem {
    type Output = RcElem;
    fn mul(self, rhs: &RcElem) -> RcElem {
        self.try_mul(rhs).expect("ring mismatch")
    }
}

impl Neg for &RcElem {
    type Output = RcElem;
    fn neg(self) -> RcElem {
        let minus = self.ring.field().from_i64(-1);
        self.scale(&minus)
    }
}

impl Sub for &RcElem {
    type Output = RcElem;
    fn sub(self, rhs: &RcElem) -> RcElem {
        self + &(-rhs)
    }
}

/// Ring operation selector for [`rc_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RcOp {
    Add,
    Mul,
}

pub fn rc_from_generator(cfg: &KernelConfig, gen: &Generator) -> Result<RcElem> {
    RcElem::from_generator(&RcRing::new(cfg.clone()), gen)
}

pub fn rc_arith(a: &RcElem, b: &RcElem, op: RcOp) -> Result<RcElem> {
    match op {
        RcOp::Add => a.try_add(b),
        RcOp::Mul => a.try_mul(b),
    }
}

pub fn rc_eq(a: &RcElem, b: &RcElem) -> Result<bool> {
    a.same_ring(b)?;
    Ok(a == b)
}

pub fn rc_is_unit(a: &RcElem) -> bool {
    a.is_unit()
}

impl fmt::Display for RcElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::text::print_elem(self))
    }
}
