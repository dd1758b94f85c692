use std::collections::BTreeMap;

use serde::Serialize;

use super::ring::RcElem;
use crate::poly::{poly_factor, Poly};

/// Kernel shape of an element in existentially closed models.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelDescriptor {
    /// `s_f = min(v_f(local), C(f))` for every local factor.
    pub local: BTreeMap<String, u32>,
    /// Irreducibles with `C = ∞` dividing the global numerator.
    pub infinite_type: Vec<String>,
    /// The global component is zero (transcendental `C` only).
    pub generic_zero: bool,
    pub injective_on_ec: bool,
    pub kernel_infinite_on_ec: bool,
}

/// Local kernel exponents `s_f`, in the ring's local order.
pub fn local_exponents(a: &RcElem) -> Vec<u32> {
    a.ring()
        .locals()
        .iter()
        .enumerate()
        .map(|(i, l)| a.local(i).valuation(&l.f).map_or(l.c, |v| v.min(l.c)))
        .collect()
}

/// Factors of the global numerator with `C = ∞` (the unfactorable remainder
/// is reported whole).
pub fn infinite_factors(a: &RcElem) -> Vec<Poly> {
    let (num, _) = a.global();
    if a.ring().is_algebraic() || num.is_zero() {
        return Vec::new();
    }
    let part = a.cfg().infinite_part(num);
    if part.is_one() {
        return Vec::new();
    }
    match poly_factor(&part) {
        Ok(fac) => fac.factors.into_keys().collect(),
        Err(_) => vec![part],
    }
}

pub fn rc_kernel_descriptor(a: &RcElem) -> KernelDescriptor {
    let s = local_exponents(a);
    let local: BTreeMap<String, u32> = a
        .ring()
        .locals()
        .iter()
        .zip(&s)
        .map(|(l, &v)| (l.f.to_string(), v))
        .collect();
    let inf = infinite_factors(a);
    let generic_zero = !a.ring().is_algebraic() && a.global().0.is_zero();
    let injective = s.iter().all(|&v| v == 0) && inf.is_empty() && !generic_zero;
    KernelDescriptor {
        local,
        infinite_type: inf.iter().map(|p| p.to_string()).collect(),
        generic_zero,
        injective_on_ec: injective,
        kernel_infinite_on_ec: !injective,
    }
}
