#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use endo_core::finmodel::{fm_build, BlockSpec, FinModel, Mat};
use endo_core::kernel::{DefaultValue, ExtNat, KernelConfig};
use endo_core::poly::{irreducible_factors, is_irreducible, FieldSpec, Poly};
use endo_core::rc::{RcElem, RcRing};
use rand::Rng;

pub fn f2() -> FieldSpec {
    FieldSpec::Prime { p: 2 }
}

pub fn p(s: &str) -> Poly {
    Poly::parse(f2(), s).unwrap()
}

pub fn c_mix() -> KernelConfig {
    KernelConfig::transcendental(f2(), DefaultValue::Infinity, [(p("X"), ExtNat::Fin(1)), (p("X+1"), ExtNat::Fin(0))])
        .unwrap()
}

/// The five reference configurations over F_2.
pub fn configs() -> Vec<(&'static str, KernelConfig)> {
    vec![
        ("C_0", KernelConfig::c_zero(f2())),
        ("C_inf", KernelConfig::c_infinity(f2())),
        ("MiPo=X^2+X+1", KernelConfig::algebraic(&p("X^2+X+1")).unwrap()),
        ("MiPo=X^2", KernelConfig::algebraic(&p("X^2")).unwrap()),
        ("C_mix", c_mix()),
    ]
}

// F_2[X] as bit masks: an oracle independent of `Poly`.

pub fn to_bits(f: &Poly) -> u128 {
    f.coeffs().iter().enumerate().fold(0, |acc, (i, c)| if f2().to_u64(c) == 1 { acc | 1 << i } else { acc })
}

pub fn from_bits(b: u128) -> Poly {
    let coeffs: Vec<i64> = (0..128).map(|i| ((b >> i) & 1) as i64).collect();
    Poly::from_ints(f2(), &coeffs)
}

pub fn bdeg(a: u128) -> i32 {
    127 - a.leading_zeros() as i32
}

pub fn bmul(a: u128, b: u128) -> u128 {
    let mut out = 0;
    for i in 0..64 {
        if (b >> i) & 1 == 1 {
            out ^= a << i;
        }
    }
    out
}

pub fn brem(mut a: u128, m: u128) -> u128 {
    let dm = bdeg(m);
    while a != 0 && bdeg(a) >= dm {
        a ^= m << (bdeg(a) - dm);
    }
    a
}

pub fn bmulmod(a: u128, b: u128, m: u128) -> u128 {
    brem(bmul(brem(a, m), brem(b, m)), m)
}

/// Monic irreducibles of degree 1..=3 over F_2.
pub fn small_irreducibles() -> Vec<Poly> {
    (2u128..16).map(from_bits).filter(|f| is_irreducible(f).unwrap()).collect()
}

pub fn rand_poly(rng: &mut impl Rng, max_deg: usize) -> Poly {
    let bits: u128 = rng.gen_range(0..(1u128 << (max_deg + 1)));
    from_bits(bits)
}

pub fn rand_nonzero_poly(rng: &mut impl Rng, max_deg: usize) -> Poly {
    loop {
        let f = rand_poly(rng, max_deg);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Nonzero polynomials admissible under `Inv`: no factor with `C = ∞`, and
/// no degree-3 factor, so that fillers stay invertible.
pub fn rand_invertible_arg(ring: &Arc<RcRing>, rng: &mut impl Rng) -> Option<Poly> {
    let cfg = ring.cfg();
    if cfg.is_algebraic() {
        return Some(rand_nonzero_poly(rng, 3));
    }
    let ok: Vec<Poly> = small_irreducibles().into_iter().filter(|f| f.deg0() < 3 && cfg.value(f) != ExtNat::Inf).collect();
    if ok.is_empty() {
        return None;
    }
    let mut eta = Poly::one(f2());
    for _ in 0..rng.gen_range(0..3) {
        eta = &eta * &ok[rng.gen_range(0..ok.len())];
    }
    Some(eta)
}

/// A random element: a sum of products of generators.
pub fn rand_elem(ring: &Arc<RcRing>, rng: &mut impl Rng) -> RcElem {
    let locals: Vec<Poly> = ring.locals().iter().map(|l| l.f.clone()).collect();
    let mut sum = RcElem::zero(ring);
    for _ in 0..rng.gen_range(1..=3) {
        let mut prod = RcElem::one(ring);
        for _ in 0..rng.gen_range(1..=3) {
            let g = match rng.gen_range(0..4) {
                1 if !locals.is_empty() => {
                    let f = &locals[rng.gen_range(0..locals.len())];
                    if rng.gen_bool(0.5) {
                        RcElem::proj_im(ring, std::slice::from_ref(f)).unwrap()
                    } else {
                        RcElem::proj_ker(ring, std::slice::from_ref(f)).unwrap()
                    }
                }
                2 => match rand_invertible_arg(ring, rng) {
                    Some(eta) => RcElem::inv(ring, &eta).unwrap(),
                    None => RcElem::rho(ring, &rand_poly(rng, 3)),
                },
                _ => RcElem::rho(ring, &rand_poly(rng, 3)),
            };
            prod = &prod * &g;
        }
        sum = &sum + &prod;
    }
    sum
}

/// Block candidates `(f, j)` admissible for `cfg` with `deg(f^j) <= max_dim`.
pub fn block_candidates(cfg: &KernelConfig, max_dim: usize) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    let primes = match cfg.mipo() {
        Ok(m) => irreducible_factors(&m.poly).unwrap(),
        Err(_) => small_irreducibles(),
    };
    for f in primes {
        let cap = match cfg.mipo() {
            Ok(m) => m.poly.valuation(&f).unwrap_or(0),
            Err(_) => match cfg.value(&f) {
                ExtNat::Fin(c) => c,
                ExtNat::Inf => u32::MAX,
            },
        };
        let mut j = 1;
        while j <= cap && f.deg0() * j as usize <= max_dim {
            out.push((f.clone(), j));
            j += 1;
        }
    }
    out
}

/// Every multiset of admissible blocks of total dimension in `1..=max_dim`.
pub fn all_block_lists(cfg: &KernelConfig, max_dim: usize) -> Vec<Vec<BlockSpec>> {
    let cands = block_candidates(cfg, max_dim);
    let mut out = Vec::new();
    fn go(c: &[(Poly, u32)], i: usize, left: usize, cur: &mut Vec<BlockSpec>, out: &mut Vec<Vec<BlockSpec>>) {
        if i == c.len() {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        go(c, i + 1, left, cur, out);
        let d = c[i].0.deg0() * c[i].1 as usize;
        let mut mult = 1;
        while mult * d <= left {
            cur.push(BlockSpec::new(c[i].0.clone(), c[i].1, mult));
            go(c, i + 1, left - mult * d, cur, out);
            cur.pop();
            mult += 1;
        }
    }
    go(&cands, 0, max_dim, &mut Vec::new(), &mut out);
    out
}

/// Declared support of test models: every prime the configuration names.
pub fn support(cfg: &KernelConfig) -> Vec<Poly> {
    cfg.entries().keys().cloned().collect()
}

/// Degree-3 filler irreducibles, used where no ordinary block is admissible.
pub fn fillers() -> Vec<Poly> {
    vec![p("X^3+X+1"), p("X^3+X^2+1")]
}

pub fn build(cfg: &KernelConfig, blocks: &[BlockSpec]) -> FinModel {
    fm_build(cfg, blocks, &support(cfg)).unwrap()
}

/// A random admissible model of dimension at most `max_dim`.
pub fn rand_model(cfg: &KernelConfig, rng: &mut impl Rng, max_dim: usize) -> FinModel {
    let cands = block_candidates(cfg, max_dim);
    if cands.is_empty() {
        let f = fillers()[rng.gen_range(0..2)].clone();
        return build(cfg, &[BlockSpec::filler(f, 1)]);
    }
    let mut blocks: Vec<BlockSpec> = Vec::new();
    let mut left = max_dim;
    loop {
        let fit: Vec<&(Poly, u32)> = cands.iter().filter(|(f, j)| f.deg0() * *j as usize <= left).collect();
        if fit.is_empty() || (!blocks.is_empty() && rng.gen_bool(0.35)) {
            break;
        }
        let (f, j) = fit[rng.gen_range(0..fit.len())];
        left -= f.deg0() * *j as usize;
        blocks.push(BlockSpec::new(f.clone(), *j, 1));
    }
    build(cfg, &blocks)
}

/// A random invertible matrix.
pub fn rand_invertible(rng: &mut impl Rng, n: usize) -> Mat {
    loop {
        let rows: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..2)).collect()).collect();
        let m = Mat::from_rows(2, &rows);
        if m.inverse().is_some() {
            return m;
        }
    }
}

pub fn rand_matrix(rng: &mut impl Rng, n: usize) -> Mat {
    let rows: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..2)).collect()).collect();
    Mat::from_rows(2, &rows)
}

/// `P·A·P^{-1}`.
pub fn conjugate(a: &Mat, q: &Mat) -> Mat {
    q.mul(a).mul(&q.inverse().unwrap())
}

/// All vectors of the span of `rows` over F_2.
pub fn span_set(rows: &[Vec<u64>], n: usize) -> std::collections::BTreeSet<Vec<u64>> {
    let mut out = std::collections::BTreeSet::new();
    out.insert(vec![0; n]);
    for r in rows {
        let more: Vec<Vec<u64>> = out.iter().map(|v| v.iter().zip(r).map(|(a, b)| (a + b) % 2).collect()).collect();
        out.extend(more);
    }
    out
}

pub fn config_map(entries: &[(&str, ExtNat)]) -> BTreeMap<Poly, ExtNat> {
    entries.iter().map(|(f, v)| (p(f), *v)).collect()
}
