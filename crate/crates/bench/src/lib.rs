//! Shared inputs for the benchmarks.

use std::sync::Arc;

use endo_core::finmodel::{fm_build, BlockSpec, FinModel};
use endo_core::formula::ModFormula;
use endo_core::kernel::{DefaultValue, ExtNat};
use endo_core::qe::{random_formula, FuzzParams};
use endo_core::{FieldSpec, KernelConfig, Poly, RcRing};

pub fn f2() -> FieldSpec {
    FieldSpec::Prime { p: 2 }
}

pub fn poly(s: &str) -> Poly {
    Poly::parse(f2(), s).expect("benchmark polynomial")
}

pub fn configs() -> Vec<(&'static str, KernelConfig)> {
    let mix = KernelConfig::transcendental(
        f2(),
        DefaultValue::Infinity,
        [(poly("X"), ExtNat::Fin(1)), (poly("X+1"), ExtNat::Fin(0))],
    )
    .expect("C_mix");
    vec![
        ("c0", KernelConfig::c_zero(f2())),
        ("cinf", KernelConfig::c_infinity(f2())),
        ("mipo_x2x1", KernelConfig::algebraic(&poly("X^2+X+1")).expect("MiPo")),
        ("mipo_x2", KernelConfig::algebraic(&poly("X^2")).expect("MiPo")),
        ("cmix", mix),
    ]
}

/// A fixed batch of fuzz formulas.
pub fn formulas(ring: &Arc<RcRing>, count: u64) -> Vec<ModFormula> {
    (0..count).map(|i| random_formula(ring, &FuzzParams::default(), 1, i)).collect()
}

/// An 8-dimensional model of `C_∞` with mixed block types.
pub fn cinf_model() -> FinModel {
    let blocks = [
        BlockSpec::new(poly("X"), 3, 1),
        BlockSpec::new(poly("X+1"), 1, 1),
        BlockSpec::new(poly("X^2+X+1"), 2, 1),
    ];
    fm_build(&KernelConfig::c_infinity(f2()), &blocks, &[]).expect("model")
}
