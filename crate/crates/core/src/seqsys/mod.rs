//! Parametrized sequence systems and the transformation engine.

pub mod smith;
pub mod system;
pub mod text;
pub mod transform;
pub mod verify;

pub use smith::{diagonalize, Diagonalization};
pub use system::{
    endo_bounded, ss_bounded_check, ss_compatible, ss_euclid_substitute, ss_rank_degree, SeqRow,
    SeqSystem,
};
pub use transform::{ss_transform, TauEntry, TransformWitness, Transformed};
pub use verify::ss_witness_verify;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finmodel::{fm_build, BlockSpec, FinModel};
    use crate::formula::{parse_formula, print_formula, EndoLang, LinEq, ModTerm, PhLang};
    use crate::kernel::{DefaultValue, ExtNat, KernelConfig};
    use crate::poly::{FieldSpec, Poly};
    use crate::rc::{RcElem, RcRing};
    use std::collections::BTreeMap;

    fn f2() -> FieldSpec {
        FieldSpec::Prime { p: 2 }
    }

    fn p(s: &str) -> Poly {
        Poly::parse(f2(), s).unwrap()
    }

    fn eq(ring: &std::sync::Arc<RcRing>, coeffs: &[(&str, &str)], rhs: &[&str]) -> LinEq {
        LinEq {
            coeffs: coeffs.iter().map(|(v, c)| (v.to_string(), RcElem::rho(ring, &p(c)))).collect::<BTreeMap<_, _>>(),
            rhs: rhs.iter().map(|v| (v.to_string(), RcElem::one(ring))).collect::<ModTerm>(),
        }
    }

    #[test]
    fn rank_degree_and_text() {
        let cinf = KernelConfig::c_infinity(f2());
        let s = SeqSystem::parse(&cinf, "S: (X^2+X+1)^1 [x1] = y1").unwrap();
        assert_eq!(ss_rank_degree(&s), (0, 2));
        let s = SeqSystem::parse(&cinf, "S: li: x2, x3").unwrap();
        assert_eq!(ss_rank_degree(&s), (2, 0));
        let s = SeqSystem::parse(&cinf, "S: (X)^2 [a] = y1; (X+1)^1 [b] = y2; li: c").unwrap();
        assert_eq!(ss_rank_degree(&s), (1, 3));
        assert_eq!(s.to_string(), "S: (X)^2 [a] = y1; (X+1)^1 [b] = y2; li: c");
        assert_eq!(SeqSystem::from_json(&cinf, &s.to_json()).unwrap(), s);
        let alg = KernelConfig::algebraic(&p("X^2")).unwrap();
        assert!(SeqSystem::parse(&alg, "S: li: x").is_err());
        assert!(SeqSystem::parse(&alg, "S: (X)^3 [x] = y").is_err());
    }

    #[test]
    fn compatibility() {
        let cfg = KernelConfig::transcendental(f2(), DefaultValue::Infinity, [(p("X"), ExtNat::Fin(2))]).unwrap();
        let m = fm_build(&cfg, &[BlockSpec::new(p("X"), 2, 2)], &[p("X")]).unwrap();
        assert_eq!(m.dim, 4);
        let s = SeqSystem::parse(&cfg, "S: (X)^1 [x] = y").unwrap();
        assert!(ss_compatible(&s, &[vec![0; 4]], &m).unwrap());
        assert!(!ss_compatible(&s, &[vec![1, 0, 0, 0]], &m).unwrap());
        assert!(ss_compatible(&s, &[vec![0, 1, 0, 0]], &m).unwrap());
        let s = SeqSystem::parse(&cfg, "S: (X+1)^3 [x] = y").unwrap();
        assert!(ss_compatible(&s, &[vec![1, 1, 1, 1]], &m).unwrap());
        assert!(ss_compatible(&s, &[], &m).is_err());
    }

    #[test]
    fn bounded_and_euclid() {
        let cinf = KernelConfig::c_infinity(f2());
        let s = SeqSystem::parse(&cinf, "S: (X^2+X+1)^1 [x] = y").unwrap();
        let ph = PhLang { field: f2() };
        assert!(!ss_bounded_check(&parse_formula(&ph, "x^2 = z").unwrap(), &s));
        assert!(ss_bounded_check(&parse_formula(&ph, "x + x^1 = z").unwrap(), &s));
        assert!(ss_bounded_check(&parse_formula(&ph, "z^5 = 0").unwrap(), &s));
        let l = EndoLang { field: f2() };
        let sub = ss_euclid_substitute(&parse_formula(&l, "T^2(x) = z").unwrap(), &s);
        assert_eq!(print_formula(&l, &sub), "x + T(x) + y = z");
        let sub = ss_euclid_substitute(&parse_formula(&l, "T(x) = z").unwrap(), &s);
        assert_eq!(print_formula(&l, &sub), "T(x) = z");
        let s = SeqSystem::parse(&cinf, "S: (X)^1 [x] = y").unwrap();
        let sub = ss_euclid_substitute(&parse_formula(&l, "T^3(x) = z").unwrap(), &s);
        assert_eq!(print_formula(&l, &sub), "T^2(y) = z");
    }

    fn check(s: &SeqSystem, e: &[LinEq], models: &[FinModel]) -> Transformed {
        let t = ss_transform(s, e).unwrap();
        for m in models {
            assert!(ss_witness_verify(s, e, &t, m).unwrap(), "{} with {:?}", t.system, m.blocks);
        }
        t
    }

    #[test]
    fn transform_examples() {
        let cinf = KernelConfig::c_infinity(f2());
        let ring = RcRing::new(cinf.clone());
        let models: Vec<FinModel> = [
            vec![BlockSpec::new(p("X"), 2, 1), BlockSpec::new(p("X+1"), 1, 2)],
            vec![BlockSpec::new(p("X"), 1, 3), BlockSpec::new(p("X^2+X+1"), 1, 1)],
        ]
        .iter()
        .map(|b| fm_build(&cinf, b, &[]).unwrap())
        .collect();
        let s = SeqSystem::parse(&cinf, "S: li: x").unwrap();
        let t = check(&s, &[], &models);
        assert_eq!(t.system, s);
        let e = [eq(&ring, &[("x", "X")], &[])];
        let t = check(&s, &e, &models);
        assert_eq!(t.measure(), (0, 1));
        let s = SeqSystem::parse(&cinf, "S: (X)^2 [x] = y").unwrap();
        let e = [eq(&ring, &[("x", "X")], &[])];
        let t = check(&s, &e, &models);
        assert_eq!(t.measure(), (0, 1));
        assert_eq!(t.conditions.len(), 1);
    }

    #[test]
    fn transform_mixed_and_algebraic() {
        let cmix = KernelConfig::transcendental(
            f2(),
            DefaultValue::Infinity,
            [(p("X"), ExtNat::Fin(1)), (p("X+1"), ExtNat::Fin(0))],
        )
        .unwrap();
        let ring = RcRing::new(cmix.clone());
        let m = fm_build(
            &cmix,
            &[BlockSpec::new(p("X"), 1, 2), BlockSpec::new(p("X^2+X+1"), 1, 1)],
            &[p("X"), p("X+1")],
        )
        .unwrap();
        let s = SeqSystem::parse(&cmix, "S: li: a, b").unwrap();
        let e = [eq(&ring, &[("a", "X^3+X"), ("b", "X^2")], &["y"]), eq(&ring, &[("b", "X+1")], &["z"])];
        let t = check(&s, &e, &[m]);
        assert!(t.measure() < ss_rank_degree(&s));
        let alg = KernelConfig::algebraic(&p("X^3+X^2")).unwrap();
        let ring = RcRing::new(alg.clone());
        let models: Vec<FinModel> = [vec![BlockSpec::new(p("X"), 2, 2), BlockSpec::new(p("X+1"), 1, 1)]]
            .iter()
            .map(|b| fm_build(&alg, b, &[]).unwrap())
            .collect();
        let s = SeqSystem::parse(&alg, "S: (X)^2 [a] = y1; (X+1)^1 [b] = y2").unwrap();
        let e = [eq(&ring, &[("a", "X"), ("b", "1")], &["z"])];
        let t = check(&s, &e, &models);
        assert!(t.measure() < ss_rank_degree(&s));
    }

    #[test]
    fn corrupted_witness_fails() {
        let cinf = KernelConfig::c_infinity(f2());
        let ring = RcRing::new(cinf.clone());
        let m = fm_build(&cinf, &[BlockSpec::new(p("X"), 2, 1), BlockSpec::new(p("X+1"), 1, 2)], &[]).unwrap();
        let s = SeqSystem::parse(&cinf, "S: li: x").unwrap();
        let e = [eq(&ring, &[("x", "X^2+X")], &["y"])];
        let mut t = ss_transform(&s, &e).unwrap();
        assert!(ss_witness_verify(&s, &e, &t, &m).unwrap());
        t.witness.nu[0].1 = ModTerm::zero();
        assert!(!ss_witness_verify(&s, &e, &t, &m).unwrap());
    }
}
