//! Formulas of the endomorphism language and of the `R_C`-module language.

pub mod ast;
pub mod linear;
pub mod normal;
pub mod placeholder;
pub mod syntax;

pub use ast::{
    Atom, Coeff, EndoAtom, EndoFormula, EndoTerm, Formula, HasVars, ModAtom, ModFormula, ModTerm,
    PhAtom, PhFormula, PhTerm, Placeholder, Rel, Term,
};
pub use linear::{
    endo_atom_to_mod, endo_term_to_mod, endo_to_mod, fml_to_linear_system, mod_to_linear_system,
    LinEq, LinearSystem,
};
pub use normal::{dnf, from_dnf, nnf};
pub use placeholder::{placeholder_abstract, placeholder_expand};
pub use syntax::{parse_formula, parse_term, print_atom, print_formula, EndoLang, Lang, ModLang, PhLang};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::kernel::{DefaultValue, ExtNat, KernelConfig};
    use crate::poly::{FieldSpec, Poly};
    use crate::rc::{RcElem, RcRing};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn endo(s: &str) -> EndoFormula {
        parse_formula(&EndoLang { field: q() }, s).unwrap()
    }

    #[test]
    fn round_trips() {
        let l = EndoLang { field: q() };
        for s in [
            "E x. T(x) = y",
            "x + T^2(x) = 0 & y != 0",
            "A x. E y. (x = y | !(T(y) = 0)) & 1/2*x - T^3(y) != 0",
            "(x = 0 | y = 0) & z = 0",
            "true | false",
        ] {
            let f = endo(s);
            let printed = print_formula(&l, &f);
            assert_eq!(printed, s);
            assert_eq!(endo(&printed), f);
        }
    }

    #[test]
    fn syntax_error_offset() {
        match parse_formula(&EndoLang { field: q() }, "T(x") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn module_language() {
        let cfg = KernelConfig::transcendental(
            FieldSpec::Prime { p: 2 },
            DefaultValue::Infinity,
            [(Poly::parse(FieldSpec::Prime { p: 2 }, "X").unwrap(), ExtNat::Fin(1))],
        )
        .unwrap();
        let l = ModLang { ring: RcRing::new(cfg) };
        for s in ["poly(X)(x) = y", "(poly(X+1) + poly(1)*projker{X})(x) != 0", "E x. x = poly(X+1)*inv(X)(y)"] {
            let f = parse_formula(&l, s).unwrap();
            let printed = print_formula(&l, &f);
            assert_eq!(parse_formula(&l, &printed).unwrap(), f, "{s} -> {printed}");
        }
    }

    #[test]
    fn placeholders() {
        let ph = PhLang { field: q() };
        let psi = parse_formula(&ph, "x + x^1 = 0").unwrap();
        let e = placeholder_expand(q(), &psi);
        assert_eq!(print_formula(&EndoLang { field: q() }, &e), "x + T(x) = 0");
        let (back, _) = placeholder_abstract(q(), &e);
        assert_eq!(back, psi);
        let zero = parse_formula(&ph, "0 = 0").unwrap();
        assert_eq!(placeholder_expand(q(), &zero), endo("0 = 0"));
        let (a, binds) = placeholder_abstract(q(), &endo("T^2(x) = y"));
        assert_eq!(print_formula(&ph, &a), "x^2 = y");
        assert!(binds.contains(&Placeholder { var: "x".into(), power: 2 }));
    }

    #[test]
    fn linear_systems() {
        let ring = RcRing::new(KernelConfig::c_infinity(q()));
        let vars = ["x".to_string()];
        let s = fml_to_linear_system(&endo("T(x) = y"), &ring, &vars).unwrap();
        assert_eq!(s.equations.len(), 1);
        let eq = &s.equations[0];
        assert_eq!(eq.coeffs["x"], RcElem::rho(&ring, &Poly::x(q())));
        assert_eq!(eq.rhs, ModTerm::single("y".into(), RcElem::one(&ring)));
        let s = fml_to_linear_system(&endo("x + T(x) != 0"), &ring, &vars).unwrap();
        assert_eq!(s.disequations[0].coeffs["x"], RcElem::rho(&ring, &Poly::parse(q(), "X+1").unwrap()));
        let s = fml_to_linear_system(&endo("0 = 0"), &ring, &vars).unwrap();
        assert_eq!(s, LinearSystem::default());
        assert!(fml_to_linear_system(&endo("x = 0 | y = 0"), &ring, &vars).is_err());
        let s = fml_to_linear_system(&endo("y = 0 & x = y"), &ring, &vars).unwrap();
        assert_eq!((s.equations.len(), s.residual.len()), (1, 1));
    }

    #[test]
    fn normal_forms() {
        let f = endo("!(x = 0 & (y = 0 | z != 0))");
        let d = dnf(&f);
        assert_eq!(d.len(), 2);
        let g = endo("!(E x. x = y)");
        assert!(matches!(nnf(&g), Formula::Forall(..)));
    }
}
