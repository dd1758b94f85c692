//! Exact univariate polynomials over `Q` and `F_p`.

pub mod factor;
pub mod field;
#[allow(clippy::module_inception)]
pub mod poly;
pub mod text;

pub use factor::{
    irreducible_factors, is_irreducible, poly_factor, poly_factor_bounded, Factorization,
    DEFAULT_Q_DEGREE_BOUND,
};
pub use field::{is_prime, FieldSpec, Scalar};
pub use poly::{euclid_div, poly_arith, poly_gcd_bezout, poly_valuation, ArithOp, Poly};
pub use text::parse_scalar;
