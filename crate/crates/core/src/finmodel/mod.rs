//! Finite-dimensional `F_p` models used as ground truth.

pub mod decompose;
pub mod definable;
pub mod enumerate;
pub mod eval;
pub mod gf;
pub mod matrix;
pub mod model;
pub mod oracle;

pub use decompose::{fm_decompose, rc_eval_matrix, Decomposition};
pub use matrix::Mat;
pub use model::{fm_build, fm_check, fm_extend, min_poly, vector_min_poly, BlockSpec, CheckReport, FinModel};
