//! Exact symbolic toolkit for vector spaces with a generic endomorphism
//! constrained by a kernel configuration.

pub mod error;
pub mod finmodel;
pub mod formula;
pub mod kernel;
pub mod rc;
pub mod seqsys;
pub mod poly;
pub mod qe;

pub use error::{Error, Result};
pub use kernel::{ExtNat, KernelConfig};
pub use rc::{RcElem, RcRing};
pub use poly::{Factorization, FieldSpec, Poly, Scalar};
