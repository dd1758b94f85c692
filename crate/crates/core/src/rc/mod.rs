//! The ring `R_C` of definable endomorphisms.

pub mod descriptor;
pub mod ring;
pub mod text;

pub use descriptor::{infinite_factors, local_exponents, rc_kernel_descriptor, KernelDescriptor};
pub use ring::{
    rc_arith, rc_eq, rc_from_generator, rc_is_field, rc_is_unit, Generator, Local, RcElem, RcOp,
    RcRing,
};
