//! Kernel configurations and the reduction of kernel constraints.

pub mod config;
pub mod json;
pub mod reduce;

pub use config::{kc_classify, kc_mipo, kc_validate, DefaultValue, ExtNat, KernelConfig, MiPo, Validation};
pub use reduce::{constraints_from_json, constraints_reduce, constraints_to_json, KernelConstraint, Reduced};
