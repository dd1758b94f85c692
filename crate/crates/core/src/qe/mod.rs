//! Quantifier elimination, closures and exchange.

pub mod closure;
pub mod eliminate;
pub mod fuzz;

pub use closure::{
    check_witness, closure_cl_theta, closure_isomorphic, exchange_diagnose, pattern_eval, Candidate, ClosureBasis,
    ExchangeVerdict, ExchangeWitness, Source,
};
pub use eliminate::{qe_decide_sentence, qe_eliminate_one, qe_full, qe_full_endo, QfResult, Step};
pub use fuzz::{fuzz_campaign, random_formula, FuzzCase, FuzzParams, FuzzReport};
