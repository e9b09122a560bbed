//! Linear codes over prime fields, syndrome-decoding algorithms, random-code
//! statistics and asymptotic complexity exponents.

pub mod algebraic_decoders;
pub mod cli;
pub mod codes;
mod enumerate;
pub mod error;
pub mod exponents;
pub mod generic_decoders;
pub mod gf_linalg;
pub mod instances;
pub mod randcode_stats;
pub mod reductions;
pub mod rng;
#[cfg(test)]
mod testkit;

pub use error::{Error, Result};
