//! Probabilistic teleportation of one qubit through a non-maximally
//! entangled GHZ channel, using repeated generalized Bell measurements.

pub mod analytic;
pub mod bases;
pub mod error;
pub mod harness;
pub mod maf;
pub mod measure;
pub mod pauli;
pub mod probe;
pub mod protocol;
pub mod state;

pub use error::{Error, Result};
