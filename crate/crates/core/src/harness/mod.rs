//! Drivers behind the `pqt` binary: sweeps, fidelity tables, single runs
//! and the acceptance suites.

pub mod cli;
pub mod config;
pub mod report;
pub mod sweep;
pub mod verify;
