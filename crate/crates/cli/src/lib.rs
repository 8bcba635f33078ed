//! File formats and drivers behind the `pmeanfair` command.
//!
//! - [`format`]: instance JSON.
//! - [`solve`]: run one algorithm and report.
//! - [`verify`]: invariant checks against brute-force oracles.
//! - [`generate`]: instance families.
//! - [`benchmark`]: batch experiments to CSV.

pub mod benchmark;
pub mod error;
pub mod format;
pub mod generate;
pub mod param;
pub mod solve;
pub mod verify;

pub use error::{CliError, Result};
