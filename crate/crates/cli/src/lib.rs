//! Verification harness for `geoharmonic`: JSON-configured experiments,
//! CSV/JSON result files, and the acceptance suite behind `selftest`.

pub mod acceptance;
pub mod config;
pub mod emit;
pub mod experiments;
pub mod record;
pub mod rng;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("computation failed: {0}")]
    Compute(#[from] geoharmonic::Error),
}

impl HarnessError {
    /// Process exit code: 2 for configuration problems, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Compute(_) => 2,
            HarnessError::Io(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/harness.md")]
struct BookHarness;
