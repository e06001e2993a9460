//! Command implementations behind the `geoquant` binary.
//!
//! Each command is an ordinary function returning a [`CliError`] on failure,
//! so the binary only has to parse arguments and map errors to exit codes.

#![forbid(unsafe_code)]

pub mod commands;
pub mod io;
pub mod report;
pub mod verify;

mod error;

pub use error::CliError;
pub use report::{Failure, VerificationReport};
pub use verify::{run_verify, Suite, VerifyConfig};
