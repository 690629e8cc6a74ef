//! Command-line front end: JSON space documents, analysis reports and the
//! verification corpus behind the `gptlab` binary.

pub mod document;
pub mod error;
pub mod report;
pub mod verify;

pub use document::{Generator, SpaceDocument};
pub use error::{CliError, Result};
