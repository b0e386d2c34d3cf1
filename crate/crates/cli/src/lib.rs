//! Front end for the `selfdual` binary: description files in, reports out.

pub mod commands;
pub mod error;
pub mod input;
pub mod report;

pub use error::{CliError, CliResult};
pub use input::{parse_input, Description};
pub use report::{Record, Report, SCHEMA_VERSION};
