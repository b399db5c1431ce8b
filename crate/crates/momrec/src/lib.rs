//! File formats, command implementations and the seeded signal generator behind the
//! `momrec` binary.

pub mod commands;
pub mod error;
pub mod json;
pub mod random;
pub mod schema;

pub use error::CliError;
