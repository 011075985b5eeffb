//! Library half of the `bures` binary: argument definitions, command
//! implementations and the output records they print.

pub mod args;
pub mod commands;
pub mod output;

pub use output::{OutputRecord, Payload, SCHEMA_VERSION};
