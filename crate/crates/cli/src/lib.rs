//! Command-line front end for `parsum`: problem files, expression parsing
//! and the subcommands.

pub mod commands;
pub mod parse;
pub mod problem;

pub use commands::run;
