//! Command-line front end for `prodset-core`: experiment subcommands, report
//! formats and the acceptance checks behind `prodset selftest`.

pub mod acceptance;
pub mod cli;
pub mod commands;
pub mod error;
pub mod graphfile;
pub mod io;
pub mod parse;
pub mod report;

pub use cli::Cli;
pub use commands::run;
pub use error::CliError;
