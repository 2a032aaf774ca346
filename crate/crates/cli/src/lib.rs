//! File formats, verification suites and the command-line front end for
//! `dioph-core`.

mod cli;
pub mod config;
pub mod numfile;
pub mod output;
pub mod suites;

pub use cli::{run, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};
