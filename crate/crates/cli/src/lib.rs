//! Library surface of the command-line front end, split out so integration
//! tests can drive resolution and rendering without spawning processes.

pub mod args;
pub mod config;
pub mod csv;
pub mod error;
pub mod runner;
pub mod svg;

pub use args::{resolve, Cli, Command, RunSpec};
pub use error::{CliError, Result};
