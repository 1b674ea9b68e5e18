//! File formats, figure data and the command-line front end for `eofqd-core`.

pub mod cli;
pub mod error;
pub mod figures;
pub mod io;

pub use error::{CliError, Result};
