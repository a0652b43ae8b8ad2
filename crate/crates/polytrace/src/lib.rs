//! File formats, input parsing and the command implementations behind the
//! `polytrace` binary. All numerics live in [`polytrace_core`].

pub mod commands;
pub mod error;
pub mod input;
pub mod output;

pub use error::{CliError, ExitStatus};
pub use polytrace_core as core;
