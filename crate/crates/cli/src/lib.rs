#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Command-line driver for the shadow-wave front tracker.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use error::{CliError, Result};

use args::{Cli, Command};
use std::io::Write;

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Riemann(a) => commands::riemann(a, out),
        Command::Evolve(a) => commands::evolve(&commands::prepare(a)?, out),
        Command::Converge(a) => commands::converge(&commands::prepare(a)?, out),
        Command::Entropy(a) => commands::entropy(&commands::prepare(a)?, out),
    }
}
