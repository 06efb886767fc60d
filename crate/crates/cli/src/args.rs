use crate::config::Mode;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "sdwtrack", version, about = "Shadow-wave front tracking for pressureless gas dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one Riemann problem and optionally tabulate a delta-initial wave.
    Riemann(RiemannArgs),
    /// Track a configured run to t_end and write snapshots, events and ledgers.
    Evolve(RunArgs),
    /// Refinement sweep: residuals, 0-SDW distances and errors against the classical solution.
    Converge(RunArgs),
    /// Entropy production along fronts, jumps at events and the total entropy trace.
    Entropy(RunArgs),
}

#[derive(Debug, Args)]
pub struct RiemannArgs {
    /// Left state as RHO,U
    #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
    pub left: Option<(f64, f64)>,
    /// Right state as RHO,U
    #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
    pub right: Option<(f64, f64)>,
    /// Initial strength of a delta-initial wave
    #[arg(long, requires = "c0")]
    pub gamma: Option<f64>,
    /// Initial speed of a delta-initial wave
    #[arg(long, requires = "gamma", allow_hyphen_values = true)]
    pub c0: Option<f64>,
    /// Birth position of the tabulated wave
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x0: f64,
    /// Comma-separated output times for the table
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 1.0, 2.0, 5.0])]
    pub times: Vec<f64>,
    /// Solve N random Riemann problems and check the speed bounds
    #[arg(long, conflicts_with_all = ["left", "right", "gamma"])]
    pub sweep: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the table to DIR instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub mode: Option<Mode>,
}

fn parse_state(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected RHO,U, got {s:?}"))?;
    let p = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("bad number {v:?}"));
    Ok((p(a)?, p(b)?))
}
