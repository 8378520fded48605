use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qitx_core::measures::Side;

/// Send an unknown qubit through a correlated two-qubit channel and inspect
/// what came out.
#[derive(Debug, Parser)]
#[command(name = "qitx", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run all four Bell outcomes and reconstruct the input from each.
    Transmit(TransmitArgs),
    /// Tabulate rank, discord, concurrence and reconstruction quality over
    /// Werner channels.
    SweepWerner(SweepArgs),
    /// Quantum discord and concurrence of a channel.
    Discord(DiscordArgs),
    /// Correlation-matrix rank, singular values and pseudo-mixture.
    Rank(ChannelArgs),
    /// Whether the channel yields equiprobable Bell outcomes for every input.
    Security(ChannelArgs),
    /// Finite-shot remote tomography of the input.
    Tomography(TomographyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::A => Side::A,
            SideArg::B => Side::B,
        }
    }
}

#[derive(Debug, Args)]
pub struct TransmitArgs {
    /// One-qubit input state (JSON).
    #[arg(long)]
    pub input_c: PathBuf,
    /// Two-qubit channel (JSON).
    #[arg(long)]
    pub channel: PathBuf,
    /// Output file; stdout when omitted (JSON only).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 21)]
    pub points: usize,
    #[arg(long, default_value_t = 0.0)]
    pub start: f64,
    #[arg(long, default_value_t = 1.0)]
    pub stop: f64,
    /// Input used for the reconstruction column; defaults to c = (0.3, -0.2, 0.4).
    #[arg(long)]
    pub input_c: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DiscordArgs {
    #[arg(long)]
    pub channel: PathBuf,
    /// Qubit that is measured.
    #[arg(long, value_enum, default_value_t = SideArg::A)]
    pub side: SideArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TomographyArgs {
    #[arg(long)]
    pub input_c: PathBuf,
    #[arg(long)]
    pub channel: PathBuf,
    /// Total measurements, split evenly over x, y and z.
    #[arg(long)]
    pub shots: u64,
    #[arg(long)]
    pub seed: u64,
    /// Bell outcome bits, e.g. `01`.
    #[arg(long, default_value = "00")]
    pub outcome: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
