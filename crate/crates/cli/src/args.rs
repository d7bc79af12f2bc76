use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qpa",
    version,
    about = "Privacy amplification of classical-quantum states: quantities, bound checks, exponents"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LogBase {
    Nats,
    Bits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Full,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Built-in state: copy, product, tilted-qubit, bb84[(θ)], depolarized[(p)]
    #[arg(long, conflicts_with = "state")]
    pub preset: Option<String>,
    /// JSON state file
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Use the n-fold tensor power of the state
    #[arg(long, default_value_t = 1)]
    pub power: usize,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file (written atomically); stdout if omitted
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Units for text output; JSON and CSV always carry nats
    #[arg(long, value_enum, default_value = "nats")]
    pub log_base: LogBase,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropies, mutual informations, trace distances and φ at the given orders
    Quantities {
        #[command(flatten)]
        state: StateArgs,
        /// Rényi parameters s ∈ [0, 4]; φ(t) is reported at those in [0, 1/2]
        #[arg(long = "s", value_delimiter = ',', default_values_t = [0.25, 0.5, 1.0])]
        s: Vec<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check the leaked-information bounds for a state and hash family, or the whole corpus
    Verify {
        #[command(flatten)]
        state: StateArgs,
        /// Family descriptor, e.g. toeplitz:q=2,k=4,m=2 (default: the F_2 corpus families)
        #[arg(long)]
        family: Option<String>,
        /// Bound parameters s ∈ (0, 1] (default 0.1, 0.2, …, 1.0)
        #[arg(long = "s", value_delimiter = ',')]
        s: Option<Vec<f64>>,
        /// Run the full verification corpus
        #[arg(long, value_enum, conflicts_with_all = ["preset", "state", "family"])]
        suite: Option<Suite>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Security exponents at the given key rates
    Exponents {
        #[command(flatten)]
        state: StateArgs,
        /// Key rates R ≥ 0 in nats per symbol
        #[arg(long = "r", value_delimiter = ',', required = true)]
        r: Vec<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exponent curve over a uniform grid of key rates (CSV by default)
    Sweep {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 0.0)]
        r_min: f64,
        /// Default: log |A|
        #[arg(long)]
        r_max: Option<f64>,
        /// Number of rows, both endpoints included
        #[arg(long, default_value_t = 21)]
        steps: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Equivocation and minimum leaked-information rates at the given key rates
    Rates {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long = "r", value_delimiter = ',', required = true)]
        r: Vec<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check closed-form values built into the binary
    Selftest {
        #[command(flatten)]
        out: OutputArgs,
    },
}
