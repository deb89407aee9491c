//! Command-line surface and the validated run configuration.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed};
use serde::Serialize;
use symord_core::rational;
use symord_core::Rational;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "symord", version)]
#[command(about = "Exact checks for symmetric orderings in the completed Weyl algebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Symmetrized generator products on the vacuum against k! x_{α_1}...x_{α_k}
    VerifyTheorem(CommonArgs),
    /// Homomorphism defect of the Bernoulli embedding for a structure-constants file
    VerifyIota(CommonArgs),
    /// Cancellation sum of the induction step on random families and words
    Cancellation(CommonArgs),
    /// Rank of degree-k word products against the symmetric dimension
    SpanDim(CommonArgs),
    /// Bernoulli numbers B_0..B_{n-max}
    Bernoulli(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Ambient dimension
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Word length
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Highest order N of the coefficient family (largest index for bernoulli)
    #[arg(long = "n-max", default_value_t = 2)]
    pub n_max: u32,
    /// Truncation order; defaults per command
    #[arg(long)]
    pub d: Option<u32>,
    /// Number of seeded trials
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Base seed; trial t uses seed + t
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Structure-constants file (JSON)
    #[arg(long = "sc")]
    pub sc_path: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Probability that a coefficient is nonzero, as a rational in [0, 1]
    #[arg(long, default_value = "1/2")]
    pub sparsity: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyTheorem,
    VerifyIota,
    Cancellation,
    SpanDim,
    Bernoulli,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::VerifyTheorem => "verify-theorem",
            Command::VerifyIota => "verify-iota",
            Command::Cancellation => "cancellation",
            Command::SpanDim => "span-dim",
            Command::Bernoulli => "bernoulli",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub k: usize,
    pub n_max: u32,
    pub d: Option<u32>,
    pub trials: usize,
    pub seed: u64,
    pub sc_path: Option<PathBuf>,
    pub output: OutputFormat,
    pub sparsity: Rational,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let (command, args) = match cli.command {
            CliCommand::VerifyTheorem(a) => (Command::VerifyTheorem, a),
            CliCommand::VerifyIota(a) => (Command::VerifyIota, a),
            CliCommand::Cancellation(a) => (Command::Cancellation, a),
            CliCommand::SpanDim(a) => (Command::SpanDim, a),
            CliCommand::Bernoulli(a) => (Command::Bernoulli, a),
        };
        let sparsity = rational::parse(&args.sparsity)
            .ok_or_else(|| CliError::Config(format!("sparsity {:?} is not a rational", args.sparsity)))?;
        let config = RunConfig {
            command,
            n: args.n,
            k: args.k,
            n_max: args.n_max,
            d: args.d,
            trials: args.trials,
            seed: args.seed,
            sc_path: args.sc_path,
            output: args.output,
            sparsity,
        };
        config.validate()?;
        Ok(config)
    }

    /// A configuration with the command-line defaults.
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            n: 3,
            k: 3,
            n_max: 2,
            d: None,
            trials: 10,
            seed: 0,
            sc_path: None,
            output: OutputFormat::Text,
            sparsity: rational::frac(1, 2),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        if self.n == 0 {
            return bad("--n must be at least 1");
        }
        if self.k == 0 {
            return bad("--k must be at least 1");
        }
        if self.n_max == 0 && self.command != Command::Bernoulli {
            return bad("--n-max must be at least 1");
        }
        if self.trials == 0 {
            return bad("--trials must be at least 1");
        }
        if self.sparsity.is_negative() || self.sparsity > Rational::one() {
            return bad("--sparsity must lie in [0, 1]");
        }
        if self.command == Command::VerifyIota && self.sc_path.is_none() {
            return bad("verify-iota requires --sc");
        }
        if self.command == Command::SpanDim {
            if let Some(d) = self.d {
                if (d as usize) < self.k - 1 {
                    return bad("span-dim needs --d >= k - 1");
                }
            }
        }
        Ok(())
    }

    /// Truncation order actually used by the command.
    pub fn effective_d(&self) -> u32 {
        self.d.unwrap_or(match self.command {
            Command::VerifyTheorem => self.k as u32 - 1,
            Command::SpanDim => 2 * self.k as u32,
            Command::VerifyIota => 4,
            Command::Cancellation | Command::Bernoulli => 0,
        })
    }
}
