//! `union-channel`: capacity tables, oracle checks, codec simulations and
//! parameter search for the two-user union channel.

mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CliError, CodecArgs, LemmaArgs, LemmaMethod};
use output::OutputFormat;

/// Environment variable overriding the worker thread count.
const THREADS_ENV: &str = "UNION_CHANNEL_THREADS";

#[derive(Parser)]
#[command(name = "union-channel", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Table, global = true)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capacities and the scheme's rate for one alphabet size.
    Capacity {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        q: u64,
    },
    /// Capacity rows for q = 2..=q-max.
    Table {
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(2..=1000))]
        q_max: u64,
    },
    /// Compare an oracle search for the joint-entropy maximum with the closed form.
    Lemma {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=256))]
        q: u64,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, value_enum, default_value_t = LemmaMethod::Auto)]
        method: LemmaMethod,
        /// Grid step (default 1e-4 for q = 2, 1e-2 for q = 3).
        #[arg(long)]
        resolution: Option<f64>,
        /// Sampler draws.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = union_channel::oracle::DEFAULT_SEED)]
        seed: u64,
    },
    /// Simulate the zero-error feedback code.
    Codec {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        q: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        /// Number of message blocks.
        #[arg(long = "B", alias = "blocks", value_parser = clap::value_parser!(u64).range(1..))]
        blocks: u64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Feasible block parameters, best rate first.
    Params {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        q: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
        n_max: u64,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|t| *t >= 1).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Failure(format!("cannot configure thread pool: {e}")))
}

fn to_usize(x: u64, flag: &str) -> Result<usize, CliError> {
    usize::try_from(x).map_err(|_| CliError::Usage(format!("{flag} is too large: {x}")))
}

fn run(cli: Cli) -> Result<commands::Rendered, CliError> {
    configure_threads()?;
    let format = cli.format;
    match cli.command {
        Command::Capacity { q } => commands::capacity(to_usize(q, "--q")?, format),
        Command::Table { q_max } => commands::table(q_max as usize, format),
        Command::Lemma {
            q,
            theta,
            method,
            resolution,
            samples,
            seed,
        } => commands::lemma(
            LemmaArgs {
                q: q as usize,
                theta,
                method,
                resolution,
                samples,
                seed,
            },
            format,
        ),
        Command::Codec {
            q,
            n,
            m,
            blocks,
            trials,
            seed,
        } => commands::codec(
            CodecArgs {
                q: to_usize(q, "--q")?,
                n: to_usize(n, "--n")?,
                m: to_usize(m, "--m")?,
                blocks: to_usize(blocks, "--B")?,
                trials,
                seed,
            },
            format,
        ),
        Command::Params { q, n_max } => {
            commands::params(to_usize(q, "--q")?, n_max as usize, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(rendered) => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(rendered.text.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            if rendered.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: a check failed");
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
