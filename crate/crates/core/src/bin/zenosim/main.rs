//! `zenosim`: command-line front end.
//!
//! Exit codes: 0 definite result, 1 invalid input, 2 fuel exhausted or
//! indefinite, 3 precondition not met.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zenosim::Seconds;

#[derive(Parser, Debug)]
#[command(name = "zenosim", version, about = "Two-tape Turing machines, Zeno-time halting checks and dovetailed oracle speculation")]
struct Cli {
    /// Step budget.
    #[arg(long, global = true, env = "ZENOSIM_FUEL", default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    fuel: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TraceFormat {
    Text,
    Jsonl,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Register the machine in FILE as an oracle under its own name.
    #[arg(long = "with", value_name = "FILE")]
    with: Vec<PathBuf>,
    /// Register an oracle that answers TOKENS (space separated) at once.
    #[arg(long, value_name = "NAME=TOKENS")]
    stub: Vec<String>,
    /// Register NAME as the limit-assisted decider, which never answers at finite truncation.
    #[arg(long, value_name = "NAME")]
    decider: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a `.tm` file.
    Validate { file: PathBuf },
    /// Run a machine on its `tape1:` input.
    Run {
        file: PathBuf,
        #[arg(long, value_enum)]
        trace: Option<TraceFormat>,
    },
    /// Zeno halting check: one step, one halving, repeated; then the limit stage.
    Zeno {
        file: PathBuf,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        limit_stage: bool,
        /// Duration of the first step, `p` or `p/q` seconds.
        #[arg(long, default_value = "1")]
        mu0: Seconds,
    },
    /// Render the halving counter.
    Counter {
        /// Number of halvings.
        #[arg(long, conflicts_with = "limit", required_unless_present = "limit")]
        n: Option<u64>,
        /// Jump to the limit stage.
        #[arg(long)]
        limit: bool,
        /// Halvings past the limit.
        #[arg(long, requires = "limit", default_value_t = 0)]
        past: u64,
    },
    /// Dovetailed speculation over oracle branches, then the post-limit decision.
    Dovetail {
        file: PathBuf,
        #[command(flatten)]
        oracles: OracleArgs,
        /// Extra instructions allowed after the limit.
        #[arg(long, default_value_t = 16)]
        w: u64,
        #[arg(long, value_enum)]
        trace: Option<TraceFormat>,
    },
    /// Run the diagonal program on itself under both forced answers.
    Paradox {
        #[arg(long, default_value_t = 16)]
        w: u64,
    },
    /// Convert a read-only right-mover to a DFA and check them against each other.
    Dfa {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        /// Compare against this recognizer instead: a `.tm` machine or a DFA as JSON.
        #[arg(long, value_name = "FILE")]
        against: Option<PathBuf>,
        /// Print the DFA as JSON instead of checking it.
        #[arg(long)]
        emit: bool,
    },
    /// Print the flat {0,1,#} encoding of a machine and its input.
    Encode { file: PathBuf },
    /// Print the diagonal program with its own encoding as input.
    ProgramY {
        /// Name of the decider it consults.
        #[arg(long, default_value = "u")]
        u: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command, cli.fuel) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
