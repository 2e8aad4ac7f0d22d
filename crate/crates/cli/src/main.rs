//! `optimin`: command-line front end for the optimin solver.

mod commands;
mod input;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use optimin_core::Error;

#[derive(Debug, Parser)]
#[command(name = "optimin", version, about = "Optimin analysis of games, matchings and decision problems")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    /// Worker threads (OPTIMIN_THREADS takes precedence when set).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct Mode {
    /// Pure strategies only (the default).
    #[arg(long)]
    pub pure: bool,

    /// Two-player mixed strategies on the grid of multiples of 1/K.
    #[arg(long, value_name = "K")]
    pub mixed_grid: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimin profiles of a normal-form game.
    Optimin {
        /// Named instance (figure1, motivating, ...) or a game file.
        #[arg(long)]
        game: String,
        #[command(flatten)]
        mode: Mode,
    },
    /// Worst-case values: one profile, or the whole pure table.
    Value {
        #[arg(long)]
        game: String,
        /// Pure profile, e.g. `Top,Left`.
        #[arg(long, conflicts_with = "mixed")]
        profile: Option<String>,
        /// Two-player mixed profile, e.g. `1/2,1/2;1,0`.
        #[arg(long)]
        mixed: Option<String>,
        /// Count every opponent strategy as a deviation (maximin reading).
        #[arg(long)]
        any_deviation: bool,
    },
    /// Pure Nash equilibria.
    Nash {
        #[arg(long)]
        game: String,
    },
    /// Maximin strategies and security levels.
    Maximin {
        #[arg(long)]
        game: String,
    },
    /// Two-player zero-sum games.
    Zerosum {
        #[command(subcommand)]
        action: ZerosumAction,
    },
    /// Cooperative TU games.
    Coop {
        #[command(subcommand)]
        action: CoopAction,
    },
    /// Marriage problems.
    Match {
        /// Matching problem file.
        #[arg(long)]
        problem: String,
        /// Evaluate one matching, e.g. `a1-b2,a2-b1`; unlisted people are single.
        #[arg(long)]
        matching: Option<String>,
    },
    /// Decision problems against Nature with optimism constraints.
    Decide {
        /// Decision problem file.
        #[arg(long)]
        problem: String,
    },
    /// Write a generated or named game file.
    Gen {
        /// travelers, centipede, prisoners_dilemma, public_goods or a named instance.
        family: String,
        /// Family parameters, e.g. `r=5 min=2 max=100` or `variant=constant`.
        params: Vec<String>,
        /// Output file (standard output when omitted).
        #[arg(long)]
        out: Option<String>,
    },
    /// Optimin and Nash sets across one parameter of a family.
    Sweep {
        family: String,
        /// Parameter to vary.
        #[arg(long)]
        param: String,
        /// `from:to` or `from:to:step`, inclusive.
        #[arg(long)]
        range: String,
        /// Fixed family parameters, `key=value`.
        params: Vec<String>,
    },
    /// Golden checks on the named instances.
    Selftest,
}

#[derive(Debug, Subcommand)]
pub enum ZerosumAction {
    /// Maximin mixtures of both players and the game value.
    Solve {
        #[arg(long)]
        game: String,
    },
    /// Whether a mixed pair is an optimin (equivalently maximin) pair.
    Check {
        #[arg(long)]
        game: String,
        /// Mixed pair, e.g. `1/5,0,0,4/5;2/5,3/5`.
        #[arg(long)]
        profile: String,
    },
}

#[derive(Debug, Args)]
pub struct CoopGame {
    /// Named instance (coop_empty_core, coop_120) or a TU game file.
    #[arg(long)]
    pub game: String,
}

#[derive(Debug, Subcommand)]
pub enum CoopAction {
    /// Optimin allocations on the imputation lattice.
    Optimin {
        #[command(flatten)]
        game: CoopGame,
        /// Lattice step.
        #[arg(long, default_value = "1")]
        step: String,
        /// Lower bounds replacing the individual worths, e.g. `0,0,0`.
        #[arg(long)]
        floor: Option<String>,
    },
    /// Worst-case value of one allocation.
    Value {
        #[command(flatten)]
        game: CoopGame,
        /// Allocation, e.g. `40,30,40`.
        #[arg(long)]
        alloc: String,
    },
    /// Core emptiness, a core point and per-player ranges.
    Core {
        #[command(flatten)]
        game: CoopGame,
    },
    Shapley {
        #[command(flatten)]
        game: CoopGame,
    },
    Nucleolus {
        #[command(flatten)]
        game: CoopGame,
    },
}

/// Exit status 1 for domain and resource errors, 2 for bad input.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } => 2,
        _ => 1,
    }
}

fn configure_threads(flag: Option<usize>) -> Result<(), String> {
    let threads = match std::env::var("OPTIMIN_THREADS") {
        Ok(text) => Some(
            text.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| format!("OPTIMIN_THREADS must be a positive integer, got '{text}'"))?,
        ),
        Err(_) => flag,
    };
    if let Some(n) = threads {
        if n == 0 {
            return Err("--threads must be positive".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(message) = configure_threads(cli.threads) {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    match commands::run(&cli) {
        Ok(commands::Outcome { text, success }) => {
            print!("{text}");
            if success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
