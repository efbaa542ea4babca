//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Workbench for mixed-choice multiparty sessions.
#[derive(Debug, Parser)]
#[command(name = "mcmp", version, about)]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Most states any exploration may visit.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub max_states: usize,

    /// Deepest level any exploration may reach.
    #[arg(long, global = true, default_value_t = 256)]
    pub max_depth: usize,

    /// Write the explored state graph of the input to this file in DOT syntax.
    #[arg(long, global = true, value_name = "PATH")]
    pub dot: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

/// A file holding a session, optionally followed by a `types` block.
#[derive(Debug, Args)]
pub struct Input {
    /// Source file.
    pub file: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Type-check a session against its declared context.
    Check(Input),
    /// Decide safety of the declared context.
    Safety(Input),
    /// Decide deadlock-freedom of the declared context.
    Df(Input),
    /// Run a session, always taking the first enabled step.
    Simulate {
        #[command(flatten)]
        input: Input,
        /// Most steps to take.
        #[arg(long, default_value_t = 1_000)]
        max_steps: usize,
        /// Report every step taken.
        #[arg(long)]
        trace: bool,
    },
    /// Translate a session along an encoding.
    Encode {
        #[command(flatten)]
        input: Input,
        /// Encoding name, such as `MCBS->SCBS`.
        #[arg(long)]
        via: String,
        /// Also write the order and label provenance as JSON to this file.
        #[arg(long, value_name = "PATH")]
        sidecar: Option<PathBuf>,
    },
    /// Check the good-encoding criteria for one term.
    VerifyEncoding {
        #[command(flatten)]
        input: Input,
        /// Encoding name, such as `MCBS->SCBS`.
        #[arg(long)]
        via: String,
    },
    /// Search the reachable states for a synchronisation pattern.
    Detect {
        #[command(flatten)]
        input: Input,
        /// Pattern to look for.
        #[arg(long, value_enum)]
        pattern: PatternArg,
    },
    /// List the calculi whose restrictions a session satisfies.
    Classify(Input),
    /// Check that every maximal execution elects exactly one leader.
    Electoral {
        #[command(flatten)]
        input: Input,
        /// Participant receiving the announcement.
        #[arg(long)]
        station: String,
        /// Label of the announcement.
        #[arg(long)]
        label: String,
    },
    /// Work with linear mixed-sessions programs.
    #[command(subcommand)]
    Cmv(CmvCommand),
}

#[derive(Debug, Subcommand)]
pub enum CmvCommand {
    /// Check linearity and classify each choice.
    Check(Input),
    /// Translate into a binary mixed-choice session.
    Encode(Input),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PatternArg {
    /// Three steps, the middle one conflicting with the outer two.
    M,
    /// Five steps in a cycle of conflicts.
    Star,
}
