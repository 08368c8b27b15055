//! `ringlab` command-line front end.

mod commands;
mod render;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ringlab::SearchBudget;

use crate::commands::Outcome;

/// Exit codes shared by every subcommand.
pub mod exit {
    pub const OK: u8 = 0;
    /// `fields-check`: not a product of fields. `selfcheck`: some suite failed.
    pub const NEGATIVE: u8 = 1;
    pub const ERROR: u8 = 2;
    /// `lift`: some stage is not expressible in the generators.
    pub const UNSOLVABLE: u8 = 3;
}

/// Bumped whenever the report layout changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "ringlab", version, about = "Finite commutative rings: products of fields, idempotent splitting, generator lifting")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Largest ring order any enumeration may touch.
    #[arg(
        long,
        global = true,
        env = "RINGLAB_BUDGET_ORDER",
        default_value_t = SearchBudget::DEFAULT_RING_ORDER,
        value_parser = clap::value_parser!(u64).range(1..)
    )]
    budget_order: u64,

    /// Largest number of coefficient tuples an exhaustive membership search may try.
    #[arg(
        long,
        global = true,
        default_value_t = SearchBudget::DEFAULT_MEMBERSHIP_TUPLES,
        value_parser = clap::value_parser!(u64).range(1..)
    )]
    budget_tuples: u64,

    /// Report `timing_ms` as null so identical invocations print identical bytes.
    #[arg(long, global = true)]
    no_timing: bool,

    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Criterion,
    Oracle,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Order, unit, idempotent and nilpotent counts, connectedness.
    Describe { ring: String },
    /// Split into connected factors and verify the isomorphism.
    Decompose { ring: String },
    /// Decide whether the ring is a finite product of fields (exit 0 yes, 1 no).
    FieldsCheck {
        ring: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
    /// Lift generators `f_i + r_i·z` stage by stage over `S(A,N)`.
    Lift {
        /// A truncated ring `S(A,N)`.
        #[arg(long)]
        ring: String,
        /// Pairs `[(f1,r1),...]`.
        #[arg(long)]
        pairs: String,
        #[arg(long)]
        target: String,
        /// Last stage `T`; defaults to `N−1`.
        #[arg(long)]
        stages: Option<usize>,
    },
    /// Run every invariant suite over the built-in ring catalog.
    Selfcheck {
        #[arg(long, default_value_t = ringlab::selfcheck::MAX_PRODUCT_ORDER)]
        max_order: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Describe { .. } => "describe",
            Command::Decompose { .. } => "decompose",
            Command::FieldsCheck { .. } => "fields-check",
            Command::Lift { .. } => "lift",
            Command::Selfcheck { .. } => "selfcheck",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = SearchBudget::new(cli.budget_order, cli.budget_tuples);
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Describe { ring } => commands::describe(ring, &budget),
        Command::Decompose { ring } => commands::decompose(ring, &budget, cli.seed),
        Command::FieldsCheck { ring, method } => commands::fields_check(ring, *method, &budget),
        Command::Lift {
            ring,
            pairs,
            target,
            stages,
        } => commands::lift(ring, pairs, target, *stages, &budget),
        Command::Selfcheck { max_order } => commands::selfcheck(*max_order, cli.seed, &budget, !cli.no_timing),
    };
    let Outcome { ring, result, code } = match outcome {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit::ERROR);
        }
    };
    let timing = (!cli.no_timing).then(|| start.elapsed().as_millis() as u64);
    let report = render::Report {
        schema_version: SCHEMA_VERSION,
        command: cli.command.name(),
        ring,
        budget: render::Budget {
            max_ring_order: budget.max_ring_order,
            max_membership_tuples: budget.max_membership_tuples,
        },
        timing_ms: timing,
        result,
    };
    print!("{}", render::render(&report, cli.format));
    ExitCode::from(code)
}
