mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use tlcga::random::DEFAULT_SEED;
use tlcga::Error;

#[derive(Parser)]
#[command(name = "tlcga", version, about = "Model checker for the temporal logic of coalitional goal assignments")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Worker threads for bisimulation refinement and the axiom sweep.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Add wall-clock timings to the report.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Seed of every randomized harness.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Args, Clone)]
pub struct ModelArg {
    /// Model JSON file, or `corpus:NAME[:PARAM...]`.
    #[arg(long)]
    pub model: String,
}

#[derive(Args, Clone)]
pub struct FormulaArg {
    #[arg(long, allow_hyphen_values = true)]
    pub formula: Option<String>,
    /// File with the formula; `#` lines are comments.
    #[arg(long)]
    pub formula_file: Option<PathBuf>,
    /// tlcga, tlcga+ or mu.
    #[arg(long, default_value = "tlcga+")]
    pub dialect: String,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a formula at a state.
    Check {
        #[command(flatten)]
        model: ModelArg,
        /// Defaults to the corpus start state or the first state.
        #[arg(long)]
        state: Option<String>,
        #[command(flatten)]
        formula: FormulaArg,
        /// Also list every state where the formula holds.
        #[arg(long)]
        extension: bool,
    },
    /// Search a finite-memory witness for a goal assignment.
    Oracle {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        state: Option<String>,
        #[command(flatten)]
        formula: FormulaArg,
        /// positional, path:K or play:K.
        #[arg(long, default_value = "positional")]
        mode: String,
        /// Maximum number of table assignments tried.
        #[arg(long, default_value_t = tlcga::strategies::DEFAULT_SEARCH_LIMIT)]
        limit: usize,
        /// Maximum number of memory values.
        #[arg(long, default_value_t = tlcga::strategies::DEFAULT_NODE_LIMIT)]
        max_nodes: usize,
    },
    /// Check a model file for well-formedness.
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
    /// State-copying and outcome-splitting.
    Scos {
        #[command(flatten)]
        model: ModelArg,
        /// Write the injective model here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greatest bisimulation, related pairs and pair queries.
    Bisim {
        #[command(flatten)]
        model: ModelArg,
        /// Second model; states are then queried across the disjoint union.
        #[arg(long)]
        other: Option<String>,
        /// List every related pair.
        #[arg(long)]
        pairs: bool,
        /// Are these two states bisimilar?
        #[arg(long, num_args = 2, value_names = ["S1", "S2"])]
        query: Option<Vec<String>>,
    },
    /// Translate into the fixpoint language.
    Translate {
        #[command(flatten)]
        formula: FormulaArg,
    },
    /// Normal form.
    Nf {
        #[command(flatten)]
        formula: FormulaArg,
    },
    /// Unfolding of a goal-assignment formula.
    Unfold {
        #[command(flatten)]
        formula: FormulaArg,
        /// Also list the Finish, UHolds and GHolds families.
        #[arg(long)]
        parts: bool,
    },
    /// Induction formula of a goal assignment for a state formula.
    Ind {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
    },
    /// Nexttime extension of a goal assignment.
    Oplus {
        #[command(flatten)]
        formula: FormulaArg,
    },
    /// One-step satisfiability of a sequent under a constraint.
    OnestepSat {
        /// One literal or positive one-step formula per line.
        #[arg(long)]
        sequent: PathBuf,
        /// One member per line, e.g. `{p,q}`.
        #[arg(long)]
        constraint: PathBuf,
        /// Comma-separated agents; defaults to the agents the sequent mentions.
        #[arg(long)]
        agents: Option<String>,
        /// Apply the conditions exactly as originally stated.
        #[arg(long)]
        literal: bool,
        /// Print a witness game form when satisfiable.
        #[arg(long)]
        witness: bool,
    },
    /// Stability notions as goal assignments.
    Stability {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        state: Option<String>,
        /// nash, strong, coalitional, coeq or core.
        #[arg(long)]
        notion: String,
        /// File holding the goal assignment.
        #[arg(long)]
        goals: PathBuf,
        /// Strategy tables in the oracle's output format.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Bound on deviation tables tried per agent.
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
    /// Falsification sweep over the axiom schemes.
    Axioms {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Restrict to these schemes (repeatable).
        #[arg(long)]
        scheme: Vec<String>,
        #[arg(long, default_value_t = 6)]
        max_states: usize,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// List or export the built-in models.
    Corpus {
        #[arg(long)]
        list: bool,
        name: Option<String>,
        params: Vec<String>,
        /// Directory for the model and formula files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::LimitExceeded(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let echo = std::env::args().skip(1).filter(|a| a != "--timing").collect::<Vec<_>>().join(" ");
    let start = Instant::now();
    match commands::run(cli.command, &cli.global, &echo) {
        Ok(mut report) => {
            if cli.global.timing {
                report.timing(start.elapsed());
            }
            print!("{}", report.render(cli.global.json));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
