use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use condorcet_core::model::{StateOfWorld, TieRule};

mod commands;

#[derive(Parser)]
#[command(name = "condorcet", version, about = "Private persuasion of majority-voting populations")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// JSON output (default everywhere except sweep).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    /// CSV output (sweep only).
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a population and report candidates, biases and thresholds.
    Analyze {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Include every candidate, not just the witnesses.
        #[arg(long)]
        full: bool,
    },
    /// Monte Carlo election with a finite electorate.
    Simulate {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        signal: SignalArgs,
        #[arg(long, value_parser = parse_state)]
        state: StateOfWorld,
        /// Number of voters.
        #[arg(long, default_value_t = 1001)]
        n: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Tie::FavorA)]
        tie: Tie,
        /// Exactly round(lambda * n) low-accuracy voters per trial.
        #[arg(long)]
        fixed_split: bool,
        /// Include the per-trial A-vote counts.
        #[arg(long)]
        tallies: bool,
    },
    /// Classify every cell of a (q_low, lambda) grid.
    Sweep {
        #[arg(long)]
        q_high: f64,
        /// START:END:STEP or a single value [default: 0.5:q_high:0.01]
        #[arg(long)]
        q_low: Option<String>,
        /// START:END:STEP or a single value.
        #[arg(long, default_value = "0:1:0.05")]
        lambda: String,
    },
    /// Exhaustive grid search over binary signals and the candidate check.
    Oracle {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, default_value_t = 0.005)]
        step: f64,
        #[arg(long, value_enum, default_value_t = Tie::FavorA)]
        tie: Tie,
        /// Include every optimal grid signal.
        #[arg(long)]
        full: bool,
    },
    /// Continuous accuracies, targeted signals and public persuasion.
    #[command(subcommand)]
    Extensions(Extension),
}

#[derive(Subcommand)]
enum Extension {
    /// Classify a density of accuracies read from a breakpoint/value table.
    Continuous {
        /// Table file, or - for stdin.
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 0.005)]
        step: f64,
    },
    /// One signal per accuracy class.
    Targeted(ExtensionProfile),
    /// One signal per accuracy class and exogenous realization.
    StronglyTargeted(ExtensionProfile),
    /// Compare the best public signal with private persuasion.
    Public {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, default_value_t = 0.005)]
        step: f64,
    },
}

#[derive(Args)]
struct ExtensionProfile {
    #[command(flatten)]
    profile: ProfileArgs,
    /// Use a continuous density table instead of a binary profile.
    #[arg(long, conflicts_with_all = ["lambda", "q_low", "q_high", "q"])]
    file: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct ProfileArgs {
    /// Share of low-accuracy voters.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    q_low: Option<f64>,
    #[arg(long)]
    q_high: Option<f64>,
    /// Accuracy of a homogeneous population.
    #[arg(long, conflicts_with_all = ["q_low", "q_high"])]
    q: Option<f64>,
}

#[derive(Args, Clone)]
struct SignalArgs {
    /// Posteriors after each realization, e.g. alpha=0.7,beta=0.3, or "none".
    #[arg(long, conflicts_with = "signal_cond")]
    signal: Option<String>,
    /// P(𝔞 | θ_A) and P(𝔞 | θ_B).
    #[arg(long, num_args = 2, value_names = ["P_A", "P_B"])]
    signal_cond: Option<Vec<f64>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tie {
    FavorA,
    FavorB,
}

impl From<Tie> for TieRule {
    fn from(t: Tie) -> Self {
        match t {
            Tie::FavorA => TieRule::FavorA,
            Tie::FavorB => TieRule::FavorB,
        }
    }
}

fn parse_state(s: &str) -> Result<StateOfWorld, String> {
    match s {
        "A" | "a" | "theta-a" => Ok(StateOfWorld::ThetaA),
        "B" | "b" | "theta-b" => Ok(StateOfWorld::ThetaB),
        _ => Err(format!("unknown state {s:?}; expected A or B")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
