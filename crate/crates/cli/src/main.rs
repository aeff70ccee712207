//! `ksw`: build, verify, rotate and classify finite spectral spacetimes from JSON files.
//!
//! Exit codes: 0 decided and passed, 1 decided and failed, 2 error or undecided.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Outcome;

#[derive(Parser)]
#[command(name = "ksw", version, about = "Finite spectral spacetimes: axioms, Wick rotation, causality")]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Options {
    /// Tolerance for numerical predicates.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Signature to check a structure against, overriding the file.
    #[arg(long, global = true, value_enum)]
    pub signature: Option<SignatureArg>,
    /// Edge orientation signs, e.g. `1,-1,1`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sigma: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SignatureArg {
    Antilorentzian,
    Lorentzian,
    Euclidean,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the axioms of a structure file, or of the canonical structure of a graph file.
    Verify { input: PathBuf },
    /// Connes distance between two vertices of a graph, compared with the geodesic distance.
    Distance { input: PathBuf, from: String, to: String },
    /// Stable causality of the canonical spacetime of an oriented graph.
    Causality { input: PathBuf },
    /// Wick rotation of a graph's canonical triple or of a structure file.
    Wick { input: PathBuf },
    /// Reconstructibility of a structure for each of its listed forms.
    Reconstruct { input: PathBuf },
    /// Split Dirac structures.
    Split {
        #[command(subcommand)]
        command: SplitCommand,
    },
    /// Compare a vertex-based Dirac operator with the averaged split operator.
    MvsCompare { input: PathBuf },
    /// Run a shipped example end to end.
    Demo {
        #[arg(value_enum)]
        name: Demo,
    },
}

#[derive(Subcommand)]
enum SplitCommand {
    /// Check the structure theorem and the axioms.
    Verify { input: PathBuf },
    /// Decide reconstructibility through parallel timelike fields.
    Reconstruct { input: PathBuf },
    /// Decide stable causality (n = 4).
    Causality { input: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Demo {
    C2,
    Fig2,
    BoostTriangle,
    Figsc,
    MvsFlat,
}

fn run(cli: Cli) -> Result<Outcome, String> {
    let o = &cli.opts;
    match cli.command {
        Command::Verify { input } => commands::verify(&input, o),
        Command::Distance { input, from, to } => commands::distance(&input, &from, &to, o),
        Command::Causality { input } => commands::causality(&input, o),
        Command::Wick { input } => commands::wick(&input, o),
        Command::Reconstruct { input } => commands::reconstruct(&input, o),
        Command::Split { command } => match command {
            SplitCommand::Verify { input } => commands::split_verify(&input, o),
            SplitCommand::Reconstruct { input } => commands::split_reconstruct(&input, o),
            SplitCommand::Causality { input } => commands::split_causality(&input, o),
        },
        Command::MvsCompare { input } => commands::mvs_compare(&input, o),
        Command::Demo { name } => commands::demo(name, o),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.opts.json;
    match run(cli) {
        Ok(outcome) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&outcome.report).expect("reports serialize"));
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::from(outcome.code)
        }
        Err(message) => {
            if json {
                println!("{}", serde_json::json!({ "error": message }));
            }
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
