//! Argument parsing and dispatch for the `msflow` executable.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, ChoiceSource, EXIT_INPUT, EXIT_OK};
use crate::report::{render, Report};

#[derive(Debug, Parser)]
#[command(name = "msflow", version, about = "Combinatorial Morse-Smale systems: complexes, orbit removal and face posets")]
pub struct Cli {
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a system against the structural rules.
    Validate {
        /// Path, or a fixture name such as fig5.
        file: String,
        /// Also require every saddle of a surface flow to have two separatrices in and two out.
        #[arg(long)]
        strict: bool,
    },
    /// Print the bases and boundary matrices of the GF(2) complex.
    Complex {
        /// Path, or a fixture name such as fig5.
        file: String,
    },
    /// Report every nonzero entry of the composed differential.
    D2 {
        /// Path, or a fixture name such as fig5.
        file: String,
    },
    /// Print GF(2) Betti numbers; refuses (exit 2) when d∘d ≠ 0.
    Homology {
        /// Path, or a fixture name such as fig5.
        file: String,
    },
    /// Replace a closed orbit by a pair of rest points.
    Perturb(PerturbArgs),
    /// Print the face poset of a gradient-like system or a .pos file.
    Poset {
        /// Path, or a fixture name such as fig5.
        file: String,
    },
    /// Compare two face posets; for systems, test the necessary condition for cell equivalence.
    Compare {
        /// First system or .pos file.
        a: String,
        /// Second system or .pos file.
        b: String,
    },
    /// Group gradient-like systems, or all resolutions of one system, by face poset.
    Census {
        /// One system with closed orbits, or several gradient-like systems.
        #[arg(required = true)]
        files: Vec<String>,
    },
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    /// Path, or a fixture name such as fig3.
    pub file: String,
    /// Name of the closed orbit to remove.
    #[arg(long)]
    pub orbit: String,
    /// Apply every enumerated choice (surface flows only).
    #[arg(long, conflicts_with = "choice", required_unless_present = "choice")]
    pub all: bool,
    /// Apply the descriptor for the orbit from a .msc file.
    #[arg(long, value_name = "FILE")]
    pub choice: Option<String>,
    /// Write each resulting system to this directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn execute(cli: &Cli) -> Report {
    match &cli.command {
        Command::Validate { file, strict } => commands::validate(file, *strict),
        Command::Complex { file } => commands::complex(file),
        Command::D2 { file } => commands::d2(file),
        Command::Homology { file } => commands::homology(file),
        Command::Perturb(p) => {
            let source = match &p.choice {
                Some(f) => ChoiceSource::File(f),
                None => ChoiceSource::All,
            };
            commands::perturb(&p.file, &p.orbit, source, p.out.as_deref())
        }
        Command::Poset { file } => commands::poset(file),
        Command::Compare { a, b } => commands::compare(a, b),
        Command::Census { files } => commands::census(files),
    }
}

/// Parses `args` (including the program name) and runs the command.
///
/// Usage errors exit with 1, like other input errors.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code: EXIT_INPUT, stdout: String::new(), stderr: text }
            } else {
                Output { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let report = execute(&cli);
    if cli.json {
        let mut stdout = serde_json::to_string_pretty(&report).expect("reports serialize");
        stdout.push('\n');
        return Output { code: report.exit_code, stdout, stderr: String::new() };
    }
    let text = render(&report);
    if report.exit_code == EXIT_INPUT && matches!(report.facts, crate::report::Facts::Error { .. }) {
        Output { code: report.exit_code, stdout: String::new(), stderr: text }
    } else {
        Output { code: report.exit_code, stdout: text, stderr: String::new() }
    }
}
