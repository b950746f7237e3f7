//! `lie-moduli`: builds cellular and bigraded Lie models from text input and
//! runs the perturbation machinery on them.
//!
//! Exit status is 0 when every check in the report passes, 1 when some check
//! fails, and 2 on errors.

pub mod commands;
pub mod document;
pub mod error;
pub mod report;
pub mod syntax;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};

pub use document::Document;
pub use error::{CliError, Result};
pub use report::{Format, Report};

use commands::{CheckKind, TauArg};

#[derive(Parser, Debug)]
#[command(name = "lie-moduli", version, about = "Exact Lie models and their perturbations")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Topological degree cutoff (defaults to the document's, else 8).
    #[arg(long, global = true)]
    pub cutoff: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CheckArg {
    Minimal,
    SquareZero,
    ZeroRegion,
    Theta,
    MaurerCartan,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cellular model of a CW description.
    Cellular { file: String },
    /// Bigraded model of a presentation.
    Bigraded {
        file: String,
        /// Scan candidate cycles in reverse order.
        #[arg(long)]
        reversed: bool,
    },
    /// Homology of the cellular or bigraded model.
    Homology { file: String },
    /// A single structural check.
    Check {
        #[arg(value_enum)]
        what: CheckArg,
        file: String,
        /// Perturbation: `zero`, a name from the file, or `g -> expr; ...`.
        #[arg(long)]
        tau: Option<String>,
        /// Degree of the derivation checked by `theta`.
        #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
        degree: i32,
    },
    /// Perturb a bigraded model toward another model of the same `P`.
    PerturbToward { source: String, target: String },
    /// Gauge action `exp(ad θ)` on a perturbation.
    GaugeApply {
        file: String,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        tau: Option<String>,
    },
    /// Decide whether two perturbations are gauge equivalent.
    Equivalent {
        file: String,
        #[arg(long)]
        tau: String,
        #[arg(long)]
        tau2: String,
    },
    /// Maurer-Cartan equations of a bigraded model.
    McSystem { file: String },
    /// Act on a perturbation by an automorphism of `P`.
    ApplyAut {
        file: String,
        /// `x -> expr; ...` over the presentation basis; the file's `sigma`
        /// lines otherwise.
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        tau: Option<String>,
    },
}

fn tau_arg(s: &Option<String>) -> TauArg<'_> {
    s.as_deref().map_or(TauArg::Default, TauArg::Given)
}

pub fn execute(cli: &Cli) -> Result<Report> {
    let c = cli.cutoff;
    match &cli.command {
        Command::Cellular { file } => commands::cellular(&Document::read(file)?, c),
        Command::Bigraded { file, reversed } => commands::bigraded(&Document::read(file)?, c, *reversed),
        Command::Homology { file } => commands::homology(&Document::read(file)?, c),
        Command::Check { what, file, tau, degree } => {
            let kind = match what {
                CheckArg::Minimal => CheckKind::Minimal,
                CheckArg::SquareZero => CheckKind::SquareZero,
                CheckArg::ZeroRegion => CheckKind::ZeroRegion,
                CheckArg::Theta => CheckKind::Theta,
                CheckArg::MaurerCartan => CheckKind::MaurerCartan,
            };
            commands::check(&Document::read(file)?, c, kind, tau_arg(tau), *degree)
        }
        Command::PerturbToward { source, target } => {
            commands::perturb_toward_cmd(&Document::read(source)?, &Document::read(target)?, c)
        }
        Command::GaugeApply { file, theta, tau } => commands::gauge_apply_cmd(&Document::read(file)?, c, theta, tau_arg(tau)),
        Command::Equivalent { file, tau, tau2 } => {
            commands::equivalent(&Document::read(file)?, c, TauArg::Given(tau), TauArg::Given(tau2))
        }
        Command::McSystem { file } => commands::mc_system_cmd(&Document::read(file)?, c),
        Command::ApplyAut { file, sigma, tau } => {
            commands::apply_aut(&Document::read(file)?, c, sigma.as_deref(), tau_arg(tau))
        }
    }
}

/// Parses arguments, runs the command, prints the report and returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    match execute(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.emit(format).as_bytes());
            if report.passed() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
