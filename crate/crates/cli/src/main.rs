use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::{run, Outcome};

#[derive(Parser, Debug)]
#[command(name = "transcert", version, about = "Certified lower bounds for |P(e^a_1, ..., e^a_t)|")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Working precision in bits.
    #[arg(long, default_value_t = 128)]
    pub prec: u32,
    /// Seed for every randomized step.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest number of decimal digits of T kept exactly.
    #[arg(long = "digit-cap", default_value_t = transcert::bounds::DEFAULT_DIGIT_CAP)]
    pub digit_cap: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the lower bound for polynomials of degree D and height H.
    Bound {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        height: String,
        #[command(flatten)]
        common: Common,
    },
    /// Certify rho for a homogeneous polynomial against the bound.
    Verify {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        poly: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Build the auxiliary family for (S, T) and run its three checks.
    Construct {
        #[arg(long)]
        field: PathBuf,
        #[arg(long = "S")]
        s: u32,
        #[arg(long = "T")]
        t: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Audit the inequality chain at the parameters for (D, H).
    Audit {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        height: String,
        #[command(flatten)]
        common: Common,
    },
    /// Macaulay resultant of t + 1 forms in t + 1 variables.
    Resultant {
        /// Field of the coefficients (Q when omitted).
        #[arg(long)]
        field: Option<PathBuf>,
        #[arg(long = "poly")]
        polys: Vec<PathBuf>,
        #[arg(value_name = "POLY")]
        rest: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Outcome { report, code, out } = run(cli.command);
    let text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("transcert: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
