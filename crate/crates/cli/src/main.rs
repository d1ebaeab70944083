//! Command-line front end: classification, realizability, enumeration and
//! cover verification with human or structured (JSON) output.
//!
//! Exit codes: 0 = pass/true, 1 = fail/false/refuted, 2 = parse or usage
//! error, 3 = a configured cap was exceeded.

mod commands;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

use ellgal::Error;

pub const SEED_ENV_VAR: &str = "ELLGAL_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LatticeArg {
    Generic,
    Square,
    Hex,
}

impl LatticeArg {
    pub fn to_lattice(self) -> ellgal::torsion::LatticeClass {
        match self {
            LatticeArg::Generic => ellgal::torsion::LatticeClass::Generic,
            LatticeArg::Square => ellgal::torsion::LatticeClass::Square,
            LatticeArg::Hex => ellgal::torsion::LatticeClass::Hexagonal,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ellgal",
    about = "Finite automorphism groups of elliptic curves and Galois groups at outer Galois points",
    version
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "human")]
    pub format: Format,

    /// Seed for randomized degree sampling (env ELLGAL_SEED when absent).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Element cap for closures and enumeration.
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the subgroup generated by affine maps `j:u:v`.
    Classify {
        /// Lattice class the generators act on.
        #[arg(long, value_enum)]
        lattice: LatticeArg,
        /// Generators, each `j:u:v` with rational u, v (e.g. `1:0:0 0:2/5:1/5`).
        #[arg(required = true)]
        generators: Vec<String>,
    },
    /// Construct an explicit witness subgroup for a label.
    Realize {
        /// Group label, e.g. `Z2xZ4`, `D5`, `BD(2,6)`, `E(7,3)`, `E(2,13,4)`.
        label: String,
    },
    /// Decide whether a label occurs as a Galois group at an outer Galois point.
    GaloisCheck {
        label: String,
    },
    /// Enumerate all subgroups of `E[N] x| mu_l` and print the census.
    Enumerate {
        #[arg(long, value_enum)]
        lattice: LatticeArg,
        /// Torsion level N.
        #[arg(long)]
        torsion: u32,
    },
    /// Enumerate and run the taxonomy cross-checks on the census.
    CensusCheck {
        #[arg(long, value_enum)]
        lattice: LatticeArg,
        #[arg(long)]
        torsion: u32,
    },
    /// Verify the bundled cover registry and action-matrix reproductions.
    VerifyPaper {
        /// Run a single registry entry (13..19) instead of everything.
        #[arg(long)]
        example: Option<u32>,
        /// Registry file overriding the bundled one.
        #[arg(long)]
        registry: Option<String>,
    },
    /// Degree of the map to the line given by a function on a curve.
    Degree {
        /// Cubic f(x) of the curve y^2 = f(x), e.g. `x^3+x`.
        #[arg(long)]
        curve: String,
        /// Coefficient field: q, w3, w4 or w6.
        #[arg(long, default_value = "q")]
        field: String,
        /// The function, a rational expression in x and y.
        expr: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = cli
        .seed
        .or_else(|| {
            std::env::var(SEED_ENV_VAR)
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(ellgal::function_field::DEFAULT_DEGREE_SEED);
    match commands::run(&cli, seed) {
        Ok(outcome) => {
            print!("{}", output::render(&outcome, cli.format));
            if outcome.pass {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            let code = match err {
                Error::CapExceeded { .. } | Error::IsoBoundExceeded { .. } => 3u8,
                _ => 2u8,
            };
            let outcome = output::Outcome::error(&err);
            print!("{}", output::render(&outcome, cli.format));
            ExitCode::from(code)
        }
    }
}
