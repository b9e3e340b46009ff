//! Command-line front end for `solvkit`.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on a
//! usage error, 3 when an input file is missing or malformed.

pub mod commands;
pub mod criteria;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Input { path: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input { .. } => EXIT_INPUT,
        }
    }
}

pub enum Output {
    Report(Report),
    Raw(String),
}

impl Output {
    pub fn exit_code(&self) -> i32 {
        match self {
            Output::Report(r) if !r.passed() => EXIT_FAILED,
            _ => EXIT_OK,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Output::Report(r) => r.to_json(),
            Output::Raw(s) => s.clone(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "solvkit", version, about = "Exact checks for complex structures on solvable Lie algebras")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Omit wall-clock timings from reports
    #[arg(long, global = true)]
    pub no_timings: bool,
    /// Largest accepted eigen-relation residual for lattices
    #[arg(long, global = true, default_value_t = solvkit::lattice::RESIDUAL_TOLERANCE)]
    pub residual_tol: f64,
    /// Smallest accepted |det| of the lattice generators
    #[arg(long, global = true, default_value_t = solvkit::lattice::INDEPENDENCE_MARGIN)]
    pub independence_margin: f64,
    /// Finite-difference step for the group-law cross-check
    #[arg(long, global = true, default_value_t = 1e-4)]
    pub fd_step: f64,
    /// Singular-value threshold for numeric ranks
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub rank_threshold: f64,
    /// Largest accepted associativity residual
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub assoc_tol: f64,
    /// Number of sampled adjoint operators in type classification
    #[arg(long, global = true, default_value_t = 64)]
    pub samples: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Built-in algebras and group laws
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Check the Nijenhuis condition for the J stored in an algebra file
    VerifyIntegrable(AlgebraArgs),
    /// h^1 of a solvmanifold from its algebra and holonomy
    H1 {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Holonomy generators: a list of matrices or a lattice spec
        #[arg(long)]
        holonomy: Option<PathBuf>,
    },
    /// Classify an invariant 2-form as Kähler, pseudo-Kähler or neither
    ClassifyForm {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Complex structure matrix; defaults to the J in the algebra file
        #[arg(long = "J", short = 'J')]
        j: Option<PathBuf>,
        /// List of {"i", "j", "coeff"} terms
        #[arg(long)]
        omega: PathBuf,
    },
    /// The explicit pseudo-Kähler form on the non-nilpotent 3-dimensional type
    VerifyTheorem9,
    /// Lattice search and construction
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Run the full acceptance suite
    PaperReport,
}

#[derive(Debug, Clone, Args)]
pub struct AlgebraArgs {
    /// Algebra JSON document
    pub file: PathBuf,
    /// Skip the Jacobi check on load
    #[arg(long)]
    pub no_validate: bool,
}

#[derive(Debug, Subcommand)]
pub enum CatalogCmd {
    /// Names and aliases
    List,
    /// Print an entry as an algebra document
    Show {
        name: String,
        /// Comma-separated assignments, e.g. a=1/2,b=3,eta=1/3pi,s=4:6
        #[arg(long)]
        params: Option<String>,
    },
    /// Recover the brackets from the group law numerically
    Crosscheck {
        name: String,
        #[arg(long)]
        params: Option<String>,
        /// Random triples for the associativity residual
        #[arg(long, default_value_t = 100)]
        triples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LatticeKindArg {
    Nilpotent,
    Nonnilpotent,
    Nakamura,
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    /// Classify the palindromic companions with |p|, |q| <= bound
    Search {
        #[arg(long)]
        bound: i64,
        /// Write the hits here instead of into the report
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a lattice from an integer matrix
    Build {
        #[arg(long, value_enum)]
        kind: LatticeKindArg,
        /// Integer matrix as a list of rows
        #[arg(long)]
        matrix: PathBuf,
        /// Phase k of mu = k pi i (non-nilpotent and Nakamura)
        #[arg(long)]
        k: Option<i64>,
        /// Explicit second holonomy matrix (non-nilpotent)
        #[arg(long, conflicts_with = "k")]
        b: Option<PathBuf>,
        /// Imaginary part of epsilon (Nakamura)
        #[arg(long, default_value = "1")]
        epsilon: String,
        /// beta as re1,im1,re2,im2 (nilpotent)
        #[arg(long, default_value = "1,0,0,1", allow_hyphen_values = true)]
        beta: String,
        /// Also write the lattice spec here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// `SOLVKIT_SEED`, decimal or `0x` hex, falling back to the library default.
pub fn seed_from_env() -> Result<u64, CliError> {
    match std::env::var("SOLVKIT_SEED") {
        Err(_) => Ok(solvkit::lie::DEFAULT_SAMPLE_SEED),
        Ok(s) => {
            let t = s.trim();
            let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
                Some(h) => u64::from_str_radix(&h.replace('_', ""), 16),
                None => t.parse(),
            };
            parsed.map_err(|_| CliError::Usage(format!("SOLVKIT_SEED must be an unsigned integer, got `{s}`")))
        }
    }
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    let seed = seed_from_env()?;
    commands::dispatch(cli, seed)
}
