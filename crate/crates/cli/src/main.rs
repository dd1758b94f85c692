//! `endo`: command-line front end for the kernel-configuration toolkit.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "endo", version, about = "Exact algebra, quantifier elimination and finite models for vector spaces with an endomorphism")]
pub struct Cli {
    /// Kernel configuration JSON (for `reduce`: a field spec or any file with a `field` key).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    pub output: Output,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest model dimension the oracle may build.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_dim: Option<u64>,
    /// Largest block multiplicity the oracle may try.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_n: Option<u64>,
    /// Print elimination traces.
    #[arg(long, global = true)]
    pub trace: bool,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

/// Input language of formulas: `T(x)` terms or module terms with ring coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Lang {
    Endo,
    Module,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Eq,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Normalize a constraint file to a kernel configuration.
    Reduce { constraints: PathBuf },
    /// Inspect the ring: field test, normal forms, units, kernel descriptors.
    Ring {
        #[arg(long, value_enum)]
        op: Option<RingOp>,
        exprs: Vec<String>,
    },
    /// Quantifier elimination (formula inline, or `@file`).
    Qe {
        formula: String,
        #[arg(long, value_enum, default_value_t = Lang::Endo)]
        lang: Lang,
    },
    /// Decide a sentence.
    Decide {
        formula: String,
        #[arg(long, value_enum, default_value_t = Lang::Endo)]
        lang: Lang,
        /// Use the finite-model oracle instead of elimination.
        #[arg(long)]
        oracle: bool,
    },
    /// Build, check, decompose or evaluate finite models.
    Model {
        #[command(subcommand)]
        action: ModelCmd,
    },
    /// Closure of generator vectors (comma separated coordinates).
    Closure { model: PathBuf, vectors: Vec<String> },
    /// Exchange verdict with a witness when it fails.
    Exchange,
    /// Randomized elimination-versus-oracle campaign.
    Fuzz {
        #[arg(long, default_value_t = 500)]
        count: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ModelCmd {
    /// Blocks as `f:j[:mult]`, fillers as `filler:f[:mult]`.
    Build {
        #[arg(long = "block", required = true)]
        blocks: Vec<String>,
        #[arg(long = "support")]
        support: Vec<String>,
    },
    Check { model: PathBuf },
    Decompose {
        model: PathBuf,
        #[arg(long = "f")]
        fs: Vec<String>,
    },
    /// Truth of a formula; free variables need `--assign x=1,0,..`.
    Eval {
        model: PathBuf,
        formula: String,
        #[arg(long, value_enum, default_value_t = Lang::Endo)]
        lang: Lang,
        #[arg(long = "assign")]
        assign: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            let code = if e.downcast_ref::<commands::Usage>().is_some() { 2 } else { 1 };
            eprintln!("error: {}", commands::diagnostic(&e));
            ExitCode::from(code)
        }
    }
}
