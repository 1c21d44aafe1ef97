//! `superchain`: sweeps, verifications and the acceptance suite from the
//! command line.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 on a usage
//! or input error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use output::{Format, Verdict};

#[derive(Debug, Parser)]
#[command(name = "superchain", version, about = "Exact cohomology of parabolic nilradicals in gl(m|n), Euler series and mixed complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Block sizes, even then odd: "m1,m2|n1".
    #[arg(long, global = true)]
    pub shape: Option<String>,

    /// Position of each block in the full order, one-based: "1,3,2".
    #[arg(long, global = true)]
    pub shuffle: Option<String>,

    /// Weight box "a..b", applied to every coordinate.
    #[arg(long = "box", global = true, allow_hyphen_values = true)]
    pub weight_box: Option<String>,

    /// Degree cap for algebras without a finiteness certificate.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub degree_cap: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Worker threads; output does not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = superchain::suite::DEFAULT_SEED)]
    pub seed: u64,

    /// Cache of per-weight cohomology.
    #[arg(long, global = true, env = "SUPERCHAIN_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cohomology dimensions at every weight of the box.
    Cohomology,
    /// Euler characteristic (alternating sum over CE degree) at every weight.
    Euler,
    /// Closed sector formula, checked against another strategy.
    EulerFormula {
        #[arg(long, default_value = "ce")]
        against: String,
    },
    /// Coefficients of the Euler generating function.
    Expand {
        /// One of: ce, expansion, formula.
        #[arg(long, default_value = "expansion")]
        strategy: String,
    },
    /// Check that every Levi module occurs at most once in the cohomology.
    SimpleSpectrum,
    /// Compare a Borel shuffle with its neighbours across one odd reflection.
    OddReflection {
        /// Target shuffle; every adjacent shuffle when omitted.
        #[arg(long)]
        to: Option<String>,
    },
    /// Analyse a mixed complex read from an interchange file.
    Mixed {
        #[arg(long)]
        input: PathBuf,
    },
    /// Decompose sl(1|1)-modules, or check the tensor table.
    Sl11 {
        /// Interchange file of a module.
        #[arg(long, conflicts_with_all = ["module", "table"])]
        input: Option<PathBuf>,
        /// Module label such as "III0" or "II_2".
        #[arg(long)]
        module: Option<String>,
        /// Second factor of a tensor product.
        #[arg(long, requires = "module")]
        with: Option<String>,
        /// Check the whole tensor table for the given eigenvalues.
        #[arg(long, conflicts_with = "module")]
        table: bool,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-3,-2,-1,1,2,3")]
        lambdas: Vec<i64>,
    },
    /// Run the acceptance suite.
    VerifyAll {
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            if report.verdict == Verdict::Fail {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
