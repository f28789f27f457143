//! CLI front end: field construction, height computation, verification
//! suites, family tables, and the persistent L-value cache.

pub mod cache;
pub mod commands;
pub mod report;
pub mod spec;
pub mod suites;

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use colmez_core::{Convention, Evaluator};

use crate::suites::{Suite, SuiteContext};

/// Exit codes: 0 pass, 1 exact-check failure, 2 numeric-check failure,
/// 3 invalid input.
pub const EXIT_OK: i32 = 0;
pub const EXIT_EXACT_FAILURE: i32 = 1;
pub const EXIT_NUMERIC_FAILURE: i32 = 2;
pub const EXIT_BAD_INPUT: i32 = 3;

const DEFAULT_FIELDS: &str = "4,5,20:9,7";

#[derive(Parser, Debug)]
#[command(
    name = "colmez",
    version,
    about = "Exact and numeric verification of the class-function, conductor, and L-value calculus of abelian CM fields"
)]
pub struct Cli {
    /// Convention for Z on the trivial character.
    #[arg(long, global = true, default_value = "paper")]
    pub convention: Convention,

    /// Tolerance for numeric checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,

    /// Worker threads for verification suites.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    /// Cache directory (overrides COLMEZ_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    /// Disable the persistent L-value cache.
    #[arg(long, global = true)]
    pub no_cache: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the group, character table, and discriminants of a field.
    Field {
        /// Modulus n: the field lives inside the n-th cyclotomic field.
        #[arg(long)]
        modulus: u64,
        /// Kernel generators (comma separated).
        #[arg(long, value_delimiter = ',')]
        subgroup: Vec<u64>,
    },
    /// Compute the conjectural height of a CM-type or partial CM-type.
    Height {
        /// Field spec `n` or `n:g1:g2`.
        #[arg(long)]
        field: String,
        /// Type spec `full:1,2` or `partial:1,2`.
        #[arg(long = "type")]
        type_spec: String,
    },
    /// Run a verification suite and emit a JSON run record.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Comma-separated field specs (generators ':'-separated).
        #[arg(long, default_value = DEFAULT_FIELDS)]
        fields: String,
        /// Conductor cap for the analytic character sweeps.
        #[arg(long, default_value_t = 40)]
        conductor_max: u64,
    },
    /// Emit the imaginary-quadratic family table as CSV.
    Table {
        /// Family name; only `biquadratic` is defined.
        #[arg(long)]
        family: String,
        /// Comma-separated primes, each congruent to 1 mod 4.
        #[arg(long, default_value = "")]
        primes: String,
    },
}

fn build_evaluator(cli: &Cli) -> Evaluator {
    if cli.no_cache {
        return Evaluator::new(cli.convention);
    }
    let dir = cache::resolve_cache_dir(cli.cache_dir.as_deref());
    match cache::FileCache::open(&dir) {
        Ok(c) => Evaluator::with_cache(cli.convention, Arc::new(c)),
        Err(_) => Evaluator::new(cli.convention),
    }
}

fn dispatch(cli: Cli) -> i32 {
    let eval = build_evaluator(&cli);
    match &cli.command {
        Command::Field { modulus, subgroup } => {
            match colmez_core::GaloisCMField::new(*modulus, subgroup) {
                Ok(field) => match commands::cmd_field(&Arc::new(field)) {
                    Ok(doc) => {
                        println!("{doc}");
                        EXIT_OK
                    }
                    Err(err) => input_error(err),
                },
                Err(err) => input_error(err.into()),
            }
        }
        Command::Height { field, type_spec } => {
            let parsed = spec::parse_field_spec(field)
                .and_then(|f| spec::parse_type_spec(&f, type_spec).map(|t| (f, t)));
            match parsed {
                Ok((_field, t)) => match commands::cmd_height(&eval, &t) {
                    Ok(doc) => {
                        println!("{doc}");
                        EXIT_OK
                    }
                    Err(err) => input_error(err),
                },
                Err(err) => input_error(err),
            }
        }
        Command::Verify {
            suite,
            fields,
            conductor_max,
        } => {
            let fields = match spec::parse_field_list(fields) {
                Ok(f) if !f.is_empty() => f,
                Ok(_) => return input_error(anyhow::anyhow!("no fields given")),
                Err(err) => return input_error(err),
            };
            let ctx = SuiteContext {
                evaluator: eval,
                tolerance: cli.tolerance,
                conductor_max: *conductor_max,
                fields,
            };
            match commands::cmd_verify(*suite, &ctx, cli.jobs) {
                Ok((doc, code)) => {
                    println!("{doc}");
                    code
                }
                Err(err) => input_error(err),
            }
        }
        Command::Table { family, primes } => {
            if family != "biquadratic" {
                return input_error(anyhow::anyhow!("unknown family `{family}`"));
            }
            let primes = match spec::parse_prime_list(primes) {
                Ok(p) => p,
                Err(err) => return input_error(err),
            };
            match commands::cmd_table(&eval, &primes) {
                Ok(csv) => {
                    print!("{csv}");
                    EXIT_OK
                }
                Err(err) => input_error(err),
            }
        }
    }
}

fn input_error(err: anyhow::Error) -> i32 {
    eprintln!("error: {err:#}");
    EXIT_BAD_INPUT
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(cli),
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_BAD_INPUT,
            };
            let _ = err.print();
            code
        }
    }
}
