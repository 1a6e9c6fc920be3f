//! Batch front end: `fsig <command> [file] [flags]`.
//!
//! Results go to stdout as JSON or CSV, diagnostics to stderr. Exit codes:
//! 0 on success, 1 on input or resource errors, 2 when a check fails.

mod commands;
pub mod document;
pub mod problem;
mod selftest;

use std::ffi::OsString;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use num_rational::BigRational;

pub use document::{emit, Format, ResultDocument};
pub use problem::{Overrides, Problem, ProblemFile};

use crate::error::{Error, Result};
use crate::ffpoly::MonomialOrder;
use problem::{parse_grid, RoundingName};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Fsig,
    Curve,
    Diff,
    Hk,
    Fpt,
    Ratio,
    AdjointCheck,
    VerifyCover,
    Selftest,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Fsig => "fsig",
            Command::Curve => "curve",
            Command::Diff => "diff",
            Command::Hk => "hk",
            Command::Fpt => "fpt",
            Command::Ratio => "ratio",
            Command::AdjointCheck => "adjoint-check",
            Command::VerifyCover => "verify-cover",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderName {
    Grevlex,
    Lex,
}

#[derive(Debug, Parser)]
#[command(
    name = "fsig",
    version,
    about = "Frobenius splitting invariants of hypersurface pairs over F_p"
)]
pub struct Cli {
    pub command: Command,
    /// TOML problem file (not needed for selftest).
    pub file: Option<std::path::PathBuf>,
    /// Highest Frobenius level (default from the task, else 2).
    #[arg(long)]
    pub emax: Option<u32>,
    /// Comma-separated exact fractions in [0, 1].
    #[arg(long)]
    pub grid: Option<String>,
    /// Exponent rounding: ceil(t(q-1)) or ceil(tq).
    #[arg(long, value_enum)]
    pub rounding: Option<RoundingName>,
    #[arg(long, value_enum)]
    pub order: Option<OrderName>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Worker threads for independent levels and grid points.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Cap on critical pairs per Gröbner basis (default from FSIG_BUDGET).
    #[arg(long)]
    pub budget: Option<u64>,
}

const DEFAULT_EMAX: u32 = 2;

fn default_grid() -> Vec<BigRational> {
    parse_grid("0,1/4,1/2,3/4,1").expect("static grid")
}

fn budget(cli: &Cli) -> Result<Option<u64>> {
    if let Some(b) = cli.budget {
        return Ok(Some(b));
    }
    match std::env::var("FSIG_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidInput(format!("FSIG_BUDGET='{v}' is not a number"))),
        Err(_) => Ok(None),
    }
}

fn configure_threads(n: Option<usize>) {
    let Some(n) = n else { return };
    #[cfg(feature = "parallel")]
    {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
        eprintln!("note: built without the parallel feature, --threads ignored");
    }
}

/// Runs one command and returns the document; errors are returned as-is.
pub fn execute(cli: &Cli) -> Result<ResultDocument> {
    let mut doc = ResultDocument::new(cli.command.name());
    if cli.command == Command::Selftest {
        selftest::run(&mut doc)?;
        return Ok(doc);
    }
    let path = cli
        .file
        .as_ref()
        .ok_or_else(|| Error::InvalidInput(format!("{} needs a problem file", cli.command.name())))?;
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let overrides = Overrides {
        rounding: cli.rounding.map(Into::into),
        order: cli.order.map(|o| match o {
            OrderName::Grevlex => MonomialOrder::Grevlex,
            OrderName::Lex => MonomialOrder::Lex,
        }),
        max_pairs: budget(cli)?,
    };
    let problem = Problem::from_toml(&src, &overrides)?;
    if let Some(c) = &problem.file.task.command {
        if c != cli.command.name() {
            eprintln!("note: file suggests '{c}', running '{}'", cli.command.name());
        }
    }
    let emax = cli.emax.or(problem.file.task.emax).unwrap_or(DEFAULT_EMAX);
    if emax == 0 {
        return Err(Error::InvalidInput("--emax must be at least 1".into()));
    }
    let grid = match (&cli.grid, &problem.file.task.grid) {
        (Some(g), _) => parse_grid(g)?,
        (None, Some(g)) => g.iter().map(|s| problem::parse_rational(s)).collect::<Result<_>>()?,
        (None, None) => default_grid(),
    };
    doc.input = commands::echo(&problem, emax);
    doc.input["file"] = serde_json::Value::String(path.display().to_string());
    match cli.command {
        Command::Fsig => commands::fsig(&problem, emax, &mut doc)?,
        Command::Curve => {
            doc.input["grid"] = grid.iter().map(|t| t.to_string()).collect::<Vec<_>>().into();
            commands::curve(&problem, emax, &grid, &mut doc)?
        }
        Command::Diff => commands::diff(&problem, emax, &mut doc)?,
        Command::Hk => commands::hk(&problem, emax, &mut doc)?,
        Command::Fpt => commands::fpt(&problem, emax, &mut doc)?,
        Command::Ratio => commands::ratio(&problem, emax, &mut doc)?,
        Command::AdjointCheck => commands::adjoint_check(&problem, emax, &mut doc)?,
        Command::VerifyCover => commands::verify_cover_cmd(&problem, emax, &mut doc)?,
        Command::Selftest => unreachable!(),
    }
    Ok(doc)
}

/// Parses arguments, runs, prints, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    configure_threads(cli.threads);
    let start = Instant::now();
    match execute(&cli) {
        Ok(mut doc) => {
            doc.timing.elapsed_ms = start.elapsed().as_millis();
            print!("{}", emit(&doc, cli.format));
            for c in doc.checks.iter().filter(|c| !c.passed) {
                eprintln!("check failed: {}: {}", c.name, c.detail);
            }
            if cli.format == Format::Csv {
                eprintln!("elapsed: {} ms", doc.timing.elapsed_ms);
            }
            if doc.all_passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if cli.format == Format::Json {
                let mut doc = ResultDocument::new(cli.command.name());
                doc.error = Some(e.to_string());
                doc.partial = true;
                doc.timing.elapsed_ms = start.elapsed().as_millis();
                print!("{}", emit(&doc, cli.format));
            }
            match e {
                Error::InvariantViolation(_) => EXIT_CHECK_FAILED,
                _ => EXIT_ERROR,
            }
        }
    }
}
