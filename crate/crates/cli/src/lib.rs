//! Command-line front end: argument parsing, orchestration of the library
//! computations and report emission.
//!
//! Every run produces an [`Envelope`] whose rows carry a value, a target, a
//! tolerance and a verdict. The process exits 0 iff every verdict passes;
//! see [`error`] for the other exit codes.

pub mod commands;
pub mod error;
pub mod report;
pub mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use commands::{
    ConstantArgs, FiberArgs, FollandSteinArgs, IdentitiesArgs, LogHardyArgs, Outcome,
    SharpnessArgs, UniformArgs,
};
pub use error::{CliError, EXIT_FAIL, EXIT_NUMERICAL, EXIT_PASS, EXIT_USAGE};
pub use report::{Envelope, Row, Table, Verdict};
use serde::Serialize;
use serde_json::json;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use verify::VerifyArgs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "heisenmag",
    version,
    about = "Magnetic Hardy inequalities on the Heisenberg group: computations and checks"
)]
pub struct Cli {
    /// Seed for every random sample; recorded in the report.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Worker threads. Reports are byte-stable at 1; with more threads the
    /// last digits of parallel reductions may vary.
    #[arg(long, global = true, env = "HEISENMAG_THREADS", default_value_t = 1)]
    pub threads: usize,
    /// What goes to stdout (or to --output).
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the main report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Also write the plot-ready CSV table to this path.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Include wall-clock timings in the JSON report.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The constant c = min_g lambda_1(g) of the quartic family.
    Constant(ConstantArgs),
    /// Fiber Hardy constants mu(alpha, m) against the clamped bound.
    FiberHardy(FiberArgs),
    /// Spectral bottom c |B|^(2/3) of the constant-field operator.
    UniformBottom(UniformArgs),
    /// Rayleigh quotients of the sharpness sequence and the cutoff integrals.
    Sharpness(SharpnessArgs),
    /// Seeded battery of pointwise and integral identities.
    Identities(IdentitiesArgs),
    /// Quotients of the Folland-Stein sequence against 1 - alpha^2.
    FollandStein(FollandSteinArgs),
    /// One-dimensional log-Hardy checks and eigenvalue-interval data.
    LogHardy(LogHardyArgs),
    /// The full acceptance battery with pinned parameters.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Constant(_) => "constant",
            Command::FiberHardy(_) => "fiber-hardy",
            Command::UniformBottom(_) => "uniform-bottom",
            Command::Sharpness(_) => "sharpness",
            Command::Identities(_) => "identities",
            Command::FollandStein(_) => "folland-stein",
            Command::LogHardy(_) => "log-hardy",
            Command::Verify(_) => "verify",
        }
    }

    fn args_json(&self) -> serde_json::Value {
        let v = match self {
            Command::Constant(a) => serde_json::to_value(a),
            Command::FiberHardy(a) => serde_json::to_value(a),
            Command::UniformBottom(a) => serde_json::to_value(a),
            Command::Sharpness(a) => serde_json::to_value(a),
            Command::Identities(a) => serde_json::to_value(a),
            Command::FollandStein(a) => serde_json::to_value(a),
            Command::LogHardy(a) => serde_json::to_value(a),
            Command::Verify(a) => serde_json::to_value(a),
        };
        v.expect("arguments serialise")
    }
}

/// A finished run: the envelope and its CSV table.
#[derive(Debug)]
pub struct Report {
    pub envelope: Envelope,
    pub table: Table,
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Constant(a) => commands::constant(a),
        Command::FiberHardy(a) => commands::fiber_hardy(a),
        Command::UniformBottom(a) => commands::uniform(a),
        Command::Sharpness(a) => commands::sharpness(a),
        Command::Identities(a) => commands::identities(a, cli.seed),
        Command::FollandStein(a) => commands::folland_stein(a),
        Command::LogHardy(a) => commands::log_hardy(a),
        Command::Verify(a) => verify::verify(a, cli.seed),
    }
}

/// Runs the command on a dedicated pool of `cli.threads` workers.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    if cli.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} threads: {e}", cli.threads)))?;
    let outcome = pool.install(|| dispatch(cli))?;
    let pass = outcome.rows.iter().all(Row::passed);
    let table = outcome
        .table
        .unwrap_or_else(|| Table::of_rows(&outcome.rows));
    let envelope = Envelope {
        tool: report::TOOL,
        version: report::VERSION,
        command: cli.command.name().to_string(),
        config: json!({
            "seed": cli.seed,
            "threads": cli.threads,
            "args": cli.command.args_json(),
        }),
        rows: outcome.rows,
        data: outcome.data,
        pass,
        timings: cli.timings.then_some(outcome.timings),
    };
    Ok(Report { envelope, table })
}

fn write_to(
    path: &Option<PathBuf>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(p)?);
            f(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => f(stdout),
    }
}

/// Writes the report as requested by the output flags.
pub fn emit(cli: &Cli, report: &Report, stdout: &mut dyn Write) -> Result<(), CliError> {
    if let Some(path) = &cli.csv {
        write_to(&Some(path.clone()), stdout, |w| {
            Ok(report.table.write(w)?)
        })?;
    }
    write_to(&cli.output, stdout, |w| match cli.format {
        Format::Json => Ok(w.write_all(report.envelope.to_json().as_bytes())?),
        Format::Csv => Ok(report.table.write(w)?),
    })
}

/// Parses `args`, runs, emits and returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let out: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    let result = run(&cli).and_then(|r| emit(&cli, &r, stdout).map(|_| r));
    match result {
        Ok(report) => {
            if report.envelope.pass {
                EXIT_PASS
            } else {
                for r in report.envelope.failing() {
                    let _ = writeln!(
                        stderr,
                        "FAIL {}: value {:e}, target {:e}, tolerance {:e} ({:?})",
                        r.id, r.value, r.target, r.tolerance, r.comparison
                    );
                }
                EXIT_FAIL
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "heisenmag: {e}");
            e.exit_code()
        }
    }
}
