mod commands;
mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cmreg::fibration::FibrationParams;
use cmreg::Precision;
use std::path::PathBuf;
use std::process::ExitCode;

pub const TOL_RANGE: (f64, f64) = (1e-14, 1e-3);

#[derive(Parser, Debug)]
#[command(name = "cmreg", version, about = "Hodge numbers, periods and regulators of cyclic-cover surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hodge numbers, index sets and Hodge positions.
    Hodge(CommonArgs),
    /// Γ-products against B-products per character.
    Period(CommonArgs),
    /// Regulator values, normalizing periods and the non-vanishing checks.
    Regulator(CommonArgs),
    /// Run the acceptance checks on one parameter set or the default sweep.
    Verify(VerifyArgs),
    /// Connection matrices, residues and monodromy.
    Gm(CommonArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PrecisionArg {
    Double,
    Extended,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    #[arg(long)]
    pub p: Option<i64>,
    #[arg(long)]
    pub l: Option<i64>,
    #[arg(long)]
    pub a: Option<i64>,
    #[arg(long)]
    pub b: Option<i64>,
    #[arg(long)]
    pub n: Option<i64>,
    #[arg(long)]
    pub m: Option<i64>,
    #[arg(long)]
    pub h: Option<i64>,
    #[arg(long, value_parser = parse_tol)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = PrecisionArg::Extended)]
    pub precision: PrecisionArg,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub output: OutputFormat,
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Run the default sweep instead of a single parameter set.
    #[arg(long)]
    pub sweep: bool,
    /// Write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Comma-separated criterion ids to run (default: all).
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<u8>,
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(TOL_RANGE.0..=TOL_RANGE.1).contains(&v) {
        return Err(format!("tol must lie in [{:e}, {:e}]", TOL_RANGE.0, TOL_RANGE.1));
    }
    Ok(v)
}

impl CommonArgs {
    pub fn params(&self) -> Result<FibrationParams, CliError> {
        let need = |v: Option<i64>, name: &str| v.ok_or_else(|| CliError::Usage(format!("--{name} is required")));
        Ok(FibrationParams::new(need(self.p, "p")?, need(self.l, "l")?, need(self.a, "a")?, need(self.b, "b")?)?)
    }

    pub fn precision(&self) -> Precision {
        match self.precision {
            PrecisionArg::Double => Precision::Double,
            PrecisionArg::Extended => Precision::Extended,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input; exits with 2.
    Usage(String),
    /// A computation failed; exits with 1.
    Compute(String),
}

impl From<cmreg::Error> for CliError {
    fn from(e: cmreg::Error) -> Self {
        use cmreg::Error::*;
        match e {
            InvalidParams(_) | Precondition(_) | Unsupported(_) => CliError::Usage(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Hodge(c) => commands::hodge(c),
        Command::Period(c) => commands::period(c),
        Command::Regulator(c) => commands::regulator(c),
        Command::Verify(v) => commands::verify(v),
        Command::Gm(c) => commands::gm(c),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
