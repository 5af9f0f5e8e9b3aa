//! `chiralkit`: reads a JSON request on stdin, writes a JSON result on stdout.
//!
//! Exit status is 0 on success and 2 on any validation or computation error,
//! in which case stdout carries `{"error": {"code": ..., "message": ...}}`.

mod commands;
mod json;

use std::io::Read;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{ArgAction, Parser, Subcommand};
use serde_json::Value;

use commands::Options;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    code: String,
    message: String,
}

impl CliError {
    pub fn new(code: &str, message: impl Into<String>) -> Self {
        CliError { code: code.to_string(), message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new("invalid_input", message)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({"error": {"code": self.code, "message": self.message}})
    }
}

impl From<chiralkit::Error> for CliError {
    fn from(e: chiralkit::Error) -> Self {
        CliError::new(e.code(), e.to_string())
    }
}

pub fn parse_signature(s: &str) -> Result<(usize, usize), String> {
    let (p, q) = s.split_once(',').ok_or_else(|| format!("expected p,q, got {s}"))?;
    let p = p.trim().parse().map_err(|_| format!("bad p in {s}"))?;
    let q = q.trim().parse().map_err(|_| format!("bad q in {s}"))?;
    Ok((p, q))
}

#[derive(Parser, Debug)]
#[command(name = "chiralkit", version, about = "Direct/indirect classification of isometries and chirality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Signature of the quadratic form, e.g. `1,3`.
    #[arg(long, global = true, value_parser = parse_signature)]
    signature: Option<(usize, usize)>,

    /// Float-mode comparison tolerance.
    #[arg(long, global = true, env = "CHIRALKIT_TOL", default_value_t = chiralkit::DEFAULT_TOLERANCE)]
    tol: f64,

    /// Exact rational arithmetic; numbers may be given as "p/q" strings.
    #[arg(long, global = true)]
    exact: bool,

    /// Seed for the chirality sample grid.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Angular resolution of the cone candidate family.
    #[arg(long, global = true, default_value_t = 8)]
    family_resolution: usize,

    /// Let the cone scan solve for a boost.
    #[arg(long, global = true, default_value_t = false, action = ArgAction::Set, value_name = "BOOL")]
    allow_boosts: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Classify one orthogonal, affine, Poincaré or Galilean element.
    Classify,
    /// Factor an O(p,q) matrix into reflections.
    Decompose,
    /// Compose a list of elements (or rebuild a reflection factorization).
    Compose,
    /// Square closure of a finite matrix group.
    Oracle,
    /// Chirality verdict for a uniformly moving spinning cone.
    ConeDemo,
    /// Symmetries of a labelled point or event set.
    Symmetries,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Decompose => "decompose",
            Command::Compose => "compose",
            Command::Oracle => "oracle",
            Command::ConeDemo => "cone-demo",
            Command::Symmetries => "symmetries",
        }
    }
}

fn execute(cli: &Cli, input: &str) -> Result<Value, CliError> {
    if !(cli.tol >= 0.0 && cli.tol.is_finite()) {
        return Err(CliError::new(
            "invalid_parameter",
            format!("tolerance must be finite and nonnegative, got {}", cli.tol),
        ));
    }
    let request: Value = if input.trim().is_empty() {
        Value::Object(Default::default())
    } else {
        serde_json::from_str(input).map_err(|e| CliError::new("invalid_json", e.to_string()))?
    };
    if !request.is_object() {
        return Err(CliError::input("request must be a JSON object"));
    }
    let opts = Options {
        signature: cli.signature,
        tol: cli.tol,
        exact: cli.exact,
        seed: cli.seed,
        family_resolution: cli.family_resolution,
        allow_boosts: cli.allow_boosts,
    };
    commands::dispatch(cli.command.name(), &request, &opts)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            print!("{}", json::render(&CliError::new("usage", message).to_json()));
            return ExitCode::from(2);
        }
    };
    let mut input = String::new();
    let result = match std::io::stdin().read_to_string(&mut input) {
        Ok(_) => execute(&cli, &input),
        Err(e) => Err(CliError::new("invalid_input", format!("cannot read stdin: {e}"))),
    };
    match result {
        Ok(value) => {
            print!("{}", json::render(&value));
            ExitCode::SUCCESS
        }
        Err(e) => {
            print!("{}", json::render(&e.to_json()));
            ExitCode::from(2)
        }
    }
}
