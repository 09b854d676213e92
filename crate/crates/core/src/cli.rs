//! Command-line front end. [`run`] takes the argument list and output
//! streams so it can be driven from tests; the binary only forwards to it.
//!
//! Exit codes: 0 when everything passed, 1 when a check or decomposition
//! failed, 2 for usage errors (bad arguments, unknown names, parse errors).

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::coeffring::Var;
use crate::error::Error;
use crate::flagrep::matrix_of;
use crate::g2algebra::{self, Subset};
use crate::opexpr::{parse_operator, print_operator};
use crate::registry::{named_operator, run_checks, select, Params};
use crate::report::{CheckReport, Status};
use crate::weyl::{DiffOp, VariableSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "opcalc", version, about = "Exact checks of differential-operator identities for the Coulomb problem")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the checks whose names match a glob such as "2d.*".
    Verify {
        pattern: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
        /// Numeric parameter, e.g. beta=3/2 (repeatable).
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        /// Report elapsed time as 0, for byte-comparable output.
        #[arg(long)]
        no_timing: bool,
    },
    /// List check names matching a glob.
    List {
        #[arg(default_value = "*")]
        pattern: String,
    },
    /// Print a built-in operator in canonical form.
    Show {
        name: String,
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Matrix of an operator on the flag space P_n.
    Matrix {
        name: String,
        n: usize,
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decompose an operator over ordered monomials in the g(2) generators.
    Decompose {
        name: String,
        #[arg(long, default_value_t = g2algebra::DEFAULT_DECOMPOSE_DEGREE)]
        degree: usize,
        /// lowering (the eight lowering and gl(2) generators) or all.
        #[arg(long, default_value = "lowering")]
        subset: String,
        #[arg(long, default_value_t = g2algebra::DEFAULT_PARAM_DEGREE)]
        param_degree: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Parse an operator expression and print its normal-ordered form.
    Parse {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Chart: xyz, r-rho-phi, r-rho, r-u, r, sphere.
        #[arg(long, default_value = "r-u")]
        chart: String,
    },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn write_json(out: &mut dyn Write, v: &impl Serialize) -> Result<(), Error> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Error::Invalid(e.to_string()))?;
    writeln!(out, "{s}").map_err(io)
}

fn io(e: std::io::Error) -> Error {
    Error::Invalid(format!("write failed: {e}"))
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Error> {
    match cmd {
        Command::Verify { pattern, format, jobs, params, no_timing } => {
            let params = Params::parse(&params)?;
            let checks = select(&pattern)?;
            if checks.is_empty() {
                return Err(Error::Invalid(format!("no checks matched `{pattern}`")));
            }
            let mut reports = run_checks(&checks, &params, jobs);
            if no_timing {
                reports.iter_mut().for_each(|r| r.elapsed_ms = 0);
            }
            write_reports(out, &reports, format)?;
            Ok(if reports.iter().all(CheckReport::passed) { EXIT_OK } else { EXIT_FAIL })
        }
        Command::List { pattern } => {
            let checks = select(&pattern)?;
            if checks.is_empty() {
                return Err(Error::Invalid(format!("no checks matched `{pattern}`")));
            }
            for c in checks {
                writeln!(out, "{}", c.name).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Show { name, params, format } => {
            let op = specialized(&name, &Params::parse(&params)?)?;
            match format {
                Format::Text => writeln!(out, "{}", print_operator(&op)).map_err(io)?,
                Format::Json => write_json(out, &OperatorExport::new(&name, &op))?,
            }
            Ok(EXIT_OK)
        }
        Command::Matrix { name, n, params, format } => {
            let mut params = Params::parse(&params)?;
            if params.get(Var::N).is_none() {
                params.0.push((Var::N, crate::coeffring::Scalar::int(n as i64)));
            }
            let op = specialized(&name, &params)?;
            let m = matrix_of(&op, n)?;
            let export = m.to_export();
            match format {
                Format::Json => write_json(out, &export)?,
                Format::Text => {
                    writeln!(out, "basis: {}", export.basis.join(", ")).map_err(io)?;
                    for row in &export.entries {
                        writeln!(out, "[{}]", row.join(", ")).map_err(io)?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Decompose { name, degree, subset, param_degree, format } => {
            let subset = Subset::parse(&subset)
                .filter(|s| *s != Subset::Raising)
                .ok_or_else(|| Error::Invalid(format!("unknown subset `{subset}` (lowering or all)")))?;
            let target = named_operator(&name)?;
            if target.spec().name() != "r-u" {
                return Err(Error::Invalid(format!("`{name}` is not an operator on (r, u)")));
            }
            let d = g2algebra::decompose(&name, &target, subset, degree, param_degree, None)?;
            match format {
                Format::Json => write_json(out, &d.to_export())?,
                Format::Text => {
                    writeln!(out, "{name} over {} (degree <= {degree})", subset.tag()).map_err(io)?;
                    for (m, c) in d.table() {
                        writeln!(out, "  {m}: {c}").map_err(io)?;
                    }
                    writeln!(out, "residual: {}", if d.succeeded() { "0".into() } else { d.residual.to_string() })
                        .map_err(io)?;
                    for n in &d.notes {
                        writeln!(out, "note: {n}").map_err(io)?;
                    }
                }
            }
            Ok(if d.succeeded() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Parse { expr, chart } => {
            let spec = VariableSpec::by_name(&chart)?;
            let op = parse_operator(&expr, &spec)?;
            writeln!(out, "{}", print_operator(&op)).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

fn specialized(name: &str, params: &Params) -> Result<DiffOp, Error> {
    let op = named_operator(name)?;
    if params.is_empty() {
        return Ok(op);
    }
    op.substitute(&params.bindings())
}

pub fn write_reports(out: &mut dyn Write, reports: &[CheckReport], format: Format) -> Result<(), Error> {
    match format {
        Format::Json => write_json(out, &reports),
        Format::Text => {
            for r in reports {
                writeln!(out, "{r}").map_err(io)?;
            }
            let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
            writeln!(
                out,
                "{} checks: {} passed, {} failed, {} errors",
                reports.len(),
                count(Status::Pass),
                count(Status::Fail),
                count(Status::Error)
            )
            .map_err(io)
        }
    }
}

#[derive(Serialize)]
struct OperatorExport {
    name: String,
    chart: String,
    order: u32,
    text: String,
}

impl OperatorExport {
    fn new(name: &str, op: &DiffOp) -> Self {
        OperatorExport { name: name.into(), chart: op.spec().name().into(), order: op.order(), text: print_operator(op) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("opcalc").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn parse_command() {
        let (code, out, _) = call(&["parse", "D[r]*r - r*D[r]"]);
        assert_eq!((code, out.trim()), (0, "1"));
        let (code, out, _) = call(&["parse", "-r*D[r]", "--chart", "r"]);
        assert_eq!((code, out.trim()), (0, "-r*D[r]"));
        let (code, _, err) = call(&["parse", "D[q]"]);
        assert_eq!(code, 2);
        assert!(err.contains("q"), "{err}");
    }

    #[test]
    fn unmatched_selector_is_usage_error() {
        let (code, _, err) = call(&["verify", "nosuch.*"]);
        assert_eq!(code, 2);
        assert!(err.contains("no checks matched"));
    }

    #[test]
    fn identity_matrix() {
        let (code, out, _) = call(&["matrix", "identity", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 5);
        assert!(out.contains("[1, 0, 0, 0]"));
    }

    #[test]
    fn generator_matrix_uses_flag_mark() {
        let (code, _, err) = call(&["matrix", "J4", "3"]);
        assert_eq!(code, 0, "{err}");
        let (code, _, _) = call(&["matrix", "J4", "3", "--param", "n=0"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn bad_arguments() {
        assert_eq!(call(&["verify"]).0, 2);
        assert_eq!(call(&["show", "nothing"]).0, 2);
        assert_eq!(call(&["decompose", "h_a", "--subset", "raising"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }
}
