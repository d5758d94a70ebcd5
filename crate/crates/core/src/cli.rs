//! Command-line front end. Exit codes: 10 sat / reachable, 20 unsat /
//! unreachable, 30 unknown, 1 usage or input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::brp::{check_brp, check_formula, reachability_formula, BrpStatus};
use crate::encode::encode;
use crate::formula::{to_pnf, Formula, Theory};
use crate::oracle::{oracle_check, OracleCaps};
use crate::solver::{SolverConfig, Status};
use crate::syntax::{parse_formula, parse_kripke, ParseError};

pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_UNKNOWN: i32 = 30;
pub const EXIT_ERROR: i32 = 1;

#[derive(Parser, Debug)]
#[command(name = "cltlb", version, about = "Bounded satisfiability and reachability for temporal logic with integer constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bounded satisfiability of a formula.
    Check(CheckArgs),
    /// Bounded reachability of a target in a Kripke structure.
    Reach(ReachArgs),
    /// Write the SMT-LIB encoding without solving it.
    EmitSmt(EmitArgs),
    /// Decide a small instance by exhaustive enumeration.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TheoryArg {
    Dl,
    Lia,
}

impl From<TheoryArg> for Theory {
    fn from(t: TheoryArg) -> Theory {
        match t {
            TheoryArg::Dl => Theory::Dl,
            TheoryArg::Lia => Theory::Lia,
        }
    }
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// Single bound k.
    #[arg(long, conflicts_with = "bounds")]
    bound: Option<u32>,
    /// Inclusive bound range, e.g. `1..10`.
    #[arg(long, value_parser = parse_range)]
    bounds: Option<RangeInclusive<u32>>,
}

impl BoundArgs {
    fn range(&self) -> Result<RangeInclusive<u32>, String> {
        match (self.bound, &self.bounds) {
            (Some(k), _) => Ok(k..=k),
            (None, Some(r)) => Ok(r.clone()),
            (None, None) => Err("one of --bound or --bounds is required".into()),
        }
    }
}

#[derive(Args, Debug)]
struct SolverArgs {
    #[arg(long, value_enum, default_value = "dl")]
    theory: TheoryArg,
    /// Solver executable (default: $SOLVER_PATH, then `z3`).
    #[arg(long)]
    solver: Option<PathBuf>,
    /// Per-call solver timeout in milliseconds.
    #[arg(long)]
    timeout: Option<u64>,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        let base = match &self.solver {
            Some(p) => SolverConfig::new(p),
            None => SolverConfig::from_env(),
        };
        base.with_timeout(self.timeout.map(Duration::from_millis))
    }
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    formula: PathBuf,
    #[command(flatten)]
    bounds: BoundArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Print the witness of a sat answer.
    #[arg(long)]
    witness: bool,
    /// Also write the SMT-LIB script (single bound only).
    #[arg(long, value_name = "PATH")]
    emit_smt: Option<PathBuf>,
    /// Also run the enumeration oracle at each bound.
    #[arg(long)]
    oracle: bool,
    /// Run the oracle and report whether it agrees with the solver.
    #[arg(long)]
    compare: bool,
}

#[derive(Args, Debug)]
struct ReachArgs {
    #[arg(long)]
    kripke: PathBuf,
    /// Target state formula, e.g. `x < 0`.
    #[arg(long)]
    target: String,
    #[command(flatten)]
    bounds: BoundArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    witness: bool,
}

#[derive(Args, Debug)]
struct EmitArgs {
    #[arg(long, required_unless_present = "kripke")]
    formula: Option<PathBuf>,
    #[arg(long, requires = "target", conflicts_with = "formula")]
    kripke: Option<PathBuf>,
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    bound: u32,
    #[arg(long, value_enum, default_value = "dl")]
    theory: TheoryArg,
    /// Output file (default: standard output).
    #[arg(long, short, visible_alias = "emit-smt", value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    formula: PathBuf,
    #[command(flatten)]
    bounds: BoundArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Also solve with the SMT pipeline and report agreement.
    #[arg(long)]
    compare: bool,
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got `{s}`"))?;
    let a: u32 = a.trim().parse().map_err(|_| format!("bad lower bound in `{s}`"))?;
    let b: u32 = b
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|_| format!("bad upper bound in `{s}`"))?;
    if a > b {
        return Err(format!("empty range `{s}`"));
    }
    Ok(a..=b)
}

/// A user-facing failure; always exit code 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn located(path: &Path, e: ParseError) -> Failure {
    Failure(format!("{}:{e}", path.display()))
}

fn load_formula(path: &Path, theory: Theory) -> Result<Formula, Failure> {
    let text = read(path)?;
    parse_formula(&text, theory).map_err(|e| located(path, e))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Check(a) => cmd_check(a, out),
        Command::Reach(a) => cmd_reach(a, out),
        Command::EmitSmt(a) => cmd_emit_smt(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Sat => EXIT_SAT,
        Status::Unsat => EXIT_UNSAT,
        Status::Unknown => EXIT_UNKNOWN,
    }
}

fn cmd_check(a: CheckArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let theory = Theory::from(a.solver.theory);
    let phi = load_formula(&a.formula, theory)?;
    let range = a.bounds.range()?;
    let solver = a.solver.config();
    if let Some(path) = &a.emit_smt {
        if range.start() != range.end() {
            return Err(Failure("--emit-smt needs a single --bound".into()));
        }
        let artifact = encode(&to_pnf(&phi), *range.start(), theory, None)?;
        fs::write(path, artifact.full_script()).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    let with_oracle = a.oracle || a.compare;
    let pnf = to_pnf(&phi);
    let mut unknown = false;
    for k in range.clone() {
        let outcome = check_formula(&phi, k, theory, None, &solver)?;
        writeln!(out, "k = {k}: {} ({} ms)", outcome.status, outcome.stats.elapsed.as_millis())?;
        if with_oracle {
            let report = oracle_check(&pnf, k, OracleCaps::default())?;
            let verdict = if report.sat { Status::Sat } else { Status::Unsat };
            writeln!(out, "k = {k}: oracle {verdict}")?;
            if a.compare && outcome.status != Status::Unknown {
                if verdict != outcome.status {
                    return Err(Failure(format!(
                        "oracle ({verdict}) and solver ({}) disagree at k = {k}",
                        outcome.status
                    )));
                }
                writeln!(out, "k = {k}: agree")?;
            }
        }
        match outcome.status {
            Status::Sat => {
                writeln!(out, "sat at k = {k}")?;
                if a.witness {
                    if let Some(w) = &outcome.witness {
                        write!(out, "{w}")?;
                    }
                }
                return Ok(EXIT_SAT);
            }
            Status::Unknown => unknown = true,
            Status::Unsat => {}
        }
    }
    if unknown {
        writeln!(out, "unknown")?;
        Ok(EXIT_UNKNOWN)
    } else {
        writeln!(out, "unsat for k in {}..{}", range.start(), range.end())?;
        Ok(EXIT_UNSAT)
    }
}

fn cmd_reach(a: ReachArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let theory = Theory::from(a.solver.theory);
    let text = read(&a.kripke)?;
    let m = parse_kripke(&text, theory).map_err(|e| located(&a.kripke, e))?;
    let target = parse_formula(&a.target, theory).map_err(|e| Failure(format!("target:{e}")))?;
    let range = a.bounds.range()?;
    let result = check_brp(&m, &target, *range.start(), *range.end(), theory, &a.solver.config())?;
    for s in &result.stats {
        writeln!(out, "k = {}: {} ({} ms)", s.k, s.status, s.elapsed.as_millis())?;
    }
    writeln!(out, "{}", result.status)?;
    Ok(match result.status {
        BrpStatus::Reachable { witness, .. } => {
            if a.witness {
                write!(out, "{witness}")?;
            }
            EXIT_SAT
        }
        BrpStatus::UnreachableUpTo(_) => EXIT_UNSAT,
        BrpStatus::Unknown { .. } => EXIT_UNKNOWN,
    })
}

fn cmd_emit_smt(a: EmitArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let theory = Theory::from(a.theory);
    let phi = match (&a.formula, &a.kripke, &a.target) {
        (Some(f), _, _) => load_formula(f, theory)?,
        (None, Some(kpath), Some(t)) => {
            let text = read(kpath)?;
            let m = parse_kripke(&text, theory).map_err(|e| located(kpath, e))?;
            let target = parse_formula(t, theory).map_err(|e| Failure(format!("target:{e}")))?;
            reachability_formula(&m, &target)?
        }
        _ => return Err(Failure("need --formula, or --kripke with --target".into())),
    };
    let artifact = encode(&to_pnf(&phi), a.bound, theory, None)?;
    let script = artifact.full_script();
    match &a.output {
        Some(path) => fs::write(path, script).map_err(|e| Failure(format!("{}: {e}", path.display())))?,
        None => out.write_all(script.as_bytes())?,
    }
    Ok(0)
}

fn cmd_oracle(a: OracleArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let theory = Theory::from(a.solver.theory);
    let phi = load_formula(&a.formula, theory)?;
    let pnf = to_pnf(&phi);
    let range = a.bounds.range()?;
    let solver = a.solver.config();
    for k in range.clone() {
        let report = oracle_check(&pnf, k, OracleCaps::default())?;
        let verdict = if report.sat { Status::Sat } else { Status::Unsat };
        writeln!(out, "k = {k}: oracle {verdict} ({} candidates)", report.leaves)?;
        if a.compare {
            let outcome = check_formula(&phi, k, theory, None, &solver)?;
            if outcome.status == Status::Unknown {
                writeln!(out, "k = {k}: solver unknown")?;
            } else if outcome.status == verdict {
                writeln!(out, "k = {k}: agree")?;
            } else {
                return Err(Failure(format!(
                    "oracle ({verdict}) and solver ({}) disagree at k = {k}",
                    outcome.status
                )));
            }
        }
        if report.sat {
            writeln!(out, "sat at k = {k}")?;
            return Ok(EXIT_SAT);
        }
    }
    writeln!(out, "unsat for k in {}..{}", range.start(), range.end())?;
    Ok(status_code(Status::Unsat))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..10"), Ok(1..=10));
        assert_eq!(parse_range("3..=4"), Ok(3..=4));
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("7").is_err());
    }

    #[test]
    fn usage_errors_exit_1() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["cltlb", "frobnicate"], &mut o, &mut e), EXIT_ERROR);
        assert_eq!(
            run(["cltlb", "check", "--formula", "f", "--bound", "1", "--bounds", "1..2"], &mut o, &mut e),
            EXIT_ERROR
        );
        assert_eq!(run(["cltlb", "--help"], &mut o, &mut e), 0);
        assert!(String::from_utf8_lossy(&o).contains("reach"));
    }

    #[test]
    fn missing_file_exits_1() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(
            ["cltlb", "emit-smt", "--formula", "/nonexistent/f.clt", "--bound", "1"],
            &mut o,
            &mut e,
        );
        assert_eq!(code, EXIT_ERROR);
        assert!(String::from_utf8_lossy(&e).contains("/nonexistent/f.clt"));
    }
}
