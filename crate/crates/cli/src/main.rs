use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use openness::verify::{run_suite, Suite};
use openness_cli::error::{CliError, EXIT_CHECK_FAILED, EXIT_PASS};
use openness_cli::spec::ProblemSpec;
use openness_cli::sweep::{parse_range, run_sweep, SweepParam};
use openness_cli::tasks;

#[derive(Parser)]
#[command(
    name = "openness",
    version,
    about = "Exact and numerical checks of effective openness bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Run the task described by a JSON spec and write a JSON report.
    Report {
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rerun a task over a parameter grid and write CSV.
    Sweep {
        spec: PathBuf,
        /// One of m, R, B0, delta, t.
        #[arg(long)]
        param: String,
        /// Inclusive grid `a:b:step`.
        #[arg(long)]
        range: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the acceptance checks, one line per criterion.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        suite: SuiteArg,
        #[arg(long, env = "OPENNESS_SEED", default_value_t = tasks::DEFAULT_SEED)]
        seed: u64,
    },
}

fn read_spec(path: &PathBuf) -> Result<ProblemSpec, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    ProblemSpec::from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Report { spec, output } => {
            let report = tasks::run(&read_spec(&spec)?)?;
            let mut text = report.to_json();
            text.push('\n');
            write_out(output.as_ref(), text.as_bytes())?;
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("check failed: {}: {}", c.name, c.detail);
            }
            Ok(if report.passed { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
        Command::Sweep {
            spec,
            param,
            range,
            output,
        } => {
            let param: SweepParam = param.parse()?;
            let grid = parse_range(&range)?;
            let spec = read_spec(&spec)?;
            let mut buf = Vec::new();
            let outcome = run_sweep(&spec, param, &grid, &mut buf)?;
            write_out(output.as_ref(), &buf)?;
            if outcome.failed_rows > 0 {
                eprintln!("{} of {} rows have failing checks", outcome.failed_rows, outcome.rows);
            }
            Ok(if outcome.failed_rows == 0 {
                EXIT_PASS
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Command::Verify { suite, seed } => {
            let suite = match suite {
                SuiteArg::Fast => Suite::Fast,
                SuiteArg::Full => Suite::Full,
            };
            let results = run_suite(suite, seed);
            for r in &results {
                println!("{r}");
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            println!("{} of {} criteria passed", results.len() - failed, results.len());
            Ok(if failed == 0 { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
    }
}

fn main() -> ExitCode {
    let code = run(Cli::parse()).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
