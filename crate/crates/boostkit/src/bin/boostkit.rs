use std::path::PathBuf;
use std::process::ExitCode;

use boostkit::cli::{check, run_all, run_scenario_to};
use boostkit::report::Status;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "boostkit", version, about = "Run Dirac-algebra, moment and lattice scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and write its JSON report.
    Run {
        scenario: PathBuf,
        /// Report path (default: reports/<stem>.json beside the scenario).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run every *.json scenario in a directory.
    RunAll { dir: PathBuf },
    /// Run the built-in gamma-matrix and Lorentz-algebra suite.
    Check,
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code.clamp(0, 255) as u8)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { scenario, output } => match run_scenario_to(&scenario, output.as_deref()) {
            Ok(run) => {
                println!("{}: {} -> {}", scenario.display(), run.report.status().as_str(), run.report_path.display());
                if let Some(e) = &run.report.error {
                    eprintln!("error: {e}");
                }
                for r in run.report.failed_residuals() {
                    eprintln!("residual {} = {:e} out of tolerance", r.name, r.value);
                }
                exit(run.exit_code)
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit(e.exit_code())
            }
        },
        Command::RunAll { dir } => match run_all(&dir) {
            Ok(summary) => {
                for w in &summary.warnings {
                    eprintln!("warning: {w}");
                }
                print!("{}", summary.render());
                exit(summary.exit_code)
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit(2)
            }
        },
        Command::Check => match check() {
            Ok(report) => {
                print!("{}", String::from_utf8_lossy(&report.to_bytes()));
                exit(if report.status() == Status::Pass { 0 } else { 1 })
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit(e.exit_code())
            }
        },
    }
}
