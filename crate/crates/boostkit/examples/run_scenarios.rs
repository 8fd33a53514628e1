// Runs the bundled scenario directory through the library entry points and
// prints the summary table. Reports land in `scenarios/reports/`.
//
// ```text
// cargo run --example run_scenarios [dir]
// ```

use std::path::PathBuf;

use boostkit::cli::run_all;

pub fn run() -> boostkit::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios"));
    let summary = run_all(&dir)?;
    for w in &summary.warnings {
        eprintln!("warning: {w}");
    }
    print!("{}", summary.render());
    if summary.exit_code != 0 {
        std::process::exit(summary.exit_code);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> boostkit::Result<()> {
    run()
}
