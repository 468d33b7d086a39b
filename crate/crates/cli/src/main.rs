use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cusplab_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match cli.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    match cusplab_cli::run_scenario(&config) {
        Ok(report) => {
            // A closed stdout is not a failure of the run.
            let mut out = std::io::stdout().lock();
            if let Some(s) = &report.singularity {
                let gamma = s.gamma.map_or_else(|| "n/a".to_string(), |g| format!("{g:.4}"));
                let _ = writeln!(out, "{}: {:?}, gamma {gamma}", report.scenario, s.kind());
            }
            for a in &report.artifacts {
                let _ = writeln!(out, "wrote {}", config.output.join(a).display());
            }
            let _ = writeln!(out, "wall time {:.3} s", report.wall_time.as_secs_f64());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
