use std::process::ExitCode;

use clap::Parser;
use steinweil::cli::{self, Args, ReportFormat, RunConfig};

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match RunConfig::from_args(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("steinweil: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match cli::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("steinweil: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match args.report {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Json => report.to_json(),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("steinweil: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
            eprint!("{}", report.to_text().lines().last().map(|l| format!("{l}\n")).unwrap_or_default());
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
