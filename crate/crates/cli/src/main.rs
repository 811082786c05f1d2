use clap::Parser;
use fastlight_cli::commands::{run, CliError, Command};
use fastlight_cli::output::Format;
use fastlight_cli::scenario::Scenario;
use fastlight_core::resonator::EtaConvention;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum Convention {
    Derived,
    Paper,
}

/// Fast-light ring-cavity rotation sensing calculator.
#[derive(Debug, Parser)]
#[command(name = "fastlight", version)]
struct Args {
    command: Command,
    /// Scenario file; repeat to layer overrides, later files win
    #[arg(long = "scenario", short = 's')]
    scenarios: Vec<PathBuf>,
    /// Directory for CSV or JSON output
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Overrides the scenario's `convention` key
    #[arg(long, value_enum)]
    convention: Option<Convention>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(args: &Args) -> Result<(), CliError> {
    let mut scenario = Scenario::load(&args.scenarios)?;
    if let Some(c) = args.convention {
        scenario.convention = match c {
            Convention::Derived => EtaConvention::Derived,
            Convention::Paper => EtaConvention::FullWidth,
        };
    }
    let report = run(args.command, &scenario)?;
    print!("{}", report.to_text());
    if let Some(dir) = &args.out {
        let files = report
            .write(dir, args.format)
            .map_err(|e| CliError::Io(e.to_string()))?;
        for f in files {
            eprintln!("wrote {}", f.display());
        }
    }
    Ok(())
}
