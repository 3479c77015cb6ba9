use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use inertia_forms::cli::{self, Command, Format, RunOptions, Scenario};

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Cmd {
    Loopspace,
    Dims,
    Cohomology,
    Verify,
    HomotopyCheck,
    Morita,
    ChartCheck,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Table,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Fault {
    Inject,
}

/// Differential-form complexes on loop spaces of linear group actions.
#[derive(Debug, Parser)]
#[command(name = "inertia-forms", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Scenario file (JSON).
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
    /// Weight cutoff; overrides the scenario.
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random families for homotopy-check.
    #[arg(long)]
    samples: Option<usize>,
    /// Zero the differential at its lowest nontrivial slot.
    #[arg(long, value_enum)]
    fault: Option<Fault>,
}

fn command(c: Cmd) -> Command {
    match c {
        Cmd::Loopspace => Command::Loopspace,
        Cmd::Dims => Command::Dims,
        Cmd::Cohomology => Command::Cohomology,
        Cmd::Verify => Command::Verify,
        Cmd::HomotopyCheck => Command::HomotopyCheck,
        Cmd::Morita => Command::Morita,
        Cmd::ChartCheck => Command::ChartCheck,
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    panic::set_hook(Box::new(|info| eprintln!("error: internal panic: {info}")));
    let outcome = panic::catch_unwind(|| {
        let scenario = match Scenario::from_file(&args.config) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        };
        let format = match args.format {
            Some(OutFormat::Json) => Format::Json,
            Some(OutFormat::Csv) => Format::Csv,
            Some(OutFormat::Table) => Format::Table,
            None => scenario.format,
        };
        let opts = RunOptions {
            cutoff: args.cutoff,
            seed: args.seed,
            samples: args.samples,
            fault: args.fault.is_some(),
        };
        let result = cli::run(&scenario, command(args.command), &opts);
        let code = cli::exit_code(&result);
        match result {
            Ok(report) => print!("{}", cli::render(&report, format)),
            Err(e) if e.is_structural() => eprintln!("error: {e}"),
            Err(e) => print!("{}", cli::render(&cli::failure_report(&scenario.name, &e), format)),
        }
        code
    });
    ExitCode::from(outcome.unwrap_or(2) as u8)
}
