use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use vecdual_cli::{check, run, RunOptions, EXIT_OK};

#[derive(Parser)]
#[command(name = "vecdual", version, about = "Sampled vector duality, Farkas certificates and property suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its report.
    Run(RunArgs),
    /// Validate a scenario and build its instance without running it.
    Check {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Reproduce the worked example with its default grids.
    P1(OutArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Probes per axis of the front CSV window.
    #[arg(long)]
    probe_res: Option<usize>,
    #[arg(long)]
    quiet: bool,
}

impl OutArgs {
    fn options(&self) -> RunOptions {
        RunOptions { out: self.out.clone(), seed: self.seed, probe_res: self.probe_res }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (result, quiet) = match &cli.command {
        Command::Run(a) => (run(&a.scenario, &a.out.options()), a.out.quiet),
        Command::P1(a) => (vecdual_cli::tasks::run_p1(&a.options()), a.quiet),
        Command::Check { scenario } => {
            return match check(scenario) {
                Ok(sc) => {
                    eprintln!("{}: ok ({:?})", sc.name, sc.task);
                    ExitCode::from(EXIT_OK as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            };
        }
    };
    match result {
        Ok(o) => {
            if !quiet {
                for f in &o.report.failures {
                    eprintln!("FAIL {f}");
                }
                for p in &o.written {
                    eprintln!("wrote {}", p.display());
                }
                eprintln!("{}: {} in {:.2}s", o.report.scenario, o.report.status, start.elapsed().as_secs_f64());
            }
            ExitCode::from(o.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
