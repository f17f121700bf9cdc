use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pzcl_cli::commands::{self, Output};
use pzcl_cli::config::{RunArgs, RunConfig};
use pzcl_cli::reproduce::{self, Status};
use pzcl_core::{Error, Prime, Result};

#[derive(Debug, Parser)]
#[command(name = "pzcl", version, about = "Persistent zero-divisor-cup-length of Vietoris-Rips filtrations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate persistent invariants of a metric CSV or simplicial-complex file.
    Invariants {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Erosion distance between two table files.
    Erode {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, env = "PZCL_OUT")]
        out: Option<PathBuf>,
        #[arg(long, env = "PZCL_NO_TIMESTAMP")]
        no_timestamp: bool,
    },
    /// Gromov-Hausdorff lower bound between two metric CSVs.
    Ghbound {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check the packaged fixtures and step functors.
    Fixtures {
        #[arg(long, env = "PZCL_FIELD", default_value_t = 2)]
        field: u32,
        #[arg(long, env = "PZCL_ORACLE")]
        oracle: bool,
        #[arg(long, env = "PZCL_JOBS")]
        jobs: Option<usize>,
    },
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))
}

fn fixtures(field: u32, oracle: bool, jobs: Option<usize>) -> Result<ExitCode> {
    let p = Prime::new(field)?;
    if jobs == Some(0) {
        return Err(Error::Dimension("jobs must be at least 1".into()));
    }
    let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let checks = pool(jobs)?.install(|| reproduce::run(p, oracle))?;
    let mut failed = 0;
    for c in &checks {
        println!("{c}");
        failed += usize::from(c.status == Status::Fail);
    }
    println!("{} checks, {failed} failed", checks.len());
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(4) })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let output: Output = match cli.command {
        Command::Invariants { input, run } => {
            let cfg = RunConfig::from_args(&run)?;
            pool(cfg.jobs)?.install(|| commands::invariants(&input, &cfg))?
        }
        Command::Erode { a, b, out, no_timestamp } => commands::erode(&a, &b, out.as_deref(), !no_timestamp)?,
        Command::Ghbound { a, b, run } => {
            let cfg = RunConfig::from_args(&run)?;
            pool(cfg.jobs)?.install(|| commands::ghbound(&a, &b, &cfg))?
        }
        Command::Fixtures { field, oracle, jobs } => return fixtures(field, oracle, jobs),
    };
    output.emit()?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", commands::error_json(&e));
            ExitCode::from(commands::exit_code(&e) as u8)
        }
    }
}
