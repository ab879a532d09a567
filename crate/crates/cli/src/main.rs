use std::path::PathBuf;
use std::process::ExitCode;

use altkit::config::{Check, RingSpec, SuiteConfig};
use altkit::instance::{self, Mode};
use altkit::report::Report;
use altkit::{probe, suite, CliError};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "altkit", version, about = "Exact checks for alternators and their norm maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded identity suites.
    Verify {
        #[arg(long, default_value = "q")]
        ring: String,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        cases: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated check names, or `all`.
        #[arg(long, default_value = "all")]
        identity: String,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
        #[arg(long, default_value_t = 4)]
        max_terms: usize,
        /// Attach wall-clock times (the report is then not reproducible).
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a family E/B given as a JSON file.
    Instance {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decide whether a tuple of points lies on a diagonal.
    ProbeDiagonal {
        /// JSON array of points, inline or as a file path.
        #[arg(long)]
        points: String,
        #[arg(long, default_value = "q")]
        ring: String,
        /// Largest exponent per variable in the probed monomials.
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn execute(cmd: Command) -> Result<(Report, Option<PathBuf>), CliError> {
    match cmd {
        Command::Verify { ring, n, cases, seed, identity, max_degree, max_terms, timing, output } => {
            let cfg = SuiteConfig {
                ring: ring.parse()?,
                n,
                cases,
                seed,
                max_degree,
                max_terms,
                checks: Check::parse_list(&identity)?,
            };
            let report = if timing { suite::run_suite_timed(&cfg)? } else { suite::run_suite(&cfg)? };
            Ok((report, output))
        }
        Command::Instance { file, mode, seed, output } => {
            let mode = mode.map(|m| m.parse::<Mode>()).transpose()?;
            Ok((instance::run_instance_file(&file, mode, seed)?, output))
        }
        Command::ProbeDiagonal { points, ring, bound, output } => {
            let ring: RingSpec = ring.parse()?;
            let pts = probe::parse_points(ring, &probe::load_points(&points)?)?;
            Ok((probe::run_probe(ring, &pts, bound)?, output))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok((report, output)) => {
            let text = report.to_json();
            match output {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
