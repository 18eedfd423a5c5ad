mod checks;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use config::{parse_half_int, parse_n_range, Format, Suite, SuiteConfig};
use nregular_core::basis::HalfInt;

const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "nregular",
    version,
    about = "Exact checks of n-regular function identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run check suites and write a report.
    Run {
        /// Comma-separated suites (default: all).
        #[arg(long, value_delimiter = ',')]
        suites: Vec<Suite>,
        /// Ranks to cover, e.g. `1,2` or `1-3`.
        #[arg(long, default_value = "1-3", value_parser = parse_n_range)]
        n: std::vec::Vec<usize>,
        /// Largest level l, an integer or half-integer such as `3/2`.
        #[arg(long, default_value = "3/2", value_parser = parse_half_int)]
        lmax: HalfInt,
        /// Seed for the randomly chosen test vectors.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow l_max above 5/2.
        #[arg(long)]
        allow_large: bool,
    },
    /// Describe a check by id, e.g. `orthogonality.n2` or `reproduce.n2.l1`.
    Explain { id: String },
    /// List the check ids a run would execute.
    List {
        #[arg(long, value_delimiter = ',')]
        suites: Vec<Suite>,
        #[arg(long, default_value = "1-3", value_parser = parse_n_range)]
        n: std::vec::Vec<usize>,
        #[arg(long, default_value = "3/2", value_parser = parse_half_int)]
        lmax: HalfInt,
        #[arg(long)]
        allow_large: bool,
    },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(USAGE_ERROR)
}

fn make_config(
    suites: Vec<Suite>,
    n: Vec<usize>,
    lmax: HalfInt,
    seed: u64,
    allow_large: bool,
) -> Result<SuiteConfig, String> {
    let suites = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites
    };
    SuiteConfig::new(suites, n, lmax, seed, allow_large)
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("NREGULAR_THREADS") else {
        return Ok(());
    };
    let threads: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("NREGULAR_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Explain { id } => match report::explain(&id) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(msg) => usage(msg),
        },
        Command::List {
            suites,
            n,
            lmax,
            allow_large,
        } => match make_config(suites, n, lmax, 0, allow_large) {
            Ok(config) => {
                for c in checks::plan(&config) {
                    println!("{}", c.id());
                }
                ExitCode::SUCCESS
            }
            Err(msg) => usage(msg),
        },
        Command::Run {
            suites,
            n,
            lmax,
            seed,
            format,
            out,
            allow_large,
        } => {
            let config = match make_config(suites, n, lmax, seed, allow_large) {
                Ok(c) => c,
                Err(msg) => return usage(msg),
            };
            if let Err(msg) = configure_threads() {
                return usage(msg);
            }
            let start = Instant::now();
            let rep = report::run(&config);
            let secs = start.elapsed().as_secs_f64();
            let body = match format {
                Format::Json => rep.to_json(),
                Format::Text => format!("{}wall time {secs:.1}s\n", rep.to_text()),
            };
            match &out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &body) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::FAILURE;
                    }
                    let t = &rep.totals;
                    eprintln!("{} checks, {} failed, {secs:.1}s", t.checks, t.failed);
                }
                None => print!("{body}"),
            }
            if rep.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
