use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use coprime_core::asymptotic::{error_report, DEFAULT_TRUNCATION};
use coprime_core::counter::{count_t3_mobius, count_t3_oracle, scan, DEFAULT_ORACLE_LIMIT};
use coprime_core::table::{write_report, write_scan};
use coprime_core::{CountResult, Format, ScanConfig};

mod verify;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_COMPUTATION: u8 = 3;

/// Counts 3-part compositions of n with pairwise coprime parts.
#[derive(Debug, Parser)]
#[command(name = "coprime-count", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Largest n handed to the brute-force oracle; scans cross-check up to it.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_LIMIT)]
    oracle_limit: u64,

    /// Prime bound for the infinite product in f(n).
    #[arg(long, global = true, default_value_t = DEFAULT_TRUNCATION)]
    truncation: u64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,

    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// T3(n) via the Möbius sum.
    Count { n: u64 },
    /// T3(n) by checking every composition.
    Oracle { n: u64 },
    /// Möbius counts over a range, cross-checked against the oracle.
    Scan {
        n_from: u64,
        n_to: u64,
        #[arg(default_value_t = 1)]
        stride: u64,
    },
    /// Exact counts against the main term and f(n) n^2/2.
    Report {
        n_from: u64,
        n_to: u64,
        #[arg(default_value_t = 1)]
        stride: u64,
    },
    /// Run the internal consistency checks.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Tsv,
    Human,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Tsv => Format::Tsv,
            OutputFormat::Human => Format::Human,
        }
    }
}

enum Failure {
    Usage(String),
    Computation(String),
    Checks(usize),
}

impl From<coprime_core::Error> for Failure {
    fn from(e: coprime_core::Error) -> Self {
        Failure::Computation(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Computation(e.to_string())
    }
}

fn check_range(n_from: u64, n_to: u64, stride: u64) -> Result<(), Failure> {
    if n_from < 3 {
        return Err(Failure::Usage(format!("ranges start at n >= 3, got {n_from}")));
    }
    if n_from > n_to {
        return Err(Failure::Usage(format!("n_from = {n_from} exceeds n_to = {n_to}")));
    }
    if stride == 0 {
        return Err(Failure::Usage("stride must be at least 1".into()));
    }
    Ok(())
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_single(cli: &Cli, result: CountResult) -> Result<(), Failure> {
    let mut out = output(cli.out.as_ref())?;
    match cli.format {
        OutputFormat::Human => writeln!(out, "T3({}) = {}", result.n, result.t)?,
        other => write_scan(&mut out, other.into(), &[result])?,
    }
    out.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Count { n } => {
            if n < 3 {
                return Err(Failure::Usage(format!("count needs n >= 3, got {n}")));
            }
            print_single(cli, count_t3_mobius(n)?)
        }
        Command::Oracle { n } => print_single(cli, count_t3_oracle(n, cli.oracle_limit)?),
        Command::Scan { n_from, n_to, stride } => {
            check_range(n_from, n_to, stride)?;
            let config = ScanConfig { oracle_limit: cli.oracle_limit, cross_check_limit: cli.oracle_limit };
            let rows = scan(n_from, n_to, stride, &config)?;
            let mut out = output(cli.out.as_ref())?;
            write_scan(&mut out, cli.format.into(), &rows)?;
            out.flush()?;
            Ok(())
        }
        Command::Report { n_from, n_to, stride } => {
            check_range(n_from, n_to, stride)?;
            if cli.truncation < 2 {
                return Err(Failure::Usage(format!("truncation must be at least 2, got {}", cli.truncation)));
            }
            let rows = error_report(n_from, n_to, stride, cli.truncation)?;
            let mut out = output(cli.out.as_ref())?;
            write_report(&mut out, cli.format.into(), &rows)?;
            out.flush()?;
            Ok(())
        }
        Command::Verify => {
            let mut out = output(cli.out.as_ref())?;
            let failed = verify::run_all(&mut out, cli.oracle_limit)?;
            out.flush()?;
            if failed == 0 {
                Ok(())
            } else {
                Err(Failure::Checks(failed))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("Run `coprime-count --help` for usage.");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_COMPUTATION)
        }
        Err(Failure::Checks(failed)) => {
            eprintln!("{failed} check(s) failed");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
    }
}
