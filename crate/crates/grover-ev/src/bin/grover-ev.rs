//! Command-line front end: single runs, parameter sweeps, and the
//! self-verification suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use grover_ev::cli::{
    cmd_run, cmd_sweep, cmd_verify, MarkedSpec, OutputFormat, RunConfig, SweepConfig,
    VerifyConfig, EXIT_USAGE,
};
use grover_ev::driver::Version;
use grover_ev::verify::Suite;

#[derive(Parser)]
#[command(name = "grover-ev", version, about = "Grover search on an expectation-value quantum computer: PM, EV, truncated-EV and filtered-EV simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one search and emit its result record.
    Run(RunArgs),
    /// Compare versions over a (qubits, marked count, r) grid; emits CSV.
    Sweep(SweepArgs),
    /// Run the exhaustive small-instance identity suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VersionArg {
    Pm,
    EvStandard,
    EvTruncated,
}

impl From<VersionArg> for Version {
    fn from(v: VersionArg) -> Self {
        match v {
            VersionArg::Pm => Version::Pm,
            VersionArg::EvStandard => Version::EvStandard,
            VersionArg::EvTruncated => Version::EvTruncated,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Register width L; the database has 2^L locations.
    #[arg(long)]
    qubits: usize,
    /// Explicit marked locations, comma-separated.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["marked_count", "instance_seed"])]
    marked: Option<Vec<u64>>,
    /// Number of randomly placed marked locations.
    #[arg(long, requires = "instance_seed")]
    marked_count: Option<u64>,
    /// Seed for random marked-set placement (independent of --seed).
    #[arg(long)]
    instance_seed: Option<u64>,
    #[arg(long, value_enum, default_value = "ev-truncated")]
    version: VersionArg,
    /// Iteration-count override; defaults to the version's own rule.
    #[arg(long)]
    iterations: Option<u64>,
    /// EV resolution of the device.
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Ensemble members per run; 0 reads exact expectation values.
    #[arg(long, default_value_t = 0)]
    ensemble_size: u64,
    /// Measurement seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args)]
struct SweepArgs {
    /// Register widths, comma-separated.
    #[arg(long, value_delimiter = ',')]
    qubits: Vec<usize>,
    /// Marked counts, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    marked_count: Vec<u64>,
    /// r = epsilon / epsilon_stand values, comma-separated.
    #[arg(long, value_delimiter = ',')]
    r: Vec<f64>,
    /// Ensemble members per run; 0 keeps the sweep exact.
    #[arg(long, default_value_t = 0)]
    ensemble_size: u64,
    /// Sampled-mode repetitions per cell.
    #[arg(long, default_value_t = 20)]
    seeds_per_cell: u64,
    /// Master seed; cells derive theirs deterministically from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Restrict to one suite: ev-identity, filtering, cascade, planner, chebyshev.
    #[arg(long)]
    suite: Option<String>,
    /// Bound on exhaustive instance sizes.
    #[arg(long, default_value_t = 8)]
    max_qubits: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run(args) => {
            let marked = match (args.marked, args.marked_count) {
                (Some(list), None) => MarkedSpec::Explicit(list),
                (None, Some(count)) => MarkedSpec::Random {
                    count,
                    seed: args.instance_seed.unwrap_or(0),
                },
                _ => {
                    eprintln!(
                        "error: exactly one of --marked or --marked-count/--instance-seed required"
                    );
                    return ExitCode::from(EXIT_USAGE as u8);
                }
            };
            cmd_run(&RunConfig {
                num_qubits: args.qubits,
                marked,
                version: args.version.into(),
                iterations: args.iterations,
                epsilon: args.epsilon,
                ensemble_size: args.ensemble_size,
                seed: args.seed,
                output: args.output,
                format: match args.format {
                    FormatArg::Csv => OutputFormat::Csv,
                    FormatArg::Json => OutputFormat::Json,
                },
            })
        }
        Command::Sweep(args) => cmd_sweep(&SweepConfig {
            qubits: args.qubits,
            marked_counts: args.marked_count,
            r_values: args.r,
            ensemble_size: args.ensemble_size,
            seeds_per_cell: args.seeds_per_cell,
            master_seed: args.seed,
            output: args.output,
        }),
        Command::Verify(args) => {
            let suites = match args.suite {
                Some(name) => match Suite::from_name(&name) {
                    Some(suite) => vec![suite],
                    None => {
                        eprintln!("error: unknown suite '{name}'");
                        return ExitCode::from(EXIT_USAGE as u8);
                    }
                },
                None => Suite::ALL.to_vec(),
            };
            cmd_verify(&VerifyConfig {
                suites,
                max_qubits: args.max_qubits,
            })
        }
    };
    ExitCode::from(code as u8)
}
