//! `galph`: plan groupings, code files, and benchmark grouped against plain coding.

mod bench;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use galph::Smoothing;

#[derive(Parser, Debug)]
#[command(name = "galph", version, about = "Grouped-alphabet entropy coding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the grouping for an alphabet size and redundancy budget.
    Plan(PlanArgs),
    /// Compress a file of bytes into a container.
    Encode(EncodeArgs),
    /// Restore the original bytes from a container.
    Decode(DecodeArgs),
    /// Code one message with several coders and report sizes and work counts.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone)]
struct GroupingArgs {
    /// Alphabet size.
    #[arg(short = 'N', default_value_t = 256)]
    alphabet: u32,
    /// Power-of-two group sizes only.
    #[arg(long)]
    pow2: bool,
}

#[derive(Args, Debug)]
struct PlanArgs {
    #[command(flatten)]
    grouping: GroupingArgs,
    /// Worst-case redundancy budget in bits per letter.
    #[arg(
        short = 'd',
        long = "delta",
        default_value_t = 0.08,
        allow_negative_numbers = true
    )]
    delta: f64,
    /// Use the closed-form size rule instead of the minimal plan.
    #[arg(long, conflicts_with = "pow2")]
    closed_form: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// Additive smoothing constant, `1` or a fraction like `1/2`.
    #[arg(short = 'c', default_value = "1", value_parser = parse_smoothing)]
    smoothing: Smoothing,
    /// Per-letter count at which all counts are halved.
    #[arg(long, default_value_t = galph::model::DEFAULT_MAX_COUNT)]
    max_count: u32,
}

#[derive(Args, Debug)]
struct EncodeArgs {
    /// Input file, or `-` for standard input.
    input: PathBuf,
    /// Output file, or `-` for standard output.
    output: PathBuf,
    #[arg(long, default_value = "grouped", value_parser = ["plain", "grouped", "huffman"])]
    mode: String,
    #[command(flatten)]
    grouping: GroupingArgs,
    #[arg(
        short = 'd',
        long = "delta",
        default_value_t = 0.08,
        allow_negative_numbers = true
    )]
    delta: f64,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    /// Container file, or `-` for standard input.
    input: PathBuf,
    /// Output file, or `-` for standard output.
    output: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// `zipf:<alpha>`, `geom:<q>`, `uniform` or `file:<path>`.
    #[arg(long, default_value = "zipf:1.0")]
    source: String,
    #[command(flatten)]
    grouping: GroupingArgs,
    /// Budgets to try, comma separated.
    #[arg(
        short = 'd',
        long = "delta",
        value_delimiter = ',',
        default_value = "0.08",
        allow_negative_numbers = true
    )]
    deltas: Vec<f64>,
    /// Coders to run, comma separated.
    #[arg(
        long = "mode",
        value_delimiter = ',',
        default_value = "plain,grouped,huffman",
        value_parser = ["plain", "grouped", "huffman"]
    )]
    modes: Vec<String>,
    /// Message length for synthetic sources.
    #[arg(long, default_value_t = 1_000_000)]
    len: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    model: ModelArgs,
    /// Leave wall-clock figures out of the report.
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    json: bool,
}

fn parse_smoothing(s: &str) -> Result<Smoothing, String> {
    s.parse().map_err(|e: galph::Error| e.to_string())
}

/// Failure classes and their exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Plan(a) => commands::plan(&a),
        Command::Encode(a) => commands::encode(&a),
        Command::Decode(a) => commands::decode(&a),
        Command::Bench(a) => bench::run(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Data(msg)) = &f;
            eprintln!("galph: {msg}");
            ExitCode::from(f.code())
        }
    }
}
