use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use vplane_core::{ImageError, NumSysError, StegoError};

mod commands;
mod fmt;

#[derive(Parser)]
#[command(
    name = "vplane",
    version,
    about = "Virtual bit-plane steganography for grayscale images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hide a message file in one plane of a cover image.
    Embed(EmbedArgs),
    /// Recover a message from a stego image.
    Extract(ExtractArgs),
    /// Print the value-to-bitstring map of a number system.
    DumpMap(SystemArgs),
    /// Usable pixels per plane, as CSV.
    Capacity(CapacityArgs),
    /// Embed at full capacity for each system and plane, and report metrics as CSV.
    Compare(CompareArgs),
    /// Numerical tables: growth constants, Fibonacci bounds, prime growth, curves.
    Theory(TheoryArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemName {
    Binary,
    Fib,
    Prime,
    Natural,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatName {
    Pgm,
    Bmp,
}

#[derive(Args)]
struct SystemArgs {
    #[arg(long, value_enum)]
    system: SystemName,
    /// Fibonacci parameter.
    #[arg(long, default_value_t = 1)]
    p: u32,
    /// Pixel bit depth.
    #[arg(long, default_value_t = 8)]
    bits: u32,
}

#[derive(Args)]
struct EmbedArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long)]
    plane: usize,
    #[arg(long)]
    cover: PathBuf,
    #[arg(long)]
    message: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Output format; taken from the `--out` extension when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatName>,
    /// Write the message bits without the length header, as far as they fit.
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct ExtractArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long)]
    plane: usize,
    #[arg(long)]
    stego: PathBuf,
    /// Message destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Read every usable pixel's bit, packed into bytes, without a header.
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct CapacityArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long)]
    cover: PathBuf,
    /// Single plane; all planes when omitted.
    #[arg(long)]
    plane: Option<usize>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    cover: PathBuf,
    /// Message file, repeated to fill each plane; the text "sandipan" when omitted.
    #[arg(long)]
    message: Option<PathBuf>,
    /// Comma list of systems: binary, fib, fibN, prime, natural.
    #[arg(long, default_value = "binary,fib,prime,natural")]
    systems: String,
    /// Fibonacci parameter for a bare `fib`.
    #[arg(long, default_value_t = 1)]
    p: u32,
    /// Planes as `all`, `0..7`, `1,4,9` or empty.
    #[arg(long, default_value = "all")]
    planes: String,
    #[arg(long, default_value_t = 8)]
    bits: u32,
    /// Significant digits for reals.
    #[arg(long, default_value_t = 6)]
    digits: usize,
}

#[derive(Args)]
#[group(skip)]
#[command(group(ArgGroup::new("table").required(true).args(["alpha", "fib_bound", "prime_growth", "curves"])))]
struct TheoryArgs {
    /// Roots of x^(p+1) - x^p - 1 for each p.
    #[arg(long)]
    alpha: bool,
    /// F_p(n) against alpha_p^(n-p) for each p.
    #[arg(long)]
    fib_bound: bool,
    /// p_n / (n ln n).
    #[arg(long)]
    prime_growth: bool,
    /// Per-plane weight, squared weight and worst-case PSNR.
    #[arg(long)]
    curves: bool,
    /// Parameter list such as `1..4`.
    #[arg(long, default_value = "1")]
    p: String,
    #[arg(long, default_value_t = 50)]
    n_max: usize,
    /// Newton stopping tolerance on |f(x)|.
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    /// Systems for `--curves`.
    #[arg(long, default_value = "binary,fib,prime,natural")]
    systems: String,
    /// Planes for `--curves`; all when omitted.
    #[arg(long)]
    planes: Option<String>,
    #[arg(long, default_value_t = 8)]
    bits: u32,
    #[arg(long, default_value_t = 6)]
    digits: usize,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Image { path: PathBuf, source: ImageError },
    #[error("{0}")]
    Capacity(StegoError),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Image { .. } | CliError::Data(_) => 1,
            CliError::Capacity(_) => 2,
            CliError::Usage(_) => 3,
        }
    }
}

impl From<NumSysError> for CliError {
    fn from(e: NumSysError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<StegoError> for CliError {
    fn from(e: StegoError) -> Self {
        match e {
            StegoError::Capacity { .. } => CliError::Capacity(e),
            StegoError::System(e) => e.into(),
            StegoError::BitDepth(_) => CliError::Usage(e.to_string()),
            e => CliError::Data(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Embed(args) => commands::embed(&args),
        Command::Extract(args) => commands::extract(&args),
        Command::DumpMap(args) => commands::dump_map(&args),
        Command::Capacity(args) => commands::capacity(&args),
        Command::Compare(args) => commands::compare(&args),
        Command::Theory(args) => commands::theory(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
