mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "schurand", version, about = "Experiments with SU(d)-symmetric random unitaries")]
struct Cli {
    /// Worker threads for Monte Carlo loops.
    #[arg(long, global = true, env = "SCHURAND_THREADS", default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sector dimensions and multiplicities of (C^d)^n.
    Dims(DimsArgs),
    /// Build the Schur basis and report its block residual.
    Schur(SchurArgs),
    /// Per-sector checksums of sampled symmetric unitaries.
    HaarSample(HaarArgs),
    /// Late-time OTOC residuals over a range of n.
    Otoc(OtocArgs),
    /// Covariant erasure-code errors.
    Code(CodeArgs),
    /// Kernel and training trajectory of the symmetric variational ansatz.
    Qntk(QntkArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct DimsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct SchurArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    /// Dump the adjacent-transposition matrices of every sector.
    #[arg(long)]
    pub print_blocks: bool,
    /// Also write the basis to a binary cache file.
    #[arg(long)]
    pub save: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct HaarArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OtocModeArg {
    Sym,
    Pauli,
}

#[derive(Args, Debug, Serialize)]
pub struct OtocArgs {
    #[arg(long)]
    pub n_min: usize,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = OtocModeArg::Sym)]
    pub mode: OtocModeArg,
    /// Probe site; defaults to n/2 for each n.
    #[arg(long)]
    pub r: Option<usize>,
    /// Monte Carlo samples per n; exact evaluation when omitted.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeModeArg {
    Avg,
    Sample,
    Fig2,
    Mi,
}

#[derive(Args, Debug, Serialize)]
pub struct CodeArgs {
    /// Physical qudits; ignored in fig2 mode, which uses --n-list.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = CodeModeArg::Avg)]
    pub mode: CodeModeArg,
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
    pub n_list: Vec<usize>,
    /// Size of the environment block in mi mode.
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    /// Monte Carlo samples; mi mode is exact when omitted.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RhoArg {
    /// First Gelfand-Tsetlin basis state.
    Gt,
    /// Maximally mixed state on the sector.
    Mixed,
}

#[derive(Args, Debug, Serialize)]
pub struct QntkArgs {
    /// Total qudit count; must equal the size of --lambda.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long)]
    pub lambda: String,
    #[arg(long, default_value_t = 4)]
    pub layers: usize,
    /// Learning rate; defaults to 0.5 / Kbar.
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = RhoArg::Gt)]
    pub rho: RhoArg,
    /// Target energy; defaults to the smallest eigenvalue of the observable.
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Process exit codes.
pub mod exit {
    pub const INVALID: u8 = 2;
    pub const UNKNOWN_SUBCOMMAND: u8 = 3;
    pub const BUDGET: u8 = 4;
    pub const UNSUPPORTED: u8 = 5;
    pub const IO: u8 = 6;
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand => exit::UNKNOWN_SUBCOMMAND,
                _ => exit::INVALID,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(exit::INVALID);
    }
    let result = match &cli.command {
        Command::Dims(a) => commands::dims(a),
        Command::Schur(a) => commands::schur(a),
        Command::HaarSample(a) => commands::haar_sample(a),
        Command::Otoc(a) => commands::otoc(a, cli.threads),
        Command::Code(a) => commands::code(a, cli.threads),
        Command::Qntk(a) => commands::qntk(a, cli.threads),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
