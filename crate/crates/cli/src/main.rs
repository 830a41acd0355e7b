//! `modinv`: bounded verification reports for modular invariants of C_p.
//!
//! Exit codes: 0 all checks pass, 1 a check failed (see its witnesses),
//! 2 usage or configuration error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modinv_core::monoalg::PRESET_NAMES;

#[derive(Debug, Parser)]
#[command(name = "modinv", version, about = "Bounded checks for invariants of the cyclic group of order p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// A representation `V_{n_1} ⊕ … ⊕ V_{n_l}` over `F_p` and a degree bound.
#[derive(Debug, Clone, Args)]
pub struct Instance {
    /// Prime characteristic.
    #[arg(long)]
    pub p: u64,
    /// Jordan block sizes, comma separated (each between 1 and p).
    #[arg(long, value_delimiter = ',', required = true)]
    pub blocks: Vec<usize>,
    /// Degree bound D of every check.
    #[arg(long, default_value_t = 10)]
    pub max_degree: usize,
}

#[derive(Debug, Clone, Args)]
pub struct OutputOpts {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Record wall-clock milliseconds (output is then not reproducible).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimensions of the invariant ring, transfer ideal and their quotient.
    Hilbert {
        #[command(flatten)]
        instance: Instance,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Verify a regular sequence on the invariant ring.
    Regseq {
        #[command(flatten)]
        instance: Instance,
        /// `canonical`, or a file with one polynomial per line.
        #[arg(long, default_value = "canonical")]
        sequence: String,
        /// Largest degree of a maximality witness (default D - 2).
        #[arg(long)]
        socle_cap: Option<usize>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// The top-variable norms on the quotient by the transfer ideal.
    TransferQuotient {
        #[command(flatten)]
        instance: Instance,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Divide by norms of top variables; one polynomial or random samples.
    NormDecompose {
        #[command(flatten)]
        instance: Instance,
        /// Polynomial to decompose, e.g. "x[2,1]^3 + x[1,1]".
        #[arg(long, conflicts_with = "samples")]
        poly: Option<String>,
        /// Number of random general inputs; as many invariant inputs are added.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximal total degree of random inputs.
        #[arg(long, default_value_t = 8)]
        degree: u32,
        /// Blocks whose top norms are used, increasing (default: all).
        #[arg(long, value_delimiter = ',')]
        divide_by: Option<Vec<usize>>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Grade of the transfer ideal modulo the norms, and the norm reduction.
    Grade {
        #[command(flatten)]
        instance: Instance,
        /// Largest degree of transfers scanned (default D - 1).
        #[arg(long)]
        search_cap: Option<usize>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Canonical sequence, ideal chain, transfer ideal and the depth audit.
    DepthReport {
        #[command(flatten)]
        instance: Instance,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// The monomial subalgebra examples.
    MonomialExample {
        #[arg(long, value_parser = PRESET_NAMES)]
        name: String,
        #[command(flatten)]
        out: OutputOpts,
    },
}

impl Command {
    fn output(&self) -> &OutputOpts {
        match self {
            Command::Hilbert { out, .. }
            | Command::Regseq { out, .. }
            | Command::TransferQuotient { out, .. }
            | Command::NormDecompose { out, .. }
            | Command::Grade { out, .. }
            | Command::DepthReport { out, .. }
            | Command::MonomialExample { out, .. } => out,
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("MODINV_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("MODINV_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let out = cli.command.output().clone();
    let report = match commands::run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = if out.timings { report } else { report.without_timings() };
    if let Err(e) = report.write(out.output.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    eprintln!("{}", report.summary_line());
    ExitCode::from(if report.summary.pass { 0 } else { 1 })
}
