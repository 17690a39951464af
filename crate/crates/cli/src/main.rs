//! `lemniscate-lab`: exact and asymptotic partition functions, moment and norm
//! tables, convergence and oscillation studies, and droplet sampling.

mod commands;
mod config;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Output;
use config::{FileConfig, Format, Settings};

#[derive(Debug, Parser)]
#[command(name = "lemniscate-lab", version, about = "Partition functions of lemniscate Coulomb gases")]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true)]
    bits: Option<u32>,
    /// Seed for the samplers.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// JSON or TOML file with any of bits, seed, out, format.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ModelArgs {
    /// Symmetry order.
    #[arg(short, long, default_value_t = 2)]
    d: u32,
    #[arg(short, long, default_value_t = 1.0)]
    t: f64,
    /// Point charge at the origin.
    #[arg(short, long, default_value_t = 0.0, allow_hyphen_values = true)]
    c: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expansion coefficients C1..C5 and, for c = 0, the functionals F, G_n, H_n.
    Coeffs {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short, long, default_value_t = 100)]
        n: usize,
    },
    /// Exact log Z_n, or with --norms the reduced norm tables (j, log h_j).
    Exact {
        #[command(flatten)]
        model: ModelArgs,
        /// Particle numbers, comma separated.
        #[arg(short, long, value_delimiter = ',', default_value = "10")]
        n: Vec<usize>,
        #[arg(long)]
        norms: bool,
    },
    /// log E|det(G_N - a)|^γ exactly and asymptotically.
    Moments {
        #[arg(short, long, default_value_t = 0.5)]
        a: f64,
        #[arg(short, long, default_value_t = 2.0, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(short, long, value_delimiter = ',', default_value = "10,20,40,80")]
        n: Vec<usize>,
        /// Number of 1/N corrections in the bulk expansion.
        #[arg(long, default_value_t = 3)]
        corrections: usize,
    },
    /// Exact minus asymptotic log Z_n over a geometric grid, with a power-law fit.
    Converge {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 20)]
        n_min: usize,
        #[arg(long, default_value_t = 160)]
        n_max: usize,
        #[arg(long, default_value_t = 12)]
        points: usize,
    },
    /// O(1) residuals per residue class of n mod d.
    Oscillation {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 90)]
        n_min: usize,
        #[arg(long, default_value_t = 120)]
        n_max: usize,
    },
    /// Metropolis sample of the gas, or with --equilibrium a direct sample of the equilibrium measure.
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short, long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 500)]
        sweeps: usize,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        #[arg(long)]
        equilibrium: bool,
        #[arg(long, default_value_t = 40)]
        bins: usize,
    },
    /// Cross-check coefficient identities and exact routes; exits nonzero on failure.
    VerifyIdentities {
        #[command(flatten)]
        model: ModelArgs,
    },
}

fn emit(out: &Output, settings: &Settings) -> Result<(), String> {
    let format = settings.format.unwrap_or(out.default_format);
    let mut sink: Box<dyn Write> = match &settings.out {
        Some(path) => Box::new(File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &out.json).map_err(|e| e.to_string())?;
            writeln!(sink).map_err(|e| e.to_string())?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(&out.table.headers).map_err(|e| e.to_string())?;
            for row in &out.table.rows {
                w.write_record(row).map_err(|e| e.to_string())?;
            }
            w.flush().map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, String> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let settings = Settings::merge(cli.bits, cli.seed, cli.out, cli.format, file);
    let bits = settings.bits;
    let out = match cli.command {
        Command::Coeffs { model, n } => commands::coeffs(&model, n, bits),
        Command::Exact { model, n, norms } => commands::exact(&model, &n, norms, bits),
        Command::Moments { a, gamma, n, corrections } => commands::moments(a, gamma, &n, corrections, bits),
        Command::Converge { model, n_min, n_max, points } => commands::converge(&model, n_min, n_max, points, bits),
        Command::Oscillation { model, n_min, n_max } => commands::oscillation(&model, n_min, n_max, bits),
        Command::Sample { model, n, sweeps, step, equilibrium, bins } => {
            commands::sample(&model, n, sweeps, step, equilibrium, bins, settings.seed, bits)
        }
        Command::VerifyIdentities { model } => commands::verify_identities(&model, bits),
    }
    .map_err(|e| e.to_string())?;
    emit(&out, &settings)?;
    if let Some(w) = &out.warning {
        eprintln!("warning: {w}");
    }
    Ok(out.ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
