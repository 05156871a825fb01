//! `mablab`: batch runs of the E⊗ε Jahn-Teller toolkit with CSV/JSON output.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;

use commands::{berry, dynamics, holonomy, spectrum, surfaces};
use output::RegimeViolation;

#[derive(Parser)]
#[command(
    name = "mablab",
    version,
    about = "Molecular Aharonov-Bohm numerical lab"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the adiabatic potential surfaces E±(r)
    Surfaces(surfaces::SurfacesArgs),
    /// Propagate the electronic pseudospin under a pseudorotation schedule
    Dynamics(dynamics::DynamicsArgs),
    /// Sweep the noncyclic geometric phase over Δθ
    Berry(berry::BerryArgs),
    /// Line integral of the induced vector potential along a planar path
    Holonomy(holonomy::HolonomyArgs),
    /// Exact and Born-Oppenheimer vibronic levels
    Spectrum(spectrum::SpectrumArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Surfaces(a) => surfaces::run(a),
        Command::Dynamics(a) => dynamics::run(a),
        Command::Berry(a) => berry::run(a),
        Command::Holonomy(a) => holonomy::run(a),
        Command::Spectrum(a) => spectrum::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<RegimeViolation>().is_some() => {
            eprintln!("mablab: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("mablab: {e:#}");
            ExitCode::from(2)
        }
    }
}
