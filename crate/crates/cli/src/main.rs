use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twoelec::pipeline::{run, RunConfig, Stage};

/// B-spline CI for helium-like ions with density, information and
/// entanglement analysis.
#[derive(Parser)]
#[command(name = "twoelec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration (TOML). Built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory, overriding the configuration.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Resonance label table (CSV), overriding the configuration.
    #[arg(long, global = true)]
    labels: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Hydrogenic orbitals of every partial wave.
    Orbitals,
    /// CI energies of the requested blocks.
    Spectrum,
    /// Q-projected resonances with labels and the diagonal diagnostic.
    Resonances,
    /// Pair and one-particle densities.
    Density,
    /// Shannon entropy and Fisher information.
    Measures,
    /// Linear and von Neumann entropies, Slater rank.
    Entanglement,
    /// Transmission through two delta wells.
    DeltaDemo,
    /// Every stage.
    All,
}

impl From<Command> for Stage {
    fn from(c: Command) -> Self {
        match c {
            Command::Orbitals => Stage::Orbitals,
            Command::Spectrum => Stage::Spectrum,
            Command::Resonances => Stage::Resonances,
            Command::Density => Stage::Density,
            Command::Measures => Stage::Measures,
            Command::Entanglement => Stage::Entanglement,
            Command::DeltaDemo => Stage::DeltaDemo,
            Command::All => Stage::All,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(p) => match RunConfig::load(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("twoelec: config: {e}");
                return ExitCode::FAILURE;
            }
        },
        None => RunConfig::default(),
    };
    if let Some(out) = cli.out {
        cfg.output = out;
    }
    if let Some(labels) = cli.labels {
        cfg.labels = Some(labels);
    }
    match run(&cfg, cli.command.into()) {
        Ok(report) => {
            for n in &report.notices {
                eprintln!("twoelec: note: {n}");
            }
            println!("wrote {} files to {}", report.files.len(), cfg.output.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("twoelec: {e}");
            ExitCode::FAILURE
        }
    }
}
