use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use usc_pairsim::{load_config, presets, run, CliError, Command};

/// Emission of photon and phonon pairs from a three-level atom ultrastrongly
/// coupled to a plasmon–phonon cavity.
#[derive(Parser)]
#[command(name = "usc-pairsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Dressed-number and flux time series.
    Evolve(RunArgs),
    /// Emission spectrum of the atomic g-l transition.
    Spectrum(RunArgs),
    /// Equal-time second- and third-order correlations.
    Correlations(RunArgs),
    /// Dressed eigenenergies and parities, optionally swept.
    Eigens(RunArgs),
    /// List the built-in presets, or print one as TOML.
    Presets {
        #[arg(long)]
        preset: Option<String>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration; merged over the preset when both are given.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(sub: Sub) -> Result<(), CliError> {
    let (command, args) = match sub {
        Sub::Presets { preset: None } => {
            print!("{}", presets::table());
            return Ok(());
        }
        Sub::Presets { preset: Some(name) } => {
            let p = presets::find(&name).ok_or_else(|| CliError::config("preset", format!("unknown preset `{name}`")))?;
            print!("{}", p.config().to_toml());
            return Ok(());
        }
        Sub::Evolve(a) => (Command::Evolve, a),
        Sub::Spectrum(a) => (Command::Spectrum, a),
        Sub::Correlations(a) => (Command::Correlations, a),
        Sub::Eigens(a) => (Command::Eigens, a),
    };
    let config = load_config(args.config.as_deref(), args.preset.as_deref())?;
    for path in run::run(command, &config, &args.out)? {
        println!("{}", path.display());
    }
    Ok(())
}
