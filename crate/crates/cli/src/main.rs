use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use blockfade::{parse_config, run_scenario, CliError, Preset, ScenarioConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "blockfade",
    version,
    about = "Block-fading multiuser massive MIMO channel simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario document and write its artifacts.
    Simulate {
        config: PathBuf,
        /// Override the document's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads (defaults to the number of CPUs).
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        threads: Option<u16>,
    },
    /// Run a named preset.
    Preset {
        /// iid, nlos, los, paper-A..paper-D or fig2..fig6.
        name: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        threads: Option<u16>,
    },
    /// Parse and validate a scenario document without running it.
    Validate { config: PathBuf },
}

fn read_config(path: &PathBuf) -> Result<ScenarioConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(parse_config(&text)?)
}

fn default_threads() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get())
}

fn simulate(config: &ScenarioConfig, out: &Path, threads: Option<u16>) -> Result<(), CliError> {
    let threads = threads.map_or_else(default_threads, usize::from);
    let report = run_scenario(config, threads)?;
    report.write(out)?;
    for a in &report.artifacts {
        println!("{}\t{} rows", out.join(&a.name).display(), a.rows);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate {
            config,
            seed,
            out,
            threads,
        } => {
            let mut config = read_config(&config)?;
            if let Some(seed) = seed {
                config.seed = seed;
            }
            simulate(&config, &out, threads)
        }
        Command::Preset { name, out, threads } => {
            let preset: Preset = name.parse().map_err(CliError::Config)?;
            simulate(&preset.config(), &out, threads)
        }
        Command::Validate { config } => {
            let c = read_config(&config)?;
            println!(
                "ok: {} antennas, {} users, {}x{} resource blocks, {} realizations",
                c.geometry.n_antennas,
                c.n_users(),
                c.grid.t_max,
                c.grid.f_max,
                c.realizations
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
