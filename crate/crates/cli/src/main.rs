//! `qlink`: run channel benchmarks and plot state dumps.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use qlink_core::pipeline::{self, SimulationConfig, SimulationReport};

#[derive(Debug, Parser)]
#[command(
    name = "qlink",
    version,
    about = "Density-matrix quantum link benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the configured channels (or just one with --channel).
    Run {
        #[command(flatten)]
        common: RunArgs,
        /// Only run the channel with this name.
        #[arg(long)]
        channel: Option<String>,
    },
    /// Run every configured channel against the same symbol stream.
    Compare {
        #[command(flatten)]
        common: RunArgs,
    },
    /// Render constellation and Bloch figures from a states CSV.
    Plot {
        #[arg(long)]
        states: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON simulation config.
    #[arg(long)]
    config: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the number of transmitted symbols.
    #[arg(long)]
    symbols: Option<usize>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn load(&self) -> Result<SimulationConfig> {
        let mut cfg = SimulationConfig::load(&self.config)
            .with_context(|| format!("loading {}", self.config.display()))?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(n) = self.symbols {
            cfg.n_symbols = n;
        }
        if let Some(out) = &self.out {
            cfg.output.dir = out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn print_summary(report: &SimulationReport) {
    println!(
        "{:<16} {:>10} {:>8} {:>10} {:>8} {:>9}",
        "channel", "SER", "errors", "BER", "errors", "erasures"
    );
    for (name, m) in &report.channels {
        println!(
            "{:<16} {:>10.6} {:>8} {:>10.6} {:>8} {:>9}",
            name, m.ser, m.ser_count, m.ber, m.ber_count, m.erasure_count
        );
    }
    println!(
        "wrote {} ({:.2} s)",
        report.config.output.dir.join("report.json").display(),
        report.wall_time_s
    );
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { common, channel } => {
            let mut cfg = common.load()?;
            if let Some(name) = channel {
                cfg = cfg.only_channel(&name)?;
            }
            print_summary(&pipeline::run_comparison(&cfg)?);
        }
        Command::Compare { common } => {
            let cfg = common.load()?;
            print_summary(&pipeline::run_comparison(&cfg)?);
        }
        Command::Plot { states, out } => {
            let (constellation, bloch) = pipeline::plot_states_csv(&states, &out)
                .with_context(|| format!("plotting {}", states.display()))?;
            println!("wrote {}", constellation.display());
            println!("wrote {}", bloch.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
