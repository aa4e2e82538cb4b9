//! Seeded end-to-end runs: sample symbols, transmit, apply a channel one
//! state at a time, detect, score, and export artifacts.
//!
//! Randomness comes from [`KeyedStreams`]: the transmitted sequence uses the
//! `symbols` purpose only, so every channel sees the same symbols, and each
//! channel/decision draw is keyed by channel name and symbol index. Results
//! are therefore identical under channel reordering and parallel execution.

mod config;
mod report;
mod states;

pub use config::{NamedChannel, OutputConfig, SimulationConfig};
pub use report::{ChannelMetrics, SimulationReport};
pub use states::{
    clip_radius_from_rows, plot_states_csv, read_states_csv, render_rows, state_rows,
    write_state_rows, write_states_csv, Projection, StateRow, STATES_CSV_HEADER,
};

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::channels::Channel;
use crate::detection::Receiver;
use crate::error::{Error, Result};
use crate::metrics::{bit_errors, symbol_errors};
use crate::modulation::{symbols_to_bits, DetectorCodebook, ERASURE_LABEL};
use crate::rng::{KeyedStreams, PURPOSE_CHANNEL, PURPOSE_DECISION, PURPOSE_SYMBOLS};
use crate::state::DensityMatrix;
use crate::visualization::{clip_radius_for, DEFAULT_RHO00_FLOOR};

/// Transmitted labels, drawn uniformly from the codebook alphabet.
pub fn transmit_symbols(seed: u64, alphabet: usize, n_symbols: usize) -> Vec<i32> {
    let streams = KeyedStreams::new(seed);
    (0..n_symbols)
        .map(|k| {
            streams
                .stream(PURPOSE_SYMBOLS, "", k as u64)
                .random_range(0..alphabet) as i32
        })
        .collect()
}

/// Everything one channel run produced.
#[derive(Debug, Clone)]
pub struct ChannelRun {
    pub name: String,
    pub metrics: ChannelMetrics,
    pub tx_symbols: Vec<i32>,
    pub rx_symbols: Vec<i32>,
    pub rx_states: Vec<DensityMatrix>,
}

impl ChannelRun {
    pub fn tx_states(&self, codebook: &DetectorCodebook) -> Vec<DensityMatrix> {
        self.tx_symbols
            .iter()
            .map(|&s| codebook.state(s as usize).clone())
            .collect()
    }
}

fn run_one(
    cfg: &SimulationConfig,
    codebook: &DetectorCodebook,
    tx_symbols: &[i32],
    named: &NamedChannel,
) -> Result<ChannelRun> {
    let name = named.name.as_str();
    let channel = Channel::new(named.config.clone(), codebook.dim())?;
    let receiver = Receiver::for_channel_output(
        codebook,
        channel.output_dim(),
        cfg.decision_mode,
        cfg.eig_cut,
    )?;
    let streams = KeyedStreams::new(cfg.seed);

    let results: Vec<(DensityMatrix, i32)> = tx_symbols
        .par_iter()
        .enumerate()
        .map(|(k, &s)| {
            let mut channel_rng = streams.stream(PURPOSE_CHANNEL, name, k as u64);
            let rx = channel.apply(codebook.state(s as usize), &mut channel_rng)?;
            let mut decision_rng = streams.stream(PURPOSE_DECISION, name, k as u64);
            let label = receiver.detect(&rx, &mut decision_rng)?;
            Ok((rx, label))
        })
        .collect::<Result<_>>()?;
    let (rx_states, rx_symbols): (Vec<_>, Vec<_>) = results.into_iter().unzip();

    let ser = symbol_errors(tx_symbols, &rx_symbols)?;
    let ber = bit_errors(
        &symbols_to_bits(tx_symbols, codebook)?,
        &symbols_to_bits(&rx_symbols, codebook)?,
    )?;
    let metrics = ChannelMetrics {
        channel_type: named.config.kind().to_owned(),
        ser: ser.rate(),
        ser_count: ser.errors,
        ber: ber.rate(),
        ber_count: ber.errors,
        n_symbols: ser.total,
        n_bits: ber.total,
        bits_per_symbol: codebook.bits_per_symbol(),
        erasure_count: rx_symbols.iter().filter(|&&s| s == ERASURE_LABEL).count(),
    };
    Ok(ChannelRun {
        name: name.to_owned(),
        metrics,
        tx_symbols: tx_symbols.to_vec(),
        rx_symbols,
        rx_states,
    })
}

/// Runs the named channel of `cfg` in memory; nothing is written.
pub fn run_simulation(cfg: &SimulationConfig, channel_name: &str) -> Result<ChannelRun> {
    cfg.validate()?;
    let named = cfg.channel(channel_name)?;
    let codebook = cfg.modulation.codebook()?;
    let tx = transmit_symbols(cfg.seed, codebook.len(), cfg.n_symbols);
    run_one(cfg, &codebook, &tx, named).map_err(|e| e.in_channel(channel_name))
}

/// Writes `states_<name>.csv` and the two figures as configured.
pub fn write_channel_artifacts(
    cfg: &SimulationConfig,
    codebook: &DetectorCodebook,
    run: &ChannelRun,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    if !cfg.output.emit_states && !cfg.output.emit_figures {
        return Ok(written);
    }
    let clip_radius = clip_radius_for(codebook, DEFAULT_RHO00_FLOOR);
    let projection = Projection {
        power_scale: codebook.power_scale(),
        rho00_floor: DEFAULT_RHO00_FLOOR,
        clip_radius,
    };
    let rows = state_rows(
        &run.tx_states(codebook),
        &run.rx_states,
        &run.tx_symbols,
        &run.rx_symbols,
        projection,
    )?;
    if cfg.output.emit_states {
        let path = dir.join(format!("states_{}.csv", run.name));
        write_state_rows(&path, &rows)?;
        written.push(path);
    }
    if cfg.output.emit_figures {
        let (c, b) = render_rows(&rows, clip_radius, &run.name, dir)?;
        written.extend([c, b]);
    }
    Ok(written)
}

/// Runs every channel against the same transmitted sequence and writes
/// `report.json` plus per-channel artifacts under `cfg.output.dir`.
pub fn run_comparison(cfg: &SimulationConfig) -> Result<SimulationReport> {
    let started = Instant::now();
    cfg.validate()?;
    let codebook = cfg.modulation.codebook()?;
    let tx = transmit_symbols(cfg.seed, codebook.len(), cfg.n_symbols);
    let dir = &cfg.output.dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let mut channels = BTreeMap::new();
    for named in &cfg.channels {
        let run = run_one(cfg, &codebook, &tx, named)
            .and_then(|run| {
                write_channel_artifacts(cfg, &codebook, &run, dir)?;
                Ok(run)
            })
            .map_err(|e| e.in_channel(&named.name))?;
        channels.insert(run.name, run.metrics);
    }
    let report = SimulationReport {
        software_version: env!("CARGO_PKG_VERSION").to_owned(),
        config: cfg.clone(),
        channels,
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    let path = dir.join("report.json");
    fs::write(&path, report.to_json_pretty()? + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(report)
}
