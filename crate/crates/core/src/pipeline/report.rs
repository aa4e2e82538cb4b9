use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::SimulationConfig;

/// Per-channel hard-decision results; rates are exact count ratios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelMetrics {
    pub channel_type: String,
    pub ser: f64,
    pub ser_count: usize,
    pub ber: f64,
    pub ber_count: usize,
    pub n_symbols: usize,
    pub n_bits: usize,
    pub bits_per_symbol: usize,
    pub erasure_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub software_version: String,
    pub config: SimulationConfig,
    /// Keyed by channel name, so ordering does not depend on the config.
    pub channels: BTreeMap<String, ChannelMetrics>,
    /// The only field that differs between otherwise identical runs.
    pub wall_time_s: f64,
}

impl SimulationReport {
    pub fn to_json_pretty(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}
