use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::channels::ChannelConfig;
use crate::detection::DecisionMode;
use crate::error::{Error, Result};
use crate::modulation::Modulation;
use crate::state::DEFAULT_EIG_CUT;

/// Everything needed to reproduce a benchmark run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    /// Free-form notes; ignored by the simulator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub modulation: Modulation,
    pub n_symbols: usize,
    pub seed: u64,
    #[serde(default)]
    pub decision_mode: DecisionMode,
    #[serde(default = "default_eig_cut")]
    pub eig_cut: f64,
    pub channels: Vec<NamedChannel>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_eig_cut() -> f64 {
    DEFAULT_EIG_CUT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    #[serde(default = "yes")]
    pub emit_states: bool,
    #[serde(default = "yes")]
    pub emit_figures: bool,
}

fn yes() -> bool {
    true
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("output"),
            emit_states: true,
            emit_figures: true,
        }
    }
}

/// A channel entry: `{"name": ..., "type": ..., <params>}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Map<String, Value>", into = "Map<String, Value>")]
pub struct NamedChannel {
    pub name: String,
    pub config: ChannelConfig,
}

impl TryFrom<Map<String, Value>> for NamedChannel {
    type Error = String;

    fn try_from(mut map: Map<String, Value>) -> std::result::Result<Self, String> {
        let name = match map.remove("name") {
            Some(Value::String(s)) => s,
            Some(other) => return Err(format!("channel name must be a string, got {other}")),
            None => return Err("channel entry is missing `name`".into()),
        };
        let config = serde_json::from_value(Value::Object(map))
            .map_err(|e| format!("channel `{name}`: {e}"))?;
        Ok(Self { name, config })
    }
}

impl From<NamedChannel> for Map<String, Value> {
    fn from(ch: NamedChannel) -> Self {
        let mut map = match serde_json::to_value(&ch.config) {
            Ok(Value::Object(map)) => map,
            _ => unreachable!("channel configs serialize to objects"),
        };
        map.insert("name".into(), Value::String(ch.name));
        map
    }
}

impl SimulationConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file. A relative `output.dir` stays relative to the
    /// process working directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_symbols == 0 {
            return Err(Error::Config("n_symbols must be at least 1".into()));
        }
        if !(self.eig_cut > 0.0 && self.eig_cut.is_finite()) {
            return Err(Error::Config(format!(
                "eig_cut must be positive, got {}",
                self.eig_cut
            )));
        }
        if self.channels.is_empty() {
            return Err(Error::Config("at least one channel is required".into()));
        }
        let mut seen = HashSet::new();
        for ch in &self.channels {
            let valid_name = !ch.name.is_empty()
                && ch
                    .name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
            if !valid_name {
                return Err(Error::Config(format!(
                    "channel name `{}` must be non-empty ASCII letters, digits, `_` or `-`",
                    ch.name
                )));
            }
            if !seen.insert(ch.name.as_str()) {
                return Err(Error::Config(format!(
                    "duplicate channel name `{}`",
                    ch.name
                )));
            }
            ch.config.validate().map_err(|e| e.in_channel(&ch.name))?;
        }
        Ok(())
    }

    pub fn channel(&self, name: &str) -> Result<&NamedChannel> {
        self.channels
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::Config(format!("no channel named `{name}` in config")))
    }

    /// Copy restricted to a single channel.
    pub fn only_channel(&self, name: &str) -> Result<Self> {
        let ch = self.channel(name)?.clone();
        Ok(Self {
            channels: vec![ch],
            ..self.clone()
        })
    }
}
