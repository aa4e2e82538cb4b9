//! Per-symbol state dumps and the figures derived from them.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{BlochVector, DensityMatrix};
use crate::visualization::{
    bloch_points, constellation_point, render_bloch_svg, render_constellation_svg, BlochPlotPoint,
    ConstellationPlotPoint, CLIP_RADIUS_FACTOR,
};

/// Column order of `states_<channel>.csv`.
pub const STATES_CSV_HEADER: [&str; 16] = [
    "index",
    "tx_label",
    "rx_label",
    "tx_bloch_x",
    "tx_bloch_y",
    "tx_bloch_z",
    "rx_bloch_x",
    "rx_bloch_y",
    "rx_bloch_z",
    "rx_renorm_trace",
    "tx_i",
    "tx_q",
    "rx_i",
    "rx_q",
    "tx_clipped",
    "rx_clipped",
];

/// One row of a state dump. Bloch and constellation columns are computed
/// from the leading qubit block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRow {
    pub index: usize,
    pub tx_label: i32,
    pub rx_label: i32,
    pub tx_bloch_x: f64,
    pub tx_bloch_y: f64,
    pub tx_bloch_z: f64,
    pub rx_bloch_x: f64,
    pub rx_bloch_y: f64,
    pub rx_bloch_z: f64,
    pub rx_renorm_trace: f64,
    pub tx_i: f64,
    pub tx_q: f64,
    pub rx_i: f64,
    pub rx_q: f64,
    pub tx_clipped: bool,
    pub rx_clipped: bool,
}

/// Projection settings shared by every row of a dump.
#[derive(Debug, Clone, Copy)]
pub struct Projection {
    pub power_scale: f64,
    pub rho00_floor: f64,
    pub clip_radius: f64,
}

pub fn state_rows(
    tx_states: &[DensityMatrix],
    rx_states: &[DensityMatrix],
    tx_labels: &[i32],
    rx_labels: &[i32],
    projection: Projection,
) -> Result<Vec<StateRow>> {
    let n = tx_states.len();
    for len in [rx_states.len(), tx_labels.len(), rx_labels.len()] {
        if len != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: len,
            });
        }
    }
    let tx_bloch = bloch_points(tx_states)?;
    let rx_bloch = bloch_points(rx_states)?;
    let point = |rho: &DensityMatrix, label: i32| {
        constellation_point(
            rho,
            label,
            projection.power_scale,
            projection.rho00_floor,
            projection.clip_radius,
        )
    };
    Ok((0..n)
        .map(|k| {
            let (tb, _) = tx_bloch[k];
            let (rb, renorm) = rx_bloch[k];
            let tp = point(&tx_states[k], tx_labels[k]);
            let rp = point(&rx_states[k], tx_labels[k]);
            StateRow {
                index: k,
                tx_label: tx_labels[k],
                rx_label: rx_labels[k],
                tx_bloch_x: tb.x,
                tx_bloch_y: tb.y,
                tx_bloch_z: tb.z,
                rx_bloch_x: rb.x,
                rx_bloch_y: rb.y,
                rx_bloch_z: rb.z,
                rx_renorm_trace: renorm,
                tx_i: tp.i,
                tx_q: tp.q,
                rx_i: rp.i,
                rx_q: rp.q,
                tx_clipped: tp.clipped,
                rx_clipped: rp.clipped,
            }
        })
        .collect())
}

pub fn write_state_rows(path: &Path, rows: &[StateRow]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = csv::Writer::from_writer(BufWriter::new(file));
    if rows.is_empty() {
        writer.write_record(STATES_CSV_HEADER)?;
    }
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Writes one row per symbol (plus the header) to `path`.
pub fn write_states_csv(
    path: &Path,
    tx_states: &[DensityMatrix],
    rx_states: &[DensityMatrix],
    tx_labels: &[i32],
    rx_labels: &[i32],
    projection: Projection,
) -> Result<()> {
    let rows = state_rows(tx_states, rx_states, tx_labels, rx_labels, projection)?;
    write_state_rows(path, &rows)
}

pub fn read_states_csv(path: &Path) -> Result<Vec<StateRow>> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != STATES_CSV_HEADER {
        return Err(Error::InvalidParameter(format!(
            "{} does not have the state-dump header",
            path.display()
        )));
    }
    reader
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

/// Clip radius used when only a dump is available.
pub fn clip_radius_from_rows(rows: &[StateRow]) -> f64 {
    let max = rows
        .iter()
        .filter(|r| !r.tx_clipped)
        .map(|r| r.tx_i.hypot(r.tx_q))
        .fold(0.0, f64::max);
    CLIP_RADIUS_FACTOR * if max > 0.0 { max } else { 1.0 }
}

/// Renders `constellation_<name>.svg` and `bloch_<name>.svg` into `dir`.
/// Received points are colored by their transmitted label.
pub fn render_rows(
    rows: &[StateRow],
    clip_radius: f64,
    name: &str,
    dir: &Path,
) -> Result<(PathBuf, PathBuf)> {
    let tx_c: Vec<_> = rows
        .iter()
        .map(|r| ConstellationPlotPoint {
            i: r.tx_i,
            q: r.tx_q,
            label: r.tx_label,
            clipped: r.tx_clipped,
        })
        .collect();
    let rx_c: Vec<_> = rows
        .iter()
        .map(|r| ConstellationPlotPoint {
            i: r.rx_i,
            q: r.rx_q,
            label: r.tx_label,
            clipped: r.rx_clipped,
        })
        .collect();
    let tx_b: Vec<_> = rows
        .iter()
        .map(|r| BlochPlotPoint {
            r: BlochVector::new(r.tx_bloch_x, r.tx_bloch_y, r.tx_bloch_z),
            label: r.tx_label,
        })
        .collect();
    let rx_b: Vec<_> = rows
        .iter()
        .map(|r| BlochPlotPoint {
            r: BlochVector::new(r.rx_bloch_x, r.rx_bloch_y, r.rx_bloch_z),
            label: r.tx_label,
        })
        .collect();
    let constellation = dir.join(format!("constellation_{name}.svg"));
    let bloch = dir.join(format!("bloch_{name}.svg"));
    render_constellation_svg(
        &tx_c,
        &rx_c,
        clip_radius,
        &format!("{name}: constellation (leading qubit block)"),
        &constellation,
    )?;
    render_bloch_svg(
        &tx_b,
        &rx_b,
        &format!("{name}: Bloch vectors (leading qubit block)"),
        &bloch,
    )?;
    Ok((constellation, bloch))
}

/// The `plot` entry point: figures from an existing state dump. The channel
/// name is the file stem with any `states_` prefix removed.
pub fn plot_states_csv(csv_path: &Path, out_dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let rows = read_states_csv(csv_path)?;
    let stem = csv_path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("states");
    let name = stem.strip_prefix("states_").unwrap_or(stem);
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    render_rows(&rows, clip_radius_from_rows(&rows), name, out_dir)
}
