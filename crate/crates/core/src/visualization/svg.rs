use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{BlochPlotPoint, ConstellationPlotPoint};
use crate::error::{Error, Result};

/// Colors assigned to labels `0, 1, 2, ...`, cycling past 16.
pub const PALETTE: [&str; 16] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94",
];
const ERASURE_COLOR: &str = "#000000";

pub const BLOCH_AZIMUTH_DEG: f64 = 30.0;
pub const BLOCH_ELEVATION_DEG: f64 = 20.0;

const PANEL: f64 = 420.0;
const MARGIN: f64 = 40.0;
const LEGEND_WIDTH: f64 = 90.0;
const TITLE_HEIGHT: f64 = 30.0;

/// Parametrized great circle on the unit sphere.
type GreatCircle = fn(f64) -> (f64, f64, f64);

fn color(label: i32) -> &'static str {
    if label < 0 {
        ERASURE_COLOR
    } else {
        PALETTE[label as usize % PALETTE.len()]
    }
}

fn sorted_labels(groups: &[&[i32]]) -> Vec<i32> {
    let mut labels: Vec<i32> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    labels.sort_unstable();
    labels.dedup();
    labels
}

fn header(out: &mut String, width: f64, height: f64, comment: &str, title: &str) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(out, "<!-- {comment} -->");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="20" font-size="16" text-anchor="middle">{}</text>"#,
        width / 2.0,
        escape(title)
    );
}

fn legend(out: &mut String, x: f64, labels: &[i32]) {
    let _ = writeln!(out, r#"<g id="legend" font-size="11">"#);
    for (k, &label) in labels.iter().enumerate() {
        let y = TITLE_HEIGHT + MARGIN + 14.0 * k as f64;
        let name = if label < 0 {
            "erased".to_string()
        } else {
            label.to_string()
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{:.1}" cy="{:.1}" r="4" fill="{}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            x + 8.0,
            y,
            color(label),
            x + 18.0,
            y + 4.0,
            name
        );
    }
    let _ = writeln!(out, "</g>");
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn require_points(n_tx: usize, n_rx: usize) -> Result<()> {
    if n_tx == 0 || n_rx == 0 {
        return Err(Error::InvalidParameter(
            "nothing to plot: empty point list".into(),
        ));
    }
    Ok(())
}

/// Two-panel constellation scatter (transmitted left, received right).
///
/// Axes span `[-1.1 r, 1.1 r]` with `r = clip_radius`; clipped points are
/// drawn as crosses.
pub fn render_constellation_svg(
    tx: &[ConstellationPlotPoint],
    rx: &[ConstellationPlotPoint],
    clip_radius: f64,
    title: &str,
    path: &Path,
) -> Result<()> {
    require_points(tx.len(), rx.len())?;
    let extent = 1.1 * clip_radius;
    let width = 2.0 * (PANEL + 2.0 * MARGIN) + LEGEND_WIDTH;
    let height = PANEL + 2.0 * MARGIN + TITLE_HEIGHT;
    let mut out = String::new();
    header(
        &mut out,
        width,
        height,
        &format!("constellation: axis range +-{extent:.6}, clip radius {clip_radius:.6}"),
        title,
    );
    for (k, (name, points)) in [("transmitted", tx), ("received", rx)].iter().enumerate() {
        let x0 = MARGIN + k as f64 * (PANEL + 2.0 * MARGIN);
        let y0 = TITLE_HEIGHT + MARGIN;
        let map = |i: f64, q: f64| {
            (
                x0 + (i + extent) / (2.0 * extent) * PANEL,
                y0 + (extent - q) / (2.0 * extent) * PANEL,
            )
        };
        let _ = writeln!(out, r#"<g id="{name}">"#);
        let _ = writeln!(
            out,
            r##"<rect x="{x0:.1}" y="{y0:.1}" width="{PANEL:.1}" height="{PANEL:.1}" fill="none" stroke="#333"/>"##
        );
        let (cx, cy) = map(0.0, 0.0);
        let _ = writeln!(
            out,
            r##"<line x1="{x0:.1}" y1="{cy:.1}" x2="{:.1}" y2="{cy:.1}" stroke="#bbb"/><line x1="{cx:.1}" y1="{y0:.1}" x2="{cx:.1}" y2="{:.1}" stroke="#bbb"/>"##,
            x0 + PANEL,
            y0 + PANEL
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle">{name}</text>"#,
            x0 + PANEL / 2.0,
            y0 - 8.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle">I</text><text x="{:.1}" y="{:.1}" font-size="11">Q</text>"#,
            x0 + PANEL / 2.0,
            y0 + PANEL + 16.0,
            x0 - 14.0,
            y0 + PANEL / 2.0
        );
        for p in points.iter() {
            let (x, y) = map(p.i, p.q);
            if p.clipped {
                let _ = writeln!(
                    out,
                    r#"<path d="M{:.2} {:.2}L{:.2} {:.2}M{:.2} {:.2}L{:.2} {:.2}" stroke="{}" stroke-width="1.5" class="clipped"/>"#,
                    x - 3.0,
                    y - 3.0,
                    x + 3.0,
                    y + 3.0,
                    x - 3.0,
                    y + 3.0,
                    x + 3.0,
                    y - 3.0,
                    color(p.label)
                );
            } else {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{}" fill-opacity="0.6"/>"#,
                    color(p.label)
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }
    let labels: Vec<i32> = tx.iter().chain(rx).map(|p| p.label).collect();
    legend(&mut out, width - LEGEND_WIDTH, &sorted_labels(&[&labels]));
    let _ = writeln!(out, "</svg>");
    write_file(path, &out)
}

/// Orthographic screen coordinates of a Bloch vector (unit sphere radius 1).
pub(crate) fn project(x: f64, y: f64, z: f64) -> (f64, f64) {
    let az = BLOCH_AZIMUTH_DEG.to_radians();
    let el = BLOCH_ELEVATION_DEG.to_radians();
    let right = (-az.sin(), az.cos(), 0.0);
    let up = (-el.sin() * az.cos(), -el.sin() * az.sin(), el.cos());
    (
        x * right.0 + y * right.1 + z * right.2,
        x * up.0 + y * up.1 + z * up.2,
    )
}

/// Two-panel Bloch-ball scatter under a fixed orthographic camera.
pub fn render_bloch_svg(
    tx: &[BlochPlotPoint],
    rx: &[BlochPlotPoint],
    title: &str,
    path: &Path,
) -> Result<()> {
    require_points(tx.len(), rx.len())?;
    let width = 2.0 * (PANEL + 2.0 * MARGIN) + LEGEND_WIDTH;
    let height = PANEL + 2.0 * MARGIN + TITLE_HEIGHT;
    let radius = PANEL / 2.0 * 0.9;
    let mut out = String::new();
    header(
        &mut out,
        width,
        height,
        &format!(
            "bloch: orthographic camera, azimuth {BLOCH_AZIMUTH_DEG} deg, elevation {BLOCH_ELEVATION_DEG} deg"
        ),
        title,
    );
    for (k, (name, points)) in [("transmitted", tx), ("received", rx)].iter().enumerate() {
        let cx = MARGIN + k as f64 * (PANEL + 2.0 * MARGIN) + PANEL / 2.0;
        let cy = TITLE_HEIGHT + MARGIN + PANEL / 2.0;
        let to_screen = |x: f64, y: f64, z: f64| {
            let (u, v) = project(x, y, z);
            (cx + radius * u, cy - radius * v)
        };
        let _ = writeln!(out, r#"<g id="{name}">"#);
        let _ = writeln!(
            out,
            r##"<circle cx="{cx:.1}" cy="{cy:.1}" r="{radius:.1}" fill="none" stroke="#333" class="outline"/>"##
        );
        let circles: [GreatCircle; 3] = [
            |t| (t.cos(), t.sin(), 0.0),
            |t| (t.cos(), 0.0, t.sin()),
            |t| (0.0, t.cos(), t.sin()),
        ];
        for circle in circles {
            let mut d = String::new();
            for s in 0..=72 {
                let (x, y, z) = circle(s as f64 * std::f64::consts::TAU / 72.0);
                let (u, v) = to_screen(x, y, z);
                let _ = write!(d, "{}{u:.2} {v:.2}", if s == 0 { "M" } else { "L" });
            }
            let _ = writeln!(out, r##"<path d="{d}" fill="none" stroke="#ccc"/>"##);
        }
        for (axis, (x, y, z)) in [
            ("x", (1.15, 0.0, 0.0)),
            ("y", (0.0, 1.15, 0.0)),
            ("z", (0.0, 0.0, 1.15)),
        ] {
            let (u, v) = to_screen(x, y, z);
            let _ = writeln!(
                out,
                r#"<text x="{u:.1}" y="{v:.1}" font-size="12" text-anchor="middle">{axis}</text>"#
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{cx:.1}" y="{:.1}" font-size="13" text-anchor="middle">{name}</text>"#,
            TITLE_HEIGHT + MARGIN - 8.0
        );
        for p in points.iter() {
            let (u, v) = to_screen(p.r.x, p.r.y, p.r.z);
            let _ = writeln!(
                out,
                r#"<circle cx="{u:.2}" cy="{v:.2}" r="2.5" fill="{}" fill-opacity="0.6"/>"#,
                color(p.label)
            );
        }
        let _ = writeln!(out, "</g>");
    }
    let labels: Vec<i32> = tx.iter().chain(rx).map(|p| p.label).collect();
    legend(&mut out, width - LEGEND_WIDTH, &sorted_labels(&[&labels]));
    let _ = writeln!(out, "</svg>");
    write_file(path, &out)
}
