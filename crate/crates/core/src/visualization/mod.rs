//! Diagnostic projections of received states and their SVG renderings.
//!
//! Constellation points invert the qubit embedding through the ratio
//! `rho_10 / rho_00` of the leading qubit block; Bloch points come from the
//! same block. Neither is a physical observable of larger states.

mod svg;

pub use svg::{
    render_bloch_svg, render_constellation_svg, BLOCH_AZIMUTH_DEG, BLOCH_ELEVATION_DEG, PALETTE,
};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::modulation::DetectorCodebook;
use crate::state::{
    bloch_vector, leading_qubit_block, BlochVector, DensityMatrix, DEFAULT_TRACE_FLOOR,
};

/// Default floor on `rho_00` below which the ratio reconstruction is clipped.
pub const DEFAULT_RHO00_FLOOR: f64 = 1e-9;

/// Clip radius as a multiple of the largest transmitted constellation radius.
pub const CLIP_RADIUS_FACTOR: f64 = 1.5;

/// In-phase/quadrature surrogate of one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstellationPlotPoint {
    pub i: f64,
    pub q: f64,
    pub label: i32,
    pub clipped: bool,
}

/// A Bloch vector with the color label it is drawn with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPlotPoint {
    pub r: BlochVector,
    pub label: i32,
}

/// Reconstructs `alpha ~ rho_10 / rho_00` from the renormalized leading
/// block and undoes the constellation power normalization.
pub fn constellation_point(
    rho: &DensityMatrix,
    label: i32,
    power_scale: f64,
    rho00_floor: f64,
    clip_radius: f64,
) -> ConstellationPlotPoint {
    let (block, _) = leading_qubit_block(rho, DEFAULT_TRACE_FLOOR);
    let rho00 = block.get(0, 0).re;
    let rho10 = block.get(1, 0);
    if rho00 < rho00_floor {
        let angle = if rho10.norm() > 0.0 { rho10.arg() } else { 0.0 };
        return ConstellationPlotPoint {
            i: clip_radius * angle.cos(),
            q: clip_radius * angle.sin(),
            label,
            clipped: true,
        };
    }
    let alpha = rho10 / rho00 / power_scale;
    ConstellationPlotPoint {
        i: alpha.re,
        q: alpha.im,
        label,
        clipped: false,
    }
}

/// [`CLIP_RADIUS_FACTOR`] times the largest unclipped reconstruction of a
/// codebook state (1 when every state is singular or at the origin).
pub fn clip_radius_for(codebook: &DetectorCodebook, rho00_floor: f64) -> f64 {
    let max = codebook
        .states()
        .iter()
        .map(|s| constellation_point(s, 0, codebook.power_scale(), rho00_floor, 0.0))
        .filter(|p| !p.clipped)
        .map(|p| p.i.hypot(p.q))
        .fold(0.0, f64::max);
    CLIP_RADIUS_FACTOR * if max > 0.0 { max } else { 1.0 }
}

/// Leading-block Bloch vector and block trace for every state.
pub fn bloch_points(states: &[DensityMatrix]) -> Result<Vec<(BlochVector, f64)>> {
    states
        .iter()
        .map(|s| {
            let (block, renorm) = leading_qubit_block(s, DEFAULT_TRACE_FLOOR);
            Ok((bloch_vector(&block)?, renorm))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing_apply, erasure_apply};
    use crate::modulation::{embed_alpha, qam_codebook, qam_constellation, qpsk_codebook};
    use num_complex::Complex64;

    #[test]
    fn ratio_inverts_embedding() {
        for alpha in [
            Complex64::new(0.3, -0.7),
            Complex64::new(-2.0, 1.5),
            Complex64::new(0.0, 0.1),
        ] {
            let rho = embed_alpha(alpha).unwrap();
            let p = constellation_point(&rho, 0, 1.0, DEFAULT_RHO00_FLOOR, 10.0);
            assert!(!p.clipped);
            assert!((p.i - alpha.re).abs() < 1e-12 && (p.q - alpha.im).abs() < 1e-12);
        }
        let origin = constellation_point(
            &DensityMatrix::basis(2, 0),
            0,
            1.0,
            DEFAULT_RHO00_FLOOR,
            5.0,
        );
        assert_eq!((origin.i, origin.q, origin.clipped), (0.0, 0.0, false));

        let one = constellation_point(
            &DensityMatrix::basis(2, 1),
            3,
            1.0,
            DEFAULT_RHO00_FLOOR,
            5.0,
        );
        assert!(one.clipped);
        assert_eq!(one.label, 3);
        assert!((one.i.hypot(one.q) - 5.0).abs() < 1e-9);
    }

    #[test]
    fn qam_round_trip_in_raw_units() {
        let scale = crate::modulation::qam_power_scale(16).unwrap();
        for p in qam_constellation(16).unwrap() {
            let rho = embed_alpha(p.raw * scale).unwrap();
            let back = constellation_point(&rho, p.symbol as i32, scale, DEFAULT_RHO00_FLOOR, 10.0);
            assert!((back.i - p.raw.re).abs() < 1e-9 && (back.q - p.raw.im).abs() < 1e-9);
        }
    }

    #[test]
    fn clip_radius_examples() {
        let qam = qam_codebook(16).unwrap();
        let r = clip_radius_for(&qam, DEFAULT_RHO00_FLOOR);
        assert!((r - 1.5 * 18f64.sqrt()).abs() < 1e-9);
        // QPSK: |+> and |-> reconstruct to +-1, |1> is singular.
        let r = clip_radius_for(&qpsk_codebook(), DEFAULT_RHO00_FLOOR);
        assert!((r - 1.5).abs() < 1e-9);
    }

    #[test]
    fn bloch_projection_examples() {
        let cb = qpsk_codebook();
        let tx = bloch_points(cb.states()).unwrap();
        for (r, renorm) in &tx {
            assert!((r.norm() - 1.0).abs() < 1e-12);
            assert!((renorm - 1.0).abs() < 1e-12);
        }

        let depolarized: Vec<_> = cb
            .states()
            .iter()
            .map(|s| depolarizing_apply(0.5, s).unwrap())
            .collect();
        for (r, _) in bloch_points(&depolarized).unwrap() {
            assert!((r.norm() - 0.5).abs() < 1e-12);
        }

        let p = 0.2;
        let erased: Vec<_> = cb
            .states()
            .iter()
            .map(|s| erasure_apply(p, s).unwrap())
            .collect();
        for ((r, renorm), (r0, _)) in bloch_points(&erased).unwrap().iter().zip(&tx) {
            assert!(
                (r.x - r0.x).abs() < 1e-12
                    && (r.y - r0.y).abs() < 1e-12
                    && (r.z - r0.z).abs() < 1e-12
            );
            assert!((renorm - (1.0 - p)).abs() < 1e-12);
        }
    }
}
