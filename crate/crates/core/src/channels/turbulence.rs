//! Free-space fading surrogate: pointing loss times Gamma-Gamma scintillation,
//! feeding the pure-loss map.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use super::{check_non_negative, pure_loss_apply, ChannelConfig};
use crate::error::{Error, Result};
use crate::state::DensityMatrix;

/// `exp(-2 (sigma_p / w0)^2)`.
pub fn pointing_loss_factor(sigma_p: f64, w0: f64) -> Result<f64> {
    check_non_negative("sigma_p", sigma_p)?;
    if !(w0 > 0.0 && w0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "w0 must be positive, got {w0}"
        )));
    }
    Ok((-2.0 * (sigma_p / w0).powi(2)).exp())
}

/// Plane-wave Gamma-Gamma shape parameters `(alpha, beta)` for Rytov
/// variance `sigma_r^2`.
pub fn gamma_gamma_shapes(rytov_var: f64) -> Result<(f64, f64)> {
    check_non_negative("rytov_var", rytov_var)?;
    let s2 = rytov_var;
    let s12_5 = s2.powf(6.0 / 5.0);
    let alpha = (0.49 * s2 / (1.0 + 1.11 * s12_5).powf(7.0 / 6.0))
        .exp_m1()
        .recip();
    let beta = (0.51 * s2 / (1.0 + 0.69 * s12_5).powf(5.0 / 6.0))
        .exp_m1()
        .recip();
    Ok((alpha, beta))
}

fn unit_mean_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> Result<f64> {
    if !shape.is_finite() {
        return Ok(1.0);
    }
    let g = Gamma::new(shape, 1.0 / shape)
        .map_err(|e| Error::InvalidParameter(format!("gamma shape {shape}: {e}")))?;
    Ok(g.sample(rng))
}

/// Unit-mean Gamma-Gamma irradiance sample; exactly 1 without turbulence.
pub fn sample_scintillation<R: Rng + ?Sized>(rytov_var: f64, rng: &mut R) -> Result<f64> {
    if rytov_var == 0.0 {
        check_non_negative("rytov_var", rytov_var)?;
        return Ok(1.0);
    }
    let (alpha, beta) = gamma_gamma_shapes(rytov_var)?;
    let x = unit_mean_gamma(alpha, rng)?;
    let y = unit_mean_gamma(beta, rng)?;
    Ok(x * y)
}

/// One fading draw of the end-to-end transmissivity, clipped to `[0, 1]`.
pub fn turbulence_transmissivity<R: Rng + ?Sized>(cfg: &ChannelConfig, rng: &mut R) -> Result<f64> {
    let ChannelConfig::Turbulence {
        sigma_p,
        w0,
        rytov_var,
        path_loss_db,
    } = *cfg
    else {
        return Err(Error::InvalidParameter(format!(
            "expected a turbulence config, got {}",
            cfg.kind()
        )));
    };
    check_non_negative("path_loss_db", path_loss_db)?;
    let pointing = pointing_loss_factor(sigma_p, w0)?;
    let path = 10f64.powf(-path_loss_db / 10.0);
    let scint = sample_scintillation(rytov_var, rng)?;
    let eta = (pointing * path * scint).clamp(0.0, 1.0);
    assert!(
        (0.0..=1.0).contains(&eta),
        "transmissivity {eta} escaped [0, 1]"
    );
    Ok(eta)
}

/// Draws a transmissivity and applies pure loss with it.
pub fn turbulence_apply<R: Rng + ?Sized>(
    cfg: &ChannelConfig,
    rho: &DensityMatrix,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let eta = turbulence_transmissivity(cfg, rng)?;
    pure_loss_apply(eta, rho)
}
