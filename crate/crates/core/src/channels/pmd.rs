//! Polarization mode dispersion as a chain of random-basis coherence losses.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::ChannelConfig;
use crate::error::{Error, Result};
use crate::state::{hermitize, CMatrix, DensityMatrix};

/// Haar-distributed unitary via QR of a complex Ginibre matrix, with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    assert!(dim > 0, "dimension must be positive");
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let ginibre = CMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = ginibre.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    q
}

/// Per-section coherence factor `exp(-(sigma_omega * dgd / sqrt(n))^2 / 2)`.
pub fn pmd_visibility(dgd: f64, sigma_omega: f64, n_sections: usize) -> f64 {
    let tau_sec = dgd / (n_sections as f64).sqrt();
    (-0.5 * (sigma_omega * tau_sec).powi(2)).exp()
}

pub fn pmd_apply<R: Rng + ?Sized>(
    cfg: &ChannelConfig,
    rho: &DensityMatrix,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let ChannelConfig::Pmd {
        dgd,
        sigma_omega,
        n_sections,
    } = *cfg
    else {
        return Err(Error::InvalidParameter(format!(
            "expected a PMD config, got {}",
            cfg.kind()
        )));
    };
    cfg.validate()?;
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: rho.dim(),
        });
    }
    let nu = pmd_visibility(dgd, sigma_omega, n_sections);
    let mut state = rho.matrix().clone();
    for _ in 0..n_sections {
        let u = haar_unitary(2, rng);
        // Rotate into the section's principal-state basis, damp, rotate back.
        let mut local = u.adjoint() * &state * &u;
        local[(0, 1)] *= nu;
        local[(1, 0)] *= nu;
        state = &u * local * u.adjoint();
    }
    DensityMatrix::new(hermitize(&state))
}
