//! Quantum channel models behind a single-state `apply` contract.
//!
//! Depolarizing, dephasing and erasure are the textbook finite-dimensional
//! maps. Bosonic, turbulence and PMD are reduced optical surrogates that fit
//! the same density-matrix pipeline.

mod bosonic;
mod pmd;
mod turbulence;

pub use bosonic::{
    beamsplitter_unitary, bosonic_apply, db_to_transmissivity, thermal_state, BosonicModel,
};
pub use pmd::{haar_unitary, pmd_apply, pmd_visibility};
pub use turbulence::{
    gamma_gamma_shapes, pointing_loss_factor, sample_scintillation, turbulence_apply,
    turbulence_transmissivity,
};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{CMatrix, DensityMatrix};

/// Parameters of one of the six channel models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelConfig {
    Depolarizing {
        p: f64,
    },
    Dephasing {
        p: f64,
    },
    Erasure {
        p: f64,
    },
    Bosonic {
        loss_db: f64,
        #[serde(default)]
        n_th: f64,
        #[serde(default = "default_fock_dim")]
        fock_dim: usize,
    },
    Turbulence {
        /// Pointing jitter, in the same units as `w0`.
        sigma_p: f64,
        /// Beam radius.
        w0: f64,
        rytov_var: f64,
        #[serde(default)]
        path_loss_db: f64,
    },
    Pmd {
        /// Differential group delay in seconds.
        dgd: f64,
        /// Source spectral width in rad/s.
        sigma_omega: f64,
        n_sections: usize,
    },
}

fn default_fock_dim() -> usize {
    2
}

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be a probability in [0, 1], got {p}"
        )))
    }
}

pub(crate) fn check_non_negative(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be finite and non-negative, got {x}"
        )))
    }
}

fn require_dim(rho: &DensityMatrix, expected: usize) -> Result<()> {
    if rho.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            actual: rho.dim(),
        });
    }
    Ok(())
}

impl ChannelConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            ChannelConfig::Depolarizing { .. } => "depolarizing",
            ChannelConfig::Dephasing { .. } => "dephasing",
            ChannelConfig::Erasure { .. } => "erasure",
            ChannelConfig::Bosonic { .. } => "bosonic",
            ChannelConfig::Turbulence { .. } => "turbulence",
            ChannelConfig::Pmd { .. } => "pmd",
        }
    }

    /// Range checks on every parameter.
    pub fn validate(&self) -> Result<()> {
        match *self {
            ChannelConfig::Depolarizing { p }
            | ChannelConfig::Dephasing { p }
            | ChannelConfig::Erasure { p } => check_probability("p", p),
            ChannelConfig::Bosonic {
                loss_db,
                n_th,
                fock_dim,
            } => {
                check_non_negative("loss_db", loss_db)?;
                check_non_negative("n_th", n_th)?;
                if fock_dim < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "fock_dim must be at least 2, got {fock_dim}"
                    )));
                }
                Ok(())
            }
            ChannelConfig::Turbulence {
                sigma_p,
                w0,
                rytov_var,
                path_loss_db,
            } => {
                check_non_negative("sigma_p", sigma_p)?;
                check_non_negative("rytov_var", rytov_var)?;
                check_non_negative("path_loss_db", path_loss_db)?;
                if !(w0 > 0.0 && w0.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "w0 must be positive, got {w0}"
                    )));
                }
                Ok(())
            }
            ChannelConfig::Pmd {
                dgd,
                sigma_omega,
                n_sections,
            } => {
                check_non_negative("dgd", dgd)?;
                check_non_negative("sigma_omega", sigma_omega)?;
                if n_sections == 0 {
                    return Err(Error::InvalidParameter(
                        "n_sections must be at least 1".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Input dimension a channel needs, if it is fixed by the model.
    fn required_input_dim(&self) -> Option<usize> {
        match *self {
            ChannelConfig::Erasure { .. } => None,
            ChannelConfig::Bosonic { fock_dim, .. } => Some(fock_dim),
            _ => Some(2),
        }
    }
}

/// A configured channel acting on states of a fixed input dimension.
#[derive(Debug, Clone)]
pub struct Channel {
    config: ChannelConfig,
    input_dim: usize,
    bosonic: Option<BosonicModel>,
}

impl Channel {
    pub fn new(config: ChannelConfig, input_dim: usize) -> Result<Self> {
        config.validate()?;
        if input_dim == 0 {
            return Err(Error::InvalidParameter(
                "input dimension must be positive".into(),
            ));
        }
        if let Some(expected) = config.required_input_dim() {
            if expected != input_dim {
                return Err(Error::DimensionMismatch {
                    expected,
                    actual: input_dim,
                });
            }
        }
        let bosonic = match config {
            ChannelConfig::Bosonic {
                loss_db,
                n_th,
                fock_dim,
            } => Some(BosonicModel::new(loss_db, n_th, fock_dim)?),
            _ => None,
        };
        Ok(Self {
            config,
            input_dim,
            bosonic,
        })
    }

    pub fn config(&self) -> &ChannelConfig {
        &self.config
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        match self.config {
            ChannelConfig::Erasure { .. } => self.input_dim + 1,
            _ => self.input_dim,
        }
    }

    /// Whether `apply` draws from the random stream.
    pub fn is_stochastic(&self) -> bool {
        matches!(
            self.config,
            ChannelConfig::Turbulence { .. } | ChannelConfig::Pmd { .. }
        )
    }

    pub fn apply<R: Rng + ?Sized>(
        &self,
        rho: &DensityMatrix,
        rng: &mut R,
    ) -> Result<DensityMatrix> {
        require_dim(rho, self.input_dim)?;
        match &self.config {
            ChannelConfig::Depolarizing { p } => depolarizing_apply(*p, rho),
            ChannelConfig::Dephasing { p } => dephasing_apply(*p, rho),
            ChannelConfig::Erasure { p } => erasure_apply(*p, rho),
            ChannelConfig::Bosonic { .. } => self
                .bosonic
                .as_ref()
                .expect("bosonic model built at construction")
                .apply(rho),
            ChannelConfig::Turbulence { .. } => turbulence_apply(&self.config, rho, rng),
            ChannelConfig::Pmd { .. } => pmd_apply(&self.config, rho, rng),
        }
    }
}

/// `(1 - p) rho + p I/2`.
pub fn depolarizing_apply(p: f64, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_probability("p", p)?;
    require_dim(rho, 2)?;
    let out = rho.matrix().scale(1.0 - p) + CMatrix::identity(2, 2).scale(p / 2.0);
    DensityMatrix::new(out)
}

/// Phase damping: off-diagonals scaled by `1 - p`, populations kept.
pub fn dephasing_apply(p: f64, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_probability("p", p)?;
    require_dim(rho, 2)?;
    let mut out = rho.matrix().clone();
    out[(0, 1)] *= 1.0 - p;
    out[(1, 0)] *= 1.0 - p;
    DensityMatrix::new(out)
}

/// `(1 - p) rho (+) p |e><e|` with the flag as the last basis vector.
pub fn erasure_apply(p: f64, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_probability("p", p)?;
    let d = rho.dim();
    let mut out = CMatrix::zeros(d + 1, d + 1);
    out.view_mut((0, 0), (d, d))
        .copy_from(&rho.matrix().scale(1.0 - p));
    out[(d, d)] = Complex64::new(p, 0.0);
    DensityMatrix::new(out)
}

/// Kraus pair of the qubit pure-loss (amplitude damping) map.
pub fn pure_loss_kraus(eta: f64) -> Result<[CMatrix; 2]> {
    check_probability("eta", eta)?;
    let zero = Complex64::new(0.0, 0.0);
    let k0 = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(1.0, 0.0),
            zero,
            zero,
            Complex64::new(eta.sqrt(), 0.0),
        ],
    );
    let k1 = CMatrix::from_row_slice(
        2,
        2,
        &[zero, Complex64::new((1.0 - eta).sqrt(), 0.0), zero, zero],
    );
    Ok([k0, k1])
}

/// Pure loss of transmissivity `eta` on the vacuum/one-photon qubit.
pub fn pure_loss_apply(eta: f64, rho: &DensityMatrix) -> Result<DensityMatrix> {
    require_dim(rho, 2)?;
    let kraus = pure_loss_kraus(eta)?;
    let out = kraus
        .iter()
        .map(|k| k * rho.matrix() * k.adjoint())
        .fold(CMatrix::zeros(2, 2), |acc, term| acc + term);
    DensityMatrix::new(out)
}
