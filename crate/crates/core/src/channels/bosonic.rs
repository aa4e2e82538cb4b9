//! Thermal-loss channel as a truncated Fock-space Stinespring dilation.

use num_complex::Complex64;

use super::{check_non_negative, check_probability};
use crate::error::{Error, Result};
use crate::state::{eigh, kron, partial_trace_second, CMatrix, DensityMatrix};

/// `eta = 10^(-loss_db / 10)`.
pub fn db_to_transmissivity(loss_db: f64) -> f64 {
    10f64.powf(-loss_db / 10.0)
}

/// Thermal state with mean photon number `n_th`, truncated to `fock_dim`
/// levels and renormalized.
pub fn thermal_state(n_th: f64, fock_dim: usize) -> Result<DensityMatrix> {
    check_non_negative("n_th", n_th)?;
    if fock_dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "fock_dim must be at least 2, got {fock_dim}"
        )));
    }
    // n_th^n / (1 + n_th)^(n+1) = (1 - q) q^n with q = n_th / (1 + n_th).
    let ratio = n_th / (1.0 + n_th);
    let weights: Vec<f64> = (0..fock_dim as i32).map(|n| ratio.powi(n)).collect();
    let total: f64 = weights.iter().sum();
    let mut m = CMatrix::zeros(fock_dim, fock_dim);
    for (n, w) in weights.iter().enumerate() {
        m[(n, n)] = Complex64::new(w / total, 0.0);
    }
    Ok(DensityMatrix::from_trusted(m))
}

fn annihilation(fock_dim: usize) -> CMatrix {
    let mut a = CMatrix::zeros(fock_dim, fock_dim);
    for n in 1..fock_dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// `exp(theta (a^dagger b - a b^dagger))` on two truncated modes, with
/// `theta = arccos(sqrt(eta))`. The system mode is the first tensor factor.
pub fn beamsplitter_unitary(eta: f64, fock_dim: usize) -> Result<CMatrix> {
    check_probability("eta", eta)?;
    if fock_dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "fock_dim must be at least 2, got {fock_dim}"
        )));
    }
    let theta = eta.sqrt().min(1.0).acos();
    let id = CMatrix::identity(fock_dim, fock_dim);
    let a = kron(&annihilation(fock_dim), &id);
    let b = kron(&id, &annihilation(fock_dim));
    let generator = (a.adjoint() * &b - &a * b.adjoint()).scale(theta);
    // generator = i H with H Hermitian, so exp(generator) = V exp(i lambda) V^dagger.
    let h = generator * Complex64::new(0.0, -1.0);
    let (values, vectors) = eigh(&h);
    let mut phased = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, lambda);
        phased.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    Ok(phased * vectors.adjoint())
}

/// Precomputed beamsplitter and environment state for repeated application.
#[derive(Debug, Clone)]
pub struct BosonicModel {
    fock_dim: usize,
    eta: f64,
    unitary: CMatrix,
    environment: DensityMatrix,
}

impl BosonicModel {
    pub fn new(loss_db: f64, n_th: f64, fock_dim: usize) -> Result<Self> {
        check_non_negative("loss_db", loss_db)?;
        let eta = db_to_transmissivity(loss_db);
        Ok(Self {
            fock_dim,
            eta,
            unitary: beamsplitter_unitary(eta, fock_dim)?,
            environment: thermal_state(n_th, fock_dim)?,
        })
    }

    pub fn transmissivity(&self) -> f64 {
        self.eta
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.fock_dim {
            return Err(Error::DimensionMismatch {
                expected: self.fock_dim,
                actual: rho.dim(),
            });
        }
        let joint = kron(rho.matrix(), self.environment.matrix());
        let evolved = &self.unitary * joint * self.unitary.adjoint();
        DensityMatrix::new(partial_trace_second(
            &evolved,
            self.fock_dim,
            self.fock_dim,
        )?)
    }
}

/// `Tr_E[U (rho (x) rho_th) U^dagger]` with `eta = 10^(-loss_db/10)`.
pub fn bosonic_apply(
    loss_db: f64,
    n_th: f64,
    fock_dim: usize,
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    BosonicModel::new(loss_db, n_th, fock_dim)?.apply(rho)
}
