//! Pretty-good (square-root) measurement and hard decisions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modulation::{DetectorCodebook, ERASURE_LABEL};
use crate::state::{
    eigh, hermitize, inv_sqrt_psd, max_abs, min_eigenvalue, trace_of_product, CMatrix,
    DensityMatrix, DENSITY_TOL,
};

/// How a label is drawn from the POVM scores.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecisionMode {
    /// Deterministic argmax of `Tr(E_i rho)`, lowest index on ties.
    #[default]
    Argmax,
    /// Born-rule sample from `Tr(E_i rho)`.
    Sampled,
}

/// A labeled POVM.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<CMatrix>,
    labels: Vec<i32>,
}

impl Povm {
    /// Checks PSD-ness of every element and completeness at 1e-9.
    pub fn new(elements: Vec<CMatrix>, labels: Vec<i32>) -> Result<Self> {
        if elements.is_empty() || elements.len() != labels.len() {
            return Err(Error::InvalidParameter(format!(
                "POVM needs one label per element ({} elements, {} labels)",
                elements.len(),
                labels.len()
            )));
        }
        let dim = elements[0].nrows();
        let mut sum = CMatrix::zeros(dim, dim);
        for e in &elements {
            if e.nrows() != dim || e.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: e.nrows(),
                });
            }
            let min = min_eigenvalue(e);
            if min < -DENSITY_TOL {
                return Err(Error::NotPsd {
                    min_eigenvalue: min,
                    tol: DENSITY_TOL,
                });
            }
            sum += e;
        }
        let defect = max_abs(&(sum - CMatrix::identity(dim, dim)));
        if defect > DENSITY_TOL {
            return Err(Error::Numerical(format!(
                "POVM elements sum to identity only within {defect:.3e}"
            )));
        }
        Ok(Self { elements, labels })
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[i32] {
        &self.labels
    }

    /// `Tr(E_i rho)` for every element. Imaginary residue above 1e-9 is an error.
    pub fn scores(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: rho.dim(),
            });
        }
        self.elements
            .iter()
            .map(|e| {
                let t = trace_of_product(e, rho.matrix());
                if t.im.abs() > DENSITY_TOL {
                    Err(Error::Numerical(format!(
                        "measurement probability has imaginary part {:.3e}",
                        t.im
                    )))
                } else {
                    Ok(t.re)
                }
            })
            .collect()
    }
}

/// `E_i = p_i rhobar^{-1/2} rho_i rhobar^{-1/2}` with `rhobar = sum_i p_i rho_i`.
pub fn build_pgm(codebook: &DetectorCodebook, eig_cut: f64) -> Result<Povm> {
    let dim = codebook.dim();
    let average = codebook
        .states()
        .iter()
        .zip(codebook.priors())
        .fold(CMatrix::zeros(dim, dim), |acc, (rho, &p)| {
            acc + rho.matrix().scale(p)
        });
    let inv_sqrt = inv_sqrt_psd(&average, eig_cut)?;

    let support = &inv_sqrt * &average * &inv_sqrt;
    for (i, rho) in codebook.states().iter().enumerate() {
        if codebook.priors()[i] == 0.0 {
            continue;
        }
        let leak = max_abs(&(&support * rho.matrix() * &support - rho.matrix()));
        if leak > DENSITY_TOL {
            return Err(Error::InvalidCodebook(format!(
                "state {i} leaves the support of the average state by {leak:.3e}"
            )));
        }
    }
    let defect = max_abs(&(support - CMatrix::identity(dim, dim)));
    if defect > DENSITY_TOL {
        return Err(Error::InvalidCodebook(format!(
            "average state is rank-deficient (support defect {defect:.3e}); \
             the measurement would not be complete"
        )));
    }

    let elements = codebook
        .states()
        .iter()
        .zip(codebook.priors())
        .map(|(rho, &p)| hermitize(&(&inv_sqrt * rho.matrix() * &inv_sqrt).scale(p)))
        .collect();
    let labels = (0..codebook.len() as i32).collect();
    Povm::new(elements, labels)
}

/// Zero-pads every element to `new_dim` and appends the erasure element
/// `I - sum_i E_i` with label `-1`.
pub fn embed_povm_with_erasure(povm: &Povm, new_dim: usize) -> Result<Povm> {
    let d = povm.dim();
    if new_dim <= d {
        return Err(Error::InvalidParameter(format!(
            "embedding dimension {new_dim} must exceed POVM dimension {d}"
        )));
    }
    let mut elements: Vec<CMatrix> = povm
        .elements()
        .iter()
        .map(|e| {
            let mut padded = CMatrix::zeros(new_dim, new_dim);
            padded.view_mut((0, 0), (d, d)).copy_from(e);
            padded
        })
        .collect();
    let covered = elements
        .iter()
        .fold(CMatrix::zeros(new_dim, new_dim), |acc, e| acc + e);
    let complement = hermitize(&(CMatrix::identity(new_dim, new_dim) - covered));

    let (values, vectors) = eigh(&complement);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -DENSITY_TOL {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
            tol: DENSITY_TOL,
        });
    }
    let erasure = if min < 0.0 {
        let mut clipped = vectors.clone();
        for (j, &l) in values.iter().enumerate() {
            clipped.column_mut(j).scale_mut(l.max(0.0));
        }
        hermitize(&(clipped * vectors.adjoint()))
    } else {
        complement
    };
    elements.push(erasure);
    let mut labels = povm.labels().to_vec();
    labels.push(ERASURE_LABEL);
    Povm::new(elements, labels)
}

/// Hard decision: label of the largest score, lowest index on ties.
pub fn decide(povm: &Povm, rho: &DensityMatrix) -> Result<i32> {
    let scores = povm.scores(rho)?;
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    Ok(povm.labels()[best])
}

/// Born-rule decision drawn from the score vector.
pub fn decide_sampled<R: Rng + ?Sized>(
    povm: &Povm,
    rho: &DensityMatrix,
    rng: &mut R,
) -> Result<i32> {
    let mut probs = povm.scores(rho)?;
    for p in &mut probs {
        if *p < -DENSITY_TOL {
            return Err(Error::Numerical(format!(
                "negative outcome probability {p:.3e}"
            )));
        }
        *p = p.max(0.0);
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::Numerical(format!(
            "outcome probabilities sum to {total}"
        )));
    }
    let u: f64 = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last_nonzero = i;
        }
        acc += p;
        if u < acc {
            return Ok(povm.labels()[i]);
        }
    }
    Ok(povm.labels()[last_nonzero])
}

/// Detector bound to a POVM and a decision mode.
#[derive(Debug, Clone)]
pub struct Receiver {
    povm: Povm,
    mode: DecisionMode,
}

impl Receiver {
    /// Builds the PGM from `codebook` and embeds it with an erasure element
    /// when the channel output is larger than the codebook space.
    pub fn for_channel_output(
        codebook: &DetectorCodebook,
        output_dim: usize,
        mode: DecisionMode,
        eig_cut: f64,
    ) -> Result<Self> {
        let base = build_pgm(codebook, eig_cut)?;
        let povm = match output_dim.cmp(&codebook.dim()) {
            std::cmp::Ordering::Equal => base,
            std::cmp::Ordering::Greater => embed_povm_with_erasure(&base, output_dim)?,
            std::cmp::Ordering::Less => {
                return Err(Error::DimensionMismatch {
                    expected: codebook.dim(),
                    actual: output_dim,
                })
            }
        };
        Ok(Self { povm, mode })
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }

    pub fn mode(&self) -> DecisionMode {
        self.mode
    }

    /// The random stream is only consulted in [`DecisionMode::Sampled`].
    pub fn detect<R: Rng + ?Sized>(&self, rho: &DensityMatrix, rng: &mut R) -> Result<i32> {
        match self.mode {
            DecisionMode::Argmax => decide(&self.povm, rho),
            DecisionMode::Sampled => decide_sampled(&self.povm, rho, rng),
        }
    }
}
