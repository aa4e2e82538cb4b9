//! Density matrices and the dense linear algebra every other module builds on.
//!
//! All matrices are `DMatrix<Complex64>`; states are square, Hermitian,
//! positive semidefinite and unit-trace. [`DensityMatrix`] only exists in a
//! validated form, so holding one is proof that the invariants were checked.

use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Tolerance used for every density-matrix invariant.
pub const DENSITY_TOL: f64 = 1e-9;

/// Default eigenvalue cutoff for pseudo-inverse square roots.
pub const DEFAULT_EIG_CUT: f64 = 1e-10;

/// Default trace below which the leading qubit block is considered empty.
pub const DEFAULT_TRACE_FLOOR: f64 = 1e-9;

const PURE_NORM_TOL: f64 = 1e-9;

/// A validated quantum state: square, Hermitian, PSD and unit-trace.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    /// Validates `m` at [`DENSITY_TOL`]. See [`validate_density`].
    pub fn new(m: CMatrix) -> Result<Self> {
        validate_density(m, DENSITY_TOL)
    }

    /// Wraps a matrix whose invariants hold by construction.
    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        debug_assert!(m.is_square());
        Self { m }
    }

    /// The maximally mixed state `I/dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self::from_trusted(CMatrix::identity(dim, dim).scale(1.0 / dim as f64))
    }

    /// The computational basis projector `|k><k|`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut m = CMatrix::zeros(dim, dim);
        m[(k, k)] = Complex64::new(1.0, 0.0);
        Self::from_trusted(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn purity(&self) -> f64 {
        purity(self)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.m)
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityMatrix")
            .field("dim", &self.dim())
            .field("entries", &self.m.as_slice())
            .finish()
    }
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector {
    amplitudes: CVector,
}

impl PureStateVector {
    /// Accepts `amplitudes` only if its Euclidean norm is 1 within 1e-9.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty state vector".into()));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > PURE_NORM_TOL {
            return Err(Error::InvalidState(format!(
                "state vector norm is {norm}, expected 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalize(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if amplitudes.is_empty() || !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidState(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(amplitudes))
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn to_density(&self) -> DensityMatrix {
        make_pure(self)
    }
}

/// Bloch coordinates under the convention `rho = (I + r.sigma) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// The rank-one projector `|v><v|`.
pub fn make_pure(v: &PureStateVector) -> DensityMatrix {
    let a = v.amplitudes();
    DensityMatrix::from_trusted(a * a.adjoint())
}

/// `(m + m^dagger) / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entrywise modulus of `m - m^dagger`.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Largest entrywise modulus of `m`.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn require_square(m: &CMatrix) -> Result<()> {
    if m.is_square() && m.nrows() > 0 {
        Ok(())
    } else {
        Err(Error::InvalidState(format!(
            "expected a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )))
    }
}

fn require_hermitian(m: &CMatrix, tol: f64) -> Result<()> {
    let deviation = hermiticity_deviation(m);
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian matrix (only the Hermitian part is used).
pub fn eigh(m: &CMatrix) -> (DVector<f64>, CMatrix) {
    let eig = SymmetricEigen::new(hermitize(m));
    (eig.eigenvalues, eig.eigenvectors)
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    eigh(m).0.iter().copied().fold(f64::INFINITY, f64::min)
}

/// `V diag(f(lambda)) V^dagger`.
fn spectral_map(values: &DVector<f64>, vectors: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let mut scaled = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let s = f(lambda);
        scaled.column_mut(j).scale_mut(s);
    }
    hermitize(&(scaled * vectors.adjoint()))
}

/// Checks the three density-matrix invariants at `tol` and wraps the
/// hermitized matrix. The Hermiticity check runs on the raw input.
pub fn validate_density(m: CMatrix, tol: f64) -> Result<DensityMatrix> {
    require_square(&m)?;
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidState("matrix has non-finite entries".into()));
    }
    require_hermitian(&m, tol)?;
    let m = hermitize(&m);
    let trace = m.trace().re;
    if (trace - 1.0).abs() > tol {
        return Err(Error::Trace { trace, tol });
    }
    let min_eigenvalue = min_eigenvalue(&m);
    if min_eigenvalue < -tol {
        return Err(Error::NotPsd {
            min_eigenvalue,
            tol,
        });
    }
    Ok(DensityMatrix { m })
}

/// PSD square root; eigenvalues in `[-1e-9, 0)` are clamped to zero.
pub fn mat_sqrt_psd(m: &CMatrix) -> Result<CMatrix> {
    require_square(m)?;
    require_hermitian(m, DENSITY_TOL)?;
    let (values, vectors) = eigh(m);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -DENSITY_TOL {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
            tol: DENSITY_TOL,
        });
    }
    Ok(spectral_map(&values, &vectors, |l| l.max(0.0).sqrt()))
}

/// Pseudo-inverse square root: eigenvalues `<= eig_cut` map to zero.
pub fn inv_sqrt_psd(m: &CMatrix, eig_cut: f64) -> Result<CMatrix> {
    require_square(m)?;
    require_hermitian(m, DENSITY_TOL)?;
    let (values, vectors) = eigh(m);
    if values.iter().all(|&l| l <= eig_cut) {
        return Err(Error::Degenerate { cutoff: eig_cut });
    }
    Ok(spectral_map(&values, &vectors, |l| {
        if l > eig_cut {
            1.0 / l.sqrt()
        } else {
            0.0
        }
    }))
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Traces out the second factor of a `dim_a * dim_b` bipartite operator.
pub fn partial_trace_second(m: &CMatrix, dim_a: usize, dim_b: usize) -> Result<CMatrix> {
    let n = dim_a * dim_b;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: m.nrows().max(m.ncols()),
        });
    }
    Ok(CMatrix::from_fn(dim_a, dim_a, |i, j| {
        (0..dim_b).map(|k| m[(i * dim_b + k, j * dim_b + k)]).sum()
    }))
}

/// Bloch vector of a qubit state.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: rho.dim(),
        });
    }
    let off = rho.get(0, 1);
    Ok(BlochVector {
        x: 2.0 * off.re,
        y: -2.0 * off.im,
        z: rho.get(0, 0).re - rho.get(1, 1).re,
    })
}

/// Renormalized top-left 2x2 block, plus the trace it was divided by.
///
/// When that trace falls below `trace_floor` the block carries no usable
/// information and `I/2` is returned instead; the returned trace flags it.
pub fn leading_qubit_block(rho: &DensityMatrix, trace_floor: f64) -> (DensityMatrix, f64) {
    assert!(rho.dim() >= 2, "leading qubit block needs dim >= 2");
    if rho.dim() == 2 {
        return (rho.clone(), rho.trace());
    }
    let block = rho.matrix().view((0, 0), (2, 2)).into_owned();
    let trace = block.trace().re;
    if trace < trace_floor {
        return (DensityMatrix::maximally_mixed(2), trace);
    }
    (DensityMatrix::from_trusted(block.unscale(trace)), trace)
}

/// `Tr(rho^2)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().iter().map(|z| z.norm_sqr()).sum()
}

/// `Tr|a - b| / 2`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    let (values, _) = eigh(&(a.matrix() - b.matrix()));
    Ok(0.5 * values.iter().map(|l| l.abs()).sum::<f64>())
}

/// `Tr(a b)` without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(a.nrows(), b.ncols());
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mat2(a: [[Complex64; 2]; 2]) -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[a[0][0], a[0][1], a[1][0], a[1][1]])
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        a.shape() == b.shape() && max_abs(&(a - b)) <= tol
    }

    #[test]
    fn pure_projectors() {
        let zero = PureStateVector::from_slice(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let want = mat2([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!(close(make_pure(&zero).matrix(), &want, 0.0));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureStateVector::from_slice(&[c(h, 0.0), c(h, 0.0)]).unwrap();
        let want = CMatrix::from_element(2, 2, c(0.5, 0.0));
        assert!(close(make_pure(&plus).matrix(), &want, 1e-15));

        assert!(PureStateVector::from_slice(&[c(1.0, 0.0), c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn validation_outcomes() {
        assert!(validate_density(CMatrix::identity(2, 2).scale(0.5), 1e-9).is_ok());

        let bad = mat2([[c(1.2, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-0.2, 0.0)]]);
        assert!(matches!(
            validate_density(bad, 1e-9),
            Err(Error::NotPsd { .. })
        ));

        let near = mat2([[c(0.5, 0.0), c(0.5, 1e-12)], [c(0.5, -1e-12), c(0.5, 0.0)]]);
        let rho = validate_density(near, 1e-9).unwrap();
        assert!(hermiticity_deviation(rho.matrix()) == 0.0);

        let skew = mat2([[c(0.5, 0.0), c(0.1, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]]);
        assert!(matches!(
            validate_density(skew, 1e-9),
            Err(Error::NotHermitian { .. })
        ));

        let heavy = CMatrix::identity(2, 2);
        assert!(matches!(
            validate_density(heavy, 1e-9),
            Err(Error::Trace { .. })
        ));
    }

    #[test]
    fn hermitize_examples() {
        let m = mat2([[c(1.0, 0.0), c(0.0, 1.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
        let want = mat2([[c(1.0, 0.0), c(0.0, 0.5)], [c(0.0, -0.5), c(1.0, 0.0)]]);
        assert!(close(&hermitize(&m), &want, 0.0));

        let h = mat2([[c(0.3, 0.0), c(0.1, 0.2)], [c(0.1, -0.2), c(0.7, 0.0)]]);
        assert!(close(&hermitize(&h), &h, 0.0));
        assert!(close(
            &hermitize(&CMatrix::zeros(3, 3)),
            &CMatrix::zeros(3, 3),
            0.0
        ));
    }

    #[test]
    fn square_roots() {
        let id = CMatrix::identity(3, 3);
        assert!(close(&mat_sqrt_psd(&id).unwrap(), &id, 1e-12));

        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![c(4.0, 0.0), c(9.0, 0.0)]));
        let s = mat_sqrt_psd(&d).unwrap();
        let want = CMatrix::from_diagonal(&CVector::from_vec(vec![c(2.0, 0.0), c(3.0, 0.0)]));
        assert!(close(&s, &want, 1e-12));

        let skew = mat2([[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
        assert!(mat_sqrt_psd(&skew).is_err());

        let neg = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(-0.1, 0.0)]));
        assert!(matches!(mat_sqrt_psd(&neg), Err(Error::NotPsd { .. })));

        // Slight negative drift is clamped.
        let drift = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(-1e-12, 0.0)]));
        let s = mat_sqrt_psd(&drift).unwrap();
        assert_eq!(s[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn inverse_square_roots() {
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![c(4.0, 0.0), c(0.0, 0.0)]));
        let s = inv_sqrt_psd(&d, DEFAULT_EIG_CUT).unwrap();
        let want = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.5, 0.0), c(0.0, 0.0)]));
        assert!(close(&s, &want, 1e-12));

        let id = CMatrix::identity(2, 2);
        assert!(close(
            &inv_sqrt_psd(&id, DEFAULT_EIG_CUT).unwrap(),
            &id,
            1e-12
        ));

        // The average of the QPSK codebook is I/2.
        let half = CMatrix::identity(2, 2).scale(0.5);
        let s = inv_sqrt_psd(&half, DEFAULT_EIG_CUT).unwrap();
        assert!(close(&s, &id.scale(2f64.sqrt()), 1e-12));

        assert!(matches!(
            inv_sqrt_psd(&CMatrix::zeros(2, 2), DEFAULT_EIG_CUT),
            Err(Error::Degenerate { .. })
        ));
    }

    #[test]
    fn kronecker_examples() {
        let i2 = CMatrix::identity(2, 2);
        assert!(close(&kron(&i2, &i2), &CMatrix::identity(4, 4), 0.0));

        let p = 0.3;
        let a = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]));
        let b = CMatrix::from_diagonal(&CVector::from_vec(vec![c(p, 0.0), c(1.0 - p, 0.0)]));
        let want = CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(p, 0.0),
            c(1.0 - p, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
        ]));
        assert!(close(&kron(&a, &b), &want, 0.0));
    }

    #[test]
    fn partial_trace_examples() {
        let rho = mat2([[c(0.7, 0.0), c(0.1, 0.2)], [c(0.1, -0.2), c(0.3, 0.0)]]);
        let sigma = CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(0.2, 0.0),
            c(0.5, 0.0),
            c(0.3, 0.0),
        ]));
        let out = partial_trace_second(&kron(&rho, &sigma), 2, 3).unwrap();
        assert!(close(&out, &rho, 1e-15));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureStateVector::from_slice(&[c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)])
            .unwrap()
            .to_density();
        let out = partial_trace_second(bell.matrix(), 2, 2).unwrap();
        assert!(close(&out, &CMatrix::identity(2, 2).scale(0.5), 1e-15));

        assert!(matches!(
            partial_trace_second(&CMatrix::zeros(4, 4), 2, 3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bloch_examples() {
        let zero = DensityMatrix::basis(2, 0);
        assert_eq!(
            bloch_vector(&zero).unwrap(),
            BlochVector::new(0.0, 0.0, 1.0)
        );

        let plus = DensityMatrix::new(CMatrix::from_element(2, 2, c(0.5, 0.0))).unwrap();
        assert_eq!(
            bloch_vector(&plus).unwrap(),
            BlochVector::new(1.0, 0.0, 0.0)
        );

        let mixed = DensityMatrix::maximally_mixed(2);
        assert_eq!(
            bloch_vector(&mixed).unwrap(),
            BlochVector::new(0.0, 0.0, 0.0)
        );

        // |+i> = (|0> + i|1>)/sqrt 2 sits on +y.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus_i = PureStateVector::from_slice(&[c(h, 0.0), c(0.0, h)])
            .unwrap()
            .to_density();
        let r = bloch_vector(&plus_i).unwrap();
        assert!((r.y - 1.0).abs() < 1e-15 && r.x.abs() < 1e-15);

        assert!(bloch_vector(&DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn leading_block_examples() {
        let rho = DensityMatrix::new(mat2([
            [c(0.6, 0.0), c(0.2, 0.1)],
            [c(0.2, -0.1), c(0.4, 0.0)],
        ]))
        .unwrap();
        let (block, renorm) = leading_qubit_block(&rho, DEFAULT_TRACE_FLOOR);
        assert_eq!(block, rho);
        assert!((renorm - 1.0).abs() < 1e-15);

        // (1 - p) rho (+) p |e><e|
        let p = 0.3;
        let mut padded = CMatrix::zeros(3, 3);
        padded
            .view_mut((0, 0), (2, 2))
            .copy_from(&rho.matrix().scale(1.0 - p));
        padded[(2, 2)] = c(p, 0.0);
        let erased = DensityMatrix::new(padded).unwrap();
        let (block, renorm) = leading_qubit_block(&erased, DEFAULT_TRACE_FLOOR);
        assert!(close(block.matrix(), rho.matrix(), 1e-15));
        assert!((renorm - (1.0 - p)).abs() < 1e-15);

        let gone = DensityMatrix::basis(3, 2);
        let (block, renorm) = leading_qubit_block(&gone, DEFAULT_TRACE_FLOOR);
        assert_eq!(block, DensityMatrix::maximally_mixed(2));
        assert_eq!(renorm, 0.0);
    }

    #[test]
    fn purity_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let pure = PureStateVector::from_slice(&[c(h, 0.0), c(0.0, -h)])
            .unwrap()
            .to_density();
        assert!((purity(&pure) - 1.0).abs() < 1e-15);
        assert!((purity(&DensityMatrix::maximally_mixed(2)) - 0.5).abs() < 1e-15);

        // Tr[((1-p) rho + p I/2)^2] = (1-p)^2 + (1-p) p + p^2/2 = 0.625 at p = 0.5.
        let p = 0.5;
        let mixed = pure.matrix().scale(1.0 - p) + CMatrix::identity(2, 2).scale(p / 2.0);
        let mixed = DensityMatrix::new(mixed).unwrap();
        assert!((purity(&mixed) - 0.625).abs() < 1e-15);
    }
}
