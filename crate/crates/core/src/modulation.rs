//! Symbol-to-state codebooks.
//!
//! Two codebooks are provided: the fixed four-state qubit codebook
//! `{|0>, |1>, |+>, |->}` and a square Gray-labeled M-QAM constellation whose
//! points `alpha` are embedded as `(1, alpha) / sqrt(1 + |alpha|^2)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{trace_distance, CVector, DensityMatrix, PureStateVector};

/// Receive-side label for an erased symbol. Never a legal transmit symbol.
pub const ERASURE_LABEL: i32 = -1;
/// Bit value emitted for every bit of an erased symbol.
pub const ERASURE_BIT: i8 = -1;

/// One point of a square QAM constellation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstellationPoint {
    /// Unit-average-power amplitude.
    pub alpha: Complex64,
    /// Raw odd-integer grid coordinates before power normalization.
    pub raw: Complex64,
    pub symbol: usize,
    pub bits: Vec<u8>,
}

/// Which codebook to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Modulation {
    Qpsk,
    Qam {
        #[serde(rename = "M")]
        m: usize,
    },
}

impl Modulation {
    pub fn codebook(&self) -> Result<DetectorCodebook> {
        match *self {
            Modulation::Qpsk => Ok(qpsk_codebook()),
            Modulation::Qam { m } => qam_codebook(m),
        }
    }
}

/// Reference states, priors and bit labels shared by transmitter and detector.
#[derive(Debug, Clone)]
pub struct DetectorCodebook {
    states: Vec<DensityMatrix>,
    priors: Vec<f64>,
    bit_labels: Vec<Vec<u8>>,
    bits_per_symbol: usize,
    power_scale: f64,
}

impl DetectorCodebook {
    pub fn new(
        states: Vec<DensityMatrix>,
        priors: Vec<f64>,
        bit_labels: Vec<Vec<u8>>,
        power_scale: f64,
    ) -> Result<Self> {
        let m = states.len();
        if m == 0 {
            return Err(Error::InvalidCodebook("codebook is empty".into()));
        }
        if priors.len() != m || bit_labels.len() != m {
            return Err(Error::InvalidCodebook(format!(
                "{m} states but {} priors and {} bit labels",
                priors.len(),
                bit_labels.len()
            )));
        }
        let dim = states[0].dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: bad.dim(),
            });
        }
        if priors.iter().any(|&p| p.is_nan() || p < 0.0) {
            return Err(Error::InvalidCodebook("priors must be non-negative".into()));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidCodebook(format!(
                "priors sum to {total}, expected 1"
            )));
        }
        let bits_per_symbol = bit_labels[0].len();
        if bit_labels
            .iter()
            .any(|b| b.len() != bits_per_symbol || b.iter().any(|&x| x > 1))
        {
            return Err(Error::InvalidCodebook(
                "bit labels must be binary and of equal length".into(),
            ));
        }
        if !(power_scale > 0.0 && power_scale.is_finite()) {
            return Err(Error::InvalidCodebook(format!(
                "power scale must be positive, got {power_scale}"
            )));
        }
        Ok(Self {
            states,
            priors,
            bit_labels,
            bits_per_symbol,
            power_scale,
        })
    }

    /// Alphabet size `M`.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn state(&self, symbol: usize) -> &DensityMatrix {
        &self.states[symbol]
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn bit_labels(&self) -> &[Vec<u8>] {
        &self.bit_labels
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    /// Factor applied to the raw grid before embedding (1 for QPSK).
    pub fn power_scale(&self) -> f64 {
        self.power_scale
    }

    /// The legal transmit labels `0..M`.
    pub fn symbol_alphabet(&self) -> std::ops::Range<usize> {
        0..self.states.len()
    }

    /// Same codebook with different priors (renormalized).
    pub fn with_priors(&self, priors: Vec<f64>) -> Result<Self> {
        let total: f64 = priors.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::InvalidCodebook(
                "priors must have positive mass".into(),
            ));
        }
        Self::new(
            self.states.clone(),
            priors.into_iter().map(|p| p / total).collect(),
            self.bit_labels.clone(),
            self.power_scale,
        )
    }
}

/// `{|0>, |1>, |+>, |->}` with uniform priors and natural binary labels.
pub fn qpsk_codebook() -> DetectorCodebook {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps = [[1.0, 0.0], [0.0, 1.0], [h, h], [h, -h]];
    let states = amps
        .iter()
        .map(|a| {
            PureStateVector::normalize(CVector::from_vec(vec![
                Complex64::new(a[0], 0.0),
                Complex64::new(a[1], 0.0),
            ]))
            .expect("nonzero codebook vector")
            .to_density()
        })
        .collect();
    let labels = (0..4u8).map(|s| vec![s >> 1, s & 1]).collect();
    DetectorCodebook::new(states, vec![0.25; 4], labels, 1.0).expect("static codebook is valid")
}

fn gray(k: usize) -> usize {
    k ^ (k >> 1)
}

fn to_bits(value: usize, width: usize) -> impl Iterator<Item = u8> {
    (0..width).rev().map(move |b| ((value >> b) & 1) as u8)
}

/// Square Gray-labeled M-QAM, scaled to unit average power.
///
/// Points are returned in symbol order; the symbol label is the integer
/// formed by the in-phase Gray bits followed by the quadrature Gray bits.
pub fn qam_constellation(m: usize) -> Result<Vec<ConstellationPoint>> {
    if m < 4 || !m.is_power_of_two() || !m.trailing_zeros().is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "QAM order must be a power of 4 (>= 4), got {m}"
        )));
    }
    let side = 1usize << (m.trailing_zeros() / 2);
    let axis_bits = side.trailing_zeros() as usize;
    let level = |k: usize| (2 * k) as f64 - (side - 1) as f64;

    let mut points: Vec<Option<ConstellationPoint>> = vec![None; m];
    for i in 0..side {
        for q in 0..side {
            let symbol = (gray(i) << axis_bits) | gray(q);
            let bits = to_bits(gray(i), axis_bits)
                .chain(to_bits(gray(q), axis_bits))
                .collect();
            points[symbol] = Some(ConstellationPoint {
                alpha: Complex64::new(0.0, 0.0),
                raw: Complex64::new(level(i), level(q)),
                symbol,
                bits,
            });
        }
    }
    let mut points: Vec<ConstellationPoint> = points
        .into_iter()
        .map(|p| p.expect("gray map is a bijection"))
        .collect();
    let mean_power = points.iter().map(|p| p.raw.norm_sqr()).sum::<f64>() / m as f64;
    let scale = mean_power.sqrt().recip();
    for p in &mut points {
        p.alpha = p.raw * scale;
    }
    Ok(points)
}

/// Unit-power normalization factor of the `m`-QAM grid.
pub fn qam_power_scale(m: usize) -> Result<f64> {
    let points = qam_constellation(m)?;
    let p = &points[0];
    Ok(p.alpha.norm() / p.raw.norm())
}

/// `(1, alpha) / sqrt(1 + |alpha|^2)` as a density matrix.
pub fn embed_alpha(alpha: Complex64) -> Result<DensityMatrix> {
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "cannot embed non-finite amplitude {alpha}"
        )));
    }
    let v = PureStateVector::normalize(CVector::from_vec(vec![Complex64::new(1.0, 0.0), alpha]))?;
    Ok(v.to_density())
}

/// QAM codebook with uniform priors.
pub fn qam_codebook(m: usize) -> Result<DetectorCodebook> {
    let points = qam_constellation(m)?;
    let scale = qam_power_scale(m)?;
    let states = points
        .iter()
        .map(|p| embed_alpha(p.alpha))
        .collect::<Result<Vec<_>>>()?;
    let labels = points.into_iter().map(|p| p.bits).collect();
    DetectorCodebook::new(states, vec![1.0 / m as f64; m], labels, scale)
}

/// Smallest pairwise trace distance between codebook states.
pub fn min_pairwise_trace_distance(codebook: &DetectorCodebook) -> Result<f64> {
    let mut min = f64::INFINITY;
    let states = codebook.states();
    for i in 0..states.len() {
        for j in (i + 1)..states.len() {
            min = min.min(trace_distance(&states[i], &states[j])?);
        }
    }
    Ok(min)
}

/// Concatenated bit labels; an erased symbol expands to `-1` bits.
pub fn symbols_to_bits(symbols: &[i32], codebook: &DetectorCodebook) -> Result<Vec<i8>> {
    let k = codebook.bits_per_symbol();
    let mut bits = Vec::with_capacity(symbols.len() * k);
    for &s in symbols {
        if s == ERASURE_LABEL {
            bits.extend(std::iter::repeat_n(ERASURE_BIT, k));
            continue;
        }
        let label = usize::try_from(s)
            .ok()
            .and_then(|i| codebook.bit_labels().get(i))
            .ok_or(Error::InvalidSymbol {
                symbol: s,
                alphabet: codebook.len(),
            })?;
        bits.extend(label.iter().map(|&b| b as i8));
    }
    Ok(bits)
}
