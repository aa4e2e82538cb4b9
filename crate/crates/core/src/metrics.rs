//! Hard-decision symbol and bit error rates.
//!
//! Both are plain normalized Hamming mismatches. An erased symbol (`-1`)
//! never matches, and its `-1` bits mismatch every transmitted bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mismatch count over a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorCount {
    pub errors: usize,
    pub total: usize,
}

impl ErrorCount {
    pub fn rate(&self) -> f64 {
        self.errors as f64 / self.total as f64
    }
}

fn mismatches<T: PartialEq>(tx: &[T], rx: &[T]) -> Result<ErrorCount> {
    if tx.len() != rx.len() {
        return Err(Error::LengthMismatch {
            left: tx.len(),
            right: rx.len(),
        });
    }
    if tx.is_empty() {
        return Err(Error::EmptySequence);
    }
    Ok(ErrorCount {
        errors: tx.iter().zip(rx).filter(|(a, b)| a != b).count(),
        total: tx.len(),
    })
}

pub fn symbol_errors(tx: &[i32], rx: &[i32]) -> Result<ErrorCount> {
    mismatches(tx, rx)
}

pub fn bit_errors(tx_bits: &[i8], rx_bits: &[i8]) -> Result<ErrorCount> {
    mismatches(tx_bits, rx_bits)
}

pub fn compute_ser(tx: &[i32], rx: &[i32]) -> Result<f64> {
    symbol_errors(tx, rx).map(|c| c.rate())
}

pub fn compute_ber(tx_bits: &[i8], rx_bits: &[i8]) -> Result<f64> {
    bit_errors(tx_bits, rx_bits).map(|c| c.rate())
}
