use serde::Serialize;

use crate::{Error, Result};

/// Working precision and truncation settings shared by every command.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrecisionConfig {
    pub bits: u32,
    pub n_max: usize,
    pub tol: f64,
    pub y_min: f64,
    pub seed: u64,
}

impl PrecisionConfig {
    pub fn new(bits: u32, n_max: usize, tol: Option<f64>, y_min: f64, seed: u64) -> Result<Self> {
        let tol = tol.unwrap_or_else(|| derivative_tolerance(bits));
        if bits < 64 {
            return Err(Error::Domain(format!("bits must be at least 64, got {bits}")));
        }
        if n_max < 1 {
            return Err(Error::Domain("n_max must be at least 1".into()));
        }
        if !(tol > 0.0) {
            return Err(Error::Domain(format!("tol must be positive, got {tol}")));
        }
        if !(y_min > 0.0) {
            return Err(Error::Domain(format!("y_min must be positive, got {y_min}")));
        }
        Ok(PrecisionConfig { bits, n_max, tol, y_min, seed })
    }
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig { bits: 128, n_max: 64, tol: derivative_tolerance(128), y_min: 0.5, seed: 0 }
    }
}

/// `2^{-bits/3}`: what finite differences at step `y 2^{-bits/4}` can resolve.
pub fn derivative_tolerance(bits: u32) -> f64 {
    2f64.powf(-(bits as f64) / 3.0)
}
