use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A population in which a `lambda` share has exogenous accuracy `q_low` and
/// the rest has accuracy `q_high`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationProfile {
    lambda: f64,
    q_low: f64,
    q_high: f64,
}

impl PopulationProfile {
    pub fn new(lambda: f64, q_low: f64, q_high: f64) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidProfile(msg));
        if !(lambda.is_finite() && (0.0..=1.0).contains(&lambda)) {
            return bad(format!("lambda = {lambda} outside [0, 1]"));
        }
        if !q_low.is_finite() || q_low < 0.5 {
            return bad(format!("q_low = {q_low} below 0.5"));
        }
        if !q_high.is_finite() || q_high > 1.0 {
            return bad(format!("q_high = {q_high} above 1"));
        }
        if q_low > q_high {
            return bad(format!("q_low = {q_low} exceeds q_high = {q_high}"));
        }
        Ok(Self {
            lambda,
            q_low,
            q_high,
        })
    }

    pub fn homogeneous(q: f64) -> Result<Self> {
        Self::new(0.0, q, q)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn q_low(&self) -> f64 {
        self.q_low
    }

    pub fn q_high(&self) -> f64 {
        self.q_high
    }

    pub fn is_homogeneous(&self) -> bool {
        self.q_low == self.q_high || self.lambda == 0.0 || self.lambda == 1.0
    }

    /// The two accuracy classes as `(weight, accuracy)`.
    pub fn classes(&self) -> [(f64, f64); 2] {
        [(self.lambda, self.q_low), (1.0 - self.lambda, self.q_high)]
    }
}
