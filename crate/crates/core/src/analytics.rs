//! Closed-form behaviour of the bundle filter.
//!
//! Member and non-member scores are modelled as `N(1, sigma)` and
//! `N(0, sigma)` with `sigma = sqrt(k/d)`. With the decision threshold at 1/2
//! the two error tails are equal, so precision and recall coincide.

use crate::error::{Error, Result};

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Lower bound `1 - exp(-d delta^2)` on the probability that two random
/// hypervectors have `|dot| <= delta`.
pub fn orthogonality_bound(dim: usize, delta: f64) -> Result<f64> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::NonPositiveDelta(delta));
    }
    Ok(-(-(dim as f64) * delta * delta).exp_m1())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterAnalytics {
    pub sigma: f64,
    /// Total mass on the wrong side of the threshold, `s(sigma)`.
    pub overlap: f64,
    pub precision_recall: f64,
    pub fp_rate: f64,
    pub fn_rate: f64,
    pub tp_rate: f64,
    pub tn_rate: f64,
}

impl FilterAnalytics {
    /// Prediction for a bundle of `k` vectors in dimension `dim`.
    pub fn predict(k: usize, dim: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Self::from_sigma((k as f64 / dim as f64).sqrt())
    }

    pub fn from_sigma(sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "sigma must be positive and finite, got {sigma}"
            )));
        }
        let half_gap = 1.0 / (2.0 * sigma);
        // 1 - Phi(x) + Phi(-x) == 2 Phi(-x), without the cancellation
        let overlap = 2.0 * normal_cdf(-half_gap);
        Ok(Self {
            sigma,
            overlap,
            precision_recall: 1.0 - overlap / (2.0 - overlap),
            fp_rate: overlap / 2.0,
            fn_rate: overlap / 2.0,
            tp_rate: 1.0 - overlap,
            tn_rate: 1.0 - overlap,
        })
    }
}
