//! Numeric foundations: exact rationals, log10-domain magnitudes, Gaussian
//! helpers on log10 scales, and a deterministic splittable random source.
//!
//! The two scalar types deliberately do not convert into each other
//! implicitly. [`ExactProb`] keeps discrete answers exact; [`Magnitude`]
//! carries quantities whose exponents can themselves be astronomical.

mod exact;
mod gauss;
mod magnitude;
mod rng;

pub use exact::ExactProb;
pub use gauss::{std_normal_quantile, Gaussian10};
pub use magnitude::{mag_add, normalize, normalize_mag, Magnitude};
pub use rng::RandomSource;

use thiserror::Error;

/// Errors raised by the numeric layer.
#[derive(Debug, Error)]
pub enum NumericError {
    /// A rational was constructed with a zero denominator.
    #[error("denominator is zero")]
    ZeroDenominator,
    /// A value that must be nonnegative came out negative.
    #[error("negative value where a nonnegative one is required: {0}")]
    Negative(String),
    /// A finite floating-point input was required.
    #[error("non-finite input: {0}")]
    NonFinite(String),
    /// Every weight handed to `normalize` was zero, so no posterior exists.
    #[error("degenerate evidence: all hypothesis weights are zero")]
    AllZeroWeights,
    /// Interval coverage must lie strictly between 0 and 1.
    #[error("coverage {0} is outside (0, 1)")]
    CoverageOutOfRange(f64),
    /// A numeric literal could not be parsed.
    #[error("malformed number: {0:?}")]
    BadNumber(String),
}

/// Neumaier-compensated floating-point accumulator.
///
/// Every Monte Carlo estimator in this crate sums through this type so that
/// results do not drift with summation order or sample count.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}
