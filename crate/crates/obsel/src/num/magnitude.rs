//! Log10-domain arithmetic for astronomically scaled nonnegative reals.

use super::{CompensatedSum, ExactProb, NumericError};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};

/// A nonnegative real stored as its base-10 logarithm, with `-inf` marking
/// exact zero.
///
/// Quantities in this domain routinely have exponents like 500 or
/// 29999999958, so the value itself is never materialized: multiplication
/// adds exponents and addition uses the stable log-sum rule
/// `max + log10(1 + 10^(min−max))`. The exponent is an ordinary f64, which
/// holds exponents up to ±10^12 with absolute precision far below any
/// tolerance used here.
///
/// Invariant: the stored exponent is finite or `-inf`, never NaN or `+inf`.
#[derive(Clone, Copy, PartialEq)]
pub struct Magnitude {
    log10: f64,
}

impl Magnitude {
    pub const ZERO: Magnitude = Magnitude {
        log10: f64::NEG_INFINITY,
    };
    pub const ONE: Magnitude = Magnitude { log10: 0.0 };

    /// The value 10^exponent.
    pub fn from_log10(exponent: f64) -> Self {
        assert!(
            !exponent.is_nan() && exponent != f64::INFINITY,
            "magnitude exponent must be finite or -inf"
        );
        Magnitude { log10: exponent }
    }

    /// Wraps an ordinary nonnegative value.
    pub fn from_value(value: f64) -> Self {
        assert!(
            value.is_finite() && value >= 0.0,
            "magnitude value must be finite and nonnegative, got {value}"
        );
        Magnitude {
            log10: value.log10(),
        }
    }

    /// Explicit conversion from the exact-rational domain.
    pub fn from_exact(x: &ExactProb) -> Self {
        Magnitude { log10: x.log10() }
    }

    /// Convenience for integer powers of ten.
    pub fn pow10(k: i64) -> Self {
        Magnitude { log10: k as f64 }
    }

    pub fn is_zero(&self) -> bool {
        self.log10 == f64::NEG_INFINITY
    }

    pub fn log10(&self) -> f64 {
        self.log10
    }

    /// The plain value; underflows to 0 or overflows to `inf` outside f64
    /// range, which is fine for display but not for further arithmetic.
    pub fn value(&self) -> f64 {
        10f64.powf(self.log10)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero magnitude");
        Magnitude {
            log10: -self.log10,
        }
    }

    pub fn powi(&self, k: i32) -> Self {
        if self.is_zero() {
            assert!(k > 0, "zero magnitude to a nonpositive power");
            return *self;
        }
        Magnitude {
            log10: self.log10 * k as f64,
        }
    }

    /// Largest of the two, used when log-sum addition would be overkill.
    pub fn max(self, other: Self) -> Self {
        if self.log10 >= other.log10 {
            self
        } else {
            other
        }
    }
}

/// Stable addition: `10^a + 10^b` without leaving the log domain.
pub fn mag_add(a: Magnitude, b: Magnitude) -> Magnitude {
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    let (hi, lo) = if a.log10 >= b.log10 { (a, b) } else { (b, a) };
    let diff = lo.log10 - hi.log10; // ≤ 0
    // 10^diff underflows to 0 for diff < ~-323, collapsing to `hi` exactly,
    // which is correct to the last ulp of the exponent.
    let bump = 10f64.powf(diff).ln_1p() / std::f64::consts::LN_10;
    Magnitude {
        log10: hi.log10 + bump,
    }
}

/// Normalizes log-domain weights into ordinary probabilities.
///
/// The common exponent is factored out before leaving the log domain, so
/// weights like 10^-494 and 10^-4 normalize without intermediate underflow.
/// Output sums to 1 within 1e-12. Probabilities below f64's subnormal range
/// round to 0 here; [`normalize_mag`] keeps them in the log domain instead.
pub fn normalize(weights: &[Magnitude]) -> Result<Vec<f64>, NumericError> {
    let (shifted, total, _) = shift_and_sum(weights)?;
    Ok(shifted.into_iter().map(|s| s / total).collect())
}

/// Like [`normalize`], but the probabilities stay in the log domain, so a
/// posterior component of 10^-490 survives intact.
pub fn normalize_mag(weights: &[Magnitude]) -> Result<Vec<Magnitude>, NumericError> {
    let (_, total, max) = shift_and_sum(weights)?;
    let scale = max + total.log10();
    Ok(weights
        .iter()
        .map(|w| Magnitude {
            log10: if w.is_zero() { f64::NEG_INFINITY } else { w.log10 - scale },
        })
        .collect())
}

fn shift_and_sum(weights: &[Magnitude]) -> Result<(Vec<f64>, f64, f64), NumericError> {
    let max = weights
        .iter()
        .map(|w| w.log10)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(NumericError::AllZeroWeights);
    }
    let shifted: Vec<f64> = weights.iter().map(|w| 10f64.powf(w.log10 - max)).collect();
    let mut sum = CompensatedSum::new();
    for s in &shifted {
        sum.add(*s);
    }
    Ok((shifted, sum.total(), max))
}

impl Mul for Magnitude {
    type Output = Magnitude;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Magnitude) -> Magnitude {
        // -inf + finite = -inf, so zero propagates on its own.
        Magnitude {
            log10: self.log10 + rhs.log10,
        }
    }
}

impl Div for Magnitude {
    type Output = Magnitude;
    fn div(self, rhs: Magnitude) -> Magnitude {
        assert!(!rhs.is_zero(), "division of Magnitude by zero");
        if self.is_zero() {
            return Magnitude::ZERO;
        }
        Magnitude {
            log10: self.log10 - rhs.log10,
        }
    }
}

impl Eq for Magnitude {}

impl PartialOrd for Magnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Magnitude {
    fn cmp(&self, other: &Self) -> Ordering {
        // Exponents are never NaN, so the partial order is total.
        self.log10.partial_cmp(&other.log10).expect("no NaN")
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "10^{}", self.log10)
        }
    }
}

impl fmt::Debug for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
