//! Arbitrary-precision nonnegative rationals.

use super::NumericError;
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul};
use std::str::FromStr;

type BigRational = num_rational::Ratio<BigInt>;

/// An exact nonnegative rational, always reduced to lowest terms with a
/// positive denominator.
///
/// Discrete scenarios have answers like 1/3 or 2/5 that must survive an
/// arbitrary number of update stages unchanged, so everything in the exact
/// code path goes through this type and nothing ever rounds. Values are not
/// capped at 1: the same type carries observer counts and odds ratios.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactProb(BigRational);

impl ExactProb {
    pub fn zero() -> Self {
        ExactProb(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactProb(BigRational::one())
    }

    pub fn from_integer(n: u128) -> Self {
        ExactProb(BigRational::from_integer(BigInt::from(n)))
    }

    /// Fraction with compile-time-known parts. Panics on a zero denominator,
    /// so it is reserved for literals; parsed input goes through [`Self::new`].
    pub fn frac(numer: u128, denom: u128) -> Self {
        assert!(denom != 0, "literal fraction with zero denominator");
        ExactProb(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// Builds and reduces `numer/denom`, rejecting zero denominators and
    /// negative values.
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self, NumericError> {
        if denom.is_zero() {
            return Err(NumericError::ZeroDenominator);
        }
        let r = BigRational::new(numer, denom);
        if r.is_negative() {
            return Err(NumericError::Negative(r.to_string()));
        }
        Ok(ExactProb(r))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// True when both reduced parts fit in 128-bit integers; scenarios whose
    /// counts exceed this are computed in log10 arithmetic instead.
    pub fn fits_128_bits(&self) -> bool {
        self.0.numer().bits() <= 127 && self.0.denom().bits() <= 127
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// `self − other` if the result is nonnegative.
    pub fn checked_sub(&self, other: &Self) -> Result<Self, NumericError> {
        if self.0 < other.0 {
            return Err(NumericError::Negative(format!(
                "{} - {}",
                self.0, other.0
            )));
        }
        Ok(ExactProb(&self.0 - &other.0))
    }

    /// `1 − self`, defined for values at most 1.
    pub fn complement(&self) -> Result<Self, NumericError> {
        Self::one().checked_sub(self)
    }

    /// Integer power by exponentiating both reduced parts.
    pub fn pow(&self, exp: u32) -> Self {
        ExactProb(BigRational::new_raw(
            Pow::pow(self.0.numer(), exp),
            Pow::pow(self.0.denom(), exp),
        ))
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.0.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = self.0.denom().to_f64().unwrap_or(f64::INFINITY);
        if n.is_finite() && d.is_finite() && d != 0.0 {
            n / d
        } else {
            10f64.powf(self.log10())
        }
    }

    /// log10 of the value, `-inf` for zero. Accurate to ~1 ulp even when the
    /// parts are far beyond f64 range.
    pub fn log10(&self) -> f64 {
        log10_biguint(self.0.numer().magnitude()) - log10_biguint(self.0.denom().magnitude())
    }
}

fn log10_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 53 {
        (x.to_u64().expect("fits in u64") as f64).log10()
    } else {
        let shift = bits - 53;
        let top = (x >> shift).to_u64().expect("53 bits fit in u64") as f64;
        top.log10() + shift as f64 * std::f64::consts::LOG10_2
    }
}

impl Add<&ExactProb> for &ExactProb {
    type Output = ExactProb;
    fn add(self, rhs: &ExactProb) -> ExactProb {
        ExactProb(&self.0 + &rhs.0)
    }
}

impl Mul<&ExactProb> for &ExactProb {
    type Output = ExactProb;
    fn mul(self, rhs: &ExactProb) -> ExactProb {
        ExactProb(&self.0 * &rhs.0)
    }
}

impl Div<&ExactProb> for &ExactProb {
    type Output = ExactProb;
    fn div(self, rhs: &ExactProb) -> ExactProb {
        assert!(!rhs.is_zero(), "division of ExactProb by zero");
        ExactProb(&self.0 / &rhs.0)
    }
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts integers (`3`), fractions (`2/5`), and finite decimals (`0.25`).
impl FromStr for ExactProb {
    type Err = NumericError;

    fn from_str(s: &str) -> Result<Self, NumericError> {
        let s = s.trim();
        let bad = || NumericError::BadNumber(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            let numer = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let denom = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            return ExactProb::new(numer, denom);
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let int_part = if int_part.is_empty() { "0" } else { int_part };
            let whole = BigInt::from_str(int_part).map_err(|_| bad())?;
            let frac = BigInt::from_str(frac_part).map_err(|_| bad())?;
            let scale = Pow::pow(&BigInt::from(10u32), frac_part.len() as u32);
            let numer = match whole.sign() {
                Sign::Minus => whole * &scale - frac,
                _ => whole * &scale + frac,
            };
            return ExactProb::new(numer, scale);
        }
        let numer = BigInt::from_str(s).map_err(|_| bad())?;
        ExactProb::new(numer, BigInt::one())
    }
}

impl PartialOrd<u32> for ExactProb {
    fn partial_cmp(&self, other: &u32) -> Option<Ordering> {
        self.0
            .partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

impl PartialEq<u32> for ExactProb {
    fn eq(&self, other: &u32) -> bool {
        self.0 == BigRational::from_integer(BigInt::from(*other))
    }
}
