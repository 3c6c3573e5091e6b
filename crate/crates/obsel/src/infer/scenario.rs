//! Declarative scenario descriptions.

use super::InferError;
use crate::num::{ExactProb, Magnitude, NumericError};
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

/// A scalar scenario input: either an exact rational or a log10-domain
/// magnitude. The two never mix silently — a scenario computes in the exact
/// domain only if every input is exact (and counts are small enough), and is
/// lowered to the log domain in one explicit step otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Exact(ExactProb),
    Log(Magnitude),
}

impl Quantity {
    pub fn integer(n: u128) -> Self {
        Quantity::Exact(ExactProb::from_integer(n))
    }

    pub fn frac(numer: u128, denom: u128) -> Self {
        Quantity::Exact(ExactProb::frac(numer, denom))
    }

    pub fn pow10(k: i64) -> Self {
        Quantity::Log(Magnitude::pow10(k))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Quantity::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&ExactProb> {
        match self {
            Quantity::Exact(x) => Some(x),
            Quantity::Log(_) => None,
        }
    }

    /// Explicit lowering into the log domain.
    pub fn to_magnitude(&self) -> Magnitude {
        match self {
            Quantity::Exact(x) => Magnitude::from_exact(x),
            Quantity::Log(m) => *m,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Quantity::Exact(x) => x.to_f64(),
            Quantity::Log(m) => m.value(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Quantity::Exact(x) => x.is_zero(),
            Quantity::Log(m) => m.is_zero(),
        }
    }
}

impl From<ExactProb> for Quantity {
    fn from(x: ExactProb) -> Self {
        Quantity::Exact(x)
    }
}

impl From<Magnitude> for Quantity {
    fn from(m: Magnitude) -> Self {
        Quantity::Log(m)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Exact(x) => write!(f, "{x}"),
            Quantity::Log(m) => write!(f, "{m}"),
        }
    }
}

/// Accepts everything [`ExactProb`] accepts — integers (`3`), fractions
/// (`2/5`), finite decimals (`0.25`) — plus power notation `10^k` with
/// integer `k`, which maps to a log-domain [`Magnitude`].
impl FromStr for Quantity {
    type Err = NumericError;

    fn from_str(s: &str) -> Result<Self, NumericError> {
        let s = s.trim();
        if let Some(exp) = s.strip_prefix("10^") {
            let k: i64 = exp
                .trim()
                .parse()
                .map_err(|_| NumericError::BadNumber(s.to_string()))?;
            return Ok(Quantity::Log(Magnitude::pow10(k)));
        }
        Ok(Quantity::Exact(s.parse()?))
    }
}

/// Which scalar domain a scenario's arithmetic runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumberDomain {
    /// Arbitrary-precision rationals; answers are exact fractions.
    Exact,
    /// log10-domain floats; answers are magnitudes good to ~1e-12 in the
    /// exponent.
    Log,
}

/// A candidate state of the world with its prior probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypothesis {
    pub name: String,
    pub prior: Quantity,
}

/// A named set of observers, sized per hypothesis.
///
/// Counts are parallel to the scenario's hypothesis list. Every class handed
/// to an update rule is assumed to contain the evidence set, which the rule
/// enforces as |D|_h ≤ |C|_h.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceClass {
    pub name: String,
    pub counts: Vec<Quantity>,
}

/// The evidence: per-hypothesis size of the set of observers sharing your
/// total evidence (used by the SSA rules), and/or the per-observer
/// probability ε of matching your exact memories (used by FNC).
///
/// Counts may be fractional: an expected count like ½ expresses "one observer
/// who matches with probability ½".
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvidenceSet {
    pub counts: Option<Vec<Quantity>>,
    pub epsilon: Option<Vec<Quantity>>,
}

/// A complete declarative scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub hypotheses: Vec<Hypothesis>,
    pub classes: Vec<ReferenceClass>,
    pub evidence: EvidenceSet,
}

impl Scenario {
    pub fn builder(name: impl Into<String>) -> ScenarioBuilder {
        ScenarioBuilder {
            scenario: Scenario {
                name: name.into(),
                hypotheses: Vec::new(),
                classes: Vec::new(),
                evidence: EvidenceSet::default(),
            },
        }
    }

    pub fn hypothesis_names(&self) -> Vec<&str> {
        self.hypotheses.iter().map(|h| h.name.as_str()).collect()
    }

    pub fn class_index(&self, name: &str) -> Result<usize, InferError> {
        self.classes
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| InferError::UnknownClass(name.to_string()))
    }

    /// The scalar domain this scenario computes in: exact only when every
    /// input is rational and all counts fit in 128-bit integers.
    pub fn domain(&self) -> NumberDomain {
        let counts_ok = |q: &Quantity| match q {
            Quantity::Exact(x) => x.fits_128_bits(),
            Quantity::Log(_) => false,
        };
        let exact = self.hypotheses.iter().all(|h| h.prior.is_exact())
            && self
                .classes
                .iter()
                .all(|c| c.counts.iter().all(counts_ok))
            && self
                .evidence
                .counts
                .iter()
                .all(|v| v.iter().all(counts_ok))
            && self
                .evidence
                .epsilon
                .iter()
                .all(|v| v.iter().all(counts_ok));
        if exact {
            NumberDomain::Exact
        } else {
            NumberDomain::Log
        }
    }

    /// Structural validation: nonempty, unique names, complete mappings, and
    /// priors that sum to 1 (exactly in the exact domain, within 1e-12
    /// otherwise).
    pub fn validate(&self) -> Result<(), InferError> {
        if self.hypotheses.is_empty() {
            return Err(InferError::Inconsistent(
                "scenario has no hypotheses".into(),
            ));
        }
        let mut seen = HashSet::new();
        for h in &self.hypotheses {
            if !seen.insert(h.name.as_str()) {
                return Err(InferError::DuplicateName(h.name.clone()));
            }
        }
        let mut seen = HashSet::new();
        for c in &self.classes {
            if !seen.insert(c.name.as_str()) {
                return Err(InferError::DuplicateName(c.name.clone()));
            }
            if c.counts.len() != self.hypotheses.len() {
                return Err(InferError::Inconsistent(format!(
                    "class {:?} has {} counts for {} hypotheses",
                    c.name,
                    c.counts.len(),
                    self.hypotheses.len()
                )));
            }
        }
        for (label, v) in [
            ("evidence counts", &self.evidence.counts),
            ("evidence epsilon", &self.evidence.epsilon),
        ] {
            if let Some(v) = v {
                if v.len() != self.hypotheses.len() {
                    return Err(InferError::Inconsistent(format!(
                        "{label} has {} values for {} hypotheses",
                        v.len(),
                        self.hypotheses.len()
                    )));
                }
            }
        }
        self.check_prior_sum()
    }

    fn check_prior_sum(&self) -> Result<(), InferError> {
        if self.hypotheses.iter().all(|h| h.prior.is_exact()) {
            let sum = self
                .hypotheses
                .iter()
                .fold(ExactProb::zero(), |acc, h| {
                    &acc + h.prior.as_exact().expect("checked exact")
                });
            if !sum.is_one() {
                return Err(InferError::BadPriors(sum.to_string()));
            }
        } else {
            let sum: f64 = self.hypotheses.iter().map(|h| h.prior.to_f64()).sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(InferError::BadPriors(format!("{sum}")));
            }
        }
        Ok(())
    }
}

/// Incremental construction, used by the catalog builders and the file
/// parser. `finish` runs full validation.
pub struct ScenarioBuilder {
    scenario: Scenario,
}

impl ScenarioBuilder {
    pub fn hypothesis(mut self, name: impl Into<String>, prior: impl Into<Quantity>) -> Self {
        self.scenario.hypotheses.push(Hypothesis {
            name: name.into(),
            prior: prior.into(),
        });
        self
    }

    /// Adds a reference class; counts are in hypothesis declaration order.
    pub fn class<Q: Into<Quantity>>(
        mut self,
        name: impl Into<String>,
        counts: impl IntoIterator<Item = Q>,
    ) -> Self {
        self.scenario.classes.push(ReferenceClass {
            name: name.into(),
            counts: counts.into_iter().map(Into::into).collect(),
        });
        self
    }

    pub fn evidence_counts<Q: Into<Quantity>>(
        mut self,
        counts: impl IntoIterator<Item = Q>,
    ) -> Self {
        self.scenario.evidence.counts = Some(counts.into_iter().map(Into::into).collect());
        self
    }

    pub fn evidence_epsilon<Q: Into<Quantity>>(
        mut self,
        epsilon: impl IntoIterator<Item = Q>,
    ) -> Self {
        self.scenario.evidence.epsilon = Some(epsilon.into_iter().map(Into::into).collect());
        self
    }

    pub fn finish(self) -> Result<Scenario, InferError> {
        self.scenario.validate()?;
        Ok(self.scenario)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> ScenarioBuilder {
        Scenario::builder("coin")
            .hypothesis("Heads", Quantity::frac(1, 2))
            .hypothesis("Tails", Quantity::frac(1, 2))
            .class("observers", [Quantity::integer(1), Quantity::integer(2)])
    }

    #[test]
    fn valid_scenario_passes() {
        let s = minimal()
            .evidence_counts([Quantity::integer(1), Quantity::integer(2)])
            .finish()
            .unwrap();
        assert_eq!(s.domain(), NumberDomain::Exact);
        assert_eq!(s.class_index("observers").unwrap(), 0);
        assert!(s.class_index("nope").is_err());
    }

    #[test]
    fn priors_must_sum_to_one() {
        let err = Scenario::builder("bad")
            .hypothesis("A", Quantity::frac(1, 2))
            .hypothesis("B", Quantity::frac(1, 3))
            .finish()
            .unwrap_err();
        assert!(matches!(err, InferError::BadPriors(_)));
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let err = Scenario::builder("dup")
            .hypothesis("A", Quantity::frac(1, 2))
            .hypothesis("A", Quantity::frac(1, 2))
            .finish()
            .unwrap_err();
        assert!(matches!(err, InferError::DuplicateName(_)));
    }

    #[test]
    fn count_vectors_must_cover_every_hypothesis() {
        let err = Scenario::builder("short")
            .hypothesis("A", Quantity::frac(1, 2))
            .hypothesis("B", Quantity::frac(1, 2))
            .class("c", [Quantity::integer(1)])
            .finish()
            .unwrap_err();
        assert!(matches!(err, InferError::Inconsistent(_)));
    }

    #[test]
    fn any_log_input_forces_the_log_domain() {
        let s = minimal()
            .evidence_counts([Quantity::pow10(11), Quantity::pow10(14)])
            .finish()
            .unwrap();
        assert_eq!(s.domain(), NumberDomain::Log);
    }

    #[test]
    fn oversized_exact_counts_force_the_log_domain() {
        let huge = ExactProb::from_integer(u128::MAX >> 1);
        let huge = &huge * &huge; // ~2^254, no longer 128-bit
        let s = Scenario::builder("big")
            .hypothesis("A", Quantity::frac(1, 2))
            .hypothesis("B", Quantity::frac(1, 2))
            .class("c", [Quantity::Exact(huge), Quantity::integer(1)])
            .finish()
            .unwrap();
        assert_eq!(s.domain(), NumberDomain::Log);
    }

    #[test]
    fn quantity_parses_all_literal_forms() {
        assert_eq!("3".parse::<Quantity>().unwrap(), Quantity::integer(3));
        assert_eq!("2/5".parse::<Quantity>().unwrap(), Quantity::frac(2, 5));
        assert_eq!("0.25".parse::<Quantity>().unwrap(), Quantity::frac(1, 4));
        assert_eq!("10^14".parse::<Quantity>().unwrap(), Quantity::pow10(14));
        assert_eq!("10^-4".parse::<Quantity>().unwrap(), Quantity::pow10(-4));
        assert!(" 1/3 ".parse::<Quantity>().unwrap().is_exact());
        for bad in ["10^", "10^1.5", "abc", "1/0", "-2", ""] {
            assert!(bad.parse::<Quantity>().is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn float_priors_sum_within_tolerance() {
        let s = Scenario::builder("float")
            .hypothesis("A", Quantity::Log(Magnitude::from_value(0.5)))
            .hypothesis("B", Quantity::Log(Magnitude::from_value(0.5)))
            .finish()
            .unwrap();
        assert_eq!(s.domain(), NumberDomain::Log);
    }
}
