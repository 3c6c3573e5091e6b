//! Posterior distributions with replayable odds ledgers.

use super::scenario::{NumberDomain, Quantity};
use super::InferError;
use crate::num::{normalize_mag, ExactProb, Magnitude};
use std::fmt;

/// Scalar type a posterior computation runs in: exact rationals or
/// log10-domain magnitudes. The update rules are generic over this, so both
/// domains share one implementation.
pub trait Weight: Clone + PartialEq + PartialOrd + fmt::Display {
    const DOMAIN: NumberDomain;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    /// Division; callers guarantee a nonzero divisor.
    fn div(&self, other: &Self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn to_f64(&self) -> f64;
    /// Lowers a scenario input into this domain. This is the single explicit
    /// conversion point between the two scalar domains.
    fn from_quantity(q: &Quantity) -> Self;
    /// Normalizes weights into probabilities summing to 1.
    fn normalize_vec(weights: &[Self]) -> Result<Vec<Self>, InferError>;
}

impl Weight for ExactProb {
    const DOMAIN: NumberDomain = NumberDomain::Exact;

    fn zero() -> Self {
        ExactProb::zero()
    }
    fn one() -> Self {
        ExactProb::one()
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn to_f64(&self) -> f64 {
        self.to_f64()
    }
    fn from_quantity(q: &Quantity) -> Self {
        match q {
            Quantity::Exact(x) => x.clone(),
            Quantity::Log(_) => unreachable!(
                "log-domain quantity in an exact computation; domain dispatch is broken"
            ),
        }
    }
    fn normalize_vec(weights: &[Self]) -> Result<Vec<Self>, InferError> {
        let sum = weights
            .iter()
            .fold(ExactProb::zero(), |acc, w| &acc + w);
        if sum.is_zero() {
            return Err(InferError::DegenerateEvidence);
        }
        Ok(weights.iter().map(|w| w / &sum).collect())
    }
}

impl Weight for Magnitude {
    const DOMAIN: NumberDomain = NumberDomain::Log;

    fn zero() -> Self {
        Magnitude::ZERO
    }
    fn one() -> Self {
        Magnitude::ONE
    }
    fn is_zero(&self) -> bool {
        Magnitude::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        *self * *other
    }
    fn div(&self, other: &Self) -> Self {
        *self / *other
    }
    fn add(&self, other: &Self) -> Self {
        crate::num::mag_add(*self, *other)
    }
    fn to_f64(&self) -> f64 {
        self.value()
    }
    fn from_quantity(q: &Quantity) -> Self {
        q.to_magnitude()
    }
    fn normalize_vec(weights: &[Self]) -> Result<Vec<Self>, InferError> {
        normalize_mag(weights).map_err(|_| InferError::DegenerateEvidence)
    }
}

/// One update stage: a label and the per-hypothesis likelihood multipliers it
/// applied. Multipliers are unnormalized — only ratios matter.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage<W> {
    pub label: String,
    pub multipliers: Vec<W>,
}

/// A normalized distribution over hypotheses together with the odds ledger
/// that produced it.
///
/// The ledger is the audit trail: multiplying the prior by every stage's
/// multipliers and renormalizing reproduces `probs` — bit for bit in the
/// exact domain. Stages can be appended to express sequential evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct Posterior<W: Weight> {
    hypotheses: Vec<String>,
    prior: Vec<W>,
    stages: Vec<Stage<W>>,
    probs: Vec<W>,
    notes: Vec<String>,
}

impl<W: Weight> Posterior<W> {
    /// A posterior that is just the normalized prior, with an empty ledger.
    pub fn from_prior(hypotheses: Vec<String>, prior: Vec<W>) -> Result<Self, InferError> {
        Self::new(hypotheses, prior, Vec::new())
    }

    /// Builds a posterior from a prior and a sequence of stages.
    pub fn new(
        hypotheses: Vec<String>,
        prior: Vec<W>,
        stages: Vec<Stage<W>>,
    ) -> Result<Self, InferError> {
        assert_eq!(hypotheses.len(), prior.len(), "prior length mismatch");
        for s in &stages {
            assert_eq!(
                hypotheses.len(),
                s.multipliers.len(),
                "stage {:?} multiplier length mismatch",
                s.label
            );
        }
        let probs = W::normalize_vec(&Self::fold(&prior, &stages))?;
        Ok(Posterior {
            hypotheses,
            prior,
            stages,
            probs,
            notes: Vec::new(),
        })
    }

    fn fold(prior: &[W], stages: &[Stage<W>]) -> Vec<W> {
        let mut weights = prior.to_vec();
        for stage in stages {
            for (w, m) in weights.iter_mut().zip(&stage.multipliers) {
                *w = w.mul(m);
            }
        }
        weights
    }

    /// Appends one more evidence stage, returning the extended posterior.
    pub fn apply_stage(
        &self,
        label: impl Into<String>,
        multipliers: Vec<W>,
    ) -> Result<Self, InferError> {
        let mut stages = self.stages.clone();
        stages.push(Stage {
            label: label.into(),
            multipliers,
        });
        let mut p = Self::new(self.hypotheses.clone(), self.prior.clone(), stages)?;
        p.notes = self.notes.clone();
        Ok(p)
    }

    /// Recomputes probabilities from the ledger; equal to `probs()` by
    /// construction (exactly so in the rational domain).
    pub fn replay(&self) -> Result<Vec<W>, InferError> {
        W::normalize_vec(&Self::fold(&self.prior, &self.stages))
    }

    pub fn hypotheses(&self) -> &[String] {
        &self.hypotheses
    }

    pub fn prior(&self) -> &[W] {
        &self.prior
    }

    pub fn stages(&self) -> &[Stage<W>] {
        &self.stages
    }

    pub fn probs(&self) -> &[W] {
        &self.probs
    }

    pub fn index_of(&self, hypothesis: &str) -> Result<usize, InferError> {
        self.hypotheses
            .iter()
            .position(|h| h == hypothesis)
            .ok_or_else(|| InferError::UnknownHypothesis(hypothesis.to_string()))
    }

    pub fn prob(&self, hypothesis: &str) -> Result<&W, InferError> {
        Ok(&self.probs[self.index_of(hypothesis)?])
    }

    /// Posterior odds of `a` against `b`.
    pub fn odds(&self, a: &str, b: &str) -> Result<W, InferError> {
        let pa = self.prob(a)?;
        let pb = self.prob(b)?;
        if pb.is_zero() {
            return Err(InferError::Inconsistent(format!(
                "odds against hypothesis {b:?} with zero posterior probability"
            )));
        }
        Ok(pa.div(pb))
    }

    /// Odds shift contributed by a single named stage: multiplier(a) over
    /// multiplier(b).
    pub fn stage_odds(&self, label: &str, a: &str, b: &str) -> Result<W, InferError> {
        let stage = self
            .stages
            .iter()
            .find(|s| s.label == label)
            .ok_or_else(|| InferError::Inconsistent(format!("no ledger stage {label:?}")))?;
        let ia = self.index_of(a)?;
        let ib = self.index_of(b)?;
        if stage.multipliers[ib].is_zero() {
            return Err(InferError::Inconsistent(format!(
                "stage {label:?} zeroes hypothesis {b:?}"
            )));
        }
        Ok(stage.multipliers[ia].div(&stage.multipliers[ib]))
    }

    /// Attaches a free-form annotation (e.g. flagging a pedagogical,
    /// known-wrong construction).
    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }
}

/// A posterior from either scalar domain, as produced by the rule
/// dispatchers.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyPosterior {
    Exact(Posterior<ExactProb>),
    Log(Posterior<Magnitude>),
}

impl AnyPosterior {
    pub fn domain(&self) -> NumberDomain {
        match self {
            AnyPosterior::Exact(_) => NumberDomain::Exact,
            AnyPosterior::Log(_) => NumberDomain::Log,
        }
    }

    pub fn hypotheses(&self) -> &[String] {
        match self {
            AnyPosterior::Exact(p) => p.hypotheses(),
            AnyPosterior::Log(p) => p.hypotheses(),
        }
    }

    pub fn prob_f64(&self, hypothesis: &str) -> Result<f64, InferError> {
        match self {
            AnyPosterior::Exact(p) => Ok(p.prob(hypothesis)?.to_f64()),
            AnyPosterior::Log(p) => Ok(p.prob(hypothesis)?.value()),
        }
    }

    /// The exact posterior, if this scenario ran in the exact domain.
    pub fn as_exact(&self) -> Option<&Posterior<ExactProb>> {
        match self {
            AnyPosterior::Exact(p) => Some(p),
            AnyPosterior::Log(_) => None,
        }
    }

    pub fn as_log(&self) -> Option<&Posterior<Magnitude>> {
        match self {
            AnyPosterior::Log(p) => Some(p),
            AnyPosterior::Exact(_) => None,
        }
    }

    pub fn notes(&self) -> &[String] {
        match self {
            AnyPosterior::Exact(p) => p.notes(),
            AnyPosterior::Log(p) => p.notes(),
        }
    }
}
