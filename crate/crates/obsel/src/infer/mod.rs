//! The inference core: declarative scenarios, the three observer-selection
//! update rules, and the recruitment, companion-observer, and population-size
//! (doomsday) constructions built on top of them.
//!
//! Everything here is a pure function over immutable values. A scenario
//! declares hypotheses with priors, named reference classes with
//! per-hypothesis observer counts, and an evidence set; a rule turns it into
//! a [`Posterior`] whose odds ledger records every update stage.

mod companion;
mod doom;
mod posterior;
mod recruit;
mod rules;
mod scenario;

pub use companion::{
    companion_odds, companion_odds_with_count_weighting, CompanionCounts, ObserverType,
};
pub use doom::{
    doomsday_posterior, generalized_doomsday, nodoom_posterior, sia_reweight, PopulationPrior,
};
pub use posterior::{AnyPosterior, Posterior, Stage, Weight};
pub use recruit::{
    indexical_scenario, recruitment_indexical_update, recruitment_invalid_update,
};
pub use rules::{
    fnc_posterior, posterior_under, ssa_posterior, ssa_sia_posterior, STAGE_FNC, STAGE_SIA,
    STAGE_SSA,
};
pub use scenario::{
    EvidenceSet, Hypothesis, NumberDomain, Quantity, ReferenceClass, Scenario, ScenarioBuilder,
};

use crate::num::NumericError;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// The three update rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpdateRule {
    /// Self-sampling alone: likelihood |D|/|C| for a chosen reference class.
    SsaOnly,
    /// Self-sampling plus self-indication: the class size cancels, leaving
    /// likelihood ∝ |D|.
    SsaSia,
    /// Full non-indexical conditioning on "someone with my exact memories
    /// exists", with per-observer match probability ε.
    Fnc,
}

impl UpdateRule {
    pub const ALL: [UpdateRule; 3] = [UpdateRule::SsaOnly, UpdateRule::SsaSia, UpdateRule::Fnc];

    /// The CLI spelling: `ssa`, `ssa+sia`, or `fnc`.
    pub fn flag_name(&self) -> &'static str {
        match self {
            UpdateRule::SsaOnly => "ssa",
            UpdateRule::SsaSia => "ssa+sia",
            UpdateRule::Fnc => "fnc",
        }
    }
}

impl fmt::Display for UpdateRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.flag_name())
    }
}

impl FromStr for UpdateRule {
    type Err = InferError;

    fn from_str(s: &str) -> Result<Self, InferError> {
        match s {
            "ssa" => Ok(UpdateRule::SsaOnly),
            "ssa+sia" => Ok(UpdateRule::SsaSia),
            "fnc" => Ok(UpdateRule::Fnc),
            other => Err(InferError::UnknownRule(other.to_string())),
        }
    }
}

/// Errors raised while validating or updating a scenario.
#[derive(Debug, Error)]
pub enum InferError {
    #[error("unknown update rule {0:?} (expected ssa, ssa+sia, or fnc)")]
    UnknownRule(String),
    #[error("unknown reference class {0:?}")]
    UnknownClass(String),
    #[error("unknown hypothesis {0:?}")]
    UnknownHypothesis(String),
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("scenario is inconsistent: {0}")]
    Inconsistent(String),
    #[error("hypothesis priors must sum to 1, got {0}")]
    BadPriors(String),
    #[error("this rule needs evidence-set counts, but the scenario declares none")]
    MissingCounts,
    #[error("FNC needs per-observer match probabilities (epsilon), but the scenario declares none")]
    MissingEpsilon,
    #[error(
        "epsilon times class count is {value:.4} for hypothesis {hypothesis:?}, breaking the \
         small-match-probability regime bound of 0.1"
    )]
    RegimeViolation { hypothesis: String, value: f64 },
    #[error("evidence is impossible under every hypothesis")]
    DegenerateEvidence,
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}
