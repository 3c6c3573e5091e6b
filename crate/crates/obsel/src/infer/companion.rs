//! Paired-observer consistency checks for the self-sampling update.
//!
//! Two observer types `X` and `Y` are pairwise matched, each observer with
//! at most one partner of the other type, so an observer's chance of having
//! a partner under a theory is `min(1, other/own)`. Two theories `A` and
//! `B` predict different counts of each type; partnered observers start
//! from even odds and update on "I have a partner". Comparing the odds an
//! `X` observer and its own `Y` partner assign to theory `A` shows which
//! reference-class conventions let two people with the same information
//! agree.

use super::posterior::Weight;
use super::scenario::Quantity;
use super::InferError;
use crate::num::{ExactProb, Magnitude};

/// Which side of the pairing the reasoning observer is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObserverType {
    X,
    Y,
}

impl ObserverType {
    pub const BOTH: [ObserverType; 2] = [ObserverType::X, ObserverType::Y];
}

/// Predicted observer counts under the two theories.
#[derive(Debug, Clone, PartialEq)]
pub struct CompanionCounts {
    pub x_a: Quantity,
    pub y_a: Quantity,
    pub x_b: Quantity,
    pub y_b: Quantity,
}

impl CompanionCounts {
    pub fn new(
        x_a: impl Into<Quantity>,
        y_a: impl Into<Quantity>,
        x_b: impl Into<Quantity>,
        y_b: impl Into<Quantity>,
    ) -> Self {
        CompanionCounts {
            x_a: x_a.into(),
            y_a: y_a.into(),
            x_b: x_b.into(),
            y_b: y_b.into(),
        }
    }

    fn all(&self) -> [&Quantity; 4] {
        [&self.x_a, &self.y_a, &self.x_b, &self.y_b]
    }

    fn validate(&self) -> Result<(), InferError> {
        for (q, label) in self.all().iter().zip(["|X|_A", "|Y|_A", "|X|_B", "|Y|_B"]) {
            if q.is_zero() {
                return Err(InferError::BadParameter(format!(
                    "companion count {label} must be positive"
                )));
            }
        }
        Ok(())
    }

    fn is_exact(&self) -> bool {
        self.all().iter().all(|q| match q.as_exact() {
            Some(x) => x.fits_128_bits(),
            None => false,
        })
    }
}

/// Posterior odds a partnered observer assigns to theory `A` over theory
/// `B` under the self-sampling update without observer-count weighting,
/// starting from even prior odds.
///
/// With `own_class_only` the observer's reference class is its own type, so
/// the likelihood of being partnered is `min(1, other/own)` and the odds
/// are the ratio of that across theories; the two types then generally
/// disagree (they agree exactly when `|Y|_A / |X|_A = |Y|_B / |X|_B`).
/// Otherwise the class is all observers of both types, which multiplies the
/// own-class odds by `(own_A / own_B) × ((|X|_B + |Y|_B) / (|X|_A + |Y|_A))`;
/// the resulting odds are the same for both types, which is the
/// reference-class constraint this construction exists to demonstrate.
pub fn companion_odds(
    typ: ObserverType,
    counts: &CompanionCounts,
    own_class_only: bool,
) -> Result<Magnitude, InferError> {
    counts.validate()?;
    if counts.is_exact() {
        let odds = odds_core::<ExactProb>(typ, counts, own_class_only, false);
        Ok(Magnitude::from_exact(&odds))
    } else {
        Ok(odds_core::<Magnitude>(typ, counts, own_class_only, false))
    }
}

/// Posterior odds as in [`companion_odds`] with the reference class fixed
/// to the observer's own type, but with observer-count weighting switched
/// on: the own-type count multiplies in as `own_A / own_B`. Both types then
/// assign identical odds even from their own-type classes, which is the
/// point of adding the weighting.
pub fn companion_odds_with_count_weighting(
    typ: ObserverType,
    counts: &CompanionCounts,
) -> Result<Magnitude, InferError> {
    counts.validate()?;
    if counts.is_exact() {
        let odds = odds_core::<ExactProb>(typ, counts, true, true);
        Ok(Magnitude::from_exact(&odds))
    } else {
        Ok(odds_core::<Magnitude>(typ, counts, true, true))
    }
}

/// `min(1, other / own)`: the chance of holding one of the `other` partner
/// slots when `own` observers compete for them.
fn partner_chance<W: Weight>(other: &W, own: &W) -> W {
    if other >= own {
        W::one()
    } else {
        other.div(own)
    }
}

fn odds_core<W: Weight>(
    typ: ObserverType,
    counts: &CompanionCounts,
    own_class_only: bool,
    count_weighting: bool,
) -> W {
    let x_a: W = W::from_quantity(&counts.x_a);
    let y_a: W = W::from_quantity(&counts.y_a);
    let x_b: W = W::from_quantity(&counts.x_b);
    let y_b: W = W::from_quantity(&counts.y_b);

    let (own_a, own_b, other_a, other_b) = match typ {
        ObserverType::X => (&x_a, &x_b, &y_a, &y_b),
        ObserverType::Y => (&y_a, &y_b, &x_a, &x_b),
    };

    // Own-class likelihood ratio for "I have a partner".
    let mut odds = partner_chance(other_a, own_a).div(&partner_chance(other_b, own_b));
    if count_weighting {
        // Observer-count weighting restores agreement between the types.
        odds = odds.mul(&own_a.div(own_b));
    }
    if !own_class_only {
        // Widening the class to both types adds a population-share factor:
        // (own_A / own_B) × (total_B / total_A).
        let total_a = x_a.add(&y_a);
        let total_b = x_b.add(&y_b);
        odds = odds.mul(&own_a.div(own_b)).mul(&total_b.div(&total_a));
    }
    odds
}
