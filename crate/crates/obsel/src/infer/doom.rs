//! Birth-rank updates over total-population hypotheses.
//!
//! Hypotheses are possible totals `N = n` of people who will ever live,
//! with a prior over them. The evidence is your birth rank `r` (you are the
//! `r`'th person), or more generally membership in a distinguished set of
//! `r` people. Two updates are provided: the rank update under the
//! self-sampling rule, which shifts mass toward small totals, and the same
//! update with observer-count weighting, where the shift cancels and only
//! hypotheses with too few people to contain you are excluded.

use super::posterior::Posterior;
use super::rules::{ssa_posterior, ssa_sia_posterior};
use super::scenario::{Quantity, Scenario};
use super::InferError;
use crate::num::ExactProb;

/// A prior over population totals: pairs of `(n, weight)`. Weights may be
/// any nonnegative rationals; they are normalized before use.
pub type PopulationPrior = [(u128, ExactProb)];

fn population_scenario(
    prior: &PopulationPrior,
    evidence: impl Fn(u128) -> ExactProb,
) -> Result<Scenario, InferError> {
    if prior.is_empty() {
        return Err(InferError::BadPriors(
            "the population prior has no support points".to_string(),
        ));
    }
    let total = prior
        .iter()
        .fold(ExactProb::zero(), |acc, (_, w)| &acc + w);
    if total.is_zero() {
        return Err(InferError::BadPriors(
            "the population prior weights are all zero".to_string(),
        ));
    }
    let mut builder = Scenario::builder("population");
    for (n, w) in prior {
        builder = builder.hypothesis(format!("N={n}"), Quantity::Exact(w / &total));
    }
    builder
        .class(
            "everyone",
            prior
                .iter()
                .map(|(n, _)| Quantity::integer(*n))
                .collect::<Vec<Quantity>>(),
        )
        .evidence_counts(
            prior
                .iter()
                .map(|(n, _)| Quantity::Exact(evidence(*n)))
                .collect::<Vec<Quantity>>(),
        )
        .finish()
}

fn rank_evidence(r: u128, set_size: u128) -> impl Fn(u128) -> ExactProb {
    move |n| {
        if n >= r {
            ExactProb::from_integer(set_size)
        } else {
            ExactProb::zero()
        }
    }
}

/// Updates the population prior on your birth rank `r` under the
/// self-sampling rule: hypotheses with `n < r` are impossible, and above
/// the rank each total is reweighted by `1/n`, the chance that a random
/// member of `n` people holds exactly rank `r`. Mass therefore shifts
/// toward the smallest totals compatible with the rank.
///
/// Fails with [`InferError::DegenerateEvidence`] when the prior has no mass
/// at any `n >= r`, since the evidence then contradicts every hypothesis.
pub fn doomsday_posterior(
    prior: &PopulationPrior,
    r: u128,
) -> Result<Posterior<ExactProb>, InferError> {
    check_rank(r)?;
    let scenario = population_scenario(prior, rank_evidence(r, 1))?;
    extract_exact(ssa_posterior(&scenario, "everyone")?)
}

/// The same birth-rank update with observer-count weighting: each total is
/// first weighted by its number of observers `n`, which exactly cancels the
/// `1/n` rank likelihood. What remains is the prior truncated to `n >= r`
/// and renormalized; learning your rank no longer foretells anything.
pub fn nodoom_posterior(
    prior: &PopulationPrior,
    r: u128,
) -> Result<Posterior<ExactProb>, InferError> {
    check_rank(r)?;
    let scenario = population_scenario(prior, |n| {
        if n >= r {
            ExactProb::one()
        } else {
            ExactProb::zero()
        }
    })?;
    extract_exact(ssa_sia_posterior(&scenario, "everyone")?)
}

/// Rank membership generalized to any distinguished set: the evidence is
/// that you are one of `set_size` specific people. The likelihood is
/// `set_size / n` for `n >= set_size`, so the posterior has the same shape
/// as [`doomsday_posterior`] with `r = set_size`; the constant `set_size`
/// only scales the ledger entries, not the probabilities.
pub fn generalized_doomsday(
    prior: &PopulationPrior,
    set_size: u128,
) -> Result<Posterior<ExactProb>, InferError> {
    check_rank(set_size)?;
    let scenario = population_scenario(prior, rank_evidence(set_size, set_size))?;
    extract_exact(ssa_posterior(&scenario, "everyone")?)
}

/// Reweights a population prior by observer count, `w_n ∝ n · w_n`, and
/// normalizes. Composing this with [`doomsday_posterior`] reproduces
/// [`nodoom_posterior`] exactly: the count weighting put in up front is
/// precisely what the rank update divides back out.
pub fn sia_reweight(prior: &PopulationPrior) -> Result<Vec<(u128, ExactProb)>, InferError> {
    let weighted: Vec<(u128, ExactProb)> = prior
        .iter()
        .map(|(n, w)| (*n, w * &ExactProb::from_integer(*n)))
        .collect();
    let total = weighted
        .iter()
        .fold(ExactProb::zero(), |acc, (_, w)| &acc + w);
    if total.is_zero() {
        return Err(InferError::BadPriors(
            "count reweighting left no mass; the prior is concentrated at n = 0".to_string(),
        ));
    }
    Ok(weighted.into_iter().map(|(n, w)| (n, &w / &total)).collect())
}

fn check_rank(r: u128) -> Result<(), InferError> {
    if r < 1 {
        return Err(InferError::BadParameter(format!(
            "birth rank must be at least 1, got {r}"
        )));
    }
    Ok(())
}

fn extract_exact(
    any: super::posterior::AnyPosterior,
) -> Result<Posterior<ExactProb>, InferError> {
    Ok(any
        .as_exact()
        .expect("population scenarios use integer counts and rational priors")
        .clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> ExactProb {
        ExactProb::frac(1, 2)
    }

    /// Even prior on totals 10^11 and 10^14, rank 6 * 10^10.
    fn textbook_prior() -> Vec<(u128, ExactProb)> {
        vec![
            (100_000_000_000, half()),
            (100_000_000_000_000, half()),
        ]
    }

    #[test]
    fn rank_update_shifts_odds_by_the_population_ratio() {
        let p = doomsday_posterior(&textbook_prior(), 60_000_000_000).unwrap();
        let odds = p
            .odds("N=100000000000000", "N=100000000000")
            .unwrap();
        assert_eq!(odds, ExactProb::frac(1, 1000));
        assert_eq!(
            p.prob("N=100000000000000").unwrap(),
            &ExactProb::frac(1, 1001)
        );
        // 1/1001 = 0.000999001 to nine decimals.
        let decimal = p.prob("N=100000000000000").unwrap().to_f64();
        assert!((decimal - 0.000999000999).abs() < 1e-12);
    }

    #[test]
    fn larger_rank_halves_the_shift_when_the_small_total_doubles() {
        // Doubling the small total to 2 * 10^11 and raising the rank to
        // 1.6 * 10^11 moves the odds from 1/1000 to 1/500.
        let prior = vec![
            (200_000_000_000u128, half()),
            (100_000_000_000_000, half()),
        ];
        let p = doomsday_posterior(&prior, 160_000_000_000).unwrap();
        let odds = p
            .odds("N=100000000000000", "N=200000000000")
            .unwrap();
        assert_eq!(odds, ExactProb::frac(1, 500));
    }

    #[test]
    fn point_mass_prior_is_unmoved() {
        let prior = vec![(1_000u128, ExactProb::one())];
        let p = doomsday_posterior(&prior, 17).unwrap();
        assert!(p.prob("N=1000").unwrap().is_one());
    }

    #[test]
    fn count_weighted_update_only_truncates() {
        let p = nodoom_posterior(&textbook_prior(), 60_000_000_000).unwrap();
        assert_eq!(p.prob("N=100000000000000").unwrap(), &half());
        assert_eq!(p.prob("N=100000000000").unwrap(), &half());

        // A rank above the smaller total zeroes it and renormalizes.
        let p = nodoom_posterior(&textbook_prior(), 200_000_000_000).unwrap();
        assert!(p.prob("N=100000000000").unwrap().is_zero());
        assert!(p.prob("N=100000000000000").unwrap().is_one());
    }

    #[test]
    fn count_reweighting_then_rank_update_equals_truncation() {
        // Three-point prior with uneven weights.
        let prior = vec![
            (50u128, ExactProb::frac(1, 6)),
            (200, ExactProb::frac(1, 3)),
            (1_000, ExactProb::frac(1, 2)),
        ];
        for r in [1u128, 50, 51, 200, 999] {
            let composed = doomsday_posterior(&sia_reweight(&prior).unwrap(), r).unwrap();
            let direct = nodoom_posterior(&prior, r).unwrap();
            assert_eq!(composed.probs(), direct.probs(), "rank {r}");
        }
    }

    #[test]
    fn set_membership_matches_rank_update_for_any_set_size() {
        let prior = vec![
            (30u128, ExactProb::frac(2, 7)),
            (40, ExactProb::frac(4, 7)),
            (600, ExactProb::frac(1, 7)),
        ];
        for r in [1u128, 30, 31, 40, 41, 600] {
            let by_rank = doomsday_posterior(&prior, r).unwrap();
            let by_set = generalized_doomsday(&prior, r).unwrap();
            assert_eq!(by_rank.probs(), by_set.probs(), "set size {r}");
        }
    }

    #[test]
    fn set_size_at_min_support_is_pure_truncation() {
        let prior = vec![
            (30u128, ExactProb::frac(1, 2)),
            (60, ExactProb::frac(1, 2)),
        ];
        let p = generalized_doomsday(&prior, 30).unwrap();
        // 30 people: likelihood 1; 60 people: likelihood 1/2.
        assert_eq!(p.prob("N=30").unwrap(), &ExactProb::frac(2, 3));
        assert_eq!(p.prob("N=60").unwrap(), &ExactProb::frac(1, 3));
    }

    #[test]
    fn rank_beyond_all_support_is_a_contradiction() {
        let err = doomsday_posterior(&textbook_prior(), 200_000_000_000_000).unwrap_err();
        assert!(matches!(err, InferError::DegenerateEvidence));
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(matches!(
            doomsday_posterior(&[], 5),
            Err(InferError::BadPriors(_))
        ));
        assert!(matches!(
            doomsday_posterior(&[(10, ExactProb::zero())], 5),
            Err(InferError::BadPriors(_))
        ));
        assert!(matches!(
            doomsday_posterior(&textbook_prior(), 0),
            Err(InferError::BadParameter(_))
        ));
        assert!(matches!(
            sia_reweight(&[(0, ExactProb::one())]),
            Err(InferError::BadPriors(_))
        ));
    }

    #[test]
    fn unnormalized_prior_weights_are_accepted() {
        let raw = vec![
            (100u128, ExactProb::from_integer(3)),
            (400, ExactProb::from_integer(9)),
        ];
        let scaled = vec![
            (100u128, ExactProb::frac(1, 4)),
            (400, ExactProb::frac(3, 4)),
        ];
        let a = doomsday_posterior(&raw, 10).unwrap();
        let b = doomsday_posterior(&scaled, 10).unwrap();
        assert_eq!(a.probs(), b.probs());
    }
}
