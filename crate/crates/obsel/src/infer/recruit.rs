//! Experiment-recruitment updates: how many subjects were enrolled?
//!
//! An unknown number `N`, uniform on `1..=pool_max`, of subjects is drawn
//! from a large pool; every subject privately flips a coin `seq_len` times.
//! Two updates on "my sequence was recorded" are provided: a known-broken
//! one that conditions only on *someone* having recorded the sequence, and
//! the correct one that accounts for the fact that *you* were recruited at
//! all.

use super::posterior::{Posterior, Stage};
use super::rules::ssa_posterior;
use super::scenario::{Quantity, Scenario};
use super::InferError;
use crate::num::ExactProb;

fn hypothesis_names(pool_max: u32) -> Vec<String> {
    (1..=pool_max).map(|n| format!("N={n}")).collect()
}

fn uniform_prior(pool_max: u32) -> Vec<ExactProb> {
    (1..=pool_max)
        .map(|_| ExactProb::frac(1, u128::from(pool_max)))
        .collect()
}

/// The coarse-conditioning update: multiplies each `N = n` by the chance
/// that at least one of `n` subjects records the observed `seq_len`-flip
/// sequence, `1 - (1 - 2^-seq_len)^n`.
///
/// This is a deliberately broken analysis, kept because it makes the error
/// visible: it discards both who recorded the sequence and all further
/// detail of that person's experience. The per-subject match probability
/// `2^-seq_len` is far too large for the rare-match approximation that
/// would excuse those omissions, which is exactly why [`super::rules::fnc_posterior`]
/// refuses the equivalent scenario with a regime error. The result carries a
/// `known-invalid (pedagogical)` note.
pub fn recruitment_invalid_update(
    pool_max: u32,
    seq_len: u32,
) -> Result<Posterior<ExactProb>, InferError> {
    if !(1..=10_000).contains(&pool_max) {
        return Err(InferError::BadParameter(format!(
            "subject pool bound must be in 1..=10000, got {pool_max}"
        )));
    }
    if !(1..=64).contains(&seq_len) {
        return Err(InferError::BadParameter(format!(
            "flip sequence length must be in 1..=64, got {seq_len}"
        )));
    }
    // Chance a single subject records something other than the sequence.
    let miss = ExactProb::frac(1, 1u128 << seq_len)
        .complement()
        .map_err(InferError::Numeric)?;
    let multipliers = (1..=pool_max)
        .map(|n| miss.pow(n).complement().map_err(InferError::Numeric))
        .collect::<Result<Vec<_>, _>>()?;
    let posterior = Posterior::new(
        hypothesis_names(pool_max),
        uniform_prior(pool_max),
        vec![Stage {
            label: "someone-recorded-sequence".to_string(),
            multipliers,
        }],
    )?;
    Ok(posterior.with_note(
        "known-invalid (pedagogical): conditions on the sequence having been \
         recorded by someone, ignoring that it was recorded by you",
    ))
}

/// The correct update: you are one member of a recruitment pool, and the
/// chance of being enrolled grows with the number of subjects, so
/// `P(N = n) ∝ n`, i.e. `n / (1 + 2 + ... + pool_max)`.
///
/// The sequence you recorded drops out, since its probability is the same
/// under every `n`. The pool size drops out too: being enrolled has
/// probability `n / pool` whatever the pool, so it only rescales every
/// hypothesis equally. The computation therefore runs the self-sampling
/// update with the pool as the reference class and the `n` enrolled subjects
/// as the evidence set.
pub fn recruitment_indexical_update(pool_max: u32) -> Result<Posterior<ExactProb>, InferError> {
    if !(1..=10_000).contains(&pool_max) {
        return Err(InferError::BadParameter(format!(
            "subject pool bound must be in 1..=10000, got {pool_max}"
        )));
    }
    let scenario = indexical_scenario(pool_max)?;
    let any = ssa_posterior(&scenario, "pool")?;
    Ok(any
        .as_exact()
        .expect("integer counts and rational priors stay exact")
        .clone())
}

/// The scenario behind [`recruitment_indexical_update`]: hypotheses
/// `N=1..=pool_max`, a constant-size pool as the reference class, and the
/// enrolled subjects as the evidence set.
pub fn indexical_scenario(pool_max: u32) -> Result<Scenario, InferError> {
    let mut builder = Scenario::builder("recruitment");
    for n in 1..=pool_max {
        builder = builder.hypothesis(format!("N={n}"), Quantity::frac(1, u128::from(pool_max)));
    }
    builder
        .class(
            "pool",
            (1..=pool_max)
                .map(|_| Quantity::integer(u128::from(pool_max)))
                .collect::<Vec<Quantity>>(),
        )
        .evidence_counts(
            (1..=pool_max)
                .map(|n| Quantity::integer(u128::from(n)))
                .collect::<Vec<Quantity>>(),
        )
        .finish()
}
