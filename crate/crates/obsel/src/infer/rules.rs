//! The three observer-selection update rules.
//!
//! All three consume a [`Scenario`] plus the name of a reference class and
//! produce a posterior with a readable odds ledger:
//!
//! * **ssa**: you are a random member of the class, so a hypothesis is
//!   weighted by the fraction of its class that shares your evidence.
//! * **ssa+sia**: additionally weight hypotheses by how many class members
//!   they contain; the class size cancels, leaving weights proportional to
//!   the absolute number of observers with your evidence.
//! * **fnc**: condition on the full detail of your experience, assumed so
//!   specific that each observer independently matches it with a tiny
//!   per-hypothesis probability.
//!
//! Each rule runs in exact rational arithmetic when the scenario permits it,
//! and in log10-domain floats otherwise. The dispatch here is the single
//! place where scenario inputs are lowered into a scalar domain.

use super::posterior::{AnyPosterior, Posterior, Stage, Weight};
use super::scenario::{NumberDomain, Scenario};
use super::{InferError, UpdateRule};
use crate::num::{ExactProb, Magnitude};
use num_traits::ToPrimitive;

/// Ledger label for the class-membership stage shared by ssa and ssa+sia.
pub const STAGE_SSA: &str = "ssa";
/// Ledger label for the number-of-observers stage unique to ssa+sia.
pub const STAGE_SIA: &str = "sia";
/// Ledger label for the full-detail-match stage of fnc.
pub const STAGE_FNC: &str = "fnc";

/// Largest integer class count the exact engine will exponentiate in the fnc
/// likelihood. Larger (or fractional) counts are lowered to the log domain,
/// where the computation is stable anyway.
const EXACT_POW_LIMIT: u128 = 10_000;

/// Applies `rule` to the scenario, reading evidence relative to the named
/// reference class.
pub fn posterior_under(
    rule: UpdateRule,
    s: &Scenario,
    class_name: &str,
) -> Result<AnyPosterior, InferError> {
    match rule {
        UpdateRule::SsaOnly => ssa_posterior(s, class_name),
        UpdateRule::SsaSia => ssa_sia_posterior(s, class_name),
        UpdateRule::Fnc => fnc_posterior(s, class_name),
    }
}

/// Self-sampling update without observer-number weighting: each hypothesis
/// is multiplied by `|D| / |C|`, its fraction of class members matching the
/// evidence.
pub fn ssa_posterior(s: &Scenario, class_name: &str) -> Result<AnyPosterior, InferError> {
    s.validate()?;
    let class = s.class_index(class_name)?;
    match s.domain() {
        NumberDomain::Exact => Ok(AnyPosterior::Exact(ssa_core(s, class)?)),
        NumberDomain::Log => Ok(AnyPosterior::Log(ssa_core(s, class)?)),
    }
}

/// Self-sampling update with observer-number weighting. The ledger records
/// the two pulls separately, an `sia` stage (times `|C|`) and an `ssa` stage
/// (times `|D| / |C|`), so their cancellation is visible: the posterior is
/// proportional to prior times `|D|` and does not depend on the class.
pub fn ssa_sia_posterior(s: &Scenario, class_name: &str) -> Result<AnyPosterior, InferError> {
    s.validate()?;
    let class = s.class_index(class_name)?;
    match s.domain() {
        NumberDomain::Exact => Ok(AnyPosterior::Exact(ssa_sia_core(s, class)?)),
        NumberDomain::Log => Ok(AnyPosterior::Log(ssa_sia_core(s, class)?)),
    }
}

/// Full non-indexical conditioning: the evidence is the complete detail of
/// the observer's experience, which each of the `|C|` class members matches
/// independently with probability `epsilon`. The likelihood is
/// `1 - (1 - epsilon)^|C|`.
///
/// The rule is only meaningful while a match stays rare; if any hypothesis
/// has `epsilon * |C| > 0.1` the call fails with
/// [`InferError::RegimeViolation`] rather than returning a number whose
/// interpretation has silently changed.
pub fn fnc_posterior(s: &Scenario, class_name: &str) -> Result<AnyPosterior, InferError> {
    s.validate()?;
    let class = s.class_index(class_name)?;
    if s.domain() == NumberDomain::Exact && fnc_exact_is_cheap(s, class) {
        Ok(AnyPosterior::Exact(fnc_exact_core(s, class)?))
    } else {
        Ok(AnyPosterior::Log(fnc_log_core(s, class)?))
    }
}

fn prior_vec<W: Weight>(s: &Scenario) -> Vec<W> {
    s.hypotheses
        .iter()
        .map(|h| W::from_quantity(&h.prior))
        .collect()
}

fn names(s: &Scenario) -> Vec<String> {
    s.hypotheses.iter().map(|h| h.name.clone()).collect()
}

/// Per-hypothesis `|D| / |C|` multipliers, validating `|D| <= |C|`. An empty
/// class with no matching observers contributes likelihood zero: under that
/// hypothesis nobody has the evidence, so it is ruled out, not ill-defined.
fn ssa_multipliers<W: Weight>(s: &Scenario, class: usize) -> Result<Vec<W>, InferError> {
    let d_counts = s.evidence.counts.as_ref().ok_or(InferError::MissingCounts)?;
    let mut multipliers = Vec::with_capacity(s.hypotheses.len());
    for (i, h) in s.hypotheses.iter().enumerate() {
        let c: W = W::from_quantity(&s.classes[class].counts[i]);
        let d: W = W::from_quantity(&d_counts[i]);
        if d > c {
            return Err(InferError::Inconsistent(format!(
                "hypothesis {:?}: evidence count {} exceeds class count {} in class {:?}",
                h.name, d, c, s.classes[class].name
            )));
        }
        multipliers.push(if d.is_zero() { W::zero() } else { d.div(&c) });
    }
    Ok(multipliers)
}

fn ssa_core<W: Weight>(s: &Scenario, class: usize) -> Result<Posterior<W>, InferError> {
    let stage = Stage {
        label: STAGE_SSA.to_string(),
        multipliers: ssa_multipliers(s, class)?,
    };
    Posterior::new(names(s), prior_vec(s), vec![stage])
}

fn ssa_sia_core<W: Weight>(s: &Scenario, class: usize) -> Result<Posterior<W>, InferError> {
    let sia = Stage {
        label: STAGE_SIA.to_string(),
        multipliers: s.classes[class]
            .counts
            .iter()
            .map(W::from_quantity)
            .collect(),
    };
    let ssa = Stage {
        label: STAGE_SSA.to_string(),
        multipliers: ssa_multipliers(s, class)?,
    };
    Posterior::new(names(s), prior_vec(s), vec![sia, ssa])
}

/// Exact fnc is worth it only for integer class counts small enough that the
/// rational power stays cheap.
fn fnc_exact_is_cheap(s: &Scenario, class: usize) -> bool {
    s.classes[class].counts.iter().all(|q| match q.as_exact() {
        Some(c) => {
            c.is_integer() && c.numer().to_u128().map(|n| n <= EXACT_POW_LIMIT) == Some(true)
        }
        None => false,
    })
}

/// Shared guard: fails unless `epsilon * |C| <= 1/10` for every hypothesis.
fn check_fnc_regime(name: &str, eps_times_c: f64) -> Result<(), InferError> {
    if eps_times_c > 0.1 {
        return Err(InferError::RegimeViolation {
            hypothesis: name.to_string(),
            value: eps_times_c,
        });
    }
    Ok(())
}

fn fnc_exact_core(s: &Scenario, class: usize) -> Result<Posterior<ExactProb>, InferError> {
    let epsilon = s
        .evidence
        .epsilon
        .as_ref()
        .ok_or(InferError::MissingEpsilon)?;
    let limit = ExactProb::frac(1, 10);
    let mut multipliers = Vec::with_capacity(s.hypotheses.len());
    for (i, h) in s.hypotheses.iter().enumerate() {
        let c = s.classes[class].counts[i]
            .as_exact()
            .expect("exact dispatch checked the class counts")
            .clone();
        let eps = epsilon[i]
            .as_exact()
            .expect("exact dispatch requires exact epsilon")
            .clone();
        if eps > 1 {
            return Err(InferError::BadParameter(format!(
                "hypothesis {:?}: epsilon {} is not a probability",
                h.name, eps
            )));
        }
        let product = &eps * &c;
        if product > limit {
            return Err(InferError::RegimeViolation {
                hypothesis: h.name.clone(),
                value: product.to_f64(),
            });
        }
        let n = c.numer().to_u32().expect("count bounded by exact pow limit");
        // 1 - (1 - eps)^|C|, all rational.
        let miss = eps.complement().map_err(InferError::Numeric)?.pow(n);
        multipliers.push(miss.complement().map_err(InferError::Numeric)?);
    }
    let stage = Stage {
        label: STAGE_FNC.to_string(),
        multipliers,
    };
    Posterior::new(names(s), prior_vec(s), vec![stage])
}

fn fnc_log_core(s: &Scenario, class: usize) -> Result<Posterior<Magnitude>, InferError> {
    let epsilon = s
        .evidence
        .epsilon
        .as_ref()
        .ok_or(InferError::MissingEpsilon)?;
    let mut multipliers = Vec::with_capacity(s.hypotheses.len());
    for (i, h) in s.hypotheses.iter().enumerate() {
        let c = s.classes[class].counts[i].to_magnitude();
        let eps = epsilon[i].to_magnitude();
        if eps.log10() > 0.0 {
            return Err(InferError::BadParameter(format!(
                "hypothesis {:?}: epsilon {} is not a probability",
                h.name, eps
            )));
        }
        if eps.is_zero() || c.is_zero() {
            multipliers.push(Magnitude::ZERO);
            continue;
        }
        let product = eps * c;
        check_fnc_regime(&h.name, product.value())?;
        // Work with m = -ln(1 - eps) per observer. When eps is large enough
        // to represent as an f64 the exact ln_1p form is used; below that,
        // m = eps to full precision, so the log10 exponent carries over.
        let eps_value = eps.value();
        let m_log10 = if eps_value >= 1e-300 {
            (-f64::ln_1p(-eps_value)).log10()
        } else {
            eps.log10()
        };
        // t = m * |C| is at most ~0.11 by the regime guard, so the final
        // 1 - exp(-t) is computed in plain f64 without cancellation. Below
        // 10^-18 the expansion 1 - exp(-t) = t is already exact to f64
        // precision, and going through exp_m1 would underflow once the
        // exponent leaves f64 range, so keep t's log10 exponent directly.
        let t = Magnitude::from_log10(m_log10 + c.log10());
        if t.log10() < -18.0 {
            multipliers.push(t);
        } else {
            multipliers.push(Magnitude::from_value(-f64::exp_m1(-t.value())));
        }
    }
    let stage = Stage {
        label: STAGE_FNC.to_string(),
        multipliers,
    };
    Posterior::new(names(s), prior_vec(s), vec![stage])
}
