//! The two-coordinate interference model: joint lognormal beliefs about how
//! readily observers arise (`p`) and how strongly established species
//! interfere with later ones (`f`), conditioned on this observer existing.
//!
//! For coordinates `(p, f)` and interference volume `V`, the chance that a
//! given observer comes to exist is `p * exp(-f*p*V)`: the leading `p`
//! favours hypotheses rich in observers, while the exponential is the chance
//! that no earlier species reached and disturbed the observer's site, whose
//! expected visitor count is `f*p*V`. Multiplying the joint prior by this
//! weight gives a posterior with no closed form. It is sampled exactly: the
//! bare `p` factor is absorbed analytically by shifting the proposal mean of
//! `log10(p)`, and the bounded remainder `exp(-f*p*V) <= 1` drives rejection
//! sampling.
//!
//! A sub-factor (one multiplicative contribution to `p` or to `f`) is
//! analyzed through its Gaussian conditional given the parent coordinate,
//! evaluated at every posterior sample and averaged, which is exact under
//! the joint lognormal prior.

use crate::num::{CompensatedSum, Gaussian10, RandomSource};
use std::f64::consts::LN_10;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Errors from model construction, sampling, and sub-factor analysis.
#[derive(Debug, Error)]
pub enum FermiError {
    /// A scalar argument fell outside its admissible range.
    #[error("{name} must be {requirement}, got {value}")]
    BadParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
    /// Asked for a sample set with no points in it.
    #[error("target_accepted must be at least 1")]
    EmptyTarget,
    /// A sub-factor analysis needs at least one posterior sample.
    #[error("sample set is empty")]
    EmptySampleSet,
    /// A sub-factor cannot spread more widely than the parent it divides.
    #[error(
        "sub-factor sd10 {factor_sd10} is not smaller than the parent \
         coordinate's sd10 {parent_sd10}"
    )]
    FactorTooWide { factor_sd10: f64, parent_sd10: f64 },
    /// The prior handed to an analysis differs from the prior the sample
    /// set was drawn under.
    #[error("sample set was drawn under a different prior than the one supplied")]
    PriorMismatch,
    /// Rejection sampling made essentially no progress.
    #[error(
        "sampler starved at V = {v}: acceptance estimate {acceptance:e} \
         after {proposals} proposals"
    )]
    Starved {
        v: f64,
        acceptance: f64,
        proposals: u64,
    },
    /// A factor parent tag was neither `p` nor `f`.
    #[error("unknown factor parent {0:?}: expected \"p\" or \"f\"")]
    UnknownParent(String),
}

/// Proposals processed per deterministic substream batch. Accepted points
/// are merged in batch order, so a parallel driver would produce exactly
/// the same set as the sequential one.
const BATCH_PROPOSALS: u64 = 8192;

/// Proposals to burn before concluding that the acceptance region is
/// unreachably small.
const STARVATION_MIN_PROPOSALS: u64 = 100_000_000;

/// Acceptance-rate floor below which sampling is abandoned.
const STARVATION_RATE: f64 = 1e-6;

/// Substream index reserved for the fresh prior series in plot output.
/// Sampler batches use indices counting up from zero and can never reach it.
const PRIOR_SERIES_SUBSTREAM: u64 = u64::MAX;

/// Which joint coordinate a sub-factor divides out of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorParent {
    /// The factor contributes to the origination chance `p`.
    P,
    /// The factor contributes to the interference fraction `f`.
    F,
}

impl fmt::Display for FactorParent {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorParent::P => write!(out, "p"),
            FactorParent::F => write!(out, "f"),
        }
    }
}

impl FromStr for FactorParent {
    type Err = FermiError;

    fn from_str(text: &str) -> Result<Self, FermiError> {
        match text.trim().to_ascii_lowercase().as_str() {
            "p" => Ok(FactorParent::P),
            "f" => Ok(FactorParent::F),
            _ => Err(FermiError::UnknownParent(text.to_string())),
        }
    }
}

/// Independent Gaussian priors for `log10(p)` and `log10(f)`.
///
/// Only `mean10_p` is stored; `mean10_f` is defined as its negation so the
/// constraint "the log10 of the product `p*f` has zero prior mean" holds
/// exactly however the split is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermiPrior {
    sd10_p: f64,
    sd10_f: f64,
    mean10_p: f64,
}

impl Default for FermiPrior {
    /// The stock prior: sd10 of 1.25 for `p` (a 95% interval spanning five
    /// decades) and 0.75 for `f` (spanning three), means split evenly.
    fn default() -> Self {
        FermiPrior {
            sd10_p: 1.25,
            sd10_f: 0.75,
            mean10_p: 0.0,
        }
    }
}

impl FermiPrior {
    pub fn new(sd10_p: f64, sd10_f: f64, mean10_p: f64) -> Result<Self, FermiError> {
        for (name, sd) in [("sd10_p", sd10_p), ("sd10_f", sd10_f)] {
            if !sd.is_finite() || sd <= 0.0 {
                return Err(FermiError::BadParameter {
                    name,
                    requirement: "a finite positive real",
                    value: sd,
                });
            }
        }
        if !mean10_p.is_finite() {
            return Err(FermiError::BadParameter {
                name: "mean10_p",
                requirement: "a finite real",
                value: mean10_p,
            });
        }
        Ok(FermiPrior {
            sd10_p,
            sd10_f,
            mean10_p,
        })
    }

    pub fn sd10_p(&self) -> f64 {
        self.sd10_p
    }

    pub fn sd10_f(&self) -> f64 {
        self.sd10_f
    }

    pub fn mean10_p(&self) -> f64 {
        self.mean10_p
    }

    pub fn mean10_f(&self) -> f64 {
        -self.mean10_p
    }

    /// Prior mean of the named coordinate's log10.
    pub fn mean10(&self, parent: FactorParent) -> f64 {
        match parent {
            FactorParent::P => self.mean10_p(),
            FactorParent::F => self.mean10_f(),
        }
    }

    /// Prior sd of the named coordinate's log10.
    pub fn sd10(&self, parent: FactorParent) -> f64 {
        match parent {
            FactorParent::P => self.sd10_p,
            FactorParent::F => self.sd10_f,
        }
    }

    /// Prior marginal of the named coordinate as a log10-scale Gaussian.
    pub fn marginal(&self, parent: FactorParent) -> Gaussian10 {
        Gaussian10 {
            mean10: self.mean10(parent),
            sd10: self.sd10(parent),
        }
    }
}

/// The interference volume `V`: how much opportunity earlier species have
/// had to reach and disturb this observer's site, with 0 meaning none.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermiParams {
    v: f64,
}

impl FermiParams {
    pub fn new(v: f64) -> Result<Self, FermiError> {
        if !v.is_finite() || v < 0.0 {
            return Err(FermiError::BadParameter {
                name: "V",
                requirement: "a finite nonnegative real",
                value: v,
            });
        }
        Ok(FermiParams { v })
    }

    pub fn v(&self) -> f64 {
        self.v
    }
}

/// One multiplicative contribution to a parent coordinate, with a Gaussian
/// prior of its own on the log10 scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorSpec {
    mean10: f64,
    sd10: f64,
    parent: FactorParent,
}

impl FactorSpec {
    pub fn new(mean10: f64, sd10: f64, parent: FactorParent) -> Result<Self, FermiError> {
        if !mean10.is_finite() {
            return Err(FermiError::BadParameter {
                name: "factor mean10",
                requirement: "a finite real",
                value: mean10,
            });
        }
        if !sd10.is_finite() || sd10 < 0.0 {
            return Err(FermiError::BadParameter {
                name: "factor sd10",
                requirement: "a finite nonnegative real",
                value: sd10,
            });
        }
        Ok(FactorSpec {
            mean10,
            sd10,
            parent,
        })
    }

    /// The stock narrow factor: centred on a one-in-ten contribution with
    /// sd10 of 0.2.
    pub fn default_for(parent: FactorParent) -> Self {
        FactorSpec {
            mean10: -1.0,
            sd10: 0.2,
            parent,
        }
    }

    pub fn mean10(&self) -> f64 {
        self.mean10
    }

    pub fn sd10(&self) -> f64 {
        self.sd10
    }

    pub fn parent(&self) -> FactorParent {
        self.parent
    }
}

/// An exact posterior sample: accepted `(log10_f, log10_p)` points together
/// with the provenance needed to reproduce or extend them.
#[derive(Debug, Clone, PartialEq)]
pub struct FermiSampleSet {
    points: Vec<(f64, f64)>,
    prior: FermiPrior,
    v: f64,
    seed: u64,
    proposal_count: u64,
    accepted_count: u64,
}

/// Mean, spread, and standard error of one sampled coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordinateSummary {
    pub mean: f64,
    pub sd: f64,
    pub se_mean: f64,
}

impl FermiSampleSet {
    /// Accepted points as `(log10_f, log10_p)` pairs, in acceptance order.
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// The prior the points were drawn under.
    pub fn prior(&self) -> FermiPrior {
        self.prior
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn proposal_count(&self) -> u64 {
        self.proposal_count
    }

    pub fn accepted_count(&self) -> u64 {
        self.accepted_count
    }

    /// Fraction of proposals that were accepted.
    pub fn acceptance_rate(&self) -> f64 {
        self.accepted_count as f64 / self.proposal_count as f64
    }

    pub fn log10_f_summary(&self) -> CoordinateSummary {
        self.coordinate_summary(|&(log10_f, _)| log10_f)
    }

    pub fn log10_p_summary(&self) -> CoordinateSummary {
        self.coordinate_summary(|&(_, log10_p)| log10_p)
    }

    fn coordinate_summary(&self, pick: impl FnMut(&(f64, f64)) -> f64) -> CoordinateSummary {
        let values: Vec<f64> = self.points.iter().map(pick).collect();
        let (mean, var) = mean_and_var(&values);
        CoordinateSummary {
            mean,
            sd: var.sqrt(),
            se_mean: (var / values.len() as f64).sqrt(),
        }
    }
}

/// Posterior description of one sub-factor: Gaussian parameters of its
/// log10, the posterior mean of its value, and standard errors for the
/// Monte Carlo path (zero, with `sample_count` 0, on the analytic path).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorSummary {
    pub mean10: f64,
    pub sd10: f64,
    pub mean_value: f64,
    pub se_mean10: f64,
    pub se_mean_value: f64,
    pub sample_count: u64,
}

/// The chance that a given observer exists under coordinates `(p, f)`:
/// `p * exp(-f*p*V)`, the origination chance times the chance of zero
/// earlier visitors.
pub fn existence_prob(p: f64, f: f64, params: FermiParams) -> Result<f64, FermiError> {
    check_positive("p", p)?;
    check_positive("f", f)?;
    Ok(p * (-f * p * params.v()).exp())
}

/// Expected number of earlier species in a position to interfere: `f*p*V`.
pub fn expected_interferers(p: f64, f: f64, params: FermiParams) -> Result<f64, FermiError> {
    check_positive("p", p)?;
    check_positive("f", f)?;
    Ok(f * p * params.v())
}

fn check_positive(name: &'static str, value: f64) -> Result<(), FermiError> {
    if !value.is_finite() || value <= 0.0 {
        return Err(FermiError::BadParameter {
            name,
            requirement: "a finite positive real",
            value,
        });
    }
    Ok(())
}

/// Mean shift of `log10(p)` produced by the bare `p` factor: multiplying a
/// Gaussian density in log10 space by the value itself re-centres it at
/// `mean10 + sd10^2 * ln 10` and leaves the spread unchanged.
fn existence_shift(prior: &FermiPrior) -> f64 {
    prior.sd10_p * prior.sd10_p * LN_10
}

/// Draws exact posterior samples by rejection.
///
/// Proposals come from the prior with the `p`-factor shift applied to the
/// mean of `log10(p)`; each proposal is accepted with probability
/// `exp(-f*p*V)`, which never exceeds one. Identical arguments give a
/// bit-identical sample set.
pub fn sample_posterior(
    prior: FermiPrior,
    params: FermiParams,
    target_accepted: u64,
    seed: u64,
) -> Result<FermiSampleSet, FermiError> {
    sample_with_patience(prior, params, target_accepted, seed, STARVATION_MIN_PROPOSALS)
}

fn sample_with_patience(
    prior: FermiPrior,
    params: FermiParams,
    target_accepted: u64,
    seed: u64,
    patience: u64,
) -> Result<FermiSampleSet, FermiError> {
    if target_accepted == 0 {
        return Err(FermiError::EmptyTarget);
    }
    let v = params.v();
    let proposal_mean_p = prior.mean10_p() + existence_shift(&prior);
    let root = RandomSource::new(seed);
    let mut points = Vec::with_capacity(target_accepted.min(1 << 23) as usize);
    let mut proposals: u64 = 0;
    for batch in 0u64.. {
        let mut rng = root.substream(batch);
        for _ in 0..BATCH_PROPOSALS {
            let log10_f = prior.mean10_f() + prior.sd10_f * rng.standard_normal();
            let log10_p = proposal_mean_p + prior.sd10_p * rng.standard_normal();
            let uniform = rng.next_f64();
            proposals += 1;
            let expected_hits = v * ((log10_f + log10_p) * LN_10).exp();
            if uniform < (-expected_hits).exp() {
                points.push((log10_f, log10_p));
                if points.len() as u64 == target_accepted {
                    return Ok(FermiSampleSet {
                        points,
                        prior,
                        v,
                        seed,
                        proposal_count: proposals,
                        accepted_count: target_accepted,
                    });
                }
            }
        }
        if proposals >= patience {
            let acceptance = points.len() as f64 / proposals as f64;
            if acceptance < STARVATION_RATE {
                return Err(FermiError::Starved {
                    v,
                    acceptance,
                    proposals,
                });
            }
        }
    }
    unreachable!("the batch loop only exits by returning");
}

/// Closed-form posterior marginal of a parent coordinate when `V = 0`.
///
/// With no interference the update multiplies the prior density by `p`
/// alone, which shifts the mean of `log10(p)` and leaves `f` untouched.
pub fn analytic_parent_marginal(prior: FermiPrior, parent: FactorParent) -> Gaussian10 {
    match parent {
        FactorParent::P => Gaussian10 {
            mean10: prior.mean10_p() + existence_shift(&prior),
            sd10: prior.sd10_p,
        },
        FactorParent::F => prior.marginal(FactorParent::F),
    }
}

/// Sub-factor posterior via the `V = 0` closed form, with no sampling.
///
/// The parent posterior is Gaussian, the conditional mean of the factor is
/// linear in the parent, and the conditional variance is constant, so the
/// factor posterior is exactly Gaussian and all three summary quantities
/// have closed forms.
pub fn analytic_factor_posterior(
    prior: FermiPrior,
    factor: FactorSpec,
) -> Result<FactorSummary, FermiError> {
    let (coeff, cond_var) = factor_coefficients(&prior, &factor)?;
    let marginal = analytic_parent_marginal(prior, factor.parent);
    let mean10 = factor.mean10 + coeff * (marginal.mean10 - prior.mean10(factor.parent));
    let sd10 = (cond_var + coeff * coeff * marginal.sd10 * marginal.sd10).sqrt();
    let law = Gaussian10 { mean10, sd10 };
    Ok(FactorSummary {
        mean10,
        sd10,
        mean_value: law.lognormal_mean(),
        se_mean10: 0.0,
        se_mean_value: 0.0,
        sample_count: 0,
    })
}

/// Sub-factor posterior from a Monte Carlo sample of the joint posterior.
///
/// Given the parent's log10 value `x`, the factor's log10 is Gaussian with
/// mean `factor.mean10 + coeff * (x - prior mean)` and a constant variance,
/// where `coeff` is the variance ratio between factor and parent. The
/// summary averages that conditional over the sampled posterior; the mean
/// factor value is the per-sample conditional lognormal mean averaged over
/// samples, which is exact for the mixture, unlike plugging the posterior
/// mean into a single lognormal.
pub fn factor_posterior(
    prior: FermiPrior,
    factor: FactorSpec,
    samples: &FermiSampleSet,
) -> Result<FactorSummary, FermiError> {
    if samples.points.is_empty() {
        return Err(FermiError::EmptySampleSet);
    }
    if samples.prior != prior {
        return Err(FermiError::PriorMismatch);
    }
    let (coeff, cond_var) = factor_coefficients(&prior, &factor)?;
    let prior_mean = prior.mean10(factor.parent);
    let parents: Vec<f64> = samples
        .points
        .iter()
        .map(|&(log10_f, log10_p)| match factor.parent {
            FactorParent::P => log10_p,
            FactorParent::F => log10_f,
        })
        .collect();
    let (parent_mean, parent_var) = mean_and_var(&parents);
    let count = parents.len() as f64;

    let mean10 = factor.mean10 + coeff * (parent_mean - prior_mean);
    let sd10 = (cond_var + coeff * coeff * parent_var).sqrt();
    let se_mean10 = coeff * (parent_var / count).sqrt();

    let half_spread = 0.5 * cond_var * LN_10 * LN_10;
    let conditional_means: Vec<f64> = parents
        .iter()
        .map(|&x| {
            let m = factor.mean10 + coeff * (x - prior_mean);
            (m * LN_10 + half_spread).exp()
        })
        .collect();
    let (mean_value, value_var) = mean_and_var(&conditional_means);

    Ok(FactorSummary {
        mean10,
        sd10,
        mean_value,
        se_mean10,
        se_mean_value: (value_var / count).sqrt(),
        sample_count: parents.len() as u64,
    })
}

fn factor_coefficients(prior: &FermiPrior, factor: &FactorSpec) -> Result<(f64, f64), FermiError> {
    let parent_sd = prior.sd10(factor.parent);
    if factor.sd10 >= parent_sd {
        return Err(FermiError::FactorTooWide {
            factor_sd10: factor.sd10,
            parent_sd10: parent_sd,
        });
    }
    let coeff = (factor.sd10 * factor.sd10) / (parent_sd * parent_sd);
    let cond_var = factor.sd10 * factor.sd10 * (1.0 - coeff);
    Ok((coeff, cond_var))
}

/// Renders a sample set as comma-separated plot data.
///
/// The header is `series,log10_f,log10_p`; accepted points follow as
/// `posterior` rows. With `include_prior`, a fresh series of `prior_points`
/// draws from the unmodified prior is appended under a reserved substream
/// of the set's seed. For `V > 0` a final `line,intercept,<value>` row
/// gives the diagonal `log10_f + log10_p = -log10(V)`; at `V = 0` the line
/// is undefined and omitted.
pub fn emit_plot_points(
    samples: &FermiSampleSet,
    include_prior: bool,
    prior_points: u64,
) -> String {
    use std::fmt::Write as _;

    let mut out = String::from("series,log10_f,log10_p\n");
    for &(log10_f, log10_p) in &samples.points {
        let _ = writeln!(out, "posterior,{log10_f},{log10_p}");
    }
    if include_prior {
        let prior = samples.prior;
        let mut rng = RandomSource::new(samples.seed).substream(PRIOR_SERIES_SUBSTREAM);
        for _ in 0..prior_points {
            let log10_f = prior.mean10_f() + prior.sd10_f * rng.standard_normal();
            let log10_p = prior.mean10_p() + prior.sd10_p * rng.standard_normal();
            let _ = writeln!(out, "prior,{log10_f},{log10_p}");
        }
    }
    if samples.v > 0.0 {
        let _ = writeln!(out, "line,intercept,{}", -samples.v.log10());
    }
    out
}

/// Two-pass compensated mean and variance (n-1 denominator); a single
/// point has zero spread by convention.
fn mean_and_var(values: &[f64]) -> (f64, f64) {
    let mut sum = CompensatedSum::new();
    for &x in values {
        sum.add(x);
    }
    let mean = sum.total() / values.len() as f64;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let mut squares = CompensatedSum::new();
    for &x in values {
        let d = x - mean;
        squares.add(d * d);
    }
    (mean, squares.total() / (values.len() - 1) as f64)
}
