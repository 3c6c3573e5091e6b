//! End-to-end checks of the crate's headline results.
//!
//! Each test covers one deliverable: it runs the public API, compares
//! against independently derived expectations (closed forms, exhaustive
//! enumeration, grid quadrature, or hand-transcribed tables), and enforces a
//! wall-clock budget. Every test prints exactly one `PASS <label>` or
//! `FAIL <label>: <reason>` line, visible with `--nocapture`, so a full run
//! doubles as a health report.

use obsel::catalog::{
    beauty_and_prince, duplicate_threshold, landscape_odds, marochnik_table, sailors_child,
    sleeping_beauty, told_monday, FPower, LandscapeComparison, MarochnikClass, Stance, StarRegime,
    Viewpoint, WakeningClass,
};
use obsel::fermi::{
    analytic_factor_posterior, factor_posterior, sample_posterior, FactorParent, FactorSpec,
    FermiParams, FermiPrior, FermiSampleSet,
};
use obsel::infer::{
    companion_odds, companion_odds_with_count_weighting, doomsday_posterior, fnc_posterior,
    nodoom_posterior, posterior_under, recruitment_indexical_update, recruitment_invalid_update,
    sia_reweight, ssa_posterior, ssa_sia_posterior, AnyPosterior, CompanionCounts, ObserverType,
    Quantity, Scenario, UpdateRule, STAGE_SSA,
};
use obsel::num::{ExactProb, Gaussian10, Magnitude, RandomSource};
use std::collections::BTreeSet;
use std::sync::Mutex;
use std::time::{Duration, Instant};

/// Serializes test bodies so wall-clock budgets are measured without
/// interference from sibling tests.
static GATE: Mutex<()> = Mutex::new(());

fn criterion(label: &str, budget: Duration, run: impl FnOnce() -> Result<(), String>) {
    let _serial = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let outcome = run();
    let elapsed = start.elapsed();
    let outcome = outcome.and_then(|()| {
        if elapsed <= budget {
            Ok(())
        } else {
            Err(format!(
                "checks passed but took {elapsed:.2?}, over the {budget:?} budget"
            ))
        }
    });
    match outcome {
        Ok(()) => println!("PASS {label} ({elapsed:.2?})"),
        Err(msg) => {
            println!("FAIL {label}: {msg}");
            panic!("{label}: {msg}");
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($args:tt)+) => {
        // Evaluated into a bool first so a NaN comparison (false) fails the
        // check rather than slipping through a rewritten inequality.
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($args)+));
        }
    };
}

fn s(e: impl std::fmt::Display) -> String {
    e.to_string()
}

// ---------------------------------------------------------------------------
// Shared generators
// ---------------------------------------------------------------------------

fn draw(rng: &mut RandomSource, lo: u64, hi: u64) -> u64 {
    lo + rng.next_u64() % (hi - lo + 1)
}

/// A random exact scenario with two reference classes that both contain
/// every evidence observer; the narrow class is padded lightly, the broad
/// one by up to a million.
fn random_two_class(rng: &mut RandomSource) -> Scenario {
    let k = draw(rng, 2, 4) as usize;
    let weights: Vec<u64> = (0..k).map(|_| draw(rng, 1, 100)).collect();
    let total: u64 = weights.iter().sum();
    let evidence: Vec<u64> = (0..k).map(|_| draw(rng, 1, 5)).collect();
    let mut b = Scenario::builder("generated");
    for (i, w) in weights.iter().enumerate() {
        b = b.hypothesis(
            format!("h{i}"),
            Quantity::frac(u128::from(*w), u128::from(total)),
        );
    }
    let pad = |rng: &mut RandomSource, cap: u64| -> Vec<Quantity> {
        evidence
            .iter()
            .map(|d| Quantity::integer(u128::from(d + draw(rng, 0, cap))))
            .collect()
    };
    let narrow = pad(rng, 50);
    let broad = pad(rng, 1_000_000);
    b.class("narrow", narrow)
        .class("broad", broad)
        .evidence_counts(
            evidence
                .iter()
                .map(|d| Quantity::integer(u128::from(*d))),
        )
        .evidence_epsilon((0..k).map(|_| Quantity::frac(1, u128::from(draw(rng, 100_000_000, 1_000_000_000)))))
        .finish()
        .expect("generated scenario is valid")
}

/// A random scenario whose evidence counts equal `epsilon * class count`
/// exactly, plus the bound `2 * max(epsilon * count)` for comparing the
/// rare-detail rule to the count-weighted one.
fn random_matched(rng: &mut RandomSource) -> (Scenario, ExactProb) {
    let k = draw(rng, 2, 4) as usize;
    let weights: Vec<u64> = (0..k).map(|_| draw(rng, 1, 100)).collect();
    let total: u64 = weights.iter().sum();
    let counts: Vec<u64> = (0..k).map(|_| draw(rng, 1, 100)).collect();
    let denoms: Vec<u64> = (0..k).map(|_| draw(rng, 10_000_000, 1_000_000_000)).collect();
    let mut b = Scenario::builder("generated-matched");
    for (i, w) in weights.iter().enumerate() {
        b = b.hypothesis(
            format!("h{i}"),
            Quantity::frac(u128::from(*w), u128::from(total)),
        );
    }
    let scenario = b
        .class(
            "minds",
            counts.iter().map(|&c| Quantity::integer(u128::from(c))),
        )
        .evidence_counts(
            counts
                .iter()
                .zip(&denoms)
                .map(|(&c, &d)| Quantity::frac(u128::from(c), u128::from(d))),
        )
        .evidence_epsilon(denoms.iter().map(|&d| Quantity::frac(1, u128::from(d))))
        .finish()
        .expect("generated scenario is valid");
    let bound = counts
        .iter()
        .zip(&denoms)
        .map(|(&c, &d)| ExactProb::frac(2 * u128::from(c), u128::from(d)))
        .max()
        .unwrap();
    (scenario, bound)
}

// ---------------------------------------------------------------------------
// 1. Exact discrete results
// ---------------------------------------------------------------------------

#[test]
fn exact_catalog_probabilities() {
    criterion(
        "exact catalog probabilities",
        Duration::from_secs(1),
        || {
            // One-or-two-wakenings coin puzzle under all three rules.
            ensure!(
                sleeping_beauty(1, 2, UpdateRule::Fnc).map_err(s)? == ExactProb::frac(1, 3),
                "full-detail P(Heads) is not 1/3"
            );
            ensure!(
                sleeping_beauty(1, 2, UpdateRule::SsaSia).map_err(s)? == ExactProb::frac(1, 3),
                "count-weighted P(Heads) is not 1/3"
            );
            ensure!(
                sleeping_beauty(1, 2, UpdateRule::SsaOnly).map_err(s)? == ExactProb::frac(1, 2),
                "own-class self-sampling P(Heads) is not 1/2"
            );

            // The sleeper and her always-wakened neighbour, pooled class.
            let ssa = UpdateRule::SsaOnly;
            ensure!(
                beauty_and_prince(ssa, WakeningClass::Both, Viewpoint::Beauty).map_err(s)?
                    == ExactProb::frac(2, 5),
                "sleeper's pooled-class P(Heads) is not 2/5"
            );
            ensure!(
                beauty_and_prince(ssa, WakeningClass::Both, Viewpoint::PrincePreObservation)
                    .map_err(s)?
                    == ExactProb::frac(4, 7),
                "neighbour's pre-observation P(Heads) is not 4/7"
            );
            ensure!(
                beauty_and_prince(ssa, WakeningClass::Both, Viewpoint::PrinceSeesBeauty)
                    .map_err(s)?
                    == ExactProb::frac(2, 5),
                "neighbour's post-observation P(Heads) is not 2/5"
            );

            // Padding the class with coin-independent bystanders drives the
            // bare rule's answer to 1/3: exactly (n+4)/(3n+10) at n
            // bystanders, within 1/n of the limit.
            for n in [1_000u64, 1_000_000, 1_000_000_000] {
                let p = beauty_and_prince(ssa, WakeningClass::AllHumans(n), Viewpoint::Beauty)
                    .map_err(s)?;
                let n = u128::from(n);
                ensure!(
                    p == ExactProb::frac(n + 4, 3 * n + 10),
                    "broad-class P(Heads) at {n} bystanders is {p}"
                );
                let gap = p.checked_sub(&ExactProb::frac(1, 3)).map_err(s)?;
                ensure!(
                    gap == ExactProb::frac(2, 3 * (3 * n + 10)) && gap < ExactProb::frac(1, n),
                    "broad-class gap at {n} bystanders is {gap}"
                );
            }

            // One-child-or-two sailor puzzle.
            ensure!(
                sailors_child(false).map_err(s)? == ExactProb::frac(1, 3),
                "P(one child) without the guidebook is not 1/3"
            );
            ensure!(
                sailors_child(true).map_err(s)? == ExactProb::frac(1, 2),
                "P(one child) with the guidebook is not 1/2"
            );

            // Learning the day mid-experiment.
            ensure!(
                told_monday(Stance::Halfer).map_err(s)? == ExactProb::frac(2, 3),
                "halfer's P(Heads) on learning the day is not 2/3"
            );

            // Indexical recruitment update: P(pool of n) = n / 210.
            let p = recruitment_indexical_update(20).map_err(s)?;
            for (i, prob) in p.probs().iter().enumerate() {
                let n = i as u128 + 1;
                ensure!(
                    *prob == ExactProb::frac(n, 210),
                    "indexical P(N={n}) is {prob}, want {n}/210"
                );
            }
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// 2. Sequence-only recruitment update vs exhaustive enumeration
// ---------------------------------------------------------------------------

/// Probability that at least one of `n` subjects, each assigned one of the
/// `2^seq_len` flip sequences uniformly, matches the agent's own sequence.
/// Counted by walking every assignment, not by a closed form.
fn enumerated_match_probability(n: u32, seq_len: u32) -> ExactProb {
    let alphabet: u64 = 1 << seq_len;
    let total = alphabet.pow(n);
    let mut hits: u64 = 0;
    for code in 0..total {
        let mut rest = code;
        let mut matched = false;
        for _ in 0..n {
            if rest % alphabet == 0 {
                matched = true;
            }
            rest /= alphabet;
        }
        if matched {
            hits += 1;
        }
    }
    ExactProb::frac(u128::from(hits), u128::from(total))
}

#[test]
fn sequence_only_update_vs_enumeration() {
    criterion(
        "sequence-only update vs exhaustive enumeration",
        Duration::from_secs(1),
        || {
            let p = recruitment_invalid_update(20, 3).map_err(s)?;
            let p1 = p.prob("N=1").map_err(s)?.to_f64();
            let p20 = p.prob("N=20").map_err(s)?.to_f64();
            ensure!(
                (p1 - 0.0093).abs() < 5e-5,
                "P(N=1) is {p1}, want 0.0093 to two significant digits"
            );
            ensure!(
                (p20 - 0.069).abs() < 5e-4,
                "P(N=20) is {p20}, want 0.069 to two significant digits"
            );

            for pool in 1..=5u32 {
                for seq_len in 1..=3u32 {
                    let likelihoods: Vec<ExactProb> = (1..=pool)
                        .map(|n| enumerated_match_probability(n, seq_len))
                        .collect();
                    let sum = likelihoods
                        .iter()
                        .fold(ExactProb::zero(), |acc, x| &acc + x);
                    let expected: Vec<ExactProb> =
                        likelihoods.iter().map(|l| l / &sum).collect();
                    let actual = recruitment_invalid_update(pool, seq_len).map_err(s)?;
                    ensure!(
                        actual.probs() == expected.as_slice(),
                        "posterior mismatch at pool {pool}, seq_len {seq_len}"
                    );
                }
            }
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// 3. Population-rank odds suite
// ---------------------------------------------------------------------------

#[test]
fn population_rank_odds_suite() {
    criterion(
        "population-rank odds suite",
        Duration::from_secs(5),
        || {
            let textbook = [
                (100_000_000_000u128, ExactProb::frac(1, 2)),
                (100_000_000_000_000u128, ExactProb::frac(1, 2)),
            ];
            let long = "N=100000000000000";
            let short = "N=100000000000";
            let p = doomsday_posterior(&textbook, 60_000_000_000).map_err(s)?;
            let p_long = p.prob(long).map_err(s)?;
            ensure!(
                *p_long == ExactProb::frac(1, 1001),
                "P(long future) is {p_long}, want 1/1001"
            );
            ensure!(
                (p_long.to_f64() - 0.000999001).abs() < 5e-10,
                "P(long future) is {} as a decimal",
                p_long.to_f64()
            );
            ensure!(
                p.odds(long, short).map_err(s)? == ExactProb::frac(1, 1000),
                "odds of the long future are not 1/1000"
            );

            // Doubling the short-branch total (with the rank re-estimated
            // inside it) halves the odds penalty.
            let revised = [
                (200_000_000_000u128, ExactProb::frac(1, 2)),
                (100_000_000_000_000u128, ExactProb::frac(1, 2)),
            ];
            let p = doomsday_posterior(&revised, 160_000_000_000).map_err(s)?;
            ensure!(
                p.odds(long, "N=200000000000").map_err(s)? == ExactProb::frac(1, 500),
                "revised odds of the long future are not 1/500"
            );

            // Count weighting first, rank update second: the two cancel for
            // every finite-support prior.
            let mut rng = RandomSource::new(20_260_816);
            for case in 0..1000 {
                let k = draw(&mut rng, 2, 5) as usize;
                let mut totals = BTreeSet::new();
                while totals.len() < k {
                    totals.insert(1 + u128::from(rng.next_u64()) % 1_000_000_000_000);
                }
                let totals: Vec<u128> = totals.into_iter().collect();
                let weights: Vec<u64> = (0..k).map(|_| draw(&mut rng, 1, 100)).collect();
                let wsum: u64 = weights.iter().sum();
                let prior: Vec<(u128, ExactProb)> = totals
                    .iter()
                    .zip(&weights)
                    .map(|(t, w)| (*t, ExactProb::frac(u128::from(*w), u128::from(wsum))))
                    .collect();
                let rank = 1 + u128::from(rng.next_u64()) % totals[k - 1];
                let reweighted = sia_reweight(&prior).map_err(s)?;
                let doom = doomsday_posterior(&reweighted, rank).map_err(s)?;
                let plain = nodoom_posterior(&prior, rank).map_err(s)?;
                ensure!(
                    doom.probs() == plain.probs(),
                    "cancellation failed on case {case} (rank {rank})"
                );
            }

            // Rank 10^11 against even odds on 10^12 vs 10^16 total people:
            // the self-sampling stage alone shifts odds by exactly 1/10000.
            let expansive = [
                (1_000_000_000_000u128, ExactProb::frac(1, 2)),
                (10_000_000_000_000_000u128, ExactProb::frac(1, 2)),
            ];
            let p = doomsday_posterior(&expansive, 100_000_000_000).map_err(s)?;
            let factor = p
                .stage_odds(STAGE_SSA, "N=10000000000000000", "N=1000000000000")
                .map_err(s)?;
            ensure!(
                factor == ExactProb::frac(1, 10_000),
                "stage odds shift is {factor}, want 1/10000"
            );
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// 4. Reference-class invariance
// ---------------------------------------------------------------------------

#[test]
fn reference_class_invariance_aggregate() {
    criterion(
        "reference-class invariance of the count-weighted rule",
        Duration::from_secs(5),
        || {
            let mut rng = RandomSource::new(90_210);
            let mut bare_rule_differs = 0usize;
            for case in 0..1000 {
                let scenario = random_two_class(&mut rng);
                let narrow = ssa_sia_posterior(&scenario, "narrow").map_err(s)?;
                let broad = ssa_sia_posterior(&scenario, "broad").map_err(s)?;
                ensure!(
                    narrow.as_exact().unwrap().probs() == broad.as_exact().unwrap().probs(),
                    "count-weighted posteriors differ between classes on case {case}"
                );
                let narrow = ssa_posterior(&scenario, "narrow").map_err(s)?;
                let broad = ssa_posterior(&scenario, "broad").map_err(s)?;
                if narrow.as_exact().unwrap().probs() != broad.as_exact().unwrap().probs() {
                    bare_rule_differs += 1;
                }
            }
            ensure!(
                bare_rule_differs >= 950,
                "bare self-sampling differed between classes on only {bare_rule_differs} of 1000 cases"
            );
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// 5. Companion consistency
// ---------------------------------------------------------------------------

#[test]
fn companion_odds_consistency() {
    criterion(
        "companion odds consistency",
        Duration::from_secs(5),
        || {
            let mut rng = RandomSource::new(5050);
            for case in 0..10_000 {
                let xa = u128::from(draw(&mut rng, 1, 1_000_000));
                let ya = u128::from(draw(&mut rng, 1, 1_000_000));
                let xb = u128::from(draw(&mut rng, 1, 1_000_000));
                let yb = u128::from(draw(&mut rng, 1, 1_000_000));
                let counts = CompanionCounts::new(
                    Quantity::integer(xa),
                    Quantity::integer(ya),
                    Quantity::integer(xb),
                    Quantity::integer(yb),
                );
                let x = companion_odds(ObserverType::X, &counts, false).map_err(s)?;
                let y = companion_odds(ObserverType::Y, &counts, false).map_err(s)?;
                ensure!(
                    x == y,
                    "combined-class odds differ between types on case {case}"
                );
                let expected = &ExactProb::frac(xa.min(ya), xb.min(yb))
                    * &ExactProb::frac(xb + yb, xa + ya);
                ensure!(
                    x == Magnitude::from_exact(&expected),
                    "combined-class odds miss the closed form on case {case}"
                );

                // With count weighting, each type's own-class odds reduce to
                // the prior times the matching-count ratio.
                let ratio = Magnitude::from_exact(&ExactProb::frac(xa.min(ya), xb.min(yb)));
                let wx = companion_odds_with_count_weighting(ObserverType::X, &counts)
                    .map_err(s)?;
                let wy = companion_odds_with_count_weighting(ObserverType::Y, &counts)
                    .map_err(s)?;
                ensure!(
                    wx == ratio && wy == ratio,
                    "count-weighted own-class odds miss the min ratio on case {case}"
                );
            }
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// 6. Habitat comparison tables
// ---------------------------------------------------------------------------

type HabitatCells = [(Option<i32>, Option<i32>); 5];

/// Hand-transcribed cumulative odds, as powers of the habitable fraction
/// `f`, for every regime, rule, and class combination: five evidence stages,
/// with a (planet-being, star-being) pair per stage. `None` marks the stages
/// the bare rule leaves blank.
static HABITAT_EXPECTED: [(StarRegime, UpdateRule, MarochnikClass, HabitatCells); 8] = [
    (
        StarRegime::FewStarBeings,
        UpdateRule::SsaOnly,
        MarochnikClass::OwnType,
        [
            (Some(0), Some(0)),
            (None, None),
            (Some(0), Some(0)),
            (Some(0), Some(1)),
            (Some(-1), Some(0)),
        ],
    ),
    (
        StarRegime::FewStarBeings,
        UpdateRule::SsaSia,
        MarochnikClass::OwnType,
        [
            (Some(0), Some(0)),
            (Some(1), Some(0)),
            (Some(1), Some(0)),
            (Some(1), Some(1)),
            (Some(0), Some(0)),
        ],
    ),
    (
        StarRegime::FewStarBeings,
        UpdateRule::SsaOnly,
        MarochnikClass::Combined,
        [
            (Some(0), Some(0)),
            (None, None),
            (Some(0), Some(-1)),
            (Some(0), Some(0)),
            (Some(-1), Some(-1)),
        ],
    ),
    (
        StarRegime::FewStarBeings,
        UpdateRule::SsaSia,
        MarochnikClass::Combined,
        [
            (Some(0), Some(0)),
            (Some(1), Some(1)),
            (Some(1), Some(0)),
            (Some(1), Some(1)),
            (Some(0), Some(0)),
        ],
    ),
    (
        StarRegime::ManyStarBeings,
        UpdateRule::SsaOnly,
        MarochnikClass::OwnType,
        [
            (Some(0), Some(0)),
            (None, None),
            (Some(0), Some(0)),
            (Some(0), Some(1)),
            (Some(-1), Some(0)),
        ],
    ),
    (
        StarRegime::ManyStarBeings,
        UpdateRule::SsaSia,
        MarochnikClass::OwnType,
        [
            (Some(0), Some(0)),
            (Some(1), Some(0)),
            (Some(1), Some(0)),
            (Some(1), Some(1)),
            (Some(0), Some(0)),
        ],
    ),
    (
        StarRegime::ManyStarBeings,
        UpdateRule::SsaOnly,
        MarochnikClass::Combined,
        [
            (Some(0), Some(0)),
            (None, None),
            (Some(1), Some(0)),
            (Some(1), Some(1)),
            (Some(0), Some(0)),
        ],
    ),
    (
        StarRegime::ManyStarBeings,
        UpdateRule::SsaSia,
        MarochnikClass::Combined,
        [
            (Some(0), Some(0)),
            (Some(0), Some(0)),
            (Some(1), Some(0)),
            (Some(1), Some(1)),
            (Some(0), Some(0)),
        ],
    ),
];

#[test]
fn habitat_comparison_tables() {
    criterion(
        "habitat comparison tables",
        Duration::from_secs(1),
        || {
            let f = 0.37;
            let mut cells = 0usize;
            for (regime, rule, class, expected) in &HABITAT_EXPECTED {
                let rows = marochnik_table(*regime, *rule, *class, f).map_err(s)?;
                ensure!(
                    rows.len() == 5,
                    "{regime:?}/{rule:?}/{class:?}: {} rows",
                    rows.len()
                );
                for (row, (planet, star)) in rows.iter().zip(expected) {
                    for (got, want) in [(row.planet, planet), (row.star, star)] {
                        match (got, want) {
                            (Some(fp), Some(k)) => {
                                ensure!(
                                    fp == FPower(*k),
                                    "{regime:?}/{rule:?}/{class:?}, {:?}: {fp} vs f^{k}",
                                    row.label
                                );
                                ensure!(
                                    (-1..=1).contains(k),
                                    "cell outside the 1 / f / 1-over-f alphabet"
                                );
                                let val = fp.eval(f);
                                ensure!(
                                    (val - f.powi(*k)).abs() < 1e-15,
                                    "numeric evaluation drifted: {val}"
                                );
                                cells += 1;
                            }
                            (None, None) => {}
                            _ => {
                                return Err(format!(
                                    "{regime:?}/{rule:?}/{class:?}, {:?}: blank/filled mismatch",
                                    row.label
                                ))
                            }
                        }
                    }
                }
            }
            ensure!(cells == 72, "checked {cells} filled cells, expected 72");
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// 7. Landscape and duplicate-threshold magnitudes
// ---------------------------------------------------------------------------

#[test]
fn landscape_and_duplicate_magnitudes() {
    criterion(
        "landscape and duplicate-threshold magnitudes",
        Duration::from_secs(1),
        || {
            let valleys = Magnitude::pow10(500);
            let life = Magnitude::pow10(10);
            let memory = Magnitude::pow10(6);
            let odds = |comparison, rule| {
                landscape_odds(valleys, life, memory, comparison, rule)
                    .map(|m| m.log10())
                    .map_err(s)
            };
            ensure!(
                odds(LandscapeComparison::KnownCompatibleLaw, UpdateRule::Fnc)? == -494.0,
                "full detail vs a known-compatible law is off"
            );
            ensure!(
                odds(LandscapeComparison::KnownCompatibleLaw, UpdateRule::SsaOnly)? == -4.0,
                "bare self-sampling vs a known-compatible law is off"
            );
            ensure!(
                odds(LandscapeComparison::LifeConfinedLaw, UpdateRule::Fnc)? == -490.0,
                "full detail vs a life-confined law is off"
            );
            ensure!(
                odds(LandscapeComparison::UnknownUniformLaw, UpdateRule::SsaOnly)? == 490.0,
                "bare self-sampling vs an unknown uniform law is off"
            );

            let threshold = duplicate_threshold(
                300_000,
                100_000_000_000,
                Magnitude::pow10(22),
                Magnitude::pow10(10),
                Magnitude::pow10(10),
            )
            .map_err(s)?;
            let exponent = threshold.size_factor().log10();
            let want = 30_000_000_000.0 - 42.0;
            ensure!(
                (exponent - want).abs() <= 1e-9,
                "size-factor exponent is {exponent}, want {want}"
            );
            ensure!(
                threshold.memory_term_dominates,
                "memory diversity should dominate genome diversity"
            );
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// 8. Existence-factor closed form and prior intervals
// ---------------------------------------------------------------------------

#[test]
fn existence_factor_closed_form_and_prior_intervals() {
    criterion(
        "existence-factor closed form and prior intervals",
        Duration::from_secs(1),
        || {
            let prior = FermiPrior::default();
            let p1 = analytic_factor_posterior(prior, FactorSpec::default_for(FactorParent::P))
                .map_err(s)?;
            ensure!(
                p1.sample_count == 0 && p1.se_mean10 == 0.0,
                "closed form should not report sampling error"
            );
            let value = 10f64.powf(p1.mean10);
            ensure!(
                (value - 0.1236).abs() < 5e-5,
                "10^mean10 of the p sub-factor is {value}, want 0.1236"
            );
            let f1 = analytic_factor_posterior(prior, FactorSpec::default_for(FactorParent::F))
                .map_err(s)?;
            ensure!(
                f1.mean10 == -1.0,
                "the f sub-factor's mean10 moved without interference evidence"
            );

            let (lo, hi) = Gaussian10 {
                mean10: -1.0,
                sd10: 0.2,
            }
            .central_interval(0.95)
            .map_err(s)?;
            ensure!(
                (lo - 0.041).abs() <= 5e-4 && (hi - 0.247).abs() <= 5e-4,
                "95% prior interval for a sub-factor is ({lo:.4}, {hi:.4}), want (0.041, 0.247)"
            );

            let span = |sd10: f64| -> Result<f64, String> {
                let (lo, hi) = Gaussian10 { mean10: 0.0, sd10 }
                    .central_interval(0.95)
                    .map_err(s)?;
                Ok((hi / lo).log10().round())
            };
            ensure!(
                span(prior.sd10_p())? == 5.0,
                "the p coordinate's 95% interval should span five decades"
            );
            ensure!(
                span(prior.sd10_f())? == 3.0,
                "the f coordinate's 95% interval should span three decades"
            );
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// 9. Sampled posterior means and histogram
// ---------------------------------------------------------------------------

/// Unnormalized posterior density of `(log10 f, log10 p)`: the Gaussian
/// prior, the origination weight `p`, and the no-interference weight
/// `exp(-f*p*V)`.
fn posterior_density(xf: f64, xp: f64, prior: FermiPrior, v: f64) -> f64 {
    let zf = (xf - prior.mean10_f()) / prior.sd10_f();
    let zp = (xp - prior.mean10_p()) / prior.sd10_p();
    let ln10 = std::f64::consts::LN_10;
    (-0.5 * (zf * zf + zp * zp) + xp * ln10 - 10f64.powf(xf + xp) * v).exp()
}

/// Total variation distance between the accepted-sample histogram and a
/// midpoint-refined grid quadrature of the posterior density. The main grid
/// is 60x60 over four prior standard deviations each way; everything
/// outside, up to twice that extent, is lumped into one overflow bucket.
fn histogram_total_variation(set: &FermiSampleSet, prior: FermiPrior, v: f64) -> f64 {
    const CELLS: usize = 60;
    let f_half = 4.0 * prior.sd10_f();
    let p_half = 4.0 * prior.sd10_p();
    let f_lo = prior.mean10_f() - f_half;
    let p_lo = prior.mean10_p() - p_half;
    let df = 2.0 * f_half / CELLS as f64;
    let dp = 2.0 * p_half / CELLS as f64;
    let overflow = CELLS * CELLS;

    let mut sample_mass = vec![0.0f64; CELLS * CELLS + 1];
    for &(xf, xp) in set.points() {
        let i = ((xf - f_lo) / df).floor();
        let j = ((xp - p_lo) / dp).floor();
        let bucket = if (0.0..CELLS as f64).contains(&i) && (0.0..CELLS as f64).contains(&j) {
            i as usize * CELLS + j as usize
        } else {
            overflow
        };
        sample_mass[bucket] += 1.0;
    }
    let n = set.points().len() as f64;
    for m in &mut sample_mass {
        *m /= n;
    }

    // Quadrature over a doubled grid of the same cell size; cells beyond the
    // main grid feed the overflow bucket. Each cell is averaged over a 3x3
    // midpoint stencil to suppress discretization bias.
    let mut grid_mass = vec![0.0f64; CELLS * CELLS + 1];
    let ext = CELLS / 2;
    for ei in 0..(2 * CELLS) {
        for ej in 0..(2 * CELLS) {
            let f0 = f_lo - ext as f64 * df + ei as f64 * df;
            let p0 = p_lo - ext as f64 * dp + ej as f64 * dp;
            let mut mass = 0.0;
            for a in 0..3 {
                for b in 0..3 {
                    let xf = f0 + (a as f64 + 0.5) * df / 3.0;
                    let xp = p0 + (b as f64 + 0.5) * dp / 3.0;
                    mass += posterior_density(xf, xp, prior, v);
                }
            }
            let bucket = if (ext..ext + CELLS).contains(&ei) && (ext..ext + CELLS).contains(&ej)
            {
                (ei - ext) * CELLS + (ej - ext)
            } else {
                overflow
            };
            grid_mass[bucket] += mass;
        }
    }
    let total: f64 = grid_mass.iter().sum();
    for m in &mut grid_mass {
        *m /= total;
    }

    0.5 * sample_mass
        .iter()
        .zip(&grid_mass)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
}

#[test]
fn sampled_posterior_means_and_histogram() {
    criterion(
        "sampled posterior means and histogram",
        Duration::from_secs(60),
        || {
            let prior = FermiPrior::default();
            let cases: [(f64, u64, u64, f64, f64); 3] = [
                (0.1, 200_000, 7, 0.120, 0.097),
                (1.0, 1_000_000, 2025, 0.116, 0.093),
                (10.0, 200_000, 13, 0.111, 0.089),
            ];
            let mut interference_one = None;
            for (v, n, seed, p_want, f_want) in cases {
                let params = FermiParams::new(v).map_err(s)?;
                let set = sample_posterior(prior, params, n, seed).map_err(s)?;
                ensure!(
                    set.accepted_count() >= 200_000,
                    "V={v}: only {} accepted samples",
                    set.accepted_count()
                );
                let p1 = factor_posterior(prior, FactorSpec::default_for(FactorParent::P), &set)
                    .map_err(s)?;
                let f1 = factor_posterior(prior, FactorSpec::default_for(FactorParent::F), &set)
                    .map_err(s)?;
                let tol = |se: f64| (3.0 * se).max(0.005);
                ensure!(
                    (p1.mean_value - p_want).abs() <= tol(p1.se_mean_value),
                    "V={v}: p sub-factor mean {} vs {p_want}",
                    p1.mean_value
                );
                ensure!(
                    (f1.mean_value - f_want).abs() <= tol(f1.se_mean_value),
                    "V={v}: f sub-factor mean {} vs {f_want}",
                    f1.mean_value
                );
                if v == 1.0 {
                    interference_one = Some(set);
                }
            }

            let set = interference_one.expect("the V=1 sample set is kept for the histogram");
            let tv = histogram_total_variation(&set, prior, 1.0);
            ensure!(
                tv <= 0.02,
                "histogram is {tv:.4} from the quadrature density, budget 0.02"
            );
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// 10. Engine contracts under random inputs
// ---------------------------------------------------------------------------

#[test]
fn engine_contracts_under_random_inputs() {
    criterion(
        "engine contracts under random inputs",
        Duration::from_secs(30),
        || {
            // Rare-detail rule tracks the count-weighted rule within
            // 2 * max(epsilon * class count), relative.
            let mut rng = RandomSource::new(424_242);
            for case in 0..200 {
                let (scenario, bound) = random_matched(&mut rng);
                let fine = fnc_posterior(&scenario, "minds").map_err(s)?;
                let coarse = ssa_sia_posterior(&scenario, "minds").map_err(s)?;
                let fine = fine.as_exact().unwrap();
                let coarse = coarse.as_exact().unwrap();
                for (pf, ps) in fine.probs().iter().zip(coarse.probs()) {
                    let diff = if pf >= ps {
                        pf.checked_sub(ps).map_err(s)?
                    } else {
                        ps.checked_sub(pf).map_err(s)?
                    };
                    ensure!(
                        diff <= &bound * ps,
                        "case {case}: gap {diff} above bound {bound} times {ps}"
                    );
                }
            }

            // Ledger replay is bit-exact and posteriors normalize, in both
            // numeric domains, under every rule.
            for case in 0..100 {
                let scenario = random_two_class(&mut rng);
                for rule in [UpdateRule::SsaOnly, UpdateRule::SsaSia, UpdateRule::Fnc] {
                    let p = posterior_under(rule, &scenario, "broad").map_err(s)?;
                    match &p {
                        AnyPosterior::Exact(p) => {
                            let replayed = p.replay().map_err(s)?;
                            ensure!(
                                replayed.as_slice() == p.probs(),
                                "case {case}, {rule:?}: replay drifted"
                            );
                            let sum =
                                p.probs().iter().fold(ExactProb::zero(), |acc, x| &acc + x);
                            ensure!(
                                sum == ExactProb::one(),
                                "case {case}, {rule:?}: probabilities sum to {sum}"
                            );
                        }
                        AnyPosterior::Log(p) => {
                            let replayed = p.replay().map_err(s)?;
                            ensure!(
                                replayed.as_slice() == p.probs(),
                                "case {case}, {rule:?}: log-domain replay drifted"
                            );
                            let sum: f64 = p.probs().iter().map(|m| m.value()).sum();
                            ensure!(
                                (sum - 1.0).abs() <= 1e-12,
                                "case {case}, {rule:?}: probabilities sum to {sum}"
                            );
                        }
                    }
                }
            }

            // The sampler is a pure function of its arguments.
            let params = FermiParams::new(1.0).map_err(s)?;
            let prior = FermiPrior::default();
            let a = sample_posterior(prior, params, 3000, 17).map_err(s)?;
            let b = sample_posterior(prior, params, 3000, 17).map_err(s)?;
            ensure!(a == b, "identical sampler arguments disagreed");

            // Sub-factor conclusions ignore how the prior's product mean is
            // split between the coordinates.
            let factor = FactorSpec::default_for(FactorParent::P);
            let baseline_set = sample_posterior(prior, params, 10_000, 61).map_err(s)?;
            let baseline = factor_posterior(prior, factor, &baseline_set).map_err(s)?;
            for (i, &split) in [-2.0f64, 2.0].iter().enumerate() {
                let shifted_prior = FermiPrior::new(1.25, 0.75, split).map_err(s)?;
                let set =
                    sample_posterior(shifted_prior, params, 10_000, 62 + i as u64).map_err(s)?;
                let shifted = factor_posterior(shifted_prior, factor, &set).map_err(s)?;
                let band = 3.5
                    * (baseline.se_mean_value * baseline.se_mean_value
                        + shifted.se_mean_value * shifted.se_mean_value)
                        .sqrt();
                ensure!(
                    (shifted.mean_value - baseline.mean_value).abs() < band,
                    "split {split}: factor mean {} vs {}",
                    shifted.mean_value,
                    baseline.mean_value
                );
            }
            Ok(())
        },
    );
}
