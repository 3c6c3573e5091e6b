//! Named builders for the classic observer-selection puzzles.
//!
//! Each function here wires a puzzle's premises into the inference core and
//! returns the engine's answer, so the catalog itself contains no private
//! probability arithmetic. The discrete puzzles all run in the exact domain
//! and their answers are exact rationals; the astronomical ones run in log10
//! magnitudes.
//!
//! The [`registry`] submodule wraps these builders as runnable entries with
//! declared parameters and pinned expected results, which the command line
//! exposes as `list`, `run`, and `check`.

mod registry;

pub use registry::{
    catalog, find_entry, run_entry, CatalogEntry, CheckOutcome, EntryOutput, ParamSpec, RunArgs,
};

use crate::infer::{
    fnc_posterior, ssa_posterior, ssa_sia_posterior, posterior_under, AnyPosterior, InferError,
    Posterior, Quantity, Scenario, UpdateRule, STAGE_SIA,
};
use crate::num::{mag_add, ExactProb, Magnitude};
use std::fmt;

/// Note attached when the full-detail rule is evaluated through the counting
/// engine rather than with an explicit match probability.
const FNC_LIMIT_NOTE: &str = "full-detail conditioning evaluated in the vanishing-match-probability \
     limit, where the likelihood 1-(1-eps)^n tends to eps*n and the update \
     becomes proportional to the count of matching observers";

/// Runs `rule` on a discrete scenario that supplies observer counts but no
/// explicit match probability. The full-detail rule is evaluated in its
/// vanishing-match-probability limit, where it coincides with the
/// count-proportional update and the answer stays an exact rational; the
/// returned posterior carries a note saying so.
fn run_counting_rule(
    rule: UpdateRule,
    scenario: &Scenario,
    class: &str,
) -> Result<AnyPosterior, InferError> {
    match rule {
        UpdateRule::Fnc => Ok(with_any_note(
            ssa_sia_posterior(scenario, class)?,
            FNC_LIMIT_NOTE,
        )),
        _ => posterior_under(rule, scenario, class),
    }
}

fn with_any_note(posterior: AnyPosterior, note: &str) -> AnyPosterior {
    match posterior {
        AnyPosterior::Exact(p) => AnyPosterior::Exact(p.with_note(note)),
        AnyPosterior::Log(p) => AnyPosterior::Log(p.with_note(note)),
    }
}

/// Extracts an exact probability from a posterior that is known to run in
/// the exact domain (every discrete catalog puzzle does).
fn exact_prob(posterior: &AnyPosterior, hypothesis: &str) -> Result<ExactProb, InferError> {
    Ok(posterior
        .as_exact()
        .expect("discrete catalog scenarios run in the exact domain")
        .prob(hypothesis)?
        .clone())
}

/// P(Heads) for the two-branch sleep experiment: a fair coin sends the
/// subject into `heads_wakenings` indistinguishable wakenings on Heads and
/// `tails_wakenings` on Tails, with amnesia in between.
///
/// The count-proportional rule (and the full-detail rule in its
/// vanishing-match limit) weights each branch by its wakening count, giving
/// h/(h+t); bare self-sampling over the subject's own wakenings leaves the
/// prior 1/2 untouched.
pub fn sleeping_beauty(
    heads_wakenings: u64,
    tails_wakenings: u64,
    rule: UpdateRule,
) -> Result<ExactProb, InferError> {
    let posterior = sleeping_beauty_posterior(heads_wakenings, tails_wakenings, rule)?;
    exact_prob(&posterior, "Heads")
}

/// The posterior behind [`sleeping_beauty`], with its full odds ledger.
pub fn sleeping_beauty_posterior(
    heads_wakenings: u64,
    tails_wakenings: u64,
    rule: UpdateRule,
) -> Result<AnyPosterior, InferError> {
    if heads_wakenings == 0 || tails_wakenings == 0 {
        return Err(InferError::BadParameter(
            "wakening counts must be at least 1 on both branches".to_string(),
        ));
    }
    let counts = [
        Quantity::integer(u128::from(heads_wakenings)),
        Quantity::integer(u128::from(tails_wakenings)),
    ];
    let scenario = Scenario::builder("sleeping-beauty")
        .hypothesis("Heads", Quantity::frac(1, 2))
        .hypothesis("Tails", Quantity::frac(1, 2))
        .class("own-wakenings", counts.clone())
        .evidence_counts(counts)
        .finish()?;
    run_counting_rule(rule, &scenario, "own-wakenings")
}

/// Whose epistemic situation [`beauty_and_prince`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Viewpoint {
    /// The sleeper, awake and wondering about the coin.
    Beauty,
    /// The always-wakened observer next door, before looking out the window.
    PrincePreObservation,
    /// The same neighbour after seeing that the sleeper is awake today.
    PrinceSeesBeauty,
}

/// Reference class used by the self-sampling stage in
/// [`beauty_and_prince`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WakeningClass {
    /// Only the viewpoint observer's own wakenings.
    OwnOnly,
    /// The sleeper's and the neighbour's wakenings pooled together.
    Both,
    /// The pooled wakenings plus the waking days of `n` bystanders whose
    /// lives do not depend on the coin (one interview-length day each).
    AllHumans(u64),
}

/// P(Heads) in the two-observer variant of the sleep experiment.
///
/// The sleeper is wakened once on Heads and twice on Tails. Her neighbour
/// is wakened on both days regardless of the coin, and can check whether
/// the sleeper is awake: she is certainly awake on Monday but on Tuesday
/// only if the coin landed Tails, so the neighbour's glimpse of her awake
/// carries likelihood 1/2 under Heads and 1 under Tails.
///
/// Under bare self-sampling the answer depends on the reference class: the
/// sleeper gets 2/5 in the pooled class, and the neighbour who sees her
/// awake moves from 4/7 to 2/5, matching her. Widening the class with
/// bystanders slides the pooled answers toward the count-proportional 1/3,
/// which itself is class-invariant.
pub fn beauty_and_prince(
    rule: UpdateRule,
    class: WakeningClass,
    viewpoint: Viewpoint,
) -> Result<ExactProb, InferError> {
    Ok(beauty_and_prince_posterior(rule, class, viewpoint)?
        .prob("Heads")?
        .clone())
}

/// The posterior behind [`beauty_and_prince`], with its full odds ledger.
pub fn beauty_and_prince_posterior(
    rule: UpdateRule,
    class: WakeningClass,
    viewpoint: Viewpoint,
) -> Result<Posterior<ExactProb>, InferError> {
    // Wakenings of the viewpoint observer under (Heads, Tails).
    let own: (u128, u128) = match viewpoint {
        Viewpoint::Beauty => (1, 2),
        Viewpoint::PrincePreObservation | Viewpoint::PrinceSeesBeauty => (2, 2),
    };
    // Wakenings in the chosen reference class. Sleeper plus neighbour give
    // 1+2=3 on Heads and 2+2=4 on Tails; each bystander adds one waking day
    // to both branches.
    let class_counts: (u128, u128) = match class {
        WakeningClass::OwnOnly => own,
        WakeningClass::Both => (3, 4),
        WakeningClass::AllHumans(n) => (u128::from(n) + 3, u128::from(n) + 4),
    };
    let scenario = Scenario::builder("beauty-and-prince")
        .hypothesis("Heads", Quantity::frac(1, 2))
        .hypothesis("Tails", Quantity::frac(1, 2))
        .class(
            "wakenings",
            [
                Quantity::integer(class_counts.0),
                Quantity::integer(class_counts.1),
            ],
        )
        .evidence_counts([Quantity::integer(own.0), Quantity::integer(own.1)])
        .finish()?;
    let posterior = run_counting_rule(rule, &scenario, "wakenings")?
        .as_exact()
        .expect("integer-count scenario runs in the exact domain")
        .clone();
    match viewpoint {
        Viewpoint::PrinceSeesBeauty => posterior.apply_stage(
            "sees-sleeper-awake",
            vec![ExactProb::frac(1, 2), ExactProb::one()],
        ),
        _ => Ok(posterior),
    }
}

/// Which premise the sleeper reasons from in [`told_monday`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stance {
    /// Waking up carries no news, so P(Heads) is still 1/2.
    Halfer,
    /// Wakenings are weighted by count, so P(Heads) is 1/3.
    Thirder,
}

/// P(Heads) after the awake sleeper is told that today is Monday.
///
/// The current wakening is certainly Monday under Heads but Monday only
/// with probability 1/2 under Tails, so the news shifts the odds toward
/// Heads: the halfer's 1/2 becomes 2/3, while the thirder's 1/3 returns to
/// the even 1/2 a fair coin yet to be tossed should have.
pub fn told_monday(stance: Stance) -> Result<ExactProb, InferError> {
    Ok(told_monday_posterior(stance)?.prob("Heads")?.clone())
}

/// The posterior behind [`told_monday`], with its full odds ledger.
pub fn told_monday_posterior(stance: Stance) -> Result<Posterior<ExactProb>, InferError> {
    let heads = match stance {
        Stance::Halfer => ExactProb::frac(1, 2),
        Stance::Thirder => ExactProb::frac(1, 3),
    };
    let tails = heads.complement()?;
    let posterior = Posterior::from_prior(
        vec!["Heads".to_string(), "Tails".to_string()],
        vec![heads, tails],
    )?;
    posterior.apply_stage(
        "told-it-is-monday",
        vec![ExactProb::one(), ExactProb::frac(1, 2)],
    )
}

/// P(Heads) for the sailor's child puzzle.
///
/// A sailor tossed a coin: Heads meant fathering one child, Tails one child
/// in each of two cities, with a guidebook's first-listed city hosting the
/// only child on Heads. You are one of his children, born in one of those
/// cities. Not knowing the guidebook, a child in your city was certain
/// under Tails but only an even chance under Heads, and the
/// count-proportional update gives P(Heads) = 1/3. A child who knows their
/// own city is listed first finds both branches equally compatible and
/// stays at 1/2.
pub fn sailors_child(knows_guidebook: bool) -> Result<ExactProb, InferError> {
    let posterior = sailors_child_posterior(knows_guidebook)?;
    exact_prob(&posterior, "Heads")
}

/// The posterior behind [`sailors_child`], with its full odds ledger.
pub fn sailors_child_posterior(knows_guidebook: bool) -> Result<AnyPosterior, InferError> {
    // Expected children of the sailor in your own city under (Heads, Tails).
    let own_city_heads = if knows_guidebook {
        Quantity::integer(1)
    } else {
        Quantity::frac(1, 2)
    };
    let scenario = Scenario::builder("sailors-child")
        .hypothesis("Heads", Quantity::frac(1, 2))
        .hypothesis("Tails", Quantity::frac(1, 2))
        .class("children", [Quantity::integer(1), Quantity::integer(2)])
        .evidence_counts([own_city_heads, Quantity::integer(1)])
        .finish()?;
    ssa_sia_posterior(&scenario, "children")
}

/// Relative abundance of the two observer kinds in [`marochnik_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarRegime {
    /// Star-dwelling observers are vastly outnumbered by planet-dwellers.
    FewStarBeings,
    /// Star-dwelling observers vastly outnumber planet-dwellers.
    ManyStarBeings,
}

/// Reference class used by the observers in [`marochnik_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarochnikClass {
    /// Each observer kind samples only from its own kind.
    OwnType,
    /// Both kinds pooled into one class.
    Combined,
}

/// A symbolic power of the habitable-fraction parameter `f`.
///
/// Every cell of the habitat-comparison ledger is 1, `f`, or `1/f`; keeping
/// cells symbolic preserves that structure, with [`FPower::eval`] available
/// when a number is wanted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FPower(pub i32);

impl FPower {
    /// Evaluates the cell at a concrete habitable fraction.
    pub fn eval(self, f: f64) -> f64 {
        f.powi(self.0)
    }
}

impl fmt::Display for FPower {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => out.write_str("1"),
            1 => out.write_str("f"),
            -1 => out.write_str("1/f"),
            k if k > 0 => write!(out, "f^{k}"),
            k => write!(out, "1/f^{}", -k),
        }
    }
}

/// One cumulative row of the habitat-comparison ledger: the odds in favour
/// of the restricted-habitat theory after the evidence named by `label`,
/// for a planet-dwelling and a star-dwelling observer. `None` marks a
/// stage the chosen rule does not perform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MarochnikRow {
    pub label: &'static str,
    pub planet: Option<FPower>,
    pub star: Option<FPower>,
}

/// Row labels of the habitat-comparison ledger, in order.
const MAROCHNIK_LABELS: [&str; 5] = [
    "prior from ordinary evidence",
    "after the observer-count stage",
    "after the self-sampling stage",
    "after companions are known to exist",
    "after the home star's orbit is known",
];

/// The stage-by-stage odds ledger for a theory that confines habitable
/// planets to a special band of the galaxy, against one that allows them
/// everywhere.
///
/// Life-bearing planets form in a fraction `f` of star systems under the
/// restricted theory. Two observer kinds weigh the same two theories: beings
/// on planets, whose numbers shrink by `f` when habitats are restricted,
/// and beings inside stars, unaffected by either theory. Each row gives the
/// cumulative odds in favour of the restricted theory as a power of `f`,
/// starting from even prior odds and folding in, one at a time: the
/// observer-count stage, the self-sampling stage over `class`, the
/// discovery that the other kind of being exists, and the discovery that
/// the home star orbits inside the special band.
///
/// Only the bare self-sampling and count-weighted rules are tabulated; the
/// full-detail rule needs per-observer match probabilities the setup does
/// not supply.
pub fn marochnik_table(
    regime: StarRegime,
    rule: UpdateRule,
    class: MarochnikClass,
    f: f64,
) -> Result<Vec<MarochnikRow>, InferError> {
    if rule == UpdateRule::Fnc {
        return Err(InferError::BadParameter(
            "the habitat comparison is tabulated for the ssa and ssa+sia rules only".to_string(),
        ));
    }
    if !(f.is_finite() && f > 0.0 && f <= 1.0) {
        return Err(InferError::BadParameter(format!(
            "habitable fraction f must be in (0, 1], got {f}"
        )));
    }

    // Per-stage odds shifts as (planet, star) powers of f multiplying the
    // odds in favour of the restricted theory.
    //
    // Observer-count stage: proportional to the class count ratio between
    // the theories. An own-kind planet class shrinks by f under the
    // restricted theory; an own-kind star class is unaffected; a pooled
    // class tracks whichever kind dominates.
    let sia: Option<(i32, i32)> = match (rule, class, regime) {
        (UpdateRule::SsaOnly, _, _) => None,
        (_, MarochnikClass::OwnType, _) => Some((1, 0)),
        (_, MarochnikClass::Combined, StarRegime::FewStarBeings) => Some((1, 1)),
        (_, MarochnikClass::Combined, StarRegime::ManyStarBeings) => Some((0, 0)),
    };
    // Self-sampling stage: the chance that a random class member shares the
    // observer's situation. Within an own-kind class that chance is 1 on
    // both theories; in a pooled class it is the observer's kind's share of
    // the pool, which changes with the theory only for the minority kind.
    let ssa: (i32, i32) = match (class, regime) {
        (MarochnikClass::OwnType, _) => (0, 0),
        (MarochnikClass::Combined, StarRegime::FewStarBeings) => (0, -1),
        (MarochnikClass::Combined, StarRegime::ManyStarBeings) => (1, 0),
    };
    // Star-beings learn planet-dwellers exist near their own star, an
    // observation with probability f under the restricted theory (their
    // star is not yet known to sit in the special band) and 1 otherwise.
    // Planet-dwellers learn star-beings exist, which both theories predict
    // alike.
    let companions: (i32, i32) = (0, 1);
    // Both kinds then learn the home star orbits inside the special band:
    // certain under the restricted theory, probability f otherwise.
    let sun: (i32, i32) = (-1, -1);

    let mut planet = 0;
    let mut star = 0;
    let mut rows = Vec::with_capacity(5);
    rows.push(MarochnikRow {
        label: MAROCHNIK_LABELS[0],
        planet: Some(FPower(0)),
        star: Some(FPower(0)),
    });
    match sia {
        Some((dp, ds)) => {
            planet += dp;
            star += ds;
            rows.push(MarochnikRow {
                label: MAROCHNIK_LABELS[1],
                planet: Some(FPower(planet)),
                star: Some(FPower(star)),
            });
        }
        None => rows.push(MarochnikRow {
            label: MAROCHNIK_LABELS[1],
            planet: None,
            star: None,
        }),
    }
    for (label, (dp, ds)) in MAROCHNIK_LABELS[2..].iter().zip([ssa, companions, sun]) {
        planet += dp;
        star += ds;
        rows.push(MarochnikRow {
            label,
            planet: Some(FPower(planet)),
            star: Some(FPower(star)),
        });
    }
    Ok(rows)
}

/// Which update (or update component) [`bacteria_odds`] applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BacteriaUpdate {
    /// The observer-count reweighting alone, before self-sampling.
    SiaAlone,
    /// Bare self-sampling without the count reweighting.
    SsaMinusSia,
    /// Both stages together; they cancel exactly.
    SsaPlusSia,
    /// Full-detail conditioning: microbes cannot hold your memories, so the
    /// count of observers matching your evidence is the same either way.
    Fnc,
}

/// Odds multiplier for the theory that microbes count as observers, given
/// `ratio` microbes per human-like observer.
///
/// Counting microbes inflates the observer class enormously, so the
/// count-reweighting stage alone multiplies the theory's odds by about
/// `ratio`, and bare self-sampling alone divides by the same amount (you
/// would almost surely have been a microbe). Applied together the two
/// stages cancel, and full-detail conditioning likewise leaves the odds at
/// exactly 1: nothing you observe depends on whether microbes are counted.
pub fn bacteria_odds(update: BacteriaUpdate, ratio: Magnitude) -> Result<Magnitude, InferError> {
    if ratio.is_zero() {
        return Err(InferError::BadParameter(
            "microbe-to-human ratio must be positive".to_string(),
        ));
    }
    match update {
        BacteriaUpdate::Fnc => {
            // Observers able to share your memories are the human-like ones
            // on both theories; any common per-observer match probability
            // inside the guarded regime gives the same (even) odds.
            let scenario = Scenario::builder("microbes-as-observers")
                .hypothesis("Counted", Quantity::frac(1, 2))
                .hypothesis("NotCounted", Quantity::frac(1, 2))
                .class(
                    "memory-capable",
                    [Quantity::integer(1), Quantity::integer(1)],
                )
                .evidence_epsilon([Quantity::frac(1, 1_000_000), Quantity::frac(1, 1_000_000)])
                .finish()?;
            let posterior = fnc_posterior(&scenario, "memory-capable")?;
            let odds = posterior
                .as_exact()
                .expect("unit counts with exact epsilon run in the exact domain")
                .odds("Counted", "NotCounted")?;
            Ok(Magnitude::from_exact(&odds))
        }
        _ => {
            // One unit of human-like observers either way; counting microbes
            // adds `ratio` more class members without adding anyone who
            // shares your evidence.
            let scenario = Scenario::builder("microbes-as-observers")
                .hypothesis("Counted", Quantity::frac(1, 2))
                .hypothesis("NotCounted", Quantity::frac(1, 2))
                .class(
                    "observers",
                    [
                        Quantity::Log(mag_add(Magnitude::ONE, ratio)),
                        Quantity::integer(1),
                    ],
                )
                .evidence_counts([Quantity::integer(1), Quantity::integer(1)])
                .finish()?;
            let posterior = match update {
                BacteriaUpdate::SsaMinusSia => ssa_posterior(&scenario, "observers")?,
                _ => ssa_sia_posterior(&scenario, "observers")?,
            };
            let posterior = posterior
                .as_log()
                .expect("astronomical ratio runs in the log domain");
            match update {
                BacteriaUpdate::SiaAlone => {
                    posterior.stage_odds(STAGE_SIA, "Counted", "NotCounted")
                }
                _ => posterior.odds("Counted", "NotCounted"),
            }
        }
    }
}

/// Exponent bookkeeping for the duplicate-observer threshold: how much
/// larger than the observed universe a uniformly populated cosmos must be
/// before another observer with your exact memories is likely to exist.
#[derive(Debug, Clone, PartialEq)]
pub struct DuplicateThreshold {
    /// log10 of the number of distinct memory states, rounded via the
    /// schoolbook 2^10 = 10^3: `3 * bits / 10`.
    pub memory_log10_rounded: f64,
    /// The same exponent with log10(2) kept in full precision.
    pub memory_log10_precise: f64,
    /// log10 of the number of distinct genomes (4 choices per variable
    /// site), rounded the same way: `3 * sites / 5`.
    pub genome_log10_rounded: f64,
    /// The genome exponent with log10(4) kept in full precision.
    pub genome_log10_precise: f64,
    /// log10 of the number of observers in the observed universe:
    /// planets x observers per planet x generations.
    pub observer_log10: f64,
    /// Memory diversity exceeds genome diversity, so memory states alone
    /// set the threshold.
    pub memory_term_dominates: bool,
    /// The threshold is at most 1: duplicates are already likely without
    /// enlarging the universe.
    pub factor_at_most_one: bool,
}

impl DuplicateThreshold {
    /// The headline size factor, 10^(memory exponent - observer exponent),
    /// under the schoolbook rounding.
    pub fn size_factor(&self) -> Magnitude {
        Magnitude::from_log10(self.memory_log10_rounded - self.observer_log10)
    }

    /// The same factor with log10(2) unrounded.
    pub fn size_factor_precise(&self) -> Magnitude {
        Magnitude::from_log10(self.memory_log10_precise - self.observer_log10)
    }
}

/// Computes the duplicate-observer threshold.
///
/// A brain holding `memory_bits` independent bits has 2^bits distinguishable
/// memory states, and a genome with `genome_variable_sites` freely varying
/// positions has 4^sites variants; an observer duplicates you only if both
/// match, so the larger of the two exponents (memory, for any plausible
/// inputs) sets how rare you are. Dividing by the observer count of the
/// observed universe gives the factor by which a uniform cosmos must exceed
/// it before a duplicate becomes likely.
pub fn duplicate_threshold(
    genome_variable_sites: u64,
    memory_bits: u64,
    planets: Magnitude,
    per_planet_observers: Magnitude,
    generations: Magnitude,
) -> Result<DuplicateThreshold, InferError> {
    for (value, label) in [
        (&planets, "planets"),
        (&per_planet_observers, "per-planet observers"),
        (&generations, "generations"),
    ] {
        if value.is_zero() {
            return Err(InferError::BadParameter(format!(
                "{label} must be positive"
            )));
        }
    }
    let memory_log10_rounded = 3.0 * memory_bits as f64 / 10.0;
    let memory_log10_precise = memory_bits as f64 * std::f64::consts::LOG10_2;
    let genome_log10_rounded = 3.0 * genome_variable_sites as f64 / 5.0;
    let genome_log10_precise = genome_variable_sites as f64 * 2.0 * std::f64::consts::LOG10_2;
    let observer_log10 =
        planets.log10() + per_planet_observers.log10() + generations.log10();
    Ok(DuplicateThreshold {
        memory_log10_rounded,
        memory_log10_precise,
        genome_log10_rounded,
        genome_log10_precise,
        observer_log10,
        memory_term_dominates: memory_log10_precise > genome_log10_precise,
        factor_at_most_one: memory_log10_precise <= observer_log10,
    })
}

/// The single-law alternative compared against the many-valley theory in
/// [`landscape_odds`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LandscapeComparison {
    /// One specific law already known to be compatible with everything you
    /// observe.
    KnownCompatibleLaw,
    /// One law drawn from the life-compatible subset, as a prior built
    /// around observers being intended would be.
    LifeConfinedLaw,
    /// One specific but unknown law, drawn uniformly from the whole
    /// landscape.
    UnknownUniformLaw,
}

/// Odds in favour of a many-valley theory of physical law against a
/// single-law alternative, in log10 arithmetic.
///
/// The many-valley theory realises `valleys` possible law-sets, of which
/// `life_valleys` support intelligent life and `memory_valleys` are
/// compatible with your specific memories; inhabited valleys are taken as
/// equally populated. Under the full-detail and count-weighted rules the
/// probability of your evidence given the theory is memory/valleys, as if a
/// valley were drawn uniformly; under bare self-sampling it is memory/life,
/// since only inhabited valleys can host the sampled observer. The
/// alternative's likelihood is 1 when its law is known compatible,
/// memory/life when confined to life-bearing laws, and memory/valleys when
/// uniform over the landscape.
pub fn landscape_odds(
    valleys: Magnitude,
    life_valleys: Magnitude,
    memory_valleys: Magnitude,
    comparison: LandscapeComparison,
    rule: UpdateRule,
) -> Result<Magnitude, InferError> {
    if memory_valleys.is_zero() {
        return Err(InferError::BadParameter(
            "the count of memory-compatible valleys must be positive".to_string(),
        ));
    }
    if memory_valleys > life_valleys || life_valleys > valleys {
        return Err(InferError::BadParameter(format!(
            "valley counts must satisfy memory <= life <= total, got {memory_valleys} / {life_valleys} / {valleys}"
        )));
    }
    let many_valley = match rule {
        UpdateRule::SsaOnly => memory_valleys / life_valleys,
        UpdateRule::SsaSia | UpdateRule::Fnc => memory_valleys / valleys,
    };
    let alternative = match comparison {
        LandscapeComparison::KnownCompatibleLaw => Magnitude::ONE,
        LandscapeComparison::LifeConfinedLaw => memory_valleys / life_valleys,
        LandscapeComparison::UnknownUniformLaw => memory_valleys / valleys,
    };
    Ok(many_valley / alternative)
}
