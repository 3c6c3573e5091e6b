//! The runnable puzzle registry: each entry pairs a catalog builder with
//! declared parameters, defaults, and pinned expected results.
//!
//! The command line is a thin veneer over this module: `list` prints the
//! entries, `run` calls [`run_entry`] with parsed flags, and `check` replays
//! [`CatalogEntry::check`] for every entry and reports one pass/fail line
//! per pinned result.

use super::{
    bacteria_odds, beauty_and_prince, beauty_and_prince_posterior, duplicate_threshold,
    landscape_odds, marochnik_table, sailors_child, sailors_child_posterior, sleeping_beauty,
    sleeping_beauty_posterior, told_monday, told_monday_posterior, BacteriaUpdate,
    DuplicateThreshold, FPower, LandscapeComparison, MarochnikClass, MarochnikRow, StarRegime,
    Stance, Viewpoint, WakeningClass, FNC_LIMIT_NOTE,
};
use crate::infer::{
    companion_odds, companion_odds_with_count_weighting, doomsday_posterior, nodoom_posterior,
    recruitment_indexical_update, recruitment_invalid_update, AnyPosterior, CompanionCounts,
    InferError, ObserverType, Quantity, UpdateRule, STAGE_SSA,
};
use crate::num::{ExactProb, Magnitude};
use std::collections::BTreeMap;
use std::fmt;

/// One declared parameter of a catalog entry.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    /// Literal used when the parameter is not supplied.
    pub default: &'static str,
    pub help: &'static str,
}

/// Arguments to a catalog entry: the shared rule and reference-class flags
/// plus free-form `key=value` parameters.
#[derive(Debug, Clone, Default)]
pub struct RunArgs {
    pub rule: Option<UpdateRule>,
    pub class: Option<String>,
    pub params: BTreeMap<String, String>,
}

impl RunArgs {
    pub fn with_rule(mut self, rule: UpdateRule) -> Self {
        self.rule = Some(rule);
        self
    }

    pub fn with_class(mut self, class: impl Into<String>) -> Self {
        self.class = Some(class.into());
        self
    }

    pub fn with_param(mut self, name: impl Into<String>, value: impl Into<String>) -> Self {
        self.params.insert(name.into(), value.into());
        self
    }
}

/// What running an entry produces, in a shape the command line can render.
#[derive(Debug, Clone)]
pub enum EntryOutput {
    /// A posterior with its full odds ledger.
    Posterior(AnyPosterior),
    /// A single odds value plus a description of what it compares.
    Odds {
        description: String,
        value: Quantity,
    },
    /// The five-row habitat-comparison ledger, symbolic in `f`.
    Marochnik { f: f64, rows: Vec<MarochnikRow> },
    /// Duplicate-observer exponent bookkeeping.
    Threshold(DuplicateThreshold),
}

/// Result of replaying one pinned expectation.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

/// A named, runnable, checkable puzzle.
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    /// Whether the entry accepts the shared update-rule flag.
    pub takes_rule: bool,
    /// Whether the entry accepts the shared reference-class flag.
    pub takes_class: bool,
    run: fn(&RunArgs) -> Result<EntryOutput, InferError>,
    check: fn() -> Vec<CheckOutcome>,
}

impl CatalogEntry {
    /// Replays this entry's pinned expected results.
    pub fn check(&self) -> Vec<CheckOutcome> {
        (self.check)()
    }
}

/// All registered entries, in presentation order.
pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG
}

/// Looks an entry up by its registered name.
pub fn find_entry(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name)
}

/// Runs an entry after validating the arguments against its declaration:
/// unknown parameter names are rejected, as are rule or class flags on
/// entries that do not take them.
pub fn run_entry(entry: &CatalogEntry, args: &RunArgs) -> Result<EntryOutput, InferError> {
    if args.rule.is_some() && !entry.takes_rule {
        return Err(InferError::BadParameter(format!(
            "entry {:?} does not take an update-rule flag",
            entry.name
        )));
    }
    if args.class.is_some() && !entry.takes_class {
        return Err(InferError::BadParameter(format!(
            "entry {:?} does not take a reference-class flag",
            entry.name
        )));
    }
    for key in args.params.keys() {
        if !entry.params.iter().any(|p| p.name == key.as_str()) {
            let known: Vec<&str> = entry.params.iter().map(|p| p.name).collect();
            return Err(InferError::BadParameter(format!(
                "unknown parameter {key:?} for entry {:?} (expected one of: {})",
                entry.name,
                known.join(", ")
            )));
        }
    }
    (entry.run)(args)
}

fn bad_param(name: &str, raw: &str, detail: impl fmt::Display) -> InferError {
    InferError::BadParameter(format!("parameter {name}={raw:?}: {detail}"))
}

fn raw_param<'a>(args: &'a RunArgs, params: &'static [ParamSpec], name: &str) -> &'a str {
    match args.params.get(name) {
        Some(v) => v,
        None => {
            params
                .iter()
                .find(|p| p.name == name)
                .map(|p| p.default)
                .expect("parameter declared by the entry")
        }
    }
}

/// Parses a nonnegative integer given as plain digits or as `10^k`.
fn count_param(
    args: &RunArgs,
    params: &'static [ParamSpec],
    name: &str,
) -> Result<u128, InferError> {
    let raw = raw_param(args, params, name);
    if let Some(exp) = raw.trim().strip_prefix("10^") {
        let k: u32 = exp
            .trim()
            .parse()
            .map_err(|_| bad_param(name, raw, "expected 10^k with a nonnegative integer k"))?;
        return 10u128
            .checked_pow(k)
            .ok_or_else(|| bad_param(name, raw, "does not fit in 128 bits"));
    }
    raw.trim()
        .parse()
        .map_err(|_| bad_param(name, raw, "expected a nonnegative integer or 10^k"))
}

fn u64_param(args: &RunArgs, params: &'static [ParamSpec], name: &str) -> Result<u64, InferError> {
    let n = count_param(args, params, name)?;
    u64::try_from(n).map_err(|_| bad_param(name, raw_param(args, params, name), "too large"))
}

fn u32_param(args: &RunArgs, params: &'static [ParamSpec], name: &str) -> Result<u32, InferError> {
    let n = count_param(args, params, name)?;
    u32::try_from(n).map_err(|_| bad_param(name, raw_param(args, params, name), "too large"))
}

fn quantity_param(
    args: &RunArgs,
    params: &'static [ParamSpec],
    name: &str,
) -> Result<Quantity, InferError> {
    let raw = raw_param(args, params, name);
    raw.parse::<Quantity>().map_err(|e| bad_param(name, raw, e))
}

fn exact_param(
    args: &RunArgs,
    params: &'static [ParamSpec],
    name: &str,
) -> Result<ExactProb, InferError> {
    let q = quantity_param(args, params, name)?;
    q.as_exact().cloned().ok_or_else(|| {
        bad_param(
            name,
            raw_param(args, params, name),
            "must be an exact number (integer, fraction, or decimal)",
        )
    })
}

fn magnitude_param(
    args: &RunArgs,
    params: &'static [ParamSpec],
    name: &str,
) -> Result<Magnitude, InferError> {
    Ok(quantity_param(args, params, name)?.to_magnitude())
}

fn f64_param(args: &RunArgs, params: &'static [ParamSpec], name: &str) -> Result<f64, InferError> {
    let v = quantity_param(args, params, name)?.to_f64();
    if !v.is_finite() {
        return Err(bad_param(
            name,
            raw_param(args, params, name),
            "does not fit in a finite f64",
        ));
    }
    Ok(v)
}

fn bool_param(
    args: &RunArgs,
    params: &'static [ParamSpec],
    name: &str,
) -> Result<bool, InferError> {
    match raw_param(args, params, name) {
        "true" => Ok(true),
        "false" => Ok(false),
        raw => Err(bad_param(name, raw, "expected true or false")),
    }
}

fn choice_param<T: Copy>(
    args: &RunArgs,
    params: &'static [ParamSpec],
    name: &str,
    choices: &[(&str, T)],
) -> Result<T, InferError> {
    let raw = raw_param(args, params, name);
    choices
        .iter()
        .find(|(label, _)| *label == raw)
        .map(|(_, value)| *value)
        .ok_or_else(|| {
            let known: Vec<String> = choices.iter().map(|(l, _)| format!("{l:?}")).collect();
            bad_param(name, raw, format!("expected one of {}", known.join(", ")))
        })
}

fn fail_outcome(label: &str, expected: String, err: impl fmt::Display) -> CheckOutcome {
    CheckOutcome {
        label: label.to_string(),
        expected,
        actual: format!("error: {err}"),
        pass: false,
    }
}

fn check_exact(
    label: &str,
    expected: ExactProb,
    actual: Result<ExactProb, InferError>,
) -> CheckOutcome {
    match actual {
        Ok(v) => CheckOutcome {
            label: label.to_string(),
            expected: expected.to_string(),
            actual: v.to_string(),
            pass: v == expected,
        },
        Err(e) => fail_outcome(label, expected.to_string(), e),
    }
}

/// Compares after formatting to a fixed number of decimal places, for pinned
/// results that are themselves rounded decimals.
fn check_decimal(
    label: &str,
    expected: &str,
    decimals: usize,
    actual: Result<ExactProb, InferError>,
) -> CheckOutcome {
    match actual {
        Ok(v) => {
            let shown = format!("{:.decimals$}", v.to_f64());
            CheckOutcome {
                label: label.to_string(),
                expected: expected.to_string(),
                actual: shown.clone(),
                pass: shown == expected,
            }
        }
        Err(e) => fail_outcome(label, expected.to_string(), e),
    }
}

fn check_log10(
    label: &str,
    expected_log10: f64,
    tol: f64,
    actual: Result<Magnitude, InferError>,
) -> CheckOutcome {
    let expected = format!("10^{expected_log10}");
    match actual {
        Ok(v) => CheckOutcome {
            label: label.to_string(),
            expected,
            actual: format!("10^{}", v.log10()),
            pass: (v.log10() - expected_log10).abs() <= tol,
        },
        Err(e) => fail_outcome(label, expected, e),
    }
}

fn check_value(label: &str, expected: f64, actual: Result<Magnitude, InferError>) -> CheckOutcome {
    match actual {
        Ok(v) => {
            let value = v.value();
            CheckOutcome {
                label: label.to_string(),
                expected: format!("{expected:.6}"),
                actual: format!("{value:.6}"),
                pass: (value - expected).abs() <= 1e-9 * expected.abs().max(1.0),
            }
        }
        Err(e) => fail_outcome(label, format!("{expected:.6}"), e),
    }
}

fn check_flag(label: &str, expected: bool, actual: bool) -> CheckOutcome {
    CheckOutcome {
        label: label.to_string(),
        expected: expected.to_string(),
        actual: actual.to_string(),
        pass: actual == expected,
    }
}

static SLEEPING_BEAUTY_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "heads_wakenings",
        default: "1",
        help: "wakenings if the coin lands Heads",
    },
    ParamSpec {
        name: "tails_wakenings",
        default: "2",
        help: "wakenings if the coin lands Tails",
    },
];

fn run_sleeping_beauty(args: &RunArgs) -> Result<EntryOutput, InferError> {
    let heads = u64_param(args, SLEEPING_BEAUTY_PARAMS, "heads_wakenings")?;
    let tails = u64_param(args, SLEEPING_BEAUTY_PARAMS, "tails_wakenings")?;
    let rule = args.rule.unwrap_or(UpdateRule::Fnc);
    Ok(EntryOutput::Posterior(sleeping_beauty_posterior(
        heads, tails, rule,
    )?))
}

fn check_sleeping_beauty() -> Vec<CheckOutcome> {
    vec![
        check_exact(
            "full-detail P(Heads), 1 vs 2 wakenings",
            ExactProb::frac(1, 3),
            sleeping_beauty(1, 2, UpdateRule::Fnc),
        ),
        check_exact(
            "count-weighted P(Heads), 1 vs 2 wakenings",
            ExactProb::frac(1, 3),
            sleeping_beauty(1, 2, UpdateRule::SsaSia),
        ),
        check_exact(
            "own-class self-sampling P(Heads), 1 vs 2 wakenings",
            ExactProb::frac(1, 2),
            sleeping_beauty(1, 2, UpdateRule::SsaOnly),
        ),
    ]
}

static BEAUTY_AND_PRINCE_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "viewpoint",
        default: "beauty",
        help: "whose P(Heads): beauty, prince, or prince-sees-beauty",
    },
    ParamSpec {
        name: "bystanders",
        default: "1000000",
        help: "extra coin-independent people, used with the all-humans class",
    },
];

fn run_beauty_and_prince(args: &RunArgs) -> Result<EntryOutput, InferError> {
    let viewpoint = choice_param(
        args,
        BEAUTY_AND_PRINCE_PARAMS,
        "viewpoint",
        &[
            ("beauty", Viewpoint::Beauty),
            ("prince", Viewpoint::PrincePreObservation),
            ("prince-sees-beauty", Viewpoint::PrinceSeesBeauty),
        ],
    )?;
    let class = match args.class.as_deref().unwrap_or("both") {
        "own" => WakeningClass::OwnOnly,
        "both" => WakeningClass::Both,
        "all-humans" => {
            WakeningClass::AllHumans(u64_param(args, BEAUTY_AND_PRINCE_PARAMS, "bystanders")?)
        }
        other => return Err(InferError::UnknownClass(other.to_string())),
    };
    let rule = args.rule.unwrap_or(UpdateRule::SsaOnly);
    let posterior = beauty_and_prince_posterior(rule, class, viewpoint)?;
    Ok(EntryOutput::Posterior(AnyPosterior::Exact(posterior)))
}

fn check_beauty_and_prince() -> Vec<CheckOutcome> {
    let ssa = UpdateRule::SsaOnly;
    vec![
        check_exact(
            "sleeper's P(Heads), pooled class, self-sampling",
            ExactProb::frac(2, 5),
            beauty_and_prince(ssa, WakeningClass::Both, Viewpoint::Beauty),
        ),
        check_exact(
            "neighbour's P(Heads) before looking, pooled class",
            ExactProb::frac(4, 7),
            beauty_and_prince(ssa, WakeningClass::Both, Viewpoint::PrincePreObservation),
        ),
        check_exact(
            "neighbour's P(Heads) after seeing the sleeper awake",
            ExactProb::frac(2, 5),
            beauty_and_prince(ssa, WakeningClass::Both, Viewpoint::PrinceSeesBeauty),
        ),
        check_exact(
            "count-weighted sleeper is class-invariant at 1/3",
            ExactProb::frac(1, 3),
            beauty_and_prince(
                UpdateRule::SsaSia,
                WakeningClass::AllHumans(1_000_000),
                Viewpoint::Beauty,
            ),
        ),
    ]
}

static TOLD_MONDAY_PARAMS: &[ParamSpec] = &[ParamSpec {
    name: "stance",
    default: "halfer",
    help: "pre-announcement stance: halfer or thirder",
}];

fn run_told_monday(args: &RunArgs) -> Result<EntryOutput, InferError> {
    let stance = choice_param(
        args,
        TOLD_MONDAY_PARAMS,
        "stance",
        &[("halfer", Stance::Halfer), ("thirder", Stance::Thirder)],
    )?;
    Ok(EntryOutput::Posterior(AnyPosterior::Exact(
        told_monday_posterior(stance)?,
    )))
}

fn check_told_monday() -> Vec<CheckOutcome> {
    vec![
        check_exact(
            "halfer's P(Heads) on learning it is Monday",
            ExactProb::frac(2, 3),
            told_monday(Stance::Halfer),
        ),
        check_exact(
            "thirder's P(Heads) on learning it is Monday",
            ExactProb::frac(1, 2),
            told_monday(Stance::Thirder),
        ),
    ]
}

static SAILORS_CHILD_PARAMS: &[ParamSpec] = &[ParamSpec {
    name: "guidebook",
    default: "false",
    help: "whether the child knows their city is the one-child city",
}];

fn run_sailors_child(args: &RunArgs) -> Result<EntryOutput, InferError> {
    let knows = bool_param(args, SAILORS_CHILD_PARAMS, "guidebook")?;
    Ok(EntryOutput::Posterior(sailors_child_posterior(knows)?))
}

fn check_sailors_child() -> Vec<CheckOutcome> {
    vec![
        check_exact(
            "P(one child) without consulting the guidebook",
            ExactProb::frac(1, 3),
            sailors_child(false),
        ),
        check_exact(
            "P(one child) knowing your city is listed first",
            ExactProb::frac(1, 2),
            sailors_child(true),
        ),
    ]
}

static RECRUITMENT_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "pool",
        default: "20",
        help: "largest possible number of enrolled subjects",
    },
    ParamSpec {
        name: "seq_len",
        default: "3",
        help: "coin flips per subject, used by the invalid analysis",
    },
    ParamSpec {
        name: "analysis",
        default: "indexical",
        help: "indexical (condition on which subject you are) or invalid (sequence-only)",
    },
];

fn run_recruitment(args: &RunArgs) -> Result<EntryOutput, InferError> {
    let pool = u32_param(args, RECRUITMENT_PARAMS, "pool")?;
    let indexical = choice_param(
        args,
        RECRUITMENT_PARAMS,
        "analysis",
        &[("indexical", true), ("invalid", false)],
    )?;
    let posterior = if indexical {
        recruitment_indexical_update(pool)?
    } else {
        let seq_len = u32_param(args, RECRUITMENT_PARAMS, "seq_len")?;
        recruitment_invalid_update(pool, seq_len)?
    };
    Ok(EntryOutput::Posterior(AnyPosterior::Exact(posterior)))
}

fn check_recruitment() -> Vec<CheckOutcome> {
    let prob = |p: Result<crate::infer::Posterior<ExactProb>, InferError>, h: &str| {
        p.and_then(|p| Ok(p.prob(h)?.clone()))
    };
    vec![
        check_decimal(
            "sequence-only update, P(1 subject), pool of 20",
            "0.0093",
            4,
            prob(recruitment_invalid_update(20, 3), "N=1"),
        ),
        check_decimal(
            "sequence-only update, P(20 subjects), pool of 20",
            "0.0690",
            4,
            prob(recruitment_invalid_update(20, 3), "N=20"),
        ),
        check_exact(
            "indexical update, P(5 subjects), pool of 20",
            ExactProb::frac(5, 210),
            prob(recruitment_indexical_update(20), "N=5"),
        ),
        check_decimal(
            "indexical update, P(1 subject), pool of 20",
            "0.0048",
            4,
            prob(recruitment_indexical_update(20), "N=1"),
        ),
        check_decimal(
            "indexical update, P(20 subjects), pool of 20",
            "0.0952",
            4,
            prob(recruitment_indexical_update(20), "N=20"),
        ),
    ]
}

static DOOMSDAY_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "n_short",
        default: "10^11",
        help: "total people ever born if the species ends soon",
    },
    ParamSpec {
        name: "n_long",
        default: "10^14",
        help: "total people ever born if the species persists",
    },
    ParamSpec {
        name: "weight_short",
        default: "1/2",
        help: "prior probability of the short future",
    },
    ParamSpec {
        name: "rank",
        default: "60000000000",
        help: "your birth rank among all people ever born",
    },
];

fn doomsday_prior(args: &RunArgs) -> Result<([(u128, ExactProb); 2], u128), InferError> {
    let n_short = count_param(args, DOOMSDAY_PARAMS, "n_short")?;
    let n_long = count_param(args, DOOMSDAY_PARAMS, "n_long")?;
    if n_short == 0 || n_short >= n_long {
        return Err(InferError::BadParameter(format!(
            "totals must satisfy 0 < n_short < n_long, got {n_short} and {n_long}"
        )));
    }
    let weight_short = exact_param(args, DOOMSDAY_PARAMS, "weight_short")?;
    let weight_long = weight_short.complement().map_err(|_| {
        InferError::BadParameter("weight_short must be at most 1".to_string())
    })?;
    let rank = count_param(args, DOOMSDAY_PARAMS, "rank")?;
    Ok(([(n_short, weight_short), (n_long, weight_long)], rank))
}

fn run_doomsday(args: &RunArgs) -> Result<EntryOutput, InferError> {
    let (prior, rank) = doomsday_prior(args)?;
    let posterior = match args.rule.unwrap_or(UpdateRule::SsaOnly) {
        UpdateRule::SsaOnly => doomsday_posterior(&prior, rank)?,
        UpdateRule::SsaSia => nodoom_posterior(&prior, rank)?,
        // Observers whose memories include this birth rank exist in equal
        // numbers (one) under every surviving hypothesis, so full detail
        // reduces to the same truncation the count-weighted rule applies.
        UpdateRule::Fnc => nodoom_posterior(&prior, rank)?.with_note(FNC_LIMIT_NOTE),
    };
    Ok(EntryOutput::Posterior(AnyPosterior::Exact(posterior)))
}

fn check_doomsday() -> Vec<CheckOutcome> {
    let textbook = [
        (100_000_000_000u128, ExactProb::frac(1, 2)),
        (100_000_000_000_000u128, ExactProb::frac(1, 2)),
    ];
    let rank = 60_000_000_000u128;
    let long = "N=100000000000000";
    let short = "N=100000000000";
    let revised = [
        (200_000_000_000u128, ExactProb::frac(1, 2)),
        (100_000_000_000_000u128, ExactProb::frac(1, 2)),
    ];
    vec![
        check_exact(
            "rank update: P(long future) from even prior over 10^11 / 10^14",
            ExactProb::frac(1, 1001),
            doomsday_posterior(&textbook, rank).and_then(|p| Ok(p.prob(long)?.clone())),
        ),
        check_decimal(
            "the same probability as a decimal",
            "0.000999001",
            9,
            doomsday_posterior(&textbook, rank).and_then(|p| Ok(p.prob(long)?.clone())),
        ),
        check_exact(
            "rank update: odds of the long future",
            ExactProb::frac(1, 1000),
            doomsday_posterior(&textbook, rank).and_then(|p| p.odds(long, short)),
        ),
        check_exact(
            "doubling the short-branch total moves the odds to 1/500",
            ExactProb::frac(1, 500),
            doomsday_posterior(&revised, 160_000_000_000)
                .and_then(|p| p.odds(long, "N=200000000000")),
        ),
        check_exact(
            "count-weighted rule leaves the prior untouched",
            ExactProb::frac(1, 2),
            nodoom_posterior(&textbook, rank).and_then(|p| Ok(p.prob(long)?.clone())),
        ),
    ]
}

static COLONIZATION_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "n_modest",
        default: "10^12",
        help: "total people if the species stays planet-bound",
    },
    ParamSpec {
        name: "n_expansive",
        default: "10^16",
        help: "total people if the species spreads through the solar system",
    },
    ParamSpec {
        name: "rank",
        default: "10^11",
        help: "your birth rank among all people ever born",
    },
];

fn run_colonization(args: &RunArgs) -> Result<EntryOutput, InferError> {
    let n_modest = count_param(args, COLONIZATION_PARAMS, "n_modest")?;
    let n_expansive = count_param(args, COLONIZATION_PARAMS, "n_expansive")?;
    if n_modest == 0 || n_modest >= n_expansive {
        return Err(InferError::BadParameter(format!(
            "totals must satisfy 0 < n_modest < n_expansive, got {n_modest} and {n_expansive}"
        )));
    }
    let rank = count_param(args, COLONIZATION_PARAMS, "rank")?;
    if rank == 0 || rank > n_modest {
        return Err(InferError::BadParameter(format!(
            "rank must fall within the modest total, got {rank}"
        )));
    }
    let prior = [
        (n_modest, ExactProb::frac(1, 2)),
        (n_expansive, ExactProb::frac(1, 2)),
    ];
    let posterior = doomsday_posterior(&prior, rank)?;
    let odds = posterior.stage_odds(
        STAGE_SSA,
        &format!("N={n_expansive}"),
        &format!("N={n_modest}"),
    )?;
    Ok(EntryOutput::Odds {
        description: "self-sampling odds shift for the expansive future against the modest one"
            .to_string(),
        value: Quantity::Exact(odds),
    })
}

fn check_colonization() -> Vec<CheckOutcome> {
    let prior = [
        (1_000_000_000_000u128, ExactProb::frac(1, 2)),
        (10_000_000_000_000_000u128, ExactProb::frac(1, 2)),
    ];
    vec![check_exact(
        "odds shift against the 10^16-person future at rank 10^11",
        ExactProb::frac(1, 10_000),
        doomsday_posterior(&prior, 100_000_000_000).and_then(|p| {
            p.stage_odds(STAGE_SSA, "N=10000000000000000", "N=1000000000000")
        }),
    )]
}

static COMPANIONS_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "x_a",
        default: "1",
        help: "X observers under theory A",
    },
    ParamSpec {
        name: "y_a",
        default: "2",
        help: "Y observers under theory A",
    },
    ParamSpec {
        name: "x_b",
        default: "3",
        help: "X observers under theory B",
    },
    ParamSpec {
        name: "y_b",
        default: "1",
        help: "Y observers under theory B",
    },
    ParamSpec {
        name: "observer",
        default: "x",
        help: "which partnered observer is reasoning: x or y",
    },
    ParamSpec {
        name: "weighting",
        default: "none",
        help: "none, or count to weight hypotheses by own-type observer count",
    },
];

fn run_companions(args: &RunArgs) -> Result<EntryOutput, InferError> {
    let counts = CompanionCounts::new(
        quantity_param(args, COMPANIONS_PARAMS, "x_a")?,
        quantity_param(args, COMPANIONS_PARAMS, "y_a")?,
        quantity_param(args, COMPANIONS_PARAMS, "x_b")?,
        quantity_param(args, COMPANIONS_PARAMS, "y_b")?,
    );
    let typ = choice_param(
        args,
        COMPANIONS_PARAMS,
        "observer",
        &[("x", ObserverType::X), ("y", ObserverType::Y)],
    )?;
    let count_weighting = choice_param(
        args,
        COMPANIONS_PARAMS,
        "weighting",
        &[("none", false), ("count", true)],
    )?;
    let own_class_only = match args.class.as_deref().unwrap_or("combined") {
        "own" => true,
        "combined" => false,
        other => return Err(InferError::UnknownClass(other.to_string())),
    };
    let odds = if count_weighting {
        companion_odds_with_count_weighting(typ, &counts)?
    } else {
        companion_odds(typ, &counts, own_class_only)?
    };
    Ok(EntryOutput::Odds {
        description: format!("odds observer {typ:?} assigns to theory A over theory B"),
        value: Quantity::Log(odds),
    })
}

fn check_companions() -> Vec<CheckOutcome> {
    let counts = CompanionCounts::new(
        Quantity::integer(1),
        Quantity::integer(2),
        Quantity::integer(3),
        Quantity::integer(1),
    );
    let x_combined = companion_odds(ObserverType::X, &counts, false);
    let y_combined = companion_odds(ObserverType::Y, &counts, false);
    let agree = match (&x_combined, &y_combined) {
        (Ok(x), Ok(y)) => CheckOutcome {
            label: "pooled class gives both observers the same odds".to_string(),
            expected: "equal odds".to_string(),
            actual: format!("X {:.6}, Y {:.6}", x.value(), y.value()),
            pass: x == y,
        },
        _ => fail_outcome(
            "pooled class gives both observers the same odds",
            "equal odds".to_string(),
            "companion odds failed",
        ),
    };
    vec![
        check_value(
            "own-class odds for X, counts (1,2) vs (3,1)",
            3.0,
            companion_odds(ObserverType::X, &counts, true),
        ),
        check_value(
            "own-class odds for Y, counts (1,2) vs (3,1)",
            0.5,
            companion_odds(ObserverType::Y, &counts, true),
        ),
        agree,
        check_value(
            "count weighting levels both observers' odds at 1",
            1.0,
            companion_odds_with_count_weighting(ObserverType::X, &counts),
        ),
        check_value(
            "count weighting levels both observers' odds at 1 (other side)",
            1.0,
            companion_odds_with_count_weighting(ObserverType::Y, &counts),
        ),
    ]
}

static MAROCHNIK_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "regime",
        default: "few",
        help: "few (star-beings rare) or many (star-beings dominant)",
    },
    ParamSpec {
        name: "f",
        default: "0.1",
        help: "fraction of star systems with life-bearing planets under the restricted theory",
    },
];

fn run_marochnik(args: &RunArgs) -> Result<EntryOutput, InferError> {
    let regime = choice_param(
        args,
        MAROCHNIK_PARAMS,
        "regime",
        &[
            ("few", StarRegime::FewStarBeings),
            ("many", StarRegime::ManyStarBeings),
        ],
    )?;
    let f = f64_param(args, MAROCHNIK_PARAMS, "f")?;
    let class = match args.class.as_deref().unwrap_or("own") {
        "own" => MarochnikClass::OwnType,
        "combined" => MarochnikClass::Combined,
        other => return Err(InferError::UnknownClass(other.to_string())),
    };
    let rule = args.rule.unwrap_or(UpdateRule::SsaSia);
    let rows = marochnik_table(regime, rule, class, f)?;
    Ok(EntryOutput::Marochnik { f, rows })
}

type MarochnikCells = [(Option<i32>, Option<i32>); 5];

/// Pinned cumulative (planet, star) powers of `f` for every regime, rule,
/// and class combination, row by row.
static MAROCHNIK_EXPECTED: &[(StarRegime, UpdateRule, MarochnikClass, MarochnikCells)] = &[
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

fn render_marochnik(rows: &[MarochnikRow]) -> String {
    let cell = |c: Option<FPower>| c.map_or("-".to_string(), |p| p.to_string());
    let planet: Vec<String> = rows.iter().map(|r| cell(r.planet)).collect();
    let star: Vec<String> = rows.iter().map(|r| cell(r.star)).collect();
    format!("planet [{}], star [{}]", planet.join(", "), star.join(", "))
}

fn check_marochnik() -> Vec<CheckOutcome> {
    MAROCHNIK_EXPECTED
        .iter()
        .map(|(regime, rule, class, cells)| {
            let label = format!(
                "{} star-beings, {}, {} class",
                match regime {
                    StarRegime::FewStarBeings => "few",
                    StarRegime::ManyStarBeings => "many",
                },
                rule.flag_name(),
                match class {
                    MarochnikClass::OwnType => "own-type",
                    MarochnikClass::Combined => "combined",
                },
            );
            let expected: Vec<MarochnikRow> = cells
                .iter()
                .enumerate()
                .map(|(i, (planet, star))| MarochnikRow {
                    label: super::MAROCHNIK_LABELS[i],
                    planet: planet.map(FPower),
                    star: star.map(FPower),
                })
                .collect();
            match marochnik_table(*regime, *rule, *class, 0.1) {
                Ok(rows) => CheckOutcome {
                    label,
                    expected: render_marochnik(&expected),
                    actual: render_marochnik(&rows),
                    pass: rows == expected,
                },
                Err(e) => fail_outcome(&label, render_marochnik(&expected), e),
            }
        })
        .collect()
}

static BACTERIA_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "ratio",
        default: "10^21",
        help: "microbes per human-like observer",
    },
    ParamSpec {
        name: "update",
        default: "sia-alone",
        help: "sia-alone, ssa, ssa+sia, or fnc",
    },
];

fn run_bacteria(args: &RunArgs) -> Result<EntryOutput, InferError> {
    let ratio = magnitude_param(args, BACTERIA_PARAMS, "ratio")?;
    let update = choice_param(
        args,
        BACTERIA_PARAMS,
        "update",
        &[
            ("sia-alone", BacteriaUpdate::SiaAlone),
            ("ssa", BacteriaUpdate::SsaMinusSia),
            ("ssa+sia", BacteriaUpdate::SsaPlusSia),
            ("fnc", BacteriaUpdate::Fnc),
        ],
    )?;
    let odds = bacteria_odds(update, ratio)?;
    Ok(EntryOutput::Odds {
        description: "odds multiplier for the theory that microbes count as observers".to_string(),
        value: Quantity::Log(odds),
    })
}

fn check_bacteria() -> Vec<CheckOutcome> {
    let ratio = Magnitude::pow10(21);
    vec![
        check_log10(
            "count reweighting alone favours counting microbes",
            21.0,
            1e-9,
            bacteria_odds(BacteriaUpdate::SiaAlone, ratio),
        ),
        check_log10(
            "bare self-sampling alone disfavours it by the same amount",
            -21.0,
            1e-9,
            bacteria_odds(BacteriaUpdate::SsaMinusSia, ratio),
        ),
        check_log10(
            "the two stages together cancel",
            0.0,
            1e-9,
            bacteria_odds(BacteriaUpdate::SsaPlusSia, ratio),
        ),
        check_log10(
            "full-detail conditioning is indifferent",
            0.0,
            1e-12,
            bacteria_odds(BacteriaUpdate::Fnc, ratio),
        ),
    ]
}

static DUPLICATES_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "genome_sites",
        default: "300000",
        help: "freely varying genome positions (4 choices each)",
    },
    ParamSpec {
        name: "memory_bits",
        default: "10^11",
        help: "independent bits of memory state",
    },
    ParamSpec {
        name: "planets",
        default: "10^22",
        help: "planets in the observed universe",
    },
    ParamSpec {
        name: "per_planet",
        default: "10^10",
        help: "observers per inhabited planet per generation",
    },
    ParamSpec {
        name: "generations",
        default: "10^10",
        help: "generations over the universe's history",
    },
];

fn run_duplicates(args: &RunArgs) -> Result<EntryOutput, InferError> {
    let threshold = duplicate_threshold(
        u64_param(args, DUPLICATES_PARAMS, "genome_sites")?,
        u64_param(args, DUPLICATES_PARAMS, "memory_bits")?,
        magnitude_param(args, DUPLICATES_PARAMS, "planets")?,
        magnitude_param(args, DUPLICATES_PARAMS, "per_planet")?,
        magnitude_param(args, DUPLICATES_PARAMS, "generations")?,
    )?;
    Ok(EntryOutput::Threshold(threshold))
}

fn check_duplicates() -> Vec<CheckOutcome> {
    let threshold = duplicate_threshold(
        300_000,
        100_000_000_000,
        Magnitude::pow10(22),
        Magnitude::pow10(10),
        Magnitude::pow10(10),
    );
    match threshold {
        Ok(t) => vec![
            check_log10(
                "size factor before a duplicate is likely, rounded exponents",
                29_999_999_958.0,
                1e-9,
                Ok(t.size_factor()),
            ),
            check_log10(
                "the same factor with log10(2) unrounded",
                30_102_999_524.4,
                0.5,
                Ok(t.size_factor_precise()),
            ),
            check_flag(
                "memory diversity dominates genome diversity",
                true,
                t.memory_term_dominates,
            ),
        ],
        Err(e) => vec![fail_outcome(
            "duplicate-observer threshold computes",
            "three exponents".to_string(),
            e,
        )],
    }
}

static LANDSCAPE_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "valleys",
        default: "10^500",
        help: "law-sets realised by the many-valley theory",
    },
    ParamSpec {
        name: "life",
        default: "10^10",
        help: "valleys compatible with intelligent life",
    },
    ParamSpec {
        name: "memory",
        default: "10^6",
        help: "valleys compatible with your specific observations",
    },
    ParamSpec {
        name: "versus",
        default: "known-compatible",
        help: "alternative: known-compatible, life-confined, or unknown-uniform",
    },
];

fn run_landscape(args: &RunArgs) -> Result<EntryOutput, InferError> {
    let valleys = magnitude_param(args, LANDSCAPE_PARAMS, "valleys")?;
    let life = magnitude_param(args, LANDSCAPE_PARAMS, "life")?;
    let memory = magnitude_param(args, LANDSCAPE_PARAMS, "memory")?;
    let comparison = choice_param(
        args,
        LANDSCAPE_PARAMS,
        "versus",
        &[
            ("known-compatible", LandscapeComparison::KnownCompatibleLaw),
            ("life-confined", LandscapeComparison::LifeConfinedLaw),
            ("unknown-uniform", LandscapeComparison::UnknownUniformLaw),
        ],
    )?;
    let rule = args.rule.unwrap_or(UpdateRule::Fnc);
    let odds = landscape_odds(valleys, life, memory, comparison, rule)?;
    let versus = match comparison {
        LandscapeComparison::KnownCompatibleLaw => "a single law known to be compatible",
        LandscapeComparison::LifeConfinedLaw => "a single law confined to life-bearing options",
        LandscapeComparison::UnknownUniformLaw => "a single unknown law drawn uniformly",
    };
    Ok(EntryOutput::Odds {
        description: format!("odds for the many-valley theory against {versus}"),
        value: Quantity::Log(odds),
    })
}

fn check_landscape() -> Vec<CheckOutcome> {
    let valleys = Magnitude::pow10(500);
    let life = Magnitude::pow10(10);
    let memory = Magnitude::pow10(6);
    vec![
        check_log10(
            "full detail vs a known-compatible law",
            -494.0,
            1e-9,
            landscape_odds(
                valleys,
                life,
                memory,
                LandscapeComparison::KnownCompatibleLaw,
                UpdateRule::Fnc,
            ),
        ),
        check_log10(
            "bare self-sampling vs a known-compatible law",
            -4.0,
            1e-9,
            landscape_odds(
                valleys,
                life,
                memory,
                LandscapeComparison::KnownCompatibleLaw,
                UpdateRule::SsaOnly,
            ),
        ),
        check_log10(
            "full detail vs a life-confined law",
            -490.0,
            1e-9,
            landscape_odds(
                valleys,
                life,
                memory,
                LandscapeComparison::LifeConfinedLaw,
                UpdateRule::Fnc,
            ),
        ),
        check_log10(
            "bare self-sampling vs an unknown uniformly drawn law",
            490.0,
            1e-9,
            landscape_odds(
                valleys,
                life,
                memory,
                LandscapeComparison::UnknownUniformLaw,
                UpdateRule::SsaOnly,
            ),
        ),
    ]
}

static CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "sleeping_beauty",
        summary: "P(Heads) for a sleeper wakened once on Heads and twice on Tails",
        params: SLEEPING_BEAUTY_PARAMS,
        takes_rule: true,
        takes_class: false,
        run: run_sleeping_beauty,
        check: check_sleeping_beauty,
    },
    CatalogEntry {
        name: "beauty_and_prince",
        summary: "the sleeper plus an always-wakened neighbour who may see her awake",
        params: BEAUTY_AND_PRINCE_PARAMS,
        takes_rule: true,
        takes_class: true,
        run: run_beauty_and_prince,
        check: check_beauty_and_prince,
    },
    CatalogEntry {
        name: "told_monday",
        summary: "updating a waking stance on the news that today is Monday",
        params: TOLD_MONDAY_PARAMS,
        takes_rule: false,
        takes_class: false,
        run: run_told_monday,
        check: check_told_monday,
    },
    CatalogEntry {
        name: "sailors_child",
        summary: "a child inferring whether their father's coin meant one child or two",
        params: SAILORS_CHILD_PARAMS,
        takes_rule: false,
        takes_class: false,
        run: run_sailors_child,
        check: check_sailors_child,
    },
    CatalogEntry {
        name: "recruitment",
        summary: "how many subjects a flip-driven study enrolled, given that you are one",
        params: RECRUITMENT_PARAMS,
        takes_rule: false,
        takes_class: false,
        run: run_recruitment,
        check: check_recruitment,
    },
    CatalogEntry {
        name: "doomsday",
        summary: "birth-rank update over two candidate totals for how many people will ever live",
        params: DOOMSDAY_PARAMS,
        takes_rule: true,
        takes_class: false,
        run: run_doomsday,
        check: check_doomsday,
    },
    CatalogEntry {
        name: "colonization",
        summary: "self-sampling odds shift against a future with vastly more people",
        params: COLONIZATION_PARAMS,
        takes_rule: false,
        takes_class: false,
        run: run_colonization,
        check: check_colonization,
    },
    CatalogEntry {
        name: "companions",
        summary: "two partnered observer kinds comparing notes on the same two theories",
        params: COMPANIONS_PARAMS,
        takes_rule: false,
        takes_class: true,
        run: run_companions,
        check: check_companions,
    },
    CatalogEntry {
        name: "marochnik",
        summary: "planet- and star-dwellers weighing a restricted-habitat theory, stage by stage",
        params: MAROCHNIK_PARAMS,
        takes_rule: true,
        takes_class: true,
        run: run_marochnik,
        check: check_marochnik,
    },
    CatalogEntry {
        name: "bacteria",
        summary: "odds multiplier for counting microbes as observers, stage by stage",
        params: BACTERIA_PARAMS,
        takes_rule: false,
        takes_class: false,
        run: run_bacteria,
        check: check_bacteria,
    },
    CatalogEntry {
        name: "duplicates",
        summary: "how much larger the cosmos must be before your exact duplicate is likely",
        params: DUPLICATES_PARAMS,
        takes_rule: false,
        takes_class: false,
        run: run_duplicates,
        check: check_duplicates,
    },
    CatalogEntry {
        name: "landscape",
        summary: "a many-valley theory of physical law against single-law alternatives",
        params: LANDSCAPE_PARAMS,
        takes_rule: true,
        takes_class: false,
        run: run_landscape,
        check: check_landscape,
    },
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_pinned_check_passes() {
        for entry in catalog() {
            for outcome in entry.check() {
                assert!(
                    outcome.pass,
                    "{}: {} (expected {}, got {})",
                    entry.name, outcome.label, outcome.expected, outcome.actual
                );
            }
        }
    }

    #[test]
    fn every_entry_runs_with_defaults() {
        for entry in catalog() {
            let result = run_entry(entry, &RunArgs::default());
            assert!(result.is_ok(), "{}: {:?}", entry.name, result.err());
        }
    }

    #[test]
    fn catalog_lookup_is_complete() {
        assert_eq!(catalog().len(), 12);
        for entry in catalog() {
            assert!(find_entry(entry.name).is_some());
        }
        assert!(find_entry("not-a-puzzle").is_none());
    }

    #[test]
    fn unknown_parameters_are_rejected_with_the_known_names() {
        let entry = find_entry("sleeping_beauty").unwrap();
        let args = RunArgs::default().with_param("wakes", "3");
        match run_entry(entry, &args) {
            Err(InferError::BadParameter(msg)) => {
                assert!(msg.contains("wakes") && msg.contains("tails_wakenings"), "{msg}");
            }
            other => panic!("expected a parameter error, got {other:?}"),
        }
    }

    #[test]
    fn rule_and_class_flags_are_validated_per_entry() {
        let entry = find_entry("told_monday").unwrap();
        let args = RunArgs::default().with_rule(UpdateRule::Fnc);
        assert!(matches!(
            run_entry(entry, &args),
            Err(InferError::BadParameter(_))
        ));
        let entry = find_entry("sleeping_beauty").unwrap();
        let args = RunArgs::default().with_class("everyone");
        assert!(matches!(
            run_entry(entry, &args),
            Err(InferError::BadParameter(_))
        ));
        let entry = find_entry("beauty_and_prince").unwrap();
        let args = RunArgs::default().with_class("not-a-class");
        assert!(matches!(
            run_entry(entry, &args),
            Err(InferError::UnknownClass(_))
        ));
    }

    #[test]
    fn parameters_override_defaults() {
        let entry = find_entry("sleeping_beauty").unwrap();
        let args = RunArgs::default()
            .with_param("tails_wakenings", "5")
            .with_rule(UpdateRule::SsaSia);
        match run_entry(entry, &args).unwrap() {
            EntryOutput::Posterior(p) => {
                assert_eq!(
                    p.as_exact().unwrap().prob("Heads").unwrap(),
                    &ExactProb::frac(1, 6)
                );
            }
            other => panic!("unexpected output {other:?}"),
        }
    }

    #[test]
    fn count_parameters_accept_power_notation() {
        let entry = find_entry("doomsday").unwrap();
        let ok = RunArgs::default().with_param("rank", "10^10");
        assert!(run_entry(entry, &ok).is_ok());
        for bad in ["abc", "10^", "10^200", "-3"] {
            let args = RunArgs::default().with_param("rank", bad);
            assert!(
                matches!(run_entry(entry, &args), Err(InferError::BadParameter(_))),
                "{bad} should be rejected"
            );
        }
    }

    #[test]
    fn doomsday_rules_dispatch_to_the_right_update() {
        let entry = find_entry("doomsday").unwrap();
        let ssa_sia = RunArgs::default().with_rule(UpdateRule::SsaSia);
        match run_entry(entry, &ssa_sia).unwrap() {
            EntryOutput::Posterior(p) => {
                assert_eq!(
                    p.as_exact().unwrap().prob("N=100000000000000").unwrap(),
                    &ExactProb::frac(1, 2)
                );
            }
            other => panic!("unexpected output {other:?}"),
        }
        let fnc = RunArgs::default().with_rule(UpdateRule::Fnc);
        match run_entry(entry, &fnc).unwrap() {
            EntryOutput::Posterior(p) => {
                assert!(!p.notes().is_empty());
            }
            other => panic!("unexpected output {other:?}"),
        }
    }

    #[test]
    fn marochnik_entry_respects_flags() {
        let entry = find_entry("marochnik").unwrap();
        let args = RunArgs::default()
            .with_rule(UpdateRule::SsaOnly)
            .with_class("combined")
            .with_param("regime", "many");
        match run_entry(entry, &args).unwrap() {
            EntryOutput::Marochnik { f, rows } => {
                assert_eq!(f, 0.1);
                assert_eq!(rows.len(), 5);
                assert_eq!(rows[1].planet, None);
                assert_eq!(rows[4].planet, Some(FPower(0)));
            }
            other => panic!("unexpected output {other:?}"),
        }
        let args = RunArgs::default().with_rule(UpdateRule::Fnc);
        assert!(matches!(
            run_entry(entry, &args),
            Err(InferError::BadParameter(_))
        ));
    }
}
