//! Posterior beliefs under observer-selection update rules.
//!
//! The library evaluates how evidence about *being an observer at all* should
//! move belief between hypotheses. Three update rules are implemented:
//!
//! - **SSA−SIA**: treat yourself as a random sample from a chosen reference
//!   class of observers; likelihood of a hypothesis scales with the fraction
//!   of that class sharing your evidence.
//! - **SSA+SIA**: additionally reweight hypotheses by how many observers they
//!   contain, which cancels the reference-class denominator.
//! - **FNC** (full non-indexical conditioning): condition on "at least one
//!   observer with exactly your memories exists", with a per-observer match
//!   probability; no reference-class choice is needed.
//!
//! Scenarios are declarative (hypotheses with priors, named observer classes
//! with per-hypothesis counts, an evidence set), and every computed posterior
//! carries an odds ledger so each update stage can be inspected and replayed.
//!
//! Two number domains are used, never mixed implicitly: exact rationals for
//! small discrete scenarios whose answers are fractions like 1/3 or 2/5, and
//! log10-domain [`num::Magnitude`] values for astronomically scaled counts
//! like 10^500.

pub mod catalog;
pub mod fermi;
pub mod infer;
pub mod num;
pub mod report;
pub mod scenario_text;
