//! Line-oriented scenario files: parsing into a [`ScenarioDocument`] and
//! serializing back out.
//!
//! One directive per line; `#` starts a comment anywhere; blank lines are
//! ignored. The header must come first, the rest may appear in any order:
//!
//! ```text
//! scenario <name>
//! rule = ssa | ssa+sia | fnc            # optional requested update rule
//! class = <class-name>                  # optional requested class
//! [hypothesis] name=<id> prior=<number>
//! [class] name=<id>
//! count <hypothesis> = <number>
//! [evidence]
//! count <hypothesis> = <number>
//! epsilon <hypothesis> = <number>
//! ```
//!
//! `count` and `epsilon` rows attach to the most recent `[class]` or
//! `[evidence]` block. Numbers are integers (`3`), fractions (`2/5`), finite
//! decimals (`0.25`), or powers `10^k` with integer `k`, which select the
//! log10 number domain. Unknown directives and keys are errors, not
//! warnings. Identifiers are single words without `=` or `#`.
//!
//! Serializing a parsed document and re-parsing it yields an equal document.

use crate::infer::{
    EvidenceSet, Hypothesis, InferError, Quantity, ReferenceClass, Scenario, UpdateRule,
};
use std::fmt::Write as _;
use thiserror::Error;

/// A parsed scenario file: the scenario itself plus the file's requested
/// update rule and reference class, where present.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioDocument {
    pub scenario: Scenario,
    pub rule: Option<UpdateRule>,
    pub class: Option<String>,
}

/// Parse failures, each anchored to where the problem is.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    /// The text does not fit the grammar.
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// The text fits the grammar but describes an inconsistent scenario.
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn semantic(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Semantic {
        line,
        message: message.into(),
    }
}

/// A value row (`count H = 3` or `epsilon H = 1/1000`) waiting to be
/// resolved against the declared hypotheses.
struct Row {
    line: usize,
    hypothesis: String,
    value: Quantity,
}

struct ClassBlock {
    line: usize,
    name: String,
    rows: Vec<Row>,
}

#[derive(Default)]
struct EvidenceBlock {
    line: usize,
    counts: Vec<Row>,
    epsilons: Vec<Row>,
}

/// Which block subsequent `count`/`epsilon` rows attach to.
enum Section {
    None,
    Class,
    Evidence,
}

#[derive(Default)]
struct Collected {
    header: Option<(usize, String)>,
    rule: Option<(usize, UpdateRule)>,
    requested_class: Option<(usize, String)>,
    hypotheses: Vec<(usize, Hypothesis)>,
    classes: Vec<ClassBlock>,
    evidence: Option<EvidenceBlock>,
}

/// Parses a scenario file.
pub fn parse_scenario(text: &str) -> Result<ScenarioDocument, ParseError> {
    let mut doc = Collected::default();
    let mut section = Section::None;

    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let content = &raw[..raw.find('#').unwrap_or(raw.len())];
        if content.trim().is_empty() {
            continue;
        }
        let (word_off, word, rest_off, rest) = split_first_word(content);
        let word_col = char_col(raw, word_off);

        if doc.header.is_none() && word != "scenario" {
            return Err(syntax(
                line_no,
                word_col,
                format!("expected `scenario <name>` before {word:?}"),
            ));
        }

        match word {
            "scenario" => {
                if doc.header.is_some() {
                    return Err(semantic(line_no, "a second scenario header"));
                }
                let name = identifier(line_no, raw, rest_off, rest, "scenario name")?;
                doc.header = Some((line_no, name));
                section = Section::None;
            }
            "rule" => {
                if doc.rule.is_some() {
                    return Err(semantic(line_no, "a second rule line"));
                }
                let (value_off, value) = assignment(line_no, raw, rest_off, rest, "rule")?;
                let rule = value.parse::<UpdateRule>().map_err(|_| {
                    syntax(
                        line_no,
                        char_col(raw, value_off),
                        format!("unknown update rule {value:?}: expected ssa, ssa+sia, or fnc"),
                    )
                })?;
                doc.rule = Some((line_no, rule));
                section = Section::None;
            }
            "class" => {
                if doc.requested_class.is_some() {
                    return Err(semantic(line_no, "a second class line"));
                }
                let (value_off, value) = assignment(line_no, raw, rest_off, rest, "class")?;
                let name = identifier(line_no, raw, value_off, value, "class name")?;
                doc.requested_class = Some((line_no, name));
                section = Section::None;
            }
            "[hypothesis]" => {
                let pairs = key_value_pairs(line_no, raw, rest_off, rest, &["name", "prior"])?;
                let name = require_pair(line_no, word_col, &pairs, "name", "[hypothesis]")?;
                let prior = require_pair(line_no, word_col, &pairs, "prior", "[hypothesis]")?;
                let name = identifier(line_no, raw, name.0, name.1, "hypothesis name")?;
                let prior = quantity(line_no, raw, prior.0, prior.1)?;
                doc.hypotheses.push((line_no, Hypothesis { name, prior }));
                section = Section::None;
            }
            "[class]" => {
                let pairs = key_value_pairs(line_no, raw, rest_off, rest, &["name"])?;
                let name = require_pair(line_no, word_col, &pairs, "name", "[class]")?;
                let name = identifier(line_no, raw, name.0, name.1, "class name")?;
                doc.classes.push(ClassBlock {
                    line: line_no,
                    name,
                    rows: Vec::new(),
                });
                section = Section::Class;
            }
            "[evidence]" => {
                if !rest.trim().is_empty() {
                    return Err(syntax(
                        line_no,
                        char_col(raw, rest_off),
                        "unexpected text after [evidence]",
                    ));
                }
                if doc.evidence.is_some() {
                    return Err(semantic(line_no, "a second [evidence] block"));
                }
                doc.evidence = Some(EvidenceBlock {
                    line: line_no,
                    ..EvidenceBlock::default()
                });
                section = Section::Evidence;
            }
            "count" => {
                let row = value_row(line_no, raw, rest_off, rest)?;
                match section {
                    Section::Class => {
                        doc.classes.last_mut().expect("section tracks classes").rows.push(row);
                    }
                    Section::Evidence => {
                        doc.evidence.as_mut().expect("section tracks evidence").counts.push(row);
                    }
                    Section::None => {
                        return Err(semantic(
                            line_no,
                            "count row outside any [class] or [evidence] block",
                        ));
                    }
                }
            }
            "epsilon" => {
                let row = value_row(line_no, raw, rest_off, rest)?;
                match section {
                    Section::Evidence => {
                        doc.evidence.as_mut().expect("section tracks evidence").epsilons.push(row);
                    }
                    _ => {
                        return Err(semantic(
                            line_no,
                            "epsilon rows belong in the [evidence] block",
                        ));
                    }
                }
            }
            other => {
                return Err(syntax(
                    line_no,
                    word_col,
                    format!("unknown directive {other:?}"),
                ));
            }
        }
    }

    resolve(doc)
}

/// Cross-line consistency checks, then assembly into a validated document.
fn resolve(doc: Collected) -> Result<ScenarioDocument, ParseError> {
    let (header_line, name) = doc
        .header
        .ok_or_else(|| syntax(1, 1, "missing `scenario <name>` header"))?;

    if doc.hypotheses.is_empty() {
        return Err(semantic(header_line, "no [hypothesis] blocks declared"));
    }
    for (i, (line, hypothesis)) in doc.hypotheses.iter().enumerate() {
        if doc.hypotheses[..i].iter().any(|(_, h)| h.name == hypothesis.name) {
            return Err(semantic(
                *line,
                format!("duplicate hypothesis {:?}", hypothesis.name),
            ));
        }
    }
    let hypothesis_names: Vec<&str> =
        doc.hypotheses.iter().map(|(_, h)| h.name.as_str()).collect();

    let mut classes = Vec::new();
    for (i, block) in doc.classes.iter().enumerate() {
        if doc.classes[..i].iter().any(|b| b.name == block.name) {
            return Err(semantic(
                block.line,
                format!("duplicate class {:?}", block.name),
            ));
        }
        let counts = resolve_rows(
            &block.rows,
            &hypothesis_names,
            block.line,
            "count",
            &format!("class {:?}", block.name),
        )?;
        classes.push(ReferenceClass {
            name: block.name.clone(),
            counts,
        });
    }

    let mut evidence = EvidenceSet::default();
    if let Some(block) = &doc.evidence {
        if block.counts.is_empty() && block.epsilons.is_empty() {
            return Err(semantic(
                block.line,
                "empty [evidence] block: expected count or epsilon rows",
            ));
        }
        if !block.counts.is_empty() {
            evidence.counts = Some(resolve_rows(
                &block.counts,
                &hypothesis_names,
                block.line,
                "count",
                "the [evidence] block",
            )?);
        }
        if !block.epsilons.is_empty() {
            evidence.epsilon = Some(resolve_rows(
                &block.epsilons,
                &hypothesis_names,
                block.line,
                "epsilon",
                "the [evidence] block",
            )?);
        }
    }

    if let Some((line, requested)) = &doc.requested_class {
        if !classes.iter().any(|c| &c.name == requested) {
            return Err(semantic(
                *line,
                format!("requested class {requested:?} is not declared by any [class] block"),
            ));
        }
    }

    let first_hypothesis_line = doc.hypotheses[0].0;
    let scenario = Scenario {
        name,
        hypotheses: doc.hypotheses.into_iter().map(|(_, h)| h).collect(),
        classes,
        evidence,
    };
    scenario.validate().map_err(|err| match err {
        InferError::BadPriors(sum) => semantic(
            first_hypothesis_line,
            format!("priors in the [hypothesis] block sum to {sum}, not 1"),
        ),
        other => semantic(header_line, other.to_string()),
    })?;

    Ok(ScenarioDocument {
        scenario,
        rule: doc.rule.map(|(_, r)| r),
        class: doc.requested_class.map(|(_, c)| c),
    })
}

/// Orders a block's rows by hypothesis declaration order, rejecting unknown
/// names, duplicates, and gaps.
fn resolve_rows(
    rows: &[Row],
    hypotheses: &[&str],
    block_line: usize,
    kind: &str,
    owner: &str,
) -> Result<Vec<Quantity>, ParseError> {
    let mut ordered: Vec<Option<&Quantity>> = vec![None; hypotheses.len()];
    for row in rows {
        let index = hypotheses
            .iter()
            .position(|h| *h == row.hypothesis)
            .ok_or_else(|| {
                semantic(
                    row.line,
                    format!("unknown hypothesis {:?} in a {kind} row", row.hypothesis),
                )
            })?;
        if ordered[index].is_some() {
            return Err(semantic(
                row.line,
                format!(
                    "duplicate {kind} for hypothesis {:?} in {owner}",
                    row.hypothesis
                ),
            ));
        }
        ordered[index] = Some(&row.value);
    }
    ordered
        .into_iter()
        .enumerate()
        .map(|(i, slot)| {
            slot.cloned().ok_or_else(|| {
                semantic(
                    block_line,
                    format!("{owner} is missing a {kind} for hypothesis {:?}", hypotheses[i]),
                )
            })
        })
        .collect()
}

/// Renders a document in the grammar above. Parsing the result yields an
/// equal document, provided every log-domain quantity has an integer
/// exponent (the only kind the grammar can express, and the only kind
/// parsing produces).
pub fn serialize_scenario(doc: &ScenarioDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario {}", doc.scenario.name);
    if let Some(rule) = doc.rule {
        let _ = writeln!(out, "rule = {rule}");
    }
    if let Some(class) = &doc.class {
        let _ = writeln!(out, "class = {class}");
    }
    out.push('\n');
    for h in &doc.scenario.hypotheses {
        let _ = writeln!(out, "[hypothesis] name={} prior={}", h.name, h.prior);
    }
    for class in &doc.scenario.classes {
        out.push('\n');
        let _ = writeln!(out, "[class] name={}", class.name);
        for (h, count) in doc.scenario.hypotheses.iter().zip(&class.counts) {
            let _ = writeln!(out, "count {} = {}", h.name, count);
        }
    }
    let evidence = &doc.scenario.evidence;
    if evidence.counts.is_some() || evidence.epsilon.is_some() {
        out.push('\n');
        out.push_str("[evidence]\n");
        if let Some(counts) = &evidence.counts {
            for (h, count) in doc.scenario.hypotheses.iter().zip(counts) {
                let _ = writeln!(out, "count {} = {}", h.name, count);
            }
        }
        if let Some(epsilon) = &evidence.epsilon {
            for (h, eps) in doc.scenario.hypotheses.iter().zip(epsilon) {
                let _ = writeln!(out, "epsilon {} = {}", h.name, eps);
            }
        }
    }
    out
}

/// Splits a line into its first word and the remainder, with byte offsets.
fn split_first_word(content: &str) -> (usize, &str, usize, &str) {
    let trimmed_start = content.len() - content.trim_start().len();
    let trimmed = content.trim_start();
    let word_len = trimmed
        .char_indices()
        .find(|(_, c)| c.is_whitespace())
        .map(|(i, _)| i)
        .unwrap_or(trimmed.len());
    let word = &trimmed[..word_len];
    let rest_off = trimmed_start + word_len;
    (trimmed_start, word, rest_off, &content[rest_off..])
}

/// 1-based character column of a byte offset within a line.
fn char_col(line: &str, byte_offset: usize) -> usize {
    line[..byte_offset].chars().count() + 1
}

/// Parses `= <value>` after a top-level key, returning the value's offset.
fn assignment<'a>(
    line_no: usize,
    raw: &str,
    rest_off: usize,
    rest: &'a str,
    key: &str,
) -> Result<(usize, &'a str), ParseError> {
    let at_equals = rest_off + (rest.len() - rest.trim_start().len());
    let trimmed = rest.trim_start();
    let Some(value_raw) = trimmed.strip_prefix('=') else {
        return Err(syntax(
            line_no,
            char_col(raw, at_equals),
            format!("expected `=` after {key}"),
        ));
    };
    let value_off = at_equals + 1 + (value_raw.len() - value_raw.trim_start().len());
    let value = value_raw.trim();
    if value.is_empty() {
        return Err(syntax(
            line_no,
            char_col(raw, value_off),
            format!("missing value after `{key} =`"),
        ));
    }
    Ok((value_off, value))
}

/// A parsed `key=value` token: the key plus the value with its byte offset.
type KeyValue<'a> = (String, (usize, &'a str));

/// Parses `key=value` tokens, enforcing the allowed key set and uniqueness.
/// Returned pairs carry the value's byte offset for error anchoring.
fn key_value_pairs<'a>(
    line_no: usize,
    raw: &str,
    rest_off: usize,
    rest: &'a str,
    allowed: &[&str],
) -> Result<Vec<KeyValue<'a>>, ParseError> {
    let mut pairs: Vec<KeyValue<'a>> = Vec::new();
    for (token_off, token) in tokens_with_offsets(rest, rest_off) {
        let column = char_col(raw, token_off);
        let Some((key, value)) = token.split_once('=') else {
            return Err(syntax(
                line_no,
                column,
                format!("expected key=value, got {token:?}"),
            ));
        };
        if key.is_empty() || value.is_empty() {
            return Err(syntax(
                line_no,
                column,
                format!("expected key=value, got {token:?}"),
            ));
        }
        if !allowed.contains(&key) {
            return Err(syntax(
                line_no,
                column,
                format!("unknown key {key:?}: expected {}", allowed.join(", ")),
            ));
        }
        if pairs.iter().any(|(k, _)| k == key) {
            return Err(syntax(line_no, column, format!("duplicate key {key:?}")));
        }
        pairs.push((key.to_string(), (token_off + key.len() + 1, value)));
    }
    Ok(pairs)
}

fn require_pair<'a>(
    line_no: usize,
    column: usize,
    pairs: &[KeyValue<'a>],
    key: &str,
    owner: &str,
) -> Result<(usize, &'a str), ParseError> {
    pairs
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| syntax(line_no, column, format!("{owner} is missing {key}=")))
}

/// Parses `<hypothesis> = <number>` after `count` or `epsilon`.
fn value_row(line_no: usize, raw: &str, rest_off: usize, rest: &str) -> Result<Row, ParseError> {
    let Some(equals) = rest.find('=') else {
        return Err(syntax(
            line_no,
            char_col(raw, rest_off + rest.len()),
            "expected `<hypothesis> = <number>`",
        ));
    };
    let hypothesis = identifier(line_no, raw, rest_off, &rest[..equals], "hypothesis name")?;
    let value_raw = &rest[equals + 1..];
    let value_off = rest_off + equals + 1 + (value_raw.len() - value_raw.trim_start().len());
    let value = quantity(line_no, raw, value_off, value_raw.trim())?;
    Ok(Row {
        line: line_no,
        hypothesis,
        value,
    })
}

/// Validates a single-word identifier free of `=` and `#`.
fn identifier(
    line_no: usize,
    raw: &str,
    offset: usize,
    text: &str,
    what: &str,
) -> Result<String, ParseError> {
    let column = char_col(raw, offset + (text.len() - text.trim_start().len()));
    let value = text.trim();
    if value.is_empty() {
        return Err(syntax(line_no, column, format!("missing {what}")));
    }
    if value.chars().any(char::is_whitespace) || value.contains('=') {
        return Err(syntax(
            line_no,
            column,
            format!("{what} must be a single word without `=`, got {value:?}"),
        ));
    }
    Ok(value.to_string())
}

fn quantity(
    line_no: usize,
    raw: &str,
    offset: usize,
    text: &str,
) -> Result<Quantity, ParseError> {
    text.parse::<Quantity>().map_err(|_| {
        syntax(
            line_no,
            char_col(raw, offset),
            format!(
                "malformed number {text:?}: expected an integer, a/b, a decimal, or 10^k"
            ),
        )
    })
}

fn tokens_with_offsets(text: &str, base: usize) -> Vec<(usize, &str)> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push((base + s, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push((base + s, &text[s..]));
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infer::{ssa_posterior, NumberDomain};

    const DOOMSDAY: &str = "\
# A two-horizon population comparison.
scenario doomsday
rule = ssa
class = everyone

[hypothesis] name=short prior=1/2
[hypothesis] name=long prior=1/2

[class] name=everyone
count short = 10^11
count long = 10^14

[evidence]
count short = 1
count long = 1
";

    #[test]
    fn minimal_document_parses_with_even_priors() {
        let doc = parse_scenario(
            "scenario tiny\n[hypothesis] name=A prior=1/2\n[hypothesis] name=B prior=0.5\n",
        )
        .unwrap();
        assert_eq!(doc.scenario.name, "tiny");
        assert_eq!(doc.rule, None);
        assert_eq!(doc.class, None);
        assert_eq!(doc.scenario.hypotheses.len(), 2);
        for h in &doc.scenario.hypotheses {
            assert_eq!(h.prior, Quantity::frac(1, 2));
        }
        assert_eq!(doc.scenario.domain(), NumberDomain::Exact);
    }

    #[test]
    fn doomsday_document_reproduces_the_population_shift() {
        let doc = parse_scenario(DOOMSDAY).unwrap();
        assert_eq!(doc.rule, Some(UpdateRule::SsaOnly));
        assert_eq!(doc.class.as_deref(), Some("everyone"));
        let posterior = ssa_posterior(&doc.scenario, "everyone").unwrap();
        let p_long = posterior.prob_f64("long").unwrap();
        assert!(
            (p_long - 0.000999001).abs() < 1e-9,
            "P(long) came out {p_long}"
        );
    }

    #[test]
    fn comments_blanks_and_trailing_comments_are_ignored() {
        let doc = parse_scenario(
            "# header comment\n\nscenario c   # trailing\n\n[hypothesis] name=A prior=1/3 # third\n[hypothesis] name=B prior=2/3\n\n",
        )
        .unwrap();
        assert_eq!(doc.scenario.hypotheses[0].prior, Quantity::frac(1, 3));
    }

    #[test]
    fn round_trip_preserves_the_document() {
        let doc = parse_scenario(DOOMSDAY).unwrap();
        let text = serialize_scenario(&doc);
        let again = parse_scenario(&text).unwrap();
        assert_eq!(doc, again);
        assert_eq!(text, serialize_scenario(&again));
    }

    #[test]
    fn round_trip_covers_epsilon_and_fractional_counts() {
        let source = "\
scenario sailors
rule = fnc

[hypothesis] name=one prior=1/2
[hypothesis] name=two prior=1/2

[class] name=children
count one = 1
count two = 2

[evidence]
count one = 1/2
count two = 1
epsilon one = 1/1000000
epsilon two = 1/1000000
";
        let doc = parse_scenario(source).unwrap();
        let again = parse_scenario(&serialize_scenario(&doc)).unwrap();
        assert_eq!(doc, again);
        assert_eq!(
            doc.scenario.evidence.counts.as_ref().unwrap()[0],
            Quantity::frac(1, 2)
        );
    }

    #[test]
    fn prior_sum_failure_names_the_hypothesis_block() {
        let err = parse_scenario(
            "scenario bad\n[hypothesis] name=A prior=0.5\n[hypothesis] name=B prior=0.4\n",
        )
        .unwrap_err();
        match err {
            ParseError::Semantic { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("[hypothesis]"), "message was {message:?}");
                assert!(message.contains("9/10"), "message was {message:?}");
            }
            other => panic!("expected a semantic error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_directives_and_keys_are_syntax_errors() {
        let err = parse_scenario("scenario x\nwibble = 3\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, column: 1, .. }));

        let err = parse_scenario("scenario x\n[hypothesis] name=A prior=1 weight=2\n").unwrap_err();
        match err {
            ParseError::Syntax { line, column, message } => {
                assert_eq!(line, 2);
                assert_eq!(column, 29);
                assert!(message.contains("unknown key \"weight\""));
            }
            other => panic!("expected a syntax error, got {other:?}"),
        }

        let err = parse_scenario("scenario x\n[evidence] name=A\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }));
    }

    #[test]
    fn malformed_numbers_report_line_and_column() {
        let err = parse_scenario("scenario x\n[hypothesis] name=A prior=10^1.5\n").unwrap_err();
        match err {
            ParseError::Syntax { line, column, message } => {
                assert_eq!(line, 2);
                assert_eq!(column, 27);
                assert!(message.contains("10^1.5"));
            }
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn rows_must_sit_inside_a_block() {
        let err = parse_scenario("scenario x\n[hypothesis] name=A prior=1\ncount A = 1\n")
            .unwrap_err();
        assert!(matches!(err, ParseError::Semantic { line: 3, .. }));

        let err = parse_scenario(
            "scenario x\n[hypothesis] name=A prior=1\n[class] name=c\nepsilon A = 1\n",
        )
        .unwrap_err();
        match err {
            ParseError::Semantic { line, message } => {
                assert_eq!(line, 4);
                assert!(message.contains("[evidence]"));
            }
            other => panic!("expected a semantic error, got {other:?}"),
        }
    }

    #[test]
    fn count_rows_are_checked_against_declared_hypotheses() {
        let base = "scenario x\n[hypothesis] name=A prior=1/2\n[hypothesis] name=B prior=1/2\n";

        let err = parse_scenario(&format!("{base}[class] name=c\ncount A = 1\ncount C = 2\n"))
            .unwrap_err();
        match err {
            ParseError::Semantic { line, message } => {
                assert_eq!(line, 6);
                assert!(message.contains("unknown hypothesis \"C\""));
            }
            other => panic!("expected a semantic error, got {other:?}"),
        }

        let err = parse_scenario(&format!("{base}[class] name=c\ncount A = 1\n")).unwrap_err();
        match err {
            ParseError::Semantic { line, message } => {
                assert_eq!(line, 4);
                assert!(message.contains("missing a count for hypothesis \"B\""));
            }
            other => panic!("expected a semantic error, got {other:?}"),
        }

        let err = parse_scenario(&format!(
            "{base}[class] name=c\ncount A = 1\ncount B = 2\ncount A = 3\n"
        ))
        .unwrap_err();
        assert!(matches!(err, ParseError::Semantic { line: 7, .. }));
    }

    #[test]
    fn requested_class_must_exist() {
        let err = parse_scenario(
            "scenario x\nclass = nowhere\n[hypothesis] name=A prior=1\n",
        )
        .unwrap_err();
        match err {
            ParseError::Semantic { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("\"nowhere\""));
            }
            other => panic!("expected a semantic error, got {other:?}"),
        }
    }

    #[test]
    fn header_must_come_first_and_be_unique() {
        let err = parse_scenario("[hypothesis] name=A prior=1\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, .. }));

        let err = parse_scenario("scenario a\nscenario b\n").unwrap_err();
        assert!(matches!(err, ParseError::Semantic { line: 2, .. }));

        let err = parse_scenario("# only comments\n\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, column: 1, .. }));
    }

    #[test]
    fn rule_lines_are_validated() {
        let err = parse_scenario("scenario x\nrule = sia\n[hypothesis] name=A prior=1\n")
            .unwrap_err();
        match err {
            ParseError::Syntax { line, column, message } => {
                assert_eq!(line, 2);
                assert_eq!(column, 8);
                assert!(message.contains("ssa+sia"));
            }
            other => panic!("expected a syntax error, got {other:?}"),
        }

        let err = parse_scenario("scenario x\nrule ssa\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, column: 6, .. }));

        let err =
            parse_scenario("scenario x\nrule = ssa\nrule = fnc\n[hypothesis] name=A prior=1\n")
                .unwrap_err();
        assert!(matches!(err, ParseError::Semantic { line: 3, .. }));
    }

    #[test]
    fn empty_evidence_blocks_are_rejected() {
        let err = parse_scenario(
            "scenario x\n[hypothesis] name=A prior=1\n[evidence]\n",
        )
        .unwrap_err();
        match err {
            ParseError::Semantic { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("empty [evidence]"));
            }
            other => panic!("expected a semantic error, got {other:?}"),
        }
    }

    #[test]
    fn serializer_handles_documents_without_requests() {
        let doc = parse_scenario(
            "scenario bare\n[hypothesis] name=A prior=1/4\n[hypothesis] name=B prior=3/4\n",
        )
        .unwrap();
        let text = serialize_scenario(&doc);
        assert!(!text.contains("rule ="));
        assert!(!text.contains("class ="));
        assert!(!text.contains("[evidence]"));
        assert_eq!(parse_scenario(&text).unwrap(), doc);
    }
}
