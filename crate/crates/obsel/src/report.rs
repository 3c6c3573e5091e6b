//! Rendering for command-line output: significant-digit decimals, dual
//! fraction-and-decimal forms for exact values, aligned text tables, and a
//! comma-separated variant of each.
//!
//! Decimals are fixed at four significant digits. Exact rationals print as
//! the fraction followed by the rounded decimal (`1/3 ≈ 0.3333`); integers
//! print once, since the integer already is its own decimal. Log-domain
//! magnitudes print as decimals while they fit in floating point and fall
//! back to the `10^k` form beyond that.

use crate::infer::{AnyPosterior, Posterior, Quantity, Weight};
use crate::num::{ExactProb, Magnitude};
use std::fmt::Write as _;
use std::str::FromStr;

/// How tabular output should be rendered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    /// Aligned, human-readable columns.
    #[default]
    Text,
    /// Comma-separated values with a header row.
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format {other:?} (expected text or csv)")),
        }
    }
}

/// Number of significant digits in rendered decimals.
pub const REPORT_DIGITS: usize = 4;

/// Formats `x` to [`REPORT_DIGITS`] significant digits.
pub fn sig4(x: f64) -> String {
    sig_digits(x, REPORT_DIGITS)
}

/// Formats `x` to the given number of significant digits, switching to
/// scientific notation once the plain form would need padding zeros well
/// past the significant ones.
pub fn sig_digits(x: f64, digits: usize) -> String {
    assert!(digits >= 1, "at least one significant digit");
    if x == 0.0 {
        return format!("{:.*}", digits - 1, 0.0);
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-5..=3).contains(&exponent) {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}

/// Renders an exact rational: bare integers as themselves, everything else
/// as `a/b ≈ 0.xxxx`.
pub fn exact_text(x: &ExactProb) -> String {
    if x.is_integer() {
        x.to_string()
    } else {
        format!("{x} \u{2248} {}", sig4(x.to_f64()))
    }
}

/// Renders a log-domain magnitude: a four-digit decimal while the value is
/// representable, the `10^k` form once it is not.
pub fn magnitude_text(m: Magnitude) -> String {
    if m.is_zero() {
        return "0".to_string();
    }
    if m.log10().abs() <= 300.0 {
        sig4(m.value())
    } else {
        m.to_string()
    }
}

/// Renders a quantity from either number domain.
pub fn quantity_text(q: &Quantity) -> String {
    match q {
        Quantity::Exact(x) => exact_text(x),
        Quantity::Log(m) => magnitude_text(*m),
    }
}

/// A header row plus data rows, renderable as aligned text or CSV.
#[derive(Debug, Clone)]
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<I, S>(headers: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row, which must match the header width.
    pub fn push_row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let row: Vec<String> = cells.into_iter().map(Into::into).collect();
        assert_eq!(
            row.len(),
            self.headers.len(),
            "table row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.render_text(),
            OutputFormat::Csv => self.render_csv(),
        }
    }

    fn render_text(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        for row in std::iter::once(&self.headers).chain(&self.rows) {
            let mut line = String::new();
            for (i, (cell, width)) in row.iter().zip(&widths).enumerate() {
                if i > 0 {
                    line.push_str("  ");
                }
                line.push_str(cell);
                if i + 1 < row.len() {
                    for _ in cell.chars().count()..*width {
                        line.push(' ');
                    }
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        for row in std::iter::once(&self.headers).chain(&self.rows) {
            let fields: Vec<String> = row.iter().map(|c| csv_field(c)).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

/// Quotes a CSV field when it contains a delimiter, quote, or newline.
fn csv_field(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Renders a posterior with its full odds ledger.
///
/// Text mode prints one `P(...)` line per hypothesis, the stage-by-stage
/// ledger as an aligned table, and any notes the computation attached. CSV
/// mode emits one row per ledger cell with columns
/// `section,label,hypothesis,exact,log10,value`.
pub fn posterior_report(posterior: &AnyPosterior, format: OutputFormat) -> String {
    match posterior {
        AnyPosterior::Exact(p) => posterior_report_inner(p, format, exact_text, |x| {
            (x.to_string(), String::new(), full_f64(x.to_f64()))
        }),
        AnyPosterior::Log(p) => posterior_report_inner(
            p,
            format,
            |m| magnitude_text(*m),
            |m| {
                let log10 = if m.is_zero() {
                    "-inf".to_string()
                } else {
                    full_f64(m.log10())
                };
                (String::new(), log10, full_f64(m.value()))
            },
        ),
    }
}

/// Shortest representation of `x` that parses back to the same value.
fn full_f64(x: f64) -> String {
    format!("{x}")
}

fn posterior_report_inner<W: Weight>(
    posterior: &Posterior<W>,
    format: OutputFormat,
    text_cell: impl Fn(&W) -> String,
    csv_cell: impl Fn(&W) -> (String, String, String),
) -> String {
    let hypotheses = posterior.hypotheses();
    match format {
        OutputFormat::Text => {
            let mut out = String::new();
            for (name, prob) in hypotheses.iter().zip(posterior.probs()) {
                let _ = writeln!(out, "P({name}) = {}", text_cell(prob));
            }
            out.push('\n');
            let mut table = Table::new(
                std::iter::once("stage".to_string()).chain(hypotheses.iter().cloned()),
            );
            let mut push = |label: &str, weights: &[W]| {
                table.push_row(
                    std::iter::once(label.to_string())
                        .chain(weights.iter().map(&text_cell)),
                );
            };
            push("prior", posterior.prior());
            for stage in posterior.stages() {
                push(&stage.label, &stage.multipliers);
            }
            push("posterior", posterior.probs());
            out.push_str(&table.render(OutputFormat::Text));
            for note in posterior.notes() {
                let _ = writeln!(out, "note: {note}");
            }
            out
        }
        OutputFormat::Csv => {
            let mut table = Table::new(["section", "label", "hypothesis", "exact", "log10", "value"]);
            let mut push = |section: &str, label: &str, weights: &[W]| {
                for (name, w) in hypotheses.iter().zip(weights) {
                    let (exact, log10, value) = csv_cell(w);
                    table.push_row([
                        section.to_string(),
                        label.to_string(),
                        name.clone(),
                        exact,
                        log10,
                        value,
                    ]);
                }
            };
            push("prior", "", posterior.prior());
            for stage in posterior.stages() {
                push("stage", &stage.label, &stage.multipliers);
            }
            push("posterior", "", posterior.probs());
            table.render(OutputFormat::Csv)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::sleeping_beauty_posterior;
    use crate::infer::UpdateRule;

    #[test]
    fn four_significant_digits_across_scales() {
        assert_eq!(sig4(0.0), "0.000");
        assert_eq!(sig4(1.0), "1.000");
        assert_eq!(sig4(1.0 / 3.0), "0.3333");
        assert_eq!(sig4(2.0 / 3.0), "0.6667");
        assert_eq!(sig4(0.000999001), "0.0009990");
        assert_eq!(sig4(-0.9078965962802381), "-0.9079");
        assert_eq!(sig4(1234.5), "1234");
        assert_eq!(sig4(123456.0), "1.235e5");
        assert_eq!(sig4(1e-9), "1.000e-9");
        assert_eq!(sig4(f64::INFINITY), "inf");
    }

    #[test]
    fn exact_values_print_fraction_and_decimal_together() {
        assert_eq!(exact_text(&ExactProb::frac(1, 3)), "1/3 \u{2248} 0.3333");
        assert_eq!(exact_text(&ExactProb::frac(4, 2)), "2");
        assert_eq!(exact_text(&ExactProb::zero()), "0");
    }

    #[test]
    fn magnitudes_fall_back_to_powers_only_when_they_must() {
        assert_eq!(magnitude_text(Magnitude::from_value(0.5)), "0.5000");
        assert_eq!(magnitude_text(Magnitude::pow10(11)), "1.000e11");
        assert_eq!(magnitude_text(Magnitude::pow10(490)), "10^490");
        assert_eq!(magnitude_text(Magnitude::pow10(-494)), "10^-494");
        assert_eq!(magnitude_text(Magnitude::from_value(0.0)), "0");
    }

    #[test]
    fn text_tables_align_and_trim() {
        let mut table = Table::new(["stage", "Heads", "Tails"]);
        table.push_row(["prior", "1/2 \u{2248} 0.5000", "1/2 \u{2248} 0.5000"]);
        table.push_row(["sia", "1", "2"]);
        let text = table.render(OutputFormat::Text);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("stage  Heads"));
        assert!(lines[1].starts_with("prior  1/2"));
        assert!(lines[2].starts_with("sia    1"));
        for line in lines {
            assert_eq!(line, line.trim_end());
        }
    }

    #[test]
    fn csv_tables_escape_delimiters() {
        let mut table = Table::new(["a", "b"]);
        table.push_row(["plain", "with, comma"]);
        table.push_row(["quote \"q\"", "multi\nline"]);
        let csv = table.render(OutputFormat::Csv);
        assert_eq!(
            csv,
            "a,b\nplain,\"with, comma\"\n\"quote \"\"q\"\"\",\"multi\nline\"\n"
        );
    }

    #[test]
    fn posterior_text_report_carries_p_lines_ledger_and_notes() {
        let posterior = sleeping_beauty_posterior(1, 2, UpdateRule::Fnc).unwrap();
        let text = posterior_report(&posterior, OutputFormat::Text);
        assert!(text.contains("P(Heads) = 1/3"), "report was:\n{text}");
        assert!(text.contains("P(Tails) = 2/3"), "report was:\n{text}");
        assert!(text.lines().any(|l| l.starts_with("stage")));
        assert!(text.lines().any(|l| l.starts_with("prior")));
        assert!(text.lines().any(|l| l.starts_with("posterior")));
        assert!(text.contains("note:"), "report was:\n{text}");
    }

    #[test]
    fn posterior_csv_report_has_one_row_per_cell() {
        let posterior = sleeping_beauty_posterior(1, 2, UpdateRule::SsaSia).unwrap();
        let csv = posterior_report(&posterior, OutputFormat::Csv);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "section,label,hypothesis,exact,log10,value");
        let stages = posterior.as_exact().unwrap().stages().len();
        assert_eq!(lines.len(), 1 + 2 * (stages + 2));
        assert!(lines.iter().any(|l| l.starts_with("posterior,,Heads,1/3,")));
    }
}
