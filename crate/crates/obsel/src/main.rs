//! Command-line front end: catalog listing and execution, scenario-file
//! runs, pinned-result checks, interference-model sampling, and reference
//! tables.
//!
//! Exit codes: 0 on success, 1 for internal or runtime failures, 2 for
//! input and validation errors.

use clap::{Args, Parser, Subcommand};
use obsel::catalog::{
    catalog, find_entry, marochnik_table, run_entry, CatalogEntry, DuplicateThreshold,
    EntryOutput, FPower, MarochnikClass, MarochnikRow, RunArgs, StarRegime,
};
use obsel::fermi::{
    analytic_factor_posterior, analytic_parent_marginal, emit_plot_points, factor_posterior,
    sample_posterior, FactorParent, FactorSpec, FactorSummary, FermiError, FermiParams,
    FermiPrior, FermiSampleSet,
};
use obsel::infer::{posterior_under, InferError, Quantity, UpdateRule};
use obsel::report::{posterior_report, quantity_text, sig4, OutputFormat, Table};
use obsel::scenario_text::{parse_scenario, ParseError};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "obsel",
    about = "Posterior beliefs under observer-selection update rules"
)]
struct Cli {
    /// Output format for tables and reports (text or csv).
    #[arg(long, global = true, default_value = "text", value_name = "FORMAT")]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog entries with their options and parameters.
    List,
    /// Run a catalog entry or a scenario file and print the posterior with
    /// its full odds ledger.
    Run(RunCmd),
    /// Replay every catalog entry against its pinned expected results.
    Check,
    /// Sample or solve the interference model and summarize the posterior.
    Fermi(FermiCmd),
    /// Print reference tables.
    Table {
        #[command(subcommand)]
        table: TableKind,
    },
}

#[derive(Args)]
struct RunCmd {
    /// Catalog entry name or scenario file path.
    target: String,
    /// Update rule: ssa, ssa+sia, or fnc.
    #[arg(long)]
    rule: Option<UpdateRule>,
    /// Reference class name.
    #[arg(long)]
    class: Option<String>,
    /// Entry parameter as NAME=VALUE; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    param: Vec<String>,
}

#[derive(Args)]
struct FermiCmd {
    /// Interference volume; 0 selects the closed-form path.
    #[arg(long = "V")]
    v: f64,
    /// Number of accepted samples to draw.
    #[arg(long)]
    samples: u64,
    /// Random seed.
    #[arg(long)]
    seed: u64,
    /// Summarize a single sub-factor (p or f) instead of both.
    #[arg(long)]
    factor: Option<FactorParent>,
    /// Write posterior and prior point clouds plus the constraint diagonal
    /// to this file as comma-separated text.
    #[arg(long = "emit-plot", value_name = "PATH")]
    emit_plot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TableKind {
    /// Habitat-comparison odds ledger for both observer kinds under all
    /// four rule and reference-class combinations.
    Marochnik {
        /// Which observer kind is (vastly) more numerous: few or many
        /// star-dwellers relative to planet-dwellers.
        #[arg(long, value_parser = parse_regime, value_name = "few|many")]
        regime: StarRegime,
        /// Habitable fraction under the restricted-habitat theory.
        #[arg(long)]
        f: f64,
    },
}

fn parse_regime(s: &str) -> Result<StarRegime, String> {
    match s {
        "few" => Ok(StarRegime::FewStarBeings),
        "many" => Ok(StarRegime::ManyStarBeings),
        other => Err(format!("unknown regime {other:?} (expected few or many)")),
    }
}

/// Failures mapped onto the two nonzero exit codes.
enum CliError {
    /// Bad input: exit code 2.
    Validation(String),
    /// Internal or runtime failure: exit code 1.
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<InferError> for CliError {
    fn from(err: InferError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<ParseError> for CliError {
    fn from(err: ParseError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<FermiError> for CliError {
    fn from(err: FermiError) -> Self {
        match err {
            FermiError::Starved { .. } => CliError::Internal(err.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Internal(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    let format = cli.format;
    match cli.command {
        Command::List => {
            print!("{}", render_list(format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Run(cmd) => {
            print!("{}", run_command(&cmd, format)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Check => {
            let (report, all_pass) = render_check(format);
            print!("{report}");
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Fermi(cmd) => {
            print!("{}", fermi_command(&cmd, format)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Table { table } => {
            let TableKind::Marochnik { regime, f } = table;
            print!("{}", marochnik_command(regime, f, format)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn render_list(format: OutputFormat) -> String {
    let mut table = Table::new(["entry", "options", "summary"]);
    for entry in catalog() {
        let mut options: Vec<String> = Vec::new();
        if entry.takes_rule {
            options.push("--rule".to_string());
        }
        if entry.takes_class {
            options.push("--class".to_string());
        }
        for param in entry.params {
            options.push(format!("{}={}", param.name, param.default));
        }
        table.push_row([
            entry.name.to_string(),
            options.join(" "),
            entry.summary.to_string(),
        ]);
    }
    table.render(format)
}

fn render_check(format: OutputFormat) -> (String, bool) {
    let mut table = Table::new(["entry", "check", "expected", "actual", "status"]);
    let mut total = 0usize;
    let mut failed = 0usize;
    for entry in catalog() {
        for outcome in entry.check() {
            total += 1;
            if !outcome.pass {
                failed += 1;
            }
            table.push_row([
                entry.name.to_string(),
                outcome.label,
                outcome.expected,
                outcome.actual,
                if outcome.pass { "PASS" } else { "FAIL" }.to_string(),
            ]);
        }
    }
    let mut out = table.render(format);
    if format == OutputFormat::Text {
        if failed == 0 {
            out.push_str(&format!("\nall {total} checks passed\n"));
        } else {
            out.push_str(&format!("\n{failed} of {total} checks FAILED\n"));
        }
    }
    (out, failed == 0)
}

fn run_command(cmd: &RunCmd, format: OutputFormat) -> Result<String, CliError> {
    if let Some(entry) = find_entry(&cmd.target) {
        return run_catalog_entry(entry, cmd, format);
    }
    let looks_like_path = cmd.target.contains(['/', '.']) || Path::new(&cmd.target).exists();
    if looks_like_path {
        return run_scenario_file(&cmd.target, cmd, format);
    }
    Err(CliError::Validation(format!(
        "no catalog entry or file named {:?}; `list` shows the catalog",
        cmd.target
    )))
}

fn run_catalog_entry(
    entry: &CatalogEntry,
    cmd: &RunCmd,
    format: OutputFormat,
) -> Result<String, CliError> {
    let mut args = RunArgs {
        rule: cmd.rule,
        class: cmd.class.clone(),
        ..RunArgs::default()
    };
    for pair in &cmd.param {
        let Some((name, value)) = pair.split_once('=') else {
            return Err(CliError::Validation(format!(
                "malformed --param {pair:?}: expected NAME=VALUE"
            )));
        };
        args.params.insert(name.to_string(), value.to_string());
    }
    let output = run_entry(entry, &args)?;
    Ok(render_entry_output(&output, format))
}

fn run_scenario_file(path: &str, cmd: &RunCmd, format: OutputFormat) -> Result<String, CliError> {
    if !cmd.param.is_empty() {
        return Err(CliError::Validation(
            "--param applies to catalog entries, not scenario files".to_string(),
        ));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|err| CliError::Validation(format!("cannot read {path:?}: {err}")))?;
    let doc = parse_scenario(&text)
        .map_err(|err| CliError::Validation(format!("{path}: {err}")))?;
    let rule = cmd.rule.or(doc.rule).ok_or_else(|| {
        CliError::Validation(
            "no update rule: pass --rule=ssa|ssa+sia|fnc or add a `rule =` line".to_string(),
        )
    })?;
    let class = match cmd.class.clone().or(doc.class) {
        Some(class) => class,
        None => match doc.scenario.classes.as_slice() {
            [] => {
                return Err(CliError::Validation(
                    "the scenario declares no [class] block".to_string(),
                ))
            }
            [only] => only.name.clone(),
            many => {
                let names: Vec<&str> = many.iter().map(|c| c.name.as_str()).collect();
                return Err(CliError::Validation(format!(
                    "several reference classes declared ({}); pass --class or add a `class =` line",
                    names.join(", ")
                )));
            }
        },
    };
    let posterior = posterior_under(rule, &doc.scenario, &class)?;
    Ok(posterior_report(&posterior, format))
}

fn render_entry_output(output: &EntryOutput, format: OutputFormat) -> String {
    match output {
        EntryOutput::Posterior(posterior) => posterior_report(posterior, format),
        EntryOutput::Odds { description, value } => render_odds(description, value, format),
        EntryOutput::Marochnik { f, rows } => match format {
            OutputFormat::Text => render_marochnik_rows(rows, *f),
            OutputFormat::Csv => {
                let mut table = marochnik_csv_table(false);
                marochnik_csv_rows(&mut table, None, rows, *f);
                table.render(format)
            }
        },
        EntryOutput::Threshold(threshold) => render_threshold(threshold, format),
    }
}

fn render_odds(description: &str, value: &Quantity, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => format!("{description}: {}\n", quantity_text(value)),
        OutputFormat::Csv => {
            let mut table = Table::new(["description", "exact", "log10", "value"]);
            table.push_row(quantity_csv_cells(description, value));
            table.render(format)
        }
    }
}

fn quantity_csv_cells(label: &str, value: &Quantity) -> [String; 4] {
    match value {
        Quantity::Exact(x) => [
            label.to_string(),
            x.to_string(),
            String::new(),
            format!("{}", x.to_f64()),
        ],
        Quantity::Log(m) => [
            label.to_string(),
            String::new(),
            if m.is_zero() {
                "-inf".to_string()
            } else {
                format!("{}", m.log10())
            },
            format!("{}", m.value()),
        ],
    }
}

const MAROCHNIK_COMBOS: [(UpdateRule, MarochnikClass, &str, &str); 4] = [
    (UpdateRule::SsaOnly, MarochnikClass::OwnType, "ssa", "own-kind"),
    (UpdateRule::SsaOnly, MarochnikClass::Combined, "ssa", "combined"),
    (UpdateRule::SsaSia, MarochnikClass::OwnType, "ssa+sia", "own-kind"),
    (UpdateRule::SsaSia, MarochnikClass::Combined, "ssa+sia", "combined"),
];

fn marochnik_command(
    regime: StarRegime,
    f: f64,
    format: OutputFormat,
) -> Result<String, CliError> {
    let regime_label = match regime {
        StarRegime::FewStarBeings => "few star beings",
        StarRegime::ManyStarBeings => "many star beings",
    };
    match format {
        OutputFormat::Text => {
            let mut out = format!(
                "odds for the restricted-habitat theory at f = {} ({regime_label})\n",
                sig4(f)
            );
            for (rule, class, rule_label, class_label) in MAROCHNIK_COMBOS {
                let rows = marochnik_table(regime, rule, class, f)?;
                out.push_str(&format!("\nrule {rule_label}, {class_label} reference class\n"));
                out.push_str(&render_marochnik_rows(&rows, f));
            }
            Ok(out)
        }
        OutputFormat::Csv => {
            let mut table = marochnik_csv_table(true);
            for (rule, class, rule_label, class_label) in MAROCHNIK_COMBOS {
                let rows = marochnik_table(regime, rule, class, f)?;
                marochnik_csv_rows(&mut table, Some((rule_label, class_label)), &rows, f);
            }
            Ok(table.render(format))
        }
    }
}

fn render_marochnik_rows(rows: &[MarochnikRow], f: f64) -> String {
    let mut table = Table::new(["evidence", "planet-dweller", "star-dweller"]);
    for row in rows {
        table.push_row([
            row.label.to_string(),
            marochnik_cell(row.planet, f),
            marochnik_cell(row.star, f),
        ]);
    }
    table.render(OutputFormat::Text)
}

fn marochnik_cell(cell: Option<FPower>, f: f64) -> String {
    match cell {
        None => "-".to_string(),
        Some(power) if power.0 == 0 => "1".to_string(),
        Some(power) => format!("{power} \u{2248} {}", sig4(power.eval(f))),
    }
}

fn marochnik_csv_table(with_combo: bool) -> Table {
    if with_combo {
        Table::new(vec![
            "rule", "class", "evidence", "planet", "planet_value", "star", "star_value",
        ])
    } else {
        Table::new(vec![
            "evidence", "planet", "planet_value", "star", "star_value",
        ])
    }
}

fn marochnik_csv_rows(
    table: &mut Table,
    combo: Option<(&str, &str)>,
    rows: &[MarochnikRow],
    f: f64,
) {
    let symbolic = |cell: Option<FPower>| match cell {
        None => String::new(),
        Some(power) => power.to_string(),
    };
    let numeric = |cell: Option<FPower>| match cell {
        None => String::new(),
        Some(power) => format!("{}", power.eval(f)),
    };
    for row in rows {
        let mut cells: Vec<String> = Vec::new();
        if let Some((rule, class)) = combo {
            cells.push(rule.to_string());
            cells.push(class.to_string());
        }
        cells.extend([
            row.label.to_string(),
            symbolic(row.planet),
            numeric(row.planet),
            symbolic(row.star),
            numeric(row.star),
        ]);
        table.push_row(cells);
    }
}

fn render_threshold(threshold: &DuplicateThreshold, format: OutputFormat) -> String {
    let dominant = if threshold.memory_term_dominates {
        "memory states"
    } else {
        "genomes"
    };
    let already = if threshold.factor_at_most_one {
        "yes"
    } else {
        "no"
    };
    match format {
        OutputFormat::Text => format!(
            "log10(distinct memory states): {} rounded, {} precise\n\
             log10(distinct genomes): {} rounded, {} precise\n\
             log10(observers in the observed universe): {}\n\
             dominant diversity term: {dominant}\n\
             size factor before a duplicate is likely: {} rounded, {} precise\n\
             duplicate already likely without enlargement: {already}\n",
            threshold.memory_log10_rounded,
            threshold.memory_log10_precise,
            threshold.genome_log10_rounded,
            threshold.genome_log10_precise,
            threshold.observer_log10,
            threshold.size_factor(),
            threshold.size_factor_precise(),
        ),
        OutputFormat::Csv => {
            let mut table = Table::new(["quantity", "value"]);
            let rows: [(&str, String); 9] = [
                (
                    "memory_log10_rounded",
                    format!("{}", threshold.memory_log10_rounded),
                ),
                (
                    "memory_log10_precise",
                    format!("{}", threshold.memory_log10_precise),
                ),
                (
                    "genome_log10_rounded",
                    format!("{}", threshold.genome_log10_rounded),
                ),
                (
                    "genome_log10_precise",
                    format!("{}", threshold.genome_log10_precise),
                ),
                ("observer_log10", format!("{}", threshold.observer_log10)),
                (
                    "memory_term_dominates",
                    threshold.memory_term_dominates.to_string(),
                ),
                (
                    "size_factor_log10_rounded",
                    format!("{}", threshold.size_factor().log10()),
                ),
                (
                    "size_factor_log10_precise",
                    format!("{}", threshold.size_factor_precise().log10()),
                ),
                ("factor_at_most_one", threshold.factor_at_most_one.to_string()),
            ];
            for (name, value) in rows {
                table.push_row([name.to_string(), value]);
            }
            table.render(format)
        }
    }
}

fn factor_label(parent: FactorParent) -> String {
    format!("{parent}1")
}

fn fermi_command(cmd: &FermiCmd, format: OutputFormat) -> Result<String, CliError> {
    let prior = FermiPrior::default();
    let params = FermiParams::new(cmd.v)?;
    let parents: Vec<FactorParent> = match cmd.factor {
        Some(parent) => vec![parent],
        None => vec![FactorParent::P, FactorParent::F],
    };

    if cmd.v == 0.0 {
        let factors: Vec<(FactorParent, FactorSummary)> = parents
            .iter()
            .map(|&parent| {
                analytic_factor_posterior(prior, FactorSpec::default_for(parent))
                    .map(|summary| (parent, summary))
            })
            .collect::<Result<_, _>>()?;
        if let Some(path) = &cmd.emit_plot {
            let samples = sample_posterior(prior, params, cmd.samples, cmd.seed)?;
            write_plot(path, &samples)?;
        }
        return Ok(render_fermi_analytic(prior, &factors, format));
    }

    let samples = sample_posterior(prior, params, cmd.samples, cmd.seed)?;
    let factors: Vec<(FactorParent, FactorSummary)> = parents
        .iter()
        .map(|&parent| {
            factor_posterior(prior, FactorSpec::default_for(parent), &samples)
                .map(|summary| (parent, summary))
        })
        .collect::<Result<_, _>>()?;
    if let Some(path) = &cmd.emit_plot {
        write_plot(path, &samples)?;
    }
    Ok(render_fermi_sampled(&samples, &factors, format))
}

/// Number of fresh prior draws appended to a plot file for visual contrast.
const PLOT_PRIOR_POINTS: u64 = 500;

fn write_plot(path: &Path, samples: &FermiSampleSet) -> Result<(), CliError> {
    std::fs::write(path, emit_plot_points(samples, true, PLOT_PRIOR_POINTS))?;
    Ok(())
}

fn render_fermi_analytic(
    prior: FermiPrior,
    factors: &[(FactorParent, FactorSummary)],
    format: OutputFormat,
) -> String {
    let marginal_f = analytic_parent_marginal(prior, FactorParent::F);
    let marginal_p = analytic_parent_marginal(prior, FactorParent::P);
    match format {
        OutputFormat::Text => {
            let mut out =
                "V = 0: no interference, closed-form posterior (every proposal accepts)\n\n"
                    .to_string();
            let mut coords = Table::new(["coordinate", "mean10", "sd10"]);
            coords.push_row([
                "log10(f)".to_string(),
                sig4(marginal_f.mean10),
                sig4(marginal_f.sd10),
            ]);
            coords.push_row([
                "log10(p)".to_string(),
                sig4(marginal_p.mean10),
                sig4(marginal_p.sd10),
            ]);
            out.push_str(&coords.render(format));
            out.push('\n');
            let mut table = Table::new(["factor", "mean10", "10^mean10", "sd10", "mean value"]);
            for (parent, summary) in factors {
                table.push_row([
                    factor_label(*parent),
                    sig4(summary.mean10),
                    sig4(10f64.powf(summary.mean10)),
                    sig4(summary.sd10),
                    sig4(summary.mean_value),
                ]);
            }
            out.push_str(&table.render(format));
            out
        }
        OutputFormat::Csv => {
            let mut table = Table::new(["quantity", "value"]);
            table.push_row(["path", "analytic"]);
            table.push_row(["V".to_string(), "0".to_string()]);
            table.push_row(["acceptance_rate".to_string(), "1".to_string()]);
            for (coord, marginal) in [("f", marginal_f), ("p", marginal_p)] {
                table.push_row([format!("log10_{coord}_mean"), format!("{}", marginal.mean10)]);
                table.push_row([format!("log10_{coord}_sd"), format!("{}", marginal.sd10)]);
            }
            push_factor_csv(&mut table, factors);
            table.render(format)
        }
    }
}

fn render_fermi_sampled(
    samples: &FermiSampleSet,
    factors: &[(FactorParent, FactorSummary)],
    format: OutputFormat,
) -> String {
    let coord_f = samples.log10_f_summary();
    let coord_p = samples.log10_p_summary();
    match format {
        OutputFormat::Text => {
            let mut out = format!(
                "V = {}, seed {}: accepted {} of {} proposals (acceptance rate {})\n\n",
                samples.v(),
                samples.seed(),
                samples.accepted_count(),
                samples.proposal_count(),
                sig4(samples.acceptance_rate()),
            );
            let mut coords = Table::new(["coordinate", "mean", "sd", "se(mean)"]);
            for (name, coord) in [("log10(f)", coord_f), ("log10(p)", coord_p)] {
                coords.push_row([
                    name.to_string(),
                    sig4(coord.mean),
                    sig4(coord.sd),
                    sig4(coord.se_mean),
                ]);
            }
            out.push_str(&coords.render(format));
            out.push('\n');
            let mut table = Table::new([
                "factor",
                "mean10",
                "se(mean10)",
                "sd10",
                "mean value",
                "se(mean value)",
            ]);
            for (parent, summary) in factors {
                table.push_row([
                    factor_label(*parent),
                    sig4(summary.mean10),
                    sig4(summary.se_mean10),
                    sig4(summary.sd10),
                    sig4(summary.mean_value),
                    sig4(summary.se_mean_value),
                ]);
            }
            out.push_str(&table.render(format));
            out
        }
        OutputFormat::Csv => {
            let mut table = Table::new(["quantity", "value"]);
            table.push_row(["path", "monte-carlo"]);
            table.push_row(["V".to_string(), format!("{}", samples.v())]);
            table.push_row(["seed".to_string(), format!("{}", samples.seed())]);
            table.push_row(["accepted".to_string(), format!("{}", samples.accepted_count())]);
            table.push_row(["proposals".to_string(), format!("{}", samples.proposal_count())]);
            table.push_row([
                "acceptance_rate".to_string(),
                format!("{}", samples.acceptance_rate()),
            ]);
            for (coord, summary) in [("f", coord_f), ("p", coord_p)] {
                table.push_row([format!("log10_{coord}_mean"), format!("{}", summary.mean)]);
                table.push_row([format!("log10_{coord}_sd"), format!("{}", summary.sd)]);
                table.push_row([format!("log10_{coord}_se_mean"), format!("{}", summary.se_mean)]);
            }
            push_factor_csv(&mut table, factors);
            table.render(format)
        }
    }
}

fn push_factor_csv(table: &mut Table, factors: &[(FactorParent, FactorSummary)]) {
    for (parent, summary) in factors {
        let label = factor_label(*parent);
        table.push_row([format!("{label}_mean10"), format!("{}", summary.mean10)]);
        table.push_row([format!("{label}_se_mean10"), format!("{}", summary.se_mean10)]);
        table.push_row([format!("{label}_sd10"), format!("{}", summary.sd10)]);
        table.push_row([format!("{label}_mean_value"), format!("{}", summary.mean_value)]);
        table.push_row([
            format!("{label}_se_mean_value"),
            format!("{}", summary.se_mean_value),
        ]);
    }
}
