//! Command-line front end: every laboratory capability behind one
//! deterministic, scriptable binary.
//!
//! Determinism contract: identical argv and input files produce
//! byte-identical JSON. Object keys are emitted in a fixed order,
//! every float is rounded to 12 significant digits before printing,
//! and the default seed is a fixed constant, never the clock.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Number, Value};
use thiserror::Error;

use bincover::algo::Algorithm;
use bincover::analytic::{dhk_limit, eru_dhk, eru_dnf};
use bincover::experiments::{
    run_interval_sweep, run_random_order_experiment, run_uniform_experiment, ExperimentReport,
};
use bincover::families::{
    gen_dhk_one_border, gen_dhk_two_border, gen_dnf_one_border, gen_dnf_two_border, gen_rwor,
    gen_two_size, gen_uniform, GeneratedFamily, TwoSizeOrder,
};
use bincover::interval::IntervalSpec;
use bincover::item::{format_rat, format_sig, round_sig, Rat, Sequence};
use bincover::measures::{
    competitive_table, dnf_worst_order_bounds, minmin_ratio_dhk, minmin_ratio_dnf,
    minmin_unrestricted, worst_order_value, WorstOrderMode, DEFAULT_ARRANGEMENT_BUDGET,
};
use bincover::packing::validate_reasonable;

/// Default master seed: fixed, documented, never time-based, so bare
/// invocations are reproducible.
pub const DEFAULT_SEED: u64 = 0xB1C0_5EED;

/// Significant digits used for every float in the output.
pub const FLOAT_SIG_DIGITS: u32 = 12;

/// Largest certified decimal precision the analytic subcommand offers.
pub const MAX_ANALYTIC_DIGITS: u32 = 30;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
}

fn usage(msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(msg.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    /// Rationals stay exact `num/den` strings.
    Exact,
    /// Rationals become 12-significant-digit decimals.
    Float,
}

impl Precision {
    fn label(self) -> &'static str {
        match self {
            Precision::Exact => "exact",
            Precision::Float => "float",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bincover",
    version,
    about = "Online bin covering laboratory: engines, adversaries, oracles, and measures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Master seed for randomized work (fixed default, never the clock).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output format on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Rational rendering mode; embedded in the output header.
    #[arg(long, global = true, value_enum, default_value_t = Precision::Exact)]
    pub precision: Precision,
    /// Worker threads for Monte Carlo loops; any value gives identical
    /// numbers (0 = all cores).
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an algorithm on a sequence file and count covered bins.
    Run(RunArgs),
    /// Generate a family to a sequence file plus a claims sidecar.
    Generate(GenerateArgs),
    /// Worst-order value of a multiset (exact, sampled, or certified bounds).
    WorstOrder(WorstOrderArgs),
    /// Random-order behavior on the two-size multiset.
    RandomOrder(RandomOrderArgs),
    /// Min/min ratios on a restricted interval, or unrestricted.
    Minmin(MinminArgs),
    /// Monte Carlo uniform-draw ratios against closed-form values.
    Uniform(UniformArgs),
    /// Certified decimals for the closed-form expected ratios.
    Analytic(AnalyticArgs),
    /// Competitive-ratio table for a restricted interval.
    Table(TableArgs),
    /// Experiment drivers: batched runs, CSV summaries, plot series.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgKind {
    Dnf,
    Dhk,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Algorithm to run.
    #[arg(long, value_enum)]
    pub alg: AlgKind,
    /// Class count for dhk (required with --alg dhk).
    #[arg(long)]
    pub k: Option<u32>,
    /// Sequence file (one rational per line; # comments allowed).
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    /// Relative-worst-order gap family (halves plus fillers).
    Rwor,
    /// Overshoot family: single-bin engine covers x per x+1 optimal.
    DnfOneBorder,
    /// Class-splitting family around one border.
    DhkOneBorder,
    /// Two-border drift family against the single-bin engine.
    DnfTwoBorder,
    /// Two-border family against the class-based engine.
    DhkTwoBorder,
    /// l items of size 1-eps and s of size eps, shuffled.
    TwoSize,
    /// Independent uniform draws from (0,1).
    Uniform,
}

impl FamilyKind {
    fn label(self) -> &'static str {
        match self {
            FamilyKind::Rwor => "rwor",
            FamilyKind::DnfOneBorder => "dnf-one-border",
            FamilyKind::DhkOneBorder => "dhk-one-border",
            FamilyKind::DnfTwoBorder => "dnf-two-border",
            FamilyKind::DhkTwoBorder => "dhk-two-border",
            FamilyKind::TwoSize => "two-size",
            FamilyKind::Uniform => "uniform",
        }
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    /// Output base path: writes <out>.seq.txt and <out>.json.
    #[arg(long)]
    pub out: PathBuf,
    /// Border parameter for dnf-one-border.
    #[arg(long)]
    pub x: Option<u64>,
    /// Border parameter for the dhk and two-border families.
    #[arg(long)]
    pub p: Option<u64>,
    /// Scale parameter (repetitions).
    #[arg(long)]
    pub n: Option<u64>,
    /// Perturbation size as a rational like 1/100 (families pick a
    /// valid default when omitted).
    #[arg(long, value_parser = parse_rat)]
    pub eps: Option<Rat>,
    /// Count of large items (two-size).
    #[arg(long)]
    pub l: Option<u64>,
    /// Count of small items (two-size).
    #[arg(long)]
    pub s: Option<u64>,
    /// Sequence length (uniform).
    #[arg(long)]
    pub len: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WorstOrderCliMode {
    /// Enumerate every distinct ordering (within --budget).
    Exact,
    /// Minimum over sampled orderings: an upper bound only.
    Sampled,
    /// Volume-based certified lower bound plus the given-order value
    /// (single-bin engine only).
    Bounds,
}

#[derive(Debug, Args)]
pub struct WorstOrderArgs {
    #[arg(long, value_enum)]
    pub alg: AlgKind,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = WorstOrderCliMode::Exact)]
    pub mode: WorstOrderCliMode,
    /// Cap on enumerated arrangements in exact mode.
    #[arg(long, default_value_t = DEFAULT_ARRANGEMENT_BUDGET)]
    pub budget: u64,
    /// Orderings to draw in sampled mode.
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
}

#[derive(Debug, Args)]
pub struct RandomOrderArgs {
    /// Count of large items (size 1 - eps).
    #[arg(long)]
    pub l: u64,
    /// Count of small items (size eps).
    #[arg(long)]
    pub s: u64,
    /// Small size; must satisfy 0 < eps < 1/(l+s).
    #[arg(long, value_parser = parse_rat)]
    pub eps: Option<Rat>,
    /// Random orderings for the Monte Carlo mean.
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
}

#[derive(Debug, Args)]
pub struct MinminArgs {
    /// Interval lower endpoint, e.g. 1/3 (omit both endpoints for the
    /// unrestricted problem).
    #[arg(long, value_parser = parse_rat)]
    pub a: Option<Rat>,
    /// Interval upper endpoint, e.g. 3/5.
    #[arg(long, value_parser = parse_rat)]
    pub b: Option<Rat>,
}

#[derive(Debug, Args)]
pub struct UniformArgs {
    #[arg(long, value_enum)]
    pub alg: AlgKind,
    #[arg(long)]
    pub k: Option<u32>,
    /// Items per trial.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: u64,
    /// Fixed tolerance on the mean ratio (default: three standard
    /// errors plus a finite-size allowance).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    /// Single class count to evaluate (overrides the range).
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, default_value_t = 2)]
    pub k_min: u32,
    #[arg(long, default_value_t = 10)]
    pub k_max: u32,
    /// Certified decimal digits to print (at most 30).
    #[arg(long, default_value_t = 30)]
    pub digits: u32,
    /// Write a k<TAB>ratio series file for plotting.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Interval lower endpoint, e.g. 1/4.
    #[arg(long, value_parser = parse_rat)]
    pub a: Rat,
    /// Interval upper endpoint, e.g. 1/2.
    #[arg(long, value_parser = parse_rat)]
    pub b: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentKind {
    Uniform,
    RandomOrder,
    IntervalSweep,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, value_enum)]
    pub experiment: ExperimentKind,
    #[arg(long, value_enum)]
    pub alg: Option<AlgKind>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Items per trial; repeat the flag to sweep several sizes.
    #[arg(long)]
    pub n: Vec<u64>,
    #[arg(long, default_value_t = 20)]
    pub trials: u64,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub l: Option<u64>,
    #[arg(long)]
    pub s: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, value_parser = parse_rat)]
    pub eps: Option<Rat>,
    /// Interval as a:b with rational endpoints, e.g. 1/4:1/2; repeat
    /// the flag for a sweep.
    #[arg(long)]
    pub interval: Vec<String>,
    /// Write an n<TAB>mean-ratio series file (uniform experiment only).
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}

pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let r = Rat::from_str(s.trim()).map_err(|e| format!("expected a rational like 2/3: {e}"))?;
    Ok(r)
}

fn parse_interval(s: &str) -> Result<IntervalSpec, CliError> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| usage(format!("interval must look like 1/4:1/2, got {s}")))?;
    let a = parse_rat(a).map_err(usage)?;
    let b = parse_rat(b).map_err(usage)?;
    IntervalSpec::new(a, b).map_err(usage)
}

fn resolve_alg(alg: AlgKind, k: Option<u32>) -> Result<Algorithm, CliError> {
    match alg {
        AlgKind::Dnf => {
            if k.is_some() {
                return Err(usage("--k only applies to --alg dhk"));
            }
            Ok(Algorithm::Dnf)
        }
        AlgKind::Dhk => {
            let k = k.ok_or_else(|| usage("--alg dhk requires --k"))?;
            if k < 1 {
                return Err(usage("k must be >= 1"));
            }
            Algorithm::dhk(k).map_err(|_| usage("k must be >= 1"))
        }
    }
}

/// Whether the command ran clean or observed an expectation failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliOutcome {
    Clean,
    ExpectationFailed,
}

/// Fully rendered command result; `main` only picks a format and an
/// exit code.
pub struct Output {
    pub envelope: Value,
    pub csv: String,
    pub text: String,
    pub outcome: CliOutcome,
}

impl Output {
    pub fn rendered(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.envelope)
                    .expect("envelope serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
            Format::Text => self.text.clone(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            CliOutcome::Clean => 0,
            CliOutcome::ExpectationFailed => 1,
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Run(a) => cmd_run(a, &cli.common),
        Command::Generate(a) => cmd_generate(a, &cli.common),
        Command::WorstOrder(a) => cmd_worst_order(a, &cli.common),
        Command::RandomOrder(a) => cmd_random_order(a, &cli.common),
        Command::Minmin(a) => cmd_minmin(a, &cli.common),
        Command::Uniform(a) => cmd_uniform(a, &cli.common),
        Command::Analytic(a) => cmd_analytic(a, &cli.common),
        Command::Table(a) => cmd_table(a, &cli.common),
        Command::Report(a) => cmd_report(a, &cli.common),
    }
}

// ---------------------------------------------------------------------
// Rendering helpers
// ---------------------------------------------------------------------

fn is_plain_rational(s: &str) -> bool {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let num = num.strip_prefix('-').unwrap_or(num);
    !num.is_empty()
        && !den.is_empty()
        && num.bytes().all(|c| c.is_ascii_digit())
        && den.bytes().all(|c| c.is_ascii_digit())
        && den.bytes().any(|c| c != b'0')
}

/// Rounds every float to the fixed output precision; in float mode also
/// converts bare `num/den` strings (and integer-valued rationals) to
/// decimals. Subtrees under `parameters` or `provenance` keys echo
/// inputs verbatim and are never converted.
fn apply_precision(value: Value, precision: Precision) -> Value {
    fn walk(value: Value, precision: Precision, convert: bool) -> Value {
        match value {
            Value::Number(n) => {
                if let Some(f) = n.as_f64().filter(|_| !n.is_i64() && !n.is_u64()) {
                    Number::from_f64(round_sig(f, FLOAT_SIG_DIGITS))
                        .map_or(Value::Null, Value::Number)
                } else {
                    Value::Number(n)
                }
            }
            Value::String(s) => {
                if convert && precision == Precision::Float && is_plain_rational(&s) {
                    let r = Rat::from_str(&s).expect("checked shape");
                    let f = bincover::item::rat_to_f64(&r);
                    Number::from_f64(round_sig(f, FLOAT_SIG_DIGITS))
                        .map_or(Value::String(s), Value::Number)
                } else {
                    Value::String(s)
                }
            }
            Value::Array(items) => Value::Array(
                items.into_iter().map(|v| walk(v, precision, convert)).collect(),
            ),
            Value::Object(map) => Value::Object(
                map.into_iter()
                    .map(|(k, v)| {
                        let keep_verbatim = k == "parameters" || k == "provenance";
                        let v = walk(v, precision, convert && !keep_verbatim);
                        (k, v)
                    })
                    .collect(),
            ),
            other => other,
        }
    }
    walk(value, precision, true)
}

fn envelope(command: &str, common: &Common, data: Value) -> Value {
    json!({
        "tool": "bincover",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "precision": common.precision.label(),
        "data": apply_precision(data, common.precision),
    })
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn csv_table(command: &str, common: &Common, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = format!(
        "# bincover {} command={} precision={}\n",
        env!("CARGO_PKG_VERSION"),
        command,
        common.precision.label()
    );
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|f| csv_escape(f)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn text_header(command: &str, common: &Common) -> String {
    format!(
        "bincover {} — {} (precision: {})\n",
        env!("CARGO_PKG_VERSION"),
        command,
        common.precision.label()
    )
}

fn show_rat(r: &Rat, precision: Precision) -> String {
    match precision {
        Precision::Exact => format_rat(r),
        Precision::Float => format_sig(bincover::item::rat_to_f64(r), FLOAT_SIG_DIGITS),
    }
}

fn report_csv_rows(reports: &[&ExperimentReport]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for report in reports {
        for e in &report.summary {
            rows.push(vec![
                report.name.clone(),
                e.label.clone(),
                format_sig(e.expected, FLOAT_SIG_DIGITS),
                format_sig(e.actual, FLOAT_SIG_DIGITS),
                format_sig(e.tolerance, FLOAT_SIG_DIGITS),
                format!("{:?}", e.cmp).to_lowercase(),
                e.source.clone(),
                e.pass.to_string(),
            ]);
        }
    }
    rows
}

const REPORT_CSV_HEADER: [&str; 8] =
    ["experiment", "label", "expected", "actual", "tolerance", "cmp", "source", "pass"];

fn report_text(reports: &[&ExperimentReport], header: String) -> String {
    let mut out = header;
    for report in reports {
        out.push_str(&format!("experiment: {} (seed {})\n", report.name, report.seed));
        for (k, v) in &report.parameters {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        for e in &report.summary {
            out.push_str(&format!(
                "  [{}] {}: {} vs {} (tol {}, {:?}; source: {})\n",
                if e.pass { "PASS" } else { "FAIL" },
                e.label,
                format_sig(e.actual, FLOAT_SIG_DIGITS),
                format_sig(e.expected, FLOAT_SIG_DIGITS),
                format_sig(e.tolerance, FLOAT_SIG_DIGITS),
                e.cmp,
                e.source,
            ));
        }
        out.push_str(&format!(
            "  records: {}; wall: {} ms; verdict: {}\n",
            report.records.len(),
            report.wall_ms,
            if report.passed { "pass" } else { "FAIL" }
        ));
    }
    out
}

fn reports_output(
    command: &str,
    common: &Common,
    reports: Vec<ExperimentReport>,
) -> Result<Output, CliError> {
    let passed = reports.iter().all(|r| r.passed);
    let refs: Vec<&ExperimentReport> = reports.iter().collect();
    let csv = csv_table(command, common, &REPORT_CSV_HEADER, &report_csv_rows(&refs));
    let text = report_text(&refs, text_header(command, common));
    let data = json!({ "experiments": reports });
    Ok(Output {
        envelope: envelope(command, common, data),
        csv,
        text,
        outcome: if passed { CliOutcome::Clean } else { CliOutcome::ExpectationFailed },
    })
}

fn kv_output(
    command: &str,
    common: &Common,
    data: Value,
    pairs: Vec<(String, String)>,
    outcome: CliOutcome,
) -> Output {
    let rows: Vec<Vec<String>> =
        pairs.iter().map(|(k, v)| vec![k.clone(), v.clone()]).collect();
    let csv = csv_table(command, common, &["field", "value"], &rows);
    let mut text = text_header(command, common);
    for (k, v) in &pairs {
        text.push_str(&format!("{k}: {v}\n"));
    }
    Output { envelope: envelope(command, common, data), csv, text, outcome }
}

// ---------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------

fn cmd_run(args: &RunArgs, common: &Common) -> Result<Output, CliError> {
    let alg = resolve_alg(args.alg, args.k)?;
    let seq = Sequence::read_file(&args.input).map_err(usage)?;
    let run = alg.run(&seq);
    let verdict = validate_reasonable(&seq, &run.trace, alg.max_open()).map_err(usage)?;
    let volume = seq.volume();
    let data = json!({
        "alg": alg.label(),
        "input": args.input.display().to_string(),
        "items": seq.len(),
        "volume": format_rat(&volume),
        "covered": run.covered(),
        "reasonable": verdict.ok,
    });
    let pairs = vec![
        ("alg".into(), alg.label()),
        ("items".into(), seq.len().to_string()),
        ("volume".into(), show_rat(&volume, common.precision)),
        ("covered".into(), run.covered().to_string()),
        ("reasonable".into(), verdict.ok.to_string()),
    ];
    Ok(kv_output("run", common, data, pairs, CliOutcome::Clean))
}

fn req<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("family {family} requires {flag}")))
}

fn family_sidecar(fam: &GeneratedFamily, family: &str) -> Value {
    json!({
        "family": family,
        "interval": fam.interval.label(),
        "eps": fam.eps.as_ref().map(format_rat),
        "scale_n": fam.scale_n,
        "claims": fam.claims,
        "segments": fam.segments,
        "certificate": fam.opt_cert,
    })
}

fn cmd_generate(args: &GenerateArgs, common: &Common) -> Result<Output, CliError> {
    let family_label = args.family.label().to_string();
    let eps = args.eps.clone();
    let (seq, sidecar): (Sequence, Value) = match args.family {
        FamilyKind::Rwor => {
            let n = req(args.n, "--n", "rwor")?;
            let fam = gen_rwor(n).map_err(usage)?;
            (fam.seq.clone(), family_sidecar(&fam, "rwor"))
        }
        FamilyKind::DnfOneBorder => {
            let x = req(args.x, "--x", "dnf-one-border")?;
            let n = req(args.n, "--n", "dnf-one-border")?;
            let fam = gen_dnf_one_border(x, n, eps).map_err(usage)?;
            (fam.seq.clone(), family_sidecar(&fam, "dnf-one-border"))
        }
        FamilyKind::DhkOneBorder => {
            let p = req(args.p, "--p", "dhk-one-border")?;
            let n = req(args.n, "--n", "dhk-one-border")?;
            let fam = gen_dhk_one_border(p, n, eps).map_err(usage)?;
            (fam.seq.clone(), family_sidecar(&fam, "dhk-one-border"))
        }
        FamilyKind::DnfTwoBorder => {
            let p = req(args.p, "--p", "dnf-two-border")?;
            let n = req(args.n, "--n", "dnf-two-border")?;
            let fam = gen_dnf_two_border(p, n, eps).map_err(usage)?;
            (fam.seq.clone(), family_sidecar(&fam, "dnf-two-border"))
        }
        FamilyKind::DhkTwoBorder => {
            let p = req(args.p, "--p", "dhk-two-border")?;
            let n = req(args.n, "--n", "dhk-two-border")?;
            let fam = gen_dhk_two_border(p, n, eps).map_err(usage)?;
            (fam.seq.clone(), family_sidecar(&fam, "dhk-two-border"))
        }
        FamilyKind::TwoSize => {
            let l = req(args.l, "--l", "two-size")?;
            let s = req(args.s, "--s", "two-size")?;
            let seq = gen_two_size(TwoSizeOrder::Counts { l, s }, eps, common.seed)
                .map_err(usage)?;
            let sidecar = json!({
                "family": "two-size", "l": l, "s": s, "seed": common.seed,
                "claims": [], "certificate": null,
            });
            (seq, sidecar)
        }
        FamilyKind::Uniform => {
            let len = req(args.len, "--len", "uniform")?;
            if len == 0 {
                return Err(usage("--len must be >= 1"));
            }
            let seq = gen_uniform(len, common.seed);
            let sidecar = json!({
                "family": "uniform", "len": len, "seed": common.seed,
                "claims": [], "certificate": null,
            });
            (seq, sidecar)
        }
    };

    let seq_path = args.out.with_extension("seq.txt");
    let sidecar_path = args.out.with_extension("json");
    seq.write_file(&seq_path).map_err(usage)?;
    let mut sidecar_text =
        serde_json::to_string_pretty(&apply_precision(sidecar.clone(), Precision::Exact))
            .expect("sidecar serializes");
    sidecar_text.push('\n');
    std::fs::write(&sidecar_path, sidecar_text)
        .map_err(|e| usage(format!("cannot write {}: {e}", sidecar_path.display())))?;

    let data = json!({
        "family": family_label,
        "items": seq.len(),
        "sequence_file": seq_path.display().to_string(),
        "sidecar_file": sidecar_path.display().to_string(),
        "sidecar": sidecar,
    });
    let pairs = vec![
        ("family".into(), family_label),
        ("items".into(), seq.len().to_string()),
        ("sequence_file".into(), seq_path.display().to_string()),
        ("sidecar_file".into(), sidecar_path.display().to_string()),
    ];
    Ok(kv_output("generate", common, data, pairs, CliOutcome::Clean))
}

fn cmd_worst_order(args: &WorstOrderArgs, common: &Common) -> Result<Output, CliError> {
    let alg = resolve_alg(args.alg, args.k)?;
    let seq = Sequence::read_file(&args.input).map_err(usage)?;
    let data = match args.mode {
        WorstOrderCliMode::Exact => {
            let v = worst_order_value(&alg, &seq, &WorstOrderMode::Exact { budget: args.budget })
                .map_err(|e| {
                    usage(format!("{e}; raise --budget or use --mode sampled or --mode bounds"))
                })?;
            json!({
                "alg": alg.label(), "mode": "exact",
                "covered": v.covered(), "exact": v.is_exact(),
            })
        }
        WorstOrderCliMode::Sampled => {
            let v = worst_order_value(
                &alg,
                &seq,
                &WorstOrderMode::Sampled { samples: args.samples, seed: common.seed },
            )
            .map_err(usage)?;
            json!({
                "alg": alg.label(), "mode": "sampled",
                "covered": v.covered(), "exact": v.is_exact(),
                "samples": args.samples,
                "note": "minimum over sampled orderings: an upper bound on the worst-order value",
            })
        }
        WorstOrderCliMode::Bounds => {
            if alg != Algorithm::Dnf {
                return Err(usage("--mode bounds is only available for --alg dnf"));
            }
            let b = dnf_worst_order_bounds(&seq);
            json!({
                "alg": alg.label(), "mode": "bounds",
                "lower": b.lower, "given_order": b.given_order,
                "pinned": b.exact_value(),
            })
        }
    };
    let pairs: Vec<(String, String)> = data
        .as_object()
        .expect("object data")
        .iter()
        .map(|(k, v)| (k.clone(), v.to_string().trim_matches('"').to_string()))
        .collect();
    Ok(kv_output("worst-order", common, data, pairs, CliOutcome::Clean))
}

fn cmd_random_order(args: &RandomOrderArgs, common: &Common) -> Result<Output, CliError> {
    let report =
        run_random_order_experiment(args.l, args.s, args.eps.clone(), args.samples, common.seed)
            .map_err(usage)?;
    reports_output("random-order", common, vec![report])
}

fn cmd_minmin(args: &MinminArgs, common: &Common) -> Result<Output, CliError> {
    let (label, dnf, dhk) = match (&args.a, &args.b) {
        (Some(a), Some(b)) => {
            let spec = IntervalSpec::new(a.clone(), b.clone()).map_err(usage)?;
            let dnf = minmin_ratio_dnf(&spec).map_err(usage)?;
            let dhk = minmin_ratio_dhk(&spec).map_err(usage)?;
            (spec.label(), dnf, dhk)
        }
        (None, None) => {
            let (dnf, dhk) = minmin_unrestricted();
            ("unrestricted".to_string(), dnf, dhk)
        }
        _ => return Err(usage("provide both --a and --b, or neither")),
    };
    let data = json!({ "interval": label, "dnf": dnf, "dhk": dhk });
    let pairs = vec![
        ("interval".into(), label),
        ("dnf_ratio".into(), show_rat(&dnf.ratio, common.precision)),
        ("dhk_ratio".into(), show_rat(&dhk.ratio, common.precision)),
        ("no_border".into(), dnf.no_border.to_string()),
    ];
    Ok(kv_output("minmin", common, data, pairs, CliOutcome::Clean))
}

fn cmd_uniform(args: &UniformArgs, common: &Common) -> Result<Output, CliError> {
    let alg = resolve_alg(args.alg, args.k)?;
    let report = run_uniform_experiment(&alg, args.n, args.trials, common.seed, args.tol)
        .map_err(usage)?;
    reports_output("uniform", common, vec![report])
}

fn cmd_analytic(args: &AnalyticArgs, common: &Common) -> Result<Output, CliError> {
    if args.digits == 0 || args.digits > MAX_ANALYTIC_DIGITS {
        return Err(usage(format!(
            "--digits must be between 1 and {MAX_ANALYTIC_DIGITS} (the certified precision)"
        )));
    }
    let (k_min, k_max) = match args.k {
        Some(k) => (k, k),
        None => (args.k_min, args.k_max),
    };
    if k_min < 2 || k_min > k_max {
        return Err(usage("need 2 <= k-min <= k-max"));
    }
    let mut rows = Vec::new();
    let mut csv_rows = Vec::new();
    let mut plot = String::new();
    for k in k_min..=k_max {
        let b = eru_dhk(k).map_err(usage)?;
        let total_f64 = b.total.to_f64();
        rows.push(json!({
            "k": k,
            "r_large": b.r_large.decimal(args.digits),
            "r_small": b.r_small.decimal(args.digits),
            "total": b.total.decimal(args.digits),
            "total_f64": total_f64,
        }));
        csv_rows.push(vec![
            k.to_string(),
            b.r_large.decimal(args.digits),
            b.r_small.decimal(args.digits),
            b.total.decimal(args.digits),
        ]);
        plot.push_str(&format!("{k}\t{}\n", format_sig(total_f64, FLOAT_SIG_DIGITS)));
    }
    if let Some(path) = &args.plot_data {
        std::fs::write(path, &plot)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let dnf = eru_dnf();
    let limit = dhk_limit();
    let data = json!({
        "digits": args.digits,
        "dnf_reference": dnf.decimal(args.digits),
        "limit_reference": limit.decimal(args.digits),
        "rows": rows,
        "plot_data_file": args.plot_data.as_ref().map(|p| p.display().to_string()),
    });
    let csv = csv_table("analytic", common, &["k", "r_large", "r_small", "total"], &csv_rows);
    let mut text = text_header("analytic", common);
    text.push_str(&format!(
        "single-bin reference: {}\nlimit reference: {}\n",
        dnf.decimal(args.digits),
        limit.decimal(args.digits)
    ));
    for row in &csv_rows {
        text.push_str(&format!(
            "k={}: r_large={} r_small={} total={}\n",
            row[0], row[1], row[2], row[3]
        ));
    }
    Ok(Output {
        envelope: envelope("analytic", common, data),
        csv,
        text,
        outcome: CliOutcome::Clean,
    })
}

fn cmd_table(args: &TableArgs, common: &Common) -> Result<Output, CliError> {
    let spec = IntervalSpec::new(args.a.clone(), args.b.clone()).map_err(usage)?;
    let table = competitive_table(&spec).map_err(usage)?;
    let data = serde_json::to_value(&table).expect("table serializes");
    let csv_rows = vec![
        vec![
            table.dnf.algorithm.clone(),
            format_rat(&table.dnf.ratio),
            format_sig(table.dnf.ratio_f64, FLOAT_SIG_DIGITS),
            table.dnf.exact.to_string(),
        ],
        vec![
            table.dhk.algorithm.clone(),
            format_rat(&table.dhk.ratio),
            format_sig(table.dhk.ratio_f64, FLOAT_SIG_DIGITS),
            table.dhk.exact.to_string(),
        ],
    ];
    let csv = csv_table("table", common, &["algorithm", "ratio", "ratio_f64", "exact"], &csv_rows);
    let mut text = text_header("table", common);
    text.push_str(&format!(
        "interval {} (borders: {}, p = {})\n",
        table.interval, table.borders, table.p
    ));
    for e in [&table.dnf, &table.dhk] {
        text.push_str(&format!(
            "{}: {} ({}){}\n",
            e.algorithm,
            show_rat(&e.ratio, common.precision),
            format_sig(e.ratio_f64, FLOAT_SIG_DIGITS),
            if e.exact { "" } else { " [upper bound]" }
        ));
    }
    text.push_str(&format!("verdict: {}\n", table.verdict));
    Ok(Output { envelope: envelope("table", common, data), csv, text, outcome: CliOutcome::Clean })
}

fn cmd_report(args: &ReportArgs, common: &Common) -> Result<Output, CliError> {
    match args.experiment {
        ExperimentKind::Uniform => {
            let alg = resolve_alg(
                args.alg.ok_or_else(|| usage("--experiment uniform requires --alg"))?,
                args.k,
            )?;
            if args.n.is_empty() {
                return Err(usage("--experiment uniform requires at least one --n"));
            }
            let mut reports = Vec::new();
            let mut plot = String::new();
            for &n in &args.n {
                let report =
                    run_uniform_experiment(&alg, n as usize, args.trials, common.seed, args.tol)
                        .map_err(usage)?;
                plot.push_str(&format!(
                    "{n}\t{}\n",
                    format_sig(report.summary[0].actual, FLOAT_SIG_DIGITS)
                ));
                reports.push(report);
            }
            if let Some(path) = &args.plot_data {
                std::fs::write(path, &plot)
                    .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            }
            reports_output("report", common, reports)
        }
        ExperimentKind::RandomOrder => {
            if args.plot_data.is_some() {
                return Err(usage("--plot-data applies to the uniform experiment only"));
            }
            let l = args.l.ok_or_else(|| usage("--experiment random-order requires --l"))?;
            let s = args.s.ok_or_else(|| usage("--experiment random-order requires --s"))?;
            let report =
                run_random_order_experiment(l, s, args.eps.clone(), args.samples, common.seed)
                    .map_err(usage)?;
            reports_output("report", common, vec![report])
        }
        ExperimentKind::IntervalSweep => {
            if args.plot_data.is_some() {
                return Err(usage("--plot-data applies to the uniform experiment only"));
            }
            if args.interval.is_empty() {
                return Err(usage("--experiment interval-sweep requires --interval a:b"));
            }
            let specs: Vec<IntervalSpec> = args
                .interval
                .iter()
                .map(|s| parse_interval(s))
                .collect::<Result<_, _>>()?;
            let n = args.n.first().copied().unwrap_or(120);
            let report = run_interval_sweep(&specs, n, args.eps.clone()).map_err(usage)?;
            reports_output("report", common, vec![report])
        }
    }
}
