//! Command-line orchestration: parse a curve description, run one command and
//! render the result as text or as a schema-versioned JSON report.

mod description;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

pub use description::{
    CandidateSpec, CurveDescription, FpPointSpec, GeneratorSpec, LiftSpec, LocalSpec, OptionsSpec, PointSpec, Problem,
    TermSpec,
};

use crate::cc_filter::{filter, FilterOptions, FilterReport};
use crate::curve_model::{DiskKind, LPolynomial, DEFAULT_ENUMERATION_CAP};
use crate::glc_engine::{glc_curve, known_point_in, sieve_with_table, GlcOptions, GlcReport, SieveEntry, SieveOutcome};
use crate::mumford_jacobian::{
    saturation_check, subgroup_of, SaturationReport, SaturationVerdict, DEFAULT_SUBGROUP_CAP,
};
use crate::ring_tower::factorize;
use crate::ring_tower::rational::format_rational;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_AUX_PRIME_BOUND: u64 = 100;

/// Exit status for malformed or inconsistent input.
pub const EXIT_INVALID_INPUT: i32 = 2;
/// Exit status for a computation that could not be completed.
pub const EXIT_COMPUTATION: i32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{field}: {message}")]
pub struct InputError {
    pub field: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(#[from] InputError),
    #[error("computation failed: {0}")]
    Computation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INVALID_INPUT,
            CliError::Computation(_) => EXIT_COMPUTATION,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "invalid_input",
            CliError::Computation(_) => "computation",
        }
    }
}

fn computation(e: impl ToString) -> CliError {
    CliError::Computation(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "chabauty", version, about = "Geometric linear Chabauty modulo p for hyperelliptic curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Working precision N (logs are computed modulo p^(N-1)).
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest auxiliary prime used by saturation checks.
    #[arg(long, global = true)]
    pub aux_prime_bound: Option<u64>,
    /// Run `glc` even when saturation at p cannot be proven.
    #[arg(long, global = true)]
    pub allow_unsaturated: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check the curve, points and generators.
    Validate { file: PathBuf },
    /// List C(F_p) and the residue disks.
    Points { file: PathBuf },
    /// L-polynomial and |J(F_p)|.
    Order { file: PathBuf },
    /// Mordell-Weil sieve at p.
    Sieve { file: PathBuf },
    /// Full geometric linear Chabauty report.
    Glc { file: PathBuf },
    /// Filter the candidate points of the description.
    Filter { file: PathBuf },
    /// Saturation of the generators at p.
    Saturate {
        file: PathBuf,
        /// Also check every prime dividing |J(F_p)|.
        #[arg(long)]
        order_primes: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Points { .. } => "points",
            Command::Order { .. } => "order",
            Command::Sieve { .. } => "sieve",
            Command::Glc { .. } => "glc",
            Command::Filter { .. } => "filter",
            Command::Saturate { .. } => "saturate",
        }
    }

    fn file(&self) -> &PathBuf {
        match self {
            Command::Validate { file }
            | Command::Points { file }
            | Command::Order { file }
            | Command::Sieve { file }
            | Command::Glc { file }
            | Command::Filter { file }
            | Command::Saturate { file, .. } => file,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidateResult {
    pub genus: usize,
    pub prime: u64,
    /// Ascending coefficients of the completed-square model `y^2 = f + h^2/4`.
    pub model: Vec<String>,
    pub basepoint: String,
    pub known_points: Vec<String>,
    pub generators: usize,
    pub candidates: usize,
    pub lifts: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointEntry {
    pub label: String,
    pub kind: DiskKind,
    pub known_point: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointsResult {
    pub count: usize,
    pub points: Vec<PointEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderResult {
    pub points_over_fp: usize,
    pub lpolynomial: LPolynomial,
    pub jacobian_order: u64,
    pub factorization: Vec<(u64, u32)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SieveResult {
    pub jacobian_order: u64,
    pub subgroup_order: u64,
    pub entries: Vec<SieveEntry>,
    pub passing: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GlcResult {
    pub jacobian_order: u64,
    pub lpolynomial: LPolynomial,
    pub saturation: Option<SaturationReport>,
    pub report: GlcReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct SaturateResult {
    pub jacobian_order: u64,
    pub aux_prime_bound: u64,
    pub reports: Vec<SaturationReport>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum CommandResult {
    Validate(ValidateResult),
    Points(PointsResult),
    Order(OrderResult),
    Sieve(SieveResult),
    Glc(GlcResult),
    Filter(FilterReport),
    Saturate(SaturateResult),
}

/// The output document.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub input: CurveDescription,
    pub result: CommandResult,
}

#[derive(Clone, Debug, Serialize)]
struct ErrorReport<'a> {
    schema_version: u32,
    command: &'a str,
    error: ErrorBody,
}

#[derive(Clone, Debug, Serialize)]
struct ErrorBody {
    kind: &'static str,
    message: String,
}

/// Flags shared by every command.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub precision: Option<u32>,
    pub aux_prime_bound: Option<u64>,
    pub allow_unsaturated: bool,
    pub order_primes: bool,
}

impl Flags {
    fn precision(&self, problem: &Problem) -> u32 {
        self.precision.or(problem.description.options.precision).unwrap_or(2)
    }

    fn aux_bound(&self, problem: &Problem) -> u64 {
        self.aux_prime_bound.or(problem.description.options.aux_prime_bound).unwrap_or(DEFAULT_AUX_PRIME_BOUND)
    }
}

fn subgroup_cap(problem: &Problem) -> usize {
    problem.description.options.subgroup_cap.unwrap_or(DEFAULT_SUBGROUP_CAP)
}

fn require_generators(problem: &Problem) -> Result<(), CliError> {
    if problem.generators.is_empty() {
        return Err(
            InputError { field: "generators".into(), message: "at least one generator is required".into() }.into()
        );
    }
    Ok(())
}

fn lpolynomial(problem: &Problem) -> Result<LPolynomial, CliError> {
    problem.curve.lpolynomial(DEFAULT_ENUMERATION_CAP).map_err(computation)
}

fn saturation_at(problem: &Problem, ell: u64, flags: &Flags) -> Result<SaturationReport, CliError> {
    saturation_check(&problem.curve, &problem.generators, ell, flags.aux_bound(problem)).map_err(computation)
}

/// Run `command` on a parsed description.
pub fn execute(command: &str, problem: &Problem, flags: &Flags) -> Result<Report, CliError> {
    let curve = &problem.curve;
    let result = match command {
        "validate" => CommandResult::Validate(ValidateResult {
            genus: curve.genus(),
            prime: curve.prime(),
            model: curve.f().coeffs().iter().map(format_rational).collect(),
            basepoint: curve.point_label(&problem.basepoint),
            known_points: problem.known.iter().map(|p| curve.point_label(p)).collect(),
            generators: problem.generators.len(),
            candidates: problem.candidates.len(),
            lifts: problem.lifts.len(),
        }),
        "points" => {
            let points: Vec<PointEntry> = curve
                .disks()
                .iter()
                .map(|d| PointEntry {
                    label: curve.disk_label(d),
                    kind: d.kind,
                    known_point: known_point_in(curve, d, &problem.known),
                })
                .collect();
            CommandResult::Points(PointsResult { count: points.len(), points })
        }
        "order" => {
            let l = lpolynomial(problem)?;
            let n = l.jacobian_order();
            CommandResult::Order(OrderResult {
                points_over_fp: curve.points_mod_p().len(),
                jacobian_order: n,
                factorization: factorize(n),
                lpolynomial: l,
            })
        }
        "sieve" => {
            require_generators(problem)?;
            let table = subgroup_of(curve, &problem.generators, subgroup_cap(problem)).map_err(computation)?;
            let entries = sieve_with_table(curve, &table, &problem.basepoint).map_err(computation)?;
            let passing = entries
                .iter()
                .filter(|e| matches!(e.outcome, SieveOutcome::Pass { .. }))
                .map(|e| e.label.clone())
                .collect();
            CommandResult::Sieve(SieveResult {
                jacobian_order: lpolynomial(problem)?.jacobian_order(),
                subgroup_order: table.order(),
                entries,
                passing,
            })
        }
        "glc" => {
            require_generators(problem)?;
            let l = lpolynomial(problem)?;
            let saturation = if flags.allow_unsaturated {
                None
            } else {
                let s = saturation_at(problem, curve.prime(), flags)?;
                if s.verdict != SaturationVerdict::Saturated {
                    return Err(CliError::Computation(format!(
                        "saturation of the generators at p = {} is not proven ({} classes of G/pG survive); \
                         pass --allow-unsaturated to run anyway",
                        curve.prime(),
                        s.surviving
                    )));
                }
                Some(s)
            };
            let options = GlcOptions {
                label: problem.description.label.clone(),
                precision: flags.precision(problem),
                subgroup_cap: subgroup_cap(problem),
                lifts: problem.lifts.clone(),
            };
            let report = glc_curve(curve, &problem.generators, &problem.basepoint, &problem.known, &options)
                .map_err(computation)?;
            CommandResult::Glc(GlcResult { jacobian_order: l.jacobian_order(), lpolynomial: l, saturation, report })
        }
        "filter" => {
            require_generators(problem)?;
            if problem.candidates.is_empty() {
                return Err(InputError { field: "candidates".into(), message: "no candidates to filter".into() }.into());
            }
            let options =
                FilterOptions { precision_cap: flags.precision(problem), subgroup_cap: subgroup_cap(problem) };
            let report = filter(curve, &problem.candidates, &problem.generators, &problem.basepoint, &options)
                .map_err(computation)?;
            CommandResult::Filter(report)
        }
        "saturate" => {
            require_generators(problem)?;
            let n = lpolynomial(problem)?.jacobian_order();
            let mut primes = vec![curve.prime()];
            if flags.order_primes {
                primes.extend(factorize(n).into_iter().map(|(q, _)| q).filter(|&q| q != curve.prime()));
            }
            let reports =
                primes.iter().map(|&ell| saturation_at(problem, ell, flags)).collect::<Result<Vec<_>, _>>()?;
            CommandResult::Saturate(SaturateResult {
                jacobian_order: n,
                aux_prime_bound: flags.aux_bound(problem),
                reports,
            })
        }
        other => return Err(computation(format!("unknown command {other}"))),
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        input: problem.description.clone(),
        result,
    })
}

fn label_list(items: &[String]) -> String {
    if items.is_empty() {
        "none".to_string()
    } else {
        items.join(", ")
    }
}

/// Human-readable rendering of a report.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    if let Some(label) = &report.input.label {
        let _ = writeln!(out, "{label}");
    }
    match &report.result {
        CommandResult::Validate(v) => {
            let _ = writeln!(out, "valid genus {} curve at p = {}", v.genus, v.prime);
            let _ = writeln!(out, "model coefficients: [{}]", v.model.join(", "));
            let _ = writeln!(out, "basepoint: {}", v.basepoint);
            let _ = writeln!(out, "known points: {}", label_list(&v.known_points));
            let _ = writeln!(out, "generators: {}, candidates: {}, lifts: {}", v.generators, v.candidates, v.lifts);
        }
        CommandResult::Points(p) => {
            let _ = writeln!(out, "#C(F_p) = {}", p.count);
            for e in &p.points {
                let known = e.known_point.as_deref().map(|k| format!("  known {k}")).unwrap_or_default();
                let _ = writeln!(out, "  {} {:?}{known}", e.label, e.kind);
            }
        }
        CommandResult::Order(o) => {
            let _ = writeln!(out, "#C(F_p) = {}", o.points_over_fp);
            let _ = writeln!(out, "L(T) coefficients: {:?}", o.lpolynomial.coeffs);
            let _ = writeln!(out, "|J(F_p)| = {}", o.jacobian_order);
        }
        CommandResult::Sieve(s) => {
            let _ = writeln!(out, "|J(F_p)| = {}, generator image order {}", s.jacobian_order, s.subgroup_order);
            for e in &s.entries {
                let r = match &e.outcome {
                    SieveOutcome::Pass { witness } => format!("pass, T = {witness:?}"),
                    SieveOutcome::Fail => "fail".to_string(),
                };
                let _ = writeln!(out, "  {} {r}", e.label);
            }
        }
        CommandResult::Glc(g) => {
            let r = &g.report;
            let _ = writeln!(out, "|J(F_p)| = {}, generator image order {}", g.jacobian_order, r.subgroup_order);
            if let Some(s) = &g.saturation {
                let _ = writeln!(out, "saturation at {}: {:?}", s.ell, s.verdict);
            }
            let cols: Vec<String> = r.mbar0.columns.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(
                out,
                "M0 columns mod p^{}: [{}], reduction {:?}",
                r.precision - 1,
                cols.join(", "),
                r.mbar0.flag
            );
            for v in &r.verdicts {
                let d = v.d_column.as_ref().map(|d| format!("  D = {d}")).unwrap_or_default();
                let lv = v.v.as_ref().map(|x| format!("  v = {x}")).unwrap_or_default();
                let extra = match &v.outcome {
                    crate::glc_engine::Outcome::AtMostOne { known_point: Some(k), .. } => format!("  ({k})"),
                    crate::glc_engine::Outcome::Undetermined { reason, .. } => format!("  ({reason})"),
                    _ => String::new(),
                };
                let _ = writeln!(out, "  {} {}{extra}{d}{lv}", v.label, v.outcome.name());
            }
            match r.bound {
                Some(b) => {
                    let _ = writeln!(out, "#C(Q) <= {b}");
                }
                None => {
                    let _ = writeln!(out, "inconclusive: surviving disks {}", label_list(&r.surviving));
                }
            }
            for i in &r.inconsistencies {
                let _ = writeln!(out, "warning: {i}");
            }
        }
        CommandResult::Filter(f) => {
            for e in &f.entries {
                let _ = writeln!(out, "  {} in {}: {:?}; {}", e.label, e.disk, e.classification, e.certificate.note);
            }
            let _ = writeln!(out, "retained: {}", label_list(&f.retained));
        }
        CommandResult::Saturate(s) => {
            let _ = writeln!(out, "|J(F_p)| = {}", s.jacobian_order);
            for r in &s.reports {
                let qs: Vec<String> = r.primes.iter().map(|q| q.q.to_string()).collect();
                let _ = writeln!(out, "  l = {}: {:?} (auxiliary primes {})", r.ell, r.verdict, label_list(&qs));
            }
        }
    }
    out
}

/// Render a diagnostic for `err` in the requested format.
pub fn render_error(command: &str, err: &CliError, json: bool) -> String {
    if json {
        let body = ErrorReport {
            schema_version: SCHEMA_VERSION,
            command,
            error: ErrorBody { kind: err.kind(), message: err.to_string() },
        };
        serde_json::to_string_pretty(&body).expect("diagnostics serialize")
    } else {
        format!("error: {err}")
    }
}

/// Parse the file named by `command`, run it and render the output.
pub fn run(cli: &Cli) -> (i32, String) {
    let flags = Flags {
        precision: cli.precision,
        aux_prime_bound: cli.aux_prime_bound,
        allow_unsaturated: cli.allow_unsaturated,
        order_primes: matches!(cli.command, Command::Saturate { order_primes: true, .. }),
    };
    let name = cli.command.name();
    let outcome = std::fs::read_to_string(cli.command.file())
        .map_err(|e| {
            CliError::from(InputError { field: cli.command.file().display().to_string(), message: e.to_string() })
        })
        .and_then(|text| Ok(CurveDescription::parse(&text)?))
        .and_then(|d| Ok(d.validate()?))
        .and_then(|problem| execute(name, &problem, &flags));
    match outcome {
        Ok(report) if cli.json => (0, serde_json::to_string_pretty(&report).expect("reports serialize")),
        Ok(report) => (0, render_text(&report)),
        Err(e) => (e.exit_code(), render_error(name, &e, cli.json)),
    }
}
