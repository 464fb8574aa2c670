//! Command-line front end: argument parsing, dispatch and report output.
//!
//! Exit codes: 0 success, 1 identity fails or solver did not converge,
//! 2 usage error, 3 internal numeric failure.

pub mod partition;
pub mod polyparse;

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use equicert::identities::{self, UnityVariant};
use equicert::maxent::{self, Certificate, SolverOptions};
use equicert::momatrix::{christoffel_form, moment_matrix};
use equicert::polycore::{graded_lex_basis, serde_rational};
use equicert::{Error, MPoly, MeasureId, MomentFunctional, Normalization, Polynomial, Rational};
use serde::Serialize;
use serde_json::{json, Value};

use partition::{emit_partition, parse_points, Domain};
use polyparse::parse_poly;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "equicert", version, about = "Exact positivity certificates and max-entropy partitions of unity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format; CSV is only available for moment tables.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Arcsine,
    ArcsineG,
    Lebesgue01,
    SimplexUniform,
    SimplexEquilibrium,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    PaperPi,
    Probability,
}

impl From<NormalizationArg> for Normalization {
    fn from(n: NormalizationArg) -> Self {
        match n {
            NormalizationArg::PaperPi => Normalization::PaperPi,
            NormalizationArg::Probability => Normalization::Probability,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IdentityArg {
    Pell,
    Unity1,
    Unity2,
    Cheby2,
    Unity01,
    SimplexUnity,
    SimplexEquilibrium,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[arg(long, value_enum)]
    pub measure: MeasureArg,
    /// Simplex dimension (simplex-uniform only).
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, value_enum, default_value_t = NormalizationArg::PaperPi)]
    pub normalization: NormalizationArg,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_iter: u64,
    /// Rationalize the dual vector and verify the certificate exactly.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    /// Constant target polynomial.
    #[arg(long, conflicts_with = "target", allow_hyphen_values = true)]
    pub target_constant: Option<String>,
    /// Target polynomial, e.g. "1 + x^2".
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check T_n^2 + (1 - x^2) U_{n-1}^2 = 1.
    Pell {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Table of exact moments up to a total degree.
    Moments {
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long)]
        max_degree: u32,
    },
    /// Moment (or localizing) matrix with exact entries.
    Matrix {
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long)]
        n: u32,
        /// Localizing polynomial g, e.g. "1 - x^2".
        #[arg(long, allow_hyphen_values = true)]
        localize: Option<String>,
    },
    /// Reciprocal Christoffel function as an exact polynomial.
    Christoffel {
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        localize: Option<String>,
        /// Evaluation points, e.g. "0.5;0.25" or "0.2,0.3".
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
    },
    /// Exact verification of a partition-of-unity identity.
    Verify {
        #[arg(long, value_enum)]
        identity: IdentityArg,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_enum, default_value_t = NormalizationArg::PaperPi)]
        normalization: NormalizationArg,
    },
    /// Dual Newton solvers for the max-entropy certificate programs.
    Maxent {
        #[command(subcommand)]
        program: Program,
    },
    /// Partition of unity members with optional point evaluations.
    Partition {
        #[arg(long, value_enum)]
        domain: Domain,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Program {
    /// Handelman certificate on [0, 1] over x^i (1 - x)^j, i + j <= n.
    Handelman {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Putinar certificate on [-1, 1] with multiplier 1 - x^2 (default target 2n + 1).
    Putinar {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Certificate of C(d+1+n, n) over products of simplex generators.
    Simplex {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

/// Command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Argument(_) | Error::Domain(_) => EXIT_USAGE,
            Error::NoInteriorCertificate { .. } => EXIT_FAILED,
            Error::NotPositiveDefinite { .. } | Error::Numeric(_) => EXIT_NUMERIC,
        };
        Self { code, message: e.to_string() }
    }
}

/// Rendered report plus the exit code it implies.
pub struct Outcome {
    pub body: String,
    pub code: i32,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn json<T: Serialize>(value: &T, code: i32) -> Self {
        Self {
            body: serde_json::to_string_pretty(value).expect("reports serialize"),
            code,
            warnings: Vec::new(),
        }
    }
}

fn measure_id(args: &MeasureArgs) -> Result<MeasureId, Failure> {
    let need_no_d = |id| match args.d {
        Some(_) => Err(Failure::usage("--d only applies to simplex-uniform")),
        None => Ok(id),
    };
    match args.measure {
        MeasureArg::Arcsine => need_no_d(MeasureId::Arcsine),
        MeasureArg::ArcsineG => need_no_d(MeasureId::ArcsineG),
        MeasureArg::Lebesgue01 => need_no_d(MeasureId::Lebesgue01),
        MeasureArg::SimplexEquilibrium => need_no_d(MeasureId::SimplexEquilibrium(args.normalization.into())),
        MeasureArg::SimplexUniform => match args.d {
            Some(d) if d >= 1 => Ok(MeasureId::SimplexUniform(d)),
            _ => Err(Failure::usage("simplex-uniform needs --d >= 1")),
        },
    }
}

fn functional(args: &MeasureArgs) -> Result<MomentFunctional, Failure> {
    Ok(MomentFunctional::new(measure_id(args)?)?)
}

fn parse_in(src: &str, dim: usize) -> Result<MPoly, Failure> {
    parse_poly(src, dim).map_err(|e| Failure::usage(format!("cannot parse polynomial `{src}`: {e}")))
}

fn moments_csv(f: &MomentFunctional, max_degree: u32) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure { code: EXIT_NUMERIC, message: e.to_string() };
    w.write_record(["exponent", "value"]).map_err(io)?;
    for e in graded_lex_basis(f.dimension(), max_degree) {
        let label = e.iter().map(u32::to_string).collect::<Vec<_>>().join(";");
        w.write_record([label, f.moment(&e)?.to_string()]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure { code: EXIT_NUMERIC, message: e.to_string() })?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

#[derive(Serialize)]
struct MomentEntry {
    exponent: Vec<u32>,
    #[serde(with = "serde_rational")]
    value: Rational,
}

fn target_poly(target: &TargetArgs, default: Option<MPoly>) -> Result<MPoly, Failure> {
    match (&target.target_constant, &target.target) {
        (Some(c), _) => {
            let c = equicert::polycore::parse_rational(c.trim())
                .map_err(|e| Failure::usage(format!("bad --target-constant: {e}")))?;
            Ok(MPoly::constant(1, c))
        }
        (None, Some(p)) => parse_in(p, 1),
        (None, None) => default.ok_or_else(|| Failure::usage("one of --target-constant or --target is required")),
    }
}

fn options(solver: &SolverArgs) -> SolverOptions {
    SolverOptions::new(solver.tol, solver.max_iter as usize)
}

fn solver_failure(e: Error) -> Result<Outcome, Failure> {
    match e {
        Error::NoInteriorCertificate { degree, reason, report } => {
            let body = json!({
                "converged": false,
                "degree": degree,
                "diagnostic": format!("no interior certificate found at degree {degree}: {reason}"),
                "report": report,
            });
            let mut out = Outcome::json(&body, EXIT_FAILED);
            out.warnings.push(format!("no interior certificate found at degree {degree}: {reason}"));
            Ok(out)
        }
        other => Err(other.into()),
    }
}

fn maxent_outcome(
    certificate: Certificate,
    exact: Option<Certificate>,
    dual: &maxent::DualFunctional,
    report: &maxent::SolverReport,
    observation: Option<Value>,
) -> Result<Outcome, Failure> {
    let target = match &certificate {
        Certificate::Handelman(c) => c.target.clone(),
        Certificate::Putinar(c) => c.target.clone(),
    };
    let residual = maxent::verify_certificate(&certificate, &target)?;
    let exact_verified = exact.is_some();
    let mut body = json!({
        "certificate": exact.unwrap_or(certificate),
        "dual": dual,
        "report": report,
        "verification_residual": residual,
        "exact_verified": exact_verified,
    });
    if let Some(obs) = observation {
        body["observation"] = obs;
    }
    Ok(Outcome::json(&body, EXIT_OK))
}

fn run_maxent(program: &Program) -> Result<Outcome, Failure> {
    match program {
        Program::Handelman { n, target, solver } => {
            let p = target_poly(target, None)?;
            let p = p.to_upoly().expect("univariate");
            let sol = match maxent::solve_handelman(&p, *n as usize, &options(solver)) {
                Ok(s) => s,
                Err(e) => return solver_failure(e),
            };
            let exact = exact_handelman(&sol, solver.exact)?;
            let note = exact_note(solver.exact, exact.is_some());
            let mut out = maxent_outcome(
                Certificate::Handelman(sol.certificate.clone()),
                exact,
                &sol.dual,
                &sol.report,
                None,
            )?;
            out.warnings.extend(note);
            Ok(out)
        }
        Program::Putinar { n, target, solver } => {
            let default = MPoly::constant(1, Rational::from_integer((2 * n + 1).into()));
            let p = target_poly(target, Some(default))?.to_upoly().expect("univariate");
            let sol = match maxent::solve_putinar(*n as usize, Some(&p), &options(solver)) {
                Ok(s) => s,
                Err(e) => return solver_failure(e),
            };
            let exact = if solver.exact {
                maxent::rationalize_putinar(&sol)?.map(Certificate::Putinar)
            } else {
                None
            };
            let note = exact_note(solver.exact, exact.is_some());
            let mut out = maxent_outcome(
                Certificate::Putinar(sol.certificate.clone()),
                exact,
                &sol.dual,
                &sol.report,
                None,
            )?;
            out.warnings.extend(note);
            Ok(out)
        }
        Program::Simplex { d, n, solver } => {
            let sol = match maxent::solve_simplex(*d as usize, *n as usize, &options(solver)) {
                Ok(s) => s,
                Err(e) => return solver_failure(e),
            };
            let exact = exact_handelman(&sol, solver.exact)?;
            let note = exact_note(solver.exact, exact.is_some());
            let observation = json!({
                "uniform_candidate_max_relative_deviation": maxent::uniform_candidate_deviation(&sol)?,
            });
            let mut out = maxent_outcome(
                Certificate::Handelman(sol.certificate.clone()),
                exact,
                &sol.dual,
                &sol.report,
                Some(observation),
            )?;
            out.warnings.extend(note);
            Ok(out)
        }
    }
}

fn exact_handelman(sol: &maxent::HandelmanSolution, wanted: bool) -> Result<Option<Certificate>, Failure> {
    if !wanted {
        return Ok(None);
    }
    Ok(maxent::rationalize_handelman(sol)?.map(Certificate::Handelman))
}

fn exact_note(wanted: bool, found: bool) -> Option<String> {
    (wanted && !found).then(|| "rationalized dual did not yield an exact certificate; reporting floats".to_string())
}

fn run_verify(identity: IdentityArg, n: usize, d: Option<usize>, norm: NormalizationArg) -> Result<Outcome, Failure> {
    let takes_d = matches!(identity, IdentityArg::SimplexUnity);
    if d.is_some() && !takes_d {
        return Err(Failure::usage("--d only applies to simplex-unity"));
    }
    let report = match identity {
        IdentityArg::Pell => identities::verify_pell(n),
        IdentityArg::Unity1 => identities::verify_unity_interval(n, UnityVariant::Unity1),
        IdentityArg::Unity2 => identities::verify_unity_interval(n, UnityVariant::Unity2),
        IdentityArg::Cheby2 => identities::verify_unity_interval(n, UnityVariant::Cheby2),
        IdentityArg::Unity01 => identities::verify_unity_01(n),
        IdentityArg::SimplexUnity => {
            let d = d.ok_or_else(|| Failure::usage("simplex-unity needs --d"))?;
            identities::verify_simplex_unity(d, n)?
        }
        IdentityArg::SimplexEquilibrium => identities::verify_simplex_equilibrium(n, norm.into())?,
    };
    let mismatch_is_warning = identity == IdentityArg::SimplexEquilibrium;
    let ok = report.holds && (mismatch_is_warning || report.matches_expected() != Some(false));
    let mut out = Outcome::json(&report, if ok { EXIT_OK } else { EXIT_FAILED });
    out.warnings.extend(report.warning());
    Ok(out)
}

fn dispatch(command: &Command, format: Format) -> Result<Outcome, Failure> {
    if format == Format::Csv && !matches!(command, Command::Moments { .. }) {
        return Err(Failure::usage("CSV output is only available for `moments`"));
    }
    match command {
        Command::Pell { n } => run_verify(IdentityArg::Pell, *n as usize, None, NormalizationArg::PaperPi),
        Command::Moments { measure, max_degree } => {
            let f = functional(measure)?;
            if format == Format::Csv {
                return Ok(Outcome { body: moments_csv(&f, *max_degree)?, code: EXIT_OK, warnings: vec![] });
            }
            let moments = graded_lex_basis(f.dimension(), *max_degree)
                .into_iter()
                .map(|e| Ok(MomentEntry { value: f.moment(&e)?, exponent: e }))
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(Outcome::json(&json!({ "measure": f.measure(), "moments": moments }), EXIT_OK))
        }
        Command::Matrix { measure, n, localize } => {
            let f = functional(measure)?;
            let g = localize.as_deref().map(|s| parse_in(s, f.dimension())).transpose()?;
            let m = moment_matrix(&f, *n, g.as_ref())?;
            let mut body = serde_json::to_value(&m).expect("matrices serialize");
            if let Some(g) = &g {
                body["localizer"] = json!(g.to_string());
            }
            Ok(Outcome::json(&body, EXIT_OK))
        }
        Command::Christoffel { measure, n, localize, points } => {
            let f = functional(measure)?;
            let g = localize.as_deref().map(|s| parse_in(s, f.dimension())).transpose()?;
            let form = christoffel_form(&f, *n, g.as_ref())?;
            let pts = points.as_deref().map(parse_points).transpose().map_err(Failure::usage)?.unwrap_or_default();
            let mut values = Vec::with_capacity(pts.len());
            for p in &pts {
                if p.len() != f.dimension() {
                    return Err(Failure::usage(format!("point {p:?} has wrong dimension")));
                }
                values.push(json!({ "point": p, "value": form.quadratic_form_poly.eval_f64(p) }));
            }
            let body = json!({
                "measure": f.measure(),
                "degree": n,
                "polynomial": form.quadratic_form_poly,
                "text": form.quadratic_form_poly.to_string(),
                "constant": form.quadratic_form_poly.constant_value().map(|c| c.to_string()),
                "evaluations": values,
            });
            Ok(Outcome::json(&body, EXIT_OK))
        }
        Command::Verify { identity, n, d, normalization } => run_verify(*identity, *n as usize, *d, *normalization),
        Command::Maxent { program } => run_maxent(program),
        Command::Partition { domain, n, d, points } => {
            let pts = points.as_deref().map(parse_points).transpose().map_err(Failure::usage)?.unwrap_or_default();
            let report = emit_partition(*domain, *n, *d, &pts).map_err(Failure::usage)?;
            Ok(Outcome::json(&report, EXIT_OK))
        }
    }
}

/// Parses `argv` (including the program name), runs the command and writes
/// the report. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match dispatch(&cli.command, cli.output.format) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return f.code;
        }
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let mut body = outcome.body;
    if !body.ends_with('\n') {
        body.push('\n');
    }
    let written = match &cli.output.output {
        Some(path) => fs::write(path, body.as_bytes()),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return EXIT_NUMERIC;
    }
    outcome.code
}
