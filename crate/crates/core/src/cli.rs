//! Command-line front end. The binary is a thin wrapper around [`run`].

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::critical_map::{
    build_bundle, column_difference_divisibility, column_divisibility, verify_identity,
    IdentityRecord, SizeGuard,
};
use crate::dyson::{detja_coefficient_check, dyson_report, DysonRecord};
use crate::error::{Error, Result};
use crate::multi_index::{sweep_range, MultiIndex};
use crate::numeric::{parse_pairs, ComplexPath};
use crate::poly_core::{vandermonde_matrix, vandermonde_product, DetMethod};
use crate::stratify::{part_of, LiftOptions, Lifter, SetPartition};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_IDENTITY_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "critval",
    version,
    about = "Exact Jacobian identities and critical-value path lifting"
)]
pub struct Cli {
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Text, env = "CRITVAL_FORMAT", global = true)]
    pub format: Format,

    /// Write the report here instead of stdout
    #[arg(long, env = "CRITVAL_OUT", global = true)]
    pub out: Option<PathBuf>,

    /// Newton residual tolerance for `lift`
    #[arg(long, default_value_t = LiftOptions::default().residual_tol, env = "CRITVAL_TOL", global = true)]
    pub tol: f64,

    /// Coordinates closer than this are treated as equal
    #[arg(long, default_value_t = LiftOptions::default().coincidence, env = "CRITVAL_COINCIDENCE_TOL", global = true)]
    pub coincidence_tol: f64,

    /// Corrector iteration cap
    #[arg(long, default_value_t = LiftOptions::default().max_iter, env = "CRITVAL_MAX_ITER", global = true)]
    pub max_iter: usize,

    /// First continuation step, as a fraction of one path segment
    #[arg(long, default_value_t = LiftOptions::default().initial_step, env = "CRITVAL_INITIAL_STEP", global = true)]
    pub initial_step: f64,

    /// Smallest allowed continuation step
    #[arg(long, default_value_t = LiftOptions::default().min_step, env = "CRITVAL_MIN_STEP", global = true)]
    pub min_step: f64,

    /// Largest m accepted by single-instance symbolic commands
    #[arg(long, env = "CRITVAL_GUARD_M", global = true)]
    pub guard_m: Option<usize>,

    /// Largest n accepted by single-instance symbolic commands
    #[arg(long, env = "CRITVAL_GUARD_N", global = true)]
    pub guard_n: Option<u32>,

    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Compare det J_a with its factored closed form
    Verify { a: MultiIndex },
    /// Compare the n x n Vandermonde determinant with the product of differences
    Vandermonde { n: usize },
    /// Constant term of the Dyson product against the multinomial coefficient
    Dyson { a: MultiIndex },
    /// Print the symbolic Jacobian J_a and its determinant
    Jacobian { a: MultiIndex },
    /// Lift a critical-value path given in a path file
    Lift {
        #[arg(long = "path-in", env = "CRITVAL_PATH_IN")]
        path_in: PathBuf,
        /// Start point as `re im` pairs
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        /// Stratum, e.g. `{{1,3},{2}}`; defaults to the pattern of the start point
        #[arg(long)]
        partition: Option<SetPartition>,
    },
    /// Run every exact check over all compositions with n <= n-max, m <= m-max
    Sweep {
        #[arg(long = "n-max", env = "CRITVAL_N_MAX", default_value_t = 6)]
        n_max: u32,
        #[arg(long = "m-max", env = "CRITVAL_M_MAX", default_value_t = 3)]
        m_max: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Verify(MultiIndex),
    Vandermonde(usize),
    Dyson(MultiIndex),
    Jacobian(MultiIndex),
    Lift {
        path_in: PathBuf,
        start: String,
        partition: Option<SetPartition>,
    },
    Sweep {
        n_max: u32,
        m_max: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub lift: LiftOptions,
    pub guard_m: Option<usize>,
    pub guard_n: Option<u32>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            format: Format::Text,
            out: None,
            lift: LiftOptions::default(),
            guard_m: None,
            guard_n: None,
        }
    }

    pub fn with_format(mut self, format: Format) -> Self {
        self.format = format;
        self
    }

    fn guard(&self, default: SizeGuard) -> SizeGuard {
        SizeGuard::new(
            self.guard_m.unwrap_or(default.m_max),
            self.guard_n.unwrap_or(default.n_max),
        )
    }

    /// Bounds and file checks done before any work starts.
    pub fn validate(&self) -> Result<()> {
        let o = &self.lift;
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !(positive(o.residual_tol) && positive(o.min_step) && positive(o.initial_step))
            || o.initial_step > 1.0
            || o.coincidence.is_nan()
            || o.coincidence < 0.0
            || o.max_iter == 0
        {
            return Err(Error::Parse(
                "tolerances must be positive and the initial step at most 1".into(),
            ));
        }
        match &self.command {
            Command::Vandermonde(0) => return Err(Error::Parse("n must be positive".into())),
            Command::Sweep { n_max, m_max } if *n_max == 0 || *m_max == 0 => {
                return Err(Error::Parse("--n-max and --m-max must be positive".into()))
            }
            Command::Lift { path_in, .. } => {
                File::open(path_in)?;
            }
            _ => {}
        }
        if let Some(out) = &self.out {
            let parent = out.parent().filter(|p| !p.as_os_str().is_empty());
            if let Some(dir) = parent {
                if !dir.is_dir() {
                    return Err(Error::Parse(format!(
                        "output directory {} does not exist",
                        dir.display()
                    )));
                }
            }
        }
        Ok(())
    }
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let command = match cli.command {
            CliCommand::Verify { a } => Command::Verify(a),
            CliCommand::Vandermonde { n } => Command::Vandermonde(n),
            CliCommand::Dyson { a } => Command::Dyson(a),
            CliCommand::Jacobian { a } => Command::Jacobian(a),
            CliCommand::Lift {
                path_in,
                start,
                partition,
            } => Command::Lift {
                path_in,
                start,
                partition,
            },
            CliCommand::Sweep { n_max, m_max } => Command::Sweep { n_max, m_max },
        };
        RunConfig {
            command,
            format: cli.format,
            out: cli.out,
            lift: LiftOptions {
                coincidence: cli.coincidence_tol,
                residual_tol: cli.tol,
                max_iter: cli.max_iter,
                initial_step: cli.initial_step,
                min_step: cli.min_step,
                ..LiftOptions::default()
            },
            guard_m: cli.guard_m,
            guard_n: cli.guard_n,
        }
    }
}

/// Machine-readable record written to stderr on any nonzero exit.
#[derive(Clone, Debug, Serialize)]
pub struct FailureRecord {
    pub status: &'static str,
    /// Name of the first identity that failed, or the error kind.
    pub identity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<MultiIndex>,
    pub message: String,
}

struct Outcome {
    report: String,
    failure: Option<FailureRecord>,
}

impl Outcome {
    fn pass(report: String) -> Self {
        Self {
            report,
            failure: None,
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn csv_rows<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("flat rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf8")
}

fn identity_failure(identity: &str, a: Option<&MultiIndex>, message: String) -> FailureRecord {
    FailureRecord {
        status: "fail",
        identity: identity.into(),
        a: a.cloned(),
        message,
    }
}

#[derive(Serialize)]
struct VerifyRow<'a> {
    a: String,
    n: u32,
    m: usize,
    equal: bool,
    wall_time_ms: f64,
    factored: &'a str,
    determinant: &'a str,
}

fn cmd_verify(cfg: &RunConfig, a: &MultiIndex) -> Result<Outcome> {
    let rec: IdentityRecord = verify_identity(a, &cfg.guard(SizeGuard::default()))?.record();
    let report = match cfg.format {
        Format::Json => json(&rec),
        Format::Csv => csv_rows(&[VerifyRow {
            a: a.to_string(),
            n: rec.n,
            m: rec.m,
            equal: rec.equal,
            wall_time_ms: rec.wall_time_ms,
            factored: &rec.factored,
            determinant: &rec.lhs_text,
        }]),
        Format::Text => format!(
            "a = {}\ndet J_a = {}\nclosed form = {}\n            = {}\nequal = {}\ntime_ms = {:.3}\n",
            a, rec.lhs_text, rec.factored, rec.rhs_text, rec.equal, rec.wall_time_ms
        ),
    };
    let failure = (!rec.equal).then(|| {
        identity_failure(
            "determinant",
            Some(a),
            "det J_a differs from D/(n; a)".into(),
        )
    });
    Ok(Outcome { report, failure })
}

#[derive(Serialize)]
struct VandermondeRecord {
    n: usize,
    det: String,
    product: String,
    equal: bool,
}

fn cmd_vandermonde(cfg: &RunConfig, n: usize) -> Result<Outcome> {
    let det = vandermonde_matrix(n).determinant(DetMethod::FractionFree)?;
    let prod = vandermonde_product(n);
    let rec = VandermondeRecord {
        n,
        det: det.to_string(),
        product: prod.to_string(),
        equal: det == prod,
    };
    let report = match cfg.format {
        Format::Json => json(&rec),
        Format::Csv => csv_rows(&[&rec]),
        Format::Text => format!(
            "n = {}\ndet = {}\nproduct = {}\nequal = {}\n",
            n, rec.det, rec.product, rec.equal
        ),
    };
    let failure = (!rec.equal).then(|| identity_failure("vandermonde", None, format!("n = {n}")));
    Ok(Outcome { report, failure })
}

fn cmd_dyson(cfg: &RunConfig, a: &MultiIndex) -> Result<Outcome> {
    let rec: DysonRecord = dyson_report(a, &cfg.guard(SizeGuard::dyson()))?;
    let report = match cfg.format {
        Format::Json => json(&rec),
        Format::Csv => csv_rows(&[(
            a.to_string(),
            &rec.constant_term,
            &rec.multinomial,
            rec.equal,
        )]),
        Format::Text => format!(
            "a = {}\nconstant term = {}\nmultinomial = {}\nequal = {}\n",
            a, rec.constant_term, rec.multinomial, rec.equal
        ),
    };
    let failure =
        (!rec.equal).then(|| identity_failure("dyson", Some(a), "constant term differs".into()));
    Ok(Outcome { report, failure })
}

#[derive(Serialize)]
struct JacobianRecord {
    a: MultiIndex,
    /// `entries[i][j] = ∂/∂z_{i+1} p_a(z_{j+1})`
    entries: Vec<Vec<String>>,
    determinant: String,
}

#[derive(Serialize)]
struct JacobianRow {
    row: usize,
    col: usize,
    entry: String,
}

fn cmd_jacobian(cfg: &RunConfig, a: &MultiIndex) -> Result<Outcome> {
    cfg.guard(SizeGuard::default()).check(a)?;
    let bundle = build_bundle(a);
    let m = a.m();
    let rec = JacobianRecord {
        a: a.clone(),
        entries: (0..m)
            .map(|i| (0..m).map(|j| bundle.entry(i, j).to_string()).collect())
            .collect(),
        determinant: bundle.determinant().to_string(),
    };
    let report = match cfg.format {
        Format::Json => json(&rec),
        Format::Csv => {
            let rows: Vec<JacobianRow> = (0..m * m)
                .map(|k| JacobianRow {
                    row: k / m + 1,
                    col: k % m + 1,
                    entry: rec.entries[k / m][k % m].clone(),
                })
                .collect();
            csv_rows(&rows)
        }
        Format::Text => {
            let mut s = format!("a = {a}\np_a = {}\n", bundle.p_a.to_multi());
            for i in 0..m {
                for j in 0..m {
                    writeln!(s, "J[{},{}] = {}", i + 1, j + 1, rec.entries[i][j]).unwrap();
                }
            }
            writeln!(s, "det = {}", rec.determinant).unwrap();
            s
        }
    };
    Ok(Outcome::pass(report))
}

#[derive(Serialize)]
struct LiftRecord {
    partition: String,
    samples: Vec<Vec<[f64; 2]>>,
    accepted_steps: usize,
    rejected_steps: usize,
    max_residual: f64,
}

#[derive(Serialize)]
struct LiftRow {
    sample: usize,
    coord: usize,
    re: f64,
    im: f64,
}

fn cmd_lift(
    cfg: &RunConfig,
    path_in: &PathBuf,
    start: &str,
    partition: Option<&SetPartition>,
) -> Result<Outcome> {
    let target = ComplexPath::read(BufReader::new(File::open(path_in)?))?;
    let z0 = parse_pairs(start)?;
    let lambda = match partition {
        Some(p) => p.clone(),
        None => part_of(&z0, cfg.lift.coincidence),
    };
    let lifted = Lifter::new(&lambda, cfg.lift).lift(&z0, &target)?;
    let report = match cfg.format {
        Format::Text => lifted.path.to_text(),
        Format::Json => json(&LiftRecord {
            partition: lambda.to_string(),
            samples: lifted
                .path
                .samples()
                .iter()
                .map(|s| s.coords().iter().map(|c| [c.re, c.im]).collect())
                .collect(),
            accepted_steps: lifted.accepted_steps,
            rejected_steps: lifted.rejected_steps,
            max_residual: lifted.max_residual,
        }),
        Format::Csv => {
            let mut rows = Vec::new();
            for (k, s) in lifted.path.samples().iter().enumerate() {
                for (i, c) in s.coords().iter().enumerate() {
                    rows.push(LiftRow {
                        sample: k,
                        coord: i + 1,
                        re: c.re,
                        im: c.im,
                    });
                }
            }
            csv_rows(&rows)
        }
    };
    Ok(Outcome::pass(report))
}

/// Per-instance result of the exact sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRecord {
    pub a: MultiIndex,
    pub n: u32,
    pub m: usize,
    pub determinant: bool,
    pub dyson: bool,
    pub diagonal_coefficient: bool,
    pub columns: bool,
    pub column_differences: bool,
    pub wall_time_ms: f64,
}

impl SweepRecord {
    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        [
            ("determinant", self.determinant),
            ("dyson", self.dyson),
            ("diagonal_coefficient", self.diagonal_coefficient),
            ("columns", self.columns),
            ("column_differences", self.column_differences),
        ]
        .into_iter()
        .find(|(_, ok)| !ok)
        .map(|(name, _)| name)
    }
}

#[derive(Serialize)]
struct SweepRow {
    a: String,
    n: u32,
    m: usize,
    determinant: bool,
    dyson: bool,
    diagonal_coefficient: bool,
    columns: bool,
    column_differences: bool,
    wall_time_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub total_time_ms: f64,
}

#[derive(Serialize)]
struct SweepReport<'a> {
    records: &'a [SweepRecord],
    summary: &'a SweepSummary,
}

pub fn sweep_instance(a: &MultiIndex, guard: &SizeGuard) -> Result<SweepRecord> {
    let start = Instant::now();
    let bundle = build_bundle(a);
    let det = bundle.determinant();
    let determinant = det == crate::critical_map::closed_form_det(a);
    let dyson = dyson_report(a, guard)?.equal;
    let diagonal_coefficient = detja_coefficient_check(a, guard)?;
    Ok(SweepRecord {
        a: a.clone(),
        n: a.n(),
        m: a.m(),
        determinant,
        dyson,
        diagonal_coefficient,
        columns: column_divisibility(&bundle),
        column_differences: column_difference_divisibility(&bundle),
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Exact checks for every composition in range, in enumeration order.
pub fn sweep(n_max: u32, m_max: usize) -> Result<(Vec<SweepRecord>, SweepSummary)> {
    let start = Instant::now();
    let guard = SizeGuard::new(m_max, n_max);
    let records = sweep_range(n_max, m_max)
        .par_iter()
        .map(|a| sweep_instance(a, &guard))
        .collect::<Result<Vec<_>>>()?;
    let passed = records.iter().filter(|r| r.passed()).count();
    let summary = SweepSummary {
        instances: records.len(),
        passed,
        failed: records.len() - passed,
        total_time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok((records, summary))
}

fn cmd_sweep(cfg: &RunConfig, n_max: u32, m_max: usize) -> Result<Outcome> {
    let (records, summary) = sweep(n_max, m_max)?;
    let report = match cfg.format {
        Format::Json => json(&SweepReport {
            records: &records,
            summary: &summary,
        }),
        Format::Csv => csv_rows(
            &records
                .iter()
                .map(|r| SweepRow {
                    a: r.a.to_string(),
                    n: r.n,
                    m: r.m,
                    determinant: r.determinant,
                    dyson: r.dyson,
                    diagonal_coefficient: r.diagonal_coefficient,
                    columns: r.columns,
                    column_differences: r.column_differences,
                    wall_time_ms: r.wall_time_ms,
                })
                .collect::<Vec<_>>(),
        ),
        Format::Text => {
            let mut s = String::new();
            for r in &records {
                writeln!(
                    s,
                    "{:<14} {}  {:>10.3} ms",
                    r.a.to_string(),
                    r.first_failure()
                        .map_or("pass".to_string(), |f| format!("FAIL {f}")),
                    r.wall_time_ms
                )
                .unwrap();
            }
            writeln!(
                s,
                "{} instances, {} passed, {} failed, {:.1} ms",
                summary.instances, summary.passed, summary.failed, summary.total_time_ms
            )
            .unwrap();
            s
        }
    };
    let failure = records.iter().find_map(|r| {
        r.first_failure().map(|name| {
            identity_failure(
                name,
                Some(&r.a),
                format!("first failure in sweep n<={n_max}, m<={m_max}"),
            )
        })
    });
    Ok(Outcome { report, failure })
}

fn dispatch(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    match &cfg.command {
        Command::Verify(a) => cmd_verify(cfg, a),
        Command::Vandermonde(n) => cmd_vandermonde(cfg, *n),
        Command::Dyson(a) => cmd_dyson(cfg, a),
        Command::Jacobian(a) => cmd_jacobian(cfg, a),
        Command::Lift {
            path_in,
            start,
            partition,
        } => cmd_lift(cfg, path_in, start, partition.as_ref()),
        Command::Sweep { n_max, m_max } => cmd_sweep(cfg, *n_max, *m_max),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::CorrectorDiverged { .. } => "corrector_diverged",
        Error::StepUnderflow { .. } => "step_underflow",
        Error::InitialPointMismatch { .. } => "initial_point_mismatch",
        Error::StratumMismatch => "stratum_mismatch",
        Error::GuardExceeded { .. } => "guard_exceeded",
        Error::Io(_) => "io",
        _ => "usage",
    }
}

/// Run one command, writing the report to `cfg.out` or `stdout` and a JSON
/// failure record to `stderr` on any nonzero exit. Returns the exit status.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let (outcome, code) = match dispatch(cfg) {
        Ok(o) => {
            let code = if o.failure.is_some() {
                EXIT_IDENTITY_FAILURE
            } else {
                EXIT_PASS
            };
            (o, code)
        }
        Err(e) => {
            let mut message = e.to_string();
            if let Error::CorrectorDiverged { last_good, .. }
            | Error::StepUnderflow { last_good, .. } = &e
            {
                write!(
                    message,
                    "; last good sample: {}",
                    crate::numeric::format_pairs(last_good)
                )
                .unwrap();
            }
            let rec = FailureRecord {
                status: "error",
                identity: error_kind(&e).into(),
                a: None,
                message,
            };
            let code = if e.is_numeric() {
                EXIT_NUMERIC
            } else {
                EXIT_USAGE
            };
            (
                Outcome {
                    report: String::new(),
                    failure: Some(rec),
                },
                code,
            )
        }
    };
    if !outcome.report.is_empty() {
        let written = match &cfg.out {
            Some(path) => std::fs::write(path, &outcome.report),
            None => stdout.write_all(outcome.report.as_bytes()),
        };
        if let Err(e) = written {
            let _ = writeln!(
                stderr,
                "{}",
                serde_json::json!({"status": "error", "identity": "io", "message": e.to_string()})
            );
            return EXIT_USAGE;
        }
    }
    if let Some(f) = &outcome.failure {
        let _ = writeln!(
            stderr,
            "{}",
            serde_json::to_string(f).expect("serializable")
        );
    }
    code
}

/// Parse arguments (including the program name) and run.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.into(), stdout, stderr),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            code
        }
    }
}
