//! Command-line front end and the JSON instance format.
//!
//! An instance file is a single JSON document:
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "hamiltonian": [[0, 0], [0, 1]],
//!   "state": [[0.25, 0], [0, 0.75]],
//!   "measurements": [
//!     {"name": "x", "elements": [[[0.5, 0.5], [0.5, 0.5]], [[0.5, -0.5], [-0.5, 0.5]]]}
//!   ],
//!   "post_processing": [
//!     {"name": "half", "matrix": [[0.5, 1], [0.5, 0]]}
//!   ]
//! }
//! ```
//!
//! Matrices are row-major nested arrays. A complex entry is a two-element
//! array `[re, im]`; a bare number is a real entry. `measurements` and
//! `post_processing` are optional.
//!
//! Exit codes: `0` success (and no violations for `verify`), `1` audit
//! violations found, `2` usage, parse or validation error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ergotropy::{format_float, observational_ergotropy, report, WorkReport};
use crate::error::Error;
use crate::measurement::{post_process, FineGrainedMeasurement, Povm, StochasticMatrix};
use crate::numerics::ComplexMatrix;
use crate::quantum::{DensityMatrix, Hamiltonian};
use crate::verifier::{audit, AuditConfig, AuditResult, Claim};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: file not found")]
    FileNotFound(PathBuf),

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("{path}: parse error at `{field}`: {message}")]
    Parse {
        path: String,
        field: String,
        message: String,
    },

    #[error("{path}: invalid `{field}`: {source}")]
    Validation {
        path: String,
        field: String,
        source: Error,
    },

    #[error("no measurement named `{0}` in the instance file")]
    UnknownMeasurement(String),

    #[error("no post-processing matrix named `{0}` in the instance file")]
    UnknownPostProcessing(String),

    #[error("unknown stochastic family `{0}` (expected one of: ground-merge, depolarize)")]
    UnknownFamily(String),

    #[error("invalid grid `{0}`: {1}")]
    InvalidGrid(String, String),

    #[error("invalid claim `{0}` (expected theorem1, theorem2, theorem3, lemma1, schur or all)")]
    InvalidClaim(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Compute(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Debug, Parser)]
#[command(name = "obsergo", version, about = "Ergotropy under coarse-grained measurements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Work quantities of the state in an instance file.
    Report {
        instance: PathBuf,
        /// Named measurement for the observational ergotropy.
        #[arg(long)]
        measurement: Option<String>,
        /// Named post-processing applied to the measurement (the energy basis if none is named).
        #[arg(long = "post-process")]
        post_process: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Observational ergotropy along a one-parameter family of post-processings.
    Sweep {
        instance: PathBuf,
        /// `ground-merge` or `depolarize`.
        #[arg(long)]
        family: String,
        /// `start:stop:count` (inclusive) or a comma-separated list.
        #[arg(long)]
        grid: String,
        /// Parent measurement to post-process (the energy basis if omitted).
        #[arg(long)]
        measurement: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte-Carlo audits: theorem1, theorem2, theorem3, lemma1, schur or all.
    Verify {
        claim: String,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// State rank (defaults to d).
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Spread trials over all cores. Output is unchanged.
        #[arg(long)]
        parallel: bool,
    },
}

impl Command {
    pub fn output(&self) -> Option<&Path> {
        match self {
            Command::Report { output, .. }
            | Command::Sweep { output, .. }
            | Command::Verify { output, .. } => output.as_deref(),
        }
    }
}

/// Text destined for stdout (or `--output`) plus the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedMeasurement {
    pub name: String,
    pub elements: Vec<ComplexMatrix>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedStochastic {
    pub name: String,
    pub matrix: Vec<Vec<f64>>,
}

/// The raw instance document, before physical validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub dimension: usize,
    pub hamiltonian: ComplexMatrix,
    pub state: ComplexMatrix,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub measurements: Vec<NamedMeasurement>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub post_processing: Vec<NamedStochastic>,
}

/// A validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub hamiltonian: Hamiltonian,
    pub state: DensityMatrix,
    pub measurements: Vec<(String, Povm)>,
    pub post_processing: Vec<(String, StochasticMatrix)>,
}

impl Instance {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => CliError::FileNotFound(path.to_path_buf()),
            _ => CliError::Io {
                path: path.to_path_buf(),
                message: e.to_string(),
            },
        })?;
        Self::from_json(&text, &path.display().to_string())
    }

    /// Parses and validates; `origin` names the source in error messages.
    pub fn from_json(text: &str, origin: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: InstanceFile = serde_path_to_error::deserialize(de).map_err(|e| CliError::Parse {
            path: origin.to_string(),
            field: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        Self::validate(raw, origin)
    }

    pub fn validate(raw: InstanceFile, origin: &str) -> Result<Self, CliError> {
        let invalid = |field: String| {
            let origin = origin.to_string();
            move |source: Error| CliError::Validation {
                path: origin,
                field,
                source,
            }
        };
        let d = raw.dimension;
        let check_shape = |m: &ComplexMatrix, field: String| {
            if m.rows() != d || m.cols() != d {
                return Err(invalid(field)(Error::DimensionMismatch {
                    expected: format!("{d}x{d}"),
                    found: format!("{}x{}", m.rows(), m.cols()),
                }));
            }
            Ok(())
        };
        if d == 0 {
            return Err(invalid("dimension".into())(Error::InvalidSize("dimension 0".into())));
        }
        check_shape(&raw.hamiltonian, "hamiltonian".into())?;
        check_shape(&raw.state, "state".into())?;
        let hamiltonian = Hamiltonian::new(raw.hamiltonian).map_err(invalid("hamiltonian".into()))?;
        let state = DensityMatrix::new(raw.state).map_err(invalid("state".into()))?;

        let mut measurements = Vec::new();
        for (i, m) in raw.measurements.into_iter().enumerate() {
            for (k, el) in m.elements.iter().enumerate() {
                check_shape(el, format!("measurements[{i}].elements[{k}]"))?;
            }
            let povm = Povm::new(m.elements).map_err(invalid(format!("measurements[{i}]")))?;
            measurements.push((m.name, povm));
        }
        let mut post_processing = Vec::new();
        for (i, s) in raw.post_processing.into_iter().enumerate() {
            let matrix = StochasticMatrix::from_rows(&s.matrix)
                .map_err(invalid(format!("post_processing[{i}]")))?;
            post_processing.push((s.name, matrix));
        }
        Ok(Self {
            hamiltonian,
            state,
            measurements,
            post_processing,
        })
    }

    pub fn measurement(&self, name: &str) -> Result<&Povm, CliError> {
        self.measurements
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p)
            .ok_or_else(|| CliError::UnknownMeasurement(name.to_string()))
    }

    pub fn post_processing(&self, name: &str) -> Result<&StochasticMatrix, CliError> {
        self.post_processing
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, d)| d)
            .ok_or_else(|| CliError::UnknownPostProcessing(name.to_string()))
    }
}

/// One-parameter families of column-stochastic `n x n` matrices, `b` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StochasticFamily {
    /// Outcome 0 is reported as outcome 0 with probability `b` and as
    /// outcome 1 otherwise; outcome 1 is always reported as 0; the rest are
    /// kept. For `n = 2` this is `[[b, 1], [1 - b, 0]]`.
    GroundMerge,
    /// `(1 - b) I + b J / n`: uniform noise with strength `b`.
    Depolarize,
}

impl StochasticFamily {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        match name {
            "ground-merge" => Ok(Self::GroundMerge),
            "depolarize" => Ok(Self::Depolarize),
            other => Err(CliError::UnknownFamily(other.to_string())),
        }
    }

    pub fn matrix(self, n: usize, b: f64) -> crate::Result<StochasticMatrix> {
        let mut m = vec![vec![0.0; n]; n];
        match self {
            Self::GroundMerge => {
                if n < 2 {
                    return Err(Error::InvalidSize("ground-merge needs at least 2 outcomes".into()));
                }
                m[0][0] = b;
                m[1][0] = 1.0 - b;
                m[0][1] = 1.0;
                for (k, row) in m.iter_mut().enumerate().skip(2) {
                    row[k] = 1.0;
                }
            }
            Self::Depolarize => {
                for (i, row) in m.iter_mut().enumerate() {
                    for (j, x) in row.iter_mut().enumerate() {
                        *x = b / n as f64 + if i == j { 1.0 - b } else { 0.0 };
                    }
                }
            }
        }
        StochasticMatrix::from_rows(&m)
    }
}

/// Parses `start:stop:count` (inclusive, evenly spaced) or `a,b,c`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::InvalidGrid(spec.to_string(), why.to_string());
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| bad(&format!("`{}` is not a finite number", s.trim())))
    };
    let values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:count"));
        }
        let start = num(parts[0])?;
        let stop = num(parts[1])?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad("count must be a positive integer"))?;
        match count {
            0 => return Err(bad("count must be a positive integer")),
            1 => vec![start],
            _ => (0..count)
                .map(|k| start + (stop - start) * k as f64 / (count - 1) as f64)
                .collect(),
        }
    } else {
        spec.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err(bad("no grid points"));
    }
    if let Some(x) = values.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(bad(&format!("{x} lies outside [0, 1]")));
    }
    Ok(values)
}

fn format_report(r: &WorkReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(r).expect("report serializes") + "\n",
        Format::Csv => format!("{}\n{}\n", WorkReport::CSV_HEADER, r.csv_row()),
    }
}

pub fn cmd_report(
    instance: &Path,
    measurement: Option<&str>,
    post: Option<&str>,
    format: Format,
) -> Result<Outcome, CliError> {
    let inst = Instance::load(instance)?;
    let base = match measurement {
        Some(name) => Some(inst.measurement(name)?.clone()),
        None => post.map(|_| FineGrainedMeasurement::energy(&inst.hamiltonian).povm()),
    };
    let m = match (base, post) {
        (Some(m), Some(name)) => Some(post_process(&m, inst.post_processing(name)?)?),
        (m, _) => m,
    };
    let r = report(&inst.state, &inst.hamiltonian, m.as_ref())?;
    Ok(Outcome {
        exit_code: 0,
        stdout: format_report(&r, format),
    })
}

#[derive(Serialize)]
struct SweepRow {
    parameter: f64,
    observational_ergotropy: f64,
}

pub fn cmd_sweep(
    instance: &Path,
    family: &str,
    grid: &str,
    measurement: Option<&str>,
    format: Format,
) -> Result<Outcome, CliError> {
    let family = StochasticFamily::parse(family)?;
    let grid = parse_grid(grid)?;
    let inst = Instance::load(instance)?;
    let parent = match measurement {
        Some(name) => inst.measurement(name)?.clone(),
        None => FineGrainedMeasurement::energy(&inst.hamiltonian).povm(),
    };
    let mut out = String::new();
    if format == Format::Csv {
        out.push_str("parameter,observational_ergotropy\n");
    }
    for b in grid {
        let d = family
            .matrix(parent.len(), b)
            .map_err(|e| CliError::InvalidGrid(format!("{b}"), e.to_string()))?;
        let q = post_process(&parent, &d)?;
        let r = observational_ergotropy(&inst.state, &inst.hamiltonian, &q)?;
        match format {
            Format::Csv => writeln!(out, "{},{}", format_float(b), format_float(r)).unwrap(),
            Format::Json => {
                let row = SweepRow {
                    parameter: b,
                    observational_ergotropy: r,
                };
                writeln!(out, "{}", serde_json::to_string(&row).unwrap()).unwrap()
            }
        }
    }
    Ok(Outcome {
        exit_code: 0,
        stdout: out,
    })
}

pub fn parse_claims(selector: &str) -> Result<Vec<Claim>, CliError> {
    if selector == "all" {
        return Ok(Claim::ALL.to_vec());
    }
    selector
        .parse::<Claim>()
        .map(|c| vec![c])
        .map_err(|_| CliError::InvalidClaim(selector.to_string()))
}

pub fn cmd_verify(selector: &str, cfg: &AuditConfig, format: Format) -> Result<Outcome, CliError> {
    let claims = parse_claims(selector)?;
    cfg.validate().map_err(|e| CliError::InvalidConfig(e.to_string()))?;
    let results: Vec<AuditResult> = claims
        .into_iter()
        .map(|c| audit(c, cfg))
        .collect::<crate::Result<_>>()?;
    let mut out = String::new();
    match format {
        Format::Json => {
            for r in &results {
                out.push_str(&r.to_json_line());
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str(AuditResult::CSV_HEADER);
            out.push('\n');
            for r in &results {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
        }
    }
    let exit_code = if results.iter().all(AuditResult::passed) { 0 } else { 1 };
    Ok(Outcome {
        exit_code,
        stdout: out,
    })
}

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Report {
            instance,
            measurement,
            post_process,
            format,
            ..
        } => cmd_report(instance, measurement.as_deref(), post_process.as_deref(), *format),
        Command::Sweep {
            instance,
            family,
            grid,
            measurement,
            format,
            ..
        } => cmd_sweep(instance, family, grid, measurement.as_deref(), *format),
        Command::Verify {
            claim,
            d,
            n,
            rank,
            trials,
            seed,
            tol,
            format,
            parallel,
            ..
        } => {
            let cfg = AuditConfig {
                d: *d,
                n: *n,
                rank: rank.unwrap_or(*d),
                trials: *trials,
                seed: *seed,
                tol: *tol,
                parallel: *parallel,
            };
            cmd_verify(claim, &cfg, *format)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the exit code, stdout text and stderr text.
pub fn run<I, S>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                (0, text, String::new())
            } else {
                (code, String::new(), text)
            };
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => match cli.command.output() {
            Some(path) => match std::fs::write(path, &outcome.stdout) {
                Ok(()) => (outcome.exit_code, String::new(), String::new()),
                Err(e) => (2, String::new(), format!("error: {}: {e}\n", path.display())),
            },
            None => (outcome.exit_code, outcome.stdout, String::new()),
        },
        Err(e) => (e.exit_code(), String::new(), format!("error: {e}\n")),
    }
}
