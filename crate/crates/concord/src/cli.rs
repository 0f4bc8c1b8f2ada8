//! The `concord` command line.
//!
//! Data goes to standard output and diagnostics to standard error. Exit
//! status is 0 on success, 1 on a validation failure and 2 on unreadable
//! or malformed input.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use concord_core::basis::{rational_dot, BasisSet};
use concord_core::oracle::cross_check;
use concord_core::{
    approximate_with, check_consistency, extract_weights, project, project_fast, ApproximateOptions, LogMatrix,
    PcMatrix, Square, CONSISTENCY_TOL, RECIPROCITY_TOL,
};

use crate::io::{default_precision, emit_matrix, format_number, parse_matrix, Format, IoError, MatrixDocument};
use crate::service::{ServiceConfig, DEFAULT_ADDR};

/// Largest oracle disagreement `verify` accepts.
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "concord", version, about = "Consistent approximation of pairwise comparisons matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report reciprocity, triad inconsistency and consistency of a matrix.
    Validate {
        /// Matrix file (CSV or JSON), `-` for standard input.
        file: PathBuf,
        /// Tolerance below which a triad counts as consistent.
        #[arg(long, default_value_t = CONSISTENCY_TOL)]
        tol: f64,
        /// Number of worst triads to list.
        #[arg(long, default_value_t = 5)]
        top: usize,
    },
    /// Compute the nearest consistent matrix, its residual and weights.
    Approximate {
        file: PathBuf,
        /// Write the consistent matrix here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format; defaults to the input's format.
        #[arg(long)]
        format: Option<Format>,
        /// Reject matrices that are not reciprocal.
        #[arg(long)]
        strict_reciprocal: bool,
        /// Significant digits (default 12, or CONCORD_PRECISION).
        #[arg(long)]
        precision: Option<usize>,
    },
    /// Priority weights of the nearest consistent matrix.
    Weights {
        file: PathBuf,
        #[arg(long)]
        format: Option<Format>,
        #[arg(long)]
        precision: Option<usize>,
    },
    /// Print the block basis B_k (or orthogonal basis T_k) for dimension n.
    Basis {
        n: usize,
        /// Print T_1..T_{n-1} instead of B_1..B_{n-1}.
        #[arg(long)]
        orthogonal: bool,
        /// Also print the squared norms.
        #[arg(long)]
        normsq: bool,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Cross-check the projection of a matrix against the independent oracles.
    Verify { file: PathBuf },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "CONCORD_ADDR", default_value = DEFAULT_ADDR)]
        addr: SocketAddr,
        /// Persist sessions as JSON files in this directory.
        #[arg(long, env = "CONCORD_STATE_DIR")]
        state_dir: Option<PathBuf>,
        /// Serve a built UI bundle from this directory at `/`.
        #[arg(long, env = "CONCORD_UI_DIR")]
        ui_dir: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    /// Exit status 1.
    Invalid(String),
    /// Exit status 2.
    Input(String),
    /// The reader of standard output went away; exit quietly.
    ClosedOutput,
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Input(_) => 2,
            Failure::ClosedOutput => 0,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Input(m) => m,
            Failure::ClosedOutput => "",
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Parse { .. } => Failure::Input(e.to_string()),
            IoError::NonSquare { .. } | IoError::NonPositiveEntry { .. } => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<concord_core::Error> for Failure {
    fn from(e: concord_core::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure::ClosedOutput;
        }
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_input(path: &PathBuf) -> Result<MatrixDocument, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
    };
    Ok(parse_matrix(&text, Format::sniff(&text))?)
}

fn to_matrix(doc: &MatrixDocument) -> Result<PcMatrix, Failure> {
    Ok(PcMatrix::from_rows(&doc.entries)?)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn validate_cmd(file: &PathBuf, tol: f64, top: usize, out: &mut dyn Write) -> Outcome {
    let doc = read_input(file)?;
    let m = to_matrix(&doc)?;
    let report = check_consistency(&m, tol);
    let labels = doc.labels_or_indices();
    writeln!(out, "dimension: {}", m.dim())?;
    writeln!(out, "reciprocal: {}", yes_no(m.is_reciprocal()))?;
    writeln!(out, "consistent: {}", yes_no(m.is_reciprocal() && report.is_consistent()))?;
    writeln!(out, "triads: {}", report.triads.len())?;
    writeln!(out, "global inconsistency: {}", report.global)?;
    for t in report.top(top).iter().filter(|t| t.inconsistency > 0.0) {
        writeln!(
            out,
            "triad ({}, {}, {}) [{}, {}, {}]: {}",
            t.i + 1,
            t.j + 1,
            t.k + 1,
            labels[t.i],
            labels[t.j],
            labels[t.k],
            t.inconsistency
        )?;
    }
    Ok(())
}

fn approximate_cmd(
    file: &PathBuf,
    out_path: Option<&PathBuf>,
    format: Option<Format>,
    strict: bool,
    precision: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let doc = read_input(file)?;
    let m = to_matrix(&doc)?;
    let opts = ApproximateOptions {
        strict_reciprocal: strict,
        reciprocity_tol: RECIPROCITY_TOL,
    };
    let result = approximate_with(&m, opts)?;
    let weights = extract_weights(&result.consistent)?;
    let format = format.unwrap_or(doc.source_format);
    let rendered = emit_matrix(
        &MatrixDocument::from_matrix(&result.consistent, doc.labels.clone(), format),
        format,
        precision,
    );

    // the summary shares stdout only when the matrix goes to a file
    let summary: &mut dyn Write = match out_path {
        Some(path) => {
            fs::write(path, rendered).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            out
        }
        None => {
            out.write_all(rendered.as_bytes())?;
            err
        }
    };
    writeln!(summary, "residual_norm: {}", format_number(result.residual_norm, precision))?;
    for (label, w) in doc.labels_or_indices().iter().zip(&weights.values) {
        writeln!(summary, "weight {label}: {}", format_number(*w, precision))?;
    }
    Ok(())
}

fn weights_cmd(file: &PathBuf, format: Option<Format>, precision: usize, out: &mut dyn Write) -> Outcome {
    let doc = read_input(file)?;
    let m = to_matrix(&doc)?;
    let result = approximate_with(&m, ApproximateOptions::default())?;
    let weights = extract_weights(&result.consistent)?;
    let labels = doc.labels_or_indices();
    match format.unwrap_or(doc.source_format) {
        Format::Csv => {
            for (label, w) in labels.iter().zip(&weights.values) {
                writeln!(out, "{label},{}", format_number(*w, precision))?;
            }
        }
        Format::Json => {
            let values: Vec<f64> = weights
                .values
                .iter()
                .map(|w| format_number(*w, precision).parse().unwrap_or(*w))
                .collect();
            let body = json!({ "labels": labels, "weights": values });
            writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("serializable"))?;
        }
    }
    Ok(())
}

fn render_rational(m: &Square<concord_core::basis::Rational>) -> Vec<Vec<String>> {
    m.rows().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

fn basis_cmd(n: usize, orthogonal: bool, normsq: bool, format: Format, out: &mut dyn Write) -> Outcome {
    let basis = BasisSet::new(n)?;
    let (name, matrices) = if orthogonal {
        ("T", basis.orthogonal())
    } else {
        ("B", basis.raw())
    };
    let norms: Vec<String> = matrices.iter().map(|m| rational_dot(m, m).to_string()).collect();
    match format {
        Format::Csv => {
            for (idx, m) in matrices.iter().enumerate() {
                if idx > 0 {
                    writeln!(out)?;
                }
                writeln!(out, "# {name}_{}", idx + 1)?;
                for row in render_rational(m) {
                    writeln!(out, "{}", row.join(","))?;
                }
            }
            if normsq {
                writeln!(out)?;
                writeln!(out, "# |{name}_k|^2")?;
                for (idx, v) in norms.iter().enumerate() {
                    writeln!(out, "{},{v}", idx + 1)?;
                }
            }
        }
        Format::Json => {
            let list: Vec<_> = matrices
                .iter()
                .enumerate()
                .map(|(idx, m)| json!({ "k": idx + 1, "entries": render_rational(m) }))
                .collect();
            let mut body = json!({
                "n": n,
                "basis": if orthogonal { "orthogonal" } else { "raw" },
                "matrices": list,
            });
            if normsq {
                body["normsq"] = json!(norms
                    .iter()
                    .enumerate()
                    .map(|(idx, v)| json!({ "k": idx + 1, "value": v }))
                    .collect::<Vec<_>>());
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("serializable"))?;
        }
    }
    Ok(())
}

fn verify_cmd(file: &PathBuf, out: &mut dyn Write) -> Outcome {
    let doc = read_input(file)?;
    let m = to_matrix(&doc)?;
    let reports = cross_check(&m).map_err(|e| Failure::Invalid(e.to_string()))?;
    let a = concord_core::log_transform(&m);
    let basis = concord_core::basis::cached(m.dim())?;
    let reference: LogMatrix = project(&a, &basis)?.projected;
    let fast = project_fast(&a)?.projected.max_abs_diff(&reference);

    writeln!(out, "project_fast: {fast:e}")?;
    let mut worst = fast;
    for r in &reports {
        writeln!(out, "{}: {:e}", r.method, r.max_abs_difference)?;
        worst = worst.max(r.max_abs_difference);
    }
    writeln!(out, "max disagreement: {worst:e}")?;
    if worst > VERIFY_TOL {
        return Err(Failure::Invalid(format!(
            "oracles disagree by {worst:e}, more than {VERIFY_TOL:e}"
        )));
    }
    Ok(())
}

fn serve_cmd(config: ServiceConfig) -> Outcome {
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    runtime
        .block_on(crate::service::serve(config))
        .map_err(|e| Failure::Input(format!("service failed: {e}")))
}

/// Runs the parsed command, writing data to `out` and diagnostics to `err`.
pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let precision = |p: Option<usize>| p.filter(|&p| p > 0).unwrap_or_else(default_precision);
    let outcome = match &cli.command {
        Command::Validate { file, tol, top } => validate_cmd(file, *tol, *top, out),
        Command::Approximate {
            file,
            out: out_path,
            format,
            strict_reciprocal,
            precision: p,
        } => approximate_cmd(
            file,
            out_path.as_ref(),
            *format,
            *strict_reciprocal,
            precision(*p),
            out,
            err,
        ),
        Command::Weights { file, format, precision: p } => weights_cmd(file, *format, precision(*p), out),
        Command::Basis {
            n,
            orthogonal,
            normsq,
            format,
        } => basis_cmd(*n, *orthogonal, *normsq, *format, out),
        Command::Verify { file } => verify_cmd(file, out),
        Command::Serve {
            addr,
            state_dir,
            ui_dir,
        } => serve_cmd(ServiceConfig {
            addr: *addr,
            state_dir: state_dir.clone(),
            ui_dir: ui_dir.clone(),
        }),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::ClosedOutput) => 0,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message());
            failure.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            code
        }
    }
}

/// Entry point for the binary: process arguments and standard streams.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
