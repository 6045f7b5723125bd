//! The `sxl` command line.
//!
//! Exit codes: 0 on success, 2 when a checked bound is violated (the counterexample goes to
//! stdout as graph6), 1 for usage, parse and other operational errors. Diagnostics go to
//! stderr.

use std::ffi::OsString;
use std::io::{BufRead, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::enumeration::{self, parse_graph6, write_graph6, EnumSpec};
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::graph::Graph;
use crate::patterns::{self, Pattern};
use crate::spectral::{self, BoundKind};
use crate::verify::{self, Catalog, Mode, Prediction, RstDomain, ScanSpec};

/// Environment variable that overrides `--threads`.
pub const THREADS_ENV: &str = "SXL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "sxl", version, about = "Spectral extremal graph toolkit")]
pub struct Cli {
    /// Worker threads for enumeration and scans (default: all logical cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a family member as graph6.
    Construct { spec: String },
    /// Spectral radius, residual and iteration count.
    Lambda {
        /// Family spec, graph6 string, or `-` for graph6 lines on stdin.
        source: String,
        /// Also print every eigenvalue.
        #[arg(long)]
        spectrum: bool,
    },
    /// Test whether a graph avoids a pattern.
    Free {
        #[arg(long)]
        forbid: String,
        source: String,
        /// Print an embedding when the pattern is present.
        #[arg(long)]
        witness: bool,
    },
    /// Print one graph6 line per isomorphism class.
    Enumerate {
        #[arg(long)]
        m: usize,
        /// Include disconnected graphs (still without isolated vertices).
        #[arg(long)]
        all_graphs: bool,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        max_vertices: Option<usize>,
    },
    /// Compare pattern-free graphs against a bound.
    Scan {
        #[arg(long)]
        forbid: String,
        /// nosal, nikiforov:r, zls, f3, fk:k or wheel-even.
        #[arg(long)]
        bound: String,
        /// Inclusive edge-count range `a..b` (or a single value).
        #[arg(long)]
        m: String,
        /// Expected extremal graphs: k=<int>, bipartite or multipartite:<r>.
        #[arg(long)]
        predict: Option<String>,
        /// Record violations instead of failing.
        #[arg(long)]
        report_only: bool,
    },
    /// Eigen identity residual and η functionals at the extremal vertex.
    Audit { source: String },
    /// Run one of the auxiliary checks.
    Check {
        /// rst, eg, bn:r or rotation.
        #[arg(long)]
        lemma: String,
        /// Largest edge count (rst, eg, bn) or number of trials (rotation).
        #[arg(long)]
        max: Option<usize>,
        /// Smallest edge count for rst.
        #[arg(long, default_value_t = 1)]
        m_min: usize,
        /// Smallest t for rst; 0 includes the reported-only pairs.
        #[arg(long, default_value_t = 1)]
        t_min: usize,
    },
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let threads = match thread_count(&cli) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return 1;
        }
    };
    match execute(&cli, &pool, stdin, out) {
        Ok(()) => 0,
        Err(Error::BoundViolation {
            m,
            counterexample,
            detail,
        }) => {
            let _ = writeln!(out, "{counterexample}");
            let _ = writeln!(err, "violation at m = {m}: {detail}");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn thread_count(cli: &Cli) -> Result<usize> {
    let requested = match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::parse(&v, format!("{THREADS_ENV} must be an integer")))?,
        ),
        _ => cli.threads,
    };
    match requested {
        Some(0) => Err(Error::InvalidParameter("threads must be >= 1".into())),
        Some(t) => Ok(t),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn execute(
    cli: &Cli,
    pool: &rayon::ThreadPool,
    stdin: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<()> {
    let w = |out: &mut dyn Write, s: &str| writeln!(out, "{s}").map_err(io_err);
    match &cli.command {
        Command::Construct { spec } => {
            let g = spec.parse::<FamilySpec>()?.build()?;
            w(out, &write_graph6(&g)?)
        }
        Command::Lambda { source, spectrum } => {
            for g in read_source(source, stdin)? {
                let sr = spectral::spectral_radius(&g)?;
                let eig = if *spectrum {
                    Some(spectral::full_spectrum(&g)?.eigenvalues)
                } else {
                    None
                };
                match cli.format {
                    Format::Json => {
                        let mut v = json!({
                            "lambda": sr.lambda,
                            "residual": sr.residual,
                            "iterations": sr.iterations,
                        });
                        if let Some(e) = &eig {
                            v["spectrum"] = json!(e);
                        }
                        w(out, &v.to_string())?;
                    }
                    Format::Csv => {
                        let mut line = format!(
                            "{},{},{}",
                            sig10(sr.lambda),
                            sig10(sr.residual),
                            sr.iterations
                        );
                        if let Some(e) = &eig {
                            line.push(',');
                            line.push_str(
                                &e.iter().map(|x| sig10(*x)).collect::<Vec<_>>().join(" "),
                            );
                        }
                        w(out, &line)?;
                    }
                    Format::Text => {
                        w(out, &format!("lambda: {}", sig10(sr.lambda)))?;
                        w(out, &format!("residual: {}", sig10(sr.residual)))?;
                        w(out, &format!("iterations: {}", sr.iterations))?;
                        if let Some(e) = &eig {
                            let parts: Vec<String> = e.iter().map(|x| sig10(*x)).collect();
                            w(out, &format!("spectrum: {}", parts.join(" ")))?;
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Free {
            forbid,
            source,
            witness,
        } => {
            let pattern: Pattern = forbid.parse()?;
            for g in read_source(source, stdin)? {
                let found = patterns::contains(&g, &pattern)?;
                match cli.format {
                    Format::Json => {
                        let v = json!({
                            "free": found.is_none(),
                            "witness": found.as_ref().filter(|_| *witness).map(|w| &w.mapping),
                        });
                        w(out, &v.to_string())?;
                    }
                    _ => {
                        w(out, &format!("free: {}", found.is_none()))?;
                        if let (true, Some(wit)) = (*witness, &found) {
                            let pairs: Vec<String> = wit
                                .mapping
                                .iter()
                                .enumerate()
                                .map(|(p, h)| format!("{p}->{h}"))
                                .collect();
                            w(out, &format!("witness: {}", pairs.join(" ")))?;
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Enumerate {
            m,
            all_graphs,
            count_only,
            max_vertices,
        } => {
            let mut spec = if *all_graphs {
                EnumSpec::all(*m)
            } else {
                EnumSpec::connected(*m)
            };
            spec.max_vertices = *max_vertices;
            if *count_only {
                let n = pool.install(|| enumeration::count(&spec))?;
                return w(out, &n.to_string());
            }
            for g in pool.install(|| enumeration::collect(&spec))? {
                w(out, &write_graph6(&g)?)?;
            }
            Ok(())
        }
        Command::Scan {
            forbid,
            bound,
            m,
            predict,
            report_only,
        } => {
            let spec = ScanSpec {
                forbid: forbid.parse()?,
                bound: bound.parse::<BoundKind>()?,
                m_range: parse_range(m)?,
                prediction: predict
                    .as_deref()
                    .map(str::parse::<Prediction>)
                    .transpose()?,
                mode: if *report_only {
                    Mode::ReportOnly
                } else {
                    Mode::Assert
                },
            };
            let report = pool.install(|| verify::scan(&spec, &Catalog::new()))?;
            match cli.format {
                Format::Json => w(out, &report.to_json()),
                Format::Csv => write!(out, "{}", report.to_csv()?).map_err(io_err),
                Format::Text => {
                    for r in &report.records {
                        let opt = |x: Option<f64>| x.map_or("-".to_string(), sig10);
                        w(
                            out,
                            &format!(
                                "m={} scanned={} free={} max_lambda={} bound={} margin={} equality={} unique={} argmax={}",
                                r.m,
                                r.graphs_scanned,
                                r.free_count,
                                opt(r.max_lambda),
                                opt(r.bound),
                                opt(r.margin),
                                r.equality_achieved,
                                r.uniqueness,
                                r.argmax.join(",")
                            ),
                        )?;
                        for v in &r.violations {
                            w(out, &format!("  violation: {v}"))?;
                        }
                    }
                    Ok(())
                }
            }
        }
        Command::Audit { source } => {
            for g in read_source(source, stdin)? {
                let audit = verify::audit_eigen_identity(&g)?;
                let eta = verify::compute_eta(&g, None)?;
                match cli.format {
                    Format::Json => {
                        let v = json!({ "identity": audit, "eta": eta });
                        w(out, &v.to_string())?;
                    }
                    _ => {
                        w(out, &format!("center: {}", audit.center))?;
                        w(out, &format!("lambda: {}", sig10(audit.lambda)))?;
                        w(
                            out,
                            &format!("identity_residual: {}", sig10(audit.residual)),
                        )?;
                        for c in &eta.components {
                            w(
                                out,
                                &format!(
                                    "component {:?} kind={:?} edges={} eta1={} eta2={}",
                                    c.vertices,
                                    c.kind,
                                    c.edges,
                                    sig10(c.eta1),
                                    sig10(c.eta2)
                                ),
                            )?;
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Check {
            lemma,
            max,
            m_min,
            t_min,
        } => {
            let report = match lemma.as_str() {
                "rst" => verify::check_rst_lemma(
                    max.unwrap_or(200),
                    RstDomain {
                        s_min: 1,
                        t_min: *t_min,
                        m_min: *m_min,
                    },
                )?,
                "eg" => pool.install(|| verify::check_eg(max.unwrap_or(9), &Catalog::new()))?,
                "rotation" => verify::check_rotation(max.unwrap_or(500), cli.seed)?,
                other => match other.strip_prefix("bn:") {
                    Some(r) => {
                        let r: usize = r
                            .parse()
                            .map_err(|_| Error::parse(other, "expected bn:<r>"))?;
                        // Only r = 2 is proven; larger r is checked without asserting.
                        let mode = if r == 2 {
                            Mode::Assert
                        } else {
                            Mode::ReportOnly
                        };
                        pool.install(|| {
                            verify::check_bn(max.unwrap_or(8), r, mode, &Catalog::new())
                        })?
                    }
                    None => {
                        return Err(Error::parse(other, "expected rst, eg, bn:<r> or rotation"))
                    }
                },
            };
            match cli.format {
                Format::Json => w(out, &report.to_json()),
                _ => {
                    w(out, &format!("lemma: {}", report.lemma))?;
                    w(out, &format!("cases: {}", report.cases))?;
                    if report.skipped > 0 {
                        w(out, &format!("skipped: {}", report.skipped))?;
                    }
                    if let Some(g) = report.min_gap {
                        let at = report.min_gap_at.as_deref().unwrap_or("");
                        w(out, &format!("min_gap: {} at {at}", sig10(g)))?;
                    }
                    w(out, &format!("equality_cases: {}", report.equality.len()))?;
                    for r in &report.reported {
                        w(out, &format!("reported: {r}"))?;
                    }
                    Ok(())
                }
            }
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidParameter(format!("output error: {e}"))
}

/// A family spec, a graph6 literal, or `-` for graph6 lines on stdin.
pub fn read_source(source: &str, stdin: &mut dyn BufRead) -> Result<Vec<Graph>> {
    if source == "-" {
        let mut graphs = Vec::new();
        for line in stdin.lines() {
            let line = line.map_err(|e| Error::InvalidParameter(format!("stdin: {e}")))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            graphs.push(parse_graph6(line)?);
        }
        return Ok(graphs);
    }
    match source.parse::<FamilySpec>() {
        Ok(spec) => Ok(vec![spec.build()?]),
        Err(family_err) => match parse_graph6(source) {
            Ok(g) => Ok(vec![g]),
            Err(_) => Err(Error::parse(
                source,
                format!("neither a family spec nor graph6 ({family_err})"),
            )),
        },
    }
}

/// `a..b`, `a..=b` or a single value.
pub fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>> {
    let num = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| Error::parse(s, "expected a..b"))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if a > b || a == 0 {
        return Err(Error::parse(
            s,
            "range must be non-empty and start at 1 or above",
        ));
    }
    Ok(a..=b)
}

/// Ten significant digits, ties to even. Positional for magnitudes in `[1e-5, 1e10)`,
/// scientific otherwise.
pub fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-5..10).contains(&exp) {
        return sci;
    }
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let body = if exp >= 0 {
        let split = exp as usize + 1;
        let (int, frac) = digits.split_at(split);
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}
