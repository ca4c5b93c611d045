//! Command definitions and the `run` entry point.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage, input or
//! evaluation error.

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qslice::bargmann::{b1_kernel, b2_kernel, transform, transform_first, LineFunction};
use qslice::kernels::{kernel, KernelKind, KernelSpec, Method};
use qslice::poly::{factorial, hermite_quat, laguerre, HermiteTable, TruncationPolicy};
use qslice::quad::{gauss_hermite, inner_full, sphere_rule, SliceQuadrature};
use qslice::spectral::{psi, psi_norm_sq, spectrum_probe, CoefficientField, EigenFunction};
use qslice::{PolySliceSeries, Quaternion};

use crate::config::Config;
use crate::error::CliError;
use crate::literal::parse_quaternion;
use crate::series_json::SeriesJson;
use crate::suites::{self, SuiteOptions};

/// Tolerance for matching sample abscissae to quadrature nodes.
pub const NODE_MATCH_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "qslice", version, about = "Quaternionic S-polyregular Bargmann analysis")]
pub struct Cli {
    /// JSON config file; overrides the QSLICE_CONFIG environment variable.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a function at one point or at every point of a CSV file.
    #[command(subcommand)]
    Eval(Eval),
    /// Run a verification suite and print its JSON report.
    Verify(VerifyArgs),
    /// Apply the Segal-Bargmann transform to a line function.
    Transform(TransformArgs),
    /// Tabulate closed forms against quadrature.
    #[command(subcommand)]
    Table(Table),
    /// Probe square integrability of an eigenfunction.
    SpectrumProbe(ProbeArgs),
}

/// One point (`--q`) or a points file (`--points`).
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Points {
    /// Quaternion literal such as `1-2i+0.5k`.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Headerless CSV, one point per row: `w,x,y,z` or a single literal.
    #[arg(long, value_name = "FILE")]
    pub points: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Series,
    Star,
}

#[derive(Debug, Subcommand)]
pub enum Eval {
    /// `H^Q_{m,n}(q)`; rows `m,n,q(4),value(4)`.
    HermiteQ {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "points")]
        q: Option<String>,
        #[arg(long, value_name = "FILE")]
        points: Option<PathBuf>,
        /// Print the monomial coefficients as JSON instead of values.
        #[arg(long, conflicts_with_all = ["q", "points"])]
        series: bool,
    },
    /// `K_{1,n}(p, q)` or `K_{2,k}(p, q)`; rows `p(4),q(4),value(4),method,tail`.
    Kernel {
        #[arg(long, value_parser = ["1", "2"])]
        kind: String,
        #[arg(long)]
        level: usize,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, value_enum, default_value = "series")]
        method: MethodArg,
        /// Truncation of the chosen method (default from config).
        #[arg(long)]
        terms: Option<usize>,
    },
    /// `B_{2,k}(t; q)` or `B_{1,n}(t; q)`; rows `t,q(4),value(4)`.
    BargmannKernel {
        #[arg(long)]
        level: usize,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, value_parser = ["1", "2"], default_value = "2")]
        kind: String,
    },
    /// `ψ_{μ,j}(q)`; rows `mu(4),j,q(4),value(4)`.
    Psi {
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
        #[command(flatten)]
        points: Points,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long)]
    pub suite: String,
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long)]
    pub levels: Option<usize>,
    /// Include every case in the report, not just the per-check summary.
    #[arg(long)]
    pub full: bool,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long)]
    pub level: usize,
    /// `h:<j>` for the Hermite function `h_j`.
    #[arg(long, conflicts_with = "phi_csv", required_unless_present = "phi_csv")]
    pub phi: Option<String>,
    /// Headerless CSV `t,w,x,y,z` sampled on the Gauss-Hermite nodes.
    #[arg(long, value_name = "FILE")]
    pub phi_csv: Option<PathBuf>,
    #[arg(long, value_parser = ["1", "2"], default_value = "2")]
    pub kind: String,
    #[command(flatten)]
    pub points: Points,
    /// Gauss-Hermite nodes on the line (default from config).
    #[arg(long)]
    pub nodes: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Table {
    /// `‖ψ_{n,j}‖²` closed form against sphere-by-slice quadrature.
    Norms {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        jmax: usize,
    },
    /// `⟨H^Q_{m,n}, H^Q_{j,k}⟩` on the default slice for indices up to `max`.
    HermiteGram {
        #[arg(long)]
        max: usize,
    },
    /// `Σ_{k ≤ n} L_k^{(0)}(x)` against `L_n^{(1)}(x)`.
    LaguerreSum {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub mu: String,
    #[arg(long, allow_hyphen_values = true)]
    pub j: i64,
    #[arg(long, default_value_t = 8.0)]
    pub rmax: f64,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = Config::resolve(cli.config.as_deref())?;
    match &cli.command {
        Command::Eval(e) => eval(e, &cfg, out).map(|_| 0),
        Command::Verify(v) => verify(v, &cfg, out),
        Command::Transform(t) => cmd_transform(t, &cfg, out).map(|_| 0),
        Command::Table(t) => table(t, &cfg, out).map(|_| 0),
        Command::SpectrumProbe(p) => probe(p, out).map(|_| 0),
    }
}

pub fn quat_arg(s: &str) -> Result<Quaternion, CliError> {
    parse_quaternion(s).map_err(|source| CliError::Literal {
        input: s.into(),
        source,
    })
}

/// Shortest round-trip decimal, switching to exponent form for very small or
/// large magnitudes.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn quat_fields(q: Quaternion) -> [String; 4] {
    [num(q.w), num(q.x), num(q.y), num(q.z)]
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().has_headers(false).from_writer(out)
}

/// Reads a headerless points file: rows of `w,x,y,z` or one literal each.
pub fn read_points(path: &Path) -> Result<Vec<Quaternion>, CliError> {
    let input_err = |line: usize, message: String| CliError::Input {
        path: path.display().to_string(),
        message: format!("row {line}: {message}"),
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Input {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
    let mut points = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let line = i + 1;
        let q = match rec.len() {
            1 => parse_quaternion(&rec[0]).map_err(|e| input_err(line, format!("'{}': {e}", &rec[0])))?,
            4 => {
                let mut c = [0.0; 4];
                for (slot, field) in c.iter_mut().zip(rec.iter()) {
                    *slot = field
                        .parse()
                        .map_err(|_| input_err(line, format!("'{field}' is not a number")))?;
                }
                Quaternion::new(c[0], c[1], c[2], c[3])
            }
            n => return Err(input_err(line, format!("expected 1 or 4 fields, found {n}"))),
        };
        points.push(q);
    }
    Ok(points)
}

fn resolve_points(p: &Points) -> Result<Vec<Quaternion>, CliError> {
    match (&p.q, &p.points) {
        (Some(q), _) => Ok(vec![quat_arg(q)?]),
        (None, Some(path)) => read_points(path),
        (None, None) => Err(CliError::Usage("one of --q or --points is required".into())),
    }
}

fn check_cap(cfg: &Config, what: &str, value: usize) -> Result<(), CliError> {
    if value > cfg.degree_cap {
        return Err(CliError::Usage(format!(
            "{what} = {value} exceeds the degree cap {}",
            cfg.degree_cap
        )));
    }
    Ok(())
}

fn eval(e: &Eval, cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    match e {
        Eval::HermiteQ { m, n, q, points, series } => {
            check_cap(cfg, "m", *m)?;
            check_cap(cfg, "n", *n)?;
            if *series {
                let s = SeriesJson::from_series(&PolySliceSeries::hermite_q(*m, *n));
                serde_json::to_writer(&mut *out, &s)?;
                writeln!(out)?;
                return Ok(());
            }
            if q.is_none() && points.is_none() {
                return Err(CliError::Usage("one of --q, --points or --series is required".into()));
            }
            let points = Points {
                q: q.clone(),
                points: points.clone(),
            };
            let mut w = csv_writer(out);
            for q in resolve_points(&points)? {
                let v = hermite_quat(*m, *n, q)?;
                let mut row = vec![m.to_string(), n.to_string()];
                row.extend(quat_fields(q));
                row.extend(quat_fields(v));
                w.write_record(&row)?;
            }
            w.flush()?;
        }
        Eval::Kernel {
            kind,
            level,
            p,
            q,
            method,
            terms,
        } => {
            let (p, q) = (quat_arg(p)?, quat_arg(q)?);
            let kind = if kind == "1" { KernelKind::First } else { KernelKind::Second };
            let method = match method {
                MethodArg::Series => Method::Series,
                MethodArg::Star => Method::Star,
            };
            let mut spec = KernelSpec::new(kind, *level, method);
            spec.series_terms = cfg.truncation.series_terms;
            spec.star_terms = cfg.truncation.star_terms;
            if let Some(t) = terms {
                match method {
                    Method::Series => spec.series_terms = *t,
                    Method::Star => spec.star_terms = *t,
                }
            }
            let v = kernel(&spec, p, q);
            let mut row: Vec<String> = Vec::new();
            row.extend(quat_fields(p));
            row.extend(quat_fields(q));
            row.extend(quat_fields(v.value));
            row.push(if method == Method::Series { "series" } else { "star" }.into());
            row.push(num(v.tail));
            let mut w = csv_writer(out);
            w.write_record(&row)?;
            w.flush()?;
        }
        Eval::BargmannKernel { level, t, q, kind } => {
            let q = quat_arg(q)?;
            let v = if kind == "1" { b1_kernel(*level, *t, q) } else { b2_kernel(*level, *t, q) };
            let mut row = vec![num(*t)];
            row.extend(quat_fields(q));
            row.extend(quat_fields(v));
            let mut w = csv_writer(out);
            w.write_record(&row)?;
            w.flush()?;
        }
        Eval::Psi { mu, j, points } => {
            let mu = quat_arg(mu)?;
            let policy = TruncationPolicy::default();
            let mut w = csv_writer(out);
            for q in resolve_points(points)? {
                let v = psi(mu, *j, q, &policy)?;
                let mut row: Vec<String> = quat_fields(mu).into();
                row.push(j.to_string());
                row.extend(quat_fields(q));
                row.extend(quat_fields(v));
                w.write_record(&row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn verify(v: &VerifyArgs, cfg: &Config, out: &mut dyn Write) -> Result<i32, CliError> {
    let opts = SuiteOptions {
        max_degree: v.max_degree,
        levels: v.levels,
    };
    let report = suites::run(&v.suite, cfg, &opts)?;
    let shown = if v.full { report.clone() } else { report.summary() };
    serde_json::to_writer_pretty(&mut *out, &shown)?;
    writeln!(out)?;
    Ok(if report.pass { 0 } else { 1 })
}

fn parse_phi(s: &str) -> Result<usize, CliError> {
    s.strip_prefix("h:")
        .and_then(|j| j.parse().ok())
        .ok_or_else(|| CliError::Usage(format!("--phi must look like h:<j>, got '{s}'")))
}

/// Reads `t,w,x,y,z` samples and checks them against the rule's nodes.
pub fn read_samples(path: &Path, rule: &qslice::quad::QuadratureRule1D) -> Result<LineFunction, CliError> {
    let input_err = |message: String| CliError::Input {
        path: path.display().to_string(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| input_err(e.to_string()))?;
    let mut values = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() != 5 {
            return Err(input_err(format!("row {}: expected t,w,x,y,z", i + 1)));
        }
        let mut c = [0.0; 5];
        for (slot, field) in c.iter_mut().zip(rec.iter()) {
            *slot = field
                .parse()
                .map_err(|_| input_err(format!("row {}: '{field}' is not a number", i + 1)))?;
        }
        let node = rule.nodes.get(i).copied();
        match node {
            Some(t) if (t - c[0]).abs() <= NODE_MATCH_TOL * (1.0 + t.abs()) => {}
            _ => {
                return Err(input_err(format!(
                    "row {}: sample grid not aligned to the {}-node Gauss-Hermite rule (t = {}, node = {})",
                    i + 1,
                    rule.len(),
                    num(c[0]),
                    node.map_or("none".into(), num)
                )))
            }
        }
        values.push(Quaternion::new(c[1], c[2], c[3], c[4]));
    }
    if values.len() != rule.len() {
        return Err(input_err(format!(
            "sample grid not aligned: {} rows for a {}-node rule",
            values.len(),
            rule.len()
        )));
    }
    Ok(LineFunction::sampled(rule, values)?)
}

fn cmd_transform(t: &TransformArgs, cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let rule = gauss_hermite(t.nodes.unwrap_or(cfg.quadrature.line_nodes))?;
    let phi = match (&t.phi, &t.phi_csv) {
        (Some(s), _) => {
            let j = parse_phi(s)?;
            check_cap(cfg, "j", j)?;
            LineFunction::hermite(j)
        }
        (None, Some(path)) => read_samples(path, &rule)?,
        (None, None) => return Err(CliError::Usage("one of --phi or --phi-csv is required".into())),
    };
    let mut w = csv_writer(out);
    for q in resolve_points(&t.points)? {
        let v = if t.kind == "1" {
            transform_first(t.level, &phi, q, &rule)?
        } else {
            transform(t.level, &phi, q, &rule)?
        };
        let mut row = vec![t.level.to_string()];
        row.extend(quat_fields(q));
        row.extend(quat_fields(v));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn table(t: &Table, cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().from_writer(out);
    match t {
        Table::Norms { n, jmax } => {
            let sphere = sphere_rule(cfg.quadrature.sphere_order)?;
            let template = SliceQuadrature::new(cfg.quadrature.slice_nodes, cfg.slice_unit()?)?;
            w.write_record(["n", "j", "closed", "quadrature", "residual"])?;
            for j in -(*n as i64)..=(*jmax as i64) {
                let f = EigenFunction::new(
                    Quaternion::from_real(*n as f64),
                    j,
                    CoefficientField::Constant(Quaternion::one()),
                )?;
                let closed = psi_norm_sq(*n, j)?;
                let v = inner_full(&f, &f, &sphere, &template)?.w;
                w.write_record([n.to_string(), j.to_string(), num(closed), num(v), num((v - closed).abs() / closed)])?;
            }
        }
        Table::HermiteGram { max } => {
            check_cap(cfg, "max", *max)?;
            let quad = SliceQuadrature::new(cfg.quadrature.slice_nodes, cfg.slice_unit()?)?;
            if 2 * max > quad.exact_degree() {
                return Err(qslice::Error::QuadratureDegree {
                    needed: 2 * max,
                    exact_to: quad.exact_degree(),
                }
                .into());
            }
            let d = *max;
            let nodes: Vec<(HermiteTable, f64)> = quad.points().map(|(q, wt)| (HermiteTable::new(d, d, q), wt)).collect();
            w.write_record(["m", "n", "j", "k", "closed", "quadrature", "residual"])?;
            for m in 0..=d {
                for n in 0..=d {
                    for j in 0..=d {
                        for k in 0..=d {
                            let g = nodes
                                .iter()
                                .fold(Quaternion::zero(), |acc, (t, wt)| acc + (t.get(m, n).conj() * t.get(j, k)).scale(*wt));
                            // back to the unnormalized basis
                            let scale = (factorial(m) * factorial(n) * factorial(j) * factorial(k)).sqrt();
                            let closed = if (m, n) == (j, k) { PI * factorial(m) * factorial(n) } else { 0.0 };
                            let v = g.scale(scale);
                            let residual = (v - Quaternion::from_real(closed)).modulus() / (PI * scale);
                            w.write_record([
                                m.to_string(),
                                n.to_string(),
                                j.to_string(),
                                k.to_string(),
                                num(closed),
                                num(v.w),
                                num(residual),
                            ])?;
                        }
                    }
                }
            }
        }
        Table::LaguerreSum { n } => {
            check_cap(cfg, "n", *n)?;
            w.write_record(["x", "sum", "laguerre", "residual"])?;
            for i in 0..10 {
                let x = 0.5 * i as f64;
                let sum = (0..=*n).try_fold(0.0, |acc, k| laguerre(k, 0.0, x).map(|l| acc + l))?;
                let l1 = laguerre(*n, 1.0, x)?;
                w.write_record([num(x), num(sum), num(l1), num((sum - l1).abs() / (1.0 + l1.abs()))])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn probe(p: &ProbeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if !(p.rmax > 0.0 && p.rmax.is_finite()) {
        return Err(CliError::Usage("--rmax must be positive".into()));
    }
    let mu = quat_arg(&p.mu)?;
    let r = spectrum_probe(mu, p.j, p.rmax)?;
    let v = json!({
        "mu": [mu.w, mu.x, mu.y, mu.z],
        "j": p.j,
        "converged": r.converged,
        "tail_ratios": r.tail_ratios,
    });
    serde_json::to_writer(&mut *out, &v)?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("qslice").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn number_format() {
        assert_eq!(num(0.0), "0");
        assert_eq!(num(-2.5), "-2.5");
        assert_eq!(num(1e-20), "1e-20");
        assert_eq!(num(std::f64::consts::FRAC_1_PI), "0.3183098861837907");
        assert_eq!(num(f64::NAN), "NaN");
    }

    #[test]
    fn negative_literals_are_accepted() {
        let (code, out, _) = run_str(&["eval", "bargmann-kernel", "--level", "0", "--t", "-0.5", "--q", "-1+0.5j"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("-0.5,-1,0,0.5,0,"));
    }

    #[test]
    fn literal_errors_report_the_column() {
        let (code, _, err) = run_str(&["eval", "hermite-q", "--m", "1", "--n", "1", "--q", "1+2x"]);
        assert_eq!(code, 2);
        assert!(err.contains("column 4"), "{err}");
    }

    #[test]
    fn degree_cap_is_enforced() {
        let (code, _, err) = run_str(&["eval", "hermite-q", "--m", "31", "--n", "0", "--q", "1"]);
        assert_eq!(code, 2);
        assert!(err.contains("degree cap"), "{err}");
    }

    #[test]
    fn phi_spec_is_checked() {
        assert_eq!(parse_phi("h:3").unwrap(), 3);
        assert!(parse_phi("g:3").is_err());
        assert!(parse_phi("h:").is_err());
    }
}
