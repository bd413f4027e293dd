//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 violated invariant, 3 numeric
//! failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::asympt::{s_star, tau_star_asymptotic, tau_star_exact};
use crate::bounds::{bound_set_at, lower_bound, ratio_bound, tau_star_upper, upper_bounds_at};
use crate::error::Error;
use crate::orthopoly::Index;
use crate::quadrature::{classical_weights, golub_welsch, max_relative_deviation, petras_weights, QuadRule};
use crate::roots::{all_zeros, omega};
use crate::tau::{tau_closed_form_at, tau_direct_at};
use crate::verify::{run_all, VerifyOptions};

/// Default `n` range is `k+2 ..= k+2+DEFAULT_SPAN`.
pub const DEFAULT_SPAN: u32 = 198;

/// Closed form and direct routes must agree to this relative tolerance.
const ROUTE_TOLERANCE: f64 = 1e-9;
const WEIGHT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Invariant(_) => 2,
            CliError::Numeric(Error::Domain(_)) => 1,
            CliError::Numeric(_) => 3,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A table column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    TauDirect,
    TauClosed,
    Lower,
    Sd12,
    Combined14,
    Thm15,
    Cor11,
    RatioBound,
    TauStar,
    TauStarAsym,
}

impl Column {
    pub const ALL: [Column; 10] = [
        Column::TauDirect,
        Column::TauClosed,
        Column::Lower,
        Column::Sd12,
        Column::Combined14,
        Column::Thm15,
        Column::Cor11,
        Column::RatioBound,
        Column::TauStar,
        Column::TauStarAsym,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::TauDirect => "tau_direct",
            Column::TauClosed => "tau_closed",
            Column::Lower => "lower",
            Column::Sd12 => "sd12",
            Column::Combined14 => "combined14",
            Column::Thm15 => "thm15",
            Column::Cor11 => "cor11",
            Column::RatioBound => "ratio_bound",
            Column::TauStar => "tau_star",
            Column::TauStarAsym => "tau_star_asym",
        }
    }

    fn needs_omega(self) -> bool {
        matches!(
            self,
            Column::TauDirect | Column::TauClosed | Column::Sd12 | Column::Combined14 | Column::Thm15 | Column::Cor11
        )
    }
}

impl FromStr for Column {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Column::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| {
                let names: Vec<&str> = Column::ALL.iter().map(|c| c.name()).collect();
                format!("unknown column `{s}`, expected one of {}", names.join(", "))
            })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Range of `n` for each `k`. Missing ends default to `k+2` and
/// `k+2+DEFAULT_SPAN`; `n < k+2` is always skipped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NRange {
    Auto,
    Explicit { min: Option<u32>, max: Option<u32> },
}

impl NRange {
    fn bounds(self, k: u32) -> (u32, u32) {
        let (min, max) = match self {
            NRange::Auto => (None, None),
            NRange::Explicit { min, max } => (min, max),
        };
        let lo = min.unwrap_or(k + 2).max(k + 2);
        (lo, max.unwrap_or(k + 2 + DEFAULT_SPAN))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub k_min: u32,
    pub k_max: u32,
    pub n_range: NRange,
    pub columns: Vec<Column>,
    pub format: Format,
}

impl SweepSpec {
    /// Every `(n, k)` in emission order: `k` outer, `n` inner, both ascending.
    pub fn cells(&self) -> Vec<(u32, u32)> {
        (self.k_min..=self.k_max)
            .flat_map(|k| {
                let (lo, hi) = self.n_range.bounds(k);
                (lo..=hi).map(move |n| (n, k))
            })
            .collect()
    }
}

fn row_values(n: u32, k: u32, columns: &[Column], star: Option<(f64, f64)>) -> crate::Result<Vec<f64>> {
    let index = Index::new(n, k)?;
    let w = if columns.iter().any(|c| c.needs_omega()) {
        Some(omega(index)?.omega)
    } else {
        None
    };
    let upper = match w {
        Some(w)
            if columns
                .iter()
                .any(|c| matches!(c, Column::Sd12 | Column::Combined14 | Column::Thm15 | Column::Cor11)) =>
        {
            Some(upper_bounds_at(index, w)?)
        }
        _ => None,
    };
    columns
        .iter()
        .map(|&c| {
            Ok(match c {
                Column::TauDirect => tau_direct_at(index, w.unwrap_or(1.0))?.value,
                Column::TauClosed => tau_closed_form_at(index, w.unwrap_or(1.0))?.value,
                Column::Lower => lower_bound(n, k)?,
                Column::Sd12 => upper.map_or(f64::NAN, |u| u.schaeffer_duffin),
                Column::Combined14 => upper.map_or(f64::NAN, |u| u.combined),
                Column::Thm15 => upper.map_or(f64::NAN, |u| u.omega_bound),
                Column::Cor11 => upper.map_or(f64::NAN, |u| u.uniform),
                Column::RatioBound => ratio_bound(n, k)?,
                Column::TauStar => star.map_or(f64::NAN, |s| s.0),
                Column::TauStarAsym => star.map_or(f64::NAN, |s| s.1),
            })
        })
        .collect()
}

/// 17 significant digits.
fn format_csv(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn json_number(v: f64) -> Value {
    let representable = v == 0.0 || (v.is_finite() && v.abs().log10().abs() <= 300.0);
    if representable {
        json!(v)
    } else {
        json!({ "value": format_csv(v) })
    }
}

/// Computes a sweep on `jobs` workers (0 picks the default) and renders it.
/// The bytes do not depend on `jobs`.
pub fn render_table(spec: &SweepSpec, jobs: usize) -> crate::Result<String> {
    if spec.k_min == 0 || spec.k_min > spec.k_max {
        return Err(Error::domain(format!(
            "need 1 <= k-min <= k-max, got {}..{}",
            spec.k_min, spec.k_max
        )));
    }
    if spec.columns.is_empty() {
        return Err(Error::domain("no columns selected"));
    }
    let cells = spec.cells();
    if cells.is_empty() {
        return Err(Error::domain("the sweep contains no (n, k) with n >= k + 2"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::domain(format!("cannot start {jobs} workers: {e}")))?;
    let wants_star = spec
        .columns
        .iter()
        .any(|c| matches!(c, Column::TauStar | Column::TauStarAsym));

    let rows: Vec<Vec<f64>> = pool.install(|| -> crate::Result<Vec<Vec<f64>>> {
        let stars: Vec<Option<(f64, f64)>> = (spec.k_min..=spec.k_max)
            .into_par_iter()
            .map(|k| {
                if wants_star {
                    Ok(Some((tau_star_exact(k)?, tau_star_asymptotic(k)?)))
                } else {
                    Ok(None)
                }
            })
            .collect::<crate::Result<_>>()?;
        // Indexed parallel collection keeps the input order.
        cells
            .par_iter()
            .map(|&(n, k)| row_values(n, k, &spec.columns, stars[(k - spec.k_min) as usize]))
            .collect()
    })?;

    let mut out = String::new();
    match spec.format {
        Format::Csv => {
            out.push_str("n,k");
            for c in &spec.columns {
                out.push(',');
                out.push_str(c.name());
            }
            out.push('\n');
            for (&(n, k), values) in cells.iter().zip(&rows) {
                let _ = write!(out, "{n},{k}");
                for &v in values {
                    out.push(',');
                    out.push_str(&format_csv(v));
                }
                out.push('\n');
            }
        }
        Format::Json => {
            let array: Vec<Value> = cells
                .iter()
                .zip(&rows)
                .map(|(&(n, k), values)| {
                    let mut object = Map::new();
                    object.insert("n".into(), json!(n));
                    object.insert("k".into(), json!(k));
                    for (c, &v) in spec.columns.iter().zip(values) {
                        object.insert(c.name().into(), json_number(v));
                    }
                    Value::Object(object)
                })
                .collect();
            out = serde_json::to_string_pretty(&array).expect("JSON values serialize");
            out.push('\n');
        }
    }
    Ok(out)
}

#[derive(Debug, Parser)]
#[command(
    name = "cheby-critical",
    version,
    about = "Largest critical values of Chebyshev polynomial derivatives"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// tau(n, k) by both routes, with every bound
    Tau(TauArgs),
    /// The limit tau_k* and its asymptotic form
    Limit(LimitArgs),
    /// Sweep a grid of (n, k) and emit CSV or JSON
    Table(TableArgs),
    /// Gauss-Gegenbauer nodes and weights from three constructions
    Quadrature(QuadratureArgs),
    /// Run the acceptance suite
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct TauArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
}

#[derive(Debug, Args)]
struct LimitArgs {
    #[arg(long)]
    k: u32,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, default_value_t = 1)]
    k_min: u32,
    #[arg(long, default_value_t = 10)]
    k_max: u32,
    /// Defaults to k + 2 for each k
    #[arg(long)]
    n_min: Option<u32>,
    /// Defaults to k + 200 for each k
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Comma-separated column names; all columns by default
    #[arg(long, value_delimiter = ',')]
    columns: Vec<Column>,
    /// Worker threads, 0 for one per core
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct QuadratureArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Wider grids
    #[arg(long)]
    full: bool,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Shift every root by this amount
    #[arg(long, hide = true, default_value_t = 0.0)]
    inject_omega_fault: f64,
}

fn emit(text: &str, out: Option<&PathBuf>, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_tau(args: &TauArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let index = Index::new(args.n, args.k).map_err(|e| CliError::Usage(e.to_string()))?;
    let (n, k) = (args.n, args.k);
    let mut text = format!("n = {n}, k = {k}\n");
    if k == 0 {
        text.push_str("tau = 1 (every interior extremum of T_n is +-1)\n");
        return emit(&text, None, stdout);
    }
    let root = omega(index)?;
    let direct = tau_direct_at(index, root.omega)?.value;
    let closed = tau_closed_form_at(index, root.omega)?;
    let bounds = bound_set_at(index, root.omega)?;
    let diff = ((closed.value - direct) / direct).abs();
    let _ = writeln!(
        text,
        "omega = {} in [{}, {}], residual {:e}",
        root.omega, root.bracket_lo, root.bracket_hi, root.residual
    );
    let _ = writeln!(text, "tau_direct = {direct}");
    let _ = writeln!(text, "tau_closed = {}", closed.value);
    let _ = writeln!(text, "relative difference = {diff:e}");
    let _ = writeln!(text, "lower = {}", bounds.lower);
    let u = bounds.upper;
    let note = if u.extended_domain { " (k = 1, extended domain)" } else { "" };
    let _ = writeln!(text, "sd12 = {}{note}", u.schaeffer_duffin);
    let _ = writeln!(text, "combined14 = {}", u.combined);
    let _ = writeln!(text, "thm15 = {}", u.omega_bound);
    let _ = writeln!(text, "cor11 = {}", u.uniform);
    let _ = writeln!(text, "ratio_bound = {}", bounds.ratio);
    let sandwich = bounds.sandwiches(direct);
    let _ = writeln!(text, "sandwich {}", if sandwich { "PASS" } else { "FAIL" });
    emit(&text, None, stdout)?;
    if !sandwich {
        return Err(CliError::Invariant(format!("tau({n}, {k}) escapes its bounds")));
    }
    if diff > ROUTE_TOLERANCE {
        return Err(CliError::Invariant(format!("routes disagree by {diff:e}")));
    }
    Ok(())
}

fn cmd_limit(args: &LimitArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let k = args.k;
    if k == 0 {
        return Err(CliError::Usage("limit needs k >= 1".into()));
    }
    let terms = s_star(k)?;
    let exact = tau_star_exact(k)?;
    let asym = tau_star_asymptotic(k)?;
    let bound = tau_star_upper(k)?;
    let j = (f64::from(k) + 1.0) / terms.q;
    let ok = exact <= bound;
    let text = format!(
        "k = {k}\nj = {j}\nq = {}\nS* = {}\ntau_star = {exact}\ntau_star_asym = {asym}\nratio = {}\nbound (2k-1)!!/(k+2)^k = {bound} {}\n",
        terms.q,
        terms.s_star,
        asym / exact,
        if ok { "PASS" } else { "FAIL" }
    );
    emit(&text, None, stdout)?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Invariant(format!("tau_{k}* exceeds its bound")))
    }
}

fn cmd_table(args: &TableArgs, stdout: &mut dyn Write) -> CliResult<()> {
    if let (Some(lo), Some(hi)) = (args.n_min, args.n_max) {
        if lo > hi {
            return Err(CliError::Usage(format!("n-min {lo} exceeds n-max {hi}")));
        }
    }
    let spec = SweepSpec {
        k_min: args.k_min,
        k_max: args.k_max,
        n_range: if args.n_min.is_none() && args.n_max.is_none() {
            NRange::Auto
        } else {
            NRange::Explicit {
                min: args.n_min,
                max: args.n_max,
            }
        },
        columns: if args.columns.is_empty() {
            Column::ALL.to_vec()
        } else {
            args.columns.clone()
        },
        format: args.format,
    };
    let text = render_table(&spec, args.jobs)?;
    emit(&text, args.out.as_ref(), stdout)
}

fn cmd_quadrature(args: &QuadratureArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let (lambda, n) = (args.lambda, args.n);
    if !(lambda > -0.5 && lambda.is_finite()) || n == 0 {
        return Err(CliError::Usage(format!(
            "quadrature needs lambda > -1/2 and n >= 1, got lambda = {lambda}, n = {n}"
        )));
    }
    let integer = lambda >= 0.0 && lambda == lambda.round() && lambda <= f64::from(u32::MAX);
    let mut rules: Vec<(&str, QuadRule)> = Vec::new();
    if integer {
        rules.push(("petras", petras_weights(lambda as u32, n)?));
    }
    if lambda > 1.0 {
        rules.push(("classical", classical_weights(lambda, n)?));
    }
    rules.push(("golub_welsch", golub_welsch(lambda, n)?));
    let nodes = all_zeros(n, lambda)?;

    let mut deviation: Option<f64> = None;
    for (i, (_, a)) in rules.iter().enumerate() {
        for (_, b) in &rules[i + 1..] {
            let d = max_relative_deviation(&a.weights, &b.weights);
            deviation = Some(deviation.map_or(d, |m: f64| m.max(d)));
        }
    }

    let text = match args.format {
        Format::Csv => {
            let mut text = String::from("i,node");
            for (name, _) in &rules {
                text.push(',');
                text.push_str(name);
            }
            text.push('\n');
            for (i, x) in nodes.iter().enumerate() {
                let _ = write!(text, "{},{}", i + 1, format_csv(*x));
                for (_, r) in &rules {
                    text.push(',');
                    text.push_str(&format_csv(r.weights[i]));
                }
                text.push('\n');
            }
            if let Some(d) = deviation {
                let _ = writeln!(text, "# max_relative_deviation {}", format_csv(d));
            }
            text
        }
        Format::Json => {
            let mut weights = Map::new();
            for (name, r) in &rules {
                weights.insert((*name).into(), json!(r.weights));
            }
            let doc = json!({
                "lambda": lambda,
                "n": n,
                "nodes": nodes,
                "weights": weights,
                "max_relative_deviation": deviation,
            });
            serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n"
        }
    };
    emit(&text, args.out.as_ref(), stdout)?;
    match deviation {
        Some(d) if d > WEIGHT_TOLERANCE => Err(CliError::Invariant(format!(
            "weight constructions disagree by {d:e}"
        ))),
        _ => Ok(()),
    }
}

fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let opts = VerifyOptions {
        full: args.full,
        omega_perturbation: args.inject_omega_fault,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", args.jobs)))?;
    let reports = pool.install(|| run_all(&opts));
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(text, "{r}");
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    let _ = writeln!(text, "{passed}/{} criteria passed", reports.len());
    emit(&text, None, stdout)?;
    if passed == reports.len() {
        Ok(())
    } else {
        Err(CliError::Invariant(format!("{} criteria failed", reports.len() - passed)))
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = stdout.write_all(rendered.as_bytes());
                0
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
                1
            };
        }
    };
    let result = match &cli.command {
        Command::Tau(a) => cmd_tau(a, stdout),
        Command::Limit(a) => cmd_limit(a, stdout),
        Command::Table(a) => cmd_table(a, stdout),
        Command::Quadrature(a) => cmd_quadrature(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("cheby-critical").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn column_names_round_trip() {
        for c in Column::ALL {
            assert_eq!(c.name().parse::<Column>().unwrap(), c);
        }
        assert!("tau".parse::<Column>().is_err());
    }

    #[test]
    fn n_range_defaults() {
        assert_eq!(NRange::Auto.bounds(3), (5, 203));
        assert_eq!(NRange::Explicit { min: Some(1), max: Some(9) }.bounds(3), (5, 9));
    }

    #[test]
    fn csv_has_17_digits() {
        assert_eq!(format_csv(1.0 / 3.0), "3.3333333333333331e-1");
        assert_eq!(format_csv(1.0 / 3.0).parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn json_fallback_for_extreme_values() {
        assert_eq!(json_number(0.5), json!(0.5));
        assert!(json_number(1e-310).get("value").is_some());
        assert!(json_number(f64::INFINITY).get("value").is_some());
    }

    #[test]
    fn tau_examples() {
        let (code, out, _) = run_capture(&["tau", "--n", "3", "--k", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("tau_direct = 0.333333"));
        assert!(out.contains("sandwich PASS"));
        let (code, out, _) = run_capture(&["tau", "--n", "4", "--k", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("tau_direct = 0.2721655"));
        let (code, _, err) = run_capture(&["tau", "--n", "4", "--k", "3"]);
        assert_eq!(code, 1);
        assert!(err.contains("n >= k + 2"));
    }

    #[test]
    fn limit_examples() {
        let (code, out, _) = run_capture(&["limit", "--k", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("tau_star = 0.2172336"));
        assert!(out.contains("PASS"));
        assert_eq!(run_capture(&["limit", "--k", "0"]).0, 1);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&[]).0, 1);
        assert_eq!(run_capture(&["tau", "--n", "x", "--k", "1"]).0, 1);
        assert_eq!(run_capture(&["table", "--columns", "bogus"]).0, 1);
        assert_eq!(run_capture(&["table", "--k-min", "3", "--k-max", "2"]).0, 1);
        assert_eq!(run_capture(&["table", "--n-min", "9", "--n-max", "8"]).0, 1);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }
}
