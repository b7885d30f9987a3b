//! Command-line front end of the `bergman` binary.
//!
//! [`run`] parses the arguments, dispatches to one subcommand and returns the
//! process exit status:
//!
//! | status | meaning |
//! |--------|---------|
//! | 0 | success |
//! | 1 | a quantitative check failed or a search did not converge |
//! | 2 | usage error: bad flags, parameters outside their domain, unreadable input |
//! | 3 | numerical failure in the engine (quadrature divergence, singular Gram matrix) |

pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::extremal::{search, ProblemSpec, SearchConfig, SearchResult};
use crate::funcspace::AnalyticFunction;
use crate::quadrature::{bergman_norm_detailed, load_weight_table, QuadratureSpec, RadialWeight};
use crate::specfun::{derivative_bound, sharp_constant, SharpConstantParams};

use format::{
    coefficients_to_string, format_complex, format_number, load_coefficients, parse_alpha, parse_disk_point,
    parse_exponent, parse_multiplicity, Grid, DEFAULT_DIGITS,
};

/// Relative deviation below which `verify` reports success.
pub const VERIFY_TOL: f64 = 1e-5;

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "bergman", version, about = "Sharp division and derivative constants in weighted Bergman spaces")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the sharp constant C(N,p,alpha) and, given --a, the derivative bound.
    Constant(ConstantArgs),
    /// Check the closed-form extremal function by quadrature.
    Verify(VerifyArgs),
    /// Maximize ||f/phi_a^N|| / ||f|| over polynomials vanishing to order N at a.
    SearchDivision(SearchArgs),
    /// Maximize |f^(N)(a)| / ||f|| over polynomials vanishing to order N at a.
    SearchDerivative(SearchArgs),
    /// Maximize ||f/(phi_a phi_b)|| / ||f|| over polynomials vanishing at a and b.
    ExploreTwoFactor(TwoFactorArgs),
    /// Emit a CSV table of constants over parameter grids.
    Table(TableArgs),
    /// Compute the weighted Bergman norm of a polynomial read from a file.
    Norm(NormArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Plain,
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format; the default depends on the command.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write the output to this file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Decimals for plain and CSV numbers; JSON always carries full precision.
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    pub digits: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ToleranceArgs {
    /// Relative tolerance of the norm quadrature.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Initial number of trapezoid nodes on each circle (a power of two).
    #[arg(long)]
    pub angular_nodes: Option<usize>,
    /// Initial Gauss-Jacobi nodes per radial panel.
    #[arg(long)]
    pub radial_nodes: Option<usize>,
    /// Node doublings allowed per radial panel.
    #[arg(long)]
    pub max_refinements: Option<u32>,
}

impl ToleranceArgs {
    fn apply(&self, base: QuadratureSpec) -> Result<QuadratureSpec> {
        let spec = QuadratureSpec {
            rel_tol: self.rel_tol.unwrap_or(base.rel_tol),
            angular_nodes: self.angular_nodes.unwrap_or(base.angular_nodes),
            radial_nodes: self.radial_nodes.unwrap_or(base.radial_nodes),
            max_refinements: self.max_refinements.unwrap_or(base.max_refinements),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ConstantArgs {
    /// Zero multiplicity N.
    #[arg(long = "N", value_parser = parse_multiplicity)]
    pub n: u32,
    #[arg(long, value_parser = parse_exponent)]
    pub p: f64,
    #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Point of the disk as re,im; adds the derivative bound at a.
    #[arg(long, value_parser = parse_disk_point, allow_hyphen_values = true)]
    pub a: Option<Complex64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long = "N", value_parser = parse_multiplicity)]
    pub n: u32,
    #[arg(long, value_parser = parse_exponent)]
    pub p: f64,
    #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, value_parser = parse_disk_point, allow_hyphen_values = true, default_value = "0,0")]
    pub a: Complex64,
    #[command(flatten)]
    pub tolerance: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SearchOptions {
    /// Polynomial degree of the search space.
    #[arg(long)]
    pub degree: usize,
    /// Number of random starts.
    #[arg(long, default_value_t = 16)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run the starts on separate threads; results are identical either way.
    #[arg(long)]
    pub parallel: bool,
    /// L-BFGS iteration cap per start.
    #[arg(long, default_value_t = 400)]
    pub max_iterations: usize,
    /// Also write the maximizer's coefficients to this file.
    #[arg(long)]
    pub save_coeffs: Option<PathBuf>,
    #[command(flatten)]
    pub tolerance: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long = "N", value_parser = parse_multiplicity)]
    pub n: u32,
    #[arg(long, value_parser = parse_exponent)]
    pub p: f64,
    #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, value_parser = parse_disk_point, allow_hyphen_values = true, default_value = "0,0")]
    pub a: Complex64,
    #[command(flatten)]
    pub search: SearchOptions,
}

#[derive(Debug, Clone, Args)]
pub struct TwoFactorArgs {
    #[arg(long, value_parser = parse_disk_point, allow_hyphen_values = true)]
    pub a: Complex64,
    #[arg(long, value_parser = parse_disk_point, allow_hyphen_values = true)]
    pub b: Complex64,
    #[arg(long, value_parser = parse_exponent)]
    pub p: f64,
    #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true)]
    pub alpha: f64,
    #[command(flatten)]
    pub search: SearchOptions,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[arg(long = "N", value_parser = parse_multiplicity, conflicts_with = "n_grid")]
    pub n: Option<u32>,
    /// Grid of N values as start:step:stop.
    #[arg(long = "N-grid")]
    pub n_grid: Option<Grid>,
    #[arg(long, value_parser = parse_exponent, conflicts_with = "p_grid")]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p_grid: Option<Grid>,
    #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true, conflicts_with = "alpha_grid")]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_grid: Option<Grid>,
    /// Adds the derivative bound at this point as a column.
    #[arg(long, value_parser = parse_disk_point, allow_hyphen_values = true)]
    pub a: Option<Complex64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct NormArgs {
    /// Coefficient file: ascending powers, one re,im per line, '#' comments.
    #[arg(long)]
    pub coeffs: PathBuf,
    #[arg(long, value_parser = parse_exponent)]
    pub p: f64,
    /// Standard weight exponent; ignored when --weight-table is given.
    #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true, default_value_t = 0.0)]
    pub alpha: f64,
    /// Radial weight table with one r,omega pair per line.
    #[arg(long)]
    pub weight_table: Option<PathBuf>,
    #[command(flatten)]
    pub tolerance: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Output text together with the status it should exit with.
struct Emission {
    text: String,
    status: i32,
}

impl Emission {
    fn ok(text: String) -> Self {
        Self { text, status: 0 }
    }
}

/// Exit status for an engine error.
pub fn exit_status(error: &Error) -> i32 {
    match error {
        Error::Divergence { .. } | Error::NotPositiveDefinite => 3,
        Error::Domain(_)
        | Error::InsufficientMultiplicity { .. }
        | Error::NotMonotone { .. }
        | Error::Parse(_)
        | Error::Io(_) => 2,
    }
}

/// Runs the command line `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(config) => config,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let (output, emission) = match &config.command {
        Command::Constant(args) => (&args.output, cmd_constant(args)),
        Command::Verify(args) => (&args.output, cmd_verify(args)),
        Command::SearchDivision(args) => (&args.search.output, cmd_search(args, Kind::Division)),
        Command::SearchDerivative(args) => (&args.search.output, cmd_search(args, Kind::Derivative)),
        Command::ExploreTwoFactor(args) => (&args.search.output, cmd_two_factor(args)),
        Command::Table(args) => (&args.output, cmd_table(args)),
        Command::Norm(args) => (&args.output, cmd_norm(args)),
    };
    let emission = match emission {
        Ok(emission) => emission,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_status(&e);
        }
    };
    let written = match &output.output {
        Some(path) => std::fs::write(path, &emission.text).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(emission.text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return 2;
    }
    emission.status
}

fn to_json(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output values serialize");
    text.push('\n');
    text
}

fn plain_lines(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    text
}

#[derive(Debug, Clone, Copy, Serialize)]
struct ConstantRow {
    #[serde(rename = "N")]
    n: u32,
    p: f64,
    alpha: f64,
    constant: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    deriv_bound_at_a: Option<f64>,
}

fn constant_row(n: u32, p: f64, alpha: f64, a: Option<Complex64>) -> Result<ConstantRow> {
    let params = SharpConstantParams::new(n, p, alpha)?;
    let deriv_bound_at_a = a.map(|a| derivative_bound(params, a)).transpose()?;
    Ok(ConstantRow { n, p, alpha, constant: sharp_constant(params), deriv_bound_at_a })
}

const TABLE_HEADER: [&str; 5] = ["N", "p", "alpha", "constant", "deriv_bound_at_a"];

fn table_csv(rows: &[ConstantRow], with_derivative: bool, digits: usize) -> String {
    let header = if with_derivative { &TABLE_HEADER[..] } else { &TABLE_HEADER[..4] };
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            let mut cells = vec![
                row.n.to_string(),
                format_number(row.p, digits),
                format_number(row.alpha, digits),
                format_number(row.constant, digits),
            ];
            cells.extend(row.deriv_bound_at_a.map(|d| format_number(d, digits)));
            cells
        })
        .collect();
    csv_text(header, &cells)
}

fn cmd_constant(args: &ConstantArgs) -> Result<Emission> {
    let row = constant_row(args.n, args.p, args.alpha, args.a)?;
    let digits = args.output.digits;
    let text = match args.output.format.unwrap_or(OutputFormat::Plain) {
        OutputFormat::Plain => {
            let mut text = format!("{}\n", format_number(row.constant, digits));
            if let Some(bound) = row.deriv_bound_at_a {
                text.push_str(&format!("{}\n", format_number(bound, digits)));
            }
            text
        }
        OutputFormat::Csv => table_csv(&[row], row.deriv_bound_at_a.is_some(), digits),
        OutputFormat::Json => to_json(&json!({
            "N": row.n,
            "p": row.p,
            "alpha": row.alpha,
            "a": args.a,
            "constant": row.constant,
            "derivative_bound": row.deriv_bound_at_a,
        })),
    };
    Ok(Emission::ok(text))
}

fn cmd_verify(args: &VerifyArgs) -> Result<Emission> {
    let spec = args.tolerance.apply(QuadratureSpec::standard())?;
    let report = crate::extremal::verify_extremal(args.n, args.p, args.alpha, args.a, &spec)?;
    let max_deviation = report.deviations.max();
    let passed = report.converged && max_deviation < VERIFY_TOL;
    let digits = args.output.digits;
    let fmt = |x: f64| format_number(x, digits);
    let text = match args.output.format.unwrap_or(OutputFormat::Plain) {
        OutputFormat::Plain => plain_lines(&[
            ("N", report.n.to_string()),
            ("p", fmt(report.p)),
            ("alpha", fmt(report.alpha)),
            ("a", format_complex(report.a, digits)),
            ("norm_ratio", fmt(report.norm_f)),
            ("quotient_norm", fmt(report.quotient_norm)),
            ("ratio", fmt(report.ratio)),
            ("constant", fmt(report.constant)),
            ("deriv_check", fmt(report.deriv_check)),
            ("derivative_bound", fmt(report.derivative_bound)),
            ("norm_deviation", fmt(report.deviations.norm)),
            ("quotient_deviation", fmt(report.deviations.quotient)),
            ("ratio_deviation", fmt(report.deviations.ratio)),
            ("derivative_deviation", fmt(report.deviations.derivative)),
            ("converged", report.converged.to_string()),
            ("passed", passed.to_string()),
        ]),
        OutputFormat::Csv => csv_text(
            &[
                "N",
                "p",
                "alpha",
                "a_re",
                "a_im",
                "ratio",
                "constant",
                "deriv_check",
                "derivative_bound",
                "norm_deviation",
                "quotient_deviation",
                "ratio_deviation",
                "derivative_deviation",
                "converged",
                "passed",
            ],
            &[vec![
                report.n.to_string(),
                fmt(report.p),
                fmt(report.alpha),
                fmt(report.a.re),
                fmt(report.a.im),
                fmt(report.ratio),
                fmt(report.constant),
                fmt(report.deriv_check),
                fmt(report.derivative_bound),
                fmt(report.deviations.norm),
                fmt(report.deviations.quotient),
                fmt(report.deviations.ratio),
                fmt(report.deviations.derivative),
                report.converged.to_string(),
                passed.to_string(),
            ]],
        ),
        OutputFormat::Json => to_json(&json!({
            "report": report,
            "max_deviation": max_deviation,
            "tolerance": VERIFY_TOL,
            "passed": passed,
        })),
    };
    Ok(Emission { text, status: if passed { 0 } else { 1 } })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Kind {
    Division,
    Derivative,
    TwoFactor,
}

#[derive(Debug, Serialize)]
struct SearchReport<'a> {
    kind: Kind,
    #[serde(rename = "N")]
    n: u32,
    p: f64,
    alpha: f64,
    a: Complex64,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<Complex64>,
    degree: usize,
    seed: u64,
    /// `product_bound - attained_value` for the two-factor problem.
    #[serde(skip_serializing_if = "Option::is_none")]
    margin: Option<f64>,
    #[serde(flatten)]
    result: &'a SearchResult,
}

fn run_search(problem: &ProblemSpec, options: &SearchOptions) -> Result<SearchResult> {
    let config = SearchConfig {
        parallel: options.parallel,
        max_iterations: options.max_iterations,
        final_spec: options.tolerance.apply(QuadratureSpec::standard())?,
        ..SearchConfig::new(options.starts, options.seed)
    };
    let result = search(problem, &config)?;
    if let Some(path) = &options.save_coeffs {
        std::fs::write(path, coefficients_to_string(&result.coefficients))
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(result)
}

fn optional(x: Option<f64>, digits: usize) -> String {
    x.map_or_else(String::new, |v| format_number(v, digits))
}

fn emit_search(report: &SearchReport, output: &OutputArgs) -> Emission {
    let digits = output.digits;
    let result = report.result;
    let fmt = |x: f64| format_number(x, digits);
    let text = match output.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => to_json(report),
        OutputFormat::Plain => {
            let mut rows = vec![
                ("kind", serde_json::to_value(report.kind).expect("kind serializes").as_str().unwrap_or("").to_owned()),
                ("N", report.n.to_string()),
                ("p", fmt(report.p)),
                ("alpha", fmt(report.alpha)),
                ("a", format_complex(report.a, digits)),
            ];
            if let Some(b) = report.b {
                rows.push(("b", format_complex(b, digits)));
            }
            rows.extend([
                ("degree", report.degree.to_string()),
                ("starts", result.n_starts.to_string()),
                ("seed", report.seed.to_string()),
                ("attained_value", fmt(result.attained_value)),
            ]);
            if let Some(theory) = result.theory_value {
                rows.push(("theory_value", fmt(theory)));
            }
            if let Some(gap) = result.relative_gap {
                rows.push(("relative_gap", fmt(gap)));
            }
            if let Some(bound) = result.product_bound {
                rows.push(("product_bound", fmt(bound)));
            }
            if let Some(margin) = report.margin {
                rows.push(("margin", fmt(margin)));
            }
            rows.extend([
                ("converged", result.converged.to_string()),
                ("iterations", result.iterations.to_string()),
                ("best_start", result.best_start.to_string()),
            ]);
            let mut text = plain_lines(&rows);
            for (k, c) in result.coefficients.iter().enumerate() {
                text.push_str(&format!("c{k}  {}\n", format_complex(*c, digits)));
            }
            text
        }
        OutputFormat::Csv => csv_text(
            &[
                "kind",
                "N",
                "p",
                "alpha",
                "a_re",
                "a_im",
                "b_re",
                "b_im",
                "degree",
                "starts",
                "seed",
                "attained_value",
                "theory_value",
                "relative_gap",
                "product_bound",
                "margin",
                "converged",
                "iterations",
                "best_start",
            ],
            &[vec![
                serde_json::to_value(report.kind).expect("kind serializes").as_str().unwrap_or("").to_owned(),
                report.n.to_string(),
                fmt(report.p),
                fmt(report.alpha),
                fmt(report.a.re),
                fmt(report.a.im),
                optional(report.b.map(|b| b.re), digits),
                optional(report.b.map(|b| b.im), digits),
                report.degree.to_string(),
                result.n_starts.to_string(),
                report.seed.to_string(),
                fmt(result.attained_value),
                optional(result.theory_value, digits),
                optional(result.relative_gap, digits),
                optional(result.product_bound, digits),
                optional(report.margin, digits),
                result.converged.to_string(),
                result.iterations.to_string(),
                result.best_start.to_string(),
            ]],
        ),
    };
    Emission { text, status: if result.converged { 0 } else { 1 } }
}

fn cmd_search(args: &SearchArgs, kind: Kind) -> Result<Emission> {
    let options = &args.search;
    let problem = match kind {
        Kind::Division => ProblemSpec::division(args.n, args.p, args.alpha, args.a, options.degree)?,
        _ => ProblemSpec::derivative(args.n, args.p, args.alpha, args.a, options.degree)?,
    };
    let result = run_search(&problem, options)?;
    let report = SearchReport {
        kind,
        n: args.n,
        p: args.p,
        alpha: args.alpha,
        a: args.a,
        b: None,
        degree: options.degree,
        seed: options.seed,
        margin: None,
        result: &result,
    };
    Ok(emit_search(&report, &args.search.output))
}

fn cmd_two_factor(args: &TwoFactorArgs) -> Result<Emission> {
    let options = &args.search;
    let problem = ProblemSpec::two_factor(args.a, args.b, args.p, args.alpha, options.degree)?;
    let result = run_search(&problem, options)?;
    let report = SearchReport {
        kind: Kind::TwoFactor,
        n: 2,
        p: args.p,
        alpha: args.alpha,
        a: args.a,
        b: Some(args.b),
        degree: options.degree,
        seed: options.seed,
        margin: result.product_bound.map(|bound| bound - result.attained_value),
        result: &result,
    };
    Ok(emit_search(&report, &args.search.output))
}

fn axis(single: Option<f64>, grid: Option<Grid>, name: &str) -> Result<Vec<f64>> {
    let values = match (single, grid) {
        (Some(v), _) => vec![v],
        (None, Some(grid)) => grid.values(),
        (None, None) => return Err(Error::Domain(format!("either --{name} or --{name}-grid is required"))),
    };
    if values.is_empty() {
        return Err(Error::Domain(format!("the {name} grid is empty")));
    }
    Ok(values)
}

fn cmd_table(args: &TableArgs) -> Result<Emission> {
    let ns = axis(args.n.map(f64::from), args.n_grid, "N")?;
    let ps = axis(args.p, args.p_grid, "p")?;
    let alphas = axis(args.alpha, args.alpha_grid, "alpha")?;
    let mut rows = Vec::with_capacity(ns.len() * ps.len() * alphas.len());
    for &n in &ns {
        if n.fract() != 0.0 || n < 1.0 || n > f64::from(u32::MAX) {
            return Err(Error::Domain(format!("N grid values must be positive integers, got {n}")));
        }
        for &p in &ps {
            for &alpha in &alphas {
                rows.push(constant_row(n as u32, p, alpha, args.a)?);
            }
        }
    }
    let digits = args.output.digits;
    let text = match args.output.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv | OutputFormat::Plain => table_csv(&rows, args.a.is_some(), digits),
        OutputFormat::Json => to_json(&json!({ "a": args.a, "rows": rows })),
    };
    Ok(Emission::ok(text))
}

fn cmd_norm(args: &NormArgs) -> Result<Emission> {
    let coeffs = load_coefficients(&args.coeffs)?;
    let weight = match &args.weight_table {
        Some(path) => load_weight_table(path)?,
        None => RadialWeight::standard(args.alpha)?,
    };
    let spec = args.tolerance.apply(QuadratureSpec::for_weight(&weight))?;
    let f = AnalyticFunction::polynomial(coeffs);
    let estimate = bergman_norm_detailed(&f, args.p, &weight, &spec)?;
    let weight_label = match &args.weight_table {
        Some(path) => path.display().to_string(),
        None => format!("standard(alpha={})", args.alpha),
    };
    let digits = args.output.digits;
    let text = match args.output.format.unwrap_or(OutputFormat::Plain) {
        OutputFormat::Plain => format!("{}\n", format_number(estimate.norm, digits)),
        OutputFormat::Csv => csv_text(
            &["p", "weight", "norm", "rel_change", "converged"],
            &[vec![
                format_number(args.p, digits),
                weight_label,
                format_number(estimate.norm, digits),
                format_number(estimate.rel_change, digits),
                estimate.converged.to_string(),
            ]],
        ),
        OutputFormat::Json => to_json(&json!({
            "p": args.p,
            "weight": weight_label,
            "quadrature": spec,
            "estimate": estimate,
        })),
    };
    Ok(Emission { text, status: if estimate.converged { 0 } else { 1 } })
}
