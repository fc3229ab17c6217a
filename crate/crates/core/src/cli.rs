//! The `specrange` command-line front end.
//!
//! Every command writes JSON Lines to stdout: a header echoing the resolved
//! configuration, then one line per result. Exit status is 0 on success,
//! 1 when a verification report is not satisfied and 2 on input errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::combinat::{cut_shift_experiment, family_norm, SparseVector, SpreadingFamily};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, induced_norm, Matrix, NormKind, Polynomial};
use crate::numrange::{
    angle_grid, numerical_radius, range_polygon_on_angles, ConvexRegion, SupportMethod, DEFAULT_GRID,
};
use crate::polytools::{ranking_grid, rudin_shapiro, sup_on_circle};
use crate::psi::{
    affine_invariance_check, bohr_check, cos_example, direct_sum_example, epsilon_hull_check, jordan_experiment,
    psi_lower_bound, region_for, two_by_two_l1_suite, ExperimentReport,
};
use crate::rng::{derive_seed, Rng};

#[derive(Debug, Parser)]
#[command(name = "specrange", version, about = "Algebraic numerical ranges and spectral constants of matrices")]
struct Cli {
    /// Seed for every random choice (echoed in the output header).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Outer polygon of V(T) from sampled support radii.
    Range {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value = "l1")]
        norm: NormKind,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, value_enum, default_value = "closed-form")]
        method: Method,
        /// Write an SVG drawing of the region with the eigenvalues.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the region object to a file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Numerical radius of T.
    Radius {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value = "l1")]
        norm: NormKind,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Searched lower bound for the spectral constant of T.
    Psi {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value = "l1")]
        norm: NormKind,
        #[arg(long, default_value_t = 24)]
        degree: usize,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        /// Optional polynomial whose ratio is reported alongside the search.
        #[arg(long)]
        poly: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run experiment suites and check them against known bounds.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Random matrices per family in the 2x2 suite.
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// Write a CSV summary.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write all reports as one JSON array.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Rudin–Shapiro pair of length 2^k.
    Shapiro {
        #[arg(long)]
        k: u32,
    },
    /// Schreier norm of a sparse vector, or the cut-shift experiment.
    Schreier {
        #[arg(long, alias = "norm", conflicts_with = "experiment", required_unless_present = "experiment")]
        vector: Option<PathBuf>,
        /// Size n, given as `15` or `n=15`.
        #[arg(long, value_parser = parse_experiment)]
        experiment: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Method {
    ClosedForm,
    LimitScheme,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Suite {
    All,
    Jordan,
    #[value(name = "2x2")]
    #[serde(rename = "2x2")]
    TwoByTwo,
    Cos,
    Hull,
    Bohr,
    Direct,
    Schreier,
    Affine,
}

fn parse_experiment(s: &str) -> std::result::Result<usize, String> {
    let v = s.strip_prefix("n=").unwrap_or(s);
    v.parse().map_err(|_| format!("expected `n=<size>` or `<size>`, got `{s}`"))
}

enum Failure {
    Input(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let mut out = std::io::stdout().lock();
    match execute(&cli, &mut out) {
        Ok(()) => 0,
        Err(Failure::Verification) => 1,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn configure_threads() {
    let n = std::env::var("SPECRANGE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if n > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn emit(out: &mut impl std::io::Write, value: &impl Serialize) -> CliResult<()> {
    let line = serde_json::to_string(value).map_err(|e| Failure::Input(e.to_string()))?;
    writeln!(out, "{line}").map_err(|e| Failure::Input(e.to_string()))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn read_json(path: &Path, field: &str) -> CliResult<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read `{field}` file {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("malformed JSON in `{field}`: {e}")))
}

fn parse_entry(v: &Value) -> Option<Complex64> {
    match v {
        Value::Number(x) => x.as_f64().map(|re| Complex64::new(re, 0.0)),
        Value::Array(pair) if pair.len() == 2 => Some(Complex64::new(pair[0].as_f64()?, pair[1].as_f64()?)),
        _ => None,
    }
}

/// Reads `{"n": .., "entries": [[re, im], ..]}` or a bare list of rows whose
/// entries are numbers or `[re, im]` pairs.
fn read_matrix(path: &Path) -> CliResult<Matrix> {
    let value = read_json(path, "matrix")?;
    if let Value::Array(rows) = &value {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Failure::Input("invalid input for `matrix`: rows must be arrays".into()))?;
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() }.into());
            }
            for v in row {
                entries.push(parse_entry(v).ok_or_else(|| {
                    Failure::Input("invalid input for `matrix`: entries must be numbers or [re, im]".into())
                })?);
            }
        }
        return Ok(Matrix::new(n, entries)?);
    }
    serde_json::from_value(value).map_err(|e| Failure::Input(format!("invalid input for `matrix`: {e}")))
}

fn complex_list(zs: &[Complex64]) -> Vec<[f64; 2]> {
    zs.iter().map(|z| [z.re, z.im]).collect()
}

fn execute(cli: &Cli, out: &mut impl std::io::Write) -> CliResult<()> {
    let seed = cli.seed;
    match &cli.command {
        Command::Range {
            matrix,
            norm,
            grid,
            method,
            svg,
            json,
        } => {
            let t = read_matrix(matrix)?;
            let method = match method {
                Method::ClosedForm => SupportMethod::ClosedForm,
                Method::LimitScheme => SupportMethod::LimitScheme,
            };
            emit(out, &json!({ "command": "range", "config": {
                "matrix": matrix, "norm": norm, "grid": grid, "method": method, "seed": seed,
                "svg": svg, "json": json,
            }}))?;
            if *grid < 8 {
                return Err(Error::invalid("grid", "need at least 8 angles").into());
            }
            let region = range_polygon_on_angles(&t, *norm, &angle_grid(*grid, 0.0), method)?;
            let spectrum = eigenvalues(&t)?;
            emit(out, &json!({
                "region": region,
                "eigenvalues": complex_list(&spectrum.eigenvalues),
                "eigen_residual": spectrum.residual,
                "diameter": region.diameter(),
            }))?;
            if let Some(path) = json {
                write_file(path, &serde_json::to_string(&region).expect("serializable"))?;
            }
            if let Some(path) = svg {
                write_file(path, &region_svg(&region, &spectrum.eigenvalues))?;
            }
            Ok(())
        }
        Command::Radius { matrix, norm, grid } => {
            let t = read_matrix(matrix)?;
            emit(out, &json!({ "command": "radius", "config": {
                "matrix": matrix, "norm": norm, "grid": grid, "seed": seed,
            }}))?;
            let nu = numerical_radius(&t, *norm, *grid)?;
            emit(out, &json!({ "numerical_radius": nu, "operator_norm": induced_norm(&t, *norm) }))
        }
        Command::Psi {
            matrix,
            norm,
            degree,
            budget,
            poly,
            json,
        } => {
            let t = read_matrix(matrix)?;
            emit(out, &json!({ "command": "psi", "config": {
                "matrix": matrix, "norm": norm, "degree": degree, "budget": budget,
                "poly": poly, "seed": seed, "grid": DEFAULT_GRID,
            }}))?;
            let est = psi_lower_bound(&t, *norm, *degree, *budget, seed)?;
            emit(out, &est)?;
            if let Some(path) = poly {
                let p: Polynomial = serde_json::from_value(read_json(path, "poly")?)
                    .map_err(|e| Failure::Input(format!("invalid input for `poly`: {e}")))?;
                let ratio = crate::psi::psi_ratio(&t, &p, *norm, &region_for(&t, *norm)?)?;
                emit(out, &json!({ "poly_ratio": ratio }))?;
            }
            if let Some(path) = json {
                write_file(path, &serde_json::to_string(&est).expect("serializable"))?;
            }
            Ok(())
        }
        Command::Verify {
            suite,
            samples,
            csv,
            json,
        } => {
            emit(out, &json!({ "command": "verify", "config": {
                "suite": suite, "samples": samples, "seed": seed, "grid": DEFAULT_GRID,
                "csv": csv, "json": json,
            }}))?;
            let reports = run_suite(*suite, *samples, seed)?;
            for r in &reports {
                emit(out, r)?;
            }
            eprint!("{}", summary_table(&reports));
            if let Some(path) = csv {
                write_file(path, &summary_csv(&reports))?;
            }
            if let Some(path) = json {
                write_file(path, &serde_json::to_string(&reports).expect("serializable"))?;
            }
            out.flush().map_err(|e| Failure::Input(e.to_string()))?;
            if reports.iter().all(|r| r.satisfied) {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Shapiro { k } => {
            emit(out, &json!({ "command": "shapiro", "config": { "k": k, "seed": seed } }))?;
            let (p, q) = rudin_shapiro(*k)?;
            let len = p.len();
            let grid = ranking_grid(len);
            let sup_p = sup_on_circle(&p.to_polynomial(), 1.0, grid)?;
            let sup_q = sup_on_circle(&q.to_polynomial(), 1.0, grid)?;
            emit(out, &json!({
                "k": k, "length": len, "p": p.signs, "q": q.signs,
                "sup_p": sup_p.sampled.value, "sup_q": sup_q.sampled.value,
                "flat_bound": (2.0 * len as f64).sqrt(),
            }))
        }
        Command::Schreier { vector, experiment } => {
            emit(out, &json!({ "command": "schreier", "config": {
                "vector": vector, "experiment": experiment, "seed": seed,
            }}))?;
            if let Some(n) = experiment {
                let r = cut_shift_experiment(*n, seed)?;
                emit(out, &r)?;
                return if r.satisfied { Ok(()) } else { Err(Failure::Verification) };
            }
            let path = vector.as_ref().expect("clap requires one of the two");
            let x: SparseVector = serde_json::from_value(read_json(path, "vector")?)
                .map_err(|e| Failure::Input(format!("invalid input for `vector`: {e}")))?;
            let v = family_norm(&x, &SpreadingFamily::Schreier)?;
            emit(out, &json!({ "schreier_norm": v, "l1_norm": x.l1_norm() }))
        }
    }
}

fn random_test_matrix(n: usize, seed: u64) -> Matrix {
    let t = Rng::new(seed).gaussian_matrix(n);
    let s = induced_norm(&t, NormKind::L2);
    t.scale(Complex64::new(1.0 / s, 0.0))
}

fn run_suite(suite: Suite, samples: usize, seed: u64) -> Result<Vec<ExperimentReport>> {
    let wants = |s: Suite| suite == Suite::All || suite == s;
    let mut reports = Vec::new();
    if wants(Suite::Jordan) {
        for n in [2, 4, 8, 16, 32, 64] {
            for kind in NormKind::ALL {
                reports.push(jordan_experiment(n, kind)?);
            }
        }
    }
    if wants(Suite::TwoByTwo) {
        reports.push(two_by_two_l1_suite(samples, seed)?);
    }
    if wants(Suite::Cos) {
        reports.push(cos_example()?);
    }
    if wants(Suite::Hull) {
        for (i, kind) in NormKind::ALL.into_iter().enumerate() {
            let t = random_test_matrix(4, derive_seed(seed, 100 + i as u64));
            for eps in [0.25, 0.5, 1.0, 2.0] {
                reports.push(epsilon_hull_check(&t, kind, eps, 20, derive_seed(seed, 200 + i as u64))?);
            }
        }
    }
    if wants(Suite::Bohr) {
        for (i, kind) in NormKind::ALL.into_iter().enumerate() {
            let t = random_test_matrix(4, derive_seed(seed, 300 + i as u64));
            reports.push(bohr_check(&t, kind, 100, derive_seed(seed, 400 + i as u64))?);
        }
    }
    if wants(Suite::Direct) {
        for kind in [NormKind::L1, NormKind::Linf] {
            reports.push(direct_sum_example(kind, 63, 64)?);
        }
    }
    if wants(Suite::Schreier) {
        for n in [3, 7, 15, 31] {
            reports.push(cut_shift_experiment(n, seed)?);
        }
    }
    if wants(Suite::Affine) {
        let t = random_test_matrix(3, derive_seed(seed, 500));
        let alpha = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
        let p = Polynomial::new(vec![Complex64::new(0.5, 0.0), Complex64::new(-1.0, 0.5), Complex64::new(0.0, 1.0)])
            .expect("finite");
        for kind in NormKind::ALL {
            reports.push(affine_invariance_check(&t, kind, alpha, Complex64::new(0.3, -0.2), &p)?);
        }
    }
    Ok(reports)
}

fn short_params(r: &ExperimentReport) -> String {
    r.parameters
        .iter()
        .map(|(k, v)| format!("{k}={}", v.to_string().trim_matches('"')))
        .collect::<Vec<_>>()
        .join(";")
}

fn summary_table(reports: &[ExperimentReport]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<18} {:<40} {:>14} {:>14}  status", "experiment", "parameters", "measured", "bound");
    for r in reports {
        let _ = writeln!(
            s,
            "{:<18} {:<40} {:>14.6e} {:>14.6e}  {}",
            r.name,
            short_params(r),
            r.measured,
            r.paper_bound,
            if r.satisfied { "ok" } else { "FAIL" }
        );
    }
    s
}

fn summary_csv(reports: &[ExperimentReport]) -> String {
    let mut s = String::from("experiment,parameters,measured,bound,satisfied\n");
    for r in reports {
        let _ = writeln!(s, "{},{},{},{},{}", r.name, short_params(r), r.measured, r.paper_bound, r.satisfied);
    }
    s
}

/// SVG drawing of the region polygon with eigenvalue markers.
fn region_svg(region: &ConvexRegion, eigen: &[Complex64]) -> String {
    let pts: Vec<Complex64> = region.vertices().iter().chain(eigen).copied().collect();
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for z in &pts {
        lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9);
    let pad = 0.05 * span;
    let size = 480.0;
    let k = size / (span + 2.0 * pad);
    let map = |z: &Complex64| ((z.re - lo.re + pad) * k, (hi.im - z.im + pad) * k);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let poly: Vec<String> = region
        .vertices()
        .iter()
        .map(|z| {
            let (x, y) = map(z);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        s,
        r##"<polygon points="{}" fill="#cfe0f5" stroke="#1f4e8c" stroke-width="1"/>"##,
        poly.join(" ")
    );
    for z in eigen {
        let (x, y) = map(z);
        let _ = writeln!(s, r##"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="#b22222"/>"##);
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_flag_forms() {
        assert_eq!(parse_experiment("n=15"), Ok(15));
        assert_eq!(parse_experiment("7"), Ok(7));
        assert!(parse_experiment("n=x").is_err());
    }

    #[test]
    fn unknown_flags_are_input_errors() {
        assert_eq!(run(["specrange", "range", "--bogus"]), 2);
        assert_eq!(run(["specrange", "frobnicate"]), 2);
    }

    #[test]
    fn svg_contains_polygon_and_markers() {
        let t = Matrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 0.0]]);
        let region = crate::numrange::gershgorin_hull_l1(&t, 16);
        let svg = region_svg(&region, &[Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)]);
        assert!(svg.contains("<polygon") && svg.matches("<circle").count() == 2);
    }
}
