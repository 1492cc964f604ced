//! One function per subcommand, each returning a typed [`Report`].

use kahler_pinch::berger::{berger_vs_trace, BergerRow, SphereSampleConfig};
use kahler_pinch::geometry::{check_symmetries, curvature_tensor, ricci, scalar_curvature};
use kahler_pinch::hirzebruch::{
    case_bounds, check_admissible, extremal_weights_at_optimum, min_max_hsc, optimal_s, pinching, scalar_bounds,
    scalar_bounds_at_optimum, stationary_weights,
};
use kahler_pinch::linalg::CMatrix;
use kahler_pinch::pinch::{
    admissible_s_grid, extremize_direction, sweep_fiber, sweep_s as run_sweep_s, unitary_frame, DirectionSearch, SRow,
    SweepConfig,
};
use kahler_pinch::product::{sample_points, verify_product_numeric, ProductReport};
use kahler_pinch::scalar::field_to_f64;
use kahler_pinch::{
    ChartPoint, CurvatureTensor, FiberState, HermitianMatrix, HitchinParams, MetricModel, PinchingReport, Rational,
};
use serde::{Deserialize, Serialize};

use crate::parse::{format_point, parse_model, parse_point, SValue};
use crate::{encode_csv, encode_json, CliError, Command, Format, Outcome, Report, RunConfig};

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol * target.abs()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinchParams {
    pub n: u32,
    pub s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_exact: Option<String>,
    pub is_hodge: bool,
    pub grid: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticTargets {
    pub min_k: f64,
    pub max_k: f64,
    pub pinching: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pinching_exact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinchChecks {
    pub min_k: bool,
    pub max_k: bool,
    pub pinching: bool,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinchResults {
    pub report: PinchingReport<f64>,
    pub analytic: AnalyticTargets,
    pub checks: PinchChecks,
}

fn analytic_targets(n: u32, s: &SValue) -> Result<AnalyticTargets, CliError> {
    match s.exact() {
        Some(q) => {
            let (lo, hi) = min_max_hsc(n, &q)?;
            let p = pinching(n, &q)?;
            Ok(AnalyticTargets {
                min_k: field_to_f64(&lo),
                max_k: field_to_f64(&hi),
                pinching: field_to_f64(&p),
                pinching_exact: Some(p.to_string()),
            })
        }
        None => {
            let (min_k, max_k) = min_max_hsc(n, &s.value)?;
            Ok(AnalyticTargets { min_k, max_k, pinching: pinching(n, &s.value)?, pinching_exact: None })
        }
    }
}

pub fn pinch(n: u32, s: Option<&str>, grid: usize, tol: f64) -> Result<Report<PinchParams, PinchResults>, CliError> {
    let s = match s {
        Some(text) => text.parse::<SValue>()?,
        None => {
            let (q, _): (Rational, Rational) = optimal_s(n)?;
            let (p, d) = (q.numer().try_into().unwrap_or(1), q.denom().try_into().unwrap_or(1));
            SValue { value: field_to_f64(&q), ratio: Some((p, d)) }
        }
    };
    match s.exact() {
        Some(q) => check_admissible(n, &q)?,
        None => check_admissible(n, &s.value)?,
    }
    let params = match s.ratio {
        Some((p, q)) => HitchinParams::from_ratio(n, p, q)?,
        None => HitchinParams::new(n, s.value)?,
    };
    let analytic = analytic_targets(n, &s)?;
    let report = sweep_fiber(&params, &SweepConfig::with_grid(grid))?;
    let checks = PinchChecks {
        min_k: within(report.min_k, analytic.min_k, tol),
        max_k: within(report.max_k, analytic.max_k, tol),
        pinching: within(report.pinching, analytic.pinching, tol),
        converged: report.converged,
    };
    let pass = checks.min_k && checks.max_k && checks.pinching && checks.converged;
    let params = PinchParams {
        n,
        s: s.value,
        s_exact: s.exact().map(|q| q.to_string()),
        is_hodge: params.is_hodge(),
        grid,
        tol,
    };
    Ok(Report::new("pinch", params, PinchResults { report, analytic, checks }, pass))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    pub n: u32,
    pub points: usize,
    pub grid: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResults {
    pub rows: Vec<SRow<f64>>,
    pub argmax_s: f64,
    pub s_star: f64,
    pub cell: f64,
    pub within_one_cell: bool,
    pub unimodal: bool,
    pub analytic_unimodal: bool,
}

pub fn sweep_s(n: u32, points: usize, grid: usize) -> Result<Report<SweepParams, SweepResults>, CliError> {
    let s_grid = admissible_s_grid::<f64>(n, points);
    let sweep = run_sweep_s(n, &s_grid, &SweepConfig::with_grid(grid))?;
    let (s_star, _): (f64, f64) = optimal_s(n)?;
    let cell = 1.0 / f64::from(n * n) / (points + 1) as f64;
    let within_one_cell = (sweep.argmax_s - s_star).abs() <= cell;
    let results = SweepResults {
        argmax_s: sweep.argmax_s,
        s_star,
        cell,
        within_one_cell,
        unimodal: sweep.unimodal,
        analytic_unimodal: sweep.analytic_unimodal,
        rows: sweep.rows,
    };
    let pass = within_one_cell && results.unimodal;
    Ok(Report::new("sweep-s", SweepParams { n, points, grid }, results, pass))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyParams {
    pub n_max: u32,
    pub grid: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub mc_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub n: u32,
    pub s_star: String,
    pub pinching: f64,
    pub analytic_pinching: String,
    pub pinching_ok: bool,
    /// `None` for `n = 1`, where the interior critical point sits on the boundary.
    pub chain_decreasing: Option<bool>,
    pub berger_max_abs_z: f64,
    pub berger_max_rel_error: f64,
    pub berger_ok: bool,
    pub scalar_bracket: (String, String),
    pub bracket_ok: bool,
    pub limit_weights: (f64, f64),
    pub limits_ok: bool,
    pub pass: bool,
}

fn fiber_points(n_extra: f64) -> Vec<ChartPoint<f64>> {
    [(0.0, 0.0), (0.0, 1.0), (0.0, 3.0), (n_extra, 0.5)]
        .iter()
        .map(|&(a, b)| ChartPoint::from_parts(&[(a, 0.0), (b, 0.0)]).expect("finite coordinates"))
        .collect()
}

fn verify_row(n: u32, grid: usize, mc: &SphereSampleConfig, tol: f64, mc_tol: f64) -> Result<VerifyRow, CliError> {
    let (q, p): (Rational, Rational) = optimal_s(n)?;
    let s = field_to_f64(&q);
    let analytic = field_to_f64(&p);
    let params = HitchinParams::new(n, s)?;
    let report = sweep_fiber(&params, &SweepConfig::with_grid(grid))?;
    let pinching_ok = within(report.pinching, analytic, tol) && report.converged;
    let chain_decreasing = (n >= 2).then(|| case_bounds(n, &q).map(|c| c.strictly_decreasing)).transpose()?;

    let model = MetricModel::Hitchin(params);
    let rows = berger_vs_trace(&model, &fiber_points(0.5), mc)?;
    let berger_max_abs_z = rows.iter().map(|r| r.zscore.abs()).fold(0.0, f64::max);
    let berger_max_rel_error =
        rows.iter().map(|r| (r.estimate - r.trace_tau).abs() / r.trace_tau.abs()).fold(0.0, f64::max);
    let berger_ok = berger_max_abs_z < 3.0 && berger_max_rel_error <= mc_tol;

    let (lo, hi) = scalar_bounds(n, &q)?;
    let bracket_ok =
        (lo.clone(), hi.clone()) == scalar_bounds_at_optimum(n) && rows.iter().all(|r| r.in_bracket == Some(true));

    let exact = extremal_weights_at_optimum(n);
    let limit = stationary_weights(&FiberState::at_infinity(n, q.clone())?);
    let w = &report.argmin.weights;
    let limits_ok = limit == exact
        && report.argmin.t == Some(1.0)
        && (w[0] - field_to_f64(&exact.a)).abs() <= 1e-3
        && (w[1] - field_to_f64(&exact.b)).abs() <= 1e-3;

    let pass = pinching_ok && chain_decreasing != Some(false) && berger_ok && bracket_ok && limits_ok;
    Ok(VerifyRow {
        n,
        s_star: q.to_string(),
        pinching: report.pinching,
        analytic_pinching: p.to_string(),
        pinching_ok,
        chain_decreasing,
        berger_max_abs_z,
        berger_max_rel_error,
        berger_ok,
        scalar_bracket: (lo.to_string(), hi.to_string()),
        bracket_ok,
        limit_weights: (w[0], w[1]),
        limits_ok,
        pass,
    })
}

pub fn verify(
    n_max: u32,
    grid: usize,
    samples: usize,
    seed: u64,
    tol: f64,
    mc_tol: f64,
) -> Result<Report<VerifyParams, Vec<VerifyRow>>, CliError> {
    let mc = SphereSampleConfig { sample_count: samples, seed, antithetic: false };
    let rows = (1..=n_max).map(|n| verify_row(n, grid, &mc, tol, mc_tol)).collect::<Result<Vec<_>, _>>()?;
    let pass = rows.iter().all(|r| r.pass);
    Ok(Report::new("verify", VerifyParams { n_max, grid, samples, seed, tol, mc_tol }, rows, pass))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BergerParams {
    pub model: MetricModel<f64>,
    pub points: usize,
    pub samples: usize,
    pub seed: u64,
    pub antithetic: bool,
}

pub fn berger(
    model: &str,
    points: usize,
    samples: usize,
    seed: u64,
    antithetic: bool,
) -> Result<Report<BergerParams, Vec<BergerRow<f64>>>, CliError> {
    let (model, _) = parse_model(model)?;
    let pts = sample_points::<f64>(model.dimension(), points);
    let cfg = SphereSampleConfig { sample_count: samples, seed, antithetic };
    let rows = berger_vs_trace(&model, &pts, &cfg)?;
    let pass = rows.iter().all(|r| r.zscore.abs() < 3.0 && r.in_bracket != Some(false));
    Ok(Report::new("berger", BergerParams { model, points, samples, seed, antithetic }, rows, pass))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductParams {
    pub left: MetricModel<f64>,
    pub right: MetricModel<f64>,
    pub grid: usize,
    pub tol: f64,
}

pub fn product(
    left: &str,
    right: &str,
    grid: usize,
    tol: f64,
) -> Result<Report<ProductParams, ProductReport<f64>>, CliError> {
    let (left, _) = parse_model(left)?;
    let (right, _) = parse_model(right)?;
    let report = verify_product_numeric(&left, &right, grid, tol)?;
    let pass = report.agree;
    Ok(Report::new("product", ProductParams { left, right, grid, tol }, report, pass))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureParams {
    pub model: MetricModel<f64>,
    pub point: ChartPoint<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureResults {
    pub metric: HermitianMatrix<f64>,
    pub curvature: CurvatureTensor<f64>,
    pub ricci: HermitianMatrix<f64>,
    /// Eigenvalues of the Ricci form relative to the metric.
    pub ricci_eigenvalues: Vec<f64>,
    pub scalar: f64,
    pub min_k: f64,
    pub max_k: f64,
    pub symmetry_residual: f64,
    pub kahler_residual: f64,
}

pub fn curvature(model: &str, point: &str) -> Result<Report<CurvatureParams, CurvatureResults>, CliError> {
    let (model, _) = parse_model(model)?;
    let point = parse_point(point)?;
    let jet = model.metric_jet(&point)?;
    let r = curvature_tensor(&jet)?;
    let ric = ricci(&r, &jet.g)?;
    let frame = unitary_frame(&jet.g)?;
    // F* conj(Ric) F is the conjugate of the Ricci form in a g-unitary frame;
    // conjugation leaves the spectrum alone.
    let ric_frame = frame.adjoint().matmul(&conj(ric.matrix())).matmul(&frame);
    let ricci_eigenvalues = HermitianMatrix::new(ric_frame)?.eigenvalues();
    let ext = extremize_direction(&r, &jet.g, &DirectionSearch::default())?;
    let sym = check_symmetries(&r, &jet);
    let results = CurvatureResults {
        scalar: scalar_curvature(&r, &jet.g)?,
        metric: jet.g.clone(),
        ricci: ric,
        ricci_eigenvalues,
        min_k: ext.min.value,
        max_k: ext.max.value,
        symmetry_residual: sym.max_relative_curvature_residual(),
        kahler_residual: sym.kahler,
        curvature: r,
    };
    let pass = ext.min.converged && ext.max.converged;
    Ok(Report::new("curvature", CurvatureParams { model, point }, results, pass))
}

fn conj(m: &CMatrix<f64>) -> CMatrix<f64> {
    CMatrix::from_fn(m.dim(), |i, j| m[(i, j)].conj())
}

#[derive(Serialize)]
struct BergerCsv {
    point: String,
    estimate: f64,
    stderr: f64,
    trace_tau: f64,
    zscore: f64,
}

#[derive(Serialize)]
struct ProductCsv {
    c_m: f64,
    c_n: f64,
    k: f64,
    y_star: f64,
    lower: f64,
    upper: f64,
    min_k: f64,
    max_k: f64,
    pinching: f64,
    agree: bool,
}

#[derive(Serialize)]
struct VerifyCsv {
    n: u32,
    s_star: String,
    pinching: f64,
    analytic_pinching: String,
    chain_decreasing: Option<bool>,
    berger_max_abs_z: f64,
    bracket_low: String,
    bracket_high: String,
    weight_a: f64,
    weight_b: f64,
    pass: bool,
}

#[derive(Serialize)]
struct TensorCsv {
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    re: f64,
    im: f64,
}

fn emit<P: Serialize, R: Serialize, S: Serialize>(
    format: Format,
    report: &Report<P, R>,
    rows: impl FnOnce(&R) -> Vec<S>,
) -> Result<Outcome, CliError> {
    let body = match format {
        Format::Json => encode_json(report)?,
        Format::Csv => encode_csv(rows(&report.results))?,
    };
    Ok(Outcome { body, pass: report.pass })
}

pub(crate) fn dispatch(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = cfg.format;
    match &cfg.command {
        Command::Pinch { n, s, grid, tol } => {
            emit(f, &pinch(*n, s.as_deref(), *grid, *tol)?, |r| r.report.profile.clone())
        }
        Command::SweepS { n, points, grid } => emit(f, &sweep_s(*n, *points, *grid)?, |r| r.rows.clone()),
        Command::Verify { n, grid, samples, seed, tol, mc_tol } => {
            emit(f, &verify(*n, *grid, *samples, *seed, *tol, *mc_tol)?, |rows| {
                rows.iter()
                    .map(|r| VerifyCsv {
                        n: r.n,
                        s_star: r.s_star.clone(),
                        pinching: r.pinching,
                        analytic_pinching: r.analytic_pinching.clone(),
                        chain_decreasing: r.chain_decreasing,
                        berger_max_abs_z: r.berger_max_abs_z,
                        bracket_low: r.scalar_bracket.0.clone(),
                        bracket_high: r.scalar_bracket.1.clone(),
                        weight_a: r.limit_weights.0,
                        weight_b: r.limit_weights.1,
                        pass: r.pass,
                    })
                    .collect()
            })
        }
        Command::Berger { model, points, samples, seed, antithetic } => {
            emit(f, &berger(model, *points, *samples, *seed, *antithetic)?, |rows| {
                rows.iter()
                    .map(|r| BergerCsv {
                        point: format_point(&r.point),
                        estimate: r.estimate,
                        stderr: r.stderr,
                        trace_tau: r.trace_tau,
                        zscore: r.zscore,
                    })
                    .collect()
            })
        }
        Command::Product { left, right, grid, tol } => emit(f, &product(left, right, *grid, *tol)?, |r| {
            vec![ProductCsv {
                c_m: r.input.c_m,
                c_n: r.input.c_n,
                k: r.input.k,
                y_star: r.bounds.y_star,
                lower: r.bounds.lower,
                upper: r.bounds.upper,
                min_k: r.min_k,
                max_k: r.max_k,
                pinching: r.pinching,
                agree: r.agree,
            }]
        }),
        Command::Curvature { model, point } => emit(f, &curvature(model, point)?, |r| {
            let m = r.curvature.dim();
            let mut rows = Vec::with_capacity(m.pow(4));
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        for l in 0..m {
                            let v = r.curvature.get(i, j, k, l);
                            rows.push(TensorCsv { i, j, k, l, re: v.re, im: v.im });
                        }
                    }
                }
            }
            rows
        }),
    }
}
