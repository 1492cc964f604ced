//! Numerical extremization of holomorphic sectional curvature, independent
//! of the closed forms in [`crate::hirzebruch`].
//!
//! Directions are searched on the unit sphere of a unitary frame. Since
//! `K(λξ) = K(ξ)`, only the lines through the origin matter; they are
//! parametrized by `m − 1` amplitude angles and `m − 1` relative phases,
//! scanned on a coarse grid and refined by downhill simplex followed by
//! golden-section polishing along each parameter.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{curvature_tensor, ricci, ChartPoint, CurvatureTensor, HermitianMatrix, TangentVector, Tensor4};
use crate::hirzebruch::{coefficients, pinching as analytic_pinching, FiberState};
use crate::linalg::CMatrix;
use crate::models::{HitchinParams, MetricModel};
use crate::optimize::{golden_section, nelder_mead, SimplexOptions};
use crate::scalar::{c, czero, Real, C};

/// Tuning of the per-point direction search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionSearch<T> {
    /// Value tolerance of the simplex and step tolerance of golden section.
    pub tol: T,
    /// Bound on the projected-gradient norm relative to `max(1, |K|)`.
    pub residual_tol: T,
    pub max_iter: usize,
    /// Amplitude-angle samples on `[0, π/2]` (two-dimensional case).
    pub amplitude_grid: usize,
    /// Phase samples on `[0, 2π)` (two-dimensional case).
    pub phase_grid: usize,
}

impl<T: Real> Default for DirectionSearch<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-9), residual_tol: T::lit(1e-6), max_iter: 200, amplitude_grid: 33, phase_grid: 16 }
    }
}

/// One extremal direction at a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionExtremum<T> {
    pub value: T,
    /// Unit vector in the unitary frame.
    pub frame_direction: Vec<C<T>>,
    /// The same direction in the coordinate frame `∂/∂z_i`.
    pub direction: TangentVector<T>,
    /// `|c_i|²` of the frame direction; sums to one.
    pub weights: Vec<T>,
    /// Norm of the sphere-projected gradient of `K` (the Lagrange residual).
    pub residual: T,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionExtrema<T> {
    pub min: DirectionExtremum<T>,
    pub max: DirectionExtremum<T>,
}

/// Frame whose columns `e_a = Σ_p F_pa ∂_p` are `g`-unitary, i.e.
/// `Fᵀ g F̄ = I`. With `g = LL*` this is the conjugate of `(L*)⁻¹`.
pub fn unitary_frame<T: Real>(g: &HermitianMatrix<T>) -> Result<CMatrix<T>> {
    let degenerate =
        || Error::DegenerateMetric { min_eigenvalue: g.eigenvalues().first().copied().unwrap_or(T::zero()).as_f64() };
    let l = g.matrix().cholesky().ok_or_else(degenerate)?;
    let inv = l.adjoint().inverse().ok_or_else(degenerate)?;
    Ok(CMatrix::from_fn(inv.dim(), |i, j| inv[(i, j)].conj()))
}

fn unit_from_angles<T: Real>(m: usize, x: &[T]) -> Vec<C<T>> {
    let (theta, phi) = x.split_at(m - 1);
    let mut u = Vec::with_capacity(m);
    let mut tail = T::one();
    for i in 0..m {
        let amp = if i + 1 < m { tail * theta[i].cos() } else { tail };
        if i + 1 < m {
            tail *= theta[i].sin();
        }
        let phase = if i == 0 { T::zero() } else { phi[i - 1] };
        u.push(Complex::from_polar(amp, phase));
    }
    u
}

fn frame_k<T: Real>(rt: &CurvatureTensor<T>, u: &[C<T>]) -> T {
    T::lit(2.0) * rt.quartic(u).re
}

/// `2|∂K/∂ū|` at a unit frame vector, `∂K/∂ū_j = 4(Σ R_{ijkl} u_i u_k ū_l − N u_j)`.
fn sphere_gradient_norm<T: Real>(rt: &CurvatureTensor<T>, u: &[C<T>]) -> T {
    let m = u.len();
    let quart = rt.quartic(u);
    let mut norm2 = T::zero();
    for j in 0..m {
        let mut acc = czero::<T>();
        for i in 0..m {
            for k in 0..m {
                for l in 0..m {
                    acc += rt.get(i, j, k, l) * u[i] * u[k] * u[l].conj();
                }
            }
        }
        let grad = (acc - quart * u[j]).scale(T::lit(4.0));
        norm2 += grad.norm_sqr();
    }
    T::lit(2.0) * norm2.sqrt()
}

fn grid_axes<T: Real>(m: usize, cfg: &DirectionSearch<T>) -> (Vec<T>, Vec<T>) {
    let (na, np) = if m == 2 {
        (cfg.amplitude_grid.max(3), cfg.phase_grid.max(1))
    } else {
        let dims = 2 * (m - 1) as i32;
        let k = (20_000f64.powf(1.0 / f64::from(dims)).floor() as usize).clamp(3, cfg.amplitude_grid.max(3));
        (k, k)
    };
    let half_pi = T::FRAC_PI_2();
    let amps = (0..na).map(|i| half_pi * T::lit(i as f64) / T::lit((na - 1) as f64)).collect();
    let phases = (0..np).map(|i| T::TAU() * T::lit(i as f64) / T::lit(np as f64)).collect();
    (amps, phases)
}

struct Refined<T> {
    x: Vec<T>,
    value: T,
    iterations: usize,
}

/// Minimizes `sign·K` starting from a grid point.
fn refine<T: Real>(rt: &CurvatureTensor<T>, x0: &[T], spacing: T, sign: T, cfg: &DirectionSearch<T>) -> Refined<T> {
    let m = rt.dim();
    let obj = |x: &[T]| sign * frame_k(rt, &unit_from_angles(m, x));
    let opts = SimplexOptions { ftol: cfg.tol, xtol: cfg.tol.sqrt(), max_iter: cfg.max_iter };
    let nm = nelder_mead(obj, x0, spacing * T::lit(0.5), opts);
    let mut x = nm.x;
    let mut value = nm.value;
    let mut iterations = nm.iterations;
    let width = spacing * T::lit(0.25);
    for _pass in 0..2 {
        for coord in 0..x.len() {
            let centre = x[coord];
            let mut trial = x.clone();
            let g = golden_section(
                |v| {
                    trial[coord] = v;
                    obj(&trial)
                },
                centre - width,
                centre + width,
                cfg.tol,
                cfg.max_iter,
            );
            iterations += g.iterations;
            if g.value < value {
                value = g.value;
                x[coord] = g.x;
            }
        }
    }
    Refined { x, value: sign * value, iterations }
}

fn finish<T: Real>(
    rt: &CurvatureTensor<T>,
    x: &[T],
    value: T,
    iterations: usize,
    cfg: &DirectionSearch<T>,
) -> DirectionExtremum<T> {
    let m = rt.dim();
    let u = if m == 1 { vec![c(T::one(), T::zero())] } else { unit_from_angles(m, x) };
    let residual = sphere_gradient_norm(rt, &u);
    let converged = residual <= cfg.residual_tol * value.abs().max(T::one());
    DirectionExtremum {
        value,
        weights: u.iter().map(|z| z.norm_sqr()).collect(),
        direction: TangentVector::new(u.clone()),
        frame_direction: u,
        residual,
        converged,
        iterations,
    }
}

/// Extrema of `K` over unit directions for a tensor already expressed in a
/// unitary frame (`g = I`).
pub fn extremize_frame_direction<T: Real>(rt: &CurvatureTensor<T>, cfg: &DirectionSearch<T>) -> DirectionExtrema<T> {
    let m = rt.dim();
    if m == 1 {
        let value = T::lit(2.0) * rt.get(0, 0, 0, 0).re;
        let e = finish(rt, &[], value, 0, cfg);
        return DirectionExtrema { min: e.clone(), max: e };
    }
    let (amps, phases) = grid_axes(m, cfg);
    let dims = 2 * (m - 1);
    let radices: Vec<usize> = (0..dims).map(|d| if d < m - 1 { amps.len() } else { phases.len() }).collect();
    let total: usize = radices.iter().product();
    let mut best_min: (T, Vec<T>) = (T::infinity(), Vec::new());
    let mut best_max: (T, Vec<T>) = (T::neg_infinity(), Vec::new());
    let mut digits = vec![0usize; dims];
    for _ in 0..total {
        let x: Vec<T> = digits.iter().enumerate().map(|(d, &i)| if d < m - 1 { amps[i] } else { phases[i] }).collect();
        let k = frame_k(rt, &unit_from_angles(m, &x));
        if k < best_min.0 {
            best_min = (k, x.clone());
        }
        if k > best_max.0 {
            best_max = (k, x);
        }
        for d in 0..dims {
            digits[d] += 1;
            if digits[d] < radices[d] {
                break;
            }
            digits[d] = 0;
        }
    }
    let spacing = (amps[1] - amps[0]).max(if phases.len() > 1 { phases[1] - phases[0] } else { T::zero() });
    let lo = refine(rt, &best_min.1, spacing, T::one(), cfg);
    let hi = refine(rt, &best_max.1, spacing, -T::one(), cfg);
    // Refinement never reports worse than the grid.
    let (lo_x, lo_v) = if lo.value <= best_min.0 { (lo.x, lo.value) } else { (best_min.1, best_min.0) };
    let (hi_x, hi_v) = if hi.value >= best_max.0 { (hi.x, hi.value) } else { (best_max.1, best_max.0) };
    DirectionExtrema {
        min: finish(rt, &lo_x, lo_v, lo.iterations, cfg),
        max: finish(rt, &hi_x, hi_v, hi.iterations, cfg),
    }
}

/// Extrema of `K(ξ)` over the unit sphere of `(T_pM, g)`.
pub fn extremize_direction<T: Real>(
    r: &CurvatureTensor<T>,
    g: &HermitianMatrix<T>,
    cfg: &DirectionSearch<T>,
) -> Result<DirectionExtrema<T>> {
    if r.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: r.dim() });
    }
    let frame = unitary_frame(g)?;
    let rt = r.in_frame(&frame);
    let mut ext = extremize_frame_direction(&rt, cfg);
    for e in [&mut ext.min, &mut ext.max] {
        e.direction = TangentVector::new(frame.mul_vec(&e.frame_direction));
    }
    Ok(ext)
}

/// Curvature of `ω_s` at a point of the curve at infinity, in the unitary
/// frame: the limits of `α/2`, `β/8`, `γ/2` as `r → ∞`.
pub fn limit_frame_curvature<T: Real>(n: u32, s: T) -> Result<CurvatureTensor<T>> {
    let (alpha, beta, gamma) = coefficients(&FiberState::at_infinity(n, s)?);
    Ok(frame_curvature_from_coefficients(alpha, beta, gamma))
}

fn frame_curvature_from_coefficients<T: Real>(alpha: T, beta: T, gamma: T) -> CurvatureTensor<T> {
    let mut r = Tensor4::zeros(2);
    let mixed = c(beta / T::lit(8.0), T::zero());
    r[(0, 0, 0, 0)] = c(alpha / T::lit(2.0), T::zero());
    r[(1, 1, 1, 1)] = c(gamma / T::lit(2.0), T::zero());
    for idx in [(0, 0, 1, 1), (1, 1, 0, 0), (0, 1, 1, 0), (1, 0, 0, 1)] {
        r[idx] = mixed;
    }
    CurvatureTensor { components: r }
}

/// `t = r/(1+r)` back to `r`.
fn radius_of<T: Real>(t: T) -> T {
    t / (T::one() - t)
}

/// Point `(0, √r)` on the fiber `z₁ = 0` for `t < 1`.
pub fn fiber_point<T: Real>(t: T) -> ChartPoint<T> {
    ChartPoint { coords: vec![czero(), c(radius_of(t).sqrt(), T::zero())] }
}

/// Curvature data at fiber parameter `t ∈ [0, 1]`: the coordinate-frame
/// tensor and metric for `t < 1`, the unitary-frame limit at `t = 1`.
pub fn fiber_curvature<T: Real>(params: &HitchinParams<T>, t: T) -> Result<(CurvatureTensor<T>, HermitianMatrix<T>)> {
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::InvalidParameter(format!("fiber parameter t = {t} outside [0, 1]")));
    }
    if t == T::one() {
        return Ok((limit_frame_curvature(params.n, params.s)?, HermitianMatrix::identity(2)));
    }
    let model = MetricModel::Hitchin(params.clone());
    let jet = model.metric_jet(&fiber_point(t))?;
    Ok((curvature_tensor(&jet)?, jet.g))
}

/// Eigenvalues of the Ricci form relative to the metric at fiber parameter
/// `t`, ascending.
pub fn fiber_ricci_eigenvalues<T: Real>(params: &HitchinParams<T>, t: T) -> Result<Vec<T>> {
    let (r, g) = fiber_curvature(params, t)?;
    let frame = unitary_frame(&g)?;
    let rt = r.in_frame(&frame);
    Ok(ricci(&rt, &HermitianMatrix::identity(2))?.eigenvalues())
}

fn extrema_at_t<T: Real>(params: &HitchinParams<T>, t: T, cfg: &DirectionSearch<T>) -> Result<DirectionExtrema<T>> {
    let (r, g) = fiber_curvature(params, t)?;
    extremize_direction(&r, &g, cfg)
}

/// Location and direction of a global extremum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremizer<T> {
    /// Fiber parameter `t = r/(1+r)`, when the search ran along a fiber.
    pub t: Option<T>,
    /// Chart point; `None` on the curve at infinity.
    pub point: Option<ChartPoint<T>>,
    pub value: T,
    pub weights: Vec<T>,
    pub frame_direction: Vec<C<T>>,
    pub residual: T,
    pub converged: bool,
}

impl<T: Real> Extremizer<T> {
    fn from_direction(t: Option<T>, point: Option<ChartPoint<T>>, e: &DirectionExtremum<T>) -> Self {
        Self {
            t,
            point,
            value: e.value,
            weights: e.weights.clone(),
            frame_direction: e.frame_direction.clone(),
            residual: e.residual,
            converged: e.converged,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodInfo<T> {
    pub grid: usize,
    pub amplitude_grid: usize,
    pub phase_grid: usize,
    pub refinement_iterations: usize,
    pub tol: T,
    pub residual_tol: T,
}

/// `(t, min_K at t, max_K at t)`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberSample<T> {
    pub t: T,
    pub min_k: T,
    pub max_k: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PinchingReport<T> {
    pub min_k: T,
    pub max_k: T,
    pub pinching: T,
    pub argmin: Extremizer<T>,
    pub argmax: Extremizer<T>,
    pub method: MethodInfo<T>,
    /// Larger of the two extremizers' Lagrange residuals.
    pub lagrange_residual: T,
    pub converged: bool,
    pub profile: Vec<FiberSample<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig<T> {
    /// Number of intervals on `t ∈ [0, 1]`; `grid + 1` samples including `t = 1`.
    pub grid: usize,
    pub direction: DirectionSearch<T>,
}

impl<T: Real> Default for SweepConfig<T> {
    fn default() -> Self {
        Self { grid: 512, direction: DirectionSearch::default() }
    }
}

impl<T: Real> SweepConfig<T> {
    pub fn with_grid(grid: usize) -> Self {
        Self { grid, ..Self::default() }
    }
}

/// Golden-section refinement of the per-point extremum in `t`, restricted to
/// the neighbouring grid cells. Returns `(t, value, iterations)`.
fn refine_t<T: Real>(
    params: &HitchinParams<T>,
    ts: &[T],
    idx: usize,
    sign: T,
    cfg: &DirectionSearch<T>,
) -> (T, T, usize) {
    // Past the last finite sample the coordinate jets lose precision, and the
    // limit at t = 1 is already exact.
    let last_finite = ts.len() - 2;
    if idx > last_finite {
        return (ts[idx], T::nan(), 0);
    }
    let lo = ts[idx.saturating_sub(1)];
    let hi = ts[(idx + 1).min(last_finite)];
    let g = golden_section(
        |t| match extrema_at_t(params, t, cfg) {
            Ok(e) => sign * if sign > T::zero() { e.min.value } else { e.max.value },
            Err(_) => T::infinity(),
        },
        lo,
        hi,
        cfg.tol,
        cfg.max_iter,
    );
    (g.x, sign * g.value, g.iterations)
}

/// Extremizes `K` along the fiber `z₁ = 0` of `(F_n, ω_s)`, including the
/// exact limit state at `t = 1`.
pub fn sweep_fiber<T: Real>(params: &HitchinParams<T>, cfg: &SweepConfig<T>) -> Result<PinchingReport<T>> {
    params.check_positive()?;
    if cfg.grid < 2 {
        return Err(Error::InvalidParameter("fiber grid must have at least 2 intervals".into()));
    }
    let dcfg = &cfg.direction;
    let ts: Vec<T> = (0..=cfg.grid).map(|i| T::lit(i as f64) / T::lit(cfg.grid as f64)).collect();
    let samples: Vec<DirectionExtrema<T>> =
        ts.par_iter().map(|&t| extrema_at_t(params, t, dcfg)).collect::<Result<Vec<_>>>()?;

    let mut imin = 0;
    let mut imax = 0;
    for (i, e) in samples.iter().enumerate() {
        if e.min.value < samples[imin].min.value {
            imin = i;
        }
        if e.max.value > samples[imax].max.value {
            imax = i;
        }
    }

    // Ties within tolerance go to the largest t, so a plateau that reaches the
    // curve at infinity is reported there.
    let near = |v: T, best: T| (v - best).abs() <= dcfg.tol * best.abs().max(T::one());
    let best_min = samples[imin].min.value;
    let best_max = samples[imax].max.value;
    imin = (0..samples.len()).rev().find(|&i| near(samples[i].min.value, best_min)).unwrap_or(imin);
    imax = (0..samples.len()).rev().find(|&i| near(samples[i].max.value, best_max)).unwrap_or(imax);

    let location = |t: T| if t < T::one() { Some(fiber_point(t)) } else { None };
    let mut iterations = 0;
    let mut argmin = Extremizer::from_direction(Some(ts[imin]), location(ts[imin]), &samples[imin].min);
    let (t_lo, v_lo, it) = refine_t(params, &ts, imin, T::one(), dcfg);
    iterations += it;
    if v_lo < argmin.value {
        let e = extrema_at_t(params, t_lo, dcfg)?;
        argmin = Extremizer::from_direction(Some(t_lo), location(t_lo), &e.min);
    }
    let mut argmax = Extremizer::from_direction(Some(ts[imax]), location(ts[imax]), &samples[imax].max);
    let (t_hi, v_hi, it) = refine_t(params, &ts, imax, -T::one(), dcfg);
    iterations += it;
    if v_hi > argmax.value {
        let e = extrema_at_t(params, t_hi, dcfg)?;
        argmax = Extremizer::from_direction(Some(t_hi), location(t_hi), &e.max);
    }
    iterations += samples.iter().map(|e| e.min.iterations + e.max.iterations).sum::<usize>();

    let profile =
        ts.iter().zip(&samples).map(|(&t, e)| FiberSample { t, min_k: e.min.value, max_k: e.max.value }).collect();
    Ok(PinchingReport {
        min_k: argmin.value,
        max_k: argmax.value,
        pinching: argmin.value / argmax.value,
        lagrange_residual: argmin.residual.max(argmax.residual),
        converged: argmin.converged && argmax.converged,
        argmin,
        argmax,
        method: MethodInfo {
            grid: cfg.grid,
            amplitude_grid: dcfg.amplitude_grid,
            phase_grid: dcfg.phase_grid,
            refinement_iterations: iterations,
            tol: dcfg.tol,
            residual_tol: dcfg.residual_tol,
        },
        profile,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid2dConfig<T> {
    /// Radii of `z₁` sampled uniformly on `[0, 2]`.
    pub radial: usize,
    /// Angles of `z₁` per nonzero radius.
    pub angular: usize,
    /// Fiber samples `t = k/t_points`, `k < t_points`.
    pub t_points: usize,
    pub direction: DirectionSearch<T>,
}

impl<T: Real> Default for Grid2dConfig<T> {
    fn default() -> Self {
        Self { radial: 5, angular: 6, t_points: 24, direction: DirectionSearch::default() }
    }
}

/// Extrema along `z₁ = 0` against extrema over a polar grid in `z₁`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid2dReport<T> {
    pub fiber_min: T,
    pub fiber_max: T,
    pub grid_min: T,
    pub grid_max: T,
    pub max_relative_difference: T,
    pub agree: bool,
    pub points: usize,
}

/// Checks that leaving the fiber `z₁ = 0` never changes the extrema, on a
/// polar grid `|z₁| ≤ 2` times the compactified `z₂` axis. Works for any
/// two-dimensional model.
pub fn grid_2d_verify<T: Real>(model: &MetricModel<T>, cfg: &Grid2dConfig<T>) -> Result<Grid2dReport<T>> {
    if model.dimension() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: model.dimension() });
    }
    if cfg.radial < 2 || cfg.angular < 1 || cfg.t_points < 2 {
        return Err(Error::InvalidParameter("grid_2d needs radial ≥ 2, angular ≥ 1, t_points ≥ 2".into()));
    }
    let mut z1s = vec![czero::<T>()];
    for j in 1..cfg.radial {
        let rho = T::lit(2.0) * T::lit(j as f64) / T::lit((cfg.radial - 1) as f64);
        for k in 0..cfg.angular {
            let ang = T::TAU() * T::lit(k as f64) / T::lit(cfg.angular as f64);
            z1s.push(Complex::from_polar(rho, ang));
        }
    }
    let ts: Vec<T> = (0..cfg.t_points).map(|k| T::lit(k as f64) / T::lit(cfg.t_points as f64)).collect();
    let points: Vec<(bool, ChartPoint<T>)> = z1s
        .iter()
        .enumerate()
        .flat_map(|(i, &z1)| {
            ts.iter().map(move |&t| (i == 0, ChartPoint { coords: vec![z1, c(radius_of(t).sqrt(), T::zero())] }))
        })
        .collect();
    let results: Vec<(bool, T, T)> = points
        .par_iter()
        .map(|(on_fiber, p)| {
            let jet = model.metric_jet(p)?;
            let r = curvature_tensor(&jet)?;
            let e = extremize_direction(&r, &jet.g, &cfg.direction)?;
            Ok((*on_fiber, e.min.value, e.max.value))
        })
        .collect::<Result<Vec<_>>>()?;
    let fold = |only_fiber: bool| {
        results
            .iter()
            .filter(|(f, _, _)| *f || !only_fiber)
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &(_, a, b)| (lo.min(a), hi.max(b)))
    };
    let (fiber_min, fiber_max) = fold(true);
    let (grid_min, grid_max) = fold(false);
    let rel = |a: T, b: T| (a - b).abs() / b.abs().max(T::min_positive_value());
    let diff = rel(grid_min, fiber_min).max(rel(grid_max, fiber_max));
    Ok(Grid2dReport {
        fiber_min,
        fiber_max,
        grid_min,
        grid_max,
        max_relative_difference: diff,
        agree: diff <= T::lit(1e-3),
        points: results.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SRow<T> {
    pub s: T,
    pub pinching: T,
    pub analytic_pinching: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SSweep<T> {
    pub n: u32,
    pub rows: Vec<SRow<T>>,
    pub argmax_index: usize,
    pub argmax_s: T,
    pub unimodal: bool,
    pub analytic_unimodal: bool,
}

/// `points` uniform interior samples of `(0, 1/n²)`.
pub fn admissible_s_grid<T: Real>(n: u32, points: usize) -> Vec<T> {
    let upper = T::one() / T::lit(f64::from(n * n));
    (1..=points).map(|i| upper * T::lit(i as f64) / T::lit((points + 1) as f64)).collect()
}

fn is_unimodal<T: Real>(values: &[T], peak: usize) -> bool {
    values[..=peak].windows(2).all(|w| w[0] < w[1]) && values[peak..].windows(2).all(|w| w[0] > w[1])
}

/// Numerical pinching over a grid of `s` values via [`sweep_fiber`].
pub fn sweep_s<T: Real>(n: u32, s_grid: &[T], cfg: &SweepConfig<T>) -> Result<SSweep<T>> {
    if s_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let params: Vec<HitchinParams<T>> = s_grid
        .iter()
        .map(|&s| {
            let p = HitchinParams::new(n, s)?;
            p.check_positive()?;
            Ok(p)
        })
        .collect::<Result<_>>()?;
    let rows: Vec<SRow<T>> = params
        .par_iter()
        .map(|p| {
            let rep = sweep_fiber(p, cfg)?;
            Ok(SRow { s: p.s, pinching: rep.pinching, analytic_pinching: analytic_pinching(n, &p.s)? })
        })
        .collect::<Result<_>>()?;
    let mut argmax_index = 0;
    for (i, row) in rows.iter().enumerate() {
        if row.pinching > rows[argmax_index].pinching {
            argmax_index = i;
        }
    }
    let numeric: Vec<T> = rows.iter().map(|r| r.pinching).collect();
    let analytic: Vec<T> = rows.iter().map(|r| r.analytic_pinching).collect();
    let mut analytic_peak = 0;
    for (i, v) in analytic.iter().enumerate() {
        if *v > analytic[analytic_peak] {
            analytic_peak = i;
        }
    }
    Ok(SSweep {
        n,
        argmax_s: rows[argmax_index].s,
        unimodal: is_unimodal(&numeric, argmax_index),
        analytic_unimodal: is_unimodal(&analytic, analytic_peak),
        argmax_index,
        rows,
    })
}
