//! Holomorphic sectional curvature on Riemannian products `M × N`.
//!
//! For a unit direction `ξ = (ξ_M, ξ_N)` with `y = |ξ_M|²`, the mixed curvature
//! terms vanish and `K(ξ) = K_M(ξ_M)·y² + K_N(ξ_N)·(1 − y)²`. If both factors
//! satisfy `k·c ≤ K ≤ k` with the same `k`, minimizing over `y` gives the
//! product bounds below.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{curvature_tensor, ChartPoint};
use crate::models::MetricModel;
use crate::pinch::{extremize_direction, DirectionSearch};
use crate::scalar::{c, Real};

/// Factor pinching constants and their common upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductPinchInput<T> {
    pub c_m: T,
    pub c_n: T,
    pub k: T,
}

impl<T: Real> ProductPinchInput<T> {
    pub fn new(c_m: T, c_n: T, k: T) -> Result<Self> {
        let unit = |x: T| x > T::zero() && x <= T::one();
        if !unit(c_m) || !unit(c_n) {
            return Err(Error::InvalidParameter(format!("pinching constants must lie in (0, 1], got {c_m}, {c_n}")));
        }
        if !(k > T::zero()) || !k.is_finite() {
            return Err(Error::InvalidParameter(format!("upper bound k must be positive, got {k}")));
        }
        Ok(Self { c_m, c_n, k })
    }
}

/// `K_M·y² + K_N·(1 − y)²`.
pub fn product_hsc<T: Real>(k_m: T, k_n: T, y: T) -> Result<T> {
    if !(y >= T::zero() && y <= T::one()) {
        return Err(Error::InvalidParameter(format!("norm share y = {y} outside [0, 1]")));
    }
    let w = T::one() - y;
    Ok(k_m * y * y + k_n * w * w)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductBounds<T> {
    pub lower: T,
    pub upper: T,
    /// Minimizer of `k c_M y² + k c_N (1−y)²`.
    pub y_star: T,
    pub pinching: T,
}

/// `(k c_M c_N/(c_M + c_N), k, c_N/(c_M + c_N), c_M c_N/(c_M + c_N))`.
pub fn product_bounds<T: Real>(input: &ProductPinchInput<T>) -> Result<ProductBounds<T>> {
    let ProductPinchInput { c_m, c_n, k } = ProductPinchInput::new(input.c_m, input.c_n, input.k)?;
    let sum = c_m + c_n;
    let pinching = c_m * c_n / sum;
    Ok(ProductBounds { lower: k * pinching, upper: k, y_star: c_n / sum, pinching })
}

/// Pointwise extrema of a factor, reduced over a sample set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorCurvature<T> {
    pub min_k: T,
    pub max_k: T,
    pub pinching: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductReport<T> {
    pub left: FactorCurvature<T>,
    pub right: FactorCurvature<T>,
    pub input: ProductPinchInput<T>,
    pub bounds: ProductBounds<T>,
    pub min_k: T,
    pub max_k: T,
    pub pinching: T,
    pub lagrange_residual: T,
    pub converged: bool,
    pub points: usize,
    /// Measured extrema match [`product_bounds`] within the tolerance.
    pub agree: bool,
}

/// `count` deterministic chart points of a factor, starting at the origin and
/// spiralling out to `|z_i| ≤ 2`.
pub fn sample_points<T: Real>(dim: usize, count: usize) -> Vec<ChartPoint<T>> {
    (0..count)
        .map(|i| {
            let rho = T::lit(2.0 * i as f64 / count.max(2) as f64);
            let coords = (0..dim)
                .map(|k| {
                    let ang = T::lit(2.399_963 * (i * (k + 1)) as f64 + k as f64);
                    let r = rho / T::lit((k + 1) as f64);
                    c(r * ang.cos(), r * ang.sin())
                })
                .collect();
            ChartPoint { coords }
        })
        .collect()
}

fn extrema_over<T: Real>(
    model: &MetricModel<T>,
    points: &[ChartPoint<T>],
    cfg: &DirectionSearch<T>,
) -> Result<(T, T, T, bool)> {
    let per_point: Vec<(T, T, T, bool)> = points
        .par_iter()
        .map(|p| {
            let jet = model.metric_jet(p)?;
            let e = extremize_direction(&curvature_tensor(&jet)?, &jet.g, cfg)?;
            Ok((e.min.value, e.max.value, e.min.residual.max(e.max.residual), e.min.converged && e.max.converged))
        })
        .collect::<Result<_>>()?;
    Ok(per_point
        .iter()
        .fold((T::infinity(), T::neg_infinity(), T::zero(), true), |(lo, hi, res, ok), &(a, b, r, c)| {
            (lo.min(a), hi.max(b), res.max(r), ok && c)
        }))
}

fn factor_curvature<T: Real>(
    model: &MetricModel<T>,
    grid: usize,
    cfg: &DirectionSearch<T>,
) -> Result<FactorCurvature<T>> {
    let (min_k, max_k, _, _) = extrema_over(model, &sample_points(model.dimension(), grid), cfg)?;
    if !(min_k > T::zero()) {
        return Err(Error::InvalidParameter(format!("factor curvature not positive on the sample set (min {min_k})")));
    }
    Ok(FactorCurvature { min_k, max_k, pinching: min_k / max_k })
}

/// Measures `(c, k)` of each factor on `grid` sample points, enforces the
/// common bound `k` within `tol` (relative), and compares the product's
/// extrema over all `grid²` point pairs with [`product_bounds`].
pub fn verify_product_numeric<T: Real>(
    left: &MetricModel<T>,
    right: &MetricModel<T>,
    grid: usize,
    tol: T,
) -> Result<ProductReport<T>> {
    if grid < 1 {
        return Err(Error::EmptyGrid);
    }
    let cfg = DirectionSearch::default();
    let lf = factor_curvature(left, grid, &cfg)?;
    let rf = factor_curvature(right, grid, &cfg)?;
    if (lf.max_k - rf.max_k).abs() > tol * lf.max_k.max(rf.max_k) {
        return Err(Error::CommonBoundViolated { left_max: lf.max_k.as_f64(), right_max: rf.max_k.as_f64() });
    }
    let k = lf.max_k.max(rf.max_k);
    let input = ProductPinchInput::new(lf.min_k / k, rf.min_k / k, k)?;
    let bounds = product_bounds(&input)?;

    let product = MetricModel::product(left.clone(), right.clone());
    let lp = sample_points::<T>(left.dimension(), grid);
    let rp = sample_points::<T>(right.dimension(), grid);
    let pairs: Vec<ChartPoint<T>> = lp
        .iter()
        .flat_map(|a| rp.iter().map(move |b| ChartPoint { coords: [a.coords.clone(), b.coords.clone()].concat() }))
        .collect();
    let (min_k, max_k, lagrange_residual, converged) = extrema_over(&product, &pairs, &cfg)?;
    let close = |x: T, y: T| (x - y).abs() <= tol * y.abs().max(T::one());
    Ok(ProductReport {
        left: lf,
        right: rf,
        input,
        bounds,
        min_k,
        max_k,
        pinching: min_k / max_k,
        lagrange_residual,
        converged,
        points: pairs.len(),
        agree: close(min_k, bounds.lower) && close(max_k, bounds.upper),
    })
}
