//! Monte Carlo average of holomorphic sectional curvature over the metric
//! unit sphere, compared against the traced scalar curvature.
//!
//! Uniform samples on the `g`-unit sphere are Gaussian vectors, normalized
//! and pushed through a `g`-orthonormal frame. Sampling runs in fixed-size
//! batches, each with its own ChaCha stream, and per-batch statistics are
//! merged by a fixed pairwise tree, so the estimate depends only on the seed.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    curvature_tensor, holomorphic_sectional_curvature, scalar_curvature, ChartPoint, HermitianMatrix, TangentVector,
};
use crate::hirzebruch::min_max_hsc;
use crate::linalg::CMatrix;
use crate::models::MetricModel;
use crate::pinch::unitary_frame;
use crate::scalar::{Real, C};

const BATCH: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereSampleConfig {
    pub sample_count: usize,
    pub seed: u64,
    /// Pair each sample with its image under a cyclic shift of the frame
    /// coordinates. The shift is unitary, so both halves stay uniform.
    pub antithetic: bool,
}

impl Default for SphereSampleConfig {
    fn default() -> Self {
        Self { sample_count: 100_000, seed: 0, antithetic: false }
    }
}

/// Columns form a `g`-orthonormal basis: `Σ g_{pq̄} F_pa F̄_qb = δ_ab`.
pub fn orthonormal_frame<T: Real>(g: &HermitianMatrix<T>) -> Result<CMatrix<T>> {
    unitary_frame(g)
}

#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    fn merge(a: Self, b: Self) -> Self {
        if a.count == 0.0 {
            return b;
        }
        if b.count == 0.0 {
            return a;
        }
        let count = a.count + b.count;
        let d = b.mean - a.mean;
        Self { count, mean: a.mean + d * b.count / count, m2: a.m2 + b.m2 + d * d * a.count * b.count / count }
    }
}

fn pairwise(items: &[Moments]) -> Moments {
    match items.len() {
        0 => Moments::default(),
        1 => items[0],
        len => {
            let (a, b) = items.split_at(len / 2);
            Moments::merge(pairwise(a), pairwise(b))
        }
    }
}

fn gaussian_unit<T: Real>(rng: &mut ChaCha8Rng, m: usize) -> Vec<C<T>> {
    loop {
        let z: Vec<C<T>> = (0..m)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex::new(T::lit(re), T::lit(im))
            })
            .collect();
        let norm = z.iter().map(|w| w.norm_sqr()).sum::<T>().sqrt();
        if norm > T::zero() {
            return z.into_iter().map(|w| w / norm).collect();
        }
    }
}

/// `m(m+1)/4` times the sample mean of `K`, with its standard error.
pub fn berger_scalar<T: Real>(model: &MetricModel<T>, p: &ChartPoint<T>, cfg: &SphereSampleConfig) -> Result<(T, T)> {
    if cfg.sample_count < 2 {
        return Err(Error::InvalidParameter("need at least 2 sphere samples".into()));
    }
    let jet = model.metric_jet(p)?;
    let r = curvature_tensor(&jet)?;
    let frame = orthonormal_frame(&jet.g)?;
    let m = jet.dim();
    let draws = if cfg.antithetic { cfg.sample_count.div_ceil(2) } else { cfg.sample_count };
    let batches = draws.div_ceil(BATCH);
    let stats: Vec<Moments> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(b as u64);
            let len = BATCH.min(draws - b * BATCH);
            let mut acc = Moments::default();
            for _ in 0..len {
                let u = gaussian_unit::<T>(&mut rng, m);
                let k = |u: &[C<T>]| {
                    let xi = TangentVector::new(frame.mul_vec(u));
                    holomorphic_sectional_curvature(&r, &jet.g, &xi).map(T::as_f64)
                };
                let value = if cfg.antithetic {
                    let mut shifted = u.clone();
                    shifted.rotate_left(1);
                    0.5 * (k(&u)? + k(&shifted)?)
                } else {
                    k(&u)?
                };
                acc.push(value);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let total = pairwise(&stats);
    let factor = (m * (m + 1)) as f64 / 4.0;
    let variance = total.m2 / (total.count - 1.0);
    let stderr = (variance / total.count).sqrt();
    Ok((T::lit(factor * total.mean), T::lit(factor * stderr)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BergerRow<T> {
    pub point: ChartPoint<T>,
    pub estimate: T,
    pub stderr: T,
    pub trace_tau: T,
    pub zscore: T,
    /// `m(m+1)/4 · (min_K, max_K)` for Hitchin models.
    pub bracket: Option<(T, T)>,
    pub in_bracket: Option<bool>,
}

/// Monte Carlo estimate against the traced scalar curvature at each point.
pub fn berger_vs_trace<T: Real>(
    model: &MetricModel<T>,
    points: &[ChartPoint<T>],
    cfg: &SphereSampleConfig,
) -> Result<Vec<BergerRow<T>>> {
    let bracket = match model {
        MetricModel::Hitchin(h) => {
            let (lo, hi) = min_max_hsc(h.n, &h.s)?;
            let f = T::lit((model.dimension() * (model.dimension() + 1)) as f64 / 4.0);
            Some((f * lo, f * hi))
        }
        _ => None,
    };
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            // Independent samples per point.
            let point_cfg = SphereSampleConfig { seed: cfg.seed.wrapping_add(i as u64), ..cfg.clone() };
            let (estimate, stderr) = berger_scalar(model, p, &point_cfg)?;
            let jet = model.metric_jet(p)?;
            let trace_tau = scalar_curvature(&curvature_tensor(&jet)?, &jet.g)?;
            // Constant integrands leave only rounding noise in the standard error.
            let floor = T::lit(1e-12) * trace_tau.abs().max(T::one());
            let zscore = (estimate - trace_tau) / stderr.max(floor);
            let slack = T::lit(1e-9) * trace_tau.abs().max(T::one());
            Ok(BergerRow {
                point: p.clone(),
                estimate,
                stderr,
                trace_tau,
                zscore,
                bracket,
                in_bracket: bracket.map(|(lo, hi)| trace_tau >= lo - slack && trace_tau <= hi + slack),
            })
        })
        .collect()
}
