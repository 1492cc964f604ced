//! Built-in Kähler metrics and their jets.
//!
//! Every model is given by a global potential `Φ = Σ c_p log P_p` with
//! polynomial kernels `P_p` in `z, z̄`. Analytic jets differentiate the
//! kernels exactly and expand the logarithm by the set-partition formula;
//! [`fd_metric_jet`] is an independent finite-difference oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ChartPoint, HermitianMatrix, MetricJet, Tensor3, Tensor4};
use crate::linalg::CMatrix;
use crate::polynomial::{log_derivative_at, Polynomial, Var};
use crate::scalar::{c, czero, Real, C};

/// Parameters `(n, s)` of the metric `ω_s` on the Hirzebruch surface `F_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HitchinParams<T> {
    pub n: u32,
    pub s: T,
    /// `(p, q)` with `s = p/q`, when `s` was supplied as an exact fraction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_rational: Option<(i64, i64)>,
}

impl<T: Real> HitchinParams<T> {
    pub fn new(n: u32, s: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("Hitchin model needs n ≥ 1; use the product model for n = 0".into()));
        }
        if !(s > T::zero()) || !s.is_finite() {
            return Err(Error::InvalidParameter(format!("s must be positive, got {s}")));
        }
        Ok(Self { n, s, s_rational: None })
    }

    pub fn from_ratio(n: u32, p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter("s = p/q with q = 0".into()));
        }
        let mut params = Self::new(n, T::lit(p as f64) / T::lit(q as f64))?;
        params.s_rational = Some((p, q));
        Ok(params)
    }

    /// Rational `s` makes `ω_s` a Hodge metric.
    pub fn is_hodge(&self) -> bool {
        self.s_rational.is_some()
    }

    /// Positive holomorphic sectional curvature requires `s < 1/n²`.
    pub fn check_positive(&self) -> Result<()> {
        let n2 = T::lit(f64::from(self.n * self.n));
        if self.s * n2 < T::one() {
            Ok(())
        } else {
            Err(Error::PositivityViolated { n: self.n, s: self.s.as_f64() })
        }
    }
}

/// Built-in metric models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricModel<T> {
    /// Fubini–Study metric on `P^m`, potential `log(1 + Σ|z_i|²)`.
    FubiniStudy {
        m: usize,
    },
    /// `log(1+|z₁|²) + s·log((1+|z₁|²)ⁿ + |z₂|²)` on `F_n`.
    Hitchin(HitchinParams<T>),
    Product {
        left: Box<MetricModel<T>>,
        right: Box<MetricModel<T>>,
    },
}

impl<T: Real> MetricModel<T> {
    pub fn fubini_study(m: usize) -> Self {
        MetricModel::FubiniStudy { m }
    }

    pub fn hitchin(n: u32, s: T) -> Result<Self> {
        Ok(MetricModel::Hitchin(HitchinParams::new(n, s)?))
    }

    pub fn product(left: Self, right: Self) -> Self {
        MetricModel::Product { left: Box::new(left), right: Box::new(right) }
    }

    pub fn dimension(&self) -> usize {
        match self {
            MetricModel::FubiniStudy { m } => *m,
            MetricModel::Hitchin(_) => 2,
            MetricModel::Product { left, right } => left.dimension() + right.dimension(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MetricModel::FubiniStudy { m } if *m == 0 => {
                Err(Error::InvalidParameter("Fubini–Study needs m ≥ 1".into()))
            }
            MetricModel::FubiniStudy { .. } => Ok(()),
            MetricModel::Hitchin(p) => HitchinParams::new(p.n, p.s).map(|_| ()),
            MetricModel::Product { left, right } => {
                left.validate()?;
                right.validate()
            }
        }
    }

    /// `(c_p, P_p)` with `Φ = Σ c_p log P_p`. Products have no single chart
    /// kernel list here; they are split into factors by the callers.
    fn kernels(&self) -> Vec<(T, Polynomial<T>)> {
        match self {
            MetricModel::FubiniStudy { m } => {
                let idx: Vec<usize> = (0..*m).collect();
                vec![(T::one(), Polynomial::one_plus_norm(*m, &idx))]
            }
            MetricModel::Hitchin(p) => {
                // (1+z₁z̄₁)ⁿ = Σ_k C(n,k) z₁^k z̄₁^k
                let mut v = Polynomial::zero(2);
                let mut binom = 1.0f64;
                for k in 0..=p.n {
                    v.add_term(T::lit(binom), &[(0, k)], &[(0, k)]);
                    binom = binom * f64::from(p.n - k) / f64::from(k + 1);
                }
                v.add_term(T::one(), &[(1, 1)], &[(1, 1)]);
                vec![(T::one(), Polynomial::one_plus_norm(2, &[0])), (p.s, v)]
            }
            MetricModel::Product { .. } => unreachable!("products are assembled blockwise"),
        }
    }

    fn check_point(&self, p: &ChartPoint<T>) -> Result<()> {
        if p.dim() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), found: p.dim() });
        }
        Ok(())
    }

    fn split(&self, p: &ChartPoint<T>) -> (ChartPoint<T>, ChartPoint<T>) {
        let MetricModel::Product { left, .. } = self else { unreachable!() };
        let (a, b) = p.coords.split_at(left.dimension());
        (ChartPoint { coords: a.to_vec() }, ChartPoint { coords: b.to_vec() })
    }

    /// Kähler potential `Φ(p)`.
    pub fn potential(&self, p: &ChartPoint<T>) -> Result<T> {
        self.check_point(p)?;
        match self {
            MetricModel::Product { left, right } => {
                let (a, b) = self.split(p);
                Ok(left.potential(&a)? + right.potential(&b)?)
            }
            _ => Ok(self.kernels().iter().map(|(coef, poly)| *coef * poly.value_at(&p.coords).re.ln()).sum()),
        }
    }

    /// `g_{ij̄} = ∂_i∂̄_j Φ` without the derivative layers.
    pub fn metric(&self, p: &ChartPoint<T>) -> Result<HermitianMatrix<T>> {
        self.check_point(p)?;
        let m = self.dimension();
        match self {
            MetricModel::Product { left, right } => {
                let (a, b) = self.split(p);
                let (gl, gr) = (left.metric(&a)?, right.metric(&b)?);
                let ml = left.dimension();
                Ok(HermitianMatrix::from_upper(block_diag(m, ml, gl.matrix(), gr.matrix())))
            }
            _ => {
                let kernels = self.kernels();
                let g = CMatrix::from_fn(m, |i, j| {
                    if j < i {
                        return czero();
                    }
                    sum_log(&kernels, &[Var::Z(i), Var::Zbar(j)], &p.coords)
                });
                Ok(HermitianMatrix::from_upper(g))
            }
        }
    }

    /// Analytic jet `(g, ∂g, ∂∂̄g)` at `p`.
    pub fn metric_jet(&self, p: &ChartPoint<T>) -> Result<MetricJet<T>> {
        self.check_point(p)?;
        let jet = match self {
            MetricModel::Product { left, right } => {
                let (a, b) = self.split(p);
                block_jet(&left.metric_jet(&a)?, &right.metric_jet(&b)?)
            }
            _ => {
                let m = self.dimension();
                let kernels = self.kernels();
                let x = &p.coords;
                let g = self.metric(p)?;
                let mut dg = Tensor3::zeros(m);
                let mut ddg = Tensor4::zeros(m);
                for i in 0..m {
                    for j in 0..m {
                        for k in 0..m {
                            dg[(i, j, k)] = sum_log(&kernels, &[Var::Z(i), Var::Zbar(j), Var::Z(k)], x);
                            for l in 0..m {
                                ddg[(i, j, k, l)] =
                                    sum_log(&kernels, &[Var::Z(i), Var::Zbar(j), Var::Z(k), Var::Zbar(l)], x);
                            }
                        }
                    }
                }
                MetricJet { g, dg, ddg }
            }
        };
        if !jet.g.is_positive_definite() {
            return Err(Error::DegenerateMetric {
                min_eigenvalue: jet.g.eigenvalues().first().copied().unwrap_or(T::zero()).as_f64(),
            });
        }
        Ok(jet)
    }
}

fn sum_log<T: Real>(kernels: &[(T, Polynomial<T>)], vars: &[Var], x: &[C<T>]) -> C<T> {
    kernels.iter().fold(czero(), |acc, (coef, poly)| acc + log_derivative_at(poly, vars, x).scale(*coef))
}

fn block_diag<T: Real>(m: usize, ml: usize, a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    CMatrix::from_fn(m, |i, j| match (i < ml, j < ml) {
        (true, true) => a[(i, j)],
        (false, false) => b[(i - ml, j - ml)],
        _ => czero(),
    })
}

/// Block-diagonal product jet; cross-factor derivatives vanish.
pub fn block_jet<T: Real>(left: &MetricJet<T>, right: &MetricJet<T>) -> MetricJet<T> {
    let ml = left.dim();
    let m = ml + right.dim();
    let g = HermitianMatrix::from_upper(block_diag(m, ml, left.g.matrix(), right.g.matrix()));
    let mut dg = Tensor3::zeros(m);
    let mut ddg = Tensor4::zeros(m);
    for (src, off) in [(left, 0usize), (right, ml)] {
        let d = src.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    dg[(i + off, j + off, k + off)] = src.dg[(i, j, k)];
                    for l in 0..d {
                        ddg[(i + off, j + off, k + off, l + off)] = src.ddg[(i, j, k, l)];
                    }
                }
            }
        }
    }
    MetricJet { g, dg, ddg }
}

/// Anything with a Kähler potential and an analytic metric; the
/// finite-difference oracle only needs these two.
pub trait PotentialModel<T: Real> {
    fn dimension(&self) -> usize;
    fn potential(&self, p: &ChartPoint<T>) -> Result<T>;
    fn metric(&self, p: &ChartPoint<T>) -> Result<HermitianMatrix<T>>;
}

impl<T: Real> PotentialModel<T> for MetricModel<T> {
    fn dimension(&self) -> usize {
        MetricModel::dimension(self)
    }
    fn potential(&self, p: &ChartPoint<T>) -> Result<T> {
        MetricModel::potential(self, p)
    }
    fn metric(&self, p: &ChartPoint<T>) -> Result<HermitianMatrix<T>> {
        MetricModel::metric(self, p)
    }
}

pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Real direction of coordinate `k`: `x_k` (imag = false) or `y_k`.
#[derive(Clone, Copy)]
struct Axis {
    k: usize,
    imag: bool,
}

fn shifted<T: Real>(p: &ChartPoint<T>, moves: &[(Axis, T)]) -> ChartPoint<T> {
    let mut q = p.clone();
    for (axis, h) in moves {
        let delta = if axis.imag { c(T::zero(), *h) } else { c(*h, T::zero()) };
        q.coords[axis.k] += delta;
    }
    q
}

fn check_step<T: Real>(h: T) -> Result<()> {
    if !(h >= T::lit(1e-12)) {
        return Err(Error::StepUnderflow(h.as_f64()));
    }
    Ok(())
}

/// Central second difference `D_a D_b f` for any matrix-valued `f`.
fn mixed_second<T: Real>(
    f: &impl Fn(&ChartPoint<T>) -> Result<CMatrix<T>>,
    p: &ChartPoint<T>,
    a: Axis,
    b: Axis,
    h: T,
) -> Result<CMatrix<T>> {
    let pp = f(&shifted(p, &[(a, h), (b, h)]))?;
    let pm = f(&shifted(p, &[(a, h), (b, -h)]))?;
    let mp = f(&shifted(p, &[(a, -h), (b, h)]))?;
    let mm = f(&shifted(p, &[(a, -h), (b, -h)]))?;
    let scale = T::one() / (T::lit(4.0) * h * h);
    let dim = pp.dim();
    Ok(CMatrix::from_fn(dim, |i, j| (pp[(i, j)] - pm[(i, j)] - mp[(i, j)] + mm[(i, j)]).scale(scale)))
}

/// `∂_k ∂̄_l f ≈ ¼ (D^x_k − i D^y_k)(D^x_l + i D^y_l) f`.
fn wirtinger_mixed<T: Real>(
    f: &impl Fn(&ChartPoint<T>) -> Result<CMatrix<T>>,
    p: &ChartPoint<T>,
    k: usize,
    l: usize,
    h: T,
) -> Result<CMatrix<T>> {
    let xk = Axis { k, imag: false };
    let yk = Axis { k, imag: true };
    let xl = Axis { k: l, imag: false };
    let yl = Axis { k: l, imag: true };
    let xx = mixed_second(f, p, xk, xl, h)?;
    let xy = mixed_second(f, p, xk, yl, h)?;
    let yx = mixed_second(f, p, yk, xl, h)?;
    let yy = mixed_second(f, p, yk, yl, h)?;
    let i_unit = c(T::zero(), T::one());
    let quarter = T::lit(0.25);
    Ok(CMatrix::from_fn(xx.dim(), |a, b| {
        (xx[(a, b)] + i_unit * xy[(a, b)] - i_unit * yx[(a, b)] + yy[(a, b)]).scale(quarter)
    }))
}

/// Finite-difference jet: `∂g` and `∂∂̄g` by central differences of the
/// analytic metric, `g` itself taken from the model.
pub fn fd_metric_jet<T: Real>(model: &impl PotentialModel<T>, p: &ChartPoint<T>, h: T) -> Result<MetricJet<T>> {
    check_step(h)?;
    let m = model.dimension();
    let g_at = |q: &ChartPoint<T>| model.metric(q).map(|g| g.matrix().clone());
    let g = model.metric(p)?;
    let mut dg = Tensor3::zeros(m);
    let mut ddg = Tensor4::zeros(m);
    let inv_2h = T::one() / (h + h);
    let half = T::lit(0.5);
    let i_unit = c(T::zero(), T::one());
    for k in 0..m {
        let x = Axis { k, imag: false };
        let y = Axis { k, imag: true };
        let gxp = g_at(&shifted(p, &[(x, h)]))?;
        let gxm = g_at(&shifted(p, &[(x, -h)]))?;
        let gyp = g_at(&shifted(p, &[(y, h)]))?;
        let gym = g_at(&shifted(p, &[(y, -h)]))?;
        for i in 0..m {
            for j in 0..m {
                let dx = (gxp[(i, j)] - gxm[(i, j)]).scale(inv_2h);
                let dy = (gyp[(i, j)] - gym[(i, j)]).scale(inv_2h);
                dg[(i, j, k)] = (dx - i_unit * dy).scale(half);
            }
        }
        for l in 0..m {
            let d = wirtinger_mixed(&g_at, p, k, l, h)?;
            for i in 0..m {
                for j in 0..m {
                    ddg[(i, j, k, l)] = d[(i, j)];
                }
            }
        }
    }
    MetricJet::new(g, dg, ddg)
}

/// `g_{ij̄} ≈ ∂_i∂̄_j Φ` by nested central differences of the potential.
pub fn fd_metric_from_potential<T: Real>(
    model: &impl PotentialModel<T>,
    p: &ChartPoint<T>,
    h: T,
) -> Result<HermitianMatrix<T>> {
    check_step(h)?;
    let m = model.dimension();
    let phi = |q: &ChartPoint<T>| model.potential(q).map(|v| CMatrix::from_real_diagonal(&[v]));
    let mut g = CMatrix::zeros(m);
    for i in 0..m {
        for j in i..m {
            g[(i, j)] = wirtinger_mixed(&phi, p, i, j, h)?[(0, 0)];
        }
    }
    Ok(HermitianMatrix::from_upper(g))
}

/// `max |∂g_{ij̄}/∂z_k − ∂g_{kj̄}/∂z_i|`; zero for Kähler jets.
pub fn kahler_residual<T: Real>(jet: &MetricJet<T>) -> T {
    let m = jet.dim();
    let mut worst = T::zero();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                worst = worst.max((jet.dg[(i, j, k)] - jet.dg[(k, j, i)]).norm());
            }
        }
    }
    worst
}
