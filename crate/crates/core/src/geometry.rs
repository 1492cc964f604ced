//! Pointwise Kähler curvature: the curvature tensor of a metric jet and its
//! holomorphic sectional, Ricci and scalar traces.
//!
//! Index conventions follow the usual `R_{i j̄ k l̄}` layout: the second and
//! fourth slots are the barred ones. All operations are stateless.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{c, czero, Real, C};

/// Point of an `m`-dimensional chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint<T> {
    pub coords: Vec<C<T>>,
}

impl<T: Real> ChartPoint<T> {
    pub fn new(coords: Vec<C<T>>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("chart point needs m ≥ 1 coordinates".into()));
        }
        if coords.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("chart coordinates must be finite".into()));
        }
        Ok(Self { coords })
    }

    pub fn origin(dim: usize) -> Self {
        Self { coords: vec![czero(); dim] }
    }

    pub fn from_parts(parts: &[(f64, f64)]) -> Result<Self> {
        Self::new(parts.iter().map(|&(re, im)| c(T::lit(re), T::lit(im))).collect())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Tangent vector in the coordinate frame `∂/∂z_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentVector<T> {
    pub components: Vec<C<T>>,
}

impl<T: Real> TangentVector<T> {
    pub fn new(components: Vec<C<T>>) -> Self {
        Self { components }
    }

    pub fn from_real(xs: &[f64]) -> Self {
        Self::new(xs.iter().map(|&x| c(T::lit(x), T::zero())).collect())
    }

    /// `∂/∂z_i` in dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut components = vec![czero(); dim];
        components[i] = c(T::one(), T::zero());
        Self { components }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|z| z.norm_sqr() == T::zero())
    }

    pub fn scaled(&self, lambda: C<T>) -> Self {
        Self::new(self.components.iter().map(|z| *z * lambda).collect())
    }
}

fn hermitian_tolerance<T: Real>(scale: T) -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(64.0)) * scale.max(T::one())
}

/// Hermitian matrix `g_{ij̄}` (or `R_{ij̄}`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermitianMatrix<T> {
    entries: CMatrix<T>,
}

impl<T: Real> HermitianMatrix<T> {
    pub fn new(entries: CMatrix<T>) -> Result<Self> {
        let residual = entries.hermitian_residual();
        if !(residual <= hermitian_tolerance(entries.max_abs())) {
            return Err(Error::InvalidParameter(format!("matrix is not Hermitian (residual {:e})", residual.as_f64())));
        }
        Ok(Self { entries })
    }

    pub fn identity(dim: usize) -> Self {
        Self { entries: CMatrix::identity(dim) }
    }

    pub fn diagonal(diag: &[T]) -> Self {
        Self { entries: CMatrix::from_real_diagonal(diag) }
    }

    /// Builds from the upper triangle, mirroring it into the lower one.
    pub(crate) fn from_upper(mut entries: CMatrix<T>) -> Self {
        let n = entries.dim();
        for i in 0..n {
            entries[(i, i)] = c(entries[(i, i)].re, T::zero());
            for j in (i + 1)..n {
                entries[(j, i)] = entries[(i, j)].conj();
            }
        }
        Self { entries }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix<T> {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.entries[(i, j)]
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        self.entries.hermitian_eigenvalues()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.entries.cholesky().is_some()
    }

    /// Inverse metric `g^{pq̄}`. Positive definiteness is checked first so
    /// the error can carry the offending eigenvalue.
    pub fn inverse(&self) -> Result<CMatrix<T>> {
        let degenerate = || Error::DegenerateMetric {
            min_eigenvalue: self.eigenvalues().first().copied().unwrap_or(T::zero()).as_f64(),
        };
        if !self.is_positive_definite() {
            return Err(degenerate());
        }
        self.entries.inverse().ok_or_else(degenerate)
    }
}

/// Dense `m×m×m` complex array, index `(i, j, k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tensor3<T> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> Tensor3<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![czero(); dim * dim * dim] }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm()))
    }
}

impl<T> std::ops::Index<(usize, usize, usize)> for Tensor3<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j, k): (usize, usize, usize)) -> &C<T> {
        &self.data[(i * self.dim + j) * self.dim + k]
    }
}

impl<T> std::ops::IndexMut<(usize, usize, usize)> for Tensor3<T> {
    #[inline]
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut C<T> {
        &mut self.data[(i * self.dim + j) * self.dim + k]
    }
}

/// Dense `m×m×m×m` complex array, index `(i, j, k, l)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tensor4<T> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> Tensor4<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![czero(); dim * dim * dim * dim] }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm()))
    }
}

impl<T> std::ops::Index<(usize, usize, usize, usize)> for Tensor4<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j, k, l): (usize, usize, usize, usize)) -> &C<T> {
        let d = self.dim;
        &self.data[((i * d + j) * d + k) * d + l]
    }
}

impl<T> std::ops::IndexMut<(usize, usize, usize, usize)> for Tensor4<T> {
    #[inline]
    fn index_mut(&mut self, (i, j, k, l): (usize, usize, usize, usize)) -> &mut C<T> {
        let d = self.dim;
        &mut self.data[((i * d + j) * d + k) * d + l]
    }
}

/// Metric with its first and mixed second Wirtinger derivatives:
/// `dg[(i, j, k)] = ∂g_{ij̄}/∂z_k`, `ddg[(i, j, k, l)] = ∂²g_{ij̄}/∂z_k∂z̄_l`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricJet<T> {
    pub g: HermitianMatrix<T>,
    pub dg: Tensor3<T>,
    pub ddg: Tensor4<T>,
}

impl<T: Real> MetricJet<T> {
    pub fn new(g: HermitianMatrix<T>, dg: Tensor3<T>, ddg: Tensor4<T>) -> Result<Self> {
        let m = g.dim();
        for found in [dg.dim(), ddg.dim()] {
            if found != m {
                return Err(Error::DimensionMismatch { expected: m, found });
            }
        }
        Ok(Self { g, dg, ddg })
    }

    /// Euclidean metric: `g = I`, all derivatives zero.
    pub fn flat(dim: usize) -> Self {
        Self { g: HermitianMatrix::identity(dim), dg: Tensor3::zeros(dim), ddg: Tensor4::zeros(dim) }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.g.dim()
    }
}

/// `R_{ij̄kl̄}` at a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureTensor<T> {
    pub components: Tensor4<T>,
}

impl<T: Real> CurvatureTensor<T> {
    #[inline]
    pub fn dim(&self) -> usize {
        self.components.dim()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> C<T> {
        self.components[(i, j, k, l)]
    }

    /// Components in the frame whose columns are `frame`:
    /// `R'_{abcd} = Σ R_{ijkl} F_ia conj(F_jb) F_kc conj(F_ld)`.
    pub fn in_frame(&self, frame: &CMatrix<T>) -> Self {
        let m = self.dim();
        let mut cur = self.components.clone();
        // Transform one slot at a time.
        for slot in 0..4 {
            let mut next = Tensor4::zeros(m);
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        for l in 0..m {
                            let mut acc = czero();
                            for p in 0..m {
                                let (idx, f) = match slot {
                                    0 => ((p, j, k, l), frame[(p, i)]),
                                    1 => ((i, p, k, l), frame[(p, j)].conj()),
                                    2 => ((i, j, p, l), frame[(p, k)]),
                                    _ => ((i, j, k, p), frame[(p, l)].conj()),
                                };
                                acc += cur[idx] * f;
                            }
                            next[(i, j, k, l)] = acc;
                        }
                    }
                }
            }
            cur = next;
        }
        Self { components: cur }
    }

    /// `Σ R_{ijkl} ξ_i ξ̄_j ξ_k ξ̄_l` (without the factor 2).
    pub fn quartic(&self, xi: &[C<T>]) -> C<T> {
        let m = self.dim();
        let mut acc = czero();
        for i in 0..m {
            for j in 0..m {
                let v_ij = xi[i] * xi[j].conj();
                if v_ij == czero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        acc += self.components[(i, j, k, l)] * v_ij * xi[k] * xi[l].conj();
                    }
                }
            }
        }
        acc
    }
}

fn real_checked<T: Real>(z: C<T>) -> Result<T> {
    let tol = T::lit(1e-10).max(T::epsilon() * T::lit(1e3)) * z.re.abs().max(T::one());
    if z.im.abs() > tol {
        return Err(Error::ImaginaryResidue(z.im.as_f64()));
    }
    Ok(z.re)
}

/// `R_{ij̄kl̄} = −∂_k∂̄_l g_{ij̄} + Σ g^{pq̄} ∂_k g_{ip̄} ∂̄_l g_{qj̄}`.
pub fn curvature_tensor<T: Real>(jet: &MetricJet<T>) -> Result<CurvatureTensor<T>> {
    let m = jet.dim();
    let ginv = jet.g.inverse()?;
    // ∂̄_l g_{qj̄} = conj(∂_l g_{jq̄})
    let mut r = Tensor4::<T>::zeros(m);
    for i in 0..m {
        for k in 0..m {
            // t[q] = Σ_p ∂_k g_{ip̄} g^{pq̄}
            let t: Vec<C<T>> =
                (0..m).map(|q| (0..m).fold(czero(), |acc, p| acc + jet.dg[(i, p, k)] * ginv[(p, q)])).collect();
            for j in 0..m {
                for l in 0..m {
                    let quad = (0..m).fold(czero::<T>(), |acc, q| acc + t[q] * jet.dg[(j, q, l)].conj());
                    r[(i, j, k, l)] = quad - jet.ddg[(i, j, k, l)];
                }
            }
        }
    }
    Ok(CurvatureTensor { components: r })
}

/// `Σ g_{ij̄} ξ_i ξ̄_j`.
pub fn norm_squared<T: Real>(g: &HermitianMatrix<T>, xi: &TangentVector<T>) -> T {
    let m = g.dim();
    let mut acc = czero::<T>();
    for i in 0..m {
        for j in 0..m {
            acc += g.get(i, j) * xi.components[i] * xi.components[j].conj();
        }
    }
    acc.re.max(T::zero())
}

/// `K(ξ) = 2 Σ R ξξ̄ξξ̄ / (Σ g ξξ̄)²`.
pub fn holomorphic_sectional_curvature<T: Real>(
    r: &CurvatureTensor<T>,
    g: &HermitianMatrix<T>,
    xi: &TangentVector<T>,
) -> Result<T> {
    if xi.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: xi.dim() });
    }
    if xi.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let den = norm_squared(g, xi);
    if !(den > T::zero()) {
        return Err(Error::ZeroDirection);
    }
    let num = r.quartic(&xi.components);
    let k = real_checked(num.scale(T::lit(2.0) / (den * den)))?;
    Ok(k)
}

/// `R_{ij̄} = Σ g^{kl̄} R_{ij̄kl̄}`.
pub fn ricci<T: Real>(r: &CurvatureTensor<T>, g: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>> {
    let ginv = g.inverse()?;
    Ok(ricci_with_inverse(r, &ginv))
}

fn ricci_with_inverse<T: Real>(r: &CurvatureTensor<T>, ginv: &CMatrix<T>) -> HermitianMatrix<T> {
    let m = r.dim();
    // The inverse metric pairs g^{kl̄} with R_{..kl̄}; with the matrix
    // convention used in `curvature_tensor` that is ginv[(l, k)].
    let ric = CMatrix::from_fn(m, |i, j| {
        let mut acc = czero();
        for k in 0..m {
            for l in 0..m {
                acc += ginv[(l, k)] * r.get(i, j, k, l);
            }
        }
        acc
    });
    HermitianMatrix::from_upper(ric)
}

/// `τ = Σ g^{ij̄} g^{kl̄} R_{ij̄kl̄}`.
pub fn scalar_curvature<T: Real>(r: &CurvatureTensor<T>, g: &HermitianMatrix<T>) -> Result<T> {
    let ginv = g.inverse()?;
    let ric = ricci_with_inverse(r, &ginv);
    let m = r.dim();
    let mut acc = czero();
    for i in 0..m {
        for j in 0..m {
            acc += ginv[(j, i)] * ric.get(i, j);
        }
    }
    real_checked(acc)
}

/// Largest violations of the Kähler curvature identities and of the Kähler
/// condition on the jet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport<T> {
    /// `max |R_{ij̄kl̄} − R_{kj̄il̄}|`
    pub swap_unbarred: T,
    /// `max |R_{ij̄kl̄} − R_{il̄kj̄}|`
    pub swap_barred: T,
    /// `max |R_{ij̄kl̄} − conj(R_{jīlk̄})|`
    pub conjugation: T,
    /// `max |∂_k g_{ij̄} − ∂_i g_{kj̄}|`
    pub kahler: T,
    /// Largest `|R|`, for turning the above into relative residuals.
    pub scale: T,
}

impl<T: Real> SymmetryReport<T> {
    pub fn max_curvature_residual(&self) -> T {
        self.swap_unbarred.max(self.swap_barred).max(self.conjugation)
    }

    pub fn max_relative_curvature_residual(&self) -> T {
        self.max_curvature_residual() / self.scale.max(T::one())
    }
}

pub fn check_symmetries<T: Real>(r: &CurvatureTensor<T>, jet: &MetricJet<T>) -> SymmetryReport<T> {
    let m = r.dim();
    let mut rep = SymmetryReport {
        swap_unbarred: T::zero(),
        swap_barred: T::zero(),
        conjugation: T::zero(),
        kahler: crate::models::kahler_residual(jet),
        scale: r.components.max_abs(),
    };
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let v = r.get(i, j, k, l);
                    rep.swap_unbarred = rep.swap_unbarred.max((v - r.get(k, j, i, l)).norm());
                    rep.swap_barred = rep.swap_barred.max((v - r.get(i, l, k, j)).norm());
                    rep.conjugation = rep.conjugation.max((v - r.get(j, i, l, k).conj()).norm());
                }
            }
        }
    }
    rep
}
