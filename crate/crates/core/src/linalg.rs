//! Small dense complex matrices: partial-pivot inversion, Cholesky, and a
//! Jacobi eigenvalue solver for Hermitian matrices.

use serde::{Deserialize, Serialize};

use crate::scalar::{c, czero, Real, C};

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![czero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = c(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = c(d, T::zero());
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matmul");
        let n = self.dim;
        Self::from_fn(n, |i, j| (0..n).fold(czero(), |acc, k| acc + self[(i, k)] * rhs[(k, j)]))
    }

    pub fn mul_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        (0..self.dim).map(|i| (0..self.dim).fold(czero(), |acc, k| acc + self[(i, k)] * v[k])).collect()
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim).fold(czero(), |acc, i| acc + self[(i, i)])
    }

    /// Largest `|a_ij - conj(a_ji)|`.
    pub fn hermitian_residual(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm()))
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, a| acc.max(a.norm()))
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting. `None` when
    /// a pivot vanishes exactly or the result is not finite.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| {
                    a[(x, col)].norm().partial_cmp(&a[(y, col)].norm()).unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            if !(a[(pivot, col)].norm() > T::zero()) {
                return None;
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let f = a[(row, col)];
                if f == czero() {
                    continue;
                }
                for j in 0..n {
                    let av = a[(col, j)];
                    let iv = inv[(col, j)];
                    a[(row, j)] -= f * av;
                    inv[(row, j)] -= f * iv;
                }
            }
        }
        inv.data.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(inv)
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        for j in 0..self.dim {
            self.data.swap(r1 * self.dim + j, r2 * self.dim + j);
        }
    }

    /// Lower-triangular `L` with `L L* = self`. `None` unless the Hermitian
    /// part is positive definite.
    pub fn cholesky(&self) -> Option<Self> {
        let n = self.dim;
        let mut l = Self::zeros(n);
        for j in 0..n {
            let mut d = self[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if !(d > T::zero()) {
                return None;
            }
            let djj = d.sqrt();
            l[(j, j)] = c(djj, T::zero());
            for i in (j + 1)..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / djj;
            }
        }
        Some(l)
    }

    /// Eigenvalues of the Hermitian part, ascending, by cyclic complex Jacobi
    /// rotations.
    pub fn hermitian_eigenvalues(&self) -> Vec<T> {
        let n = self.dim;
        let half = T::lit(0.5);
        let mut a = Self::from_fn(n, |i, j| (self[(i, j)] + self[(j, i)].conj()).scale(half));
        let scale = a.max_abs().max(T::min_positive_value());
        for _sweep in 0..64 {
            let mut off = T::zero();
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off.max(a[(p, q)].norm());
                }
            }
            if off <= scale * T::epsilon() {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    let b = apq.norm();
                    if b <= scale * T::epsilon() * T::epsilon() {
                        continue;
                    }
                    let phase = apq / b;
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let tau = (aqq - app) / (b + b);
                    let t = if tau >= T::zero() {
                        T::one() / (tau + (T::one() + tau * tau).sqrt())
                    } else {
                        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                    };
                    let cs = T::one() / (T::one() + t * t).sqrt();
                    let sn = t * cs;
                    // U = D J, D = diag(.., conj(phase) at q, ..), J the real rotation.
                    let mut u = Self::identity(n);
                    u[(p, p)] = c(cs, T::zero());
                    u[(p, q)] = c(sn, T::zero());
                    u[(q, p)] = phase.conj().scale(-sn);
                    u[(q, q)] = phase.conj().scale(cs);
                    a = u.adjoint().matmul(&a).matmul(&u);
                }
            }
        }
        let mut eig: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
        eig
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.dim + j]
    }
}
