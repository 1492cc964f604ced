//! Closed-form curvature of `ω_s` along the fiber `z₁ = 0` of `F_n`.
//!
//! In the unitary frame `(e₁, e₂)` of the fiber metric a unit vector is
//! `c₁e₁ + c₂e₂`; with `a = |c₁|²`, `b = |c₂|²` the holomorphic sectional
//! curvature is the quadratic form `K = αa² + βab + γb²`, where the
//! coefficients depend on `r = |z₂|²`. Everything here is a rational
//! function of `(n, s, r)` and is written over [`Field`], so the same code
//! runs in `f64` and in exact [`Rational`] arithmetic.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{field_to_f64, Field};

/// Exact rationals for the optimal parameter and the scalar bounds.
pub type Rational = num_rational::BigRational;

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

/// `r = |z₂|²`, with the curve at infinity `E` as [`FiberRadius::Infinite`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum FiberRadius<T> {
    Finite(T),
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberState<T> {
    pub n: u32,
    pub s: T,
    pub r: FiberRadius<T>,
}

fn int<T: Field>(k: i64) -> T {
    T::from_int(k)
}

fn check_s<T: Field + ToPrimitive>(s: &T) -> Result<()> {
    if *s > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("s must be positive, got {}", field_to_f64(s))))
    }
}

fn check_n(n: u32) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidParameter("Hirzebruch index n must be ≥ 1".into()))
    }
}

/// Fails with [`Error::PositivityViolated`] unless `0 < s < 1/n²`.
pub fn check_admissible<T: Field + ToPrimitive>(n: u32, s: &T) -> Result<()> {
    check_n(n)?;
    check_s(s)?;
    let n2: T = int(i64::from(n) * i64::from(n));
    if s.clone() * n2 < T::one() {
        Ok(())
    } else {
        Err(Error::PositivityViolated { n, s: field_to_f64(s) })
    }
}

impl<T: Field + ToPrimitive> FiberState<T> {
    pub fn new(n: u32, s: T, r: FiberRadius<T>) -> Result<Self> {
        check_n(n)?;
        check_s(&s)?;
        if let FiberRadius::Finite(r) = &r {
            if !(*r >= T::zero()) {
                return Err(Error::InvalidParameter(format!("r must be ≥ 0, got {}", field_to_f64(r))));
            }
        }
        Ok(Self { n, s, r })
    }

    pub fn finite(n: u32, s: T, r: T) -> Result<Self> {
        Self::new(n, s, FiberRadius::Finite(r))
    }

    pub fn at_infinity(n: u32, s: T) -> Result<Self> {
        Self::new(n, s, FiberRadius::Infinite)
    }

    fn nf(&self) -> T {
        int(i64::from(self.n))
    }
}

/// `(a, b) = (|c₁|², |c₂|²)` with `a + b = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionWeights<T> {
    pub a: T,
    pub b: T,
}

impl<T: Field + ToPrimitive> DirectionWeights<T> {
    /// Weights `(a, 1 − a)`; `a` must lie in `[0, 1]`.
    pub fn new(a: T) -> Result<Self> {
        if !(a >= T::zero() && a <= T::one()) {
            return Err(Error::InvalidParameter(format!("weight a = {} outside [0, 1]", field_to_f64(&a))));
        }
        let b = T::one() - a.clone();
        Ok(Self { a, b })
    }

    pub fn horizontal() -> Self {
        Self { a: T::one(), b: T::zero() }
    }

    pub fn vertical() -> Self {
        Self { a: T::zero(), b: T::one() }
    }
}

/// `(R_{11̄11̄}, R_{11̄22̄}, R_{22̄22̄})` in the coordinate frame at `(0, z₂)`.
/// The remaining nonzero components follow from the Kähler symmetries.
pub fn fiber_curvature_components<T: Field + ToPrimitive>(state: &FiberState<T>) -> Result<(T, T, T)> {
    let FiberRadius::Finite(r) = &state.r else {
        return Err(Error::InvalidParameter("coordinate-frame components need finite r".into()));
    };
    let (n, s, r) = (state.nf(), state.s.clone(), r.clone());
    let one = T::one();
    let two: T = int(2);
    let ns = n.clone() * s.clone();
    let u = one.clone() + r.clone();
    let u2 = u.clone() * u.clone();
    let r1111 =
        two.clone() * (-(n.clone() * ns.clone() * r.clone()) + u2.clone() + ns.clone() * u.clone()) / u2.clone();
    let r1122 =
        ns.clone() * (one.clone() + ns.clone() - r.clone() * r.clone()) / (u2.clone() * u.clone() * (u.clone() + ns));
    let r2222 = two * s / (u2.clone() * u2);
    Ok((r1111, r1122, r2222))
}

/// `(α, β, γ)`; at `r = ∞` the limits `(4, −8n, 4/s)`.
pub fn coefficients<T: Field + ToPrimitive>(state: &FiberState<T>) -> (T, T, T) {
    let (n, s) = (state.nf(), state.s.clone());
    let four: T = int(4);
    let gamma = four.clone() / s.clone();
    match &state.r {
        FiberRadius::Infinite => (four, -(int::<T>(8) * n), gamma),
        FiberRadius::Finite(r) => {
            let one = T::one();
            let ns = n.clone() * s;
            let u = one.clone() + r.clone();
            let w = u.clone() + ns.clone();
            let w2 = w.clone() * w;
            let alpha = four * (u.clone() * u.clone() + ns.clone() * (u - n.clone() * r.clone())) / w2.clone();
            let beta = int::<T>(8) * n * (one + ns - r.clone() * r.clone()) / w2;
            (alpha, beta, gamma)
        }
    }
}

/// `K_{r,s}(a, b) = αa² + βab + γb²`.
pub fn k_quadratic<T: Field + ToPrimitive>(state: &FiberState<T>, w: &DirectionWeights<T>) -> T {
    let (alpha, beta, gamma) = coefficients(state);
    quadratic(&alpha, &beta, &gamma, &w.a, &w.b)
}

fn quadratic<T: Field>(alpha: &T, beta: &T, gamma: &T, a: &T, b: &T) -> T {
    alpha.clone() * a.clone() * a.clone() + beta.clone() * a.clone() * b.clone() + gamma.clone() * b.clone() * b.clone()
}

/// `1 + s − (n−1)ns² + r(1 + s + 2ns)`, the common denominator of `(a₀, b₀)`.
fn stationary_denominator<T: Field>(n: &T, s: &T, r: &T) -> T {
    let one = T::one();
    let two: T = int(2);
    one.clone() + s.clone() - (n.clone() - one.clone()) * n.clone() * s.clone() * s.clone()
        + r.clone() * (one + s.clone() + two * n.clone() * s.clone())
}

/// Stationary point of `K` on `a + b = 1` (Lagrange conditions
/// `∂_aK = ∂_bK = λ`). At `r = ∞` the limits
/// `((1+ns)/(1+s+2ns), s(1+n)/(1+s+2ns))`.
///
/// `a₀` may leave `[0, 1]` for some states; it is returned as is.
pub fn stationary_weights<T: Field + ToPrimitive>(state: &FiberState<T>) -> DirectionWeights<T> {
    let (n, s) = (state.nf(), state.s.clone());
    let one = T::one();
    let ns = n.clone() * s.clone();
    match &state.r {
        FiberRadius::Infinite => {
            let den = one.clone() + s.clone() + int::<T>(2) * ns.clone();
            let a = (one.clone() + ns) / den.clone();
            let b = s * (one + n) / den;
            DirectionWeights { a, b }
        }
        FiberRadius::Finite(r) => {
            let den = stationary_denominator(&n, &s, r);
            let a = (one.clone() + r.clone()) * (one.clone() + ns.clone()) / den.clone();
            let b = s * (one.clone() - n.clone() + r.clone() + n.clone() * r.clone() + ns.clone() - n * ns) / den;
            DirectionWeights { a, b }
        }
    }
}

/// The Lagrange multiplier `λ = ∂_aK = ∂_bK` at the stationary point.
pub fn lagrange_multiplier<T: Field + ToPrimitive>(state: &FiberState<T>) -> T {
    let (alpha, beta, _) = coefficients(state);
    let w = stationary_weights(state);
    int::<T>(2) * alpha * w.a + beta * w.b
}

/// `f_s(r) = K_{r,s}(a₀, b₀)`; at `r = ∞` the limit `(4 − 4n²s)/(1 + s + 2ns)`.
pub fn f_s<T: Field + ToPrimitive>(state: &FiberState<T>) -> T {
    let (n, s) = (state.nf(), state.s.clone());
    let one = T::one();
    let four: T = int(4);
    let ns = n.clone() * s.clone();
    match &state.r {
        FiberRadius::Infinite => (four.clone() - four * n * ns.clone()) / (one + s + int::<T>(2) * ns),
        FiberRadius::Finite(r) => {
            let r = r.clone();
            let p = one.clone() + ns.clone();
            let three: T = int(3);
            let num = three.clone() * r.clone() * r.clone() * p.clone() + three * r.clone() * p.clone() * p.clone()
                - r.clone() * r.clone() * r.clone() * (n.clone() * ns.clone() - one.clone())
                - p.clone() * p.clone() * (n.clone() * ns.clone() - one.clone() - ns.clone());
            let w = one + r.clone() + ns;
            four * num / (w.clone() * w * stationary_denominator(&n, &s, &r))
        }
    }
}

/// `h_s(r) = K_{r,s}(1, 0) = α`; at `r = ∞` the limit 4.
pub fn h_s<T: Field + ToPrimitive>(state: &FiberState<T>) -> T {
    coefficients(state).0
}

/// `r₀ = (n−1)(1+ns)/(1+n)`, the common critical radius of `f_s` and
/// `h_s`; zero (the boundary) when `n = 1`.
pub fn critical_radius<T: Field + ToPrimitive>(n: u32, s: &T) -> Result<T> {
    check_n(n)?;
    check_s(s)?;
    let nf: T = int(i64::from(n));
    let one = T::one();
    Ok((nf.clone() - one.clone()) * (one.clone() + nf.clone() * s.clone()) / (one + nf))
}

/// `f_s(r₀) = h_s(r₀) = (4 − s(n−1)²)/(1 + ns)`.
pub fn f_at_r0<T: Field + ToPrimitive>(n: u32, s: &T) -> Result<T> {
    check_n(n)?;
    check_s(s)?;
    let nf: T = int(i64::from(n));
    let one = T::one();
    let nm1 = nf.clone() - one.clone();
    Ok((int::<T>(4) - s.clone() * nm1.clone() * nm1) / (one + nf * s.clone()))
}

/// The six quantities bounding the three cases of the extremization, in
/// their expected order, together with `r₀` and `f_s(r₀)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseBounds<T> {
    /// `4/s`
    pub vertical: T,
    /// `lim h_s = 4`
    pub h_infinity: T,
    /// `h_s(0) = 4/(1+ns)`
    pub h_zero: T,
    /// `(4 − s(n−1)²)/(1+ns)`
    pub critical_value: T,
    /// `f_s(0)`
    pub f_zero: T,
    /// `lim f_s`
    pub f_infinity: T,
    pub r0: T,
    pub f_at_r0: T,
    pub strictly_decreasing: bool,
}

impl<T: Clone> CaseBounds<T> {
    pub fn chain(&self) -> [T; 6] {
        [
            self.vertical.clone(),
            self.h_infinity.clone(),
            self.h_zero.clone(),
            self.critical_value.clone(),
            self.f_zero.clone(),
            self.f_infinity.clone(),
        ]
    }
}

pub fn case_bounds<T: Field + ToPrimitive>(n: u32, s: &T) -> Result<CaseBounds<T>> {
    check_admissible(n, s)?;
    let zero = FiberState::finite(n, s.clone(), T::zero())?;
    let inf = FiberState::at_infinity(n, s.clone())?;
    let r0 = critical_radius(n, s)?;
    let at_r0 = FiberState::finite(n, s.clone(), r0.clone())?;
    let critical_value = f_at_r0(n, s)?;
    let mut bounds = CaseBounds {
        vertical: int::<T>(4) / s.clone(),
        h_infinity: h_s(&inf),
        h_zero: h_s(&zero),
        critical_value,
        f_zero: f_s(&zero),
        f_infinity: f_s(&inf),
        r0,
        f_at_r0: f_s(&at_r0),
        strictly_decreasing: false,
    };
    let chain = bounds.chain();
    bounds.strictly_decreasing = chain.windows(2).all(|w| w[0] > w[1]);
    Ok(bounds)
}

/// Global `(min, max)` of the holomorphic sectional curvature of `ω_s`:
/// `((4 − 4n²s)/(1 + s + 2ns), 4/s)`.
pub fn min_max_hsc<T: Field + ToPrimitive>(n: u32, s: &T) -> Result<(T, T)> {
    check_admissible(n, s)?;
    let inf = FiberState::at_infinity(n, s.clone())?;
    Ok((f_s(&inf), int::<T>(4) / s.clone()))
}

/// `p(s) = s(1 − n²s)/(1 + s + 2ns)`.
pub fn pinching<T: Field + ToPrimitive>(n: u32, s: &T) -> Result<T> {
    check_admissible(n, s)?;
    let nf: T = int(i64::from(n));
    let one = T::one();
    Ok(s.clone() * (one.clone() - nf.clone() * nf.clone() * s.clone())
        / (one + s.clone() + int::<T>(2) * nf * s.clone()))
}

/// `(s*, p(s*)) = (1/(2n²+n), 1/(1+2n)²)`, exact for exact `T`.
pub fn optimal_s<T: Field + ToPrimitive>(n: u32) -> Result<(T, T)> {
    check_n(n)?;
    let nf: i64 = n.into();
    let s_star = T::one() / int::<T>(2 * nf * nf + nf);
    let p_star = pinching(n, &s_star)?;
    Ok((s_star, p_star))
}

/// `(3/2)·(min, max)` brackets the scalar curvature when `m = 2`.
pub fn scalar_bounds<T: Field + ToPrimitive>(n: u32, s: &T) -> Result<(T, T)> {
    let (lo, hi) = min_max_hsc(n, s)?;
    let three_halves = int::<T>(3) / int::<T>(2);
    Ok((three_halves.clone() * lo, three_halves * hi))
}

/// The scalar bracket at `s*` in closed form:
/// `(6n(n+1)/(2n²+3n+1), 12n²+6n)`.
pub fn scalar_bounds_at_optimum(n: u32) -> (Rational, Rational) {
    let n: i64 = n.into();
    (rational(6 * n * (n + 1), 2 * n * n + 3 * n + 1), rational(12 * n * n + 6 * n, 1))
}

/// Direction weights of the minimizing vector at `E` for `s = s*`:
/// `(2n/(2n+1), (1+n)/(1+3n+2n²))`.
pub fn extremal_weights_at_optimum(n: u32) -> DirectionWeights<Rational> {
    let n: i64 = n.into();
    DirectionWeights { a: rational(2 * n, 2 * n + 1), b: rational(1 + n, 1 + 3 * n + 2 * n * n) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(n: u32, s: f64, r: f64) -> FiberState<f64> {
        FiberState::finite(n, s, r).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn components_at_r_zero() {
        let q =
            |n, s: Rational| fiber_curvature_components(&FiberState::finite(n, s, rational(0, 1)).unwrap()).unwrap();
        assert_eq!(q(1, rational(1, 3)), (rational(8, 3), rational(1, 3), rational(2, 3)));
        assert_eq!(q(2, rational(1, 10)), (rational(12, 5), rational(1, 5), rational(1, 5)));
        assert!(fiber_curvature_components(&FiberState::<f64>::at_infinity(1, 0.5).unwrap()).is_err());
    }

    #[test]
    fn coefficient_values() {
        let s = FiberState::finite(1, rational(1, 3), rational(0, 1)).unwrap();
        assert_eq!(coefficients(&s), (rational(3, 1), rational(6, 1), rational(12, 1)));
        for r in [0.0, 0.5, 3.0, 100.0] {
            let (_, _, gamma) = coefficients(&st(3, 0.05, r));
            assert_eq!(gamma, 4.0 / 0.05);
            assert!(close(k_quadratic(&st(3, 0.05, r), &DirectionWeights::vertical()), 80.0, 1e-15));
        }
        let h0 = k_quadratic(&st(2, 0.1, 0.0), &DirectionWeights::horizontal());
        assert!(close(h0, 4.0 / 1.2, 1e-15));
    }

    #[test]
    fn stationary_weights_examples() {
        let w = stationary_weights(&FiberState::finite(1, rational(1, 3), rational(0, 1)).unwrap());
        assert_eq!((w.a, w.b), (rational(1, 1), rational(0, 1)));
        let w = stationary_weights(&FiberState::at_infinity(2, rational(1, 10)).unwrap());
        assert_eq!((w.a, w.b), (rational(4, 5), rational(1, 5)));
        // Large finite r approaches the limit.
        let w = stationary_weights(&st(2, 0.1, 1e9));
        assert!(close(w.a, 0.8, 1e-8) && close(w.b, 0.2, 1e-8));
    }

    #[test]
    fn stationary_point_is_lagrange_critical() {
        for (n, s, r) in [(1, 0.3, 0.2), (2, 0.1, 0.4), (5, 0.02, 7.0), (3, 0.05, 0.0)] {
            let state = st(n, s, r);
            let (alpha, beta, gamma) = coefficients(&state);
            let w = stationary_weights(&state);
            let da = 2.0 * alpha * w.a + beta * w.b;
            let db = beta * w.a + 2.0 * gamma * w.b;
            assert!((da - db).abs() < 1e-10 * da.abs().max(1.0));
            assert!(close(lagrange_multiplier(&state), da, 1e-14));
            assert!(close(f_s(&state), k_quadratic(&state, &w), 1e-12));
        }
    }

    #[test]
    fn f_and_h_values() {
        let f_inf = f_s(&FiberState::at_infinity(1, rational(1, 3)).unwrap());
        assert_eq!(f_inf, rational(4, 3));
        let f0 = f_s(&st(2, 0.1, 0.0));
        assert!(close(f0, 3.2 / 1.08, 1e-14));
        assert!((f0 - 2.962963).abs() < 1e-6);
        for n in 1..5 {
            assert_eq!(h_s(&FiberState::at_infinity(n, rational(1, 50)).unwrap()), rational(4, 1));
        }
    }

    #[test]
    fn critical_radius_examples() {
        assert_eq!(critical_radius(2, &rational(1, 10)).unwrap(), rational(2, 5));
        assert_eq!(f_at_r0(2, &rational(1, 10)).unwrap(), rational(13, 4));
        assert_eq!(critical_radius(1, &rational(3, 7)).unwrap(), rational(0, 1));
        assert_eq!(critical_radius(3, &rational(1, 21)).unwrap(), rational(4, 7));
        assert_eq!(f_at_r0(3, &rational(1, 21)).unwrap(), rational(10, 3));
    }

    #[test]
    fn case_bounds_chain() {
        let b = case_bounds(2, &rational(1, 10)).unwrap();
        assert_eq!(
            b.chain(),
            [rational(40, 1), rational(4, 1), rational(10, 3), rational(13, 4), rational(80, 27), rational(8, 5)]
        );
        assert!(b.strictly_decreasing);
        assert_eq!(b.f_at_r0, b.critical_value);
        assert!(case_bounds(5, &0.01).unwrap().strictly_decreasing);
        assert!(matches!(case_bounds(2, &0.25), Err(Error::PositivityViolated { n: 2, .. })));
        // n = 1: the interior critical point collapses onto h_s(0).
        let b1 = case_bounds(1, &rational(1, 3)).unwrap();
        assert_eq!(b1.r0, rational(0, 1));
        assert!(!b1.strictly_decreasing);
    }

    #[test]
    fn min_max_examples() {
        assert_eq!(min_max_hsc(1, &rational(1, 3)).unwrap(), (rational(4, 3), rational(12, 1)));
        assert_eq!(min_max_hsc(2, &rational(1, 10)).unwrap(), (rational(8, 5), rational(40, 1)));
        assert_eq!(min_max_hsc(3, &rational(1, 21)).unwrap(), (rational(12, 7), rational(84, 1)));
    }

    #[test]
    fn optimal_parameters_are_exact() {
        for (n, s, p) in [(1u32, 3i64, 9i64), (2, 10, 25), (4, 36, 81)] {
            let (s_star, p_star) = optimal_s::<Rational>(n).unwrap();
            assert_eq!(s_star, rational(1, s));
            assert_eq!(p_star, rational(1, p));
        }
        for n in 1..=12u32 {
            let (_, p_star) = optimal_s::<Rational>(n).unwrap();
            let k = 1 + 2 * i64::from(n);
            assert_eq!(p_star, rational(1, k * k));
        }
    }

    #[test]
    fn scalar_bound_examples() {
        for n in 1..=6u32 {
            let (s_star, _) = optimal_s::<Rational>(n).unwrap();
            assert_eq!(scalar_bounds(n, &s_star).unwrap(), scalar_bounds_at_optimum(n));
        }
        assert_eq!(scalar_bounds_at_optimum(1), (rational(2, 1), rational(18, 1)));
        assert_eq!(scalar_bounds_at_optimum(2), (rational(12, 5), rational(60, 1)));
    }

    #[test]
    fn limit_weights_at_optimum() {
        for n in 1..=6u32 {
            let (s_star, _) = optimal_s::<Rational>(n).unwrap();
            let w = stationary_weights(&FiberState::at_infinity(n, s_star).unwrap());
            assert_eq!(w, extremal_weights_at_optimum(n));
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(FiberState::finite(0, 0.1, 0.0).is_err());
        assert!(FiberState::finite(1, 0.0, 0.0).is_err());
        assert!(FiberState::finite(1, 0.1, -1.0).is_err());
        assert!(DirectionWeights::new(1.5).is_err());
        assert!(pinching(3, &(1.0 / 9.0)).is_err());
    }
}
