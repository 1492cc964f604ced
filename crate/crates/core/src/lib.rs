//! Curvature of Kähler metrics in local holomorphic coordinates, with
//! pinching certification for the Hitchin metrics `ω_s` on Hirzebruch
//! surfaces `F_n`.
//!
//! Numerical code is generic over [`Real`] (`f32`, `f64`); the closed-form
//! bounds in [`hirzebruch`] are generic over [`Field`] and also run in exact
//! rationals. The aliases below fix the common `f64` instantiations.

// `!(x > 0)` deliberately rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod berger;
pub mod error;
pub mod geometry;
pub mod hirzebruch;
pub mod linalg;
pub mod models;
pub mod optimize;
pub mod pinch;
pub mod polynomial;
pub mod product;
pub mod scalar;

pub use error::{Error, Result};
pub use geometry::{
    curvature_tensor, holomorphic_sectional_curvature, ricci, scalar_curvature, ChartPoint, CurvatureTensor,
    HermitianMatrix, MetricJet, TangentVector,
};
pub use hirzebruch::{FiberRadius, FiberState, Rational};
pub use models::{HitchinParams, MetricModel};
pub use pinch::{sweep_fiber, PinchingReport, SweepConfig};
pub use scalar::{Field, Real};

pub type Complex64 = num_complex::Complex<f64>;
pub type ChartPoint64 = ChartPoint<f64>;
pub type TangentVector64 = TangentVector<f64>;
pub type HermitianMatrix64 = HermitianMatrix<f64>;
pub type MetricJet64 = MetricJet<f64>;
pub type CurvatureTensor64 = CurvatureTensor<f64>;
pub type MetricModel64 = MetricModel<f64>;
pub type HitchinParams64 = HitchinParams<f64>;
pub type FiberState64 = FiberState<f64>;
pub type PinchingReport64 = PinchingReport<f64>;
pub type ExactFiberState = FiberState<Rational>;
