use kahler_pinch::berger::{berger_scalar, orthonormal_frame, SphereSampleConfig};
use kahler_pinch::geometry::{
    check_symmetries, curvature_tensor, holomorphic_sectional_curvature, norm_squared, ricci, scalar_curvature,
    ChartPoint, HermitianMatrix, TangentVector,
};
use kahler_pinch::hirzebruch::{case_bounds, rational, stationary_weights, FiberState};
use kahler_pinch::linalg::CMatrix;
use kahler_pinch::models::{kahler_residual, MetricModel};
use kahler_pinch::product::product_hsc;
use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn model() -> impl Strategy<Value = MetricModel<f64>> {
    let fs = (1usize..=3).prop_map(MetricModel::fubini_study);
    let hitchin =
        (1u32..=6, 0.02f64..0.98).prop_map(|(n, frac)| MetricModel::hitchin(n, frac / f64::from(n * n)).unwrap());
    let product = (1usize..=2, 1u32..=3, 0.1f64..0.9).prop_map(|(m, n, frac)| {
        MetricModel::product(MetricModel::fubini_study(m), MetricModel::hitchin(n, frac / f64::from(n * n)).unwrap())
    });
    prop_oneof![fs, hitchin, product]
}

fn complex(bound: f64) -> impl Strategy<Value = Complex64> {
    (0.0..bound, 0.0..std::f64::consts::TAU).prop_map(|(r, a)| Complex64::from_polar(r, a))
}

fn model_point_direction() -> impl Strategy<Value = (MetricModel<f64>, ChartPoint<f64>, TangentVector<f64>)> {
    model().prop_flat_map(|m| {
        let d = m.dimension();
        (
            Just(m),
            prop::collection::vec(complex(1.5), d).prop_map(|c| ChartPoint::new(c).unwrap()),
            prop::collection::vec(complex(2.0), d)
                .prop_filter("nonzero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-6)
                .prop_map(TangentVector::new),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn hsc_is_invariant_under_complex_scaling(
        (model, p, xi) in model_point_direction(),
        lambda in complex(5.0).prop_filter("nonzero", |z| z.norm() > 1e-3),
    ) {
        let jet = model.metric_jet(&p).unwrap();
        let r = curvature_tensor(&jet).unwrap();
        let k = holomorphic_sectional_curvature(&r, &jet.g, &xi).unwrap();
        let k2 = holomorphic_sectional_curvature(&r, &jet.g, &xi.scaled(lambda)).unwrap();
        prop_assert!((k - k2).abs() <= 1e-10 * k.abs().max(1.0), "{k} vs {k2}");
    }

    #[test]
    fn curvature_has_kahler_symmetries((model, p, _xi) in model_point_direction()) {
        let jet = model.metric_jet(&p).unwrap();
        let r = curvature_tensor(&jet).unwrap();
        let rep = check_symmetries(&r, &jet);
        prop_assert!(rep.max_relative_curvature_residual() < 1e-10, "{rep:?}");
        prop_assert!(kahler_residual(&jet) < 1e-10);
    }

    #[test]
    fn scalar_curvature_is_trace_of_ricci((model, p, _xi) in model_point_direction()) {
        let jet = model.metric_jet(&p).unwrap();
        let r = curvature_tensor(&jet).unwrap();
        let ric = ricci(&r, &jet.g).unwrap();
        let tau = scalar_curvature(&r, &jet.g).unwrap();
        // Trace of g⁻¹Ric computed independently through the unitary frame.
        let f = orthonormal_frame(&jet.g).unwrap();
        let mut trace = Complex64::zero();
        for a in 0..f.dim() {
            for i in 0..f.dim() {
                for j in 0..f.dim() {
                    trace += ric.get(i, j) * f[(i, a)] * f[(j, a)].conj();
                }
            }
        }
        prop_assert!((trace.re - tau).abs() <= 1e-9 * tau.abs().max(1.0) && trace.im.abs() < 1e-9);
    }

    #[test]
    fn frame_is_orthonormal(entries in prop::collection::vec(complex(1.0), 9), shift in 0.1f64..3.0) {
        let a = CMatrix::from_fn(3, |i, j| entries[3 * i + j]);
        let mut g = a.matmul(&a.adjoint());
        for i in 0..3 {
            g[(i, i)] += Complex64::new(shift, 0.0);
        }
        let g = HermitianMatrix::new(g).unwrap();
        let f = orthonormal_frame(&g).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let mut acc = Complex64::zero();
                for p in 0..3 {
                    for q in 0..3 {
                        acc += g.get(p, q) * f[(p, a)] * f[(q, b)].conj();
                    }
                }
                let want = if a == b { 1.0 } else { 0.0 };
                prop_assert!((acc - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn product_hsc_decomposes(
        (left, right) in (1usize..=2, 1u32..=3, 0.1f64..0.9).prop_map(|(m, n, frac)| {
            (MetricModel::fubini_study(m), MetricModel::hitchin(n, frac / f64::from(n * n)).unwrap())
        }),
        coords in prop::collection::vec(complex(1.5), 4),
        dir in prop::collection::vec(complex(1.0), 4),
    ) {
        let (ml, mr) = (left.dimension(), right.dimension());
        let product = MetricModel::product(left.clone(), right.clone());
        let pl = ChartPoint::new(coords[..ml].to_vec()).unwrap();
        let pr = ChartPoint::new(coords[ml..ml + mr].to_vec()).unwrap();
        let xl = TangentVector::new(dir[..ml].to_vec());
        let xr = TangentVector::new(dir[ml..ml + mr].to_vec());
        prop_assume!(!xl.is_zero() && !xr.is_zero());
        let jl = left.metric_jet(&pl).unwrap();
        let jr = right.metric_jet(&pr).unwrap();
        let kl = holomorphic_sectional_curvature(&curvature_tensor(&jl).unwrap(), &jl.g, &xl).unwrap();
        let kr = holomorphic_sectional_curvature(&curvature_tensor(&jr).unwrap(), &jr.g, &xr).unwrap();
        let (nl, nr) = (norm_squared(&jl.g, &xl), norm_squared(&jr.g, &xr));
        let y = nl / (nl + nr);

        let p = ChartPoint::new([pl.coords.clone(), pr.coords.clone()].concat()).unwrap();
        let xi = TangentVector::new([xl.components.clone(), xr.components.clone()].concat());
        let jet = product.metric_jet(&p).unwrap();
        let k = holomorphic_sectional_curvature(&curvature_tensor(&jet).unwrap(), &jet.g, &xi).unwrap();
        let want = product_hsc(kl, kr, y).unwrap();
        prop_assert!((k - want).abs() <= 1e-10 * want.abs().max(1.0), "{k} vs {want}");
        if kl > 0.0 && kr > 0.0 {
            prop_assert!(k > 0.0);
        }
    }

    #[test]
    fn stationary_weights_sum_to_one(n in 1u32..=6, p in 1i64..200, r_num in 0i64..10_000, r_den in 1i64..100) {
        let s = rational(p, 200 * i64::from(n * n));
        let w = stationary_weights(&FiberState::finite(n, s.clone(), rational(r_num, r_den)).unwrap());
        prop_assert!((w.a + w.b).is_one());
        let w = stationary_weights(&FiberState::at_infinity(n, s).unwrap());
        prop_assert!((w.a + w.b).is_one());
    }

    #[test]
    fn case_chain_is_strictly_decreasing(n in 2u32..=6, p in 1i64..1000) {
        let s = rational(p, 1000 * i64::from(n * n));
        let chain = case_bounds(n, &s).unwrap();
        prop_assert!(chain.strictly_decreasing);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn seeded_sampling_is_reproducible((model, p, _xi) in model_point_direction(), seed in any::<u64>(), anti in any::<bool>()) {
        let cfg = SphereSampleConfig { sample_count: 5000, seed, antithetic: anti };
        let a = berger_scalar(&model, &p, &cfg).unwrap();
        let b = berger_scalar(&model, &p, &cfg).unwrap();
        prop_assert_eq!(a.0.to_bits(), b.0.to_bits());
        prop_assert_eq!(a.1.to_bits(), b.1.to_bits());
    }
}
