//! End-to-end acceptance criteria. Each test writes one PASS/FAIL line to
//! stderr, bypassing the test harness's output capture.

use std::io::Write;
use std::time::{Duration, Instant};

use kahler_cli::commands;
use kahler_pinch::berger::{berger_scalar, berger_vs_trace, SphereSampleConfig};
use kahler_pinch::geometry::{
    check_symmetries, curvature_tensor, holomorphic_sectional_curvature, ChartPoint, TangentVector,
};
use kahler_pinch::hirzebruch::{
    case_bounds, coefficients, extremal_weights_at_optimum, fiber_curvature_components, optimal_s, rational,
    scalar_bounds, stationary_weights, FiberState,
};
use kahler_pinch::models::{fd_metric_from_potential, fd_metric_jet, kahler_residual, MetricModel, DEFAULT_FD_STEP};
use kahler_pinch::pinch::{fiber_ricci_eigenvalues, sweep_fiber, SweepConfig};
use kahler_pinch::product::{product_bounds, verify_product_numeric, ProductPinchInput};
use kahler_pinch::scalar::field_to_f64;
use kahler_pinch::{HitchinParams, Rational};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MASTER_SEED: u64 = 0x5eed_2024;

fn report(id: u32, title: &str, failures: &[String], detail: String) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "criterion {id} [{verdict}] {title}: {detail}");
    for f in failures.iter().take(10) {
        let _ = writeln!(err, "    {f}");
    }
    assert!(failures.is_empty(), "criterion {id} failed: {failures:?}");
}

fn rel(x: f64, want: f64) -> f64 {
    (x - want).abs() / want.abs()
}

#[test]
fn criterion_1_optimal_pinching_per_surface() {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    for n in 1..=6u32 {
        let start = Instant::now();
        let r = commands::pinch(n, None, 512, 1e-6).unwrap();
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        let s = r.params.s;
        let nf = f64::from(n);
        let p_want = 1.0 / (1.0 + 2.0 * nf).powi(2);
        let min_want = (4.0 - 4.0 * nf * nf * s) / (1.0 + s + 2.0 * nf * s);
        let max_want = 4.0 / s;
        let rep = &r.results.report;
        let errs = (rel(rep.pinching, p_want), rel(rep.min_k, min_want), rel(rep.max_k, max_want));
        if errs.0 > 1e-6 || errs.1 > 1e-4 || errs.2 > 1e-9 {
            failures.push(format!("n={n}: relative errors (pinching, min, max) = {errs:?}"));
        }
        if !r.pass || r.params.s_exact.as_deref() != Some(&format!("1/{}", 2 * n * n + n)) {
            failures.push(format!("n={n}: command verdict {} at s = {:?}", r.pass, r.params.s_exact));
        }
        if elapsed > Duration::from_secs(10) {
            failures.push(format!("n={n}: took {elapsed:?}"));
        }
    }
    report(1, "pinching 1/(1+2n)^2 at s* for n = 1..6", &failures, format!("slowest n took {slowest:.2?}"));
}

#[test]
fn criterion_2_optimal_s_brackets() {
    let mut failures = Vec::new();
    let mut detail = Vec::new();
    for n in 1..=4u32 {
        let start = Instant::now();
        let r = commands::sweep_s(n, 999, 32).unwrap();
        let elapsed = start.elapsed();
        let res = &r.results;
        if (res.argmax_s - res.s_star).abs() > res.cell {
            failures.push(format!("n={n}: argmax {} vs s* {} (cell {})", res.argmax_s, res.s_star, res.cell));
        }
        if !res.unimodal || !res.analytic_unimodal {
            failures.push(format!("n={n}: unimodal numeric {} analytic {}", res.unimodal, res.analytic_unimodal));
        }
        if elapsed > Duration::from_secs(30) {
            failures.push(format!("n={n}: took {elapsed:?}"));
        }
        detail.push(format!("n={n} argmax {:.6} ({elapsed:.1?})", res.argmax_s));
    }
    report(2, "s-sweep over 999 points peaks within one cell of s*", &failures, detail.join(", "));
}

#[test]
fn criterion_3_inequality_chain() {
    let mut rng = ChaCha8Rng::seed_from_u64(MASTER_SEED ^ 3);
    let mut failures = Vec::new();
    for _ in 0..200 {
        let n = rng.gen_range(2..=6u32);
        let s = rational(rng.gen_range(1..1_000_000), 1_000_000 * i64::from(n * n));
        let chain = case_bounds(n, &s).unwrap();
        if !chain.strictly_decreasing {
            failures.push(format!("n={n} s={s}: {:?}", chain.chain()));
        }
    }
    report(
        3,
        "six-term chain strictly decreasing",
        &failures,
        format!("{} failures in 200 exact samples", failures.len()),
    );
}

fn oracle_models() -> Vec<(&'static str, MetricModel<f64>)> {
    vec![
        ("fs1", MetricModel::fubini_study(1)),
        ("fs2", MetricModel::fubini_study(2)),
        ("hitchin(1,1/3)", MetricModel::hitchin(1, 1.0 / 3.0).unwrap()),
        ("hitchin(2,1/10)", MetricModel::hitchin(2, 0.1).unwrap()),
        ("hitchin(3,1/21)", MetricModel::hitchin(3, 1.0 / 21.0).unwrap()),
        ("fs1xfs1", MetricModel::product(MetricModel::fubini_study(1), MetricModel::fubini_study(1))),
    ]
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> ChartPoint<f64> {
    let coords = (0..dim)
        .map(|_| Complex64::from_polar(rng.gen_range(0.0..radius), rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    ChartPoint::new(coords).unwrap()
}

#[test]
fn criterion_4_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(MASTER_SEED ^ 4);
    let mut failures = Vec::new();
    let mut worst_fd = 0.0f64;
    for (name, model) in oracle_models() {
        for _ in 0..20 {
            let p = random_point(&mut rng, model.dimension(), 1.5);
            let exact = model.metric_jet(&p).unwrap();
            let fd = fd_metric_jet(&model, &p, DEFAULT_FD_STEP).unwrap();
            let g_fd = fd_metric_from_potential(&model, &p, DEFAULT_FD_STEP).unwrap();
            let scale = |x: f64| x.max(1.0);
            let e = [
                exact.g.matrix().max_abs_diff(g_fd.matrix()) / scale(exact.g.matrix().max_abs()),
                exact.dg.max_abs_diff(&fd.dg) / scale(exact.dg.max_abs()),
                exact.ddg.max_abs_diff(&fd.ddg) / scale(exact.ddg.max_abs()),
            ];
            let e = e.iter().cloned().fold(0.0, f64::max);
            worst_fd = worst_fd.max(e);
            if e > 1e-5 {
                failures.push(format!("{name} at {:?}: {e:e}", p.coords));
            }
        }
    }
    let mut worst_fiber = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(1..=6u32);
        let s = rng.gen_range(0.01..1.0) / f64::from(n * n);
        let r = rng.gen_range(0.0..25.0f64);
        let (a, b, c) = fiber_curvature_components(&FiberState::finite(n, s, r).unwrap()).unwrap();
        let model = MetricModel::hitchin(n, s).unwrap();
        let jet = model.metric_jet(&ChartPoint::from_parts(&[(0.0, 0.0), (r.sqrt(), 0.0)]).unwrap()).unwrap();
        let rt = curvature_tensor(&jet).unwrap();
        for (got, want) in [(rt.get(0, 0, 0, 0), a), (rt.get(0, 0, 1, 1), b), (rt.get(1, 1, 1, 1), c)] {
            let e = (got - Complex64::new(want, 0.0)).norm() / want.abs();
            worst_fiber = worst_fiber.max(e);
            if e > 1e-10 {
                failures.push(format!("fiber n={n} s={s} r={r}: {got} vs {want}"));
            }
        }
    }
    report(
        4,
        "finite-difference and closed-form oracles",
        &failures,
        format!("worst jet error {worst_fd:.1e}, worst fiber component error {worst_fiber:.1e}"),
    );
}

#[test]
fn criterion_5_berger_lemma() {
    let start = Instant::now();
    let cfg = SphereSampleConfig { sample_count: 100_000, seed: MASTER_SEED, antithetic: false };
    let mut failures = Vec::new();
    let mut max_z = 0.0f64;
    let constant = [
        ("FS P1", MetricModel::fubini_study(1), 2.0),
        ("FS P2", MetricModel::fubini_study(2), 6.0),
        ("F0", MetricModel::product(MetricModel::fubini_study(1), MetricModel::fubini_study(1)), 4.0),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(MASTER_SEED ^ 5);
    for (name, model, target) in constant {
        let p = random_point(&mut rng, model.dimension(), 1.0);
        let row = &berger_vs_trace(&model, &[p], &cfg).unwrap()[0];
        max_z = max_z.max(row.zscore.abs());
        if row.zscore.abs() >= 3.0
            || (row.trace_tau - target).abs() > 1e-9
            || (row.estimate - target).abs() > 3.0 * row.stderr.max(1e-12)
        {
            failures.push(format!("{name}: {row:?}"));
        }
    }
    let hitchin = [(1u32, 0.0, 0.0), (1, 0.0, 3.0), (2, 0.4, 1.0), (3, 0.0, 2.0), (4, 1.0, 0.5)];
    for (n, z1, z2) in hitchin {
        let (s, _): (f64, f64) = optimal_s(n).unwrap();
        let model = MetricModel::hitchin(n, s).unwrap();
        let p = ChartPoint::from_parts(&[(z1, 0.0), (z2, 0.0)]).unwrap();
        let row = &berger_vs_trace(&model, &[p], &cfg).unwrap()[0];
        max_z = max_z.max(row.zscore.abs());
        if row.zscore.abs() >= 3.0 || row.in_bracket != Some(true) {
            failures.push(format!("hitchin n={n} at ({z1}, {z2}): {row:?}"));
        }
        let (sq, _): (Rational, Rational) = optimal_s(n).unwrap();
        let (lo, hi) = scalar_bounds(n, &sq).unwrap();
        let nn = i64::from(n);
        if lo != rational(6 * nn * (nn + 1), 2 * nn * nn + 3 * nn + 1) || hi != rational(12 * nn * nn + 6 * nn, 1) {
            failures.push(format!("n={n}: exact bracket [{lo}, {hi}]"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        failures.push(format!("took {elapsed:?}"));
    }
    report(
        5,
        "Monte Carlo scalar curvature and scalar bracket",
        &failures,
        format!("max |z| = {max_z:.2}, {elapsed:.1?}"),
    );
}

#[test]
fn criterion_6_product_theorem() {
    let mut failures = Vec::new();
    let fs1 = MetricModel::<f64>::fubini_study(1);
    let rep = verify_product_numeric(&fs1, &fs1, 4, 1e-6).unwrap();
    if (rep.min_k - 2.0).abs() > 1e-6
        || (rep.max_k - 4.0).abs() > 1e-6
        || (rep.pinching - 0.5).abs() > 1e-6
        || !rep.agree
    {
        failures.push(format!("FS x FS: {rep:?}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(MASTER_SEED ^ 6);
    let mut worst = 0.0f64;
    const Y_POINTS: usize = 1_000_000;
    for _ in 0..100 {
        let input =
            ProductPinchInput::new(rng.gen_range(0.01..=1.0), rng.gen_range(0.01..=1.0), rng.gen_range(0.1..20.0))
                .unwrap();
        let bounds = product_bounds(&input).unwrap();
        let (a, b) = (input.k * input.c_m, input.k * input.c_n);
        let brute = (0..=Y_POINTS)
            .map(|i| {
                let y = i as f64 / Y_POINTS as f64;
                a * y * y + b * (1.0 - y) * (1.0 - y)
            })
            .fold(f64::INFINITY, f64::min);
        let e = (brute - bounds.lower).abs();
        worst = worst.max(e);
        if e > 1e-9 {
            failures.push(format!("{input:?}: brute {brute} vs {}", bounds.lower));
        }
    }
    report(
        6,
        "product pinching c_M c_N/(c_M + c_N)",
        &failures,
        format!("FS x FS ({:.9}, {:.9}), worst y-grid gap {worst:.1e}", rep.min_k, rep.max_k),
    );
}

#[test]
fn criterion_7_extremizers_at_the_curve_at_infinity() {
    let mut failures = Vec::new();
    let mut detail = Vec::new();
    for n in 1..=4u32 {
        let (s, _): (f64, f64) = optimal_s(n).unwrap();
        let rep = sweep_fiber(&HitchinParams::new(n, s).unwrap(), &SweepConfig::default()).unwrap();
        let exact = extremal_weights_at_optimum(n);
        let (a, b) = (field_to_f64(&exact.a), field_to_f64(&exact.b));
        let w = &rep.argmin.weights;
        if rep.argmin.t != Some(1.0) || (w[0] - a).abs() > 1e-3 || (w[1] - b).abs() > 1e-3 {
            failures.push(format!("n={n}: argmin at t={:?} weights {w:?}, want ({a}, {b})", rep.argmin.t));
        }
        if rep.argmax.weights[0] > 1e-6 {
            failures.push(format!("n={n}: argmax weights {:?}", rep.argmax.weights));
        }
        // The limit point's own extrema are the global ones.
        let at_e = rep.profile.last().unwrap();
        if at_e.t != 1.0
            || rel(at_e.min_k, rep.min_k) > 1e-6
            || rel(at_e.max_k, rep.max_k) > 1e-6
            || rep.argmax.t != Some(1.0)
        {
            failures.push(format!("n={n}: limit point extrema {at_e:?} vs global ({}, {})", rep.min_k, rep.max_k));
        }
        detail.push(format!("n={n} a={:.6}", w[0]));
    }
    report(7, "limit weights, vertical argmax, pointwise pinching at E", &failures, detail.join(", "));
}

#[test]
fn criterion_8_property_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(MASTER_SEED ^ 8);
    let mut failures = Vec::new();
    let mut checks = 0usize;
    let models = oracle_models();
    for round in 0..300 {
        let (name, model) = &models[round % models.len()];
        let m = model.dimension();
        let p = random_point(&mut rng, m, 1.5);
        let jet = model.metric_jet(&p).unwrap();
        let r = curvature_tensor(&jet).unwrap();

        let xi = TangentVector::new(random_point(&mut rng, m, 2.0).coords);
        let lambda = Complex64::from_polar(rng.gen_range(0.01..10.0), rng.gen_range(0.0..std::f64::consts::TAU));
        if !xi.is_zero() {
            let k1 = holomorphic_sectional_curvature(&r, &jet.g, &xi).unwrap();
            let k2 = holomorphic_sectional_curvature(&r, &jet.g, &xi.scaled(lambda)).unwrap();
            checks += 1;
            if (k1 - k2).abs() > 1e-10 * k1.abs().max(1.0) {
                failures.push(format!("{name}: scaling {k1} vs {k2}"));
            }
        }
        let sym = check_symmetries(&r, &jet);
        checks += 2;
        if sym.max_relative_curvature_residual() > 1e-10 {
            failures.push(format!("{name}: symmetry residual {:e}", sym.max_relative_curvature_residual()));
        }
        if kahler_residual(&jet) >= 1e-10 {
            failures.push(format!("{name}: Kähler residual {:e}", kahler_residual(&jet)));
        }
    }
    for _ in 0..300 {
        let n = rng.gen_range(1..=6u32);
        let s = rational(rng.gen_range(1..1000), 1000 * i64::from(n * n));
        let r = rational(rng.gen_range(0..100_000), rng.gen_range(1..1000));
        for state in [FiberState::finite(n, s.clone(), r).unwrap(), FiberState::at_infinity(n, s).unwrap()] {
            let w = stationary_weights(&state);
            checks += 1;
            if w.a.clone() + w.b.clone() != rational(1, 1) {
                failures.push(format!("{state:?}: a0 + b0 = {}", w.a + w.b));
            }
        }
    }
    for (round, (name, model)) in models.iter().enumerate() {
        let p = random_point(&mut rng, model.dimension(), 1.0);
        let cfg = SphereSampleConfig { sample_count: 4000, seed: rng.gen(), antithetic: round % 2 == 0 };
        let (a, b) = (berger_scalar(model, &p, &cfg).unwrap(), berger_scalar(model, &p, &cfg).unwrap());
        checks += 1;
        if a.0.to_bits() != b.0.to_bits() || a.1.to_bits() != b.1.to_bits() {
            failures.push(format!("{name}: seeded runs differ {a:?} {b:?}"));
        }
    }
    report(8, "randomized property corpus", &failures, format!("{} violations in {checks} checks", failures.len()));
}

#[test]
fn criterion_9_ricci_not_positive() {
    let mut failures = Vec::new();
    let mut detail = Vec::new();
    for n in 2..=6u32 {
        let (s, _): (f64, f64) = optimal_s(n).unwrap();
        let params = HitchinParams::new(n, s).unwrap();
        let lowest = (0..=64)
            .map(|i| {
                let t = f64::from(i) / 64.0;
                (fiber_ricci_eigenvalues(&params, t).unwrap()[0], t)
            })
            .fold((f64::INFINITY, 0.0), |best, x| if x.0 < best.0 { x } else { best });
        // Same quantity in exact arithmetic: α/2 + β/8 at r = ∞.
        let (sq, _): (Rational, Rational) = optimal_s(n).unwrap();
        let (alpha, beta, _) = coefficients(&FiberState::at_infinity(n, sq).unwrap());
        let exact = alpha / rational(2, 1) + beta / rational(8, 1);
        if lowest.0 > 0.0 || exact > rational(0, 1) {
            failures.push(format!("n={n}: lowest eigenvalue {} at t={}, exact {exact}", lowest.0, lowest.1));
        }
        detail.push(format!("n={n} min {} at t={}", lowest.0, lowest.1));
    }
    report(9, "Ricci form has a non-positive eigenvalue for n >= 2", &failures, detail.join(", "));
}
