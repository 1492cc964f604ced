//! Derivative-free minimizers: golden-section search on an interval and
//! Nelder–Mead downhill simplex.

use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum<T, X> {
    pub x: X,
    pub value: T,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes `f` on `[lo, hi]` until the bracket is shorter than `xtol`.
/// The endpoints themselves are never evaluated.
pub fn golden_section<T: Real>(mut f: impl FnMut(T) -> T, lo: T, hi: T, xtol: T, max_iter: usize) -> Minimum<T, T> {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while (b - a) > xtol && iterations < max_iter {
        iterations += 1;
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    let converged = (b - a) <= xtol;
    if f1 <= f2 {
        Minimum { x: x1, value: f1, iterations, converged }
    } else {
        Minimum { x: x2, value: f2, iterations, converged }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexOptions<T> {
    /// Stop when the simplex values spread less than `ftol·max(1, |f_best|)`…
    pub ftol: T,
    /// …and every vertex lies within `xtol` of the best one.
    pub xtol: T,
    pub max_iter: usize,
}

/// Nelder–Mead with the standard coefficients (1, 2, ½, ½). `step` sets the
/// initial simplex edge along each axis.
pub fn nelder_mead<T: Real>(
    mut f: impl FnMut(&[T]) -> T,
    x0: &[T],
    step: T,
    opts: SimplexOptions<T>,
) -> Minimum<T, Vec<T>> {
    let dim = x0.len();
    if dim == 0 {
        let value = f(x0);
        return Minimum { x: Vec::new(), value, iterations: 0, converged: true };
    }
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let mut simplex: Vec<Vec<T>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<T> = simplex.iter().map(|v| f(v)).collect();
    let mut iterations = 0;
    let mut converged = false;
    loop {
        // Sort vertices by value; ties keep insertion order.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let best = values[0];
        let spread = values[dim] - best;
        let diameter = simplex[1..]
            .iter()
            .map(|v| v.iter().zip(&simplex[0]).fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).abs())))
            .fold(T::zero(), T::max);
        if spread <= opts.ftol * best.abs().max(T::one()) && diameter <= opts.xtol {
            converged = true;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }
        iterations += 1;

        let centroid: Vec<T> =
            (0..dim).map(|k| simplex[..dim].iter().map(|v| v[k]).sum::<T>() / T::lit(dim as f64)).collect();
        let toward = |coef: T, worst: &[T]| -> Vec<T> {
            centroid.iter().zip(worst).map(|(c, w)| *c + coef * (*w - *c)).collect()
        };
        let worst = simplex[dim].clone();
        let reflected = toward(-T::one(), &worst);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = toward(-two, &worst);
            let fe = f(&expanded);
            if fe < fr {
                simplex[dim] = expanded;
                values[dim] = fe;
            } else {
                simplex[dim] = reflected;
                values[dim] = fr;
            }
        } else if fr < values[dim - 1] {
            simplex[dim] = reflected;
            values[dim] = fr;
        } else {
            let (contracted, fc) = if fr < values[dim] {
                let x = toward(-half, &worst);
                let v = f(&x);
                (x, v)
            } else {
                let x = toward(half, &worst);
                let v = f(&x);
                (x, v)
            };
            if fc < values[dim].min(fr) {
                simplex[dim] = contracted;
                values[dim] = fc;
            } else {
                // Shrink toward the best vertex.
                let best_v = simplex[0].clone();
                for i in 1..=dim {
                    let v: Vec<T> = best_v.iter().zip(&simplex[i]).map(|(b, x)| *b + half * (*x - *b)).collect();
                    values[i] = f(&v);
                    simplex[i] = v;
                }
            }
        }
    }
    Minimum { x: simplex[0].clone(), value: values[0], iterations, converged }
}
