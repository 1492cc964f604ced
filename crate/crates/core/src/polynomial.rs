//! Real-coefficient polynomials in `z_1..z_m, z̄_1..z̄_m`, differentiated
//! exactly, and Wirtinger derivatives of their logarithms.

use crate::scalar::{c, czero, Real, C};

#[derive(Clone, Debug, PartialEq)]
struct Monomial<T> {
    coef: T,
    /// Exponents of `z_1..z_m` followed by those of `z̄_1..z̄_m`.
    exps: Vec<u32>,
}

/// Polynomial kernel of a Kähler potential.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    dim: usize,
    terms: Vec<Monomial<T>>,
}

/// Wirtinger variable: `Z(i)` is `z_i`, `Zbar(i)` is `z̄_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Z(usize),
    Zbar(usize),
}

impl Var {
    fn slot(self, dim: usize) -> usize {
        match self {
            Var::Z(i) => i,
            Var::Zbar(i) => dim + i,
        }
    }
}

impl<T: Real> Polynomial<T> {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    pub fn constant(dim: usize, value: T) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(value, &[], &[]);
        p
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `coef · Π z_i^{a_i} Π z̄_j^{b_j}` given as `(index, power)` lists.
    pub fn add_term(&mut self, coef: T, z: &[(usize, u32)], zbar: &[(usize, u32)]) {
        let mut exps = vec![0; 2 * self.dim];
        for &(i, e) in z {
            exps[i] += e;
        }
        for &(i, e) in zbar {
            exps[self.dim + i] += e;
        }
        self.terms.push(Monomial { coef, exps });
    }

    /// `1 + Σ_{i∈idx} z_i z̄_i`
    pub fn one_plus_norm(dim: usize, idx: &[usize]) -> Self {
        let mut p = Self::constant(dim, T::one());
        for &i in idx {
            p.add_term(T::one(), &[(i, 1)], &[(i, 1)]);
        }
        p
    }

    /// Evaluates `∂^{vars} P` at `point`.
    pub fn derivative_at(&self, vars: &[Var], point: &[C<T>]) -> C<T> {
        let d = self.dim;
        let mut order = vec![0u32; 2 * d];
        for v in vars {
            order[v.slot(d)] += 1;
        }
        let values: Vec<C<T>> = point.iter().copied().chain(point.iter().map(|z| z.conj())).collect();
        let mut acc = czero();
        'terms: for term in &self.terms {
            let mut coef = term.coef;
            let mut val = c(T::one(), T::zero());
            for (slot, (&e, &o)) in term.exps.iter().zip(&order).enumerate() {
                if o > e {
                    continue 'terms;
                }
                for f in 0..o {
                    coef *= T::lit(f64::from(e - f));
                }
                if e > o {
                    val *= values[slot].powu(e - o);
                }
            }
            acc += val.scale(coef);
        }
        acc
    }

    pub fn value_at(&self, point: &[C<T>]) -> C<T> {
        self.derivative_at(&[], point)
    }
}

/// Set partitions of `{0..k}` as lists of bitmask blocks.
fn set_partitions(k: usize) -> Vec<Vec<u8>> {
    fn rec(i: usize, k: usize, blocks: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if i == k {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= 1 << i;
            rec(i + 1, k, blocks, out);
            blocks[b] &= !(1 << i);
        }
        blocks.push(1 << i);
        rec(i + 1, k, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(0, k, &mut Vec::new(), &mut out);
    out
}

/// Evaluates `∂^{vars} log P` at `point` via the set-partition expansion
/// `Σ_π (−1)^{|π|−1} (|π|−1)! Π_{B∈π} P_B / P^{|π|}`.
pub fn log_derivative_at<T: Real>(poly: &Polynomial<T>, vars: &[Var], point: &[C<T>]) -> C<T> {
    let k = vars.len();
    assert!((1..=4).contains(&k), "log derivatives implemented up to order 4");
    let n_sub = 1usize << k;
    let mut sub = vec![czero(); n_sub];
    for (mask, slot) in sub.iter_mut().enumerate() {
        let chosen: Vec<Var> = (0..k).filter(|b| mask & (1 << b) != 0).map(|b| vars[b]).collect();
        *slot = poly.derivative_at(&chosen, point);
    }
    let p = sub[0];
    let inv_p = c(T::one(), T::zero()) / p;
    let mut acc = czero();
    for part in set_partitions(k) {
        let blocks = part.len();
        let mut term = c(T::one(), T::zero());
        for &b in &part {
            term = term * sub[b as usize] * inv_p;
        }
        let mut weight = T::one();
        for f in 1..blocks {
            weight *= T::lit(f as f64);
        }
        if blocks % 2 == 0 {
            weight = -weight;
        }
        acc += term.scale(weight);
    }
    acc
}
