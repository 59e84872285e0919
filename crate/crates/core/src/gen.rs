//! Seeded random inputs for property suites.
//!
//! All masses are integer counts over a small denominator, so the same draw
//! is exact under [`Rational`](crate::Rational) and close to exact under
//! `f64`.

use rand::Rng;

use crate::cumulative::{cum_array, Array2, ContingencyTable};
use crate::frechet::FrechetInstance;
use crate::numeric::{Scalar, Tolerance};
use crate::tropical::{ExtendedTropical, TropicalMatrix};

const DENOMINATORS: [i64; 6] = [1, 3, 10, 12, 100, 1000];

/// Splits `total` into `parts` nonnegative integers via sorted cut points.
pub fn random_composition<R: Rng + ?Sized>(rng: &mut R, total: i64, parts: usize) -> Vec<i64> {
    let mut cuts: Vec<i64> = (0..parts.saturating_sub(1))
        .map(|_| rng.gen_range(0..=total))
        .collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut out = Vec::with_capacity(parts);
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(total - prev);
    out
}

/// Integer counts with roughly one zero category in five.
pub fn random_counts<R: Rng + ?Sized>(rng: &mut R, len: usize, max_count: i64) -> Vec<i64> {
    (0..len)
        .map(|_| {
            if rng.gen_bool(0.2) {
                0
            } else {
                rng.gen_range(1..=max_count)
            }
        })
        .collect()
}

/// A feasible instance with `n, m` uniform in `1..=max_dim`. `p` is a vector
/// of random counts; `q` a random composition of the same total; both are
/// divided by a denominator drawn from a small fixed set.
pub fn random_instance<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    max_dim: usize,
    tol: Tolerance,
) -> FrechetInstance<T> {
    let n = rng.gen_range(1..=max_dim.max(1));
    let m = rng.gen_range(1..=max_dim.max(1));
    let denom = DENOMINATORS[rng.gen_range(0..DENOMINATORS.len())];
    let mut p = random_counts(rng, n, 200);
    if p.iter().all(|&c| c == 0) {
        p[rng.gen_range(0..n)] = rng.gen_range(1..=200);
    }
    let total: i64 = p.iter().sum();
    let q = random_composition(rng, total, m);
    instance_from_counts(&p, &q, denom, tol).expect("equal totals by construction")
}

pub fn instance_from_counts<T: Scalar>(
    p: &[i64],
    q: &[i64],
    denom: i64,
    tol: Tolerance,
) -> crate::Result<FrechetInstance<T>> {
    FrechetInstance::from_masses(
        p.iter().map(|&c| T::from_ratio(c, denom)).collect(),
        q.iter().map(|&c| T::from_ratio(c, denom)).collect(),
        tol,
    )
}

/// Nonnegative array of small rationals, about a third of cells zero.
pub fn random_nonneg_array<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> Array2<T> {
    let denom = DENOMINATORS[rng.gen_range(0..DENOMINATORS.len())];
    let data = (0..rows * cols)
        .map(|_| {
            if rng.gen_bool(0.3) {
                T::zero()
            } else {
                T::from_ratio(rng.gen_range(1..=50), denom)
            }
        })
        .collect();
    Array2::new(rows, cols, data).expect("positive shape")
}

/// Cumulative array of a table whose cells are occasionally negative; about
/// half of the draws are Monge.
pub fn random_signed_cumulative<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> Array2<T> {
    let p_negative = 0.7 / (rows * cols) as f64;
    let data: Vec<T> = (0..rows * cols)
        .map(|_| {
            let v = rng.gen_range(0..=5);
            if rng.gen_bool(p_negative) {
                T::from_ratio(-1 - v, 2)
            } else {
                T::from_ratio(v, 2)
            }
        })
        .collect();
    // prefix sums of a signed table, built through an unsigned one
    let (pos, neg): (Vec<T>, Vec<T>) = data
        .iter()
        .map(|v| {
            if v.is_negative() {
                (T::zero(), v.neg())
            } else {
                (v.clone(), T::zero())
            }
        })
        .unzip();
    let pos = cum_array(&ContingencyTable::new(Array2::new(rows, cols, pos).unwrap()).unwrap());
    let neg = cum_array(&ContingencyTable::new(Array2::new(rows, cols, neg).unwrap()).unwrap());
    let out = pos
        .values()
        .data()
        .iter()
        .zip(neg.values().data())
        .map(|(a, b)| a.sub(b))
        .collect();
    Array2::new(rows, cols, out).unwrap()
}

/// Tropical matrix with `⊥` and `⊤` each drawn with probability `p_inf`.
pub fn random_tropical<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    p_inf: f64,
) -> TropicalMatrix<T> {
    let entries = (0..rows * cols)
        .map(|_| {
            let u: f64 = rng.gen();
            if u < p_inf {
                ExtendedTropical::Bottom
            } else if u < 2.0 * p_inf {
                ExtendedTropical::Top
            } else {
                ExtendedTropical::Finite(T::from_ratio(rng.gen_range(-20..=20), rng.gen_range(1..=4)))
            }
        })
        .collect();
    TropicalMatrix::new(rows, cols, entries).expect("positive shape")
}
