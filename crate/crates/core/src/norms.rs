//! Cut norm and L1 norm of step kernels.
//!
//! For a step kernel the supremum over measurable rectangles `S × T` is
//! attained on unions of steps: with fractional step memberships the
//! objective is bilinear, so its maximum over the box sits at a vertex.
//! The exact mode therefore enumerates row subsets `S`; for a fixed `S`
//! the best `T` keeps exactly the columns with positive (respectively
//! negative) sum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::StepKernel;

/// Largest step count accepted by the exact cut norm.
pub const EXACT_CUT_NORM_MAX_STEPS: usize = 24;

const HEURISTIC_RESTARTS: usize = 20;
const HEURISTIC_SEED: u64 = 0x6375_746e_6f72_6d00;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutNormMode {
    /// Vertex enumeration over all step subsets, `k <= 24`.
    Exact,
    /// Alternating local search; a lower bound.
    Heuristic,
}

/// A cut-norm value together with whether it is exact or a lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutNormValue {
    pub value: f64,
    pub exact: bool,
}

pub fn cut_norm(r: &StepKernel, mode: CutNormMode) -> Result<f64> {
    let a = weighted(r);
    let k = r.k();
    match mode {
        CutNormMode::Exact => {
            if k > EXACT_CUT_NORM_MAX_STEPS {
                return Err(Error::SizeLimit {
                    what: "step count for exact cut norm",
                    got: k,
                    limit: EXACT_CUT_NORM_MAX_STEPS,
                });
            }
            Ok(exact_rectangle_max(&a, k, k))
        }
        CutNormMode::Heuristic => Ok(heuristic_rectangle_max(&a, k, k, HEURISTIC_SEED)),
    }
}

/// Exact when `k <= 24`, heuristic lower bound otherwise.
pub fn cut_norm_auto(r: &StepKernel) -> CutNormValue {
    let exact = r.k() <= EXACT_CUT_NORM_MAX_STEPS;
    let mode = if exact {
        CutNormMode::Exact
    } else {
        CutNormMode::Heuristic
    };
    CutNormValue {
        value: cut_norm(r, mode).expect("mode chosen within limits"),
        exact,
    }
}

pub fn l1_norm(r: &StepKernel) -> f64 {
    let mu = r.mu();
    let k = r.k();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| mu[i] * mu[j] * r.get(i, j).abs())
                .sum::<f64>()
        })
        .sum()
}

fn weighted(r: &StepKernel) -> Vec<f64> {
    let mu = r.mu();
    let k = r.k();
    let mut a = Vec::with_capacity(k * k);
    for i in 0..k {
        a.extend((0..k).map(|j| mu[i] * mu[j] * r.get(i, j)));
    }
    a
}

fn best_columns(col: &[f64]) -> (f64, f64) {
    col.iter().fold((0.0, 0.0), |(pos, neg), &c| {
        if c > 0.0 {
            (pos + c, neg)
        } else {
            (pos, neg - c)
        }
    })
}

/// `max over S ⊆ rows, T ⊆ cols of |Σ_{S×T} a|` for a row-major
/// `rows × cols` matrix, by Gray-code enumeration of `S`.
pub(crate) fn exact_rectangle_max(a: &[f64], rows: usize, cols: usize) -> f64 {
    let (pos, neg) = exact_one_sided(a, rows, cols);
    pos.max(neg)
}

/// The positive and negative one-sided rectangle optima.
///
/// The low rows are enumerated in Gray order inside each chunk; column
/// sums are rebuilt from scratch at every chunk start so rounding drift
/// stays bounded by one chunk. Chunks run in parallel; the reduction is a
/// maximum, so the result does not depend on the worker count.
pub(crate) fn exact_one_sided(a: &[f64], rows: usize, cols: usize) -> (f64, f64) {
    debug_assert_eq!(a.len(), rows * cols);
    let low = rows.min(12);
    let high = rows - low;
    let chunk = |h: usize| {
        let mut col = vec![0.0; cols];
        for bit in 0..high {
            if h >> bit & 1 == 1 {
                let i = low + bit;
                for (c, x) in col.iter_mut().zip(&a[i * cols..(i + 1) * cols]) {
                    *c += x;
                }
            }
        }
        let mut best = best_columns(&col);
        let mut gray = 0usize;
        for t in 1usize..(1 << low) {
            let bit = t.trailing_zeros() as usize;
            gray ^= 1 << bit;
            let row = &a[bit * cols..(bit + 1) * cols];
            if gray >> bit & 1 == 1 {
                col.iter_mut().zip(row).for_each(|(c, x)| *c += x);
            } else {
                col.iter_mut().zip(row).for_each(|(c, x)| *c -= x);
            }
            let (p, n) = best_columns(&col);
            best = (best.0.max(p), best.1.max(n));
        }
        best
    };
    if high == 0 {
        chunk(0)
    } else {
        (0..1usize << high)
            .into_par_iter()
            .map(chunk)
            .reduce(|| (0.0, 0.0), |x, y| (x.0.max(y.0), x.1.max(y.1)))
    }
}

/// Alternating sign-greedy search with seeded random restarts.
pub(crate) fn heuristic_rectangle_max(a: &[f64], rows: usize, cols: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    for restart in 0..HEURISTIC_RESTARTS {
        let start: Vec<bool> = if restart == 0 {
            vec![true; rows]
        } else {
            (0..rows).map(|_| rng.random_bool(0.5)).collect()
        };
        for sign in [1.0, -1.0] {
            best = best.max(local_search(a, rows, cols, start.clone(), sign));
        }
    }
    best
}

fn local_search(a: &[f64], rows: usize, cols: usize, mut s: Vec<bool>, sign: f64) -> f64 {
    let mut value = f64::NEG_INFINITY;
    loop {
        let mut col = vec![0.0; cols];
        for i in (0..rows).filter(|&i| s[i]) {
            for (c, x) in col.iter_mut().zip(&a[i * cols..(i + 1) * cols]) {
                *c += sign * x;
            }
        }
        let t: Vec<bool> = col.iter().map(|&c| c > 0.0).collect();
        let mut row = vec![0.0; rows];
        for (i, r) in row.iter_mut().enumerate() {
            *r = (0..cols)
                .filter(|&j| t[j])
                .map(|j| sign * a[i * cols + j])
                .sum();
        }
        let next: f64 = row.iter().filter(|&&r| r > 0.0).sum();
        if next <= value + 1e-15 {
            return value.max(0.0);
        }
        value = next;
        s = row.iter().map(|&r| r > 0.0).collect();
    }
}
