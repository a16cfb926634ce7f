//! Generators for example graphons and random test corpora.
//!
//! Randomized generators use ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`, so a seed yields the same output on every
//! platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{StepBigraphon, StepGraphon};
use crate::metrics::MetricView;

/// Largest depth accepted by [`binary_graphon`].
pub const BINARY_MAX_DEPTH: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// A sampled sphere graphon with its sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGraphon {
    pub graphon: StepGraphon,
    /// Unit vectors in `R^(dim + 1)`, one per step.
    pub points: Vec<Vec<f64>>,
}

/// `n` random points on the sphere `S^dim`, joined when their inner
/// product is nonnegative.
pub fn sphere_graphon(dim: usize, n: usize, seed: Seed) -> Result<SphereGraphon> {
    if dim < 1 {
        return Err(Error::InvalidParameter(
            "sphere dimension must be at least 1".into(),
        ));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 points, got {n}"
        )));
    }
    let mut rng = seed.rng();
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let v: Vec<f64> = (0..=dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            points.push(v.into_iter().map(|x| x / norm).collect::<Vec<f64>>());
        }
    }
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = if dot(&points[i], &points[j]) >= 0.0 {
                1.0
            } else {
                0.0
            };
            w[i * n + j] = v;
            w[j * n + i] = v;
        }
    }
    let graphon = StepGraphon::from_flat(vec![1.0 / n as f64; n], w)?;
    Ok(SphereGraphon { graphon, points })
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A finite metric space of diameter at most 1, read as a graphon.
pub fn metric_graphon(dist: &[Vec<f64>], mu: &[f64]) -> Result<StepGraphon> {
    let view = MetricView::new(mu.to_vec(), dist.to_vec())?;
    view.check_triangle(1e-9)?;
    for (i, row) in dist.iter().enumerate() {
        for (j, &d) in row.iter().enumerate() {
            if d > 1.0 {
                return Err(Error::ValueOutOfRange {
                    row: i,
                    col: j,
                    value: d,
                    lo: 0.0,
                    hi: 1.0,
                });
            }
        }
    }
    StepGraphon::new(mu.to_vec(), dist.to_vec())
}

/// `k` equally weighted points of `[0, 1]` at spacing `1/(k-1)`, with the
/// distance `|i - j|/(k-1)`.
pub fn unit_interval_metric(k: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let scale = if k > 1 { (k - 1) as f64 } else { 1.0 };
    let dist = (0..k)
        .map(|i| (0..k).map(|j| i.abs_diff(j) as f64 / scale).collect())
        .collect();
    (dist, vec![1.0 / k as f64; k])
}

/// The half graphon `H_n`: `n` equal steps, `w[i][j] = 1` iff `i + j <= n - 1`.
pub fn half_graphon(n: usize) -> Result<StepGraphon> {
    if n == 0 {
        return Err(Error::InvalidParameter("half graphon needs n >= 1".into()));
    }
    let rows = (0..n)
        .map(|i| (0..n).map(|j| if i + j < n { 1.0 } else { 0.0 }).collect())
        .collect();
    StepGraphon::uniform(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryVariant {
    Sym,
    Asym,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BinaryGraphon {
    Sym(StepGraphon),
    Asym(StepBigraphon),
}

/// Digit `k >= 1` of the binary expansion of the midpoint of cell `i` out
/// of `2^d` equal cells.
fn midpoint_digit(i: usize, d: u32, k: u32) -> f64 {
    let bit = match k.cmp(&(d + 1)) {
        std::cmp::Ordering::Less => i >> (d - k) & 1,
        std::cmp::Ordering::Equal => 1,
        std::cmp::Ordering::Greater => 0,
    };
    bit as f64
}

/// `⌈log2(1/y)⌉` at the midpoint of cell `j` out of `2^d`.
fn ceil_level(j: usize, d: u32) -> u32 {
    if j == 0 {
        d + 1
    } else {
        d - j.ilog2()
    }
}

/// `⌊log2(1/y)⌋` at the midpoint of cell `j` out of `2^d`.
fn floor_level(j: usize, d: u32) -> u32 {
    if j == 0 {
        d + 1
    } else {
        d - 1 - j.ilog2()
    }
}

/// Dyadic discretizations of the binary-digit graphons.
///
/// `Asym` is the bigraphon `W(x, y) = x_{f(y)}`, `f(y) = ⌈log2(1/y)⌉`, on
/// `2^depth` equal steps per side. `Sym` is the symmetric graphon equal to
/// `x_{f(y)}` for `x > 1/2 >= y` (and mirrored), `f(y) = ⌊log2(1/y)⌋`, zero
/// elsewhere, on `2^(depth+1)` equal steps. Both are evaluated at cell
/// midpoints.
pub fn binary_graphon(depth: u32, variant: BinaryVariant) -> Result<BinaryGraphon> {
    if depth == 0 || depth > BINARY_MAX_DEPTH {
        return Err(Error::InvalidParameter(format!(
            "depth must be in 1..={BINARY_MAX_DEPTH}, got {depth}"
        )));
    }
    match variant {
        BinaryVariant::Asym => {
            let n = 1usize << depth;
            let rows = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| midpoint_digit(i, depth, ceil_level(j, depth)))
                        .collect()
                })
                .collect();
            Ok(BinaryGraphon::Asym(StepBigraphon::uniform(rows)?))
        }
        BinaryVariant::Sym => {
            let d = depth + 1;
            let n = 1usize << d;
            let half = n / 2;
            let value = |x: usize, y: usize| {
                if x >= half && y < half {
                    midpoint_digit(x, d, floor_level(y, d))
                } else if x < half && y >= half {
                    midpoint_digit(y, d, floor_level(x, d))
                } else {
                    0.0
                }
            };
            let rows = (0..n)
                .map(|x| (0..n).map(|y| value(x, y)).collect())
                .collect();
            Ok(BinaryGraphon::Sym(StepGraphon::uniform(rows)?))
        }
    }
}

/// One column step per dyadic level of `binary_graphon(depth, variant)`:
/// for `Asym` the levels `1..=depth` of `⌈log2(1/y)⌉`, for `Sym` the levels
/// `1..=depth` of `⌊log2(1/y)⌋` inside `y <= 1/2`. Points at different
/// levels are far apart in the column metric.
pub fn binary_level_points(depth: u32, _variant: BinaryVariant) -> Vec<usize> {
    (1..=depth).map(|k| 1usize << (depth - k)).collect()
}

/// The two-step graphon `[[1, 1/2], [1/2, 1]]` on equal halves.
pub fn counterexample_u() -> StepGraphon {
    StepGraphon::uniform(vec![vec![1.0, 0.5], vec![0.5, 1.0]]).expect("valid graphon")
}

/// `k` equal steps with independent symmetric values, uniform in `[0, 1)`
/// or fair coin flips.
pub fn random_stepfunction(k: usize, seed: Seed, zero_one: bool) -> Result<StepGraphon> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let mut rng = seed.rng();
    let mut w = vec![0.0; k * k];
    for i in 0..k {
        for j in i..k {
            let v = if zero_one {
                if rng.random_bool(0.5) {
                    1.0
                } else {
                    0.0
                }
            } else {
                rng.random::<f64>()
            };
            w[i * k + j] = v;
            w[j * k + i] = v;
        }
    }
    StepGraphon::from_flat(vec![1.0 / k as f64; k], w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::kernel::graphon_from_graph;
    use crate::metrics::{bigraphon_metrics, neighborhood_metric};

    fn angle(a: &[f64], b: &[f64]) -> f64 {
        dot(a, b).clamp(-1.0, 1.0).acos() / std::f64::consts::PI
    }

    #[test]
    fn sphere_small_sample() {
        let s = sphere_graphon(2, 400, Seed(7)).unwrap();
        let w = &s.graphon;
        for i in 0..w.k() {
            assert_eq!(w.get(i, i), 1.0);
            assert!((dot(&s.points[i], &s.points[i]) - 1.0).abs() < 1e-12);
        }
        let r = neighborhood_metric(w);
        let tol = 3.0 / (400f64).sqrt();
        // The most nearly antipodal pair.
        let (mut a, mut b, mut best) = (0, 1, f64::INFINITY);
        for i in 0..w.k() {
            for j in i + 1..w.k() {
                let d = dot(&s.points[i], &s.points[j]);
                if d < best {
                    (a, b, best) = (i, j, d);
                }
            }
        }
        assert!((r.get(a, b) - 1.0).abs() <= tol);
        for (i, j) in [(0, 1), (5, 9), (17, 301), (100, 399)] {
            let sq = w.square_entry(i, j);
            assert!((1.0 - 2.0 * sq - angle(&s.points[i], &s.points[j])).abs() <= tol);
            assert!((r.get(i, j) - angle(&s.points[i], &s.points[j])).abs() <= tol);
        }
        assert!(sphere_graphon(2, 1, Seed(0)).is_err());
    }

    #[test]
    fn metric_graphon_examples() {
        let two = metric_graphon(&[vec![0.0, 1.0], vec![1.0, 0.0]], &[0.5, 0.5]).unwrap();
        assert_eq!(two, graphon_from_graph(&Graph::complete(2)).unwrap());
        let one = metric_graphon(&[vec![0.0]], &[1.0]).unwrap();
        assert_eq!(one.get(0, 0), 0.0);

        let (d, mu) = unit_interval_metric(33);
        let w = metric_graphon(&d, &mu).unwrap();
        let r = neighborhood_metric(&w);
        for i in 0..33 {
            for j in 0..33 {
                assert!(r.get(i, j) <= d[i][j] + 1e-12);
            }
        }

        let far = vec![vec![0.0, 1.5], vec![1.5, 0.0]];
        assert!(metric_graphon(&far, &[0.5, 0.5]).is_err());
        let bad = vec![
            vec![0.0, 0.1, 0.9],
            vec![0.1, 0.0, 0.1],
            vec![0.9, 0.1, 0.0],
        ];
        assert!(metric_graphon(&bad, &[0.25, 0.25, 0.5]).is_err());
    }

    #[test]
    fn half_graphon_rule() {
        let h2 = half_graphon(2).unwrap();
        assert_eq!(h2.to_rows(), vec![vec![1.0, 1.0], vec![1.0, 0.0]]);
        let h5 = half_graphon(5).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(h5.get(i, j) == 1.0, i + j <= 4);
            }
        }
        assert!(half_graphon(0).is_err());
    }

    #[test]
    fn asym_row_metric_is_weighted_digit_distance() {
        let BinaryGraphon::Asym(w) = binary_graphon(3, BinaryVariant::Asym).unwrap() else {
            panic!("expected a bigraphon");
        };
        let (r1, r2) = bigraphon_metrics(&w);
        for i in 0..8 {
            for j in 0..8 {
                let expect: f64 = (1..=3)
                    .map(|k| {
                        2f64.powi(-k)
                            * ((i >> (3 - k) & 1) as f64 - (j >> (3 - k) & 1) as f64).abs()
                    })
                    .sum();
                assert!((r1.get(i, j) - expect).abs() < 1e-15);
            }
        }
        let pts = binary_level_points(3, BinaryVariant::Asym);
        assert_eq!(pts.len(), 3);
        for (a, &x) in pts.iter().enumerate() {
            for &y in &pts[a + 1..] {
                assert!(r2.get(x, y) >= 0.5 - 1e-15);
            }
        }
    }

    #[test]
    fn asym_level_separation_for_every_depth() {
        for depth in 1..=8 {
            let BinaryGraphon::Asym(w) = binary_graphon(depth, BinaryVariant::Asym).unwrap() else {
                panic!("expected a bigraphon");
            };
            let (_, r2) = bigraphon_metrics(&w);
            let pts = binary_level_points(depth, BinaryVariant::Asym);
            assert_eq!(pts.len(), depth as usize);
            for (a, &x) in pts.iter().enumerate() {
                for &y in &pts[a + 1..] {
                    assert_eq!(r2.get(x, y), 0.5);
                }
            }
        }
    }

    #[test]
    fn sym_depth_one() {
        let BinaryGraphon::Sym(w) = binary_graphon(1, BinaryVariant::Sym).unwrap() else {
            panic!("expected a graphon");
        };
        // Midpoints 1/8, 3/8, 5/8, 7/8: f(1/8) = 3, f(3/8) = 1, and the
        // first and third digits of 5/8 = 0.101 and 7/8 = 0.111 are 1.
        let expect = vec![
            vec![0.0, 0.0, 1.0, 1.0],
            vec![0.0, 0.0, 1.0, 1.0],
            vec![1.0, 1.0, 0.0, 0.0],
            vec![1.0, 1.0, 0.0, 0.0],
        ];
        assert_eq!(w.to_rows(), expect);
    }

    #[test]
    fn sym_level_separation() {
        for depth in 2..=7 {
            let BinaryGraphon::Sym(w) = binary_graphon(depth, BinaryVariant::Sym).unwrap() else {
                panic!("expected a graphon");
            };
            let r = neighborhood_metric(&w);
            let pts = binary_level_points(depth, BinaryVariant::Sym);
            assert_eq!(pts.len(), depth as usize);
            let mut seps = Vec::new();
            for (a, &x) in pts.iter().enumerate() {
                for &y in &pts[a + 1..] {
                    seps.push(r.get(x, y));
                }
            }
            let min = seps.iter().cloned().fold(f64::INFINITY, f64::min);
            eprintln!("sym depth {depth}: min level separation {min}");
            assert!(min >= 0.2);
        }
    }

    #[test]
    fn binary_depth_limits() {
        assert!(binary_graphon(0, BinaryVariant::Sym).is_err());
        assert!(binary_graphon(13, BinaryVariant::Asym).is_err());
    }

    #[test]
    fn counterexample_values() {
        let u = counterexample_u();
        assert_eq!(u.get(0, 1), 0.5);
        assert_eq!(u.get(1, 0), 0.5);
        assert_eq!(u.mu(), &[0.5, 0.5]);
    }

    #[test]
    fn random_stepfunction_contract() {
        let a = random_stepfunction(6, Seed(42), false).unwrap();
        let b = random_stepfunction(6, Seed(42), false).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_stepfunction(6, Seed(43), false).unwrap());
        assert!(random_stepfunction(6, Seed(1), true).unwrap().is_zero_one());
        assert_eq!(random_stepfunction(1, Seed(0), false).unwrap().k(), 1);
        assert!(random_stepfunction(0, Seed(0), false).is_err());
    }
}
