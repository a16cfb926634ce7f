//! Metrics on the steps of a graphon: neighborhood distance, similarity
//! distance, purification, packing numbers, average nets and Voronoi
//! cells.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{StepBigraphon, StepGraphon};
use crate::partition::Partition;

/// Steps closer than this in `r_W` are treated as twins.
pub const TWIN_TOL: f64 = 1e-9;

/// Largest point count accepted by the exact packing number.
pub const EXACT_PACKING_MAX_POINTS: usize = 20;

/// A finite metric measure space: one point per step.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricView {
    mu: Vec<f64>,
    dist: Vec<f64>,
}

impl MetricView {
    /// Checks symmetry, zero diagonal and nonnegativity; the triangle
    /// inequality is checked in debug builds only.
    pub fn new(mu: Vec<f64>, dist: Vec<Vec<f64>>) -> Result<Self> {
        let k = mu.len();
        if dist.len() != k || dist.iter().any(|r| r.len() != k) {
            return Err(Error::Shape(format!("distance matrix must be {k}x{k}")));
        }
        let flat: Vec<f64> = dist.into_iter().flatten().collect();
        let view = MetricView { mu, dist: flat };
        view.validate()?;
        if cfg!(debug_assertions) {
            view.check_triangle(1e-9)?;
        }
        Ok(view)
    }

    fn validate(&self) -> Result<()> {
        let k = self.k();
        for i in 0..k {
            if self.get(i, i) != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "nonzero self-distance at {i}"
                )));
            }
            for j in 0..k {
                let d = self.get(i, j);
                if !(d >= 0.0) || !d.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "bad distance {d} at ({i}, {j})"
                    )));
                }
                if d != self.get(j, i) {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn check_triangle(&self, tol: f64) -> Result<()> {
        let k = self.k();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if self.get(a, c) > self.get(a, b) + self.get(b, c) + tol {
                        return Err(Error::TriangleViolation(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.mu.len() + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        let k = self.k();
        (0..k)
            .map(|i| self.dist[i * k..(i + 1) * k].to_vec())
            .collect()
    }

    /// Distance from `x` to the nearest point of `set`.
    pub fn distance_to_set(&self, x: usize, set: &[usize]) -> f64 {
        set.iter()
            .map(|&s| self.get(x, s))
            .fold(f64::INFINITY, f64::min)
    }

    /// `Σ_x mu_x d(x, set)`.
    pub fn average_distance(&self, set: &[usize]) -> f64 {
        (0..self.k())
            .map(|x| self.mu[x] * self.distance_to_set(x, set))
            .sum()
    }

    /// CSV: a header row of point indices, then one row per point.
    pub fn to_csv(&self) -> String {
        let k = self.k();
        let mut out = (0..k).map(|i| i.to_string()).collect::<Vec<_>>().join(",");
        out.push('\n');
        for i in 0..k {
            let row: Vec<String> = (0..k).map(|j| crate::io::fmt_f64(self.get(i, j))).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Symmetric distance matrix filled in parallel; each entry is computed
/// independently, so the result is the same for any worker count.
fn pairwise(k: usize, f: impl Fn(usize, usize) -> f64 + Sync) -> Vec<f64> {
    let upper: Vec<Vec<f64>> = (0..k)
        .into_par_iter()
        .map(|i| (i + 1..k).map(|j| f(i, j)).collect())
        .collect();
    let mut dist = vec![0.0; k * k];
    for (i, row) in upper.into_iter().enumerate() {
        for (off, d) in row.into_iter().enumerate() {
            let j = i + 1 + off;
            dist[i * k + j] = d;
            dist[j * k + i] = d;
        }
    }
    dist
}

fn row_l1(mu: &[f64], a: &[f64], b: &[f64]) -> f64 {
    mu.iter()
        .zip(a.iter().zip(b))
        .map(|(m, (x, y))| m * (x - y).abs())
        .sum()
}

/// `r_W(a, b)` for a single pair of steps.
pub fn neighborhood_distance(w: &StepGraphon, a: usize, b: usize) -> f64 {
    row_l1(w.mu(), w.row(a), w.row(b))
}

/// The neighborhood distance `r_W(i, j) = Σ_z mu_z |w(i, z) - w(j, z)|`.
pub fn neighborhood_metric(w: &StepGraphon) -> MetricView {
    MetricView {
        mu: w.mu().to_vec(),
        dist: pairwise(w.k(), |i, j| neighborhood_distance(w, i, j)),
    }
}

/// Row metric `r_1` (weighted by the column measure) and column metric
/// `r_2` (weighted by the row measure).
pub fn bigraphon_metrics(w: &StepBigraphon) -> (MetricView, MetricView) {
    let rows = MetricView {
        mu: w.mu1().to_vec(),
        dist: pairwise(w.k1(), |i, j| row_l1(w.mu2(), w.row(i), w.row(j))),
    };
    let t = w.transpose();
    let cols = MetricView {
        mu: w.mu2().to_vec(),
        dist: pairwise(t.k1(), |i, j| row_l1(t.mu2(), t.row(i), t.row(j))),
    };
    (rows, cols)
}

/// The similarity distance `r_{W∘W}`: the neighborhood distance of the
/// operator square.
pub fn similarity_metric(w: &StepGraphon) -> MetricView {
    neighborhood_metric(&w.square())
}

/// Merges steps at neighborhood distance at most [`TWIN_TOL`]. Returns the
/// twin-free graphon and the map from old steps to new steps.
pub fn purify(w: &StepGraphon) -> (StepGraphon, Vec<usize>) {
    let mut current = w.clone();
    let mut map: Vec<usize> = (0..w.k()).collect();
    loop {
        let k = current.k();
        // Union-find over twin pairs.
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut merged = false;
        for i in 0..k {
            for j in i + 1..k {
                if neighborhood_distance(&current, i, j) <= TWIN_TOL {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[b.max(a)] = a.min(b);
                        merged = true;
                    }
                }
            }
        }
        if !merged {
            return (current, map);
        }
        let labels: Vec<usize> = (0..k).map(|i| find(&mut parent, i)).collect();
        let p =
            Partition::canonical(current.mu().to_vec(), &labels).expect("labels cover every step");
        current = collapse(&current, &p);
        for m in map.iter_mut() {
            *m = p.class_of(*m);
        }
    }
}

/// The quotient graphon on the classes of `p`, with block averages.
fn collapse(w: &StepGraphon, p: &Partition) -> StepGraphon {
    let avg = crate::partition::block_averages(w, p);
    StepGraphon::from_flat(p.class_measures(), avg).expect("block averages form a graphon")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PackingMode {
    /// Branch and bound, at most 20 points.
    Exact,
    /// Farthest-point insertion; a lower bound.
    Greedy,
}

/// A set of points with pairwise distances at least `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct Packing {
    pub points: Vec<usize>,
    pub exact: bool,
}

impl Packing {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

pub fn packing_number(m: &MetricView, eps: f64, mode: PackingMode) -> Result<Packing> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must be positive, got {eps}"
        )));
    }
    match mode {
        PackingMode::Exact => {
            if m.k() > EXACT_PACKING_MAX_POINTS {
                return Err(Error::SizeLimit {
                    what: "point count for exact packing",
                    got: m.k(),
                    limit: EXACT_PACKING_MAX_POINTS,
                });
            }
            Ok(Packing {
                points: max_packing(m, eps),
                exact: true,
            })
        }
        PackingMode::Greedy => Ok(Packing {
            points: greedy_packing(m, eps),
            exact: false,
        }),
    }
}

/// Maximum clique in the graph joining points at distance `>= eps`.
fn max_packing(m: &MetricView, eps: f64) -> Vec<usize> {
    let k = m.k();
    let compat: Vec<u32> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| j != i && m.get(i, j) >= eps)
                .fold(0u32, |acc, j| acc | 1 << j)
        })
        .collect();

    fn expand(compat: &[u32], chosen: u32, candidates: u32, best: &mut u32) {
        if candidates == 0 {
            if chosen.count_ones() > best.count_ones() {
                *best = chosen;
            }
            return;
        }
        if chosen.count_ones() + candidates.count_ones() <= best.count_ones() {
            return;
        }
        let v = candidates.trailing_zeros() as usize;
        expand(compat, chosen | 1 << v, candidates & compat[v], best);
        expand(compat, chosen, candidates & !(1 << v), best);
    }

    let mut best = 0u32;
    expand(
        &compat,
        0,
        if k == 32 { u32::MAX } else { (1u32 << k) - 1 },
        &mut best,
    );
    (0..k).filter(|&i| best >> i & 1 == 1).collect()
}

/// Starts from point 0 and keeps adding the point farthest from the
/// current set while that distance is at least `eps`.
fn greedy_packing(m: &MetricView, eps: f64) -> Vec<usize> {
    let k = m.k();
    let mut points = vec![0];
    let mut near: Vec<f64> = (0..k).map(|x| m.get(x, 0)).collect();
    loop {
        let (far, d) = near
            .iter()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc },
            );
        if d < eps {
            return points;
        }
        points.push(far);
        for (x, n) in near.iter_mut().enumerate() {
            *n = n.min(m.get(x, far));
        }
    }
}

/// Least-squares slope of `log N(eps)` against `log(1/eps)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionEstimate {
    pub slope: f64,
    /// `(eps, N(eps))` for every grid point.
    pub table: Vec<(f64, usize)>,
    pub exact: bool,
}

pub fn packing_dimension_estimate(
    m: &MetricView,
    eps_grid: &[f64],
    mode: PackingMode,
) -> Result<DimensionEstimate> {
    if eps_grid.len() < 2 {
        return Err(Error::InvalidParameter(
            "grid needs at least two points".into(),
        ));
    }
    if eps_grid.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
        return Err(Error::InvalidParameter(
            "grid points must lie in (0, 1)".into(),
        ));
    }
    if eps_grid.windows(2).any(|p| p[1] >= p[0]) {
        return Err(Error::InvalidParameter(
            "grid must be strictly decreasing".into(),
        ));
    }
    let mut table = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        table.push((eps, packing_number(m, eps, mode)?.count()));
    }
    let xs: Vec<f64> = table.iter().map(|(e, _)| (1.0 / e).ln()).collect();
    let ys: Vec<f64> = table.iter().map(|&(_, n)| (n as f64).ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(DimensionEstimate {
        slope: sxy / sxx,
        table,
        exact: mode == PackingMode::Exact,
    })
}

/// An average net and the cost history of its greedy construction.
#[derive(Debug, Clone, PartialEq)]
pub struct AverageNet {
    pub centers: Vec<usize>,
    pub cost: f64,
    /// Cost after each insertion, starting with the single seed center.
    pub trace: Vec<f64>,
}

/// Greedy weighted k-median: seed with the weighted 1-median, then add the
/// point with the largest cost reduction until the average distance to the
/// centers is at most `eps`.
pub fn average_net(m: &MetricView, eps: f64) -> Result<AverageNet> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must be nonnegative, got {eps}"
        )));
    }
    let k = m.k();
    let mu = m.mu();
    let seed_cost = |c: usize| -> f64 { (0..k).map(|x| mu[x] * m.get(x, c)).sum() };
    let mut seed = 0;
    let mut cost = seed_cost(0);
    for c in 1..k {
        let v = seed_cost(c);
        if v < cost {
            seed = c;
            cost = v;
        }
    }
    let mut centers = vec![seed];
    let mut near: Vec<f64> = (0..k).map(|x| m.get(x, seed)).collect();
    let mut trace = vec![cost];
    while cost > eps {
        let mut best = (usize::MAX, 0.0);
        for c in 0..k {
            let gain: f64 = (0..k)
                .map(|x| mu[x] * (near[x] - m.get(x, c)).max(0.0))
                .sum();
            if gain > best.1 {
                best = (c, gain);
            }
        }
        if best.0 == usize::MAX {
            break;
        }
        let c = best.0;
        centers.push(c);
        for (x, n) in near.iter_mut().enumerate() {
            *n = n.min(m.get(x, c));
        }
        cost = (0..k).map(|x| mu[x] * near[x]).sum();
        trace.push(cost);
    }
    Ok(AverageNet {
        centers,
        cost,
        trace,
    })
}

/// Voronoi cells of `centers`. Every center is placed in its own cell;
/// other points go to the nearest center, ties to the center listed first.
/// Classes are numbered in the order of `centers`.
pub fn voronoi_partition(m: &MetricView, centers: &[usize]) -> Result<Partition> {
    if centers.is_empty() {
        return Err(Error::InvalidParameter("no centers".into()));
    }
    let k = m.k();
    let mut cell_of_center = vec![None; k];
    for (idx, &c) in centers.iter().enumerate() {
        if c >= k {
            return Err(Error::IndexOutOfRange { index: c, bound: k });
        }
        if cell_of_center[c].replace(idx).is_some() {
            return Err(Error::InvalidParameter(format!("center {c} listed twice")));
        }
    }
    let assign = (0..k)
        .map(|x| {
            cell_of_center[x].unwrap_or_else(|| {
                let mut best = 0;
                for (idx, &c) in centers.iter().enumerate().skip(1) {
                    if m.get(x, c) < m.get(x, centers[best]) {
                        best = idx;
                    }
                }
                best
            })
        })
        .collect();
    Partition::new(m.mu().to_vec(), assign)
}
