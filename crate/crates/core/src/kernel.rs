//! Finite step representations of kernels, graphons and bigraphons.
//!
//! A step representation is a finite probability vector `mu` (the step
//! measures) together with a matrix of values, one per pair of steps.
//! Matrices are stored row-major.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::graph::{Bigraph, Graph};

/// Tolerance on measure sums and basis comparisons.
pub const MEASURE_TOL: f64 = 1e-9;

pub(crate) fn validate_measure(mu: &[f64]) -> Result<()> {
    if mu.is_empty() {
        return Err(Error::InvalidMeasure("no steps".into()));
    }
    for (i, &m) in mu.iter().enumerate() {
        if !m.is_finite() || m <= 0.0 {
            return Err(Error::InvalidMeasure(format!("step {i} has measure {m}")));
        }
    }
    let total: f64 = mu.iter().sum();
    if (total - 1.0).abs() > MEASURE_TOL {
        return Err(Error::InvalidMeasure(format!("measures sum to {total}")));
    }
    Ok(())
}

/// True when both measure lists have the same length and agree within
/// [`MEASURE_TOL`].
pub fn same_basis(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= MEASURE_TOL)
}

fn flatten(rows: Vec<Vec<f64>>, k1: usize, k2: usize) -> Result<Vec<f64>> {
    if rows.len() != k1 {
        return Err(Error::Shape(format!(
            "expected {k1} rows, got {}",
            rows.len()
        )));
    }
    let mut flat = Vec::with_capacity(k1 * k2);
    for (i, row) in rows.into_iter().enumerate() {
        if row.len() != k2 {
            return Err(Error::Shape(format!(
                "row {i} has {} entries, expected {k2}",
                row.len()
            )));
        }
        flat.extend(row);
    }
    Ok(flat)
}

fn check_range(w: &[f64], cols: usize, lo: f64, hi: f64) -> Result<()> {
    for (idx, &v) in w.iter().enumerate() {
        if !(lo..=hi).contains(&v) {
            return Err(Error::ValueOutOfRange {
                row: idx / cols,
                col: idx % cols,
                value: v,
                lo,
                hi,
            });
        }
    }
    Ok(())
}

/// Symmetric step function with values in `[-1, 1]`.
///
/// Differences of graphons such as `W - W_P` live here.
#[derive(Debug, Clone, PartialEq)]
pub struct StepKernel {
    mu: Vec<f64>,
    w: Vec<f64>,
}

impl StepKernel {
    pub fn new(mu: Vec<f64>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = mu.len();
        let w = flatten(rows, k, k)?;
        Self::from_flat(mu, w)
    }

    pub(crate) fn from_flat(mu: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        validate_measure(&mu)?;
        let k = mu.len();
        if w.len() != k * k {
            return Err(Error::Shape(format!(
                "expected {} values, got {}",
                k * k,
                w.len()
            )));
        }
        check_range(&w, k, -1.0, 1.0)?;
        for i in 0..k {
            for j in i + 1..k {
                if w[i * k + j] != w[j * k + i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(StepKernel { mu, w })
    }

    pub fn k(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.mu.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let k = self.k();
        &self.w[i * k..(i + 1) * k]
    }

    pub fn values(&self) -> &[f64] {
        &self.w
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.k()).map(|i| self.row(i).to_vec()).collect()
    }
}

/// A graphon given as a symmetric step function with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepGraphon(StepKernel);

impl Deref for StepGraphon {
    type Target = StepKernel;

    fn deref(&self) -> &StepKernel {
        &self.0
    }
}

impl StepGraphon {
    pub fn new(mu: Vec<f64>, rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_kernel(StepKernel::new(mu, rows)?)
    }

    /// Steps of equal measure `1/k`.
    pub fn uniform(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = rows.len();
        Self::new(vec![1.0 / k as f64; k], rows)
    }

    /// The constant graphon on a single step.
    pub fn constant(p: f64) -> Result<Self> {
        Self::new(vec![1.0], vec![vec![p]])
    }

    pub fn from_kernel(kernel: StepKernel) -> Result<Self> {
        check_range(&kernel.w, kernel.k(), 0.0, 1.0)?;
        Ok(StepGraphon(kernel))
    }

    pub(crate) fn from_flat(mu: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        Self::from_kernel(StepKernel::from_flat(mu, w)?)
    }

    pub fn as_kernel(&self) -> &StepKernel {
        &self.0
    }

    pub fn into_kernel(self) -> StepKernel {
        self.0
    }

    /// `self - other` as a kernel on the common steps.
    pub fn difference(&self, other: &StepGraphon) -> Result<StepKernel> {
        if !same_basis(self.mu(), other.mu()) {
            return Err(Error::IncompatibleBasis);
        }
        let w = self.w.iter().zip(&other.w).map(|(a, b)| a - b).collect();
        StepKernel::from_flat(self.mu.clone(), w)
    }

    /// True when every value is exactly 0 or 1.
    pub fn is_zero_one(&self) -> bool {
        self.w.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    pub(crate) fn require_zero_one(&self) -> Result<()> {
        let k = self.k();
        match self.w.iter().position(|&v| v != 0.0 && v != 1.0) {
            None => Ok(()),
            Some(idx) => Err(Error::NotZeroOne {
                row: idx / k,
                col: idx % k,
                value: self.w[idx],
            }),
        }
    }

    /// The operator square `W ∘ W`, which is again symmetric.
    pub fn square(&self) -> StepGraphon {
        let k = self.k();
        let mut w = vec![0.0; k * k];
        for i in 0..k {
            for j in i..k {
                let v = product_entry(&self.mu, self.row(i), |z| self.get(z, j));
                w[i * k + j] = v;
                w[j * k + i] = v;
            }
        }
        StepGraphon(StepKernel {
            mu: self.mu.clone(),
            w,
        })
    }

    /// Single entry `(W ∘ W)(i, j)` without forming the whole square.
    pub fn square_entry(&self, i: usize, j: usize) -> f64 {
        product_entry(&self.mu, self.row(i), |z| self.get(z, j))
    }

    /// Splits every step `i` into `plan[i].len()` steps carrying the
    /// fractions `plan[i]` of its measure, with identical rows and columns.
    /// Returns the new graphon and, for each new step, its original step.
    pub fn split_steps(&self, plan: &[Vec<f64>]) -> Result<(StepGraphon, Vec<usize>)> {
        let k = self.k();
        if plan.len() != k {
            return Err(Error::LengthMismatch(format!(
                "plan for {} of {k} steps",
                plan.len()
            )));
        }
        let mut origin = Vec::new();
        let mut mu = Vec::new();
        for (i, fractions) in plan.iter().enumerate() {
            if fractions.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "step {i} split into no parts"
                )));
            }
            let total: f64 = fractions.iter().sum();
            if fractions.iter().any(|&f| !(f > 0.0)) || (total - 1.0).abs() > MEASURE_TOL {
                return Err(Error::InvalidParameter(format!(
                    "fractions for step {i} must be positive and sum to 1"
                )));
            }
            for &f in fractions {
                origin.push(i);
                mu.push(self.mu[i] * f);
            }
        }
        let n = origin.len();
        let mut w = Vec::with_capacity(n * n);
        for &a in &origin {
            w.extend(origin.iter().map(|&b| self.get(a, b)));
        }
        Ok((StepGraphon::from_flat(mu, w)?, origin))
    }

    /// Replaces step `i` by `parts` equal copies.
    pub fn split_step(&self, i: usize, parts: usize) -> Result<StepGraphon> {
        if i >= self.k() {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.k(),
            });
        }
        if parts < 2 {
            return Err(Error::InvalidParameter(format!(
                "cannot split into {parts} parts"
            )));
        }
        let plan: Vec<Vec<f64>> = (0..self.k())
            .map(|s| {
                if s == i {
                    vec![1.0 / parts as f64; parts]
                } else {
                    vec![1.0]
                }
            })
            .collect();
        Ok(self.split_steps(&plan)?.0)
    }

    /// Relabels steps: new step `s` is old step `perm[s]`.
    pub fn permute(&self, perm: &[usize]) -> Result<StepGraphon> {
        let k = self.k();
        let mut seen = vec![false; k];
        if perm.len() != k
            || perm
                .iter()
                .any(|&p| p >= k || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidParameter(
                "not a permutation of the steps".into(),
            ));
        }
        let mu = perm.iter().map(|&p| self.mu[p]).collect();
        let mut w = Vec::with_capacity(k * k);
        for &a in perm {
            w.extend(perm.iter().map(|&b| self.get(a, b)));
        }
        StepGraphon::from_flat(mu, w)
    }

    /// The same function viewed as a bigraphon on `J × J`.
    pub fn as_bigraphon(&self) -> StepBigraphon {
        StepBigraphon {
            mu1: self.mu.clone(),
            mu2: self.mu.clone(),
            w: self.w.clone(),
        }
    }
}

fn product_entry(mu: &[f64], row: &[f64], col: impl Fn(usize) -> f64) -> f64 {
    mu.iter()
        .zip(row)
        .enumerate()
        .map(|(z, (m, a))| m * a * col(z))
        .sum()
}

/// A bigraphon given as a step function on a product of two finite
/// probability spaces, with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepBigraphon {
    mu1: Vec<f64>,
    mu2: Vec<f64>,
    w: Vec<f64>,
}

impl StepBigraphon {
    pub fn new(mu1: Vec<f64>, mu2: Vec<f64>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let w = flatten(rows, mu1.len(), mu2.len())?;
        Self::from_flat(mu1, mu2, w)
    }

    pub(crate) fn from_flat(mu1: Vec<f64>, mu2: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        validate_measure(&mu1)?;
        validate_measure(&mu2)?;
        if w.len() != mu1.len() * mu2.len() {
            return Err(Error::Shape(format!(
                "expected {} values, got {}",
                mu1.len() * mu2.len(),
                w.len()
            )));
        }
        check_range(&w, mu2.len(), 0.0, 1.0)?;
        Ok(StepBigraphon { mu1, mu2, w })
    }

    /// Uniform measures on both sides.
    pub fn uniform(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k1 = rows.len();
        let k2 = rows.first().map_or(0, Vec::len);
        Self::new(
            vec![1.0 / k1 as f64; k1],
            vec![1.0 / k2.max(1) as f64; k2],
            rows,
        )
    }

    pub fn k1(&self) -> usize {
        self.mu1.len()
    }

    pub fn k2(&self) -> usize {
        self.mu2.len()
    }

    pub fn mu1(&self) -> &[f64] {
        &self.mu1
    }

    pub fn mu2(&self) -> &[f64] {
        &self.mu2
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.mu2.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let k2 = self.k2();
        &self.w[i * k2..(i + 1) * k2]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.k1()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> StepBigraphon {
        let (k1, k2) = (self.k1(), self.k2());
        let mut w = Vec::with_capacity(k1 * k2);
        for j in 0..k2 {
            w.extend((0..k1).map(|i| self.get(i, j)));
        }
        StepBigraphon {
            mu1: self.mu2.clone(),
            mu2: self.mu1.clone(),
            w,
        }
    }

    /// Operator product `(self ∘ other)(x, y) = Σ_z mu_z self(x, z) other(z, y)`.
    pub fn compose(&self, other: &StepBigraphon) -> Result<StepBigraphon> {
        if !same_basis(&self.mu2, &other.mu1) {
            return Err(Error::IncompatibleBasis);
        }
        let (k1, k3) = (self.k1(), other.k2());
        let mut w = Vec::with_capacity(k1 * k3);
        for i in 0..k1 {
            for j in 0..k3 {
                w.push(product_entry(&self.mu2, self.row(i), |z| other.get(z, j)));
            }
        }
        Ok(StepBigraphon {
            mu1: self.mu1.clone(),
            mu2: other.mu2.clone(),
            w,
        })
    }

    /// Interprets a square bigraphon with equal sides as a graphon, if
    /// its matrix is exactly symmetric.
    pub fn to_graphon(&self) -> Result<StepGraphon> {
        if self.mu1 != self.mu2 {
            return Err(Error::IncompatibleBasis);
        }
        StepGraphon::from_flat(self.mu1.clone(), self.w.clone())
    }
}

/// The graphon `W_G`: `n` steps of measure `1/n`, value 1 on edges and 0
/// elsewhere, including the diagonal.
pub fn graphon_from_graph(g: &Graph) -> Result<StepGraphon> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut w = vec![0.0; n * n];
    for (u, v) in g.edges() {
        w[u * n + v] = 1.0;
        w[v * n + u] = 1.0;
    }
    StepGraphon::from_flat(vec![1.0 / n as f64; n], w)
}

pub fn bigraphon_from_bigraph(b: &Bigraph) -> Result<StepBigraphon> {
    let (n1, n2) = (b.n1(), b.n2());
    if n1 == 0 || n2 == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut w = vec![0.0; n1 * n2];
    for (u, v) in b.edges() {
        w[u * n2 + v] = 1.0;
    }
    StepBigraphon::from_flat(vec![1.0 / n1 as f64; n1], vec![1.0 / n2 as f64; n2], w)
}

/// Operator product of two graphons on the same steps. The product of two
/// symmetric kernels need not be symmetric, so the result is a bigraphon
/// on `J × J`.
pub fn operator_product(u: &StepGraphon, w: &StepGraphon) -> Result<StepBigraphon> {
    if !same_basis(u.mu(), w.mu()) {
        return Err(Error::IncompatibleBasis);
    }
    u.as_bigraphon().compose(&w.as_bigraphon())
}
