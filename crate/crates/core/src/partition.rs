//! Partitions of the steps of a graphon into classes, and averaging over
//! class pairs.

use crate::error::{Error, Result};
use crate::kernel::{same_basis, validate_measure, StepGraphon};

/// Assignment of the steps of a base measure to classes `0..c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    base: Vec<f64>,
    assign: Vec<usize>,
    c: usize,
}

impl Partition {
    pub fn new(base: Vec<f64>, assign: Vec<usize>) -> Result<Self> {
        validate_measure(&base)?;
        if assign.len() != base.len() {
            return Err(Error::InvalidPartition(format!(
                "{} steps but {} assignments",
                base.len(),
                assign.len()
            )));
        }
        let c = assign.iter().max().map_or(0, |&m| m + 1);
        let mut used = vec![false; c];
        for &a in &assign {
            used[a] = true;
        }
        if let Some(empty) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidPartition(format!("class {empty} is empty")));
        }
        Ok(Partition { base, assign, c })
    }

    /// Builds a partition from explicit class lists, which must cover every
    /// step exactly once.
    pub fn from_classes(base: Vec<f64>, classes: &[Vec<usize>]) -> Result<Self> {
        let k = base.len();
        let mut assign = vec![usize::MAX; k];
        for (c, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::InvalidPartition(format!("class {c} is empty")));
            }
            for &s in class {
                if s >= k {
                    return Err(Error::IndexOutOfRange { index: s, bound: k });
                }
                if assign[s] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("step {s} in two classes")));
                }
                assign[s] = c;
            }
        }
        if let Some(s) = assign.iter().position(|&a| a == usize::MAX) {
            return Err(Error::InvalidPartition(format!("step {s} unassigned")));
        }
        Self::new(base, assign)
    }

    /// Every step in its own class.
    pub fn singletons(base: Vec<f64>) -> Result<Self> {
        let k = base.len();
        Self::new(base, (0..k).collect())
    }

    /// A single class holding every step.
    pub fn trivial(base: Vec<f64>) -> Result<Self> {
        let k = base.len();
        Self::new(base, vec![0; k])
    }

    /// Relabels classes in order of first appearance along the steps.
    pub fn canonical(base: Vec<f64>, labels: &[usize]) -> Result<Self> {
        let mut map = std::collections::HashMap::new();
        let assign = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Self::new(base, assign)
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    pub fn class_of(&self, step: usize) -> usize {
        self.assign[step]
    }

    pub fn class_count(&self) -> usize {
        self.c
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.c];
        for (s, &a) in self.assign.iter().enumerate() {
            classes[a].push(s);
        }
        classes
    }

    pub fn class_measures(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.c];
        for (s, &a) in self.assign.iter().enumerate() {
            m[a] += self.base[s];
        }
        m
    }

    pub(crate) fn check_basis(&self, w: &StepGraphon) -> Result<()> {
        if same_basis(&self.base, w.mu()) {
            Ok(())
        } else {
            Err(Error::IncompatibleBasis)
        }
    }
}

/// Class-pair averages of `w`: `c × c` matrix, row-major, exactly symmetric.
pub(crate) fn block_averages(w: &StepGraphon, p: &Partition) -> Vec<f64> {
    let c = p.class_count();
    let classes = p.classes();
    let measures = p.class_measures();
    let mu = w.mu();
    let mut avg = vec![0.0; c * c];
    for a in 0..c {
        for b in a..c {
            let first = w.get(classes[a][0], classes[b][0]);
            let mut sum = 0.0;
            let mut constant = true;
            for &i in &classes[a] {
                for &j in &classes[b] {
                    sum += mu[i] * mu[j] * w.get(i, j);
                    constant &= w.get(i, j) == first;
                }
            }
            // Constant blocks keep their value exactly.
            let v = if constant {
                first
            } else {
                (sum / (measures[a] * measures[b])).clamp(0.0, 1.0)
            };
            avg[a * c + b] = v;
            avg[b * c + a] = v;
        }
    }
    avg
}

/// `W_P`: on each class pair, the measure-weighted average of `w`,
/// pulled back to the original steps.
pub fn aggregate(w: &StepGraphon, p: &Partition) -> Result<StepGraphon> {
    p.check_basis(w)?;
    let c = p.class_count();
    let avg = block_averages(w, p);
    let k = w.k();
    let mut out = Vec::with_capacity(k * k);
    for i in 0..k {
        let a = p.class_of(i);
        out.extend((0..k).map(|j| avg[a * c + p.class_of(j)]));
    }
    StepGraphon::from_flat(w.mu().to_vec(), out)
}

/// The common refinement of two partitions of the same base.
pub fn refine(p: &Partition, q: &Partition) -> Result<Partition> {
    if !same_basis(p.base(), q.base()) {
        return Err(Error::IncompatibleBasis);
    }
    let labels: Vec<usize> = (0..p.base().len())
        .map(|s| p.class_of(s) * q.class_count() + q.class_of(s))
        .collect();
    Partition::canonical(p.base().to_vec(), &labels)
}
