//! Set families over a finite ground set: shattering, VC dimension,
//! transversals, DE dimension, and neighborhood families of 0-1 graphons.

use std::collections::HashMap;

use crate::densities::bigraph_density;
use crate::error::{Error, Result};
use crate::graph::Bigraph;
use crate::kernel::StepGraphon;

/// Largest shattering candidate, and largest ground set for the exact VC
/// and transversal searches.
pub const MAX_GROUND: usize = 25;
/// Largest family accepted by the DE-dimension search.
pub const MAX_DE_SETS: usize = 20;
/// Largest family accepted by the transversal search.
pub const MAX_TRANSVERSAL_SETS: usize = 10_000;
/// Atoms lighter than this count as empty.
pub const ATOM_TOL: f64 = 1e-12;
/// Largest `kmax` accepted by [`thinness_witness`].
pub const MAX_WITNESS_K: usize = 6;

const WORD: usize = 64;

/// A family of distinct subsets of `0..m`, in order of first appearance,
/// with an optional measure on the ground set.
#[derive(Debug, Clone, PartialEq)]
pub struct SetFamily {
    m: usize,
    sets: Vec<Vec<u64>>,
    weights: Option<Vec<f64>>,
}

impl SetFamily {
    /// Repeated sets are dropped.
    pub fn new(m: usize, sets: &[Vec<usize>], weights: Option<Vec<f64>>) -> Result<Self> {
        if let Some(w) = &weights {
            if w.len() != m {
                return Err(Error::LengthMismatch(format!(
                    "{} weights for a ground set of {m}",
                    w.len()
                )));
            }
            if m > 0 {
                validate_weights(w)?;
            }
        }
        let words = m.div_ceil(WORD);
        let mut seen = HashMap::new();
        let mut out = Vec::new();
        for set in sets {
            let mut bits = vec![0u64; words];
            for &x in set {
                if x >= m {
                    return Err(Error::IndexOutOfRange { index: x, bound: m });
                }
                bits[x / WORD] |= 1 << (x % WORD);
            }
            if seen.insert(bits.clone(), ()).is_none() {
                out.push(bits);
            }
        }
        Ok(SetFamily {
            m,
            sets: out,
            weights,
        })
    }

    fn from_bits(m: usize, sets: Vec<Vec<u64>>, weights: Option<Vec<f64>>) -> Self {
        let mut seen = HashMap::new();
        let sets = sets
            .into_iter()
            .filter(|s| seen.insert(s.clone(), ()).is_none())
            .collect();
        SetFamily { m, sets, weights }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn contains(&self, set: usize, x: usize) -> bool {
        self.sets[set][x / WORD] >> (x % WORD) & 1 == 1
    }

    pub fn set(&self, i: usize) -> Vec<usize> {
        (0..self.m).filter(|&x| self.contains(i, x)).collect()
    }

    pub fn sets(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|i| self.set(i)).collect()
    }

    /// Measure of set `i`, if weights are present.
    pub fn weight_of(&self, i: usize) -> Option<f64> {
        let w = self.weights.as_ref()?;
        Some(
            (0..self.m)
                .filter(|&x| self.contains(i, x))
                .map(|x| w[x])
                .sum(),
        )
    }

    /// Sets as bitmasks, for ground sets of at most 32 points.
    fn masks(&self) -> Vec<u32> {
        debug_assert!(self.m <= 32);
        self.sets
            .iter()
            .map(|s| s.first().copied().unwrap_or(0) as u32)
            .collect()
    }

    fn require_ground(&self, what: &'static str) -> Result<()> {
        if self.m > MAX_GROUND {
            return Err(Error::SizeLimit {
                what,
                got: self.m,
                limit: MAX_GROUND,
            });
        }
        Ok(())
    }
}

fn validate_weights(w: &[f64]) -> Result<()> {
    if let Some(x) = w.iter().position(|&v| !(v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidMeasure(format!("weight {} at {x}", w[x])));
    }
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
    }
    Ok(())
}

/// The trace pattern of set `i` on the points `s`, as a bitmask over the
/// positions of `s`.
fn trace(h: &SetFamily, i: usize, s: &[usize]) -> u32 {
    s.iter()
        .enumerate()
        .fold(0, |acc, (pos, &x)| acc | (h.contains(i, x) as u32) << pos)
}

/// True iff every subset of `s` is the trace of some member of `h`.
pub fn is_shattered(h: &SetFamily, s: &[usize]) -> Result<bool> {
    if s.len() > MAX_GROUND {
        return Err(Error::SizeLimit {
            what: "candidate set size",
            got: s.len(),
            limit: MAX_GROUND,
        });
    }
    if let Some(&x) = s.iter().find(|&&x| x >= h.m) {
        return Err(Error::IndexOutOfRange {
            index: x,
            bound: h.m,
        });
    }
    let need = 1usize << s.len();
    if h.len() < need {
        return Ok(false);
    }
    let mut seen = vec![false; need];
    let mut count = 0;
    for i in 0..h.len() {
        let t = trace(h, i, s) as usize;
        if !seen[t] {
            seen[t] = true;
            count += 1;
            if count == need {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Exact VC dimension; `None` for the empty family, which shatters
/// nothing.
///
/// Shattered sets are closed under taking subsets, so they are generated
/// level by level, extending each shattered set by larger elements whose
/// every one-smaller subset is shattered. No set larger than
/// `log2 |h|` can be shattered.
pub fn vc_dimension(h: &SetFamily) -> Result<Option<usize>> {
    h.require_ground("ground set for VC dimension")?;
    if h.is_empty() {
        return Ok(None);
    }
    let cap = h.len().ilog2() as usize;
    let masks = h.masks();
    let shattered = |s: u32| -> bool {
        let pts: Vec<usize> = (0..h.m).filter(|&x| s >> x & 1 == 1).collect();
        let need = 1usize << pts.len();
        let mut seen = vec![false; need];
        let mut count = 0;
        for &a in &masks {
            let t = pts.iter().enumerate().fold(0usize, |acc, (pos, &x)| {
                acc | ((a >> x & 1) as usize) << pos
            });
            if !seen[t] {
                seen[t] = true;
                count += 1;
                if count == need {
                    return true;
                }
            }
        }
        false
    };
    let mut level: Vec<u32> = vec![0];
    let mut dim = 0;
    while dim < cap {
        let known: std::collections::HashSet<u32> = level.iter().copied().collect();
        let mut next = Vec::new();
        for &s in &level {
            let start = if s == 0 {
                0
            } else {
                32 - s.leading_zeros() as usize
            };
            for x in start..h.m {
                let cand = s | 1 << x;
                let closed = (0..h.m)
                    .filter(|&y| cand >> y & 1 == 1 && y != x)
                    .all(|y| known.contains(&(cand & !(1 << y))));
                if closed && shattered(cand) {
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
        dim += 1;
    }
    Ok(Some(dim))
}

/// `{A △ B : A, B ∈ h}`, including the empty set when `h` is nonempty.
pub fn sym_diff_family(h: &SetFamily) -> SetFamily {
    let mut out = Vec::with_capacity(h.len() * h.len());
    for a in &h.sets {
        for b in &h.sets {
            out.push(a.iter().zip(b).map(|(x, y)| x ^ y).collect());
        }
    }
    SetFamily::from_bits(h.m, out, h.weights.clone())
}

/// Minimum size of a set meeting every member of `h`.
///
/// Branch and bound: take the first set not yet hit and branch on its
/// elements. The bound is the current size plus the number of pairwise
/// disjoint unhit sets found greedily.
pub fn transversal_number(h: &SetFamily) -> Result<usize> {
    h.require_ground("ground set for transversal search")?;
    if h.len() > MAX_TRANSVERSAL_SETS {
        return Err(Error::SizeLimit {
            what: "family size for transversal search",
            got: h.len(),
            limit: MAX_TRANSVERSAL_SETS,
        });
    }
    let masks = h.masks();
    if masks.contains(&0) {
        return Err(Error::NoTransversal);
    }

    fn disjoint_lower_bound(masks: &[u32], chosen: u32) -> usize {
        let mut used = 0u32;
        let mut count = 0;
        for &a in masks {
            if a & chosen == 0 && a & used == 0 {
                used |= a;
                count += 1;
            }
        }
        count
    }

    fn search(masks: &[u32], chosen: u32, size: usize, best: &mut usize) {
        let Some(&open) = masks.iter().find(|&&a| a & chosen == 0) else {
            *best = (*best).min(size);
            return;
        };
        if size + disjoint_lower_bound(masks, chosen) >= *best {
            return;
        }
        let mut rest = open;
        while rest != 0 {
            let x = rest.trailing_zeros();
            rest &= rest - 1;
            search(masks, chosen | 1 << x, size + 1, best);
        }
    }

    let mut best = h.m.min(masks.len());
    search(&masks, 0, 0, &mut best);
    Ok(best)
}

/// Largest subfamily whose Boolean atoms all have weight above
/// [`ATOM_TOL`].
///
/// Qualitative independence passes to subfamilies, so candidates are
/// grown level by level from independent subfamilies, as in
/// [`vc_dimension`].
pub fn de_dimension(h: &SetFamily) -> Result<usize> {
    let weights = h.weights.as_ref().ok_or(Error::MissingWeights)?;
    if h.len() > MAX_DE_SETS {
        return Err(Error::SizeLimit {
            what: "family size for DE dimension",
            got: h.len(),
            limit: MAX_DE_SETS,
        });
    }
    let support: Vec<usize> = (0..h.m).filter(|&x| weights[x] > 0.0).collect();
    let independent = |sub: u32| -> bool {
        let members: Vec<usize> = (0..h.len()).filter(|&i| sub >> i & 1 == 1).collect();
        if 1usize << members.len() > support.len() {
            return false;
        }
        let mut atoms = vec![0.0; 1 << members.len()];
        for &x in &support {
            let pattern = members.iter().enumerate().fold(0usize, |acc, (pos, &i)| {
                acc | (h.contains(i, x) as usize) << pos
            });
            atoms[pattern] += weights[x];
        }
        atoms.iter().all(|&a| a > ATOM_TOL)
    };
    let n = h.len();
    let mut level: Vec<u32> = vec![0];
    let mut dim = 0;
    loop {
        let known: std::collections::HashSet<u32> = level.iter().copied().collect();
        let mut next = Vec::new();
        for &s in &level {
            let start = if s == 0 {
                0
            } else {
                32 - s.leading_zeros() as usize
            };
            for i in start..n {
                let cand = s | 1 << i;
                let closed = (0..n)
                    .filter(|&j| cand >> j & 1 == 1 && j != i)
                    .all(|j| known.contains(&(cand & !(1 << j))));
                if closed && independent(cand) {
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            return Ok(dim);
        }
        level = next;
        dim += 1;
    }
}

/// The distinct row supports of a 0-1 graphon, weighted by the step
/// measures.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodFamily {
    pub family: SetFamily,
    /// Number of steps sharing each distinct support.
    pub multiplicity: Vec<usize>,
    /// For each step, the index of its support in `family`.
    pub row_to_set: Vec<usize>,
}

pub fn neighborhood_family(w: &StepGraphon) -> Result<NeighborhoodFamily> {
    w.require_zero_one()?;
    let k = w.k();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut sets = Vec::new();
    let mut multiplicity = Vec::new();
    let mut row_to_set = Vec::with_capacity(k);
    for i in 0..k {
        let support: Vec<usize> = (0..k).filter(|&j| w.get(i, j) == 1.0).collect();
        let id = *index.entry(support.clone()).or_insert_with(|| {
            sets.push(support);
            multiplicity.push(0);
            sets.len() - 1
        });
        multiplicity[id] += 1;
        row_to_set.push(id);
    }
    Ok(NeighborhoodFamily {
        family: SetFamily::new(k, &sets, Some(w.mu().to_vec()))?,
        multiplicity,
        row_to_set,
    })
}

/// The bigraph with `d` class-one nodes and `2^d` class-two nodes, where
/// class-two node `j` is joined to class-one node `i` iff bit `i` of `j`
/// is set: every neighborhood pattern occurs exactly once.
pub fn independence_pattern(d: usize) -> Bigraph {
    let edges = (0..1usize << d).flat_map(|j| {
        (0..d)
            .filter(move |&i| j >> i & 1 == 1)
            .map(move |i| (i, j))
    });
    Bigraph::new(d, 1 << d, edges).expect("pattern edges are in range")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Thinness {
    pub de_dimension: usize,
    /// An excluded induced bigraph, present when `de_dimension < kmax`.
    pub witness: Option<Bigraph>,
}

/// Computes the DE dimension `d` of the neighborhood family. When
/// `d < kmax` the pattern on `d + 1` and `2^(d+1)` nodes is returned after
/// checking that its induced density is exactly zero.
pub fn thinness_witness(w: &StepGraphon, kmax: usize) -> Result<Thinness> {
    if kmax > MAX_WITNESS_K {
        return Err(Error::SizeLimit {
            what: "kmax for thinness witness",
            got: kmax,
            limit: MAX_WITNESS_K,
        });
    }
    let family = neighborhood_family(w)?.family;
    let d = de_dimension(&family)?;
    if d >= kmax {
        return Ok(Thinness {
            de_dimension: d,
            witness: None,
        });
    }
    let f = independence_pattern(d + 1);
    let t = bigraph_density(&f, &w.as_bigraphon(), true)?;
    if t != 0.0 {
        return Err(Error::BoundViolated(format!(
            "witness pattern has induced density {t}"
        )));
    }
    Ok(Thinness {
        de_dimension: d,
        witness: Some(f),
    })
}

/// `C(m, i)`, saturating.
pub fn binomial(m: u64, i: u64) -> u128 {
    if i > m {
        return 0;
    }
    let i = i.min(m - i);
    (0..i).fold(1u128, |acc, j| {
        acc.saturating_mul((m - j) as u128) / (j + 1) as u128
    })
}

/// `Σ_{i <= d} C(m, i)`, the Sauer–Shelah bound.
pub fn sauer_shelah_bound(m: u64, d: u64) -> u128 {
    (0..=d.min(m))
        .map(|i| binomial(m, i))
        .fold(0u128, |a, b| a.saturating_add(b))
}
