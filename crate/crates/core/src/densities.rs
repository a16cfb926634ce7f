//! Exact homomorphism densities of small patterns in step graphons and
//! step bigraphons, including rooted (partial) versions.
//!
//! Densities are finite sums over maps from pattern nodes to steps, each
//! map weighted by the product of the measures of its unrooted nodes.
//! Rooted nodes carry no measure factor.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Bigraph, Graph};
use crate::kernel::{StepBigraphon, StepGraphon};

/// Enumerations larger than `2^40` maps are refused.
pub const ENUMERATION_BUDGET_BITS: f64 = 40.0;

/// Steps assigned to a set of pattern nodes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepAssignment {
    map: BTreeMap<usize, usize>,
}

impl StepAssignment {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (node, step) in pairs {
            if map.insert(node, step).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "node {node} assigned twice"
                )));
            }
        }
        Ok(StepAssignment { map })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn get(&self, node: usize) -> Option<usize> {
        self.map.get(&node).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.map.keys().copied()
    }
}

fn budget_check(free: usize, k: usize) -> Result<()> {
    let bits = free as f64 * (k as f64).log2();
    if bits > ENUMERATION_BUDGET_BITS {
        return Err(Error::SizeLimit {
            what: "enumeration size in bits",
            got: bits.ceil() as usize,
            limit: ENUMERATION_BUDGET_BITS as usize,
        });
    }
    Ok(())
}

/// Resolves the rooted nodes `s` against `x`, checking bounds.
fn resolve_roots(
    s: &[usize],
    x: &StepAssignment,
    n: usize,
    k: usize,
) -> Result<Vec<Option<usize>>> {
    let mut fixed = vec![None; n];
    for &node in s {
        if node >= n {
            return Err(Error::IndexOutOfRange {
                index: node,
                bound: n,
            });
        }
        let step = x.get(node).ok_or(Error::IncompleteAssignment(node))?;
        if step >= k {
            return Err(Error::IndexOutOfRange {
                index: step,
                bound: k,
            });
        }
        fixed[node] = Some(step);
    }
    Ok(fixed)
}

#[inline]
fn factor(value: f64, edge: bool) -> f64 {
    if edge {
        value
    } else {
        1.0 - value
    }
}

/// `t(F, W)`.
pub fn density(f: &Graph, w: &StepGraphon) -> Result<f64> {
    partial_density(f, &[], &StepAssignment::empty(), w, false)
}

/// `t_ind(F, W)`.
pub fn induced_density(f: &Graph, w: &StepGraphon) -> Result<f64> {
    partial_density(f, &[], &StepAssignment::empty(), w, true)
}

/// `t_S(F, W; x)`, or its induced variant: the nodes of `s` are fixed to
/// the steps given by `x` and the remaining nodes are integrated out.
pub fn partial_density(
    f: &Graph,
    s: &[usize],
    x: &StepAssignment,
    w: &StepGraphon,
    induced: bool,
) -> Result<f64> {
    let n = f.n();
    if n == 0 {
        return Err(Error::InvalidPattern("pattern has no nodes".into()));
    }
    let k = w.k();
    let fixed = resolve_roots(s, x, n, k)?;
    let free: Vec<usize> = (0..n).filter(|&v| fixed[v].is_none()).collect();
    budget_check(free.len(), k)?;
    let adj = f.adjacency();

    // Factor between two rooted nodes is a constant.
    let mut constant = 1.0;
    for u in 0..n {
        for v in u + 1..n {
            if let (Some(a), Some(b)) = (fixed[u], fixed[v]) {
                if adj[u][v] || induced {
                    constant *= factor(w.get(a, b), adj[u][v]);
                }
            }
        }
    }
    if constant == 0.0 {
        return Ok(0.0);
    }

    // For each free node, the pairs it closes with earlier nodes.
    let mut closes: Vec<Vec<(usize, bool)>> = Vec::with_capacity(free.len());
    for (t, &v) in free.iter().enumerate() {
        let earlier = (0..n).filter(|&u| fixed[u].is_some() || free[..t].contains(&u));
        closes.push(
            earlier
                .filter(|&u| adj[u][v] || induced)
                .map(|u| (u, adj[u][v]))
                .collect(),
        );
    }

    let mut steps: Vec<usize> = fixed.iter().map(|s| s.unwrap_or(0)).collect();
    let total = enumerate(w, &free, &closes, &mut steps, 0);
    Ok(constant * total)
}

fn enumerate(
    w: &StepGraphon,
    free: &[usize],
    closes: &[Vec<(usize, bool)>],
    steps: &mut [usize],
    depth: usize,
) -> f64 {
    if depth == free.len() {
        return 1.0;
    }
    let v = free[depth];
    let mut sum = 0.0;
    for step in 0..w.k() {
        let mut weight = w.mu()[step];
        for &(u, edge) in &closes[depth] {
            weight *= factor(w.get(steps[u], step), edge);
        }
        if weight == 0.0 {
            continue;
        }
        steps[v] = step;
        sum += weight * enumerate(w, free, closes, steps, depth + 1);
    }
    sum
}

/// `t^b(F, W)` or `t^b_ind(F, W)`.
pub fn bigraph_density(f: &Bigraph, w: &StepBigraphon, induced: bool) -> Result<f64> {
    let none = StepAssignment::empty();
    partial_bigraph_density(f, &[], &[], &none, &none, w, induced)
}

/// Rooted bigraph density `t^b_{S1,S2}(F, W; x, y)` (or induced): nodes of
/// `s1 ⊆ U1` sit on the row steps `x`, nodes of `s2 ⊆ U2` on the column
/// steps `y`, and all other nodes are integrated out.
///
/// The sum over the class-two nodes factorizes once the class-one nodes
/// are placed, so only one side is enumerated: whichever is cheaper.
pub fn partial_bigraph_density(
    f: &Bigraph,
    s1: &[usize],
    s2: &[usize],
    x: &StepAssignment,
    y: &StepAssignment,
    w: &StepBigraphon,
    induced: bool,
) -> Result<f64> {
    if f.n1() == 0 && f.n2() == 0 {
        return Err(Error::InvalidPattern("pattern has no nodes".into()));
    }
    let fixed1 = resolve_roots(s1, x, f.n1(), w.k1())?;
    let fixed2 = resolve_roots(s2, y, f.n2(), w.k2())?;
    let free1 = fixed1.iter().filter(|s| s.is_none()).count();
    let free2 = fixed2.iter().filter(|s| s.is_none()).count();
    let bits1 = free1 as f64 * (w.k1() as f64).log2();
    let bits2 = free2 as f64 * (w.k2() as f64).log2();
    if bits2 < bits1 {
        budget_check(free2, w.k2())?;
        let wt = w.transpose();
        factorized(&f.transpose(), &fixed2, &fixed1, &wt, induced)
    } else {
        budget_check(free1, w.k1())?;
        factorized(f, &fixed1, &fixed2, w, induced)
    }
}

fn factorized(
    f: &Bigraph,
    fixed1: &[Option<usize>],
    fixed2: &[Option<usize>],
    w: &StepBigraphon,
    induced: bool,
) -> Result<f64> {
    let adj = f.adjacency();
    let free1: Vec<usize> = (0..f.n1()).filter(|&u| fixed1[u].is_none()).collect();
    let mut rows: Vec<usize> = fixed1.iter().map(|s| s.unwrap_or(0)).collect();
    let mut total = 0.0;
    let count = w.k1().pow(free1.len() as u32);
    for code in 0..count {
        let mut rest = code;
        let mut weight = 1.0;
        for &u in &free1 {
            rows[u] = rest % w.k1();
            rest /= w.k1();
            weight *= w.mu1()[rows[u]];
        }
        for v in 0..f.n2() {
            let column = |col: usize| -> f64 {
                let mut p = 1.0;
                for u in 0..f.n1() {
                    if adj[u][v] || induced {
                        p *= factor(w.get(rows[u], col), adj[u][v]);
                    }
                }
                p
            };
            weight *= match fixed2[v] {
                Some(col) => column(col),
                None => (0..w.k2()).map(|col| w.mu2()[col] * column(col)).sum(),
            };
            if weight == 0.0 {
                break;
            }
        }
        total += weight;
    }
    Ok(total)
}
