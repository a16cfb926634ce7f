//! Simple pattern graphs and bigraphs, and the blow-up construction.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A simple undirected graph on nodes `0..n`, without loops.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Builds a graph; edges are unordered and stored as `(min, max)`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, bound: n });
                }
            }
            if u == v {
                return Err(Error::InvalidPattern(format!("loop at node {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidPattern(format!("duplicate edge {u}-{v}")));
            }
        }
        Ok(Graph { n, edges: set })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph { n, edges }
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|v| (v - 1, v)).collect();
        Graph { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let mut adj = vec![vec![false; self.n]; self.n];
        for &(u, v) in &self.edges {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        adj
    }

    /// True when no edge joins two nodes of `set`.
    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(a, &u)| set[a + 1..].iter().all(|&v| u == v || !self.has_edge(u, v)))
    }

    /// Number of node pairs on which the two graphs disagree.
    pub fn edit_distance(&self, other: &Graph) -> Result<usize> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(format!(
                "graphs on {} and {} nodes",
                self.n, other.n
            )));
        }
        Ok(self.edges.symmetric_difference(&other.edges).count())
    }
}

/// A bigraph `(U1, U2, E)` with `E` a set of ordered pairs `(u, v)`,
/// `u < n1`, `v < n2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bigraph {
    n1: usize,
    n2: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Bigraph {
    pub fn new(
        n1: usize,
        n2: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n1 {
                return Err(Error::IndexOutOfRange {
                    index: u,
                    bound: n1,
                });
            }
            if v >= n2 {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    bound: n2,
                });
            }
            if !set.insert((u, v)) {
                return Err(Error::InvalidPattern(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(Bigraph { n1, n2, edges: set })
    }

    /// The perfect matching `{(i, i)}` on `n + n` nodes.
    pub fn matching(n: usize) -> Self {
        Bigraph {
            n1: n,
            n2: n,
            edges: (0..n).map(|i| (i, i)).collect(),
        }
    }

    pub fn complete(n1: usize, n2: usize) -> Self {
        Bigraph {
            n1,
            n2,
            edges: (0..n1).flat_map(|u| (0..n2).map(move |v| (u, v))).collect(),
        }
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn node_count(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    /// `adj[u][v]` for `u < n1`, `v < n2`.
    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let mut adj = vec![vec![false; self.n2]; self.n1];
        for &(u, v) in &self.edges {
            adj[u][v] = true;
        }
        adj
    }

    /// The same bigraph with the two classes swapped.
    pub fn transpose(&self) -> Bigraph {
        Bigraph {
            n1: self.n2,
            n2: self.n1,
            edges: self.edges.iter().map(|&(u, v)| (v, u)).collect(),
        }
    }
}

/// Replaces node `v` of `h` by `sizes[v]` twins. Twins of adjacent nodes
/// are adjacent; twins of the same node form a clique iff `internal[v]`.
///
/// Nodes of the result are numbered block by block in the order of `h`.
pub fn blow_up(h: &Graph, sizes: &[usize], internal: &[bool]) -> Result<Graph> {
    if sizes.len() != h.n() || internal.len() != h.n() {
        return Err(Error::LengthMismatch(format!(
            "graph has {} nodes, got {} sizes and {} internal flags",
            h.n(),
            sizes.len(),
            internal.len()
        )));
    }
    if let Some(v) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::InvalidParameter(format!(
            "blow-up size of node {v} is zero"
        )));
    }
    let mut offsets = Vec::with_capacity(h.n() + 1);
    offsets.push(0);
    for &s in sizes {
        offsets.push(offsets.last().unwrap() + s);
    }
    let block = |v: usize| offsets[v]..offsets[v + 1];
    let mut edges = Vec::new();
    for v in 0..h.n() {
        if internal[v] {
            for x in block(v) {
                for y in x + 1..offsets[v + 1] {
                    edges.push((x, y));
                }
            }
        }
    }
    for (u, v) in h.edges() {
        for x in block(u) {
            for y in block(v) {
                edges.push((x, y));
            }
        }
    }
    Graph::new(offsets[h.n()], edges)
}
