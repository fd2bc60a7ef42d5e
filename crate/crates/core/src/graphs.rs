//! Graph families, Laplacians and spanning-tree counts.
//!
//! Vertex numbering is fixed per family so divisors written against the
//! standard drawings can be used verbatim:
//!
//! * square cycle `C_n^2`: vertices `0..n`, default sink `0`;
//! * wheel `W_n`: hub `0`, rim `1..=n` in cyclic order, default sink `0`;
//! * subdivided banana `B_s`: hubs `v0 = 0`, `v1 = 1`, then the interior
//!   vertices of each branch in order, walking from `v0` toward `v1`;
//!   default sink `v1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum Family {
    SquareCycle(usize),
    Wheel(usize),
    Banana(Vec<u64>),
}

/// Undirected connected multigraph without loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    /// `(u, v, multiplicity)` with `u < v`, sorted, no duplicates.
    edges: Vec<(usize, usize, u64)>,
    adjacency: Vec<Vec<(usize, u64)>>,
    degrees: Vec<u64>,
    labels: Vec<String>,
    default_sink: usize,
    family: Option<Family>,
}

impl Graph {
    /// Builds a graph from an edge list; repeated pairs accumulate multiplicity.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize, u64)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Domain("graph needs at least one vertex".into()));
        }
        let mut merged: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for &(u, v, mult) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        count: vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if mult == 0 {
                continue;
            }
            *merged.entry((u.min(v), u.max(v))).or_default() += mult;
        }
        let edges: Vec<_> = merged.into_iter().map(|((u, v), m)| (u, v, m)).collect();
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut degrees = vec![0u64; vertex_count];
        for &(u, v, m) in &edges {
            adjacency[u].push((v, m));
            adjacency[v].push((u, m));
            degrees[u] += m;
            degrees[v] += m;
        }
        for list in adjacency.iter_mut() {
            list.sort_unstable();
        }
        let g = Graph {
            vertex_count,
            edges,
            adjacency,
            degrees,
            labels: (0..vertex_count).map(|v| v.to_string()).collect(),
            default_sink: 0,
            family: None,
        };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn from_family(family: &Family) -> Result<Self> {
        match family {
            Family::SquareCycle(n) => square_cycle(*n),
            Family::Wheel(n) => wheel(*n),
            Family::Banana(s) => banana_subdivided(s),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    /// Number of edges counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u64)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> u64 {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u64 {
        self.adjacency[u]
            .binary_search_by_key(&v, |&(w, _)| w)
            .map_or(0, |i| self.adjacency[u][i].1)
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn default_sink(&self) -> usize {
        self.default_sink
    }

    pub fn family(&self) -> Option<&Family> {
        self.family.as_ref()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                count: self.vertex_count,
            })
        }
    }

    fn with_family(mut self, family: Family, sink: usize, labels: Vec<String>) -> Self {
        self.family = Some(family);
        self.default_sink = sink;
        self.labels = labels;
        self
    }

    pub fn laplacian(&self) -> IntegerMatrix {
        laplacian(self)
    }
}

/// `C_n^2`: vertex `i` is adjacent to `i ± 1` and `i ± 2` modulo `n`.
pub fn square_cycle(n: usize) -> Result<Graph> {
    if n < 5 {
        return Err(Error::Domain(format!(
            "square cycle needs n >= 5, got {n}"
        )));
    }
    let mut edges = Vec::with_capacity(2 * n);
    for i in 0..n {
        for step in [1, 2] {
            let j = (i + step) % n;
            edges.push((i.min(j), i.max(j), 1));
        }
    }
    let g = Graph::from_edges(n, &edges)?;
    let labels = (0..n).map(|v| v.to_string()).collect();
    Ok(g.with_family(Family::SquareCycle(n), 0, labels))
}

/// `W_n`: hub 0 joined to every vertex of the rim cycle `1..=n`.
pub fn wheel(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::Domain(format!("wheel needs n >= 3, got {n}")));
    }
    let mut edges = Vec::with_capacity(2 * n);
    for i in 1..=n {
        edges.push((0, i, 1));
        let next = i % n + 1;
        edges.push((i.min(next), i.max(next), 1));
    }
    let g = Graph::from_edges(n + 1, &edges)?;
    let labels = std::iter::once("hub".to_string())
        .chain((1..=n).map(|v| v.to_string()))
        .collect();
    Ok(g.with_family(Family::Wheel(n), 0, labels))
}

/// The `s`-subdivided banana graph: branch `i` is a path of `s[i]` edges
/// from `v0 = 0` to `v1 = 1`.
pub fn banana_subdivided(s: &[u64]) -> Result<Graph> {
    if s.len() < 2 {
        return Err(Error::Domain(format!(
            "banana graph needs at least 2 branches, got {}",
            s.len()
        )));
    }
    if let Some(bad) = s.iter().find(|&&x| x == 0) {
        return Err(Error::Domain(format!(
            "branch lengths must be positive, got {bad}"
        )));
    }
    let interior: u64 = s.iter().map(|&x| x - 1).sum();
    let n = 2 + usize::try_from(interior)
        .map_err(|_| Error::Domain("banana graph too large".into()))?;
    let mut edges = Vec::with_capacity(n + s.len());
    let mut labels = vec!["v0".to_string(), "v1".to_string()];
    let mut next = 2;
    for (branch, &len) in s.iter().enumerate() {
        let mut prev = 0;
        for k in 1..len {
            edges.push((prev, next, 1));
            labels.push(format!("b{}.{}", branch + 1, k));
            prev = next;
            next += 1;
        }
        edges.push((prev, 1, 1));
    }
    let g = Graph::from_edges(n, &edges)?;
    Ok(g.with_family(Family::Banana(s.to_vec()), 1, labels))
}

pub fn laplacian(g: &Graph) -> IntegerMatrix {
    let n = g.vertex_count();
    let mut l = IntegerMatrix::zeros(n, n);
    for v in 0..n {
        l[(v, v)] = BigInt::from(g.degree(v));
    }
    for &(u, v, m) in g.edges() {
        l[(u, v)] -= m;
        l[(v, u)] -= m;
    }
    l
}

pub fn reduced_laplacian(g: &Graph, sink: usize) -> Result<IntegerMatrix> {
    g.check_vertex(sink)?;
    Ok(laplacian(g).minor(sink, sink))
}

/// Number of spanning trees (matrix-tree theorem).
pub fn tree_count(g: &Graph) -> BigInt {
    if g.vertex_count() == 1 {
        return BigInt::one();
    }
    reduced_laplacian(g, g.default_sink())
        .and_then(|m| m.determinant())
        .expect("reduced Laplacian of a valid graph is square")
}

/// Fibonacci numbers with `F_1 = F_2 = 1`.
pub fn fibonacci(n: u32) -> Result<BigInt> {
    lucas_sequence(n, BigInt::zero(), BigInt::one(), "fibonacci")
}

/// Lucas numbers with `L_1 = 1`, `L_2 = 3`.
pub fn lucas(n: u32) -> Result<BigInt> {
    lucas_sequence(n, BigInt::from(2), BigInt::one(), "lucas")
}

fn lucas_sequence(n: u32, x0: BigInt, x1: BigInt, name: &str) -> Result<BigInt> {
    if n < 1 {
        return Err(Error::Domain(format!("{name}(n) needs n >= 1, got {n}")));
    }
    let (mut a, mut b) = (x0, x1);
    for _ in 1..n {
        let c = &a + &b;
        a = b;
        b = c;
    }
    Ok(b)
}
