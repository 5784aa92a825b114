//! Simple undirected graphs and their matrix views.
//!
//! Nodes are labeled `1..=N` at every public boundary and stored `0..N`
//! internally. Edges are kept as `(u, v)` with `u < v`, sorted, so the
//! 1-based position of a pair in [`Graph::edges`] is a stable edge index.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    /// Zero-based pairs, `u < v`, sorted and unique.
    edges: Vec<(usize, usize)>,
}

/// Per-node degrees, indexed by zero-based node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeVector(pub Vec<usize>);

impl DegreeVector {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl Graph {
    pub fn edgeless(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
        }
    }

    /// Builds a graph from 1-based node pairs. When `n` is `None` the node
    /// count is the largest label seen.
    pub fn from_edge_list(pairs: &[(usize, usize)], n: Option<usize>) -> Result<Self> {
        let inferred = pairs.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(0);
        let n = n.unwrap_or(inferred);

        let mut edges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            for label in [u, v] {
                if label == 0 || label > n {
                    return Err(Error::NodeOutOfRange { label, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            edges.push((u.min(v) - 1, u.max(v) - 1));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0 + 1, w[0].1 + 1));
        }
        Ok(Graph { n, edges })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Zero-based edge pairs in index order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// The 1-based endpoints of edge `k` (1-based).
    pub fn edge(&self, k: usize) -> Result<(usize, usize)> {
        self.check_edge_index(k)?;
        let (u, v) = self.edges[k - 1];
        Ok((u + 1, v + 1))
    }

    /// The 1-based index of the edge joining 1-based nodes `u` and `v`.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        if u == 0 || v == 0 || u == v {
            return None;
        }
        let key = (u.min(v) - 1, u.max(v) - 1);
        self.edges.binary_search(&key).ok().map(|i| i + 1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    pub fn degrees(&self) -> DegreeVector {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        DegreeVector(d)
    }

    pub fn adjacency_matrix(&self) -> Matrix {
        let mut a = Matrix::zeros(self.n);
        for &(u, v) in &self.edges {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    /// `L = D - A`.
    pub fn laplacian_matrix(&self) -> Matrix {
        let mut l = Matrix::zeros(self.n);
        for &(u, v) in &self.edges {
            l[(u, v)] = -1.0;
            l[(v, u)] = -1.0;
            l[(u, u)] += 1.0;
            l[(v, v)] += 1.0;
        }
        l
    }

    /// Degree centrality `d_j / (N - 1)` of 1-based node `j`.
    pub fn degree_centrality(&self, j: usize) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::TooFewNodes {
                required: 2,
                actual: self.n,
            });
        }
        self.check_node(j)?;
        let d = self
            .edges
            .iter()
            .filter(|&&(u, v)| u == j - 1 || v == j - 1)
            .count();
        Ok(d as f64 / (self.n - 1) as f64)
    }

    /// Degree centralities of all nodes, zero-based.
    pub fn degree_centralities(&self) -> Result<Vec<f64>> {
        if self.n < 2 {
            return Err(Error::TooFewNodes {
                required: 2,
                actual: self.n,
            });
        }
        let denom = (self.n - 1) as f64;
        Ok(self.degrees().0.iter().map(|&d| d as f64 / denom).collect())
    }

    /// A copy of this graph without edge `k` (1-based). The remaining edges
    /// keep their relative order.
    pub fn remove_edge(&self, k: usize) -> Result<Graph> {
        self.check_edge_index(k)?;
        let mut edges = self.edges.clone();
        edges.remove(k - 1);
        Ok(Graph { n: self.n, edges })
    }

    /// A copy of this graph with the 1-based pair `(u, v)` added.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        let mut pairs: Vec<(usize, usize)> =
            self.edges.iter().map(|&(a, b)| (a + 1, b + 1)).collect();
        pairs.push((u, v));
        Graph::from_edge_list(&pairs, Some(self.n))
    }

    /// Zero-based adjacency lists.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Breadth-first reachability from node 1. The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.neighbors();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == self.n
    }

    pub fn is_regular(&self) -> bool {
        let d = self.degrees().0;
        d.windows(2).all(|w| w[0] == w[1])
    }

    /// Serializes to the edge-list text format, one 1-based pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# nodes: {} edges: {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{} {}", u + 1, v + 1);
        }
        out
    }

    pub(crate) fn check_node(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.n {
            Err(Error::NodeOutOfRange {
                label: j,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    fn check_edge_index(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.edges.len() {
            Err(Error::EdgeIndexOutOfRange {
                k,
                edges: self.edges.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// The cycle graph on `n` nodes.
pub fn cycle(n: usize) -> Graph {
    let pairs: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
    Graph::from_edge_list(&pairs, Some(n)).expect("cycle needs n >= 3")
}

/// The star on `n` nodes with node 1 at the center.
pub fn star(n: usize) -> Graph {
    let pairs: Vec<_> = (2..=n).map(|i| (1, i)).collect();
    Graph::from_edge_list(&pairs, Some(n)).expect("star needs n >= 1")
}

/// The complete graph on `n` nodes.
pub fn complete(n: usize) -> Graph {
    let mut pairs = Vec::new();
    for u in 1..=n {
        for v in (u + 1)..=n {
            pairs.push((u, v));
        }
    }
    Graph::from_edge_list(&pairs, Some(n)).expect("complete graph is simple")
}
