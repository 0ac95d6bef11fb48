//! Weighted graphs, partition specifications and the Laplacian.

mod generators;
mod io;

pub use generators::{gen_gnp_degree, gen_spinglass, gen_unit_disk};
pub use io::{parse_edge_list, read_edge_list, write_edge_list, format_edge_list};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::scalar::Real;

/// Undirected edge between 0-based vertices `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Weighted undirected simple graph. Edges are kept sorted by `(u, v)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphInstance {
    n: usize,
    edges: Vec<Edge>,
    name: String,
}

impl GraphInstance {
    /// Validates and canonicalises an edge list given with 0-based endpoints
    /// in either order.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>, name: impl Into<String>) -> Result<Self> {
        let mut out: Vec<Edge> = Vec::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {}", a + 1)));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) outside vertex range 1..={n}",
                    a + 1,
                    b + 1
                )));
            }
            if !w.is_finite() {
                return Err(Error::InvalidGraph(format!("non-finite weight on edge ({}, {})", a + 1, b + 1)));
            }
            out.push(Edge {
                u: a.min(b),
                v: a.max(b),
                w,
            });
        }
        out.sort_by_key(|e| (e.u, e.v));
        if let Some(pair) = out.windows(2).find(|p| (p[0].u, p[0].v) == (p[1].u, p[1].v)) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                pair[0].u + 1,
                pair[0].v + 1
            )));
        }
        Ok(Self {
            n,
            edges: out,
            name: name.into(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// True when every weight is an integer, so optimal cut values are integral.
    pub fn has_integer_weights(&self) -> bool {
        self.edges.iter().all(|e| e.w.fract() == 0.0)
    }

    /// Weighted adjacency matrix `A_w`.
    pub fn adjacency<T: Real>(&self) -> SymMatrix<T> {
        let mut a = SymMatrix::zeros(self.n);
        for e in &self.edges {
            a.set(e.u, e.v, T::lit(e.w));
        }
        a
    }

    /// `L = Diag(A_w 1) − A_w`.
    pub fn laplacian<T: Real>(&self) -> SymMatrix<T> {
        let mut l = SymMatrix::zeros(self.n);
        for e in &self.edges {
            let w = T::lit(e.w);
            l.set(e.u, e.v, -w);
            l.set(e.u, e.u, l.get(e.u, e.u) + w);
            l.set(e.v, e.v, l.get(e.v, e.v) + w);
        }
        l
    }

    /// Total weight of edges whose endpoints lie in different parts.
    pub fn cut_weight(&self, part_of: &[usize]) -> f64 {
        self.edges
            .iter()
            .filter(|e| part_of[e.u] != part_of[e.v])
            .map(|e| e.w)
            .sum()
    }
}

/// Which of the two partition problems is being bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PartitionKind {
    Equipartition,
    Bisection,
}

/// Number and sizes of the parts, sorted non-increasingly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSpec {
    pub k: usize,
    pub m: Vec<usize>,
    pub kind: PartitionKind,
}

impl PartitionSpec {
    /// `k` parts of size `n / k`.
    pub fn equipartition(n: usize, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidPartition(format!("k = {k} must be at least 2")));
        }
        if n == 0 || !n.is_multiple_of(k) {
            return Err(Error::InvalidPartition(format!("k = {k} does not divide n = {n}")));
        }
        Ok(Self {
            k,
            m: vec![n / k; k],
            kind: PartitionKind::Equipartition,
        })
    }

    /// Two parts of sizes `m1 ≥ n − m1 ≥ 1`.
    pub fn bisection(n: usize, m1: usize) -> Result<Self> {
        if m1 >= n || m1 * 2 < n {
            return Err(Error::InvalidPartition(format!(
                "bisection sizes ({m1}, {}) must satisfy m1 >= m2 >= 1",
                n as i64 - m1 as i64
            )));
        }
        Ok(Self {
            k: 2,
            m: vec![m1, n - m1],
            kind: PartitionKind::Bisection,
        })
    }

    pub fn n(&self) -> usize {
        self.m.iter().sum()
    }

    /// Checks the spec against a graph order.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        if self.m.len() != self.k || self.m.contains(&0) {
            return Err(Error::InvalidPartition("part sizes must be k positive integers".into()));
        }
        if self.m.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition("part sizes must be non-increasing".into()));
        }
        if self.n() != n {
            return Err(Error::InvalidPartition(format!(
                "part sizes sum to {} but the graph has {n} vertices",
                self.n()
            )));
        }
        match self.kind {
            PartitionKind::Equipartition if self.m.iter().any(|&s| s != self.m[0]) => {
                Err(Error::InvalidPartition("equipartition parts must be equal".into()))
            }
            PartitionKind::Bisection if self.k != 2 => Err(Error::InvalidPartition("bisection needs k = 2".into())),
            _ => Ok(()),
        }
    }
}
