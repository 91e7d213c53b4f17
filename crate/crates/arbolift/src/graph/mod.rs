//! Weighted directed multigraphs and permutation-voltage graphs.
//!
//! Vertices are ordered by declaration and that order is the basis order
//! of every matrix built here. Loops and parallel edges are allowed;
//! edge weights are nonzero polynomials.
//!
//! A voltage graph is a base graph plus a fold count k and a permutation
//! in S_k per edge; it determines a k-fold covering graph (see the cover
//! module).

mod parse;
mod perm;

pub use parse::ParsedGraph;
pub use perm::Permutation;

use crate::matrix::RingMatrix;
use crate::ring::Poly;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("edge {edge} ({src} -> {tgt}) has no voltage but fold {k} is declared")]
    MissingVoltage {
        edge: usize,
        src: String,
        tgt: String,
        k: usize,
    },
    #[error("bad permutation `{text}`: {reason}")]
    BadPermutation { text: String, reason: String },
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("invalid vertex name `{0}`")]
    BadVertexName(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("zero-weight edge {src} -> {tgt}")]
    ZeroWeight { src: String, tgt: String },
    #[error("fold count must be at least 1")]
    BadFold,
    #[error("expected one voltage per edge: {edges} edges, {voltages} voltages")]
    VoltageCount { edges: usize, voltages: usize },
    #[error("the file has no fold header, so it describes a plain weighted digraph")]
    NotAVoltageGraph,
}

/// Index of a vertex within its graph (declaration order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

/// A directed edge. `id` is the edge's dense index in declaration order;
/// voltage assignments are keyed by it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: usize,
    pub src: VertexId,
    pub tgt: VertexId,
    pub weight: Poly,
}

/// A weighted directed multigraph.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightedDigraph {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: Vec<Edge>,
}

fn valid_vertex_name(name: &str) -> bool {
    !name.is_empty() && !name.contains(char::is_whitespace) && !name.contains('#')
}

impl WeightedDigraph {
    pub fn new() -> WeightedDigraph {
        WeightedDigraph::default()
    }

    /// Declares a vertex. Names must be unique, nonempty, and free of
    /// whitespace and `#` so the text format stays unambiguous.
    pub fn add_vertex(&mut self, name: &str) -> Result<VertexId, GraphError> {
        if !valid_vertex_name(name) {
            return Err(GraphError::BadVertexName(name.to_string()));
        }
        if self.index.contains_key(name) {
            return Err(GraphError::DuplicateVertex(name.to_string()));
        }
        let id = VertexId(self.names.len());
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id.0);
        Ok(id)
    }

    /// Adds an edge with a nonzero weight; returns its dense index.
    pub fn add_edge(
        &mut self,
        src: VertexId,
        tgt: VertexId,
        weight: Poly,
    ) -> Result<usize, GraphError> {
        for v in [src, tgt] {
            if v.0 >= self.names.len() {
                return Err(GraphError::UnknownVertex(format!("index {}", v.0)));
            }
        }
        if weight.is_zero() {
            return Err(GraphError::ZeroWeight {
                src: self.names[src.0].clone(),
                tgt: self.names[tgt.0].clone(),
            });
        }
        let id = self.edges.len();
        self.edges.push(Edge {
            id,
            src,
            tgt,
            weight,
        });
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.names.len()).map(VertexId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied().map(VertexId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.src == v)
    }

    pub fn in_edges(&self, v: VertexId) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.tgt == v)
    }

    /// Sum of the weights of all edges leaving `v` (loops included).
    pub fn out_weight_sum(&self, v: VertexId) -> Poly {
        self.out_edges(v)
            .fold(Poly::zero(), |acc, e| acc.add(&e.weight))
    }

    fn labels(&self) -> Vec<String> {
        self.names.clone()
    }

    /// Diagonal matrix of out-weight sums, in declaration order.
    pub fn degree_matrix(&self) -> RingMatrix {
        let n = self.vertex_count();
        let mut m = RingMatrix::zero(n, n);
        for e in &self.edges {
            m.add_to(e.src.0, e.src.0, &e.weight);
        }
        m.with_labels(self.labels(), self.labels())
    }

    /// Entry (i, j) sums the weights of all parallel edges v_i -> v_j;
    /// loops land on the diagonal.
    pub fn adjacency_matrix(&self) -> RingMatrix {
        let n = self.vertex_count();
        let mut m = RingMatrix::zero(n, n);
        for e in &self.edges {
            m.add_to(e.src.0, e.tgt.0, &e.weight);
        }
        m.with_labels(self.labels(), self.labels())
    }

    /// Degree matrix minus adjacency matrix. Every row sums to zero, and
    /// loops cancel out entirely.
    pub fn laplacian(&self) -> RingMatrix {
        self.degree_matrix()
            .sub(&self.adjacency_matrix())
            .expect("same dimensions")
    }

    /// Canonical text form in the graph file grammar.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for name in &self.names {
            out.push_str(&format!("vertex {name}\n"));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "edge {} {} weight {}\n",
                self.names[e.src.0], self.names[e.tgt.0], e.weight
            ));
        }
        out
    }
}

impl fmt::Display for WeightedDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A weighted digraph whose every edge carries a permutation in S_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoltageGraph {
    base: WeightedDigraph,
    k: usize,
    voltages: Vec<Permutation>,
}

impl VoltageGraph {
    /// `voltages[i]` is the permutation of edge `i`; every permutation
    /// must act on {1..k} and there must be exactly one per edge.
    pub fn new(
        base: WeightedDigraph,
        k: usize,
        voltages: Vec<Permutation>,
    ) -> Result<VoltageGraph, GraphError> {
        if k < 1 {
            return Err(GraphError::BadFold);
        }
        if voltages.len() != base.edge_count() {
            return Err(GraphError::VoltageCount {
                edges: base.edge_count(),
                voltages: voltages.len(),
            });
        }
        for p in &voltages {
            if p.k() != k {
                return Err(GraphError::BadPermutation {
                    text: p.to_string(),
                    reason: format!("expected {} images for fold {}", k, k),
                });
            }
        }
        Ok(VoltageGraph { base, k, voltages })
    }

    pub fn base(&self) -> &WeightedDigraph {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn voltages(&self) -> &[Permutation] {
        &self.voltages
    }

    pub fn voltage(&self, edge: usize) -> &Permutation {
        &self.voltages[edge]
    }

    /// Canonical text form, starting with the `fold` header.
    pub fn to_text(&self) -> String {
        let mut out = format!("fold {}\n", self.k);
        for name in &self.base.names {
            out.push_str(&format!("vertex {name}\n"));
        }
        for e in &self.base.edges {
            out.push_str(&format!(
                "edge {} {} weight {} voltage {}\n",
                self.base.names[e.src.0],
                self.base.names[e.tgt.0],
                e.weight,
                self.voltages[e.id]
            ));
        }
        out
    }
}

impl fmt::Display for VoltageGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parses a graph file; the result is a voltage graph exactly when the
/// text has a `fold` header.
pub fn parse_graph(text: &str) -> Result<ParsedGraph, GraphError> {
    parse::parse(text)
}
