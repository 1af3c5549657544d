//! Parametric DAGs with affine edge weights.

mod altfree;
mod dag;
mod enumerate;
mod envelope;

pub use altfree::{check_alternation_free_paths, PathAlternation};
pub use dag::{fixed_lambda_shortest, second_best_at, topo_order, Dag, SecondBest};
pub use enumerate::{enumerate_paths, envelope_bruteforce};
pub use envelope::{envelope_dp, Envelope};

use crate::affine::AffineForm;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: AffineForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricGraph {
    vertex_count: usize,
    pub source: usize,
    pub sink: usize,
    edges: Vec<Edge>,
    pub layers: Option<Vec<usize>>,
    pub embedding: Option<Vec<(Rational, Rational)>>,
}

/// A directed path, stored by edge so that parallel edges stay distinguishable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("paths are non-empty")
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn join(&self, other: &Path) -> Path {
        debug_assert_eq!(self.end(), other.start());
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Path { vertices, edges }
    }
}

impl ParametricGraph {
    pub fn new(vertex_count: usize, source: usize, sink: usize) -> Result<Self> {
        for v in [source, sink] {
            if v >= vertex_count {
                return Err(Error::VertexOutOfRange(v));
            }
        }
        Ok(Self {
            vertex_count,
            source,
            sink,
            edges: Vec::new(),
            layers: None,
            embedding: None,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn add_vertex(&mut self) -> usize {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize, weight: AffineForm) -> Result<usize> {
        for v in [from, to] {
            if v >= self.vertex_count {
                return Err(Error::VertexOutOfRange(v));
            }
        }
        self.edges.push(Edge { from, to, weight });
        Ok(self.edges.len() - 1)
    }

    pub fn set_edge_weight(&mut self, e: usize, weight: AffineForm) {
        self.edges[e].weight = weight;
    }

    /// Same graph with different endpoints.
    pub fn with_endpoints(&self, source: usize, sink: usize) -> Result<Self> {
        let mut g = self.clone();
        for v in [source, sink] {
            if v >= g.vertex_count {
                return Err(Error::VertexOutOfRange(v));
            }
        }
        g.source = source;
        g.sink = sink;
        Ok(g)
    }

    pub fn map_weights<F: FnMut(&Edge) -> AffineForm>(&self, mut f: F) -> Self {
        let mut g = self.clone();
        for e in g.edges.iter_mut() {
            e.weight = f(e);
        }
        g
    }

    /// Builds a path from an edge sequence, checking that it is connected.
    pub fn path_from_edges(&self, edges: &[usize]) -> Result<Path> {
        let first = edges
            .first()
            .ok_or_else(|| Error::InvalidPath("empty edge list".into()))?;
        let mut vertices = vec![self.edge_checked(*first)?.from];
        for &e in edges {
            let edge = self.edge_checked(e)?;
            if edge.from != *vertices.last().unwrap() {
                return Err(Error::InvalidPath(format!(
                    "edge {e} does not continue the path"
                )));
            }
            vertices.push(edge.to);
        }
        Ok(Path {
            vertices,
            edges: edges.to_vec(),
        })
    }

    /// Resolves a vertex sequence to edges, taking the lowest-index edge
    /// between consecutive vertices.
    pub fn path_from_vertices(&self, vertices: &[usize]) -> Result<Path> {
        if vertices.is_empty() {
            return Err(Error::InvalidPath("empty vertex list".into()));
        }
        let mut edges = Vec::with_capacity(vertices.len().saturating_sub(1));
        for w in vertices.windows(2) {
            let e = self
                .edges
                .iter()
                .position(|e| e.from == w[0] && e.to == w[1])
                .ok_or_else(|| Error::InvalidPath(format!("no edge {} -> {}", w[0], w[1])))?;
            edges.push(e);
        }
        Ok(Path {
            vertices: vertices.to_vec(),
            edges,
        })
    }

    fn edge_checked(&self, e: usize) -> Result<&Edge> {
        self.edges
            .get(e)
            .ok_or_else(|| Error::InvalidPath(format!("edge {e} out of range")))
    }

    pub fn validate_path(&self, p: &Path) -> Result<()> {
        if p.vertices.len() != p.edges.len() + 1 {
            return Err(Error::InvalidPath("vertex/edge count mismatch".into()));
        }
        for (i, &e) in p.edges.iter().enumerate() {
            let edge = self.edge_checked(e)?;
            if edge.from != p.vertices[i] || edge.to != p.vertices[i + 1] {
                return Err(Error::InvalidPath(format!("edge {e} at position {i}")));
            }
        }
        Ok(())
    }

    pub fn validate_st_path(&self, p: &Path) -> Result<()> {
        self.validate_path(p)?;
        if p.start() != self.source || p.end() != self.sink {
            return Err(Error::InvalidPath(
                "path does not join source to sink".into(),
            ));
        }
        Ok(())
    }

    pub fn path_cost(&self, p: &Path) -> AffineForm {
        p.edges.iter().map(|&e| &self.edges[e].weight).sum()
    }

    /// Edges sorted by `(from, to, a, b)`; weights are already canonical.
    pub fn canonicalize(&mut self) {
        self.edges.sort_by(|x, y| {
            (x.from, x.to, &x.weight.constant, &x.weight.slope).cmp(&(
                y.from,
                y.to,
                &y.weight.constant,
                &y.weight.slope,
            ))
        });
    }
}
