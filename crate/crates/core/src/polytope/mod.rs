//! Three-parameter edge weights: path coefficient vectors, their convex
//! hull, Minkowski sums and the two-parameter reduction.

mod hull;

pub use hull::{add, cross, dot, hull3_vertices, orient, sub, Facet, Hull3, Point3};

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::affine::AffineForm;
use crate::error::{Error, Result};
use crate::graph::{Dag, Envelope, ParametricGraph, Path};
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriEdge {
    pub from: usize,
    pub to: usize,
    pub coeffs: Point3,
}

/// A DAG whose edge weights are `a λ1 + b λ2 + c λ3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriGraph {
    pub vertex_count: usize,
    pub source: usize,
    pub sink: usize,
    pub edges: Vec<TriEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathVector3 {
    pub vector: Point3,
    pub path: Path,
}

fn zero3() -> Point3 {
    [int(0), int(0), int(0)]
}

impl TriGraph {
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
        })
    }

    pub fn add_edge(&mut self, from: usize, to: usize, coeffs: Point3) -> Result<usize> {
        for v in [from, to] {
            if v >= self.vertex_count {
                return Err(Error::VertexOutOfRange(v));
            }
        }
        self.edges.push(TriEdge { from, to, coeffs });
        Ok(self.edges.len() - 1)
    }

    /// Same structure with every weight replaced by `f(coeffs)`.
    pub fn project(&self, f: impl Fn(&Point3) -> AffineForm) -> Result<ParametricGraph> {
        let mut g = ParametricGraph::new(self.vertex_count, self.source, self.sink)?;
        for e in &self.edges {
            g.add_edge(e.from, e.to, f(&e.coeffs))?;
        }
        Ok(g)
    }

    /// The graph with scalar weights `coeffs · λ`.
    pub fn at(&self, lambda: &Point3) -> Result<ParametricGraph> {
        self.project(|c| AffineForm::constant(dot(c, lambda)))
    }

    pub fn path_vector(&self, p: &Path) -> Point3 {
        p.edges
            .iter()
            .fold(zero3(), |acc, &e| add(&acc, &self.edges[e].coeffs))
    }
}

pub fn path_vectors(g: &TriGraph, limit: usize) -> Result<Vec<PathVector3>> {
    let shape = g.project(|_| AffineForm::zero())?;
    let paths = Dag::new(&shape)?.paths_between(g.source, g.sink, limit)?;
    Ok(paths
        .into_iter()
        .map(|path| PathVector3 {
            vector: g.path_vector(&path),
            path,
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub path_count: usize,
    pub hull_dimension: usize,
    /// Number of hull vertices: an upper bound on the cover size.
    pub cover_upper: usize,
    /// Distinct vectors that were the unique minimizer at some sample: a
    /// lower bound on the cover size.
    pub cover_lower: usize,
    pub samples: usize,
    /// Samples where no hull vertex attains the minimum, or where a unique
    /// minimizer is not a hull vertex.
    pub violations: usize,
    pub face_counts: Option<(usize, usize, usize)>,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

pub fn cover_check(g: &TriGraph, samples: &[Point3], limit: usize) -> Result<CoverReport> {
    let vectors = path_vectors(g, limit)?;
    if vectors.is_empty() {
        return Err(Error::Unreachable {
            start: g.source,
            sink: g.sink,
        });
    }
    let points: Vec<Point3> = vectors.iter().map(|v| v.vector.clone()).collect();
    let hull = Hull3::new(&points);
    let verts: HashSet<Point3> = hull.vertex_points().into_iter().collect();
    let distinct: Vec<Point3> = hull.points.clone();
    let mut violations = 0;
    let mut needed: BTreeSet<Point3> = BTreeSet::new();
    for lam in samples {
        let costs: Vec<Rational> = distinct.iter().map(|p| dot(p, lam)).collect();
        let best = costs.iter().min().unwrap();
        let minimizers: Vec<&Point3> = distinct
            .iter()
            .zip(&costs)
            .filter(|(_, c)| *c == best)
            .map(|(p, _)| p)
            .collect();
        if !minimizers.iter().any(|p| verts.contains(*p)) {
            violations += 1;
        }
        if let [only] = minimizers[..] {
            if !verts.contains(only) {
                violations += 1;
            }
            needed.insert(only.clone());
        }
    }
    Ok(CoverReport {
        path_count: vectors.len(),
        hull_dimension: hull.dim,
        cover_upper: verts.len(),
        cover_lower: needed.len(),
        samples: samples.len(),
        violations,
        face_counts: if hull.vertices.len() <= 200 {
            hull.face_counts()
        } else {
            None
        },
    })
}

/// Integer directions uniform in `[-range, range]^3`, deterministic per seed.
pub fn sample_directions(seed: u64, count: usize, range: i64) -> Vec<Point3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut c = || int(rng.random_range(-range..=range));
            [c(), c(), c()]
        })
        .collect()
}

const MINKOWSKI_LIMIT: usize = 1_000_000;

/// Vertices of `conv(A + B)`.
pub fn minkowski_vertices(a: &[Point3], b: &[Point3]) -> Result<Vec<Point3>> {
    if a.len().saturating_mul(b.len()) > MINKOWSKI_LIMIT {
        return Err(Error::TooLarge(format!("{} x {} sums", a.len(), b.len())));
    }
    let va = hull3_vertices(a);
    let vb = hull3_vertices(b);
    let sums: Vec<Point3> = va
        .iter()
        .flat_map(|x| vb.iter().map(move |y| add(x, y)))
        .collect();
    Ok(hull3_vertices(&sums))
}

fn unique_argmax<'a>(pts: &'a [Point3], c: &Point3) -> Option<&'a Point3> {
    let best = pts.iter().map(|p| dot(c, p)).max()?;
    let mut hits = pts.iter().filter(|p| dot(c, p) == best);
    let first = hits.next()?;
    hits.all(|p| p == first).then_some(first)
}

/// The unique `(v_A, v_B)` with `v = v_A + v_B`, read off a direction that
/// exposes `v` in `conv(A + B)`.
pub fn decompose_vertex(v: &Point3, a: &[Point3], b: &[Point3]) -> Result<(Point3, Point3)> {
    let va = hull3_vertices(a);
    let vb = hull3_vertices(b);
    let sums: Vec<Point3> = va
        .iter()
        .flat_map(|x| vb.iter().map(move |y| add(x, y)))
        .collect();
    let h = Hull3::new(&sums);
    let idx = h
        .vertices
        .iter()
        .copied()
        .find(|&i| &h.points[i] == v)
        .ok_or(Error::NotAVertex)?;
    let c = h.exposing_direction(idx).ok_or(Error::NotAVertex)?;
    let pa = unique_argmax(&va, &c).ok_or(Error::NotAVertex)?;
    let pb = unique_argmax(&vb, &c).ok_or(Error::NotAVertex)?;
    if &add(pa, pb) != v {
        return Err(Error::NotAVertex);
    }
    Ok((pa.clone(), pb.clone()))
}

/// Envelopes of `a λ1 + b λ2` restricted to `λ2 = 1` and `λ2 = -1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoParamReport {
    pub plus: Envelope,
    pub minus: Envelope,
    /// Union of both witness sets.
    pub witnesses: Vec<Path>,
}

impl TwoParamReport {
    pub fn pieces(&self) -> usize {
        self.witnesses.len()
    }
}

/// The third coefficient of every edge must be zero.
pub fn two_param_envelopes(g: &TriGraph) -> Result<TwoParamReport> {
    if g.edges.iter().any(|e| e.coeffs[2] != int(0)) {
        return Err(Error::InvalidParameter(
            "two-parameter graphs have c = 0".into(),
        ));
    }
    let plus = g.project(|c| AffineForm::new(c[1].clone(), c[0].clone()))?;
    let minus = g.project(|c| AffineForm::new(-&c[1], c[0].clone()))?;
    let plus = Dag::new(&plus)?.envelope(g.source, g.sink, None)?;
    let minus = Dag::new(&minus)?.envelope(g.source, g.sink, None)?;
    let mut seen = HashSet::new();
    let witnesses = plus
        .witnesses
        .iter()
        .chain(&minus.witnesses)
        .filter(|p| seen.insert((*p).clone()))
        .cloned()
        .collect();
    Ok(TwoParamReport {
        plus,
        minus,
        witnesses,
    })
}

pub fn two_param_pieces(g: &TriGraph) -> Result<usize> {
    Ok(two_param_envelopes(g)?.pieces())
}
