//! Fixed-λ shortest path as a minimum-weight perfect matching on the
//! vertex-split bipartite graph.
//!
//! Side A holds `s` and every `v_out`, side B holds `t` and every `v_in`;
//! index 0 on each side is the terminal, index `i > 0` is `internal[i - 1]`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Dag, ParametricGraph, Path};
use crate::rational::{format, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitEdge {
    pub a: usize,
    pub b: usize,
    #[serde(serialize_with = "ser_rational")]
    pub weight: Rational,
    /// The edge of G this came from; `None` for a split edge.
    pub origin: Option<usize>,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format(r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitGraph {
    pub source: usize,
    pub sink: usize,
    pub internal: Vec<usize>,
    pub edges: Vec<SplitEdge>,
}

impl SplitGraph {
    pub fn side_len(&self) -> usize {
        self.internal.len() + 1
    }

    pub fn split_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.origin.is_none()).count()
    }

    /// Cheapest edge for every `(a, b)` cell.
    fn cost_matrix(&self) -> Vec<Vec<Option<usize>>> {
        let n = self.side_len();
        let mut best: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
        for (i, e) in self.edges.iter().enumerate() {
            let cell = &mut best[e.a][e.b];
            if cell.is_none_or(|j| e.weight < self.edges[j].weight) {
                *cell = Some(i);
            }
        }
        best
    }
}

/// Vertices off every s-t path are dropped first.
pub fn split_transform(g: &ParametricGraph, x: &Rational) -> Result<SplitGraph> {
    let dag = Dag::new(g)?;
    let weights = dag.weights_at(x);
    if let Some((e, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
        return Err(Error::NegativeWeight {
            edge: e,
            weight: format(w),
            lambda: format(x),
        });
    }
    let (s, t) = (g.source, g.sink);
    let from_s = dag.reachable_from(s);
    let to_t = dag.reaching(t);
    if !from_s[t] {
        return Err(Error::Unreachable { start: s, sink: t });
    }
    let keep: Vec<bool> = (0..g.vertex_count())
        .map(|v| from_s[v] && to_t[v])
        .collect();
    let internal: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| keep[v] && v != s && v != t)
        .collect();
    let mut index = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in internal.iter().enumerate() {
        index[v] = i + 1;
    }
    index[s] = 0;
    index[t] = 0;
    let mut edges: Vec<SplitEdge> = (1..=internal.len())
        .map(|i| SplitEdge {
            a: i,
            b: i,
            weight: Rational::zero(),
            origin: None,
        })
        .collect();
    for (i, e) in g.edges().iter().enumerate() {
        if !keep[e.from] || !keep[e.to] || e.to == s || e.from == t {
            continue;
        }
        edges.push(SplitEdge {
            a: index[e.from],
            b: index[e.to],
            weight: weights[i].clone(),
            origin: Some(i),
        });
    }
    Ok(SplitGraph {
        source: s,
        sink: t,
        internal,
        edges,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    /// `mate[a]` is the split-edge index matched at A-vertex `a`.
    pub mate: Vec<usize>,
    pub weight: Rational,
}

/// Exact Hungarian algorithm with potentials; absent cells cost `2S + 1`
/// where `S` is the total absolute weight, so any optimum using one proves
/// that no perfect matching exists.
pub fn min_weight_perfect_matching(sg: &SplitGraph) -> Result<Matching> {
    let n = sg.side_len();
    let cells = sg.cost_matrix();
    let total: Rational = sg.edges.iter().map(|e| e.weight.abs()).sum();
    let missing = total * Rational::from_integer(2.into()) + Rational::from_integer(1.into());
    let cost = |i: usize, j: usize| -> Rational {
        cells[i][j].map_or_else(|| missing.clone(), |e| sg.edges[e].weight.clone())
    };

    // 1-based rows/columns, column 0 is the virtual start.
    let mut u = vec![Rational::zero(); n + 1];
    let mut v = vec![Rational::zero(); n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<Rational>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta: Option<Rational> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - &u[i0] - &v[j];
                if minv[j].as_ref().is_none_or(|m| cur < *m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let m = minv[j].as_ref().unwrap();
                if delta.as_ref().is_none_or(|d| m < d) {
                    delta = Some(m.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(m) = minv[j].as_mut() {
                    *m -= &delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut mate = vec![usize::MAX; n];
    let mut weight = Rational::zero();
    for j in 1..=n {
        let a = row_of[j] - 1;
        let e = cells[a][j - 1].ok_or(Error::NoPerfectMatching)?;
        weight += &sg.edges[e].weight;
        mate[a] = e;
    }
    Ok(Matching { mate, weight })
}

/// Follows `s -> v1_in, v1_out -> v2_in, ...` until `t`.
pub fn recover_path(m: &Matching, sg: &SplitGraph, g: &ParametricGraph) -> Result<Path> {
    let mut edges = Vec::new();
    let mut a = 0;
    for _ in 0..sg.side_len() {
        let e = sg
            .edges
            .get(
                *m.mate
                    .get(a)
                    .ok_or_else(|| Error::MalformedChain(format!("A-vertex {a} unmatched")))?,
            )
            .ok_or_else(|| Error::MalformedChain(format!("bad edge at A-vertex {a}")))?;
        let origin = e.origin.ok_or_else(|| {
            Error::MalformedChain(format!("split edge reached from A-vertex {a}"))
        })?;
        edges.push(origin);
        if e.b == 0 {
            let p = g.path_from_edges(&edges)?;
            g.validate_st_path(&p)?;
            return Ok(p);
        }
        a = e.b;
    }
    Err(Error::MalformedChain("chain does not reach t".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingSolution {
    pub split: SplitGraph,
    pub matching: Matching,
    pub path: Path,
}

pub fn shortest_by_matching(g: &ParametricGraph, x: &Rational) -> Result<MatchingSolution> {
    let split = split_transform(g, x)?;
    let matching = min_weight_perfect_matching(&split)?;
    let path = recover_path(&matching, &split, g)?;
    Ok(MatchingSolution {
        split,
        matching,
        path,
    })
}
