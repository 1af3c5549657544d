use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use super::{ParametricGraph, Path};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A graph together with a topological order and sorted adjacency lists.
///
/// Out-edges of each vertex are sorted by `(head, edge index)`, which is
/// the tie-breaking order used when tracing shortest paths.
#[derive(Clone, Debug)]
pub struct Dag<'g> {
    graph: &'g ParametricGraph,
    order: Vec<usize>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

pub type SecondBest = Option<Rational>;

pub fn topo_order(g: &ParametricGraph) -> Result<Vec<usize>> {
    let n = g.vertex_count();
    let mut indeg = vec![0usize; n];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in g.edges() {
        indeg[e.to] += 1;
        succ[e.from].push(e.to);
    }
    let mut heap: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = heap.pop() {
        order.push(v);
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                heap.push(Reverse(w));
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&v| indeg[v] > 0).unwrap();
        return Err(Error::Cycle(stuck));
    }
    Ok(order)
}

impl<'g> Dag<'g> {
    pub fn new(graph: &'g ParametricGraph) -> Result<Self> {
        let order = topo_order(graph)?;
        let n = graph.vertex_count();
        let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut in_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, e) in graph.edges().iter().enumerate() {
            out_edges[e.from].push(i);
            in_edges[e.to].push(i);
        }
        for list in out_edges.iter_mut() {
            list.sort_by_key(|&e| (graph.edge(e).to, e));
        }
        Ok(Self {
            graph,
            order,
            out_edges,
            in_edges,
        })
    }

    pub fn graph(&self) -> &'g ParametricGraph {
        self.graph
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn weights_at(&self, x: &Rational) -> Vec<Rational> {
        self.graph
            .edges()
            .iter()
            .map(|e| e.weight.eval(x))
            .collect()
    }

    pub fn reachable_from(&self, src: usize) -> Vec<bool> {
        let mut seen = vec![false; self.graph.vertex_count()];
        seen[src] = true;
        for &v in &self.order {
            if seen[v] {
                for &e in &self.out_edges[v] {
                    seen[self.graph.edge(e).to] = true;
                }
            }
        }
        seen
    }

    pub fn reaching(&self, sink: usize) -> Vec<bool> {
        let mut seen = vec![false; self.graph.vertex_count()];
        seen[sink] = true;
        for &v in self.order.iter().rev() {
            if self.out_edges[v]
                .iter()
                .any(|&e| seen[self.graph.edge(e).to])
            {
                seen[v] = true;
            }
        }
        seen
    }

    pub fn dist_from(&self, src: usize, w: &[Rational]) -> Vec<Option<Rational>> {
        let mut d: Vec<Option<Rational>> = vec![None; self.graph.vertex_count()];
        d[src] = Some(Rational::from_integer(0.into()));
        for &v in &self.order {
            let Some(dv) = d[v].clone() else { continue };
            for &e in &self.out_edges[v] {
                let to = self.graph.edge(e).to;
                let cand = &dv + &w[e];
                if d[to].as_ref().is_none_or(|cur| &cand < cur) {
                    d[to] = Some(cand);
                }
            }
        }
        d
    }

    pub fn dist_to(&self, sink: usize, w: &[Rational]) -> Vec<Option<Rational>> {
        let mut d: Vec<Option<Rational>> = vec![None; self.graph.vertex_count()];
        d[sink] = Some(Rational::from_integer(0.into()));
        for &v in self.order.iter().rev() {
            if v == sink {
                continue;
            }
            for &e in &self.out_edges[v] {
                let Some(dw) = &d[self.graph.edge(e).to] else {
                    continue;
                };
                let cand = dw + &w[e];
                if d[v].as_ref().is_none_or(|cur| &cand < cur) {
                    d[v] = Some(cand);
                }
            }
        }
        d
    }

    /// Minimum-cost path from `src` to `sink` at `λ = x`; among equal-cost
    /// continuations the walk takes the smallest successor id, then the
    /// smallest edge index.
    pub fn shortest(&self, src: usize, sink: usize, x: &Rational) -> Result<(Path, Rational)> {
        let w = self.weights_at(x);
        self.shortest_with(src, sink, &w)
    }

    pub fn shortest_with(
        &self,
        src: usize,
        sink: usize,
        w: &[Rational],
    ) -> Result<(Path, Rational)> {
        let d = self.dist_to(sink, w);
        let cost = d[src]
            .clone()
            .ok_or(Error::Unreachable { start: src, sink })?;
        let mut vertices = vec![src];
        let mut edges = Vec::new();
        let mut v = src;
        while v != sink {
            let dv = d[v].as_ref().unwrap();
            let e = *self.out_edges[v]
                .iter()
                .find(|&&e| {
                    d[self.graph.edge(e).to]
                        .as_ref()
                        .is_some_and(|dw| &(dw + &w[e]) == dv)
                })
                .expect("a tight edge leaves every vertex with finite distance");
            v = self.graph.edge(e).to;
            edges.push(e);
            vertices.push(v);
        }
        Ok((Path { vertices, edges }, cost))
    }

    /// Cheapest `src`-`sink` path other than `p` at `λ = x`, or `None` when
    /// `p` is the only such path.
    pub fn second_best(
        &self,
        src: usize,
        sink: usize,
        x: &Rational,
        p: &Path,
    ) -> Result<SecondBest> {
        let w = self.weights_at(x);
        self.second_best_with(src, sink, &w, p)
    }

    pub fn second_best_with(
        &self,
        src: usize,
        sink: usize,
        w: &[Rational],
        p: &Path,
    ) -> Result<SecondBest> {
        self.graph.validate_path(p)?;
        if p.start() != src || p.end() != sink {
            return Err(Error::InvalidPath(
                "path endpoints differ from query".into(),
            ));
        }
        let ds = self.dist_from(src, w);
        let dt = self.dist_to(sink, w);
        let on_path: HashSet<usize> = p.edges.iter().copied().collect();
        let mut best: Option<Rational> = None;
        for (i, e) in self.graph.edges().iter().enumerate() {
            if on_path.contains(&i) {
                continue;
            }
            if let (Some(a), Some(b)) = (&ds[e.from], &dt[e.to]) {
                let c = a + &w[i] + b;
                if best.as_ref().is_none_or(|cur| &c < cur) {
                    best = Some(c);
                }
            }
        }
        Ok(best)
    }
}

pub fn fixed_lambda_shortest(g: &ParametricGraph, x: &Rational) -> Result<(Path, Rational)> {
    Dag::new(g)?.shortest(g.source, g.sink, x)
}

pub fn second_best_at(g: &ParametricGraph, x: &Rational, p: &Path) -> Result<SecondBest> {
    Dag::new(g)?.second_best(g.source, g.sink, x, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::AffineForm;
    use crate::graph::testgraphs::*;
    use crate::graph::{enumerate_paths, envelope_dp};
    use crate::rational::{frac, int};
    use rand::Rng;

    #[test]
    fn topo_examples() {
        let mut g = ParametricGraph::new(2, 0, 1).unwrap();
        g.add_edge(0, 1, AffineForm::zero()).unwrap();
        assert_eq!(topo_order(&g).unwrap(), vec![0, 1]);

        let d = diamond(line(0, 1), line(1, 0));
        let o = topo_order(&d).unwrap();
        assert_eq!(o[0], 0);
        assert_eq!(o[3], 3);

        let mut c = ParametricGraph::new(2, 0, 1).unwrap();
        c.add_edge(0, 1, AffineForm::zero()).unwrap();
        c.add_edge(1, 0, AffineForm::zero()).unwrap();
        assert!(matches!(topo_order(&c), Err(Error::Cycle(_))));
    }

    #[test]
    fn tie_break_prefers_smaller_successor() {
        let g = diamond(line(1, 0), line(1, 0));
        let (p, c) = fixed_lambda_shortest(&g, &int(0)).unwrap();
        assert_eq!(p.vertices, vec![0, 1, 3]);
        assert_eq!(c, int(1));
    }

    #[test]
    fn single_zero_edge() {
        let mut g = ParametricGraph::new(2, 0, 1).unwrap();
        g.add_edge(0, 1, AffineForm::zero()).unwrap();
        let (p, c) = fixed_lambda_shortest(&g, &frac(3, 7)).unwrap();
        assert_eq!(p.edges, vec![0]);
        assert_eq!(c, int(0));
        assert_eq!(second_best_at(&g, &int(0), &p).unwrap(), None);
    }

    #[test]
    fn unreachable_sink() {
        let g = ParametricGraph::new(2, 0, 1).unwrap();
        assert!(matches!(
            fixed_lambda_shortest(&g, &int(0)),
            Err(Error::Unreachable { .. })
        ));
    }

    #[test]
    fn second_best_parallel_paths() {
        let g = diamond(line(3, 0), line(5, 0));
        let (p, _) = fixed_lambda_shortest(&g, &int(0)).unwrap();
        assert_eq!(second_best_at(&g, &int(0), &p).unwrap(), Some(int(5)));
    }

    #[test]
    fn parallel_edges_are_distinct_paths() {
        let mut g = ParametricGraph::new(2, 0, 1).unwrap();
        g.add_edge(0, 1, line(2, 0)).unwrap();
        g.add_edge(0, 1, line(1, 0)).unwrap();
        let (p, c) = fixed_lambda_shortest(&g, &int(0)).unwrap();
        assert_eq!(p.edges, vec![1]);
        assert_eq!(c, int(1));
        assert_eq!(second_best_at(&g, &int(0), &p).unwrap(), Some(int(2)));
    }

    #[test]
    fn random_second_best_matches_enumeration() {
        let mut r = rng(7);
        for trial in 0..200 {
            let n = r.random_range(2..=9);
            let g = random_dag(&mut r, n, 0.4, 3);
            let x = frac(r.random_range(-20..=20), r.random_range(1..=5));
            let (p, c) = fixed_lambda_shortest(&g, &x).unwrap();
            let paths = enumerate_paths(&g, 100_000).unwrap();
            let brute_min = paths.iter().map(|q| g.path_cost(q).eval(&x)).min().unwrap();
            assert_eq!(c, brute_min, "trial {trial}");
            let brute_second = paths
                .iter()
                .filter(|q| **q != p)
                .map(|q| g.path_cost(q).eval(&x))
                .min();
            assert_eq!(
                second_best_at(&g, &x, &p).unwrap(),
                brute_second,
                "trial {trial}"
            );
        }
    }

    #[test]
    fn fixed_lambda_agrees_with_envelope() {
        let mut r = rng(11);
        for _ in 0..30 {
            let n = r.random_range(3..=10);
            let g = random_dag(&mut r, n, 0.35, 4);
            let env = envelope_dp(&g, None).unwrap();
            for _ in 0..50 {
                let x = frac(r.random_range(-200..=200), r.random_range(1..=9));
                let (_, c) = fixed_lambda_shortest(&g, &x).unwrap();
                assert_eq!(c, env.function.eval(&x));
                let (p, _) = fixed_lambda_shortest(&g, &x).unwrap();
                let sb = second_best_at(&g, &x, &p).unwrap();
                if let Some(s) = sb {
                    assert!(s >= c);
                }
            }
        }
    }
}
