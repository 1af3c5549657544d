use super::dag::Dag;
use super::{ParametricGraph, Path};
use crate::error::{Error, Result};
use crate::pwl::{Interval, PwlFunction};

/// The shortest-path cost function together with one optimal path per piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Envelope {
    pub function: PwlFunction,
    pub witnesses: Vec<Path>,
}

impl Envelope {
    pub fn piece_count(&self) -> usize {
        self.function.piece_count()
    }
}

impl<'g> Dag<'g> {
    /// Source-to-sink cost function over `domain`, by a min-plus sweep in
    /// topological order.
    pub fn envelope_function(
        &self,
        src: usize,
        sink: usize,
        domain: Option<&Interval>,
    ) -> Result<PwlFunction> {
        let g = self.graph();
        let useful = self.reaching(sink);
        let mut dist: Vec<Option<PwlFunction>> = vec![None; g.vertex_count()];
        if useful[src] {
            dist[src] = Some(PwlFunction::zero(domain.cloned()));
        }
        for &v in self.order() {
            if v == src || !useful[v] {
                continue;
            }
            let mut acc: Option<PwlFunction> = None;
            for &e in self.in_edges(v) {
                let Some(du) = &dist[g.edge(e).from] else {
                    continue;
                };
                let cand = du.add_affine(&g.edge(e).weight);
                acc = Some(match acc {
                    None => cand,
                    Some(a) => a.min(&cand)?,
                });
            }
            dist[v] = acc;
        }
        dist[sink]
            .take()
            .ok_or(Error::Unreachable { start: src, sink })
    }

    pub fn envelope(&self, src: usize, sink: usize, domain: Option<&Interval>) -> Result<Envelope> {
        let function = self.envelope_function(src, sink, domain)?;
        let mut witnesses = Vec::with_capacity(function.piece_count());
        for (i, seg) in function.segments().iter().enumerate() {
            let x = function.segment_interior_point(i);
            let (p, _) = self.shortest(src, sink, &x)?;
            if &self.graph().path_cost(&p) != seg {
                return Err(Error::InvalidPath(format!(
                    "witness for piece {i} does not reproduce its affine form"
                )));
            }
            witnesses.push(p);
        }
        Ok(Envelope {
            function,
            witnesses,
        })
    }
}

pub fn envelope_dp(g: &ParametricGraph, domain: Option<&Interval>) -> Result<Envelope> {
    Dag::new(g)?.envelope(g.source, g.sink, domain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::AffineForm;
    use crate::graph::envelope_bruteforce;
    use crate::graph::testgraphs::*;
    use crate::rational::{frac, int};
    use rand::Rng;

    #[test]
    fn symmetric_crossing() {
        let g = diamond(line(0, 1), line(1, -1));
        let env = envelope_dp(&g, None).unwrap();
        assert_eq!(env.piece_count(), 2);
        assert_eq!(env.function.breakpoints(), &[frac(1, 2)]);
        assert_eq!(env.witnesses[0].vertices, vec![0, 1, 3]);
        assert_eq!(env.witnesses[1].vertices, vec![0, 2, 3]);
    }

    #[test]
    fn single_path() {
        let mut g = ParametricGraph::new(3, 0, 2).unwrap();
        g.add_edge(0, 1, line(1, 2)).unwrap();
        g.add_edge(1, 2, line(3, -1)).unwrap();
        let env = envelope_dp(&g, None).unwrap();
        assert_eq!(env.function, PwlFunction::line(line(4, 1)));
    }

    #[test]
    fn bounded_domain() {
        let g = diamond(line(0, 1), line(1, -1));
        let d = Interval::new(int(0), int(1)).unwrap();
        let env = envelope_dp(&g, Some(&d)).unwrap();
        assert_eq!(env.piece_count(), 2);
        let d = Interval::new(int(2), int(3)).unwrap();
        let env = envelope_dp(&g, Some(&d)).unwrap();
        assert_eq!(env.piece_count(), 1);
        assert_eq!(env.function.segments()[0], line(1, -1));
    }

    #[test]
    fn unreachable_is_error() {
        let mut g = ParametricGraph::new(3, 0, 2).unwrap();
        g.add_edge(0, 1, AffineForm::zero()).unwrap();
        assert!(envelope_dp(&g, None).is_err());
    }

    #[test]
    fn dp_matches_bruteforce_on_random_dags() {
        let mut r = rng(2024);
        for trial in 0..500 {
            let n = r.random_range(2..=12);
            let g = random_dag(&mut r, n, 0.3, 8);
            let dp = envelope_dp(&g, None).unwrap();
            let bf = envelope_bruteforce(&g, 1_000_000).unwrap();
            assert_eq!(dp.function, bf.function, "trial {trial}");
            assert!(dp.function.is_concave());
            for (seg, w) in dp.function.segments().iter().zip(&dp.witnesses) {
                g.validate_st_path(w).unwrap();
                assert_eq!(&g.path_cost(w), seg);
            }
        }
    }
}
