use super::dag::Dag;
use super::envelope::Envelope;
use super::{ParametricGraph, Path};
use crate::affine::AffineForm;
use crate::error::{Error, Result};
use crate::pwl::lower_envelope_lines;

impl<'g> Dag<'g> {
    /// All `src`-`sink` paths in lexicographic edge order, failing once more
    /// than `limit` have been found.
    pub fn paths_between(&self, src: usize, sink: usize, limit: usize) -> Result<Vec<Path>> {
        let g = self.graph();
        let useful = self.reaching(sink);
        let mut out = Vec::new();
        if !useful[src] {
            return Ok(out);
        }
        let mut vertices = vec![src];
        let mut edges: Vec<usize> = Vec::new();
        // Each frame remembers which out-edge to try next.
        let mut cursor: Vec<usize> = vec![0];
        while let Some(&v) = vertices.last() {
            if v == sink {
                out.push(Path {
                    vertices: vertices.clone(),
                    edges: edges.clone(),
                });
                if out.len() > limit {
                    return Err(Error::LimitExceeded(limit));
                }
                vertices.pop();
                edges.pop();
                cursor.pop();
                continue;
            }
            let top = cursor.len() - 1;
            let outs = self.out_edges(v);
            let mut advanced = false;
            while cursor[top] < outs.len() {
                let e = outs[cursor[top]];
                cursor[top] += 1;
                let to = g.edge(e).to;
                if useful[to] {
                    vertices.push(to);
                    edges.push(e);
                    cursor.push(0);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                vertices.pop();
                edges.pop();
                cursor.pop();
            }
        }
        Ok(out)
    }
}

pub fn enumerate_paths(g: &ParametricGraph, limit: usize) -> Result<Vec<Path>> {
    Dag::new(g)?.paths_between(g.source, g.sink, limit)
}

/// Lower envelope of the costs of every source-sink path.
pub fn envelope_bruteforce(g: &ParametricGraph, limit: usize) -> Result<Envelope> {
    let paths = enumerate_paths(g, limit)?;
    if paths.is_empty() {
        return Err(Error::Unreachable {
            start: g.source,
            sink: g.sink,
        });
    }
    let costs: Vec<AffineForm> = paths.iter().map(|p| g.path_cost(p)).collect();
    let env = lower_envelope_lines(&costs)?;
    let witnesses = env.witnesses.iter().map(|&i| paths[i].clone()).collect();
    Ok(Envelope {
        function: env.function,
        witnesses,
    })
}
