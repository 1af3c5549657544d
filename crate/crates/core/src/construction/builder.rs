use std::ops::Range;

use num_traits::Signed;

use super::{k_l, k_r, IntervalSpec, SymWeight};
use crate::affine::AffineForm;
use crate::error::{Error, Result};
use crate::graph::{Dag, ParametricGraph, Path};
use crate::link::planarize;
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiParams {
    pub n: usize,
    pub inputs: usize,
    pub d: Rational,
    pub m: usize,
}

impl PhiParams {
    pub fn new(n: usize, inputs: usize, d: Rational, m: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter("n must be at least 3".into()));
        }
        if inputs == 0 {
            return Err(Error::InvalidParameter("B must be at least 1".into()));
        }
        if d.abs() > int(1) {
            return Err(Error::InvalidParameter("|D| must be at most 1".into()));
        }
        Ok(Self { n, inputs, d, m })
    }

    pub fn big_n(&self) -> usize {
        self.n * self.n
    }
}

/// A built `G(B, D, m)` with a sink attached to its last layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiInstance {
    pub params: PhiParams,
    /// Source is input 0, sink is the attached vertex `t`.
    pub graph: ParametricGraph,
    /// Symbolic weight of every edge, sink edges included.
    pub coefficients: Vec<SymWeight>,
    pub first_layer: Vec<usize>,
    pub last_layer: Vec<usize>,
    pub sink_edges: Vec<usize>,
    /// `declared_paths[b][j]`, ending in the last layer (without the sink edge).
    pub declared_paths: Vec<Vec<Path>>,
    pub intervals: IntervalSpec,
    pub core_vertex_count: usize,
    /// Edges of the outermost planarized linking gadget.
    pub link_edges: Range<usize>,
}

impl PhiInstance {
    pub fn sink(&self) -> usize {
        self.graph.sink
    }

    /// The declared path extended by its sink edge.
    pub fn declared_to_sink(&self, b: usize, j: usize) -> Path {
        let p = &self.declared_paths[b][j];
        let pos = self
            .last_layer
            .iter()
            .position(|&v| v == p.end())
            .expect("declared paths end in the last layer");
        let mut q = p.clone();
        q.edges.push(self.sink_edges[pos]);
        q.vertices.push(self.sink());
        q
    }

    /// Rebuilds the numeric weights from the symbolic ones.
    pub fn weights_from_coefficients(&self) -> Vec<AffineForm> {
        self.coefficients
            .iter()
            .map(|c| c.eval(&self.params.d))
            .collect()
    }
}

/// `G(B, ·, m)` with weights symbolic in `D`; its shape does not depend on `D`.
#[derive(Clone, Debug)]
struct SymGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize, SymWeight)>,
    first: Vec<usize>,
    last: Vec<usize>,
    /// `paths[b][j]` as edge ids.
    paths: Vec<Vec<Vec<usize>>>,
    link_edges: Range<usize>,
}

fn base(inputs: usize) -> SymGraph {
    SymGraph {
        vertex_count: 2 * inputs,
        edges: (0..inputs)
            .map(|b| (b, inputs + b, SymWeight::zero()))
            .collect(),
        first: (0..inputs).collect(),
        last: (inputs..2 * inputs).collect(),
        paths: (0..inputs).map(|b| vec![vec![b]]).collect(),
        link_edges: 0..0,
    }
}

fn build(n: usize, inputs: usize, m: usize) -> Result<SymGraph> {
    if m == 0 {
        return Ok(base(inputs));
    }
    let left = build(n, inputs, m - 1)?;
    let right = build(n, inputs + n, m - 1)?;
    let arr = planarize(inputs, n)?;
    let big_n = int((n * n) as i64);
    let kl = k_l(inputs, m, n);
    let kr = k_r(inputs, n);

    let mut count = left.vertex_count;
    let mut mirror = vec![usize::MAX; left.vertex_count];
    for &v in &left.last {
        mirror[v] = v;
    }
    for slot in mirror.iter_mut() {
        if *slot == usize::MAX {
            *slot = count;
            count += 1;
        }
    }
    let mut link_ids = vec![usize::MAX; arr.points.len()];
    for (b, &p) in arr.left.iter().enumerate() {
        link_ids[p] = mirror[left.first[b]];
    }
    for slot in link_ids.iter_mut() {
        if *slot == usize::MAX {
            *slot = count;
            count += 1;
        }
    }
    let mut right_ids = vec![usize::MAX; right.vertex_count];
    for (k, &v) in right.first.iter().enumerate() {
        right_ids[v] = link_ids[arr.right[k]];
    }
    for slot in right_ids.iter_mut() {
        if *slot == usize::MAX {
            *slot = count;
            count += 1;
        }
    }

    let mut edges =
        Vec::with_capacity(2 * left.edges.len() + arr.fragments.len() + right.edges.len());
    for (u, v, w) in &left.edges {
        edges.push((*u, *v, w.into_left(&kl, &kr, &big_n)));
    }
    let m_off = edges.len();
    for (u, v, w) in &left.edges {
        edges.push((mirror[*v], mirror[*u], w.into_left(&kl, &kr, &big_n)));
    }
    let link_off = edges.len();
    for f in &arr.fragments {
        edges.push((
            link_ids[f.from],
            link_ids[f.to],
            SymWeight::link_fragment(f.b, f.r, &f.dx, &kr, &big_n),
        ));
    }
    let r_off = edges.len();
    for (u, v, w) in &right.edges {
        edges.push((right_ids[*u], right_ids[*v], w.into_right(&kr, &big_n)));
    }

    let per_level = n.pow((m - 1) as u32);
    let paths = (0..inputs)
        .map(|b| {
            (0..per_level * n)
                .map(|j| {
                    let (d, r) = (j / n, j % n);
                    let pl = &left.paths[b][d];
                    let mut p = pl.clone();
                    p.extend(pl.iter().rev().map(|&e| m_off + e));
                    p.extend(arr.segment(b, r + 1).iter().map(|&f| link_off + f));
                    p.extend(right.paths[b + r + 1][d].iter().map(|&e| r_off + e));
                    p
                })
                .collect()
        })
        .collect();
    Ok(SymGraph {
        vertex_count: count,
        edges,
        first: left.first.clone(),
        last: right.last.iter().map(|&v| right_ids[v]).collect(),
        paths,
        link_edges: link_off..r_off,
    })
}

pub fn build_phi_graph(params: &PhiParams) -> Result<PhiInstance> {
    let params = PhiParams::new(params.n, params.inputs, params.d.clone(), params.m)?;
    let sym = build(params.n, params.inputs, params.m)?;
    let core = sym.vertex_count;
    let mut graph = ParametricGraph::new(core + 1, sym.first[0], core)?;
    let mut coefficients = Vec::with_capacity(sym.edges.len() + sym.last.len());
    for (u, v, w) in &sym.edges {
        graph.add_edge(*u, *v, w.eval(&params.d))?;
        coefficients.push(w.clone());
    }
    let mut sink_edges = Vec::with_capacity(sym.last.len());
    for &v in &sym.last {
        sink_edges.push(graph.add_edge(v, core, AffineForm::zero())?);
        coefficients.push(SymWeight::zero());
    }
    let declared_paths = sym
        .paths
        .iter()
        .map(|row| row.iter().map(|p| graph.path_from_edges(p)).collect())
        .collect::<Result<Vec<Vec<Path>>>>()?;
    graph.layers = Some(depths(&graph, &sym.first)?);
    Ok(PhiInstance {
        intervals: IntervalSpec::new(params.n, params.m)?,
        params,
        graph,
        coefficients,
        first_layer: sym.first,
        last_layer: sym.last,
        sink_edges,
        declared_paths,
        core_vertex_count: core,
        link_edges: sym.link_edges,
    })
}

/// Longest-path depth from the first layer.
fn depths(g: &ParametricGraph, first: &[usize]) -> Result<Vec<usize>> {
    let dag = Dag::new(g)?;
    let mut depth = vec![0usize; g.vertex_count()];
    for &v in dag.order() {
        if first.contains(&v) {
            continue;
        }
        depth[v] = dag
            .in_edges(v)
            .iter()
            .map(|&e| depth[g.edge(e).from] + 1)
            .max()
            .unwrap_or(0);
    }
    Ok(depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use std::collections::HashSet;

    fn params(n: usize, inputs: usize, d: Rational, m: usize) -> PhiParams {
        PhiParams::new(n, inputs, d, m).unwrap()
    }

    #[test]
    fn base_case() {
        let inst = build_phi_graph(&params(4, 3, int(0), 0)).unwrap();
        assert_eq!(inst.core_vertex_count, 6);
        assert_eq!(inst.graph.vertex_count(), 7);
        let core_edges: Vec<_> = inst.graph.edges()[..3].to_vec();
        assert!(core_edges.iter().all(|e| e.weight.is_zero()));
        let ends: HashSet<_> = core_edges.iter().flat_map(|e| [e.from, e.to]).collect();
        assert_eq!(ends.len(), 6);
        assert_eq!(inst.declared_paths.len(), 3);
        assert_eq!(inst.declared_paths[2][0].edges, vec![2]);
    }

    #[test]
    fn parameter_checks() {
        assert!(PhiParams::new(2, 1, int(0), 1).is_err());
        assert!(PhiParams::new(4, 0, int(0), 1).is_err());
        assert!(PhiParams::new(4, 1, frac(-5, 4), 1).is_err());
        assert!(PhiParams::new(3, 1, int(-1), 1).is_ok());
    }

    #[test]
    fn level_one_shape() {
        let inst = build_phi_graph(&params(4, 1, int(0), 1)).unwrap();
        // left 2, mirror +1, link +5, right +5
        assert_eq!(inst.core_vertex_count, 13);
        assert_eq!(inst.first_layer.len(), 1);
        assert_eq!(inst.last_layer.len(), 5);
        assert_eq!(inst.declared_paths[0].len(), 4);
        for p in &inst.declared_paths[0] {
            inst.graph.validate_path(p).unwrap();
            assert_eq!(p.start(), inst.graph.source);
            assert!(inst.last_layer.contains(&p.end()));
        }
        let layers = inst.graph.layers.as_ref().unwrap();
        assert_eq!(layers[inst.graph.source], 0);
    }

    #[test]
    fn coefficients_reproduce_weights() {
        for d in [int(0), frac(-1, 2), int(1)] {
            let inst = build_phi_graph(&params(3, 2, d, 2)).unwrap();
            let w = inst.weights_from_coefficients();
            for (e, w) in inst.graph.edges().iter().zip(&w) {
                assert_eq!(&e.weight, w);
            }
        }
    }

    #[test]
    fn shape_independent_of_d() {
        let a = build_phi_graph(&params(3, 2, int(0), 2)).unwrap();
        let b = build_phi_graph(&params(3, 2, frac(2, 3), 2)).unwrap();
        assert_eq!(a.coefficients, b.coefficients);
        assert_eq!(a.declared_paths, b.declared_paths);
        assert_ne!(a.graph, b.graph);
    }
}
