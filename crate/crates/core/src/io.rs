//! JSON wire formats. Rationals travel as canonical `"p/q"` strings so that
//! documents are exact and byte-stable.

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::affine::AffineForm;
use crate::construction::{IntervalSpec, PhiInstance, PhiParams, SymWeight};
use crate::error::{Error, Result};
use crate::graph::{Envelope, ParametricGraph, Path};
use crate::link::{link_weights, GadgetSpec};
use crate::polytope::TriGraph;
use crate::pwl::{Interval, PwlFunction};
use crate::rational::{format, parse, Rational};
use crate::words::WordSequence;

pub const SCHEMA_VERSION: u32 = 1;

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

fn check_version(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::Format(format!("unsupported schema_version {v}")));
    }
    Ok(())
}

fn rationals<const K: usize>(xs: &[String; K]) -> Result<[Rational; K]> {
    let v = xs.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
    Ok(v.try_into().expect("length preserved"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeWire {
    pub from: usize,
    pub to: usize,
    /// Weight `a + b λ`.
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphWire {
    pub vertex_count: usize,
    pub source: usize,
    pub sink: usize,
    pub edges: Vec<EdgeWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Vec<[String; 2]>>,
}

impl GraphWire {
    pub fn from_graph(g: &ParametricGraph) -> Self {
        Self {
            vertex_count: g.vertex_count(),
            source: g.source,
            sink: g.sink,
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeWire {
                    from: e.from,
                    to: e.to,
                    a: format(&e.weight.constant),
                    b: format(&e.weight.slope),
                })
                .collect(),
            layers: g.layers.clone(),
            embedding: g
                .embedding
                .as_ref()
                .map(|pts| pts.iter().map(|(x, y)| [format(x), format(y)]).collect()),
        }
    }

    pub fn to_graph(&self) -> Result<ParametricGraph> {
        let mut g = ParametricGraph::new(self.vertex_count, self.source, self.sink)?;
        for e in &self.edges {
            g.add_edge(e.from, e.to, AffineForm::new(parse(&e.a)?, parse(&e.b)?))?;
        }
        if let Some(layers) = &self.layers {
            if layers.len() != self.vertex_count {
                return Err(Error::Format("layers must list every vertex".into()));
            }
        }
        g.layers = self.layers.clone();
        g.embedding = match &self.embedding {
            None => None,
            Some(pts) => {
                if pts.len() != self.vertex_count {
                    return Err(Error::Format("embedding must list every vertex".into()));
                }
                Some(
                    pts.iter()
                        .map(|p| Ok((parse(&p[0])?, parse(&p[1])?)))
                        .collect::<Result<_>>()?,
                )
            }
        };
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub schema_version: u32,
    #[serde(flatten)]
    pub graph: GraphWire,
}

pub fn graph_to_json(g: &ParametricGraph) -> Result<String> {
    to_json(&GraphFile {
        schema_version: SCHEMA_VERSION,
        graph: GraphWire::from_graph(g),
    })
}

/// Edges sorted by endpoints and weight.
pub fn canonical_graph_json(g: &ParametricGraph) -> Result<String> {
    let mut c = g.clone();
    c.canonicalize();
    graph_to_json(&c)
}

pub fn graph_from_json(text: &str) -> Result<ParametricGraph> {
    let f: GraphFile = from_json(text)?;
    check_version(f.schema_version)?;
    f.graph.to_graph()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathWire {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl From<&Path> for PathWire {
    fn from(p: &Path) -> Self {
        Self {
            vertices: p.vertices.clone(),
            edges: p.edges.clone(),
        }
    }
}

impl PathWire {
    pub fn to_path(&self, g: &ParametricGraph) -> Result<Path> {
        let p = g.path_from_edges(&self.edges)?;
        if p.vertices != self.vertices {
            return Err(Error::Format(
                "path vertices disagree with its edges".into(),
            ));
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceWire {
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeFile {
    pub schema_version: u32,
    pub domain: Option<[String; 2]>,
    pub piece_count: usize,
    pub breakpoints: Vec<String>,
    pub pieces: Vec<PieceWire>,
    #[serde(default)]
    pub witnesses: Vec<PathWire>,
}

pub fn pwl_to_wire(f: &PwlFunction, witnesses: &[Path]) -> EnvelopeFile {
    EnvelopeFile {
        schema_version: SCHEMA_VERSION,
        domain: f.domain().map(|d| [format(&d.lo), format(&d.hi)]),
        piece_count: f.piece_count(),
        breakpoints: f.breakpoints().iter().map(format).collect(),
        pieces: f
            .segments()
            .iter()
            .map(|s| PieceWire {
                a: format(&s.constant),
                b: format(&s.slope),
            })
            .collect(),
        witnesses: witnesses.iter().map(PathWire::from).collect(),
    }
}

pub fn envelope_to_json(env: &Envelope) -> Result<String> {
    to_json(&pwl_to_wire(&env.function, &env.witnesses))
}

pub fn pwl_from_wire(f: &EnvelopeFile) -> Result<PwlFunction> {
    check_version(f.schema_version)?;
    let domain = match &f.domain {
        None => None,
        Some(d) => {
            let [lo, hi] = rationals(d)?;
            Some(Interval::new(lo, hi)?)
        }
    };
    let breaks = f
        .breakpoints
        .iter()
        .map(|s| parse(s))
        .collect::<Result<Vec<_>>>()?;
    let segs = f
        .pieces
        .iter()
        .map(|p| Ok(AffineForm::new(parse(&p.a)?, parse(&p.b)?)))
        .collect::<Result<Vec<_>>>()?;
    PwlFunction::from_parts(breaks, segs, domain)
}

pub fn pwl_from_json(text: &str) -> Result<PwlFunction> {
    pwl_from_wire(&from_json(text)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiParamsWire {
    pub n: usize,
    #[serde(rename = "B")]
    pub inputs: usize,
    #[serde(rename = "D")]
    pub d: String,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiFile {
    pub schema_version: u32,
    pub params: PhiParamsWire,
    pub graph: GraphWire,
    /// `[a1, a2, b1, b2]` per edge: weight `(a1 + a2 D) + (b1 + b2 D) λ`.
    pub coefficients: Vec<[String; 4]>,
    pub first_layer: Vec<usize>,
    pub last_layer: Vec<usize>,
    pub sink_edges: Vec<usize>,
    pub core_vertex_count: usize,
    pub link_edges: [usize; 2],
    pub alpha_table: Vec<String>,
    pub declared_paths: Vec<Vec<PathWire>>,
}

pub fn phi_to_wire(inst: &PhiInstance) -> PhiFile {
    let p = &inst.params;
    PhiFile {
        schema_version: SCHEMA_VERSION,
        params: PhiParamsWire {
            n: p.n,
            inputs: p.inputs,
            d: format(&p.d),
            m: p.m,
        },
        graph: GraphWire::from_graph(&inst.graph),
        coefficients: inst
            .coefficients
            .iter()
            .map(|c| c.components().map(format))
            .collect(),
        first_layer: inst.first_layer.clone(),
        last_layer: inst.last_layer.clone(),
        sink_edges: inst.sink_edges.clone(),
        core_vertex_count: inst.core_vertex_count,
        link_edges: [inst.link_edges.start, inst.link_edges.end],
        alpha_table: inst.intervals.alpha.iter().map(|a| a.to_string()).collect(),
        declared_paths: inst
            .declared_paths
            .iter()
            .map(|row| row.iter().map(PathWire::from).collect())
            .collect(),
    }
}

pub fn phi_from_wire(f: &PhiFile) -> Result<PhiInstance> {
    check_version(f.schema_version)?;
    let params = PhiParams::new(f.params.n, f.params.inputs, parse(&f.params.d)?, f.params.m)?;
    let graph = f.graph.to_graph()?;
    let coefficients = f
        .coefficients
        .iter()
        .map(|c| {
            let [a1, a2, b1, b2] = rationals(c)?;
            Ok(SymWeight { a1, a2, b1, b2 })
        })
        .collect::<Result<Vec<_>>>()?;
    let alpha = f
        .alpha_table
        .iter()
        .map(|s| {
            s.parse::<BigInt>()
                .map_err(|_| Error::Format(format!("bad alpha `{s}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    let intervals = IntervalSpec {
        n: params.n,
        m: params.m,
        alpha,
    };
    let declared_paths = f
        .declared_paths
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| p.to_path(&graph))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let in_range = |v: &usize| *v < graph.vertex_count();
    let edge_ok = |e: &usize| *e < graph.edges().len();
    if !f.first_layer.iter().all(in_range)
        || !f.last_layer.iter().all(in_range)
        || !f.sink_edges.iter().all(edge_ok)
    {
        return Err(Error::Format(
            "layer or sink-edge index out of range".into(),
        ));
    }
    if f.first_layer.len() != params.inputs
        || f.sink_edges.len() != f.last_layer.len()
        || declared_paths.len() != params.inputs
        || declared_paths.iter().any(|r| r.len() != intervals.count())
    {
        return Err(Error::Format(
            "instance tables do not match its parameters".into(),
        ));
    }
    if declared_paths
        .iter()
        .flatten()
        .any(|p| !f.last_layer.contains(&p.end()))
    {
        return Err(Error::Format(
            "declared path does not end in the last layer".into(),
        ));
    }
    Ok(PhiInstance {
        params,
        graph,
        coefficients,
        first_layer: f.first_layer.clone(),
        last_layer: f.last_layer.clone(),
        sink_edges: f.sink_edges.clone(),
        declared_paths,
        intervals,
        core_vertex_count: f.core_vertex_count,
        link_edges: f.link_edges[0]..f.link_edges[1],
    })
}

pub fn phi_to_json(inst: &PhiInstance) -> Result<String> {
    to_json(&phi_to_wire(inst))
}

pub fn phi_from_json(text: &str) -> Result<PhiInstance> {
    phi_from_wire(&from_json(text)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordsFile {
    pub schema_version: u32,
    #[serde(flatten)]
    pub sequence: WordSequence,
}

pub fn words_to_json(s: &WordSequence) -> Result<String> {
    to_json(&WordsFile {
        schema_version: SCHEMA_VERSION,
        sequence: s.clone(),
    })
}

pub fn words_from_json(text: &str) -> Result<WordSequence> {
    let f: WordsFile = from_json(text)?;
    check_version(f.schema_version)?;
    f.sequence.validate()?;
    Ok(f.sequence)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriEdgeWire {
    pub from: usize,
    pub to: usize,
    pub coeffs: [String; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriGraphFile {
    pub schema_version: u32,
    pub vertex_count: usize,
    pub source: usize,
    pub sink: usize,
    pub edges: Vec<TriEdgeWire>,
}

pub fn trigraph_to_json(g: &TriGraph) -> Result<String> {
    to_json(&TriGraphFile {
        schema_version: SCHEMA_VERSION,
        vertex_count: g.vertex_count,
        source: g.source,
        sink: g.sink,
        edges: g
            .edges
            .iter()
            .map(|e| TriEdgeWire {
                from: e.from,
                to: e.to,
                coeffs: [
                    format(&e.coeffs[0]),
                    format(&e.coeffs[1]),
                    format(&e.coeffs[2]),
                ],
            })
            .collect(),
    })
}

pub fn trigraph_from_json(text: &str) -> Result<TriGraph> {
    let f: TriGraphFile = from_json(text)?;
    check_version(f.schema_version)?;
    let mut g = TriGraph::new(f.vertex_count, f.source, f.sink)?;
    for e in &f.edges {
        g.add_edge(e.from, e.to, rationals(&e.coeffs)?)?;
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkFile {
    pub schema_version: u32,
    #[serde(rename = "B")]
    pub inputs: usize,
    pub n: usize,
    pub j_table: Vec<Vec<String>>,
    #[serde(rename = "K")]
    pub k: String,
    #[serde(rename = "L")]
    pub l: String,
    pub graph: GraphWire,
}

pub fn link_to_json(spec: &GadgetSpec, g: &ParametricGraph) -> Result<String> {
    to_json(&LinkFile {
        schema_version: SCHEMA_VERSION,
        inputs: spec.inputs,
        n: spec.n,
        j_table: spec
            .j_table
            .iter()
            .map(|row| row.iter().map(format).collect())
            .collect(),
        k: format(&spec.k),
        l: format(&spec.l),
        graph: GraphWire::from_graph(g),
    })
}

pub fn link_from_json(text: &str) -> Result<(GadgetSpec, ParametricGraph)> {
    let f: LinkFile = from_json(text)?;
    check_version(f.schema_version)?;
    let j = f
        .j_table
        .iter()
        .map(|row| row.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let spec = link_weights(f.inputs, f.n, j, parse(&f.k)?, parse(&f.l)?)?;
    Ok((spec, f.graph.to_graph()?))
}

/// A path list; envelope documents are accepted through their witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathsFile {
    pub schema_version: u32,
    #[serde(alias = "witnesses")]
    pub paths: Vec<PathWire>,
}

pub fn paths_from_json(text: &str) -> Result<Vec<Path>> {
    let f: PathsFile = from_json(text)?;
    check_version(f.schema_version)?;
    Ok(f.paths
        .into_iter()
        .map(|p| Path {
            vertices: p.vertices,
            edges: p.edges,
        })
        .collect())
}

pub fn paths_to_json(paths: &[Path]) -> Result<String> {
    to_json(&PathsFile {
        schema_version: SCHEMA_VERSION,
        paths: paths.iter().map(PathWire::from).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_phi_graph, verify_phi};
    use crate::graph::envelope_dp;
    use crate::graph::testgraphs::{random_dag, rng};
    use crate::rational::{frac, int};
    use crate::words::gen_xhat;

    #[test]
    fn graph_round_trip() {
        let mut r = rng(3);
        for _ in 0..30 {
            let mut g = random_dag(&mut r, 7, 0.4, 6);
            g.set_edge_weight(0, AffineForm::new(frac(-7, 3), frac(5, 12)));
            let text = graph_to_json(&g).unwrap();
            let back = graph_from_json(&text).unwrap();
            assert_eq!(back, g);
            assert_eq!(graph_to_json(&back).unwrap(), text);
            let canon = canonical_graph_json(&g).unwrap();
            assert_eq!(
                canonical_graph_json(&graph_from_json(&canon).unwrap()).unwrap(),
                canon
            );
        }
        assert!(text_contains("\"a\": \"-7/3\""));
    }

    fn text_contains(needle: &str) -> bool {
        let mut g = ParametricGraph::new(2, 0, 1).unwrap();
        g.add_edge(0, 1, AffineForm::new(frac(-7, 3), int(0)))
            .unwrap();
        graph_to_json(&g).unwrap().contains(needle)
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(graph_from_json("{"), Err(Error::Format(_))));
        let bad =
            r#"{"schema_version": 9, "vertex_count": 2, "source": 0, "sink": 1, "edges": []}"#;
        assert!(matches!(graph_from_json(bad), Err(Error::Format(_))));
        let bad = r#"{"schema_version": 1, "vertex_count": 2, "source": 0, "sink": 1,
            "edges": [{"from": 0, "to": 1, "a": "1/0", "b": "0"}]}"#;
        assert!(matches!(graph_from_json(bad), Err(Error::ParseRational(_))));
    }

    #[test]
    fn envelope_round_trip() {
        let mut r = rng(8);
        let g = random_dag(&mut r, 8, 0.5, 5);
        let dom = Interval::new(int(-10), int(10)).unwrap();
        for d in [None, Some(&dom)] {
            let env = envelope_dp(&g, d).unwrap();
            let text = envelope_to_json(&env).unwrap();
            assert_eq!(pwl_from_json(&text).unwrap(), env.function);
        }
    }

    #[test]
    fn phi_round_trip() {
        let inst = build_phi_graph(&PhiParams::new(3, 2, frac(1, 2), 1).unwrap()).unwrap();
        let text = phi_to_json(&inst).unwrap();
        let back = phi_from_json(&text).unwrap();
        assert_eq!(back, inst);
        assert!(verify_phi(&back).unwrap().passed());
        let mut f: PhiFile = from_json(&text).unwrap();
        f.declared_paths[0].pop();
        assert!(phi_from_wire(&f).is_err());
    }

    #[test]
    fn link_and_paths_round_trip() {
        let spec = crate::link::main_lemma_spec(2, 3, &frac(1, 3)).unwrap();
        let (_, g) = crate::link::planarize_spec(&spec).unwrap();
        let (s2, g2) = link_from_json(&link_to_json(&spec, &g).unwrap()).unwrap();
        assert_eq!((s2, g2), (spec, g.clone()));
        let env = envelope_dp(&g.with_endpoints(0, g.vertex_count() - 1).unwrap(), None);
        if let Ok(env) = env {
            let text = envelope_to_json(&env).unwrap();
            assert_eq!(paths_from_json(&text).unwrap(), env.witnesses);
        }
        let p = g.path_from_edges(&[0]).unwrap();
        assert_eq!(
            paths_from_json(&paths_to_json(std::slice::from_ref(&p)).unwrap()).unwrap(),
            vec![p]
        );
    }

    #[test]
    fn words_and_trigraph_round_trip() {
        let s = gen_xhat(3, 2).unwrap();
        assert_eq!(words_from_json(&words_to_json(&s).unwrap()).unwrap(), s);
        let bad = r#"{"schema_version": 1, "n": 2, "length": 1, "words": [[5]]}"#;
        assert!(words_from_json(bad).is_err());

        let mut g = TriGraph::new(3, 0, 2).unwrap();
        g.add_edge(0, 1, [int(1), frac(-1, 2), int(0)]).unwrap();
        g.add_edge(1, 2, [int(0), int(3), frac(7, 5)]).unwrap();
        let text = trigraph_to_json(&g).unwrap();
        assert!(text.contains("\"-1/2\""));
        assert_eq!(trigraph_from_json(&text).unwrap(), g);
    }
}
