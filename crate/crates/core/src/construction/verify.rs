use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::{denominator_bound, numerator_bound, vertex_bound, PhiInstance};
use crate::affine::AffineForm;
use crate::error::{Error, Result};
use crate::graph::{Dag, Envelope, Path};
use crate::pwl::Interval;
use crate::rational::{self, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub property: String,
    pub passed: bool,
    pub witnesses: Vec<String>,
}

impl PropertyCheck {
    fn new(property: &str, witnesses: Vec<String>) -> Self {
        Self {
            property: property.into(),
            passed: witnesses.is_empty(),
            witnesses,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiReport {
    pub n: usize,
    pub inputs: usize,
    pub d: String,
    pub m: usize,
    pub vertex_count: usize,
    pub vertex_bound: String,
    pub edge_count: usize,
    /// Smallest second-best gap over all `(b, j)` and interval endpoints.
    pub min_margin: Option<String>,
    pub properties: Vec<PropertyCheck>,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyCheck> {
        self.properties.iter().find(|p| p.property == name)
    }
}

const MAX_WITNESSES: usize = 16;

fn capped(mut w: Vec<String>) -> Vec<String> {
    w.truncate(MAX_WITNESSES);
    w
}

pub fn verify_phi(inst: &PhiInstance) -> Result<PhiReport> {
    let p = &inst.params;
    let g = &inst.graph;
    let dag = Dag::new(g)?;

    let bound = vertex_bound(p.inputs, p.m, p.n);
    let mut w1 = Vec::new();
    if num_bigint::BigInt::from(inst.core_vertex_count) > bound {
        w1.push(format!(
            "{} vertices exceed {}",
            inst.core_vertex_count, bound
        ));
    }

    let num_cap = numerator_bound(p.inputs, p.m, p.n);
    let den_cap = denominator_bound(p.m, p.n);
    let mut w2 = Vec::new();
    if inst.coefficients.len() != g.edges().len() {
        w2.push("coefficient table does not cover every edge".into());
    }
    for (e, (c, edge)) in inst.coefficients.iter().zip(g.edges()).enumerate() {
        if c.eval(&p.d) != edge.weight {
            w2.push(format!("edge {e}: weight differs from its decomposition"));
        }
        if c.max_numerator() > num_cap || c.max_denominator() > den_cap {
            w2.push(format!("edge {e}: coefficient out of bounds"));
        }
    }

    let pairs: Vec<(usize, usize)> = (0..p.inputs)
        .flat_map(|b| (0..inst.intervals.count()).map(move |j| (b, j)))
        .collect();
    let results: Vec<Result<(Vec<String>, Option<Rational>)>> = pairs
        .par_iter()
        .map(|&(b, j)| check_optimality(inst, &dag, b, j))
        .collect();
    let mut w3 = Vec::new();
    let mut min_margin: Option<Rational> = None;
    for r in results {
        let (w, m) = r?;
        w3.extend(w);
        if let Some(m) = m {
            if min_margin.as_ref().is_none_or(|cur| &m < cur) {
                min_margin = Some(m);
            }
        }
    }

    let mut w4 = Vec::new();
    for j in 0..inst.intervals.count() {
        let base = g.path_cost(&inst.declared_paths[0][j]);
        let alpha = Rational::from_integer(inst.intervals.alpha(j)?.clone());
        for b in 1..p.inputs {
            let shift = AffineForm::constant(int(b as i64) * &p.d * &alpha);
            if g.path_cost(&inst.declared_paths[b][j]) != &base + &shift {
                w4.push(format!("b={b} j={j}"));
            }
        }
    }

    let mut w5 = Vec::new();
    for j in 0..inst.intervals.count() {
        let mut seen: HashSet<usize> = HashSet::new();
        for b in 0..p.inputs {
            if inst.declared_paths[b][j]
                .vertices
                .iter()
                .any(|v| !seen.insert(*v))
            {
                w5.push(format!("j={j} b={b}"));
            }
        }
    }

    let mut w6 = Vec::new();
    for b in 0..p.inputs {
        let distinct: HashSet<&Path> = inst.declared_paths[b].iter().collect();
        if distinct.len() != inst.declared_paths[b].len() {
            w6.push(format!("b={b}"));
        }
    }

    Ok(PhiReport {
        n: p.n,
        inputs: p.inputs,
        d: rational::format(&p.d),
        m: p.m,
        vertex_count: inst.core_vertex_count,
        vertex_bound: bound.to_string(),
        edge_count: g.edges().len(),
        min_margin: min_margin.as_ref().map(rational::format),
        properties: vec![
            PropertyCheck::new("i", capped(w1)),
            PropertyCheck::new("ii", capped(w2)),
            PropertyCheck::new("iii", capped(w3)),
            PropertyCheck::new("iv", capped(w4)),
            PropertyCheck::new("v", capped(w5)),
            PropertyCheck::new("vi", capped(w6)),
        ],
    })
}

/// The declared path must be optimal from input `b` at both endpoints of
/// `I(j, m)` with every other path at least one more expensive. The gap to
/// the runner-up is a minimum of affine functions, hence concave, so the
/// two endpoints certify the whole interval.
fn check_optimality(
    inst: &PhiInstance,
    dag: &Dag,
    b: usize,
    j: usize,
) -> Result<(Vec<String>, Option<Rational>)> {
    let g = &inst.graph;
    let src = inst.first_layer[b];
    let declared = inst.declared_to_sink(b, j);
    let cost = g.path_cost(&declared);
    let (lo, hi) = inst.intervals.interval(j)?;
    let mut witnesses = Vec::new();
    let mut margin: Option<Rational> = None;
    for x in [lo, hi] {
        let w = dag.weights_at(&x);
        let (_, best) = dag.shortest_with(src, inst.sink(), &w)?;
        let c = cost.eval(&x);
        if best != c {
            witnesses.push(format!(
                "b={b} j={j} lambda={}: declared cost {} but optimum {}",
                rational::format(&x),
                rational::format(&c),
                rational::format(&best)
            ));
            continue;
        }
        if let Some(second) = dag.second_best_with(src, inst.sink(), &w, &declared)? {
            let gap = second - &c;
            if gap < int(1) {
                witnesses.push(format!(
                    "b={b} j={j} lambda={}: runner-up gap {}",
                    rational::format(&x),
                    rational::format(&gap)
                ));
            }
            if margin.as_ref().is_none_or(|m| &gap < m) {
                margin = Some(gap);
            }
        }
    }
    Ok((witnesses, margin))
}

fn final_domain(inst: &PhiInstance) -> Result<Interval> {
    let top = num_bigint::BigInt::from(inst.params.big_n()).pow((inst.params.m + 1) as u32);
    Interval::new(int(0), Rational::from_integer(top))
}

/// Envelope of the `s`-`t` cost over `[0, N^{m+1}]`.
pub fn final_envelope(inst: &PhiInstance) -> Result<Envelope> {
    if inst.params.inputs != 1 {
        return Err(Error::InvalidParameter(
            "the final envelope needs B = 1".into(),
        ));
    }
    let domain = final_domain(inst)?;
    Dag::new(&inst.graph)?.envelope(inst.graph.source, inst.sink(), Some(&domain))
}

pub fn count_final_pieces(inst: &PhiInstance) -> Result<usize> {
    if inst.params.inputs != 1 {
        return Err(Error::InvalidParameter("piece counting needs B = 1".into()));
    }
    let domain = final_domain(inst)?;
    let f =
        Dag::new(&inst.graph)?.envelope_function(inst.graph.source, inst.sink(), Some(&domain))?;
    Ok(f.piece_count())
}

/// Fixed-λ shortest `s`-`t` paths at the midpoints of every `I(j, m)`.
pub fn midpoint_witnesses(inst: &PhiInstance) -> Result<Vec<Path>> {
    let dag = Dag::new(&inst.graph)?;
    (0..inst.intervals.count())
        .into_par_iter()
        .map(|j| {
            let x = inst.intervals.midpoint(j)?;
            Ok(dag.shortest(inst.graph.source, inst.sink(), &x)?.0)
        })
        .collect()
}

/// Adds `delta` to the constant term of edge `e`, keeping the symbolic
/// table consistent.
pub fn perturb_edge(inst: &PhiInstance, e: usize, delta: &Rational) -> PhiInstance {
    let mut out = inst.clone();
    out.coefficients[e].a1 += delta;
    let w = out.coefficients[e].eval(&out.params.d);
    out.graph.set_edge_weight(e, w);
    out
}

#[cfg(test)]
mod tests {
    use super::super::{build_phi_graph, PhiParams};
    use super::*;
    use crate::graph::{enumerate_paths, envelope_bruteforce};
    use crate::rational::frac;

    fn build(n: usize, inputs: usize, d: Rational, m: usize) -> PhiInstance {
        build_phi_graph(&PhiParams::new(n, inputs, d, m).unwrap()).unwrap()
    }

    #[test]
    fn base_case_passes() {
        for inputs in [1, 3] {
            let rep = verify_phi(&build(4, inputs, int(0), 0)).unwrap();
            assert!(rep.passed(), "{rep:?}");
            assert_eq!(rep.properties.len(), 6);
        }
    }

    #[test]
    fn level_one_passes() {
        let inst = build(4, 1, int(0), 1);
        let rep = verify_phi(&inst).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.vertex_count <= 5000);
        assert!(count_final_pieces(&inst).unwrap() >= 4);
    }

    #[test]
    fn several_inputs_and_d_values() {
        for d in [int(-1), frac(-1, 3), int(0), frac(1, 2), int(1)] {
            let rep = verify_phi(&build(4, 5, d, 1)).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
        let rep = verify_phi(&build(3, 4, frac(2, 5), 1)).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn level_two_small() {
        let inst = build(3, 1, int(0), 2);
        let rep = verify_phi(&inst).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let wit = midpoint_witnesses(&inst).unwrap();
        assert_eq!(wit.len(), 9);
        let distinct: HashSet<_> = wit.iter().collect();
        assert_eq!(distinct.len(), 9);
        for (j, w) in wit.iter().enumerate() {
            assert_eq!(w, &inst.declared_to_sink(0, j));
        }
    }

    #[test]
    fn envelope_matches_bruteforce_at_level_one() {
        let inst = build(4, 1, int(0), 1);
        let domain = final_domain(&inst).unwrap();
        let dp = final_envelope(&inst).unwrap();
        let paths = enumerate_paths(&inst.graph, 10_000).unwrap();
        let bf = envelope_bruteforce(&inst.graph, 10_000).unwrap();
        let bf = bf
            .function
            .restrict(domain.lo.clone(), domain.hi.clone())
            .unwrap();
        assert_eq!(dp.function, bf);
        assert!(paths.len() >= dp.piece_count());
        let declared: HashSet<_> = (0..4).map(|j| inst.declared_to_sink(0, j)).collect();
        for j in 0..4 {
            let x = inst.intervals.midpoint(j).unwrap();
            let k = dp.function.segment_index(&x);
            assert!(declared.contains(&dp.witnesses[k]));
        }
    }

    #[test]
    fn optimality_against_enumeration() {
        // independent check of (iii): every path from input b, compared directly
        let inst = build(3, 2, frac(-1, 2), 1);
        let dag = Dag::new(&inst.graph).unwrap();
        for b in 0..2 {
            let all = dag
                .paths_between(inst.first_layer[b], inst.sink(), 100_000)
                .unwrap();
            for j in 0..3 {
                let p = inst.declared_to_sink(b, j);
                let (lo, hi) = inst.intervals.interval(j).unwrap();
                for x in [lo.clone(), (&lo + &hi) / int(2), hi] {
                    let c = inst.graph.path_cost(&p).eval(&x);
                    for q in &all {
                        if q != &p {
                            assert!(inst.graph.path_cost(q).eval(&x) - &c >= int(1));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn large_perturbation_breaks_optimality() {
        let inst = build(4, 1, int(0), 1);
        let rep = verify_phi(&inst).unwrap();
        let margin = rational::parse(rep.min_margin.as_ref().unwrap()).unwrap();
        let declared = &inst.declared_paths[0][0];
        let e = *declared
            .edges
            .iter()
            .find(|e| inst.link_edges.contains(e))
            .unwrap();
        let bad = perturb_edge(&inst, e, &(margin + int(2)));
        let rep = verify_phi(&bad).unwrap();
        let iii = rep.property("iii").unwrap();
        assert!(!iii.passed);
        assert!(iii.witnesses[0].contains("b=0 j=0"));
    }
}
