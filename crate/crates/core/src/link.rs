//! The bipartite linking gadget and its planar segment arrangement.
//!
//! Input `b` sits at `(0, b)`, output `j` at `(1, j)`, and the gadget edge
//! `(b, b + r)` becomes the segment `y = b + r x`. Every pairwise crossing
//! of segments is a vertex; consecutive vertices along a segment form a
//! fragment carrying the fraction `Δx` of that segment's weight.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::affine::AffineForm;
use crate::error::{Error, Result};
use crate::graph::{Dag, ParametricGraph, Path};
use crate::rational::{self, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetSpec {
    pub inputs: usize,
    pub n: usize,
    /// `j_table[b][r]` is the additive term of edge `(b, b + r)`.
    pub j_table: Vec<Vec<Rational>>,
    pub k: Rational,
    pub l: Rational,
}

impl GadgetSpec {
    pub fn outputs(&self) -> usize {
        self.inputs + self.n
    }

    pub fn max_abs_j(&self) -> Rational {
        self.j_table
            .iter()
            .flatten()
            .map(|j| j.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn required_k(&self) -> Rational {
        required_k(self.n, &self.max_abs_j())
    }

    /// `J(b, b+r) + K r(r+1)/2 + L r λ`.
    pub fn weight(&self, b: usize, r: usize) -> AffineForm {
        let r_q = int(r as i64);
        let tri = int((r * (r + 1) / 2) as i64);
        AffineForm::new(&self.j_table[b][r] + &self.k * tri, &self.l * r_q)
    }
}

pub fn required_k(n: usize, max_abs_j: &Rational) -> Rational {
    int((n * n) as i64) * (int(1) + int(2) * max_abs_j)
}

pub fn link_weights(
    inputs: usize,
    n: usize,
    j_table: Vec<Vec<Rational>>,
    k: Rational,
    l: Rational,
) -> Result<GadgetSpec> {
    if inputs == 0 {
        return Err(Error::InvalidParameter(
            "gadget needs at least one input".into(),
        ));
    }
    if j_table.len() != inputs || j_table.iter().any(|row| row.len() != n + 1) {
        return Err(Error::InvalidParameter(format!(
            "J table must be {inputs} x {}",
            n + 1
        )));
    }
    let spec = GadgetSpec {
        inputs,
        n,
        j_table,
        k,
        l,
    };
    let required = spec.required_k();
    if spec.k < required {
        return Err(Error::GadgetConstantTooSmall {
            k: rational::format(&spec.k),
            required: rational::format(&required),
        });
    }
    Ok(spec)
}

/// The gadget used inside the lower-bound construction: `J = N D r b`,
/// `K = 20 N^3 B`, `L = -K / N` with `N = n^2`.
pub fn main_lemma_spec(inputs: usize, n: usize, d: &Rational) -> Result<GadgetSpec> {
    let big_n = int((n * n) as i64);
    let k = int(20) * big_n.pow(3) * int(inputs as i64);
    let l = -(&k / &big_n);
    let j_table = (0..inputs)
        .map(|b| (0..=n).map(|r| &big_n * d * int((r * b) as i64)).collect())
        .collect();
    link_weights(inputs, n, j_table, k, l)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fragment {
    pub from: usize,
    pub to: usize,
    /// Input endpoint and slope of the originating segment.
    pub b: usize,
    pub r: usize,
    pub dx: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    pub inputs: usize,
    pub n: usize,
    /// Sorted by `(x, y)`.
    pub points: Vec<(Rational, Rational)>,
    pub fragments: Vec<Fragment>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    segment_fragments: Vec<Vec<Vec<usize>>>,
}

impl Arrangement {
    /// Fragment ids along the segment from `(0, b)` with slope `r`.
    pub fn segment(&self, b: usize, r: usize) -> &[usize] {
        &self.segment_fragments[b][r]
    }

    pub fn fragment_weight(&self, f: &Fragment, spec: &GadgetSpec) -> AffineForm {
        spec.weight(f.b, f.r).scale(&f.dx)
    }

    /// The weighted planar graph; edge `i` is fragment `i`, the source is
    /// input 0 and the sink output 0.
    pub fn to_graph(&self, spec: &GadgetSpec) -> Result<ParametricGraph> {
        if spec.inputs != self.inputs || spec.n != self.n {
            return Err(Error::InvalidParameter(
                "spec does not match arrangement".into(),
            ));
        }
        let mut g = ParametricGraph::new(self.points.len(), self.left[0], self.right[0])?;
        for f in &self.fragments {
            g.add_edge(f.from, f.to, self.fragment_weight(f, spec))?;
        }
        g.embedding = Some(self.points.clone());
        Ok(g)
    }

    /// Pairs of fragments whose relative interiors meet; empty for a valid
    /// planar drawing.
    pub fn crossings(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, f) in self.fragments.iter().enumerate() {
            for (k, g) in self.fragments.iter().enumerate().skip(i + 1) {
                if fragments_cross(self, f, g) {
                    out.push((i, k));
                }
            }
        }
        out
    }
}

fn fragments_cross(arr: &Arrangement, f: &Fragment, g: &Fragment) -> bool {
    let (fx0, _) = &arr.points[f.from];
    let (fx1, _) = &arr.points[f.to];
    let (gx0, _) = &arr.points[g.from];
    let (gx1, _) = &arr.points[g.to];
    let lo = fx0.max(gx0);
    let hi = fx1.min(gx1);
    if lo >= hi {
        return false;
    }
    let yf = |x: &Rational| int(f.b as i64) + int(f.r as i64) * x;
    let yg = |x: &Rational| int(g.b as i64) + int(g.r as i64) * x;
    let d_lo = yf(lo) - yg(lo);
    let d_hi = yf(hi) - yg(hi);
    if d_lo.is_zero() && d_hi.is_zero() {
        return true;
    }
    // a sign change strictly inside the shared span means a crossing
    (d_lo.is_positive() && d_hi.is_negative()) || (d_lo.is_negative() && d_hi.is_positive())
}

/// Sorted crossing abscissae (including 0 and 1) of every segment,
/// indexed `[b][r]`.
pub fn segment_cuts(inputs: usize, n: usize) -> Vec<Vec<Vec<Rational>>> {
    let segs: Vec<(usize, usize)> = (0..inputs)
        .flat_map(|b| (0..=n).map(move |r| (b, r)))
        .collect();
    let mut cuts: Vec<BTreeSet<(i64, i64)>> = vec![BTreeSet::new(); segs.len()];
    for c in cuts.iter_mut() {
        c.insert((0, 1));
        c.insert((1, 1));
    }
    for (i, &(b1, r1)) in segs.iter().enumerate() {
        for (k, &(b2, r2)) in segs.iter().enumerate().skip(i + 1) {
            if r1 == r2 {
                continue;
            }
            let (mut num, mut den) = (b2 as i64 - b1 as i64, r1 as i64 - r2 as i64);
            if den < 0 {
                num = -num;
                den = -den;
            }
            if num <= 0 || num >= den {
                continue;
            }
            let g = num.gcd(&den);
            let x = (num / g, den / g);
            cuts[i].insert(x);
            cuts[k].insert(x);
        }
    }
    let mut out = vec![vec![Vec::new(); n + 1]; inputs];
    for (s, &(b, r)) in segs.iter().enumerate() {
        // the tuple set is ordered lexicographically, not by value
        let mut xs: Vec<Rational> = cuts[s]
            .iter()
            .map(|&(p, q)| Rational::new(p.into(), q.into()))
            .collect();
        xs.sort();
        out[b][r] = xs;
    }
    out
}

pub fn planarize(inputs: usize, n: usize) -> Result<Arrangement> {
    if inputs == 0 {
        return Err(Error::InvalidParameter(
            "gadget needs at least one input".into(),
        ));
    }
    let cuts = segment_cuts(inputs, n);
    let mut point_ids: BTreeMap<(Rational, Rational), usize> = BTreeMap::new();
    for (b, row) in cuts.iter().enumerate() {
        for (r, xs) in row.iter().enumerate() {
            for x in xs {
                let y = int(b as i64) + int(r as i64) * x;
                point_ids.insert((x.clone(), y), 0);
            }
        }
    }
    for (id, v) in point_ids.values_mut().enumerate() {
        *v = id;
    }
    let points: Vec<(Rational, Rational)> = point_ids.keys().cloned().collect();

    let mut fragments = Vec::new();
    let mut segment_fragments = vec![vec![Vec::new(); n + 1]; inputs];
    for (b, r) in (0..inputs).flat_map(|b| (0..=n).map(move |r| (b, r))) {
        for w in cuts[b][r].windows(2) {
            let at = |x: &Rational| {
                let y = int(b as i64) + int(r as i64) * x;
                point_ids[&(x.clone(), y)]
            };
            segment_fragments[b][r].push(fragments.len());
            fragments.push(Fragment {
                from: at(&w[0]),
                to: at(&w[1]),
                b,
                r,
                dx: &w[1] - &w[0],
            });
        }
    }
    let left = (0..inputs)
        .map(|b| point_ids[&(int(0), int(b as i64))])
        .collect();
    let right = (0..inputs + n)
        .map(|j| point_ids[&(int(1), int(j as i64))])
        .collect();
    Ok(Arrangement {
        inputs,
        n,
        points,
        fragments,
        left,
        right,
        segment_fragments,
    })
}

/// Planarizes `spec` and returns the arrangement with its weighted graph.
pub fn planarize_spec(spec: &GadgetSpec) -> Result<(Arrangement, ParametricGraph)> {
    let arr = planarize(spec.inputs, spec.n)?;
    let g = arr.to_graph(spec)?;
    Ok((arr, g))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaithfulReport {
    /// Straight segments are the unique shortest paths.
    pub unique_straight: bool,
    /// Straight costs equal the gadget weights and every deviation costs at least one more.
    pub exact_cost_and_margin: bool,
    /// Pairs outside the reachable band have no path.
    pub unreachable_outside: bool,
    pub fact_denominators: bool,
    pub planar: bool,
    /// Smallest `C(Q) - C(P)` over all deviating paths found.
    pub min_gap: Option<Rational>,
    /// `K / n^2 - 2 max|J|`.
    pub claim_bound: Rational,
    pub claim_holds: bool,
    pub exhaustive: bool,
    pub paths_checked: usize,
    pub failures: Vec<String>,
}

impl FaithfulReport {
    pub fn passed(&self) -> bool {
        self.unique_straight
            && self.exact_cost_and_margin
            && self.unreachable_outside
            && self.fact_denominators
            && self.planar
            && self.claim_holds
    }
}

/// Checks the three faithfulness conditions for every `(b, j)`.
///
/// All paths from `(0, b)` to `(1, j)` have the same λ-slope `L (j - b)`,
/// so their differences are constants and the margin holds for every λ at
/// once. Paths are enumerated exhaustively when there are at most
/// `enumeration_limit` per pair; otherwise the second-best certificate is
/// used. `sample_lambdas` additionally exercise the fixed-λ solver.
pub fn verify_faithful(
    arr: &Arrangement,
    g: &ParametricGraph,
    spec: &GadgetSpec,
    sample_lambdas: &[Rational],
    enumeration_limit: usize,
) -> Result<FaithfulReport> {
    let dag = Dag::new(g)?;
    let n2 = int((arr.n * arr.n) as i64);
    let claim_bound = &spec.k / &n2 - int(2) * spec.max_abs_j();
    let mut rep = FaithfulReport {
        unique_straight: true,
        exact_cost_and_margin: true,
        unreachable_outside: true,
        fact_denominators: true,
        planar: true,
        min_gap: None,
        claim_bound,
        claim_holds: true,
        exhaustive: true,
        paths_checked: 0,
        failures: Vec::new(),
    };

    let max_den = n2.numer().clone().max(1.into());
    for (i, f) in arr.fragments.iter().enumerate() {
        if !f.dx.is_positive() || f.dx.denom() > &max_den {
            rep.fact_denominators = false;
            rep.failures
                .push(format!("fragment {i} spans {}", rational::format(&f.dx)));
        }
    }
    if arr.fragments.len() <= 4000 {
        let crossings = arr.crossings();
        if let Some(&(a, b)) = crossings.first() {
            rep.planar = false;
            rep.failures.push(format!("fragments {a} and {b} cross"));
        }
    }

    for b in 0..arr.inputs {
        let reach = dag.reachable_from(arr.left[b]);
        for j in 0..arr.inputs + arr.n {
            let (src, dst) = (arr.left[b], arr.right[j]);
            if j < b || j > b + arr.n {
                if reach[dst] {
                    rep.unreachable_outside = false;
                    rep.failures
                        .push(format!("({b},{j}) reachable outside band"));
                }
                continue;
            }
            let r = j - b;
            let straight = g.path_from_edges(arr.segment(b, r))?;
            let p_cost = g.path_cost(&straight);
            if p_cost != spec.weight(b, r) {
                rep.exact_cost_and_margin = false;
                rep.failures
                    .push(format!("({b},{j}) straight cost differs from w"));
            }
            match dag.paths_between(src, dst, enumeration_limit) {
                Ok(paths) => {
                    rep.paths_checked += paths.len();
                    for q in paths.iter().filter(|q| **q != straight) {
                        let q_cost = g.path_cost(q);
                        let gap = &q_cost - &p_cost;
                        if !gap.slope.is_zero() {
                            rep.exact_cost_and_margin = false;
                            rep.failures
                                .push(format!("({b},{j}) deviation with nonzero slope gap"));
                            continue;
                        }
                        check_gap(&mut rep, b, j, &gap.constant);
                        note_gap(&mut rep, gap.constant);
                    }
                }
                Err(Error::LimitExceeded(_)) => {
                    rep.exhaustive = false;
                    let zero = int(0);
                    if let Some(sb) = dag.second_best(src, dst, &zero, &straight)? {
                        let gap = sb - p_cost.eval(&zero);
                        check_gap(&mut rep, b, j, &gap);
                        note_gap(&mut rep, gap);
                    }
                }
                Err(e) => return Err(e),
            }
            for x in sample_lambdas {
                let (p, _) = dag.shortest(src, dst, x)?;
                if p != straight {
                    rep.unique_straight = false;
                    rep.failures.push(format!(
                        "({b},{j}) at λ={} picks another path",
                        rational::format(x)
                    ));
                }
                if let Some(sb) = dag.second_best(src, dst, x, &straight)? {
                    if sb - p_cost.eval(x) < int(1) {
                        rep.unique_straight = false;
                    }
                }
            }
        }
    }
    if let Some(m) = &rep.min_gap {
        if m < &rep.claim_bound {
            rep.claim_holds = false;
            rep.failures.push(format!(
                "smallest gap {} below claimed {}",
                rational::format(m),
                rational::format(&rep.claim_bound)
            ));
        }
    }
    Ok(rep)
}

fn note_gap(rep: &mut FaithfulReport, gap: Rational) {
    if rep.min_gap.as_ref().is_none_or(|m| &gap < m) {
        rep.min_gap = Some(gap);
    }
}

fn check_gap(rep: &mut FaithfulReport, b: usize, j: usize, gap: &Rational) {
    if gap < &int(1) {
        rep.exact_cost_and_margin = false;
        rep.unique_straight = rep.unique_straight && gap.is_positive();
        rep.failures
            .push(format!("({b},{j}) deviation gap {}", rational::format(gap)));
    }
}

/// Straight-line path of the gadget edge `(b, b + r)` inside `g`.
pub fn straight_path(arr: &Arrangement, g: &ParametricGraph, b: usize, r: usize) -> Result<Path> {
    g.path_from_edges(arr.segment(b, r))
}
