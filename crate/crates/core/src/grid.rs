//! Directed `p x q` grids with rightward and upward edges, and random-weight
//! piece-count experiments on them.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::AffineForm;
use crate::error::{Error, Result};
use crate::graph::{check_alternation_free_paths, envelope_dp, ParametricGraph, Path};
use crate::rational::int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub p: usize,
    pub q: usize,
}

impl GridSpec {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidParameter(
                "grid needs p >= 1 and q >= 1".into(),
            ));
        }
        Ok(Self { p, q })
    }

    /// Row `i` and column `j` are 1-based.
    pub fn vertex(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.q + (j - 1)
    }

    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v / self.q + 1, v % self.q + 1)
    }
}

pub fn gen_grid(p: usize, q: usize) -> Result<ParametricGraph> {
    let spec = GridSpec::new(p, q)?;
    let mut g = ParametricGraph::new(p * q, 0, p * q - 1)?;
    for i in 1..=p {
        for j in 1..=q {
            let v = spec.vertex(i, j);
            if j < q {
                g.add_edge(v, spec.vertex(i, j + 1), AffineForm::zero())?;
            }
            if i < p {
                g.add_edge(v, spec.vertex(i + 1, j), AffineForm::zero())?;
            }
        }
    }
    g.layers = Some((0..p * q).map(|v| v / q + v % q).collect());
    Ok(g)
}

/// Integer `a + b λ` with `a, b` uniform in `[-2^bits, 2^bits]`.
pub fn assign_random_weights(g: &ParametricGraph, seed: u64, bits: u32) -> Result<ParametricGraph> {
    if bits > 62 {
        return Err(Error::InvalidParameter(
            "bit length must be at most 62".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = 1i64 << bits;
    Ok(g.map_weights(|_| {
        let a = rng.random_range(-bound..=bound);
        let b = rng.random_range(-bound..=bound);
        AffineForm::new(int(a), int(b))
    }))
}

/// Largest number of times the incoming (resp. outgoing) edge at a middle-row
/// vertex changes along the witnesses through that vertex.
pub fn middle_row_changes(spec: &GridSpec, witnesses: &[Path]) -> (usize, usize) {
    if spec.p < 3 {
        return (0, 0);
    }
    let mut max_in = 0;
    let mut max_out = 0;
    for j in 1..=spec.q {
        let v = spec.vertex(2, j);
        let mut ins: Vec<Option<usize>> = Vec::new();
        let mut outs: Vec<Option<usize>> = Vec::new();
        for w in witnesses {
            if let Some(pos) = w.vertices.iter().position(|&x| x == v) {
                ins.push(pos.checked_sub(1).map(|k| w.edges[k]));
                outs.push(w.edges.get(pos).copied());
            }
        }
        let changes = |s: &[Option<usize>]| s.windows(2).filter(|x| x[0] != x[1]).count();
        max_in = max_in.max(changes(&ins));
        max_out = max_out.max(changes(&outs));
    }
    (max_in, max_out)
}

/// Known piece bound: `1` for one row, `q` for two, `5q` for three.
pub fn piece_bound(spec: &GridSpec) -> Option<usize> {
    match spec.p {
        1 => Some(1),
        2 => Some(spec.q),
        3 => Some(5 * spec.q),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridTrial {
    pub seed: u64,
    pub pieces: usize,
    pub alternation_free: bool,
    pub in_changes: usize,
    pub out_changes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridReport {
    pub p: usize,
    pub q: usize,
    pub trials: usize,
    pub bits: u32,
    pub seed: u64,
    pub bound: Option<usize>,
    pub max_pieces: usize,
    pub histogram: BTreeMap<usize, usize>,
    /// Trials whose piece count exceeds `bound`.
    pub bound_violations: Vec<u64>,
    pub alternation_violations: Vec<u64>,
    /// Trials where a middle-row vertex changes an edge more than twice.
    pub change_violations: Vec<u64>,
    pub max_in_changes: usize,
    pub max_out_changes: usize,
}

impl GridReport {
    pub fn passed(&self) -> bool {
        self.bound_violations.is_empty()
            && self.alternation_violations.is_empty()
            && self.change_violations.is_empty()
    }
}

pub fn trial_seeds(seed: u64, trials: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| rng.random()).collect()
}

pub fn grid_trial(spec: &GridSpec, seed: u64, bits: u32) -> Result<GridTrial> {
    let g = assign_random_weights(&gen_grid(spec.p, spec.q)?, seed, bits)?;
    let env = envelope_dp(&g, None)?;
    let (in_changes, out_changes) = middle_row_changes(spec, &env.witnesses);
    Ok(GridTrial {
        seed,
        pieces: env.piece_count(),
        alternation_free: check_alternation_free_paths(&env.witnesses).is_none(),
        in_changes,
        out_changes,
    })
}

pub fn grid_piece_experiment(
    p: usize,
    q: usize,
    trials: usize,
    bits: u32,
    seed: u64,
) -> Result<GridReport> {
    let spec = GridSpec::new(p, q)?;
    let results: Vec<GridTrial> = trial_seeds(seed, trials)
        .into_par_iter()
        .map(|s| grid_trial(&spec, s, bits))
        .collect::<Result<_>>()?;
    let bound = piece_bound(&spec);
    let mut report = GridReport {
        p,
        q,
        trials,
        bits,
        seed,
        bound,
        max_pieces: 0,
        histogram: BTreeMap::new(),
        bound_violations: Vec::new(),
        alternation_violations: Vec::new(),
        change_violations: Vec::new(),
        max_in_changes: 0,
        max_out_changes: 0,
    };
    for t in &results {
        report.max_pieces = report.max_pieces.max(t.pieces);
        *report.histogram.entry(t.pieces).or_default() += 1;
        if bound.is_some_and(|b| t.pieces > b) {
            report.bound_violations.push(t.seed);
        }
        if !t.alternation_free {
            report.alternation_violations.push(t.seed);
        }
        if t.in_changes > 2 || t.out_changes > 2 {
            report.change_violations.push(t.seed);
        }
        report.max_in_changes = report.max_in_changes.max(t.in_changes);
        report.max_out_changes = report.max_out_changes.max(t.out_changes);
    }
    Ok(report)
}
