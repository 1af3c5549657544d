//! Shared inputs for the benchmarks.

use paramenv_core::construction::{build_phi_graph, PhiInstance, PhiParams};
use paramenv_core::grid::{assign_random_weights, gen_grid};
use paramenv_core::polytope::{sample_directions, TriGraph};
use paramenv_core::rational::int;
use paramenv_core::ParametricGraph;

pub fn random_grid(p: usize, q: usize, seed: u64) -> ParametricGraph {
    assign_random_weights(&gen_grid(p, q).expect("valid grid"), seed, 12).expect("valid bits")
}

pub fn phi(n: usize, m: usize) -> PhiInstance {
    build_phi_graph(&PhiParams::new(n, 1, int(0), m).expect("valid params")).expect("builds")
}

/// Layered three-parameter graph: `layers` stages of `width` parallel edges.
pub fn layered_trigraph(layers: usize, width: usize, seed: u64) -> TriGraph {
    let mut g = TriGraph::new(layers + 1, 0, layers).expect("valid endpoints");
    let mut coeffs = sample_directions(seed, layers * width, 50).into_iter();
    for v in 0..layers {
        for _ in 0..width {
            g.add_edge(v, v + 1, coeffs.next().expect("enough samples"))
                .expect("in range");
        }
    }
    g
}
