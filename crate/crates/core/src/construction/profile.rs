//! Distinct edge coefficients of `G(B, ·, m)` without materializing the
//! graph. The recursion mirrors the builder: left (and mirrored) edges are
//! pushed through the left embedding, link fragments are generated from the
//! segment cuts, and right edges through the right embedding.

use std::collections::{BTreeSet, HashMap};

use super::{k_l, k_r, SymWeight};
use crate::link::segment_cuts;
use crate::rational::{bit_length, int};

pub type ProfileCache = HashMap<(usize, usize), BTreeSet<SymWeight>>;

pub fn coefficient_profile(
    n: usize,
    inputs: usize,
    m: usize,
    cache: &mut ProfileCache,
) -> BTreeSet<SymWeight> {
    if let Some(s) = cache.get(&(inputs, m)) {
        return s.clone();
    }
    let out = if m == 0 {
        BTreeSet::from([SymWeight::zero()])
    } else {
        let big_n = int((n * n) as i64);
        let kl = k_l(inputs, m, n);
        let kr = k_r(inputs, n);
        let mut out = BTreeSet::new();
        for w in coefficient_profile(n, inputs, m - 1, cache) {
            out.insert(w.into_left(&kl, &kr, &big_n));
        }
        for w in coefficient_profile(n, inputs + n, m - 1, cache) {
            out.insert(w.into_right(&kr, &big_n));
        }
        for (b, row) in segment_cuts(inputs, n).iter().enumerate() {
            for (r, xs) in row.iter().enumerate() {
                for w in xs.windows(2) {
                    out.insert(SymWeight::link_fragment(
                        b,
                        r,
                        &(&w[1] - &w[0]),
                        &kr,
                        &big_n,
                    ));
                }
            }
        }
        out
    };
    cache.insert((inputs, m), out.clone());
    out
}

/// Largest bit length over all four components of all coefficients.
pub fn max_coefficient_bits(profile: &BTreeSet<SymWeight>) -> u64 {
    profile
        .iter()
        .flat_map(|w| w.components().map(bit_length))
        .max()
        .unwrap_or(0)
}
