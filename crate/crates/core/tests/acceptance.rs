//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs as a plain binary (`harness = false`).

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use paramenv_core::construction::{
    build_phi_graph, coefficient_profile, denominator_bound, final_envelope, max_coefficient_bits,
    midpoint_witnesses, numerator_bound, verify_phi, vertex_bound, PhiParams, ProfileCache,
};
use paramenv_core::graph::check_alternation_free_paths;
use paramenv_core::graph::{
    envelope_bruteforce, envelope_dp, fixed_lambda_shortest, second_best_at,
};
use paramenv_core::grid::grid_piece_experiment;
use paramenv_core::io::{phi_from_json, phi_to_json};
use paramenv_core::link::{link_weights, planarize_spec, required_k, verify_faithful};
use paramenv_core::matching::shortest_by_matching;
use paramenv_core::polytope::{
    add, cover_check, decompose_vertex, hull3_vertices, minkowski_vertices, sample_directions,
    Point3, TriGraph,
};
use paramenv_core::rational::{frac, int};
use paramenv_core::words::{gen_x, gen_xhat, sequence_to_paths, x_word, WordSequence};
use paramenv_core::{AffineForm, ParametricGraph, Result};

type Outcome = Result<std::result::Result<String, String>>;
type Criterion = fn() -> Outcome;

fn ok_if(cond: bool, detail: String) -> std::result::Result<String, String> {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_dag(rng: &mut ChaCha8Rng, n: usize, bits: u32, nonneg: bool) -> ParametricGraph {
    let mut g = ParametricGraph::new(n, 0, n - 1).unwrap();
    let hi = 1i64 << bits;
    let lo = if nonneg { 0 } else { -hi };
    let w = |rng: &mut ChaCha8Rng| {
        AffineForm::new(
            int(rng.random_range(lo..=hi)),
            int(rng.random_range(lo..=hi)),
        )
    };
    let density = rng.random_range(0.2..0.7);
    for v in 0..n - 1 {
        let x = w(rng);
        g.add_edge(v, v + 1, x).unwrap();
    }
    for u in 0..n {
        for v in u + 2..n {
            if rng.random_bool(density) {
                let x = w(rng);
                g.add_edge(u, v, x).unwrap();
            }
        }
    }
    g
}

fn c1_main_lemma_m1() -> Outcome {
    let inst = build_phi_graph(&PhiParams::new(4, 1, frac(0, 1), 1)?)?;
    let inst = phi_from_json(&phi_to_json(&inst)?)?;
    let rep = verify_phi(&inst)?;
    let failed: Vec<&str> = rep
        .properties
        .iter()
        .filter(|p| !p.passed)
        .map(|p| p.property.as_str())
        .collect();
    let env = final_envelope(&inst)?;
    let f = &env.function;
    let dom = f.domain().expect("bounded");
    let mut per_interval = Vec::new();
    for j in 0..inst.intervals.count() {
        let mid = inst.intervals.midpoint(j)?;
        per_interval.push(env.witnesses[f.segment_index(&mid)].clone());
    }
    let distinct: HashSet<_> = per_interval.iter().collect();
    let declared = (0..4).all(|j| per_interval[j] == inst.declared_to_sink(0, j));
    Ok(ok_if(
        failed.is_empty() && dom.lo == int(0) && dom.hi == int(256) && f.piece_count() >= 4 && distinct.len() == 4 && declared,
        format!(
            "properties failing {:?}; {} pieces on [0, 256]; {} distinct interval witnesses; declared {}",
            failed,
            f.piece_count(),
            distinct.len(),
            declared
        ),
    ))
}

fn c2_main_lemma_m2() -> Outcome {
    let inst = build_phi_graph(&PhiParams::new(4, 1, int(0), 2)?)?;
    let wit = midpoint_witnesses(&inst)?;
    let distinct: HashSet<_> = wit.iter().collect();
    let mut min_gap: Option<paramenv_core::Rational> = None;
    let mut bad = Vec::new();
    for (j, p) in wit.iter().enumerate() {
        let (lo, hi) = inst.intervals.interval(j)?;
        for x in [lo, hi] {
            let (q, _) = fixed_lambda_shortest(&inst.graph, &x)?;
            let gap = second_best_at(&inst.graph, &x, p)?;
            match gap {
                Some(sb) => {
                    let g = sb - inst.graph.path_cost(p).eval(&x);
                    if q != *p || g < int(1) {
                        bad.push(j);
                    }
                    if min_gap.as_ref().is_none_or(|m| &g < m) {
                        min_gap = Some(g);
                    }
                }
                None => bad.push(j),
            }
        }
    }
    let bound = vertex_bound(1, 2, 4);
    let small = num_bigint::BigInt::from(inst.core_vertex_count) <= bound;
    Ok(ok_if(
        wit.len() == 16 && distinct.len() == 16 && bad.is_empty() && small,
        format!(
            "{} midpoint paths, {} distinct; failing intervals {:?}; min endpoint gap {}; {} vertices (bound {})",
            wit.len(),
            distinct.len(),
            bad,
            min_gap.map_or("-".into(), |g| g.to_string()),
            inst.core_vertex_count,
            bound
        ),
    ))
}

fn c3_coefficients() -> Outcome {
    let mut failures = Vec::new();
    for n in [4, 5] {
        for m in [1, 2] {
            for (inputs, d) in [(1, int(0)), (2, frac(1, 2))] {
                let inst = build_phi_graph(&PhiParams::new(n, inputs, d, m)?)?;
                let num = numerator_bound(inputs, m, n);
                let den = denominator_bound(m, n);
                for c in &inst.coefficients {
                    if c.max_numerator() > num || c.max_denominator() > den {
                        failures.push(format!("n={n} m={m} B={inputs}"));
                        break;
                    }
                }
            }
        }
    }
    let mut worst = Vec::new();
    for n in 4..=16usize {
        let m = n.ilog2() as usize;
        let bits = max_coefficient_bits(&coefficient_profile(n, 1, m, &mut ProfileCache::new()));
        let cap = 35.0 * (n as f64).log2().powi(3);
        if bits as f64 > cap {
            failures.push(format!("n={n} bits {bits} > {cap:.0}"));
        }
        worst.push(format!("n={n}:{bits}/{cap:.0}"));
    }
    Ok(ok_if(
        failures.is_empty(),
        format!("failures {:?}; bit lengths {}", failures, worst.join(" ")),
    ))
}

fn c4_gadget() -> Outcome {
    let (inputs, n) = (4, 3);
    let k = required_k(n, &int(0));
    let spec = link_weights(
        inputs,
        n,
        vec![vec![int(0); n + 1]; inputs],
        k.clone(),
        int(1),
    )?;
    let (arr, g) = planarize_spec(&spec)?;
    let rep = verify_faithful(
        &arr,
        &g,
        &spec,
        &[int(-2), int(0), frac(1, 3), int(5)],
        1_000_000,
    )?;
    let max_den = arr
        .fragments
        .iter()
        .map(|f| f.dx.denom().clone())
        .max()
        .unwrap();
    let dens_ok = max_den <= 9.into();
    Ok(ok_if(
        rep.passed() && rep.exhaustive && dens_ok,
        format!(
            "K={k}; {} paths enumerated; min deviation gap {}; max fragment denominator {max_den}; failures {:?}",
            rep.paths_checked,
            rep.min_gap.map_or("-".into(), |g| g.to_string()),
            rep.failures
        ),
    ))
}

/// Independent alternation search straight from the definition.
fn brute_alternation(s: &WordSequence) -> bool {
    let m = s.length;
    let prefix: Vec<Vec<usize>> = s
        .words
        .iter()
        .map(|w| {
            let mut p = vec![0];
            for &x in w {
                p.push(p.last().unwrap() + x);
            }
            p
        })
        .collect();
    let k = s.words.len();
    (0..m).into_par_iter().any(|u| {
        for v in u + 1..=m {
            for a in 0..k {
                for b in a + 1..k {
                    if prefix[a][u] != prefix[b][u] || (v < m && prefix[a][v] != prefix[b][v]) {
                        continue;
                    }
                    if s.words[a][u..v] == s.words[b][u..v] {
                        continue;
                    }
                    for c in b + 1..k {
                        if prefix[c][u] == prefix[a][u]
                            && (v == m || prefix[c][v] == prefix[a][v])
                            && s.words[c][u..v] == s.words[a][u..v]
                        {
                            return true;
                        }
                    }
                }
            }
        }
        false
    })
}

fn c5_words() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 2..=5 {
        for ell in 1..=3 {
            for s in [gen_x(n, ell)?, gen_xhat(n, ell)?] {
                let (_, paths) = sequence_to_paths(&s)?;
                let fine = s.len() == n.pow(ell as u32)
                    && paramenv_core::words::find_alternation(&s).is_none()
                    && !brute_alternation(&s)
                    && check_alternation_free_paths(&paths).is_none();
                if !fine {
                    failures.push(format!("n={n} ell={ell} binary={}", s.binary));
                }
                checked += 1;
            }
        }
    }
    Ok(ok_if(
        failures.is_empty(),
        format!("{checked} sequences; failures {failures:?}"),
    ))
}

fn c6_golden() -> Outcome {
    let x = x_word(4, 4, 114).to_string();
    let xh = gen_xhat(4, 4)?;
    let groups: Vec<String> = xh.words[114]
        .chunks(3)
        .map(|c| c.iter().map(|d| d.to_string()).collect())
        .collect();
    let xh = format!("({})", groups.join(" "));
    Ok(ok_if(
        x == "(2 1 3 1 0 1 3 1)" && xh == "(110 100 111 100 000 100 111 100)",
        format!("X[114] = {x}, X-hat[114] = {xh}"),
    ))
}

fn c7_oracles() -> Outcome {
    let results: Vec<Result<bool>> = (0..500u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(7_000 + i);
            let n = rng.random_range(2..=12);
            let g = random_dag(&mut rng, n, 8, false);
            Ok(envelope_dp(&g, None)?.function == envelope_bruteforce(&g, 1_000_000)?.function)
        })
        .collect();
    let mut mismatches = 0;
    for r in results {
        if !r? {
            mismatches += 1;
        }
    }
    Ok(ok_if(
        mismatches == 0,
        format!("500 DAGs, {mismatches} mismatches"),
    ))
}

fn c8_grid() -> Outcome {
    let mut failures = Vec::new();
    let mut maxima = Vec::new();
    for q in 4..=10 {
        let r = grid_piece_experiment(3, q, 100, 10, 31 + q as u64)?;
        maxima.push(format!("q={q}:{}/{}", r.max_pieces, 5 * q));
        if !r.passed() || r.max_pieces > 5 * q || r.max_in_changes > 2 || r.max_out_changes > 2 {
            failures.push(q);
        }
    }
    Ok(ok_if(
        failures.is_empty(),
        format!("max pieces {}; failing q {:?}", maxima.join(" "), failures),
    ))
}

fn c9_matching() -> Outcome {
    let mut bad = 0;
    for i in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(9_000 + i);
        let n = rng.random_range(2..=12);
        let g = random_dag(&mut rng, n, 8, true);
        let x = frac(rng.random_range(0..=100), rng.random_range(1..=9));
        let sol = shortest_by_matching(&g, &x)?;
        let (_, cost) = fixed_lambda_shortest(&g, &x)?;
        let valid = g.validate_st_path(&sol.path).is_ok();
        if !valid || sol.matching.weight != cost || g.path_cost(&sol.path).eval(&x) != cost {
            bad += 1;
        }
    }
    Ok(ok_if(
        bad == 0,
        format!("200 instances, {bad} disagreements"),
    ))
}

fn random_trigraph(rng: &mut ChaCha8Rng) -> TriGraph {
    let n = rng.random_range(2..=10);
    let mut g = TriGraph::new(n, 0, n - 1).unwrap();
    let c = |rng: &mut ChaCha8Rng| -> Point3 {
        [0, 0, 0].map(|_: i32| int(rng.random_range(-16..=16)))
    };
    for v in 0..n - 1 {
        let w = c(rng);
        g.add_edge(v, v + 1, w).unwrap();
    }
    for u in 0..n {
        for v in u + 2..n {
            if rng.random_bool(0.35) {
                let w = c(rng);
                g.add_edge(u, v, w).unwrap();
            }
        }
    }
    g
}

fn c10_hull() -> Outcome {
    let reports: Vec<Result<(usize, usize)>> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(10_000 + i);
            let g = random_trigraph(&mut rng);
            let rep = cover_check(&g, &sample_directions(20_000 + i, 1000, 1000), 1_000_000)?;
            Ok((rep.violations, rep.cover_upper))
        })
        .collect();
    let mut violations = 0;
    let mut largest = 0;
    for r in reports {
        let (v, c) = r?;
        violations += v;
        largest = largest.max(c);
    }
    let mut bad_pairs = 0;
    let mut vertices = 0;
    for i in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(30_000 + i);
        let mut pts = |k: usize| -> Vec<Point3> {
            (0..k)
                .map(|_| [0, 0, 0].map(|_: i32| int(rng.random_range(-12..=12))))
                .collect()
        };
        let a = pts(12);
        let b = pts(12);
        let sums: Vec<Point3> = a
            .iter()
            .flat_map(|x| b.iter().map(move |y| add(x, y)))
            .collect();
        let vs = minkowski_vertices(&a, &b)?;
        let mut fine = vs == hull3_vertices(&sums);
        for v in &vs {
            vertices += 1;
            match decompose_vertex(v, &a, &b) {
                Ok((x, y)) => fine &= &add(&x, &y) == v && a.contains(&x) && b.contains(&y),
                Err(_) => fine = false,
            }
        }
        if !fine {
            bad_pairs += 1;
        }
    }
    Ok(ok_if(
        violations == 0 && bad_pairs == 0,
        format!(
            "50 graphs x 1000 directions: {violations} violations (largest cover bound {largest}); \
             20 Minkowski pairs, {vertices} vertices, {bad_pairs} bad pairs"
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("main lemma, m = 1", c1_main_lemma_m1),
        ("main lemma, m = 2", c2_main_lemma_m2),
        ("coefficient bounds", c3_coefficients),
        ("gadget faithfulness", c4_gadget),
        ("alternation-free words", c5_words),
        ("golden words", c6_golden),
        ("envelope oracle equivalence", c7_oracles),
        ("grid bound", c8_grid),
        ("matching reduction", c9_matching),
        ("hull cover", c10_hull),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(Ok(d)) => (true, d),
            Ok(Err(d)) => (false, d),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= pass;
        println!(
            "{} criterion {:>2} ({name}) [{:.1}s]: {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
