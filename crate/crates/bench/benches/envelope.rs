use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use paramenv_bench::{layered_trigraph, phi, random_grid};
use paramenv_core::construction::{count_final_pieces, verify_phi};
use paramenv_core::graph::{envelope_bruteforce, envelope_dp};
use paramenv_core::matching::shortest_by_matching;
use paramenv_core::polytope::{cover_check, sample_directions};
use paramenv_core::rational::int;

fn envelopes(c: &mut Criterion) {
    let mut group = c.benchmark_group("envelope");
    for q in [8, 16, 32] {
        let g = random_grid(3, q, 1);
        group.bench_with_input(BenchmarkId::new("dp_grid3", q), &g, |b, g| {
            b.iter(|| envelope_dp(g, None).unwrap())
        });
    }
    let small = random_grid(3, 8, 2);
    group.bench_function("bruteforce_grid3_8", |b| {
        b.iter(|| envelope_bruteforce(&small, 100_000).unwrap())
    });
    group.finish();
}

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("phi");
    group.sample_size(10);
    let inst = phi(4, 1);
    group.bench_function("build_n4_m1", |b| b.iter(|| phi(4, 1)));
    group.bench_function("verify_n4_m1", |b| b.iter(|| verify_phi(&inst).unwrap()));
    group.bench_function("final_pieces_n4_m1", |b| {
        b.iter(|| count_final_pieces(&inst).unwrap())
    });
    group.finish();
}

fn polytope(c: &mut Criterion) {
    let g = layered_trigraph(4, 3, 7);
    let dirs = sample_directions(3, 200, 1000);
    c.bench_function("cover_check_81_paths", |b| {
        b.iter(|| cover_check(&g, &dirs, 10_000).unwrap())
    });
}

fn matching(c: &mut Criterion) {
    let g = random_grid(4, 6, 5).map_weights(|e| {
        let w = &e.weight;
        paramenv_core::AffineForm::new(&w.constant * &w.constant + &w.slope * &w.slope, int(0))
    });
    c.bench_function("matching_grid4_6", |b| {
        b.iter(|| shortest_by_matching(&g, &int(0)).unwrap())
    });
}

criterion_group!(benches, envelopes, construction, polytope, matching);
criterion_main!(benches);
