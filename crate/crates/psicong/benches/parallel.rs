use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use psicong::par::{map, map_range, map_range_sequential};
use psicong::sequences::{derive, oracle_terms};
use psicong::{psi_power_coeff, SequenceId};

fn digit_sweep(c: &mut Criterion) {
    let n = 3u64.pow(8);
    let f = |i: u64| psi_power_coeff(5, 3, i).unwrap().value();
    let mut g = c.benchmark_group("psi5_mod27_sweep");
    g.bench_function("parallel", |b| b.iter(|| black_box(map_range(0..n, f))));
    g.bench_function("sequential", |b| {
        b.iter(|| black_box(map_range_sequential(0..n, f)))
    });
    g.finish();
}

fn verify_sweep(c: &mut Criterion) {
    let check = |id: SequenceId| {
        let rep = derive(id, 3, 1).unwrap();
        rep.to_series(728)
            .first_difference(&oracle_terms(id, 729, 3), 728)
            .is_none()
    };
    let mut g = c.benchmark_group("verify_mod27");
    g.sample_size(10);
    g.bench_function("parallel", |b| {
        b.iter(|| black_box(map(SequenceId::quadratic(), check)))
    });
    g.bench_function("sequential", |b| {
        b.iter(|| {
            black_box(
                SequenceId::quadratic()
                    .into_iter()
                    .map(check)
                    .collect::<Vec<_>>(),
            )
        })
    });
    g.finish();
}

criterion_group!(benches, digit_sweep, verify_sweep);
criterion_main!(benches);
