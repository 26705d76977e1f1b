use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rbloch_core::bloch::{PreBloch, RefinedPreBloch};
use rbloch_core::fields::{enumerate_irreducibles_with, FiniteField};
use rbloch_core::specialize::{wd_suite, Phi, Specializer};
use rbloch_core::Exec;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn presentations(c: &mut Criterion) {
    let mut group = c.benchmark_group("pre_bloch");
    group.sample_size(10);
    for q in [13u64, 27, 49] {
        let k = Arc::new(FiniteField::of_order(q).unwrap());
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, q), &k, |b, k| {
                b.iter(|| black_box(PreBloch::with_exec(k.clone(), exec)))
            });
        }
    }
    group.finish();

    let mut group = c.benchmark_group("refined_pre_bloch");
    group.sample_size(10);
    for q in [13u64, 27] {
        let k = Arc::new(FiniteField::of_order(q).unwrap());
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, q), &k, |b, k| {
                b.iter(|| black_box(RefinedPreBloch::with_exec(k.clone(), exec).unwrap()))
            });
        }
    }
    group.finish();
}

fn irreducibles(c: &mut Criterion) {
    let mut group = c.benchmark_group("irreducibles");
    let k = FiniteField::of_order(7).unwrap();
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, "F7 deg<=4"), |b| {
            b.iter(|| black_box(enumerate_irreducibles_with(&k, 4, exec)))
        });
    }
    group.finish();
}

fn specialization(c: &mut Criterion) {
    let mut group = c.benchmark_group("wd_suite");
    group.sample_size(10);
    for (name, exec) in MODES {
        // Targets are cached across iterations so only the suite itself is timed.
        let sp = Specializer::new();
        group.bench_function(BenchmarkId::new(name, "F7(t) 200 trials"), |b| {
            b.iter(|| black_box(wd_suite(&sp, 7, Phi::Mod2, 200, 50, 2, 1, exec).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, presentations, irreducibles, specialization);
criterion_main!(benches);
