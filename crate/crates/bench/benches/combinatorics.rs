use std::hint::black_box;

use criterion::Criterion;
use dessins_bench::tetrahedron;
use dessins_core::{enumerate_dessins, is_regular, regular_closure};

pub fn bench(c: &mut Criterion) {
    let t = tetrahedron();
    c.bench_function("canonical_form/tetrahedron", |b| b.iter(|| black_box(&t).canonical_form()));
    c.bench_function("is_regular/tetrahedron", |b| b.iter(|| is_regular(black_box(&t))));
    c.bench_function("regular_closure/tetrahedron", |b| b.iter(|| regular_closure(black_box(&t))));

    let mut group = c.benchmark_group("enumerate");
    group.sample_size(10);
    for n in [4, 5] {
        group.bench_function(format!("degree_{n}"), |b| b.iter(|| enumerate_dessins(black_box(n))));
    }
    group.finish();
}
