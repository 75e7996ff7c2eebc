mod combinatorics;

use criterion::{criterion_group, criterion_main};

criterion_group!(benches, combinatorics::bench, groups::bench, belyi::bench);
criterion_main!(benches);
