use circ16_core::circulant::{det_bareiss, det_via_norms, CoeffVector};
use circ16_core::properties::random_vectors;
use circ16_core::search::{spectrum, spectrum_sequential, SearchBox, SearchConfig};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn spectra(c: &mut Criterion) {
    let cfg = SearchConfig::default();
    let mut group = c.benchmark_group("spectrum");
    group.sample_size(10);
    for (n, lo, hi) in [(8, -1, 1), (8, -2, 2), (16, 0, 1)] {
        let bx = SearchBox::new(n, lo, hi).unwrap();
        let label = format!("n{n}_{lo}_{hi}");
        group.bench_function(format!("{label}/parallel"), |b| b.iter(|| spectrum(black_box(&bx), &cfg).unwrap()));
        group.bench_function(format!("{label}/sequential"), |b| {
            b.iter(|| spectrum_sequential(black_box(&bx), &cfg).unwrap())
        });
    }
    group.finish();
}

fn determinants(c: &mut Criterion) {
    let vectors: Vec<CoeffVector> = random_vectors(1, 64, -50, 50).iter().map(|a| CoeffVector::from_i64s(a)).collect();
    let mut group = c.benchmark_group("determinant");
    group.bench_function("bareiss", |b| b.iter(|| vectors.iter().for_each(|v| drop(black_box(det_bareiss(v))))));
    group.bench_function("norms", |b| b.iter(|| vectors.iter().for_each(|v| drop(black_box(det_via_norms(v).unwrap())))));
    group.finish();
}

criterion_group!(benches, spectra, determinants);
criterion_main!(benches);
