use criterion::{criterion_group, criterion_main, Criterion};

use ftgi::{
    expose, extract_spectrum, make_random_probes, make_sinusoid, reconstruct, tgi_correlate,
    tgi_expose, DetectorModel, PatternLayout, Window,
};

fn bench_expose(c: &mut Criterion) {
    let layout = PatternLayout::default();
    let model = DetectorModel::default();
    let object = make_sinusoid(11.0, 1.0, 800.0, 1.0, 1.0).unwrap();
    c.bench_function("expose_400_buckets", |b| {
        b.iter(|| expose(&object, &layout, &model).unwrap())
    });
}

fn bench_extract_and_reconstruct(c: &mut Criterion) {
    let layout = PatternLayout::default();
    let model = DetectorModel::default();
    let object = make_sinusoid(11.0, 1.0, 800.0, 1.0, 1.0).unwrap();
    let capture = expose(&object, &layout, &model).unwrap();
    c.bench_function("extract_spectrum", |b| {
        b.iter(|| extract_spectrum(&capture).unwrap())
    });
    let spec = extract_spectrum(&capture).unwrap();
    c.bench_function("reconstruct_full_coverage", |b| {
        b.iter(|| reconstruct(&spec, 1.0, Window::Rect, 800).unwrap())
    });
}

fn bench_tgi(c: &mut Criterion) {
    let object = make_sinusoid(5.0, 1.0, 800.0, 1.0, 1.0).unwrap();
    let probes = make_random_probes(400, 800, 42);
    let model = DetectorModel::default();
    let buckets = tgi_expose(&object, &probes, &model).unwrap();
    c.bench_function("tgi_expose_400", |b| {
        b.iter(|| tgi_expose(&object, &probes, &model).unwrap())
    });
    c.bench_function("tgi_correlate_400", |b| {
        b.iter(|| tgi_correlate(&buckets, &probes, 800.0).unwrap())
    });
}

criterion_group!(benches, bench_expose, bench_extract_and_reconstruct, bench_tgi);
criterion_main!(benches);
