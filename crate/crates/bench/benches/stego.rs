use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use lsbstego_bench::{random_payload, random_plane};
use lsbstego_core::{embed_image, extract_image, run_embed, usable_capacity, Backend};
use std::hint::black_box;

const BACKENDS: [Backend; 3] = [Backend::Sequential, Backend::Parallel, Backend::Shuffled { seed: 0 }];

fn bench_row(c: &mut Criterion) {
    let row = random_plane(1024, 1, 1).into_samples();
    let chunk = random_payload(256, 2);
    let mut group = c.benchmark_group("run_embed_1024");
    group.throughput(Throughput::Bytes(chunk.len() as u64));
    for backend in BACKENDS {
        group.bench_with_input(BenchmarkId::from_parameter(backend), &backend, |b, &backend| {
            b.iter(|| run_embed(backend, black_box(&row), black_box(&chunk)).unwrap())
        });
    }
    group.finish();
}

fn bench_plane(c: &mut Criterion) {
    let cover = random_plane(512, 512, 3);
    let payload = random_payload(usable_capacity(512, 512), 4);
    let stego = embed_image(&cover, &payload, Backend::Sequential).unwrap();

    let mut group = c.benchmark_group("plane_512");
    group.throughput(Throughput::Bytes(payload.len() as u64));
    group.sample_size(10);
    for backend in BACKENDS {
        group.bench_with_input(BenchmarkId::new("embed", backend), &backend, |b, &backend| {
            b.iter(|| embed_image(black_box(&cover), black_box(&payload), backend).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("extract", backend), &backend, |b, &backend| {
            b.iter(|| extract_image(black_box(&stego), backend).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_row, bench_plane);
criterion_main!(benches);
