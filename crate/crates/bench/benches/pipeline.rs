use std::hint::black_box;

use cdpers::christoffel::{BasisFamily, BasisSpec, ChristoffelModel};
use cdpers::diagram_metrics::bottleneck;
use cdpers::grid_complex::{lower_star, FreudenthalComplex, DEFAULT_SIMPLEX_CAP};
use cdpers::persistence::compute_persistence;
use cdpers::pointcloud::{sample_shape, Circle, NoiseSpec, ShapeKind, ShapeSpec};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn two_circles(seed: u64) -> ShapeSpec {
    ShapeSpec {
        kind: ShapeKind::TwoCircles {
            first: Circle {
                center: [-0.45, 0.0],
                radius: 0.4,
            },
            second: Circle {
                center: [0.45, 0.0],
                radius: 0.4,
            },
            first_fraction: None,
        },
        sample_count: 1000,
        noise: NoiseSpec {
            uniform_count: 0,
            gaussian_sigma: 0.01,
            rng_seed: seed,
        },
    }
}

fn fit(c: &mut Criterion) {
    let mu = sample_shape(&two_circles(1)).unwrap();
    let mut group = c.benchmark_group("fit");
    for d in [4, 8, 12] {
        let basis = BasisSpec::new(2, d, BasisFamily::ChebyshevTensor).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(d), &basis, |b, basis| {
            b.iter(|| ChristoffelModel::fit(black_box(&mu), basis, 1e-12).unwrap())
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let mu = sample_shape(&two_circles(1)).unwrap();
    let basis = BasisSpec::new(2, 8, BasisFamily::ChebyshevTensor).unwrap();
    let model = ChristoffelModel::fit(&mu, &basis, 1e-12).unwrap();
    let complex = FreudenthalComplex::skeleton(2, 100, 2, DEFAULT_SIMPLEX_CAP).unwrap();
    let coords = complex.vertex_coords_flat();
    c.bench_function("sweep/d8_m100", |b| {
        b.iter(|| model.log_eval_many(black_box(&coords)))
    });
}

fn reduction(c: &mut Criterion) {
    let mu = sample_shape(&two_circles(1)).unwrap();
    let basis = BasisSpec::new(2, 8, BasisFamily::ChebyshevTensor).unwrap();
    let model = ChristoffelModel::fit(&mu, &basis, 1e-12).unwrap();
    let mut group = c.benchmark_group("reduction");
    group.sample_size(10);
    for m in [50, 100, 200] {
        let complex = FreudenthalComplex::skeleton(2, m, 2, DEFAULT_SIMPLEX_CAP).unwrap();
        let values = model.log_eval_many(&complex.vertex_coords_flat());
        let filtration = lower_star(&complex, &values).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &filtration, |b, f| {
            b.iter(|| compute_persistence(black_box(f), 1))
        });
    }
    group.finish();
}

fn matching(c: &mut Criterion) {
    let complex = FreudenthalComplex::skeleton(2, 100, 2, DEFAULT_SIMPLEX_CAP).unwrap();
    let coords = complex.vertex_coords_flat();
    let diagram = |seed| {
        let mu = sample_shape(&two_circles(seed)).unwrap();
        let basis = BasisSpec::new(2, 8, BasisFamily::ChebyshevTensor).unwrap();
        let model = ChristoffelModel::fit(&mu, &basis, 1e-12).unwrap();
        let values = model.log_eval_many(&coords);
        compute_persistence(&lower_star(&complex, &values).unwrap(), 1)
    };
    let (a, b) = (diagram(1), diagram(2));
    c.bench_function("bottleneck/h0", |bench| {
        bench.iter(|| bottleneck(black_box(&a), black_box(&b), 0))
    });
}

criterion_group!(benches, fit, sweep, reduction, matching);
criterion_main!(benches);
