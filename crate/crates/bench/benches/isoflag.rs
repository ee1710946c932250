use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use isoflag::embed::embed;
use isoflag::geometry::{gradient_descent, nearest_point, DescentOptions};
use isoflag::repdim::{enumerate_low_dim, traceless_symmetric_dim, weyl_dim, DEFAULT_MU1_CAP_DOUBLED};
use isoflag::{random_flag_point, FlagSignature, HighestWeight, Spectrum, SymmetricMatrix};

fn repdim(c: &mut Criterion) {
    let mut group = c.benchmark_group("weyl_dim");
    for n in [17usize, 50, 200] {
        let w = HighestWeight::integral(n, &[4, 3, 2, 1]).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &w, |b, w| b.iter(|| weyl_dim(black_box(w))));
    }
    group.finish();

    let mut group = c.benchmark_group("enumerate_low_dim");
    for n in [17usize, 26] {
        let max = traceless_symmetric_dim(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &max, |b, max| {
            b.iter(|| enumerate_low_dim(n, black_box(max), DEFAULT_MU1_CAP_DOUBLED).unwrap())
        });
    }
    group.finish();
}

fn geometry(c: &mut Criterion) {
    let mut group = c.benchmark_group("embed");
    for n in [8usize, 32] {
        let sig = FlagSignature::new(n, vec![n / 4, n / 2]).unwrap();
        let spec = Spectrum::default_traceless(&sig);
        let f = random_flag_point(&sig, 1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| b.iter(|| embed(black_box(f), &spec).unwrap()));
    }
    group.finish();

    let mut group = c.benchmark_group("nearest_point");
    for n in [8usize, 32] {
        let sig = FlagSignature::new(n, vec![n / 4, n / 2]).unwrap();
        let spec = Spectrum::default_traceless(&sig);
        let x = embed(&random_flag_point(&sig, 2), &spec).unwrap();
        let a = SymmetricMatrix::symmetrize(x.x().matrix() * 1.5);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| nearest_point(black_box(a), &spec, 1e-8).unwrap())
        });
    }
    group.finish();

    let sig = FlagSignature::new(8, vec![2, 5]).unwrap();
    let base = Spectrum::default_traceless(&sig);
    let spec = base.scaled(1.0 / base.max_gap());
    let a = embed(&random_flag_point(&sig, 3), &spec).unwrap().x().matrix() * 5.0;
    let init = embed(&random_flag_point(&sig, 4), &spec).unwrap();
    let opts = DescentOptions::for_spectrum(&spec);
    c.bench_function("gradient_descent/8", |b| {
        b.iter(|| gradient_descent(|x| x.matrix() - &a, &spec, black_box(&init), &opts).unwrap())
    });
}

criterion_group!(benches, repdim, geometry);
criterion_main!(benches);
