use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qdesign::designs::{self, Structure};
use qdesign::lattices::{self, catalog};
use qdesign::par::Parallelism;
use qdesign::qseries::{eisenstein, eta_product, EtaQuotientSpec};
use qdesign::rational::int;

const MODES: [(&str, Parallelism); 2] = [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)];

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    let e8 = catalog::e8();
    let leech = catalog::leech();
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new("e8_norm_8", name), &mode, |b, &m| {
            b.iter(|| lattices::shell_with(&e8, &int(8), m).unwrap().len())
        });
        g.bench_with_input(BenchmarkId::new("leech_count_4", name), &mode, |b, &m| {
            b.iter(|| lattices::shell_count(&leech, &int(4), m).unwrap())
        });
    }
    g.finish();
}

fn series_products(c: &mut Criterion) {
    let mut g = c.benchmark_group("qexp_mul");
    let prec24 = 24 * 800;
    let e4 = eisenstein(4, prec24).unwrap();
    let eta = eta_product(&EtaQuotientSpec::parse("1^8", None).unwrap(), prec24).unwrap();
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new("e4_eta8_800", name), &mode, |b, &m| {
            b.iter(|| black_box(e4.mul_with(&eta, m)))
        });
    }
    g.finish();
}

fn design_moments(c: &mut Criterion) {
    let mut g = c.benchmark_group("design_test");
    let e8 = catalog::e8();
    let shell = lattices::shell(&e8, &int(6)).unwrap();
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new("e8_norm_6_t8", name), &mode, |b, &m| {
            b.iter(|| lattices::spherical_design_test_with(&e8, &shell, 8, false, m).unwrap().strength)
        });
    }
    g.finish();
}

fn verdict_scans(c: &mut Criterion) {
    let mut g = c.benchmark_group("verdicts");
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new("rank16_5000", name), &mode, |b, &m| {
            b.iter(|| designs::verdicts_up_to(Structure::Rank16, 5000, m).unwrap().len())
        });
    }
    g.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10).warm_up_time(Duration::from_millis(500)).measurement_time(Duration::from_secs(3));
    targets = enumeration, series_products, design_moments, verdict_scans
}
criterion_main!(benches);
