use criterion::{black_box, criterion_group, criterion_main, Criterion};

use latticephase_core::energy::{w_sum, Method};
use latticephase_core::solver::{global_minimize, solve_alpha_b, Mode};
use latticephase_core::PotentialSpec;
use latticephase_core::theta::{theta1, DerivOrder};
use latticephase_core::{HalfPlanePoint, TruncationBudget};

fn bench_theta1(c: &mut Criterion) {
    let b = TruncationBudget::default();
    c.bench_function("theta1 direct X=1.3", |bench| {
        bench.iter(|| theta1(black_box(1.3), black_box(0.27), DerivOrder::VALUE, &b).unwrap())
    });
    c.bench_function("theta1 poisson X=0.4", |bench| {
        bench.iter(|| theta1(black_box(0.4), black_box(0.27), DerivOrder::DXY, &b).unwrap())
    });
}

fn bench_w_sum(c: &mut Criterion) {
    let b = TruncationBudget::default();
    let z = HalfPlanePoint::new(0.3, 1.2).unwrap();
    c.bench_function("M reduced alpha=0.9", |bench| {
        bench.iter(|| w_sum(1, black_box(0.9), &z, &b, Method::Reduced1d).unwrap())
    });
    c.bench_function("M direct alpha=0.9", |bench| {
        bench.iter(|| w_sum(1, black_box(0.9), &z, &b, Method::Direct).unwrap())
    });
}

fn bench_solver(c: &mut Criterion) {
    c.bench_function("solve_alpha_b", |bench| bench.iter(|| solve_alpha_b().unwrap()));
    c.bench_function("full scan M alpha=0.91", |bench| {
        bench.iter(|| global_minimize(&PotentialSpec::m(), 0.91, Mode::FullScan, 4.0).unwrap())
    });
}

criterion_group!(benches, bench_theta1, bench_w_sum, bench_solver);
criterion_main!(benches);
