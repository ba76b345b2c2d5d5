use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qdeform_core::schrod::{self, RadialProblem};
use qdeform_core::{harm, integrate, run_verification, AlgebraMatrices, Deformation, Potential};

fn algebra(c: &mut Criterion) {
    let d = Deformation::new(1.1).unwrap();
    c.bench_function("algebra_matrices_lmax4", |b| {
        b.iter(|| AlgebraMatrices::build(black_box(d), 4))
    });
}

fn harmonics(c: &mut Criterion) {
    let d = Deformation::new(0.9).unwrap();
    c.bench_function("gram_lmax4", |b| {
        b.iter(|| integrate::gram_matrix(black_box(d), 4, 1e-8).unwrap())
    });
    c.bench_function("product_expansion_l3", |b| {
        b.iter(|| harm::x_times_y(black_box(d), 1, 3, 1).unwrap())
    });
}

fn radial(c: &mut Criterion) {
    let d = Deformation::new(1.1).unwrap();
    let coulomb = RadialProblem::with_default_grid(Potential::Coulomb, d, 1, 3).unwrap();
    let oscillator = RadialProblem::with_default_grid(Potential::Oscillator, d, 1, 3).unwrap();
    c.bench_function("radial_coulomb_l1", |b| {
        b.iter(|| schrod::radial_eigensolve(black_box(&coulomb)).unwrap())
    });
    c.bench_function("radial_oscillator_l1", |b| {
        b.iter(|| schrod::radial_eigensolve(black_box(&oscillator)).unwrap())
    });
}

fn suite(c: &mut Criterion) {
    let d = Deformation::new(1.2).unwrap();
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    g.bench_function("full_suite_lmax4", |b| {
        b.iter(|| run_verification(black_box(d), 4, 1e-9).unwrap())
    });
    g.finish();
}

criterion_group!(benches, algebra, harmonics, radial, suite);
criterion_main!(benches);
