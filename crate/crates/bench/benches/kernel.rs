use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gcalc_core::calculus::{derivative, integrate, DerivOptions};
use gcalc_core::expr::Expr;
use gcalc_core::net::{estimate_valuation, from_gennum, Grid};
use gcalc_core::series::{eval_series, PowerSeries};
use gcalc_core::{corpus, GenFunc, GenNum, Trunc};

fn ring_ops(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let x = corpus::random_gennum(&mut rng, 6, -8, 8);
    let y = corpus::random_gennum(&mut rng, 6, -8, 8);
    c.bench_function("mul 6x6 terms", |b| {
        b.iter(|| black_box(&x).checked_mul(black_box(&y)).unwrap())
    });
    c.bench_function("add 6+6 terms", |b| {
        b.iter(|| black_box(&x).checked_add(black_box(&y)).unwrap())
    });
    c.bench_function("valuation", |b| b.iter(|| black_box(&x).valuation()));
}

fn inversion(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let x = corpus::random_base_point(&mut rng);
    c.bench_function("invert to O(eps^32)", |b| {
        b.iter(|| black_box(&x).invert(Trunc::finite(32)).unwrap())
    });
}

fn sharp_derivative(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let f = corpus::random_polynomial(&mut rng, 4);
    let x0 = corpus::random_base_point(&mut rng);
    let opts = DerivOptions::default();
    c.bench_function("derivative deg-4 polynomial", |b| {
        b.iter(|| derivative(black_box(&f), black_box(&x0), &opts).unwrap())
    });
}

fn integration(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let f = corpus::random_polynomial(&mut rng, 5);
    let a = corpus::random_base_point(&mut rng);
    let b_end = corpus::random_base_point(&mut rng);
    let w = Trunc::finite(32);
    c.bench_function("integrate deg-5 polynomial", |b| {
        b.iter(|| integrate(black_box(&f), black_box(&a), black_box(&b_end), &w).unwrap())
    });
}

fn series(c: &mut Criterion) {
    let s = PowerSeries::geometric(GenNum::zero());
    let z = GenNum::alpha_int(1);
    c.bench_function("geometric partial sum to 24", |b| {
        b.iter(|| eval_series(black_box(&s), black_box(&z), 24).unwrap())
    });
}

fn net_oracle(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let x = corpus::random_gennum(&mut rng, 6, -8, 8);
    let grid = Grid::default_grid();
    c.bench_function("net estimate valuation", |b| {
        b.iter(|| estimate_valuation(&from_gennum(black_box(&x), &grid)).unwrap())
    });
}

fn builtin_eval(c: &mut Criterion) {
    let f = GenFunc::unary(Expr::call(gcalc_core::Builtin::Exp, Expr::var(0)));
    let x = GenNum::alpha_int(1);
    let w = Trunc::finite(32);
    c.bench_function("exp taylor to O(eps^32)", |b| {
        b.iter(|| f.eval(std::slice::from_ref(black_box(&x)), &w).unwrap())
    });
}

criterion_group!(
    benches,
    ring_ops,
    inversion,
    sharp_derivative,
    integration,
    series,
    net_oracle,
    builtin_eval,
);
criterion_main!(benches);
