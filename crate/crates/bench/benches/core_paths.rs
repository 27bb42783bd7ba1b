//! Hot-path timings: zeta on the line, one S evaluation, the segmented prime
//! sieve, and a full toy resonator build.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use zal_core::{
    build_m_prime, build_params, enumerate_m, prime_window, r_eval, rhs_prime_sum, s_value,
    weight_function, zeta, ConvolutionOptions, EvalPrecision, KernelSpec, SigmaMode, SnOptions,
};

fn bench_zeta(c: &mut Criterion) {
    let prec = EvalPrecision::default();
    c.bench_function("zeta_half_line_t100", |b| {
        b.iter(|| zeta(num_complex::Complex64::new(0.5, black_box(100.0)), &prec).unwrap())
    });
}

fn bench_s_value(c: &mut Criterion) {
    let opts = SnOptions::default();
    c.bench_function("s_value_t100", |b| {
        b.iter(|| s_value(0.5, black_box(100.0), &opts).unwrap())
    });
}

fn bench_prime_sum(c: &mut Criterion) {
    let spec = KernelSpec::new(1, 1.5).unwrap();
    let opts = ConvolutionOptions {
        m_cap: 1_000_000,
        ..Default::default()
    };
    c.bench_function("prime_sum_cap_1e6", |b| {
        b.iter(|| rhs_prime_sum(1, 0.5, black_box(100.0), &spec, &opts))
    });
}

fn bench_resonator(c: &mut Criterion) {
    c.bench_function("resonator_build_T1e16", |b| {
        b.iter(|| {
            let params = build_params(black_box(1e16), 0.0, SigmaMode::Half).unwrap();
            let window = prime_window(&params).unwrap();
            let weights = weight_function(&params, &window).unwrap();
            let members = enumerate_m(&params, &weights, &window).unwrap();
            let set = build_m_prime(&members, &params);
            r_eval(&set, 25.0)
        })
    });
}

criterion_group!(
    benches,
    bench_zeta,
    bench_s_value,
    bench_prime_sum,
    bench_resonator
);
criterion_main!(benches);
