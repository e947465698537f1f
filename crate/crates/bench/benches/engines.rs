//! Engine throughput: absorb/emit loops dominated by bignum matrix
//! arithmetic. Run lengths are chosen so state entries reach a few hundred
//! bits — enough for multiplication cost to show, small enough for quick
//! sampling.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mcf_bench::{
    cbrt2_input, doubling_matrix, mixing_matrix, random_stream, sqrt2_input, steady_input,
};
use mcf_core::{
    jpa_expand, run, run_bilinear, run_bilinear_with_partial, run_with_partial, sum_forms,
    BilinearState, CbrtPairSource, MobiusState, RealSource, RootSource, RunLimits,
};

fn bench_mobius_run(c: &mut Criterion) {
    let mut group = c.benchmark_group("mobius-run");
    for outputs in [16usize, 64] {
        group.bench_with_input(
            BenchmarkId::new("periodic-cbrt2", outputs),
            &outputs,
            |b, &n| {
                b.iter(|| {
                    let mut state = MobiusState::new(mixing_matrix()).unwrap();
                    let mcf = cbrt2_input();
                    let mut stream = mcf.stream();
                    run(&mut state, &mut stream, RunLimits::for_outputs(n)).unwrap()
                })
            },
        );
        group.bench_with_input(
            BenchmarkId::new("random-b1000", outputs),
            &outputs,
            |b, &n| {
                b.iter(|| {
                    let mut state = MobiusState::new(mixing_matrix()).unwrap();
                    let mut stream = random_stream(0xBE5C, 2, 1000);
                    run(&mut state, &mut stream, RunLimits::for_outputs(n)).unwrap()
                })
            },
        );
    }
    group.bench_function("classical-sqrt2-64", |b| {
        b.iter(|| {
            let mut state = MobiusState::new(doubling_matrix()).unwrap();
            let mcf = sqrt2_input();
            let mut stream = mcf.stream();
            run(&mut state, &mut stream, RunLimits::for_outputs(64)).unwrap()
        })
    });
    group.finish();
}

fn bench_bilinear_run(c: &mut Criterion) {
    let mut group = c.benchmark_group("bilinear-run");
    for outputs in [8usize, 24] {
        group.bench_with_input(
            BenchmarkId::new("sum-periodic", outputs),
            &outputs,
            |b, &n| {
                b.iter(|| {
                    let mut state = BilinearState::new(sum_forms(2)).unwrap();
                    let x = cbrt2_input();
                    let y = steady_input();
                    let mut xs = x.stream();
                    let mut ys = y.stream();
                    run_bilinear(&mut state, &mut xs, &mut ys, RunLimits::for_outputs(n)).unwrap()
                })
            },
        );
    }
    group.finish();
}

fn bench_partial_vs_plain(c: &mut Criterion) {
    let mut group = c.benchmark_group("partial-vs-plain");
    group.bench_function("mobius-plain-48", |b| {
        b.iter(|| {
            let mut state = MobiusState::new(mixing_matrix()).unwrap();
            let mcf = cbrt2_input();
            let mut stream = mcf.stream();
            run(&mut state, &mut stream, RunLimits::for_outputs(48)).unwrap()
        })
    });
    group.bench_function("mobius-partial-48", |b| {
        b.iter(|| {
            let mut state = MobiusState::new(mixing_matrix()).unwrap();
            let mcf = cbrt2_input();
            let mut stream = mcf.stream();
            run_with_partial(&mut state, &mut stream, RunLimits::for_outputs(48)).unwrap()
        })
    });
    group.bench_function("bilinear-plain-16", |b| {
        b.iter(|| {
            let mut state = BilinearState::new(sum_forms(2)).unwrap();
            let x = cbrt2_input();
            let y = steady_input();
            let mut xs = x.stream();
            let mut ys = y.stream();
            run_bilinear(&mut state, &mut xs, &mut ys, RunLimits::for_outputs(16)).unwrap()
        })
    });
    group.bench_function("bilinear-partial-16", |b| {
        b.iter(|| {
            let mut state = BilinearState::new(sum_forms(2)).unwrap();
            let x = cbrt2_input();
            let y = steady_input();
            let mut xs = x.stream();
            let mut ys = y.stream();
            run_bilinear_with_partial(&mut state, &mut xs, &mut ys, RunLimits::for_outputs(16))
                .unwrap()
        })
    });
    group.finish();
}

fn bench_jpa_expand(c: &mut Criterion) {
    let mut group = c.benchmark_group("jpa-expand");
    group.bench_function("cbrt2-pair-48", |b| {
        b.iter(|| {
            let mut src: Box<dyn RealSource> =
                Box::new(CbrtPairSource::new(2.into(), 1 << 20).unwrap());
            jpa_expand(src.as_mut(), 48).unwrap()
        })
    });
    group.bench_function("sqrt2-single-128", |b| {
        b.iter(|| {
            let mut src: Box<dyn RealSource> =
                Box::new(RootSource::new(2.into(), 2, 1 << 20).unwrap());
            jpa_expand(src.as_mut(), 128).unwrap()
        })
    });
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = bench_mobius_run, bench_bilinear_run, bench_partial_vs_plain, bench_jpa_expand
}

criterion_main!(benches);
