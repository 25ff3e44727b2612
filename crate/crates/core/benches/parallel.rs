use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use tubecat::category::load_category;
use tubecat::reps::block_decompose_end;
use tubecat::tube::tube_algebra;
use tubecat::verify::run_suite;
use tubecat::{Exec, ObjectWord};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn bench_tube_algebra(c: &mut Criterion) {
    let mut g = c.benchmark_group("tube_algebra");
    for name in ["fibonacci", "ising", "z3"] {
        let cat = load_category(name).unwrap();
        for (mode, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(mode, name), &exec, |b, &e| {
                b.iter(|| black_box(tube_algebra(&cat, e).unwrap()))
            });
        }
    }
    g.finish();
}

fn bench_suite(c: &mut Criterion) {
    let mut g = c.benchmark_group("run_suite");
    g.sample_size(10);
    for name in ["fibonacci", "ising"] {
        let cat = load_category(name).unwrap();
        for (mode, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(mode, name), &exec, |b, &e| {
                b.iter(|| black_box(run_suite(&cat, &[], 42, e).unwrap()))
            });
        }
    }
    g.finish();
}

fn bench_blocks(c: &mut Criterion) {
    let mut g = c.benchmark_group("block_decompose_end");
    let cat = load_category("ising").unwrap();
    let s = cat.label("sigma").unwrap();
    let x = ObjectWord::new(&cat, [s, s]);
    for (mode, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(mode, "ising sigma sigma"), &exec, |b, &e| {
            b.iter(|| black_box(block_decompose_end(&cat, &x, e).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_tube_algebra, bench_suite, bench_blocks);
criterion_main!(benches);
