use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use seaweed_core::formulas::{frobenius_census, index_by_formula};
use seaweed_core::oracle::oracle_index;
use seaweed_core::{meander, reduction, SeaweedSpec};

fn spec(s: &str) -> SeaweedSpec {
    s.parse().unwrap()
}

fn reduce(c: &mut Criterion) {
    let mut g = c.benchmark_group("reduce");
    for (name, s) in [
        ("C example", "C:200:15,185|17,61,117"),
        ("D example", "D:335:218,15,102|33,301"),
        ("A example", "A:9:2,4,3|5,2,2"),
        (
            "30 digits",
            "C:123456789012345678901234567890:98765432109876543210,12345|31415926535897932384626",
        ),
    ] {
        let sp = spec(s);
        g.bench_function(name, |b| {
            b.iter(|| reduction::index_value(black_box(&sp)).unwrap())
        });
    }
    g.finish();
}

fn meanders(c: &mut Criterion) {
    let mut g = c.benchmark_group("meander");
    for n in [100u64, 1_000, 10_000] {
        let sp = spec(&format!("C:{n}:{}|{},{}", n, n / 3, n / 2));
        g.bench_with_input(BenchmarkId::from_parameter(n), &sp, |b, sp| {
            b.iter(|| meander::index(black_box(sp)).unwrap())
        });
        let red = sp.clone();
        g.bench_with_input(BenchmarkId::new("reduce", n), &red, |b, sp| {
            b.iter(|| reduction::index_value(black_box(sp)).unwrap())
        });
    }
    g.finish();
}

fn formula(c: &mut Criterion) {
    let sp = spec("D:40:25,14|40");
    c.bench_function("formula three-block D", |b| {
        b.iter(|| index_by_formula(black_box(&sp)).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for s in ["C:5:2,3|3,1", "D:5:4|5", "A:9:2,4,3|5,2,2"] {
        let sp = spec(s);
        g.bench_function(s, |b| {
            b.iter(|| oracle_index(black_box(&sp), 3, 0).unwrap())
        });
    }
    g.finish();
}

fn census(c: &mut Criterion) {
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    g.bench_function("max_n 3", |b| {
        b.iter(|| frobenius_census(black_box(3), true).unwrap())
    });
    g.finish();
}

criterion_group!(benches, reduce, meanders, formula, oracle, census);
criterion_main!(benches);
