use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use cyclord::full::carry_to_frame;
use cyclord::{in_r, jinverse, PoJaDescriptor, RingDescriptor};
use cyclord_bench::{invertibles, lagrangian_pairs, sym3, sym3_triples};
use std::hint::black_box;

fn relation(c: &mut Criterion) {
    let triples = sym3_triples(64);
    c.bench_function("in_r/Sym(3,Q)", |b| {
        b.iter(|| {
            for [a, x, y] in &triples {
                black_box(in_r(a, x, y).unwrap());
            }
        })
    });
}

fn inverse(c: &mut Criterion) {
    let mut g = c.benchmark_group("jinverse");
    for d in [
        sym3(),
        PoJaDescriptor::spin(3, RingDescriptor::Q),
        PoJaDescriptor::dual_ext(sym3()),
    ] {
        let xs = invertibles(&d, 64);
        g.bench_function(d.to_string(), |b| {
            b.iter(|| {
                for x in &xs {
                    black_box(jinverse(x).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn frames(c: &mut Criterion) {
    let (m, pairs) = lagrangian_pairs(32);
    c.bench_function("carry_to_frame/Lagrangian(2)", |b| {
        b.iter_batched(
            || pairs.clone(),
            |pairs| {
                for (p, q) in &pairs {
                    black_box(carry_to_frame(&m.geometry, p, q).unwrap());
                }
            },
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, relation, inverse, frames);
criterion_main!(benches);
