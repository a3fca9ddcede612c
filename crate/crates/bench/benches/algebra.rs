use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rankmetric::fqmlinalg::vec_add;
use rankmetric::gpt::{random_error, random_message};
use rankmetric::rankcodes::{gabidulin, random_evaluation_vector};
use rankmetric::rng::seeded;
use rankmetric::{Decoder, FieldCtx, MatFq, MatFqm};

fn field_ops(c: &mut Criterion) {
    let mut g = c.benchmark_group("field");
    for m in [32usize, 104, 192] {
        let ctx = FieldCtx::new(2, m).unwrap();
        let mut rng = seeded(1);
        let (a, b) = (ctx.random_nonzero(&mut rng), ctx.random_nonzero(&mut rng));
        g.bench_with_input(BenchmarkId::new("mul", m), &m, |bch, _| {
            bch.iter(|| ctx.mul(black_box(&a), black_box(&b)))
        });
        g.bench_with_input(BenchmarkId::new("inv", m), &m, |bch, _| {
            bch.iter(|| ctx.inv(black_box(&a)))
        });
        g.bench_with_input(BenchmarkId::new("frobenius", m), &m, |bch, _| {
            bch.iter(|| ctx.frobenius(black_box(&a), 5))
        });
    }
    g.finish();
}

fn linear_algebra(c: &mut Criterion) {
    let mut g = c.benchmark_group("linalg");
    let mut rng = seeded(2);
    let a = MatFq::random(2, 512, 1024, &mut rng);
    g.bench_function("rref_f2_512x1024", |b| b.iter(|| black_box(&a).rref()));
    let ctx = FieldCtx::new(2, 104).unwrap();
    let m = MatFqm::random(&ctx, 24, 32, &mut rng);
    g.bench_function("rref_f2^104_24x32", |b| b.iter(|| black_box(&m).rref()));
    g.finish();
}

fn decoding(c: &mut Criterion) {
    let ctx = FieldCtx::new(2, 104).unwrap();
    let mut rng = seeded(3);
    let g = random_evaluation_vector(&ctx, 26, &mut rng).unwrap();
    let code = gabidulin(&ctx, &g, 18).unwrap();
    let msg = random_message(&ctx, 18, &mut rng);
    let y = vec_add(
        &ctx,
        &rankmetric::fqmlinalg::vec_mul(&ctx, &msg, code.generator()),
        &random_error(&ctx, 26, 4, &mut rng).unwrap(),
    );
    let dec = Decoder::new(&code, 4);
    c.bench_function("decode_gabidulin_26_18", |b| b.iter(|| dec.decode(black_box(&y))));
}

criterion_group!(benches, field_ops, linear_algebra, decoding);
criterion_main!(benches);
