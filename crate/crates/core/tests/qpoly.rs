use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rankmetric::{FieldCtx, LinPoly};

#[test]
fn monomial_laws() {
    let ctx = FieldCtx::new(2, 8).unwrap();
    let one = ctx.one();
    let x1 = LinPoly::monomial(&ctx, one, 1);
    assert_eq!(x1.skew_mul(&x1), LinPoly::monomial(&ctx, one, 2));
    let a = ctx.generator();
    let ax = LinPoly::monomial(&ctx, a, 0);
    assert_eq!(x1.skew_mul(&ax), LinPoly::monomial(&ctx, ctx.frobenius(&a, 1), 1));
    assert_eq!(LinPoly::zero(&ctx).qdeg(), None);
    assert_eq!(x1.qdeg(), Some(1));
}

#[test]
fn skew_product_is_not_commutative() {
    let ctx = FieldCtx::new(2, 8).unwrap();
    let a = ctx.generator();
    let f = LinPoly::new(&ctx, vec![a, ctx.one()]);
    let g = LinPoly::new(&ctx, vec![ctx.one(), ctx.one()]);
    let fg = f.skew_mul(&g);
    let gf = g.skew_mul(&f);
    assert_ne!(fg, gf);
    // the products differ as maps, not only as coefficient lists
    let basis: Vec<_> = (0..8).map(|i| ctx.from_u64(1 << i)).collect();
    assert!(basis.iter().any(|b| fg.evaluate(b) != gf.evaluate(b)));
}

#[test]
fn evaluation_is_linear_and_composes() {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    for (q, m) in [(2, 10), (3, 4), (2, 104)] {
        let ctx = FieldCtx::new(q, m).unwrap();
        assert_eq!(LinPoly::x(&ctx).evaluate(&ctx.generator()), ctx.generator());
        for _ in 0..20 {
            let f = LinPoly::new(&ctx, (0..4).map(|_| ctx.random(&mut rng)).collect());
            let g = LinPoly::new(&ctx, (0..3).map(|_| ctx.random(&mut rng)).collect());
            let (x, y) = (ctx.random(&mut rng), ctx.random(&mut rng));
            let (al, be) = (rng.gen_range(0..q), rng.gen_range(0..q));
            let lhs = f.evaluate(&ctx.add(&ctx.scale(&x, al), &ctx.scale(&y, be)));
            let rhs = ctx.add(&ctx.scale(&f.evaluate(&x), al), &ctx.scale(&f.evaluate(&y), be));
            assert_eq!(lhs, rhs);
            assert_eq!(f.skew_mul(&g).evaluate(&x), f.evaluate(&g.evaluate(&x)));
        }
    }
}

#[test]
fn kernels() {
    let ctx = FieldCtx::new(3, 5).unwrap();
    assert!(LinPoly::x(&ctx).kernel().is_empty());
    let frob_minus_id = LinPoly::new(&ctx, vec![ctx.neg(&ctx.one()), ctx.one()]);
    let k = frob_minus_id.kernel();
    assert_eq!(k.len(), 1);
    assert_eq!(ctx.frobenius(&k[0], 1), k[0]);

    let ctx = FieldCtx::new(2, 8).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    for _ in 0..50 {
        let f = LinPoly::new(
            &ctx,
            vec![ctx.random(&mut rng), ctx.random(&mut rng), ctx.random_nonzero(&mut rng)],
        );
        let k = f.kernel();
        assert!(k.len() <= 2);
        assert!(k.iter().all(|v| f.evaluate(v).is_zero()));
        assert_eq!(f.rank() + k.len(), 8);
    }
}

#[test]
fn ring_axioms() {
    let ctx = FieldCtx::new(5, 3).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let rand_poly = |rng: &mut ChaCha20Rng| {
        let len = rng.gen_range(0..4);
        LinPoly::new(&ctx, (0..len).map(|_| ctx.random(rng)).collect())
    };
    for _ in 0..50 {
        let (a, b, c) = (rand_poly(&mut rng), rand_poly(&mut rng), rand_poly(&mut rng));
        assert_eq!(a.skew_mul(&b).skew_mul(&c), a.skew_mul(&b.skew_mul(&c)));
        assert_eq!(a.skew_mul(&b.add(&c)), a.skew_mul(&b).add(&a.skew_mul(&c)));
        assert_eq!(a.sub(&a), LinPoly::zero(&ctx));
        assert_eq!(LinPoly::x(&ctx).skew_mul(&a), a);
        assert_eq!(a.skew_mul(&LinPoly::x(&ctx)), a);
    }
}
