use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rankmetric::{ArithOp, FieldCtx, FieldError};

/// Schoolbook product in F_2[x] / (f), `f` given with its leading 1.
fn oracle_mul_gf2(a: u64, b: u64, f: u64, m: u32) -> u64 {
    let mut acc = 0u128;
    for i in 0..m {
        if b >> i & 1 == 1 {
            acc ^= (a as u128) << i;
        }
    }
    for d in (m..2 * m).rev() {
        if acc >> d & 1 == 1 {
            acc ^= (f as u128) << (d - m);
        }
    }
    acc as u64
}

fn modulus_bits(ctx: &FieldCtx) -> u64 {
    ctx.modulus()
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &c)| acc | (c as u64) << i)
}

#[test]
fn x_times_x_squared_in_f8() {
    let ctx = FieldCtx::with_modulus(2, 3, &[1, 1, 0, 1]).unwrap();
    let x = ctx.from_coeffs(&[0, 1, 0]).unwrap();
    let x2 = ctx.from_coeffs(&[0, 0, 1]).unwrap();
    assert_eq!(ctx.mul(&x, &x2), ctx.from_coeffs(&[1, 1, 0]).unwrap());
    assert_eq!(ctx.mul(&ctx.one(), &ctx.one()), ctx.one());
}

#[test]
fn least_modulus_for_small_binary_fields() {
    assert_eq!(FieldCtx::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
    assert_eq!(FieldCtx::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
    // x^8 + x^4 + x^3 + x + 1 is the least irreducible octic over F_2
    assert_eq!(
        FieldCtx::new(2, 8).unwrap().modulus(),
        &[1, 1, 0, 1, 1, 0, 0, 0, 1]
    );
    assert_eq!(FieldCtx::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
}

#[test]
fn binary_multiplication_matches_schoolbook() {
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    for m in [1usize, 7, 13, 31, 32, 33, 63] {
        let ctx = FieldCtx::new(2, m).unwrap();
        let f = modulus_bits(&ctx);
        for _ in 0..200 {
            let a = ctx.random(&mut rng);
            let b = ctx.random(&mut rng);
            let av = ctx.coeffs(&a).iter().enumerate().fold(0u64, |s, (i, &c)| s | (c as u64) << i);
            let bv = ctx.coeffs(&b).iter().enumerate().fold(0u64, |s, (i, &c)| s | (c as u64) << i);
            assert_eq!(ctx.mul(&a, &b), ctx.from_u64(oracle_mul_gf2(av, bv, f, m as u32)), "m = {m}");
        }
    }
}

#[test]
fn field_axioms_on_several_fields() {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    for (q, m) in [(2, 1), (2, 9), (2, 64), (2, 104), (2, 200), (3, 7), (7, 4), (65521, 2)] {
        let ctx = FieldCtx::new(q, m).unwrap();
        for _ in 0..50 {
            let (a, b, c) = (ctx.random(&mut rng), ctx.random(&mut rng), ctx.random(&mut rng));
            assert_eq!(ctx.mul(&a, &b), ctx.mul(&b, &a));
            assert_eq!(ctx.mul(&ctx.mul(&a, &b), &c), ctx.mul(&a, &ctx.mul(&b, &c)));
            assert_eq!(ctx.mul(&a, &ctx.add(&b, &c)), ctx.add(&ctx.mul(&a, &b), &ctx.mul(&a, &c)));
            assert_eq!(ctx.add(&a, &ctx.neg(&a)), ctx.zero());
            assert_eq!(ctx.sub(&ctx.add(&a, &b), &b), a);
            assert_eq!(ctx.square(&a), ctx.mul(&a, &a));
            if !a.is_zero() {
                let inv = ctx.inv(&a).unwrap();
                assert_eq!(ctx.mul(&a, &inv), ctx.one());
                assert_eq!(ctx.div(&b, &a).unwrap(), ctx.mul(&b, &inv));
            }
        }
    }
}

#[test]
fn arith_reports_errors() {
    let ctx = FieldCtx::new(2, 8).unwrap();
    let other = FieldCtx::new(2, 8).unwrap();
    let a = ctx.generator();
    assert_eq!(ctx.arith(&a, &ctx.zero(), ArithOp::Div), Err(FieldError::DivisionByZero));
    assert_eq!(ctx.arith(&a, &other.one(), ArithOp::Add), Err(FieldError::ContextMismatch));
    assert_eq!(ctx.arith(&a, &a, ArithOp::Sub).unwrap(), ctx.zero());
    assert!(ctx.inv(&ctx.zero()).is_none());
}

#[test]
fn rejects_bad_contexts() {
    assert_eq!(FieldCtx::new(4, 3).unwrap_err(), FieldError::NotPrime(4));
    assert_eq!(FieldCtx::new(2, 0).unwrap_err(), FieldError::ZeroDegree);
    assert!(matches!(FieldCtx::new(2, 257), Err(FieldError::TooLarge { .. })));
    assert!(matches!(FieldCtx::new(65537, 2), Err(FieldError::TooLarge { .. }) | Err(FieldError::NotPrime(_))));
    assert_eq!(
        FieldCtx::with_modulus(2, 2, &[1, 0, 1]).unwrap_err(),
        FieldError::Reducible
    );
    assert!(FieldCtx::with_modulus(2, 3, &[1, 1, 1]).is_err());
}

#[test]
fn frobenius_laws() {
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    for (q, m) in [(2, 11), (3, 5), (2, 104)] {
        let ctx = FieldCtx::new(q, m).unwrap();
        for _ in 0..30 {
            let a = ctx.random(&mut rng);
            let b = ctx.random(&mut rng);
            assert_eq!(ctx.frobenius(&a, 0), a);
            assert_eq!(ctx.frobenius(&a, m as i64), a);
            assert_eq!(ctx.frobenius(&ctx.frobenius(&a, 3), -3), a);
            assert_eq!(
                ctx.frobenius(&ctx.add(&a, &b), 1),
                ctx.add(&ctx.frobenius(&a, 1), &ctx.frobenius(&b, 1))
            );
            assert_eq!(ctx.frobenius(&a, 2), ctx.pow(&a, (q as u128).pow(2)));
        }
    }
}

#[test]
fn degenerate_field_is_the_prime_field() {
    let ctx = FieldCtx::new(2, 1).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    for _ in 0..100 {
        let a = ctx.random(&mut rng);
        assert!(a == ctx.zero() || a == ctx.one());
    }
    assert_eq!(ctx.elements().count(), 2);
}

#[test]
fn sampling_is_reproducible() {
    let ctx = FieldCtx::new(3, 9).unwrap();
    let draw = |seed| {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        (0..20).map(|_| ctx.to_hex(&ctx.random(&mut rng))).collect::<Vec<_>>()
    };
    assert_eq!(draw(11), draw(11));
    assert_ne!(draw(11), draw(12));
}

#[test]
fn uniform_over_f8_chi_squared() {
    let ctx = FieldCtx::new(2, 3).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let mut counts = [0f64; 8];
    let draws = 10_000;
    for _ in 0..draws {
        let a = ctx.random(&mut rng);
        let idx = ctx.coeffs(&a).iter().rev().fold(0usize, |s, &c| s * 2 + c as usize);
        counts[idx] += 1.0;
    }
    let expected = draws as f64 / 8.0;
    let chi2: f64 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
    // 99% quantile of chi-squared with 7 degrees of freedom
    assert!(chi2 < 18.475, "chi2 = {chi2}");
}

#[test]
fn hex_encoding_is_fixed_width() {
    let ctx = FieldCtx::new(3, 4).unwrap();
    assert_eq!(ctx.hex_width(), 2); // 3^4 - 1 = 80 = 0x50
    let a = ctx.from_coeffs(&[2, 0, 0, 1]).unwrap(); // 2 + 27 = 29
    assert_eq!(ctx.to_hex(&a), "1d");
    assert_eq!(ctx.from_hex("1d").unwrap(), a);
    assert!(ctx.from_hex("51").is_err());
    assert!(ctx.from_hex("zz").is_err());
}
