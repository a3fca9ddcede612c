use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rankmetric::decoder::{brute_force_decode, gaussian_binomial, max_radius, BruteForceError};
use rankmetric::fqmlinalg::{rank_fq, vec_add, vec_mul};
use rankmetric::gpt::{random_error, random_message};
use rankmetric::rankcodes::{gabidulin, prw_parameters, random_evaluation_vector, twisted_gabidulin};
use rankmetric::{Code, DecodeResult, Decoder, FieldCtx};

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

#[test]
fn zero_error_decodes_to_itself() {
    let ctx = FieldCtx::new(2, 20).unwrap();
    let mut r = rng(1);
    let g = random_evaluation_vector(&ctx, 16, &mut r).unwrap();
    let code = gabidulin(&ctx, &g, 8).unwrap();
    let c = vec_mul(&ctx, &random_message(&ctx, 8, &mut r), code.generator());
    match Decoder::new(&code, 4).decode(&c) {
        DecodeResult::Decoded { codeword, error } => {
            assert_eq!(codeword, c);
            assert!(error.iter().all(|e| e.is_zero()));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn gabidulin_decodes_up_to_half_distance() {
    let mut r = rng(2);
    for (q, m, n, k) in [(2, 20, 16, 6), (2, 40, 36, 16), (3, 9, 9, 3), (2, 104, 26, 18)] {
        let ctx = FieldCtx::new(q, m).unwrap();
        let t = (n - k) / 2;
        for _ in 0..10 {
            let g = random_evaluation_vector(&ctx, n, &mut r).unwrap();
            let code = gabidulin(&ctx, &g, k).unwrap();
            assert_eq!(max_radius(&code), t);
            let c = vec_mul(&ctx, &random_message(&ctx, k, &mut r), code.generator());
            let e = random_error(&ctx, n, t, &mut r).unwrap();
            let res = Decoder::new(&code, t).decode(&vec_add(&ctx, &c, &e));
            assert_eq!(res.codeword(), Some(&c[..]), "q={q} m={m} n={n} k={k}");
            let ann = Decoder::new(&code, t).annihilator(&vec_add(&ctx, &c, &e)).unwrap();
            assert!(e.iter().all(|x| ann.evaluate(x).is_zero()));
        }
    }
}

#[test]
fn agrees_with_support_enumeration() {
    let ctx = FieldCtx::new(2, 6).unwrap();
    let mut r = rng(3);
    for t in 0..=2 {
        for _ in 0..5 {
            let g = random_evaluation_vector(&ctx, 6, &mut r).unwrap();
            let code = gabidulin(&ctx, &g, 2).unwrap();
            let c = vec_mul(&ctx, &random_message(&ctx, 2, &mut r), code.generator());
            let e = random_error(&ctx, 6, t, &mut r).unwrap();
            let y = vec_add(&ctx, &c, &e);
            let fast = Decoder::new(&code, t).decode(&y);
            let slow = brute_force_decode(&code, &y, t).unwrap();
            assert_eq!(fast.codeword(), Some(&c[..]));
            assert_eq!(slow.codeword(), Some(&c[..]));
        }
    }
}

#[test]
fn brute_force_refuses_large_searches() {
    let ctx = FieldCtx::new(2, 20).unwrap();
    let g = random_evaluation_vector(&ctx, 16, &mut rng(4)).unwrap();
    let code = gabidulin(&ctx, &g, 6).unwrap();
    let y = vec![ctx.zero(); 16];
    assert!(matches!(brute_force_decode(&code, &y, 5), Err(BruteForceError::Infeasible(_))));
    assert_eq!(gaussian_binomial(2, 4, 2), 35.0);
    assert_eq!(gaussian_binomial(3, 3, 1), 13.0);
}

#[test]
fn radius_of_special_codes() {
    let ctx = FieldCtx::new(2, 32).unwrap();
    assert_eq!(max_radius(&Code::full(&ctx, 10)), 0);
    let mut r = rng(5);
    for _ in 0..10 {
        let g = random_evaluation_vector(&ctx, 26, &mut r).unwrap();
        let tw = prw_parameters(&ctx, 26, 18, 2, &mut r).unwrap();
        let code = twisted_gabidulin(&ctx, &g, 18, &tw).unwrap();
        assert!(max_radius(&code) >= (26 - 18 - 2) / (2 + 2));
    }
}

#[test]
fn beyond_the_radius_is_not_an_error() {
    let ctx = FieldCtx::new(2, 12).unwrap();
    let mut r = rng(6);
    let g = random_evaluation_vector(&ctx, 10, &mut r).unwrap();
    let code = gabidulin(&ctx, &g, 4).unwrap();
    for _ in 0..10 {
        let c = vec_mul(&ctx, &random_message(&ctx, 4, &mut r), code.generator());
        let e = random_error(&ctx, 10, 5, &mut r).unwrap();
        let res = Decoder::new(&code, 3).decode(&vec_add(&ctx, &c, &e));
        if let DecodeResult::Decoded { codeword, error } = res {
            assert!(code.contains_word(&codeword));
            assert!(rank_fq(&ctx, &error) <= 3);
        }
    }
}
