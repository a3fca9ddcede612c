//! Shared fixtures for the benchmarks.

use rankmetric::gpt::{keygen, random_message};
use rankmetric::rng::seeded;
use rankmetric::{Ciphertext, FieldCtx, GptParams, GptPublicKey};

/// A key and ciphertext for `q = 2` with the given shape.
pub fn gpt_instance(
    m: usize,
    n: usize,
    k: usize,
    lambda: usize,
    s: usize,
    ell: usize,
    seed: u64,
) -> (GptPublicKey, Ciphertext) {
    let ctx = FieldCtx::new(2, m).expect("valid field");
    let mut params = GptParams::new(ctx.clone(), n, k, lambda, s);
    if ell > 0 {
        params = params.twisted(ell);
    }
    let mut rng = seeded(seed);
    let (_, pk) = keygen(&params, &mut rng).expect("valid parameters");
    let msg = random_message(&ctx, k, &mut rng);
    let ct = pk.encrypt(&msg, &mut rng).expect("message has length k");
    (pk, ct)
}
