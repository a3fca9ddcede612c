use std::time::Instant;

use rand::Rng;

use super::{decode_and_solve, ms, AttackFailure, AttackMode, AttackOutcome, AttackReport};
use crate::ffield::Fqm;
use crate::fqmlinalg::{expand_fq_system, vec_mul_fq, MatFq, SAMPLING_ATTEMPTS};
use crate::gpt::{Ciphertext, GptPublicKey, Instantiation};

/// The classic attack at a fixed `i`.
///
/// If `Λ_i(C_pub)` has a dual of the expected dimension, every `T` over `F_q`
/// whose first `λ` rows are orthogonal to that dual moves the distortion into
/// the first `λ` columns. Those columns are dropped and the rest is decoded.
pub fn attack_overbeck<R: Rng + ?Sized>(
    pk: &GptPublicKey,
    ct: &Ciphertext,
    i: usize,
    rng: &mut R,
) -> AttackReport {
    let start = Instant::now();
    let mut report = AttackReport::new(AttackMode::OverbeckClassic);
    report.i_used = Some(i);
    let outcome = run(pk, ct, i, rng, &mut report);
    report.outcome = match outcome {
        Ok(m) => AttackOutcome::Recovered(m),
        Err(f) => AttackOutcome::Failed(f),
    };
    report.timings.total_ms = ms(start);
    report
}

fn run<R: Rng + ?Sized>(
    pk: &GptPublicKey,
    ct: &Ciphertext,
    i: usize,
    rng: &mut R,
    report: &mut AttackReport,
) -> Result<Vec<Fqm>, AttackFailure> {
    let params = &pk.params;
    let ctx = &params.field;
    let (n, k, lambda) = (params.n, params.k, params.lambda);
    let big_n = params.length();
    let q = ctx.q();
    let ell = match params.instantiation {
        Instantiation::Gabidulin => 0,
        Instantiation::Twisted { ell } => ell,
    };
    let secret_dim = k + i + ell * (i + 1);
    if secret_dim >= n {
        return Err(AttackFailure::NoDistinguisher(i));
    }
    let expected = n - secret_dim;

    let t0 = Instant::now();
    let dual = pk.code().lambda(i).dual();
    report.timings.lambda_ms = ms(t0);
    let got = dual.k();
    if got != expected {
        return Err(AttackFailure::DistortionNotEliminated { expected, got });
    }

    let t0 = Instant::now();
    let orth = expand_fq_system(ctx, dual.generator()).right_kernel();
    if orth.rows() < lambda {
        return Err(AttackFailure::ScramblerSpace {
            found: orth.rows(),
            needed: lambda,
        });
    }
    let mut t_inv = None;
    for _ in 0..SAMPLING_ATTEMPTS {
        let head = MatFq::random(q, lambda, orth.rows(), rng).mul(&orth);
        let tail = MatFq::random(q, big_n - lambda, big_n, rng);
        if let Some(inv) = head.vstack(&tail).inverse() {
            t_inv = Some(inv);
            break;
        }
    }
    let t_inv = t_inv.ok_or(AttackFailure::NoInvertibleScrambler)?;
    report.timings.stabilizer_ms = ms(t0);

    let t0 = Instant::now();
    let g = pk.g_pub.mul_fq(&t_inv).columns(lambda..big_n);
    let y = vec_mul_fq(ctx, &ct.c, &t_inv)[lambda..].to_vec();
    let res = decode_and_solve(&g, &y, k, params.t.unwrap_or(0));
    report.timings.decode_ms = ms(t0);
    res
}
