//! Key-recovery-free message attacks on GPT public keys.
//!
//! Both attacks start from `Λ_i(C_pub)`. The classic one looks for a column
//! transform that isolates the distortion columns. The extension computes the
//! right stabilizer algebra of `Λ_i(C_pub)`; when the code splits, a rank-`n`
//! idempotent `F` of that algebra projects the public code onto the secret
//! part, and `y F` is decoded in `C_pub F`.

mod idempotent;
mod overbeck;
mod stabilizer;

use std::time::Instant;

use thiserror::Error;

pub use idempotent::{
    find_nontrivial_idempotent, find_rank_n_idempotent, idempotent_from, IdempotentError,
};
pub use overbeck::attack_overbeck;
pub use stabilizer::{stabilizer, stabilizes, StabilizerAlgebra};

use crate::decoder::{DecodeStatus, Decoder};
use crate::ffield::Fqm;
use crate::fqmlinalg::{vec_mul_fq, MatFq};
use crate::gpt::{Ciphertext, GptPublicKey};
use crate::rankcodes::Code;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttackMode {
    OverbeckClassic,
    Extension,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AttackFailure {
    #[error("no split found in the stabilizer of Λ_i(C_pub) for i <= {0}")]
    NoSplit(usize),
    #[error(transparent)]
    Idempotent(#[from] IdempotentError),
    #[error("decoding failed: {0:?}")]
    Decode(DecodeStatus),
    #[error("projected public generator has rank {rank}, expected {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("decoded word is not an encoding of any message")]
    NotAnEncoding,
    #[error("dual of Λ_i(C_pub) has dimension {got}, expected {expected}")]
    DistortionNotEliminated { expected: usize, got: usize },
    #[error("Λ_{0} of the secret code already fills the space")]
    NoDistinguisher(usize),
    #[error("found {found} base-field vectors orthogonal to the dual, need {needed}")]
    ScramblerSpace { found: usize, needed: usize },
    #[error("no invertible column transform found")]
    NoInvertibleScrambler,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AttackOutcome {
    Recovered(Vec<Fqm>),
    Failed(AttackFailure),
}

/// Wall-clock time spent in each phase, in milliseconds.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PhaseTimings {
    pub lambda_ms: f64,
    pub stabilizer_ms: f64,
    pub idempotent_ms: f64,
    pub decode_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug)]
pub struct AttackReport {
    pub mode: AttackMode,
    pub i_used: Option<usize>,
    pub stab_dim: Option<usize>,
    pub idempotent: Option<MatFq>,
    pub outcome: AttackOutcome,
    pub timings: PhaseTimings,
}

impl AttackReport {
    pub(crate) fn new(mode: AttackMode) -> Self {
        AttackReport {
            mode,
            i_used: None,
            stab_dim: None,
            idempotent: None,
            outcome: AttackOutcome::Failed(AttackFailure::NoSplit(0)),
            timings: PhaseTimings::default(),
        }
    }

    pub fn recovered(&self) -> Option<&[Fqm]> {
        match &self.outcome {
            AttackOutcome::Recovered(m) => Some(m),
            AttackOutcome::Failed(_) => None,
        }
    }

    pub fn failure(&self) -> Option<&AttackFailure> {
        match &self.outcome {
            AttackOutcome::Recovered(_) => None,
            AttackOutcome::Failed(f) => Some(f),
        }
    }
}

pub(crate) fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1000.0
}

/// Default largest `i` tried: `n - k - 1`.
pub fn default_i_max(pk: &GptPublicKey) -> usize {
    (pk.params.n - pk.params.k).saturating_sub(1).max(1)
}

/// Decodes `y` in the code spanned by `gen` (rank `k` required) and solves for
/// the message.
pub(crate) fn decode_and_solve(
    gen: &crate::fqmlinalg::MatFqm,
    y: &[Fqm],
    k: usize,
    t: usize,
) -> Result<Vec<Fqm>, AttackFailure> {
    let rank = gen.rank();
    if rank < k {
        return Err(AttackFailure::RankDeficient { rank, k });
    }
    let res = Decoder::new(&Code::from_generator(gen), t).decode(y);
    let codeword = res.codeword().ok_or(AttackFailure::Decode(res.status()))?;
    gen.solve_left(codeword).ok_or(AttackFailure::NotAnEncoding)
}

/// The stabilizer-algebra attack. Uses the least `i <= i_max` for which the
/// stabilizer of `Λ_i(C_pub)` has dimension at least 2.
pub fn attack_extension(pk: &GptPublicKey, ct: &Ciphertext, i_max: usize) -> AttackReport {
    let start = Instant::now();
    let mut report = AttackReport::new(AttackMode::Extension);
    let outcome = run_extension(pk, ct, i_max, &mut report);
    report.outcome = match outcome {
        Ok(m) => AttackOutcome::Recovered(m),
        Err(f) => AttackOutcome::Failed(f),
    };
    report.timings.total_ms = ms(start);
    report
}

fn run_extension(
    pk: &GptPublicKey,
    ct: &Ciphertext,
    i_max: usize,
    report: &mut AttackReport,
) -> Result<Vec<Fqm>, AttackFailure> {
    let params = &pk.params;
    let ctx = &params.field;
    let big_n = params.length();
    let public = pk.code();
    let mut found = None;
    for i in 1..=i_max {
        let t0 = Instant::now();
        let lam = public.lambda(i);
        report.timings.lambda_ms += ms(t0);
        if lam.k() == big_n {
            break;
        }
        let t0 = Instant::now();
        let alg = stabilizer(&lam);
        report.timings.stabilizer_ms += ms(t0);
        report.i_used = Some(i);
        report.stab_dim = Some(alg.dim());
        if alg.dim() >= 2 {
            found = Some(alg);
            break;
        }
    }
    let alg = found.ok_or(AttackFailure::NoSplit(i_max))?;

    let t0 = Instant::now();
    let f = find_rank_n_idempotent(&alg, params.n);
    report.timings.idempotent_ms = ms(t0);
    let f = f?;
    report.idempotent = Some(f.clone());

    let t0 = Instant::now();
    let gf = pk.g_pub.mul_fq(&f);
    let yf = vec_mul_fq(ctx, &ct.c, &f);
    let res = decode_and_solve(&gf, &yf, params.k, params.t.unwrap_or(0));
    report.timings.decode_ms = ms(t0);
    res
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitProbe {
    Split {
        stab_dim: usize,
        idempotent_rank: usize,
    },
    NotSplit {
        stab_dim: usize,
    },
}

/// Whether a code splits, judged from its right stabilizer algebra.
pub fn split_probe(code: &Code) -> SplitProbe {
    let alg = stabilizer(code);
    let stab_dim = alg.dim();
    if stab_dim < 2 {
        return SplitProbe::NotSplit { stab_dim };
    }
    match find_nontrivial_idempotent(&alg) {
        Ok(e) => SplitProbe::Split {
            stab_dim,
            idempotent_rank: e.rank(),
        },
        Err(_) => SplitProbe::NotSplit { stab_dim },
    }
}
