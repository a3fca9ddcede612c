//! The GPT public-key encryption scheme over Gabidulin or twisted Gabidulin codes.
//!
//! The public generator is `G_pub = S (X | G_sec) P` where `X` is a `k x λ`
//! distortion matrix of rank `s` and `P` is an invertible column scrambler
//! over the base field.

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::decoder::{max_radius, DecodeStatus, Decoder};
use crate::ffield::{FieldCtx, Fqm};
use crate::fqmlinalg::{rank_fq, vec_add, vec_mul, vec_mul_fq, LinalgError, MatFq, MatFqm};
use crate::rankcodes::{
    moore_matrix, prw_parameters, random_evaluation_vector, twisted_generator, Code, CodeError,
    TwistParams,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GptError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("message has length {got}, expected {expected}")]
    MessageLength { expected: usize, got: usize },
    #[error("ciphertext has length {got}, expected {expected}")]
    CiphertextLength { expected: usize, got: usize },
    #[error("decoding failed: {0:?}")]
    Decode(DecodeStatus),
    #[error("decoded word is not an encoding of any message")]
    NotAnEncoding,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Instantiation {
    Gabidulin,
    Twisted { ell: usize },
}

#[derive(Clone, Debug)]
pub struct GptParams {
    pub field: Arc<FieldCtx>,
    pub n: usize,
    pub k: usize,
    pub lambda: usize,
    pub s: usize,
    pub instantiation: Instantiation,
    /// Error rank; `None` selects the decoding radius of the secret code.
    pub t: Option<usize>,
    /// Use `S = I`, i.e. publish `(X | G_sec) P`.
    pub omit_s: bool,
}

impl GptParams {
    pub fn new(field: Arc<FieldCtx>, n: usize, k: usize, lambda: usize, s: usize) -> Self {
        GptParams {
            field,
            n,
            k,
            lambda,
            s,
            instantiation: Instantiation::Gabidulin,
            t: None,
            omit_s: false,
        }
    }

    pub fn twisted(mut self, ell: usize) -> Self {
        self.instantiation = Instantiation::Twisted { ell };
        self
    }

    pub fn with_t(mut self, t: usize) -> Self {
        self.t = Some(t);
        self
    }

    /// Public code length `n + λ`.
    pub fn length(&self) -> usize {
        self.n + self.lambda
    }

    pub fn validate(&self) -> Result<(), GptError> {
        let m = self.field.m();
        if !(0 < self.k && self.k < self.n && self.n <= m) {
            return Err(GptError::Params(format!(
                "need 0 < k < n <= m, got k = {}, n = {}, m = {m}",
                self.k, self.n
            )));
        }
        if !(1 <= self.s && self.s <= self.lambda && self.s <= self.k) {
            return Err(GptError::Params(format!(
                "need 1 <= s <= min(lambda, k), got s = {}, lambda = {}",
                self.s, self.lambda
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct GptSecretKey {
    pub params: GptParams,
    pub g: Vec<Fqm>,
    pub tw: Option<TwistParams>,
    pub s: MatFqm,
    pub x: MatFqm,
    pub p: MatFq,
    g_sec: MatFqm,
    p_inv: MatFq,
}

#[derive(Clone, Debug)]
pub struct GptPublicKey {
    pub params: GptParams,
    pub g_pub: MatFqm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub c: Vec<Fqm>,
}

impl GptSecretKey {
    /// Assembles a key from its parts. `params.t` must already be set.
    pub fn from_parts(
        params: GptParams,
        g: Vec<Fqm>,
        tw: Option<TwistParams>,
        s: MatFqm,
        x: MatFqm,
        p: MatFq,
    ) -> Result<Self, GptError> {
        let ctx = &params.field;
        let (n, k, lambda) = (params.n, params.k, params.lambda);
        if g.len() != n || s.rows() != k || s.cols() != k || x.rows() != k || x.cols() != lambda {
            return Err(GptError::Params(
                "secret component shapes do not match".into(),
            ));
        }
        if p.rows() != n + lambda || p.cols() != n + lambda {
            return Err(GptError::Params("scrambler has the wrong size".into()));
        }
        let g_sec = match &tw {
            Some(tw) => twisted_generator(ctx, &g, k, tw)?,
            None => moore_matrix(ctx, &g, k)?,
        };
        let p_inv = p
            .inverse()
            .ok_or_else(|| GptError::Params("scrambler is singular".into()))?;
        if s.rank() != k {
            return Err(GptError::Params("S is singular".into()));
        }
        Ok(GptSecretKey {
            params,
            g,
            tw,
            s,
            x,
            p,
            g_sec,
            p_inv,
        })
    }

    /// Generator of the secret code (Moore or twisted Moore matrix).
    pub fn g_sec(&self) -> &MatFqm {
        &self.g_sec
    }

    pub fn secret_code(&self) -> Code {
        Code::from_generator(&self.g_sec)
    }

    pub fn p_inv(&self) -> &MatFq {
        &self.p_inv
    }

    pub fn public_key(&self) -> GptPublicKey {
        let g_pub = self.s.mul(&self.x.hstack(&self.g_sec)).mul_fq(&self.p);
        GptPublicKey {
            params: self.params.clone(),
            g_pub,
        }
    }

    pub fn decrypt(&self, ct: &Ciphertext) -> Result<Vec<Fqm>, GptError> {
        let ctx = &self.params.field;
        let (n, lambda) = (self.params.n, self.params.lambda);
        if ct.c.len() != n + lambda {
            return Err(GptError::CiphertextLength {
                expected: n + lambda,
                got: ct.c.len(),
            });
        }
        let unscrambled = vec_mul_fq(ctx, &ct.c, &self.p_inv);
        let tail = &unscrambled[lambda..];
        let t = self.params.t.unwrap_or(0);
        let res = Decoder::new(&self.secret_code(), t).decode(tail);
        let codeword = res.codeword().ok_or(GptError::Decode(res.status()))?;
        let sg = self.s.mul(&self.g_sec);
        sg.solve_left(codeword).ok_or(GptError::NotAnEncoding)
    }
}

impl GptPublicKey {
    pub fn new(params: GptParams, g_pub: MatFqm) -> Self {
        GptPublicKey { params, g_pub }
    }

    pub fn code(&self) -> Code {
        Code::from_generator(&self.g_pub)
    }

    pub fn encrypt<R: Rng + ?Sized>(
        &self,
        msg: &[Fqm],
        rng: &mut R,
    ) -> Result<Ciphertext, GptError> {
        let ctx = &self.params.field;
        let t = self.params.t.unwrap_or(0);
        let e = random_error(ctx, self.params.length(), t, rng)?;
        self.encrypt_with_error(msg, &e)
    }

    pub fn encrypt_with_error(&self, msg: &[Fqm], e: &[Fqm]) -> Result<Ciphertext, GptError> {
        let ctx = &self.params.field;
        if msg.len() != self.params.k {
            return Err(GptError::MessageLength {
                expected: self.params.k,
                got: msg.len(),
            });
        }
        let c = vec_add(ctx, &vec_mul(ctx, msg, &self.g_pub), e);
        Ok(Ciphertext { c })
    }
}

/// Random vector of length `len` and rank exactly `t`, built as `β A` with a
/// rank-`t` support basis `β` and a rank-`t` matrix `A` over the base field.
pub fn random_error<R: Rng + ?Sized>(
    ctx: &Arc<FieldCtx>,
    len: usize,
    t: usize,
    rng: &mut R,
) -> Result<Vec<Fqm>, GptError> {
    if t == 0 {
        return Ok(vec![ctx.zero(); len]);
    }
    if t > len.min(ctx.m()) {
        return Err(GptError::Params(format!(
            "no vector of length {len} has rank {t}"
        )));
    }
    loop {
        let beta = random_evaluation_vector(ctx, t, rng)?;
        let a = MatFq::random(ctx.q(), t, len, rng);
        let e = vec_mul_fq(ctx, &beta, &a);
        if rank_fq(ctx, &e) == t {
            return Ok(e);
        }
    }
}

pub fn random_message<R: Rng + ?Sized>(ctx: &FieldCtx, k: usize, rng: &mut R) -> Vec<Fqm> {
    (0..k).map(|_| ctx.random(rng)).collect()
}

/// Samples a key pair. The returned parameters carry the resolved error rank.
pub fn keygen<R: Rng + ?Sized>(
    params: &GptParams,
    rng: &mut R,
) -> Result<(GptSecretKey, GptPublicKey), GptError> {
    params.validate()?;
    let ctx = &params.field;
    let g = random_evaluation_vector(ctx, params.n, rng)?;
    let tw = match params.instantiation {
        Instantiation::Gabidulin => None,
        Instantiation::Twisted { ell } => Some(prw_parameters(ctx, params.n, params.k, ell, rng)?),
    };
    keygen_from(params, g, tw, rng)
}

/// Key pair for a twisted instantiation with caller-chosen twist parameters.
pub fn keygen_with_twist<R: Rng + ?Sized>(
    params: &GptParams,
    tw: TwistParams,
    rng: &mut R,
) -> Result<(GptSecretKey, GptPublicKey), GptError> {
    params.validate()?;
    if params.instantiation != (Instantiation::Twisted { ell: tw.ell() }) {
        return Err(GptError::Params(format!(
            "twist has {} hooks but the instantiation is {:?}",
            tw.ell(),
            params.instantiation
        )));
    }
    tw.validate(params.n, params.k)?;
    let g = random_evaluation_vector(&params.field, params.n, rng)?;
    keygen_from(params, g, Some(tw), rng)
}

fn keygen_from<R: Rng + ?Sized>(
    params: &GptParams,
    g: Vec<Fqm>,
    tw: Option<TwistParams>,
    rng: &mut R,
) -> Result<(GptSecretKey, GptPublicKey), GptError> {
    let ctx = &params.field;
    let (n, k, lambda) = (params.n, params.k, params.lambda);
    let s = if params.omit_s {
        MatFqm::identity(ctx, k)
    } else {
        MatFqm::random_invertible(ctx, k, rng)?
    };
    let x = MatFqm::random_rank(ctx, k, lambda, params.s, rng)?;
    let p = MatFq::random_gl(ctx.q(), n + lambda, rng)?;

    let mut resolved = params.clone();
    let g_sec = match &tw {
        Some(tw) => twisted_generator(ctx, &g, k, tw)?,
        None => moore_matrix(ctx, &g, k)?,
    };
    let radius = match params.instantiation {
        Instantiation::Gabidulin => (n - k) / 2,
        Instantiation::Twisted { .. } => max_radius(&Code::from_generator(&g_sec)),
    };
    match params.t {
        Some(t) if t > radius => {
            return Err(GptError::Params(format!(
                "error rank {t} exceeds the decoding radius {radius}"
            )))
        }
        Some(_) => {}
        None => resolved.t = Some(radius),
    }
    let sk = GptSecretKey::from_parts(resolved, g, tw, s, x, p)?;
    let pk = sk.public_key();
    Ok((sk, pk))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn small_round_trip() {
        let ctx = FieldCtx::new(2, 16).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        let params = GptParams::new(ctx.clone(), 14, 6, 3, 1);
        let (sk, pk) = keygen(&params, &mut rng).unwrap();
        assert_eq!(pk.params.t, Some(4));
        for _ in 0..10 {
            let msg = random_message(&ctx, 6, &mut rng);
            let ct = pk.encrypt(&msg, &mut rng).unwrap();
            assert_eq!(sk.decrypt(&ct).unwrap(), msg);
        }
    }

    #[test]
    fn error_has_exact_rank() {
        let ctx = FieldCtx::new(2, 12).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for t in 0..6 {
            let e = random_error(&ctx, 15, t, &mut rng).unwrap();
            assert_eq!(rank_fq(&ctx, &e), t);
        }
    }
}
