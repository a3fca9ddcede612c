//! JSON file formats. Field elements are written as fixed-width big-endian hex
//! of their coefficient vector read as a base-`q` integer.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attack::{AttackMode, AttackOutcome, AttackReport};
use crate::ffield::{FieldCtx, FieldError, Fqm};
use crate::fqmlinalg::{MatFq, MatFqm};
use crate::gpt::{Ciphertext, GptParams, GptPublicKey, GptSecretKey, Instantiation};
use crate::qpoly::LinPoly;
use crate::rankcodes::{Code, TwistParams};

#[derive(Debug, Error)]
pub enum SerialError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("malformed document: {0}")]
    Shape(String),
}

fn shape(msg: impl Into<String>) -> SerialError {
    SerialError::Shape(msg.into())
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldJson {
    pub q: u32,
    pub m: usize,
    pub modulus: Vec<u32>,
}

impl FieldJson {
    pub fn from_ctx(ctx: &FieldCtx) -> Self {
        FieldJson {
            q: ctx.q(),
            m: ctx.m(),
            modulus: ctx.modulus().to_vec(),
        }
    }

    pub fn to_ctx(&self) -> Result<Arc<FieldCtx>, SerialError> {
        Ok(FieldCtx::with_modulus(self.q, self.m, &self.modulus)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatFqmJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatFqJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u32>,
}

pub fn vec_to_hex(ctx: &FieldCtx, v: &[Fqm]) -> Vec<String> {
    v.iter().map(|a| ctx.to_hex(a)).collect()
}

pub fn vec_from_hex(ctx: &FieldCtx, v: &[String]) -> Result<Vec<Fqm>, SerialError> {
    v.iter().map(|s| Ok(ctx.from_hex(s)?)).collect()
}

impl MatFqmJson {
    pub fn from_mat(a: &MatFqm) -> Self {
        MatFqmJson {
            rows: a.rows(),
            cols: a.cols(),
            entries: vec_to_hex(a.ctx(), a.entries()),
        }
    }

    pub fn to_mat(&self, ctx: &Arc<FieldCtx>) -> Result<MatFqm, SerialError> {
        if self.entries.len() != self.rows * self.cols {
            return Err(shape("matrix entry count does not match rows * cols"));
        }
        let v = vec_from_hex(ctx, &self.entries)?;
        Ok(MatFqm::from_fn(ctx, self.rows, self.cols, |i, j| {
            v[i * self.cols + j]
        }))
    }
}

impl MatFqJson {
    pub fn from_mat(a: &MatFq) -> Self {
        MatFqJson {
            rows: a.rows(),
            cols: a.cols(),
            entries: a.to_rows().concat(),
        }
    }

    pub fn to_mat(&self, q: u32) -> Result<MatFq, SerialError> {
        if self.entries.len() != self.rows * self.cols {
            return Err(shape("matrix entry count does not match rows * cols"));
        }
        if self.entries.iter().any(|&v| v >= q) {
            return Err(shape("matrix entry not reduced mod q"));
        }
        Ok(MatFq::from_fn(q, self.rows, self.cols, |i, j| {
            self.entries[i * self.cols + j]
        }))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ParamsJson {
    pub field: FieldJson,
    pub n: usize,
    pub k: usize,
    pub lambda: usize,
    pub s: usize,
    /// `"gabidulin"` or `"twisted"`.
    pub instantiation: String,
    #[serde(default)]
    pub ell: usize,
    pub t: Option<usize>,
    #[serde(default)]
    pub omit_s: bool,
}

impl ParamsJson {
    pub fn from_params(p: &GptParams) -> Self {
        let (instantiation, ell) = match p.instantiation {
            Instantiation::Gabidulin => ("gabidulin".to_string(), 0),
            Instantiation::Twisted { ell } => ("twisted".to_string(), ell),
        };
        ParamsJson {
            field: FieldJson::from_ctx(&p.field),
            n: p.n,
            k: p.k,
            lambda: p.lambda,
            s: p.s,
            instantiation,
            ell,
            t: p.t,
            omit_s: p.omit_s,
        }
    }

    pub fn to_params(&self) -> Result<GptParams, SerialError> {
        let instantiation = match self.instantiation.as_str() {
            "gabidulin" => Instantiation::Gabidulin,
            "twisted" => Instantiation::Twisted { ell: self.ell },
            other => return Err(shape(format!("unknown instantiation {other:?}"))),
        };
        Ok(GptParams {
            field: self.field.to_ctx()?,
            n: self.n,
            k: self.k,
            lambda: self.lambda,
            s: self.s,
            instantiation,
            t: self.t,
            omit_s: self.omit_s,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TwistJson {
    pub h: Vec<usize>,
    pub t: Vec<usize>,
    pub eta: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[allow(non_snake_case)]
pub struct SecretJson {
    pub g: Vec<String>,
    pub tw: Option<TwistJson>,
    pub S: MatFqmJson,
    pub X: MatFqmJson,
    pub P: MatFqJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[allow(non_snake_case)]
pub struct PublicJson {
    pub G_pub: MatFqmJson,
}

/// A key file. Public exports leave `secret` out entirely.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct KeyFile {
    pub params: ParamsJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secret: Option<SecretJson>,
    pub public: PublicJson,
}

impl KeyFile {
    pub fn from_secret(sk: &GptSecretKey) -> Self {
        let ctx = &sk.params.field;
        let pk = sk.public_key();
        let tw = sk.tw.as_ref().map(|tw| TwistJson {
            h: tw.h.clone(),
            t: tw.t.clone(),
            eta: vec_to_hex(ctx, &tw.eta),
        });
        KeyFile {
            params: ParamsJson::from_params(&sk.params),
            secret: Some(SecretJson {
                g: vec_to_hex(ctx, &sk.g),
                tw,
                S: MatFqmJson::from_mat(&sk.s),
                X: MatFqmJson::from_mat(&sk.x),
                P: MatFqJson::from_mat(&sk.p),
            }),
            public: PublicJson {
                G_pub: MatFqmJson::from_mat(&pk.g_pub),
            },
        }
    }

    pub fn from_public(pk: &GptPublicKey) -> Self {
        KeyFile {
            params: ParamsJson::from_params(&pk.params),
            secret: None,
            public: PublicJson {
                G_pub: MatFqmJson::from_mat(&pk.g_pub),
            },
        }
    }

    pub fn public_key(&self) -> Result<GptPublicKey, SerialError> {
        let params = self.params.to_params()?;
        let g_pub = self.public.G_pub.to_mat(&params.field)?;
        if g_pub.rows() != params.k || g_pub.cols() != params.length() {
            return Err(shape("public generator has the wrong shape"));
        }
        Ok(GptPublicKey::new(params, g_pub))
    }

    pub fn secret_key(&self) -> Result<GptSecretKey, SerialError> {
        let sec = self
            .secret
            .as_ref()
            .ok_or_else(|| shape("key file has no secret part"))?;
        let params = self.params.to_params()?;
        let ctx = params.field.clone();
        let tw = match &sec.tw {
            Some(tw) => Some(TwistParams {
                h: tw.h.clone(),
                t: tw.t.clone(),
                eta: vec_from_hex(&ctx, &tw.eta)?,
            }),
            None => None,
        };
        let g = vec_from_hex(&ctx, &sec.g)?;
        let s = sec.S.to_mat(&ctx)?;
        let x = sec.X.to_mat(&ctx)?;
        let p = sec.P.to_mat(ctx.q())?;
        GptSecretKey::from_parts(params, g, tw, s, x, p).map_err(|e| shape(e.to_string()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CiphertextJson {
    pub c: Vec<String>,
}

impl CiphertextJson {
    pub fn from_ct(ctx: &FieldCtx, ct: &Ciphertext) -> Self {
        CiphertextJson {
            c: vec_to_hex(ctx, &ct.c),
        }
    }

    pub fn to_ct(&self, ctx: &FieldCtx) -> Result<Ciphertext, SerialError> {
        Ok(Ciphertext {
            c: vec_from_hex(ctx, &self.c)?,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MessageJson {
    pub m: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CodeJson {
    pub field: FieldJson,
    pub n: usize,
    pub k: usize,
    pub gen: Vec<String>,
}

impl CodeJson {
    pub fn from_code(c: &Code) -> Self {
        CodeJson {
            field: FieldJson::from_ctx(c.ctx()),
            n: c.n(),
            k: c.k(),
            gen: vec_to_hex(c.ctx(), c.generator().entries()),
        }
    }

    pub fn to_code(&self) -> Result<Code, SerialError> {
        let ctx = self.field.to_ctx()?;
        let m = MatFqmJson {
            rows: self.k,
            cols: self.n,
            entries: self.gen.clone(),
        }
        .to_mat(&ctx)?;
        Ok(Code::from_generator(&m))
    }
}

pub fn linpoly_to_json(p: &LinPoly) -> Vec<String> {
    vec_to_hex(p.ctx(), p.coeffs())
}

pub fn linpoly_from_json(ctx: &Arc<FieldCtx>, v: &[String]) -> Result<LinPoly, SerialError> {
    Ok(LinPoly::new(ctx, vec_from_hex(ctx, v)?))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TimingsJson {
    pub lambda: f64,
    pub stabilizer: f64,
    pub idempotent: f64,
    pub decode: f64,
    pub total: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[allow(non_snake_case)]
pub struct ReportJson {
    /// `"overbeck"` or `"extension"`.
    pub mode: String,
    pub success: bool,
    pub i_used: Option<usize>,
    pub stab_dim: Option<usize>,
    pub F: Option<MatFqJson>,
    pub recovered: Option<Vec<String>>,
    pub failure: Option<String>,
    pub timings_ms: TimingsJson,
}

impl ReportJson {
    pub fn from_report(ctx: &FieldCtx, r: &AttackReport) -> Self {
        let (recovered, failure) = match &r.outcome {
            AttackOutcome::Recovered(m) => (Some(vec_to_hex(ctx, m)), None),
            AttackOutcome::Failed(f) => (None, Some(f.to_string())),
        };
        ReportJson {
            mode: match r.mode {
                AttackMode::OverbeckClassic => "overbeck",
                AttackMode::Extension => "extension",
            }
            .to_string(),
            success: recovered.is_some(),
            i_used: r.i_used,
            stab_dim: r.stab_dim,
            F: r.idempotent.as_ref().map(MatFqJson::from_mat),
            recovered,
            failure,
            timings_ms: TimingsJson {
                lambda: r.timings.lambda_ms,
                stabilizer: r.timings.stabilizer_ms,
                idempotent: r.timings.idempotent_ms,
                decode: r.timings.decode_ms,
                total: r.timings.total_ms,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpt::keygen;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn key_file_round_trip() {
        let ctx = FieldCtx::new(2, 20).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        let params = GptParams::new(ctx, 17, 6, 3, 1).twisted(1);
        let (sk, pk) = keygen(&params, &mut rng).unwrap();
        let text = serde_json::to_string(&KeyFile::from_secret(&sk)).unwrap();
        let back: KeyFile = serde_json::from_str(&text).unwrap();
        let sk2 = back.secret_key().unwrap();
        let pk2 = back.public_key().unwrap();
        let ctx2 = &sk2.params.field;
        assert_eq!(
            vec_to_hex(ctx2, pk2.g_pub.entries()),
            vec_to_hex(&pk.params.field, pk.g_pub.entries())
        );
        assert_eq!(sk2.p, sk.p);
        assert_eq!(sk2.tw.as_ref().unwrap().h, sk.tw.as_ref().unwrap().h);

        let public = serde_json::to_string(&KeyFile::from_public(&pk)).unwrap();
        assert!(!public.contains("secret"));
    }
}
