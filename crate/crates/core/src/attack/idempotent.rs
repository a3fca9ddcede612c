use thiserror::Error;

use super::StabilizerAlgebra;
use crate::ffield::inv_mod;
use crate::fqmlinalg::MatFq;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdempotentError {
    #[error("stabilizer has dimension {0}, at least 2 is needed")]
    TooSmall(usize),
    #[error("no singular element found in the stabilizer")]
    NoSingularElement,
    #[error("singular element R does not satisfy R^2 = cR with c nonzero")]
    NotProportional,
    #[error("idempotent has rank {rank}, expected {want} or {complement}")]
    WrongRank {
        rank: usize,
        want: usize,
        complement: usize,
    },
    #[error(
        "stabilizer of dimension {0} has no usable idempotent among the searched elements; \
         a general decomposition (Friedl-Ronyai) would be required"
    )]
    GeneralDecompositionRequired(usize),
}

/// Largest number of algebra elements tried by exhaustive enumeration.
const ENUMERATION_LIMIT: f64 = 65536.0;

/// For a singular `R` with `R^2 = cR`, `c != 0`, returns the idempotent `R / c`.
pub fn idempotent_from(r: &MatFq) -> Option<MatFq> {
    let n = r.rows();
    let r2 = r.mul(r);
    let (i, j) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| r.get(i, j) != 0)?;
    let q = r.q();
    let c = mul_inv(r2.get(i, j), r.get(i, j), q);
    if c == 0 || r2 != r.scale(c) {
        return None;
    }
    Some(r.scale(inv_mod(c, q)))
}

fn mul_inv(a: u32, b: u32, q: u32) -> u32 {
    ((a as u64 * inv_mod(b, q) as u64) % q as u64) as u32
}

/// Elements `V`, `U + xV` (`x ∈ F_q`) of a 2-dimensional span: one per line.
fn pencil<'a>(u: &'a MatFq, v: &'a MatFq) -> impl Iterator<Item = MatFq> + 'a {
    let q = u.q();
    std::iter::once(v.clone()).chain((0..q).map(move |x| u.add(&v.scale(x))))
}

fn is_singular(a: &MatFq) -> bool {
    a.rank() < a.rows()
}

/// Idempotent `E` of the algebra with `accept(rank E)`, or its complement.
fn search(
    alg: &StabilizerAlgebra,
    accept: impl Fn(usize) -> Option<bool>,
) -> Result<MatFq, IdempotentError> {
    let d = alg.dim();
    if d < 2 {
        return Err(IdempotentError::TooSmall(d));
    }
    let big_n = alg.n_total;
    let q = alg.basis[0].q();
    let id = MatFq::identity(q, big_n);
    let finish = |e: MatFq| -> Option<MatFq> {
        match accept(e.rank())? {
            true => Some(e),
            false => Some(id.sub(&e)),
        }
    };

    if d == 2 {
        let (u, v) = (&alg.basis[0], &alg.basis[1]);
        let r = pencil(u, v)
            .find(is_singular)
            .ok_or(IdempotentError::NoSingularElement)?;
        let e = idempotent_from(&r).ok_or(IdempotentError::NotProportional)?;
        let rank = e.rank();
        return finish(e).ok_or(IdempotentError::WrongRank {
            rank,
            want: 0,
            complement: 0,
        });
    }

    let candidates: Box<dyn Iterator<Item = MatFq>> = if (q as f64).powi(d as i32)
        <= ENUMERATION_LIMIT
    {
        Box::new(projective_points(q, d).map(|coef| {
            coef.iter()
                .zip(&alg.basis)
                .filter(|(&c, _)| c != 0)
                .fold(MatFq::zeros(q, big_n, big_n), |acc, (&c, b)| {
                    acc.add(&b.scale(c))
                })
        }))
    } else {
        Box::new((0..d).flat_map(move |i| {
            (i + 1..d).flat_map(move |j| pencil(&alg.basis[i], &alg.basis[j]).collect::<Vec<_>>())
        }))
    };
    for r in candidates {
        if r.is_zero() || !is_singular(&r) {
            continue;
        }
        if let Some(e) = idempotent_from(&r) {
            if let Some(found) = finish(e) {
                return Ok(found);
            }
        }
    }
    Err(IdempotentError::GeneralDecompositionRequired(d))
}

/// Coefficient vectors in `F_q^d` whose first nonzero entry is 1.
fn projective_points(q: u32, d: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (q as u64).pow(d as u32);
    (1..total).filter_map(move |mut v| {
        let mut c = Vec::with_capacity(d);
        for _ in 0..d {
            c.push((v % q as u64) as u32);
            v /= q as u64;
        }
        (c.iter().find(|&&x| x != 0) == Some(&1)).then_some(c)
    })
}

/// A rank-`n` idempotent of the stabilizer algebra.
pub fn find_rank_n_idempotent(alg: &StabilizerAlgebra, n: usize) -> Result<MatFq, IdempotentError> {
    let big_n = alg.n_total;
    let res = search(alg, |rank| {
        if rank == n {
            Some(true)
        } else if rank == big_n - n {
            Some(false)
        } else {
            None
        }
    });
    match res {
        Err(IdempotentError::WrongRank { rank, .. }) => Err(IdempotentError::WrongRank {
            rank,
            want: n,
            complement: big_n - n,
        }),
        other => other,
    }
}

/// Any idempotent other than `0` and `I`.
pub fn find_nontrivial_idempotent(alg: &StabilizerAlgebra) -> Result<MatFq, IdempotentError> {
    let big_n = alg.n_total;
    search(alg, |rank| (rank > 0 && rank < big_n).then_some(true))
}
