//! Linear algebra over `F_{q^m}` and `F_q`, and the bridge between the two.

mod matfq;
mod matfqm;
pub mod subspace;

use std::sync::Arc;

use thiserror::Error;

pub use matfq::{EchelonFq, MatFq, RrefFq};
pub use matfqm::{MatFqm, RrefFqm};

use crate::ffield::{FieldCtx, Fqm};

/// Rejection-sampling cap for invertible and full-rank draws.
pub const SAMPLING_ATTEMPTS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix or vector dimensions do not match")]
    DimensionMismatch,
    #[error("operands belong to different field contexts")]
    ContextMismatch,
    #[error("no {rows}x{cols} matrix has rank {rank}")]
    ImpossibleRank {
        rank: usize,
        rows: usize,
        cols: usize,
    },
    #[error("rejection sampling gave up after {SAMPLING_ATTEMPTS} attempts")]
    SamplingExhausted,
}

/// Coordinates of `v` over `F_q`: an `n x m` matrix whose row `j` is the
/// coefficient vector of `v_j`.
pub fn fq_coordinates(ctx: &FieldCtx, v: &[Fqm]) -> MatFq {
    let mut a = MatFq::zeros(ctx.q(), v.len(), ctx.m());
    let w = ctx.limb_count();
    for (j, x) in v.iter().enumerate() {
        a.row_words_mut(j)[..w].copy_from_slice(&x.limbs()[..w]);
    }
    a
}

/// Rank of `v` in the rank metric: `dim_{F_q}` of the span of its coordinates.
pub fn rank_fq(ctx: &FieldCtx, v: &[Fqm]) -> usize {
    fq_coordinates(ctx, v).rank()
}

/// `F_q`-basis of the support of `v`, as field elements.
pub fn support_basis(ctx: &FieldCtx, v: &[Fqm]) -> Vec<Fqm> {
    let r = fq_coordinates(ctx, v).rref();
    (0..r.rank)
        .map(|i| ctx.from_coeffs_unchecked(&r.matrix.row(i)))
        .collect()
}

/// Splits each `F_{q^m}`-linear form `sum_j a[r][j] u_j` with `F_q` unknowns
/// into `m` coordinate forms over `F_q`. Row `r*m + d` holds coordinate `d`.
pub fn expand_fq_system(ctx: &FieldCtx, a: &MatFqm) -> MatFq {
    let m = ctx.m();
    MatFq::from_fn(ctx.q(), a.rows() * m, a.cols(), |row, j| {
        ctx.coeff(&a.get(row / m, j), row % m)
    })
}

/// Solves `a * u^T = b^T` for `u` over `F_q`. Returns a particular solution and
/// a kernel basis of the homogeneous part.
pub fn solve_fq_affine(ctx: &FieldCtx, a: &MatFqm, b: &[Fqm]) -> Option<(Vec<u32>, MatFq)> {
    assert_eq!(a.rows(), b.len());
    let m = ctx.m();
    let sys = expand_fq_system(ctx, a);
    let rhs: Vec<u32> = (0..a.rows() * m)
        .map(|row| ctx.coeff(&b[row / m], row % m))
        .collect();
    sys.solve_affine(&rhs)
}

pub fn vec_add(ctx: &FieldCtx, a: &[Fqm], b: &[Fqm]) -> Vec<Fqm> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| ctx.add(x, y)).collect()
}

pub fn vec_sub(ctx: &FieldCtx, a: &[Fqm], b: &[Fqm]) -> Vec<Fqm> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| ctx.sub(x, y)).collect()
}

pub fn vec_scale(ctx: &FieldCtx, c: &Fqm, a: &[Fqm]) -> Vec<Fqm> {
    a.iter().map(|x| ctx.mul(c, x)).collect()
}

pub fn vec_frobenius(ctx: &FieldCtx, a: &[Fqm], i: i64) -> Vec<Fqm> {
    a.iter().map(|x| ctx.frobenius(x, i)).collect()
}

pub fn inner(ctx: &FieldCtx, a: &[Fqm], b: &[Fqm]) -> Fqm {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(ctx.zero(), |acc, (x, y)| ctx.add(&acc, &ctx.mul(x, y)))
}

/// Row vector times an `F_{q^m}` matrix.
pub fn vec_mul(ctx: &Arc<FieldCtx>, v: &[Fqm], a: &MatFqm) -> Vec<Fqm> {
    assert_eq!(v.len(), a.rows());
    let mut out = vec![ctx.zero(); a.cols()];
    for (l, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            let y = a.get(l, j);
            if !y.is_zero() {
                *o = ctx.add(o, &ctx.mul(x, &y));
            }
        }
    }
    out
}

/// Row vector times an `F_q` matrix.
pub fn vec_mul_fq(ctx: &FieldCtx, v: &[Fqm], p: &MatFq) -> Vec<Fqm> {
    assert_eq!(v.len(), p.rows());
    let mut out = vec![ctx.zero(); p.cols()];
    for (l, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            let c = p.get(l, j);
            if c != 0 {
                *o = ctx.add(o, &ctx.scale(x, c));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_basis_vector_in_f8() {
        let ctx = FieldCtx::new(2, 3).unwrap();
        let w = ctx.generator();
        let v = vec![ctx.one(), w, ctx.mul(&w, &w)];
        assert_eq!(rank_fq(&ctx, &v), 3);
        assert_eq!(rank_fq(&ctx, &[w, w, w]), 1);
        assert_eq!(rank_fq(&ctx, &[ctx.zero(); 4]), 0);
    }

    #[test]
    fn expansion_of_small_constraints() {
        let ctx = FieldCtx::new(2, 2).unwrap();
        let w = ctx.generator();
        let a = MatFqm::from_rows(&ctx, 2, &[vec![ctx.one(), w]]).unwrap();
        assert_eq!(expand_fq_system(&ctx, &a).right_kernel().rows(), 0);

        let ctx = FieldCtx::new(5, 3).unwrap();
        let x = ctx.from_u64(17);
        let a = MatFqm::from_rows(&ctx, 2, &[vec![x, x]]).unwrap();
        let k = expand_fq_system(&ctx, &a).right_kernel();
        assert_eq!(k, MatFq::from_rows(5, &[vec![4, 1]]));
    }
}
