//! Row spaces over `F_{q^m}` given by generator matrices.
//!
//! Results are returned in canonical form (trimmed RREF), so equality of
//! subspaces is equality of the returned matrices.

use super::{LinalgError, MatFqm};

fn check(a: &MatFqm, b: &MatFqm) -> Result<(), LinalgError> {
    if a.cols() != b.cols() {
        return Err(LinalgError::DimensionMismatch);
    }
    if a.ctx().id() != b.ctx().id() {
        return Err(LinalgError::ContextMismatch);
    }
    Ok(())
}

pub fn sum(a: &MatFqm, b: &MatFqm) -> Result<MatFqm, LinalgError> {
    check(a, b)?;
    Ok(a.vstack(b).canonical())
}

/// `A ∩ B`, computed as the dual of `A⊥ + B⊥`.
pub fn intersection(a: &MatFqm, b: &MatFqm) -> Result<MatFqm, LinalgError> {
    check(a, b)?;
    let duals = a.right_kernel().vstack(&b.right_kernel());
    Ok(duals.right_kernel().canonical())
}

pub fn equal(a: &MatFqm, b: &MatFqm) -> Result<bool, LinalgError> {
    check(a, b)?;
    Ok(a.canonical() == b.canonical())
}

/// Whether the row space of `b` lies inside that of `a`.
pub fn contains(a: &MatFqm, b: &MatFqm) -> Result<bool, LinalgError> {
    check(a, b)?;
    Ok(a.vstack(b).rank() == a.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{FieldCtx, Fqm};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use std::collections::HashSet;

    fn span(ctx: &FieldCtx, g: &MatFqm) -> HashSet<Vec<Fqm>> {
        let elems: Vec<Fqm> = ctx.elements().collect();
        let mut out = HashSet::new();
        for &x in &elems {
            for &y in &elems {
                let v: Vec<Fqm> = (0..g.cols())
                    .map(|j| ctx.add(&ctx.mul(&x, &g.get(0, j)), &ctx.mul(&y, &g.get(1, j))))
                    .collect();
                out.insert(v);
            }
        }
        out
    }

    #[test]
    fn intersection_matches_enumeration() {
        let ctx = FieldCtx::new(2, 3).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        for _ in 0..20 {
            let a = MatFqm::random(&ctx, 2, 3, &mut rng);
            let b = MatFqm::random(&ctx, 2, 3, &mut rng);
            if a.rank() < 2 || b.rank() < 2 {
                continue;
            }
            let common = span(&ctx, &a).intersection(&span(&ctx, &b)).count();
            let dim = intersection(&a, &b).unwrap().rows();
            assert_eq!(8usize.pow(dim as u32), common);
        }
    }

    #[test]
    fn trivial_cases_and_errors() {
        let ctx = FieldCtx::new(2, 5).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let a = MatFqm::random(&ctx, 3, 6, &mut rng);
        assert!(equal(&intersection(&a, &a).unwrap(), &a).unwrap());
        let zero = MatFqm::zeros(&ctx, 0, 6);
        assert_eq!(intersection(&a, &zero).unwrap().rows(), 0);
        assert!(contains(&a, &zero).unwrap());
        let short = MatFqm::random(&ctx, 3, 5, &mut rng);
        assert_eq!(sum(&a, &short).unwrap_err(), LinalgError::DimensionMismatch);
    }
}
