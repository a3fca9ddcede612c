//! Decoding of Gabidulin-like codes from a generator matrix alone.
//!
//! Step 1 finds a nonzero q-polynomial `P` of q-degree at most `t` with
//! `P(y) ∈ Λ_t(C)`. When the error is small enough `P` vanishes on it, so its
//! kernel contains the error support. Step 2 solves for the error over `F_q`
//! inside that support.

use std::sync::Arc;

use thiserror::Error;

use crate::ffield::{FieldCtx, Fqm};
use crate::fqmlinalg::{inner, rank_fq, solve_fq_affine, vec_frobenius, vec_sub, MatFqm};
use crate::qpoly::LinPoly;
use crate::rankcodes::Code;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeStatus {
    Decoded,
    NoAnnihilator,
    NoErrorSolution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeResult {
    Decoded { codeword: Vec<Fqm>, error: Vec<Fqm> },
    NoAnnihilator,
    NoErrorSolution,
}

impl DecodeResult {
    pub fn status(&self) -> DecodeStatus {
        match self {
            DecodeResult::Decoded { .. } => DecodeStatus::Decoded,
            DecodeResult::NoAnnihilator => DecodeStatus::NoAnnihilator,
            DecodeResult::NoErrorSolution => DecodeStatus::NoErrorSolution,
        }
    }

    pub fn codeword(&self) -> Option<&[Fqm]> {
        match self {
            DecodeResult::Decoded { codeword, .. } => Some(codeword),
            _ => None,
        }
    }
}

/// A decoder for a fixed code and radius. Parity checks are computed once.
#[derive(Clone, Debug)]
pub struct Decoder {
    ctx: Arc<FieldCtx>,
    n: usize,
    t: usize,
    parity: MatFqm,
    lambda_parity: MatFqm,
    retry: bool,
}

impl Decoder {
    pub fn new(code: &Code, t: usize) -> Self {
        Decoder {
            ctx: code.ctx().clone(),
            n: code.n(),
            t,
            parity: code.dual().generator().clone(),
            lambda_parity: code.lambda(t).dual().generator().clone(),
            retry: false,
        }
    }

    /// When set, every basis vector of the step-1 solution space is tried
    /// before reporting that no error fits.
    pub fn with_retry(mut self, retry: bool) -> Self {
        self.retry = retry;
        self
    }

    pub fn radius(&self) -> usize {
        self.t
    }

    /// Basis of the q-polynomials `P` of q-degree `<= t` with `P(y) ∈ Λ_t(C)`.
    pub fn annihilators(&self, y: &[Fqm]) -> Vec<LinPoly> {
        assert_eq!(y.len(), self.n);
        let f = &self.ctx;
        let shifts: Vec<Vec<Fqm>> = (0..=self.t)
            .map(|i| vec_frobenius(f, y, i as i64))
            .collect();
        let h = &self.lambda_parity;
        let sys = MatFqm::from_fn(f, h.rows(), self.t + 1, |r, i| {
            inner(f, h.row(r), &shifts[i])
        });
        let ker = sys.right_kernel();
        (0..ker.rows())
            .map(|i| LinPoly::new(f, ker.row(i).to_vec()))
            .collect()
    }

    /// The first step-1 solution, if any.
    pub fn annihilator(&self, y: &[Fqm]) -> Option<LinPoly> {
        self.annihilators(y).into_iter().next()
    }

    pub fn decode(&self, y: &[Fqm]) -> DecodeResult {
        let candidates = self.annihilators(y);
        if candidates.is_empty() {
            return DecodeResult::NoAnnihilator;
        }
        let tries = if self.retry { candidates.len() } else { 1 };
        for p in candidates.iter().take(tries) {
            if let Some(error) = self.error_in_support(y, &p.kernel()) {
                let codeword = vec_sub(&self.ctx, y, &error);
                return DecodeResult::Decoded { codeword, error };
            }
        }
        DecodeResult::NoErrorSolution
    }

    /// Finds `e` with coordinates in `span_{F_q}(support)` and `y - e` in the code.
    pub fn error_in_support(&self, y: &[Fqm], support: &[Fqm]) -> Option<Vec<Fqm>> {
        let f = &self.ctx;
        let h = &self.parity;
        let n = self.n;
        let r = support.len();
        let syndrome: Vec<Fqm> = (0..h.rows()).map(|i| inner(f, h.row(i), y)).collect();
        if r == 0 {
            return syndrome.iter().all(Fqm::is_zero).then(|| vec![f.zero(); n]);
        }
        // unknown a[j*r + rho] is the coefficient of support[rho] in e_j
        let sys = MatFqm::from_fn(f, h.rows(), n * r, |i, col| {
            f.mul(&h.get(i, col / r), &support[col % r])
        });
        let (a, _) = solve_fq_affine(f, &sys, &syndrome)?;
        let e = (0..n)
            .map(|j| {
                (0..r).fold(f.zero(), |acc, rho| {
                    f.add(&acc, &f.scale(&support[rho], a[j * r + rho]))
                })
            })
            .collect();
        Some(e)
    }
}

/// Decodes `y` in `code` with error rank at most `t`.
pub fn decode(code: &Code, y: &[Fqm], t: usize) -> DecodeResult {
    Decoder::new(code, t).decode(y)
}

/// Largest `t` with `dim Λ_t(C) + t <= n`.
pub fn max_radius(code: &Code) -> usize {
    let n = code.n();
    if code.k() >= n {
        return 0;
    }
    let mut t = 0;
    let mut acc = code.clone();
    loop {
        let next = Code::from_generator(&code.generator().vstack(&acc.generator().frobenius(1)));
        if next.k() + t + 1 > n {
            return t;
        }
        t += 1;
        acc = next;
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BruteForceError {
    #[error("support enumeration needs about {0:.0} work units, above the 2^22 limit")]
    Infeasible(f64),
}

/// Work-unit limit for [`brute_force_decode`].
pub const BRUTE_FORCE_LIMIT: f64 = (1u64 << 22) as f64;

/// Number of `r`-dimensional subspaces of `F_q^m`.
pub fn gaussian_binomial(q: u32, m: usize, r: usize) -> f64 {
    if r > m {
        return 0.0;
    }
    let q = q as f64;
    (0..r).fold(1.0, |acc, i| {
        acc * (q.powi((m - i) as i32) - 1.0) / (q.powi((i + 1) as i32) - 1.0)
    })
}

/// Reference decoder: tries every support of dimension `0..=t` in order and
/// returns the first error that fits. Supports are visited by dimension, then
/// by pivot set, then by the free entries of their RREF basis.
pub fn brute_force_decode(
    code: &Code,
    y: &[Fqm],
    t: usize,
) -> Result<DecodeResult, BruteForceError> {
    let ctx = code.ctx();
    let (q, m, n) = (ctx.q(), ctx.m(), code.n());
    let work: f64 = (0..=t)
        .map(|r| gaussian_binomial(q, m, r) * (r * n).max(1) as f64)
        .sum();
    if work > BRUTE_FORCE_LIMIT {
        return Err(BruteForceError::Infeasible(work));
    }
    let dec = Decoder::new(code, t);
    for r in 0..=t.min(m) {
        let mut found = None;
        for_each_rref_basis(q, m, r, |basis| {
            let support: Vec<Fqm> = basis.iter().map(|c| ctx.from_coeffs_unchecked(c)).collect();
            match dec.error_in_support(y, &support) {
                Some(e) => {
                    found = Some(e);
                    false
                }
                None => true,
            }
        });
        if let Some(error) = found {
            debug_assert!(rank_fq(ctx, &error) <= r);
            let codeword = vec_sub(ctx, y, &error);
            return Ok(DecodeResult::Decoded { codeword, error });
        }
    }
    Ok(DecodeResult::NoErrorSolution)
}

/// Calls `visit` on the RREF basis of every `r`-dimensional subspace of
/// `F_q^m` until it returns `false`.
fn for_each_rref_basis(q: u32, m: usize, r: usize, mut visit: impl FnMut(&[Vec<u32>]) -> bool) {
    let mut pivots: Vec<usize> = (0..r).collect();
    loop {
        let free: Vec<(usize, usize)> = (0..r)
            .flat_map(|i| {
                let p = &pivots;
                (p[i] + 1..m)
                    .filter(move |j| !p.contains(j))
                    .map(move |j| (i, j))
            })
            .collect();
        let mut counter = vec![0u32; free.len()];
        loop {
            let mut basis = vec![vec![0u32; m]; r];
            for (i, &p) in pivots.iter().enumerate() {
                basis[i][p] = 1;
            }
            for (&(i, j), &v) in free.iter().zip(&counter) {
                basis[i][j] = v;
            }
            if !visit(&basis) {
                return;
            }
            let mut pos = 0;
            while pos < counter.len() {
                counter[pos] += 1;
                if counter[pos] < q {
                    break;
                }
                counter[pos] = 0;
                pos += 1;
            }
            if pos == counter.len() {
                break;
            }
        }
        // next r-subset of 0..m in lexicographic order
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if pivots[i] < m - r + i {
                pivots[i] += 1;
                for j in i + 1..r {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_enumeration_counts_subspaces() {
        for (q, m, r) in [(2, 4, 2), (3, 3, 1), (2, 5, 3), (2, 3, 0)] {
            let mut count = 0u64;
            for_each_rref_basis(q, m, r, |_| {
                count += 1;
                true
            });
            assert_eq!(
                count as f64,
                gaussian_binomial(q, m, r).round(),
                "q={q} m={m} r={r}"
            );
        }
    }
}
