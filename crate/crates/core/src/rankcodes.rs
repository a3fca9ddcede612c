//! Rank-metric codes held as canonical generator matrices.

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::ffield::{FieldCtx, Fqm};
use crate::fqmlinalg::{rank_fq, subspace, vec_frobenius, LinalgError, MatFq, MatFqm};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodeError {
    #[error("evaluation vector has rank {got} over F_q, expected {want}")]
    NotFullRank { got: usize, want: usize },
    #[error("invalid dimensions: need {0}")]
    Dimensions(String),
    #[error("invalid twist parameters: {0}")]
    Twist(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("exhaustive search over {0} codewords is too large")]
    TooLarge(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An `F_{q^m}`-linear code of length `n`, stored as its trimmed RREF generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Code {
    gen: MatFqm,
}

impl Code {
    /// Row space of `g`. Dependent rows are allowed and dropped.
    pub fn from_generator(g: &MatFqm) -> Self {
        Code { gen: g.canonical() }
    }

    /// The whole space `F_{q^m}^n`.
    pub fn full(ctx: &Arc<FieldCtx>, n: usize) -> Self {
        Code {
            gen: MatFqm::identity(ctx, n),
        }
    }

    /// A uniformly random `[n, k]` code.
    pub fn random<R: Rng + ?Sized>(ctx: &Arc<FieldCtx>, n: usize, k: usize, rng: &mut R) -> Self {
        assert!(k <= n, "dimension {k} exceeds length {n}");
        loop {
            let c = Self::from_generator(&MatFqm::random(ctx, k, n, rng));
            if c.k() == k {
                return c;
            }
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.gen.ctx()
    }

    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    pub fn generator(&self) -> &MatFqm {
        &self.gen
    }

    pub fn contains_word(&self, v: &[Fqm]) -> bool {
        assert_eq!(v.len(), self.n());
        let w = MatFqm::row_vector(self.ctx(), v);
        self.gen.vstack(&w).rank() == self.k()
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Code) -> bool {
        subspace::contains(&self.gen, &other.gen).unwrap_or(false)
    }

    /// `Λ_i(C) = C + C^{[1]} + ... + C^{[i]}`.
    pub fn lambda(&self, i: usize) -> Code {
        let mut acc = self.clone();
        for _ in 0..i {
            if acc.k() == self.n() {
                break;
            }
            acc = Code::from_generator(&self.gen.vstack(&acc.gen.frobenius(1)));
        }
        acc
    }

    /// Dual with respect to `<x, y> = sum x_i y_i`.
    pub fn dual(&self) -> Code {
        Code::from_generator(&self.gen.right_kernel())
    }

    /// `C^{[j]}`; negative `j` applies the inverse Frobenius.
    pub fn frobenius_shift(&self, j: i64) -> Code {
        Code::from_generator(&self.gen.frobenius(j))
    }

    /// Largest code with the same `Λ_s` as `self`: `∩_{j=0..s} Λ_s(C)^{[-j]}`.
    pub fn closure(&self, s: usize) -> Code {
        let l = self.lambda(s);
        let mut acc = l.gen.clone();
        for j in 1..=s {
            let shifted = l.gen.frobenius(-(j as i64));
            acc = subspace::intersection(&acc, &shifted).expect("same length and field");
        }
        Code { gen: acc }
    }

    /// `dim Λ_i(C)` for `i = 0..=i_max`.
    pub fn dim_profile(&self, i_max: usize) -> Vec<usize> {
        let mut dims = vec![self.k()];
        let mut acc = self.clone();
        for _ in 0..i_max {
            if acc.k() < self.n() {
                acc = Code::from_generator(&self.gen.vstack(&acc.gen.frobenius(1)));
            }
            dims.push(acc.k());
        }
        dims
    }

    /// `C · P` for a matrix over the base field.
    pub fn right_mul(&self, p: &MatFq) -> Code {
        Code::from_generator(&self.gen.mul_fq(p))
    }

    /// Minimum rank distance by enumerating every nonzero codeword.
    pub fn min_distance_exhaustive(&self) -> Result<usize, CodeError> {
        let ctx = self.ctx();
        let total = ctx.order_f64().powi(self.k() as i32);
        if total > (1u64 << 20) as f64 {
            return Err(CodeError::TooLarge(total));
        }
        let elems: Vec<Fqm> = ctx.elements().collect();
        let k = self.k();
        let mut idx = vec![0usize; k];
        let mut best = self.n().min(ctx.m()) + 1;
        loop {
            // next message in base-q^m counter order
            let mut pos = 0;
            while pos < k {
                idx[pos] += 1;
                if idx[pos] < elems.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
            let msg: Vec<Fqm> = idx.iter().map(|&i| elems[i]).collect();
            let word = crate::fqmlinalg::vec_mul(ctx, &msg, &self.gen);
            best = best.min(rank_fq(ctx, &word));
        }
        Ok(best)
    }
}

/// Moore matrix with rows `g, g^{[1]}, ..., g^{[k-1]}`.
pub fn moore_matrix(ctx: &Arc<FieldCtx>, g: &[Fqm], k: usize) -> Result<MatFqm, CodeError> {
    let n = g.len();
    let r = rank_fq(ctx, g);
    if r != n {
        return Err(CodeError::NotFullRank { got: r, want: n });
    }
    if k > n {
        return Err(CodeError::Dimensions(format!("k = {k} <= n = {n}")));
    }
    let rows: Vec<Vec<Fqm>> = (0..k).map(|i| vec_frobenius(ctx, g, i as i64)).collect();
    Ok(MatFqm::from_rows(ctx, n, &rows)?)
}

fn check_gabidulin_sizes(ctx: &FieldCtx, n: usize, k: usize) -> Result<(), CodeError> {
    if k == 0 || k >= n || n > ctx.m() {
        return Err(CodeError::Dimensions(format!(
            "0 < k < n <= m, got k = {k}, n = {n}, m = {}",
            ctx.m()
        )));
    }
    Ok(())
}

/// The Gabidulin code `Gab_k(g)`.
pub fn gabidulin(ctx: &Arc<FieldCtx>, g: &[Fqm], k: usize) -> Result<Code, CodeError> {
    check_gabidulin_sizes(ctx, g.len(), k)?;
    Ok(Code::from_generator(&moore_matrix(ctx, g, k)?))
}

/// A uniformly random evaluation vector of full rank `n`.
pub fn random_evaluation_vector<R: Rng + ?Sized>(
    ctx: &Arc<FieldCtx>,
    n: usize,
    rng: &mut R,
) -> Result<Vec<Fqm>, CodeError> {
    if n > ctx.m() {
        return Err(CodeError::Dimensions(format!("n = {n} <= m = {}", ctx.m())));
    }
    loop {
        let g: Vec<Fqm> = (0..n).map(|_| ctx.random(rng)).collect();
        if rank_fq(ctx, &g) == n {
            return Ok(g);
        }
    }
}

/// Twists of a Gabidulin generator: row `h[j]` gains `eta[j] * g^{[k-1+t[j]]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistParams {
    pub h: Vec<usize>,
    pub t: Vec<usize>,
    pub eta: Vec<Fqm>,
}

impl TwistParams {
    pub fn none() -> Self {
        TwistParams {
            h: Vec::new(),
            t: Vec::new(),
            eta: Vec::new(),
        }
    }

    pub fn ell(&self) -> usize {
        self.h.len()
    }

    pub fn validate(&self, n: usize, k: usize) -> Result<(), CodeError> {
        let ell = self.h.len();
        if self.t.len() != ell || self.eta.len() != ell {
            return Err(CodeError::Twist(
                "h, t and eta must have equal length".into(),
            ));
        }
        if let Some(&h) = self.h.iter().find(|&&h| h >= k) {
            return Err(CodeError::Twist(format!("hook {h} is not below k = {k}")));
        }
        if let Some(&t) = self.t.iter().find(|&&t| t == 0 || t > n - k) {
            return Err(CodeError::Twist(format!("twist {t} outside 1..={}", n - k)));
        }
        let mut sorted = self.t.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != ell {
            return Err(CodeError::Twist("twists must be distinct".into()));
        }
        if self.eta.iter().any(Fqm::is_zero) {
            return Err(CodeError::Twist("eta entries must be nonzero".into()));
        }
        Ok(())
    }
}

/// Generator matrix of the twisted Gabidulin code.
pub fn twisted_generator(
    ctx: &Arc<FieldCtx>,
    g: &[Fqm],
    k: usize,
    tw: &TwistParams,
) -> Result<MatFqm, CodeError> {
    let n = g.len();
    check_gabidulin_sizes(ctx, n, k)?;
    tw.validate(n, k)?;
    let mut gen = moore_matrix(ctx, g, k)?;
    for j in 0..tw.ell() {
        let extra = vec_frobenius(ctx, g, (k - 1 + tw.t[j]) as i64);
        for (col, e) in extra.iter().enumerate() {
            let v = ctx.add(&gen.get(tw.h[j], col), &ctx.mul(&tw.eta[j], e));
            gen.set(tw.h[j], col, v);
        }
    }
    Ok(gen)
}

pub fn twisted_gabidulin(
    ctx: &Arc<FieldCtx>,
    g: &[Fqm],
    k: usize,
    tw: &TwistParams,
) -> Result<Code, CodeError> {
    Ok(Code::from_generator(&twisted_generator(ctx, g, k, tw)?))
}

/// Twist parameters with evenly spaced twists `t_j = j (δ + 1)`, where
/// `δ = (n - k - ℓ) / (ℓ + 1)`, and random hooks `0 < h_1 < ... < h_ℓ < k - 1`
/// with gaps of at least 2.
pub fn prw_parameters<R: Rng + ?Sized>(
    ctx: &Arc<FieldCtx>,
    n: usize,
    k: usize,
    ell: usize,
    rng: &mut R,
) -> Result<TwistParams, CodeError> {
    if ell == 0 {
        return Ok(TwistParams::none());
    }
    if k >= n || n - k < ell {
        return Err(CodeError::Infeasible(format!(
            "n - k must be at least ell = {ell}"
        )));
    }
    if (n - k - ell) % (ell + 1) != 0 {
        return Err(CodeError::Infeasible(format!(
            "delta = ({n} - {k} - {ell}) / {} is not an integer",
            ell + 1
        )));
    }
    let delta = (n - k - ell) / (ell + 1);
    let t: Vec<usize> = (1..=ell).map(|j| j * (delta + 1)).collect();
    let tw = twist_with_random_hooks(ctx, k, t, rng)?;
    tw.validate(n, k)?;
    Ok(tw)
}

/// Twist parameters with the given twists, uniformly random hooks
/// `0 < h_1 < ... < h_ℓ < k - 1` with gaps of at least 2, and random nonzero `η`.
pub fn twist_with_random_hooks<R: Rng + ?Sized>(
    ctx: &Arc<FieldCtx>,
    k: usize,
    t: Vec<usize>,
    rng: &mut R,
) -> Result<TwistParams, CodeError> {
    let ell = t.len();
    if ell == 0 {
        return Ok(TwistParams::none());
    }
    if k < 2 * ell + 1 {
        return Err(CodeError::Infeasible(format!(
            "no {ell} hooks with gaps >= 2 fit strictly between 0 and k - 1 = {}",
            k.saturating_sub(1)
        )));
    }
    // gap-respecting sequences in 1..=k-2 correspond to plain subsets of a
    // shorter range via h_i = a_i + i
    let span = k - 2 - (ell - 1);
    let mut picks = rand::seq::index::sample(rng, span, ell).into_vec();
    picks.sort_unstable();
    let h: Vec<usize> = picks.iter().enumerate().map(|(i, &a)| a + 1 + i).collect();
    let eta = (0..ell).map(|_| ctx.random_nonzero(rng)).collect();
    Ok(TwistParams { h, t, eta })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeClass {
    GabidulinLike,
    TwistedLike { ell: usize },
    RandomLike,
}

/// Labels a code from the growth of `dim Λ_i` between `i = 0` and `i = 1`.
/// A heuristic, not a proof of structure.
pub fn classify(n: usize, profile: &[usize]) -> CodeClass {
    let (Some(&k), Some(&d1)) = (profile.first(), profile.get(1)) else {
        return CodeClass::RandomLike;
    };
    let inc = d1 - k;
    if inc == 1 {
        CodeClass::GabidulinLike
    } else if d1 == n.min(2 * k) {
        CodeClass::RandomLike
    } else if inc % 2 == 1 {
        CodeClass::TwistedLike { ell: (inc - 1) / 2 }
    } else {
        CodeClass::RandomLike
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn moore_rows_are_frobenius_images() {
        let ctx = FieldCtx::new(2, 6).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let g = random_evaluation_vector(&ctx, 6, &mut rng).unwrap();
        let a = moore_matrix(&ctx, &g, 6).unwrap();
        assert_eq!(a.rank(), 6);
        for i in 0..6 {
            assert_eq!(a.row(i), vec_frobenius(&ctx, &g, i as i64).as_slice());
        }
        assert_eq!(moore_matrix(&ctx, &g, 1).unwrap().row(0), g.as_slice());
        let bad = vec![g[0], g[0]];
        assert!(matches!(
            moore_matrix(&ctx, &bad, 1),
            Err(CodeError::NotFullRank { .. })
        ));
    }

    #[test]
    fn table_row_one_hooks_and_twists() {
        let ctx = FieldCtx::new(2, 104).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..100 {
            let tw = prw_parameters(&ctx, 26, 18, 2, &mut rng).unwrap();
            assert_eq!(tw.t, vec![3, 6]);
            assert!(tw.h[0] >= 1 && tw.h[1] >= tw.h[0] + 2 && tw.h[1] <= 16);
        }
        assert!(prw_parameters(&ctx, 36, 20, 2, &mut rng).is_err());
        assert_eq!(
            prw_parameters(&ctx, 26, 18, 0, &mut rng).unwrap(),
            TwistParams::none()
        );
    }

    #[test]
    fn classification_labels() {
        assert_eq!(classify(26, &[18, 19, 20]), CodeClass::GabidulinLike);
        assert_eq!(
            classify(26, &[18, 23, 26]),
            CodeClass::TwistedLike { ell: 2 }
        );
        assert_eq!(classify(26, &[5, 10, 15]), CodeClass::RandomLike);
    }
}
