//! Linearized polynomials `F = sum f_i X^{[i]}` with composition as product.

use std::fmt;
use std::sync::Arc;

use crate::ffield::{FieldCtx, Fqm};
use crate::fqmlinalg::MatFq;

#[derive(Clone)]
pub struct LinPoly {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<Fqm>,
}

impl PartialEq for LinPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id() == other.ctx.id() && self.coeffs == other.coeffs
    }
}

impl Eq for LinPoly {}

impl fmt::Debug for LinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}*X^[{i}]", self.ctx.to_hex(c)))
            .collect();
        if terms.is_empty() {
            write!(f, "LinPoly(0)")
        } else {
            write!(f, "LinPoly({})", terms.join(" + "))
        }
    }
}

impl LinPoly {
    /// Coefficients low q-degree first; trailing zeros are dropped.
    pub fn new(ctx: &Arc<FieldCtx>, coeffs: Vec<Fqm>) -> Self {
        let mut p = LinPoly {
            ctx: ctx.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        Self::new(ctx, Vec::new())
    }

    /// `c X^{[i]}`.
    pub fn monomial(ctx: &Arc<FieldCtx>, c: Fqm, i: usize) -> Self {
        let mut coeffs = vec![ctx.zero(); i + 1];
        coeffs[i] = c;
        Self::new(ctx, coeffs)
    }

    /// The identity map `X`.
    pub fn x(ctx: &Arc<FieldCtx>) -> Self {
        Self::monomial(ctx, ctx.one(), 0)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Fqm::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Fqm] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// q-degree; `None` for the zero polynomial.
    pub fn qdeg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.ctx;
        let len = self.coeffs.len().max(other.coeffs.len());
        let z = f.zero();
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&z);
                let b = other.coeffs.get(i).unwrap_or(&z);
                f.add(a, b)
            })
            .collect();
        Self::new(f, coeffs)
    }

    pub fn neg(&self) -> Self {
        let f = &self.ctx;
        Self::new(f, self.coeffs.iter().map(|c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Composition `self ∘ other`: coefficient `l` is `sum_{i+j=l} f_i g_j^{q^i}`.
    pub fn skew_mul(&self, other: &Self) -> Self {
        let f = &self.ctx;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    let t = f.mul(a, &f.frobenius(b, i as i64));
                    out[i + j] = f.add(&out[i + j], &t);
                }
            }
        }
        Self::new(f, out)
    }

    pub fn evaluate(&self, x: &Fqm) -> Fqm {
        let f = &self.ctx;
        self.coeffs
            .iter()
            .enumerate()
            .fold(f.zero(), |acc, (i, c)| {
                if c.is_zero() {
                    acc
                } else {
                    f.add(&acc, &f.mul(c, &f.frobenius(x, i as i64)))
                }
            })
    }

    pub fn evaluate_vec(&self, xs: &[Fqm]) -> Vec<Fqm> {
        xs.iter().map(|x| self.evaluate(x)).collect()
    }

    /// Matrix of `x -> F(x)` over `F_q` in the polynomial basis; column `j`
    /// holds the coordinates of `F(x^j)`.
    pub fn endomorphism_matrix(&self) -> MatFq {
        let f = &self.ctx;
        let m = f.m();
        let images: Vec<Fqm> = (0..m)
            .map(|j| {
                let mut c = vec![0u32; m];
                c[j] = 1;
                self.evaluate(&f.from_coeffs_unchecked(&c))
            })
            .collect();
        MatFq::from_fn(f.q(), m, m, |d, j| f.coeff(&images[j], d))
    }

    /// `F_q`-basis of the kernel of `F` inside `F_{q^m}`.
    pub fn kernel(&self) -> Vec<Fqm> {
        let f = &self.ctx;
        let k = self.endomorphism_matrix().right_kernel();
        (0..k.rows())
            .map(|i| f.from_coeffs_unchecked(&k.row(i)))
            .collect()
    }

    /// Rank of `F` as an `F_q`-linear map.
    pub fn rank(&self) -> usize {
        self.endomorphism_matrix().rank()
    }
}
