use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::{LinalgError, MatFq};
use crate::ffield::{FieldCtx, Fqm};

/// Dense row-major matrix over `F_{q^m}`.
#[derive(Clone)]
pub struct MatFqm {
    ctx: Arc<FieldCtx>,
    rows: usize,
    cols: usize,
    data: Vec<Fqm>,
}

#[derive(Clone, Debug)]
pub struct RrefFqm {
    pub matrix: MatFqm,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl PartialEq for MatFqm {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id() == other.ctx.id()
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for MatFqm {}

impl fmt::Debug for MatFqm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatFqm {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|a| self.ctx.to_hex(a)).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl MatFqm {
    pub fn zeros(ctx: &Arc<FieldCtx>, rows: usize, cols: usize) -> Self {
        MatFqm {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![ctx.zero(); rows * cols],
        }
    }

    pub fn identity(ctx: &Arc<FieldCtx>, n: usize) -> Self {
        Self::from_fn(
            ctx,
            n,
            n,
            |i, j| if i == j { ctx.one() } else { ctx.zero() },
        )
    }

    pub fn from_fn(
        ctx: &Arc<FieldCtx>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Fqm,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MatFqm {
            ctx: ctx.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from row vectors of equal length `cols`.
    pub fn from_rows(
        ctx: &Arc<FieldCtx>,
        cols: usize,
        rows: &[Vec<Fqm>],
    ) -> Result<Self, LinalgError> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch);
        }
        if rows.iter().flatten().any(|a| !ctx.contains(a)) {
            return Err(LinalgError::ContextMismatch);
        }
        Ok(MatFqm {
            ctx: ctx.clone(),
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn row_vector(ctx: &Arc<FieldCtx>, v: &[Fqm]) -> Self {
        MatFqm {
            ctx: ctx.clone(),
            rows: 1,
            cols: v.len(),
            data: v.to_vec(),
        }
    }

    /// Entrywise embedding of an `F_q` matrix.
    pub fn from_fq(ctx: &Arc<FieldCtx>, a: &MatFq) -> Self {
        Self::from_fn(ctx, a.rows(), a.cols(), |i, j| ctx.from_base(a.get(i, j)))
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fqm {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fqm) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Fqm] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Fqm>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Fqm] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Fqm::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let f = &self.ctx;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = f.add(&out.data[idx], &f.mul(&a, &b));
                    }
                }
            }
        }
        out
    }

    /// Right multiplication by a matrix over the base field.
    pub fn mul_fq(&self, p: &MatFq) -> Self {
        assert_eq!(self.cols, p.rows(), "dimension mismatch in product");
        let f = &self.ctx;
        let mut out = Self::zeros(f, self.rows, p.cols());
        for i in 0..self.rows {
            let row = super::vec_mul_fq(f, self.row(i), p);
            out.data[i * p.cols()..(i + 1) * p.cols()].copy_from_slice(&row);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.ctx;
        Self::from_fn(f, self.rows, self.cols, |i, j| {
            f.add(&self.get(i, j), &other.get(i, j))
        })
    }

    pub fn frobenius(&self, i: i64) -> Self {
        let f = &self.ctx;
        MatFqm {
            ctx: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.frobenius(a, i)).collect(),
        }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut out = self.clone();
        out.data.extend_from_slice(&other.data);
        out.rows += other.rows;
        out
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(&self.ctx, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let rows: Vec<Vec<Fqm>> = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        MatFqm {
            ctx: self.ctx.clone(),
            rows: idx.len(),
            cols: self.cols,
            data: rows.concat(),
        }
    }

    pub fn columns(&self, range: std::ops::Range<usize>) -> Self {
        Self::from_fn(&self.ctx, self.rows, range.len(), |i, j| {
            self.get(i, range.start + j)
        })
    }

    /// Reduced row-echelon form; zero rows stay at the bottom.
    pub fn rref(&self) -> RrefFqm {
        let f = self.ctx.clone();
        let mut a = self.clone();
        let cols = a.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    a.data.swap(r * cols + j, p * cols + j);
                }
            }
            let inv = f.inv(&a.get(r, c)).expect("pivot is nonzero");
            for j in c..cols {
                let v = a.get(r, j);
                a.set(r, j, f.mul(&v, &inv));
            }
            let pivot: Vec<Fqm> = a.row(r)[c..].to_vec();
            for i in 0..a.rows {
                if i == r {
                    continue;
                }
                let factor = a.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for (off, pv) in pivot.iter().enumerate() {
                    if !pv.is_zero() {
                        let j = c + off;
                        let v = f.sub(&a.get(i, j), &f.mul(&factor, pv));
                        a.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        RrefFqm {
            matrix: a,
            rank: r,
            pivots,
        }
    }

    /// Trimmed reduced row-echelon form: the canonical generator of the row space.
    pub fn canonical(&self) -> Self {
        let RrefFqm { matrix, rank, .. } = self.rref();
        let mut m = matrix;
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        m
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis (as rows) of `{x : self * x^T = 0}`.
    pub fn right_kernel(&self) -> Self {
        let f = &self.ctx;
        let RrefFqm { matrix, pivots, .. } = self.rref();
        let n = self.cols;
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
        let mut k = Self::zeros(f, free.len(), n);
        for (row, &fc) in free.iter().enumerate() {
            k.set(row, fc, f.one());
            for (i, &p) in pivots.iter().enumerate() {
                k.set(row, p, f.neg(&matrix.get(i, fc)));
            }
        }
        k
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let r = self.hstack(&Self::identity(&self.ctx, n)).rref();
        if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.matrix.columns(n..2 * n))
    }

    /// Solves `x * self = b` for a row vector `x`, if a solution exists.
    pub fn solve_left(&self, b: &[Fqm]) -> Option<Vec<Fqm>> {
        assert_eq!(b.len(), self.cols);
        let t = self.transpose();
        let bcol = Self::from_fn(&self.ctx, self.cols, 1, |i, _| b[i]);
        let RrefFqm {
            matrix,
            rank,
            pivots,
        } = t.hstack(&bcol).rref();
        if pivots.last() == Some(&self.rows) {
            return None;
        }
        let mut x = vec![self.ctx.zero(); self.rows];
        for (r, &p) in pivots.iter().enumerate().take(rank) {
            x[p] = matrix.get(r, self.rows);
        }
        Some(x)
    }

    pub fn random<R: Rng + ?Sized>(
        ctx: &Arc<FieldCtx>,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> Self {
        Self::from_fn(ctx, rows, cols, |_, _| ctx.random(rng))
    }

    pub fn random_invertible<R: Rng + ?Sized>(
        ctx: &Arc<FieldCtx>,
        n: usize,
        rng: &mut R,
    ) -> Result<Self, LinalgError> {
        for _ in 0..super::SAMPLING_ATTEMPTS {
            let a = Self::random(ctx, n, n, rng);
            if a.rank() == n {
                return Ok(a);
            }
        }
        Err(LinalgError::SamplingExhausted)
    }

    /// Random `rows x cols` matrix of rank exactly `s`, as a product of full-rank
    /// `rows x s` and `s x cols` factors.
    pub fn random_rank<R: Rng + ?Sized>(
        ctx: &Arc<FieldCtx>,
        rows: usize,
        cols: usize,
        s: usize,
        rng: &mut R,
    ) -> Result<Self, LinalgError> {
        if s > rows.min(cols) {
            return Err(LinalgError::ImpossibleRank {
                rank: s,
                rows,
                cols,
            });
        }
        if s == 0 {
            return Ok(Self::zeros(ctx, rows, cols));
        }
        let a = sample_full_rank(ctx, rows, s, rng)?;
        let b = sample_full_rank(ctx, s, cols, rng)?;
        Ok(a.mul(&b))
    }
}

fn sample_full_rank<R: Rng + ?Sized>(
    ctx: &Arc<FieldCtx>,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Result<MatFqm, LinalgError> {
    let want = rows.min(cols);
    for _ in 0..super::SAMPLING_ATTEMPTS {
        let a = MatFqm::random(ctx, rows, cols, rng);
        if a.rank() == want {
            return Ok(a);
        }
    }
    Err(LinalgError::SamplingExhausted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn rank_s_factors() {
        let ctx = FieldCtx::new(2, 3).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x = MatFqm::random_rank(&ctx, 3, 3, 1, &mut rng).unwrap();
            assert_eq!(x.rank(), 1);
        }
        let x = MatFqm::random_rank(&ctx, 4, 4, 4, &mut rng).unwrap();
        assert_eq!(x.rank(), 4);
        assert!(matches!(
            MatFqm::random_rank(&ctx, 2, 5, 3, &mut rng),
            Err(LinalgError::ImpossibleRank { .. })
        ));
    }

    #[test]
    fn inverse_and_left_solve() {
        let ctx = FieldCtx::new(3, 5).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let a = MatFqm::random_invertible(&ctx, 6, &mut rng).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), MatFqm::identity(&ctx, 6));
        let g = MatFqm::random(&ctx, 3, 7, &mut rng);
        let x: Vec<Fqm> = (0..3).map(|_| ctx.random(&mut rng)).collect();
        let b = MatFqm::row_vector(&ctx, &x).mul(&g);
        assert_eq!(g.solve_left(b.row(0)).unwrap(), x);
    }

    #[test]
    fn kernel_annihilates() {
        let ctx = FieldCtx::new(2, 20).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let a = MatFqm::random(&ctx, 4, 9, &mut rng);
        let k = a.right_kernel();
        assert_eq!(k.rows(), 5);
        assert!(a.mul(&k.transpose()).is_zero());
    }
}
