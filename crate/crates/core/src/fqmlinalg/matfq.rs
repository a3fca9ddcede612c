use std::fmt;

use rand::Rng;

use super::LinalgError;
use crate::ffield::{add_mod, inv_mod, mul_mod, sub_mod, Packing};

/// Dense matrix over `F_q`, rows packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatFq {
    q: u32,
    pack: Packing,
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Reduced row-echelon form with its rank and pivot columns.
#[derive(Clone, Debug)]
pub struct RrefFq {
    pub matrix: MatFq,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl fmt::Debug for MatFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatFq {}x{} over F_{}", self.rows, self.cols, self.q)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl MatFq {
    pub fn zeros(q: u32, rows: usize, cols: usize) -> Self {
        let pack = Packing::for_q(q);
        let stride = pack.words(cols).max(1);
        MatFq {
            q,
            pack,
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(q: u32, n: usize) -> Self {
        let mut a = Self::zeros(q, n, n);
        for i in 0..n {
            a.set(i, i, 1);
        }
        a
    }

    pub fn from_fn(
        q: u32,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> Self {
        let mut a = Self::zeros(q, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j) % q;
                if v != 0 {
                    a.set(i, j, v);
                }
            }
        }
        a
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_rows(q: u32, rows: &[Vec<u32>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(q, rows.len(), cols, |i, j| rows[i][j])
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        debug_assert!(i < self.rows && j < self.cols);
        self.pack.get(&self.data[i * self.stride..], j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        debug_assert!(i < self.rows && j < self.cols && v < self.q);
        let s = self.stride;
        self.pack.set(&mut self.data[i * s..(i + 1) * s], j, v);
    }

    #[inline]
    pub(crate) fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        let s = self.stride;
        &mut self.data[i * s..(i + 1) * s]
    }

    pub fn row(&self, i: usize) -> Vec<u32> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.q, self.rows)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.q, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            out.row_axpy(i, other, i, 1);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        let c = self.q - 1;
        for i in 0..self.rows {
            out.row_axpy(i, other, i, c);
        }
        out
    }

    pub fn scale(&self, c: u32) -> Self {
        let c = c % self.q;
        let mut out = Self::zeros(self.q, self.rows, self.cols);
        if c != 0 {
            for i in 0..self.rows {
                out.row_axpy(i, self, i, c);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.q, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a != 0 {
                    out.row_axpy(i, other, l, a);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows);
        let mut acc = Self::zeros(self.q, 1, self.cols);
        for (l, &a) in v.iter().enumerate() {
            if a != 0 {
                acc.row_axpy(0, self, l, a);
            }
        }
        acc.row(0)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.q, idx.len(), self.cols);
        for (r, &i) in idx.iter().enumerate() {
            out.row_words_mut(r).copy_from_slice(self.row_words(i));
        }
        out
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        Self::from_fn(self.q, rows.len(), cols.len(), |i, j| {
            self.get(rows.start + i, cols.start + j)
        })
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
        Self::from_fn(self.q, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        })
    }

    /// Block-diagonal matrix `diag(a, b)`.
    pub fn block_diag(a: &Self, b: &Self) -> Self {
        assert_eq!(a.q, b.q);
        Self::from_fn(a.q, a.rows + b.rows, a.cols + b.cols, |i, j| {
            if i < a.rows && j < a.cols {
                a.get(i, j)
            } else if i >= a.rows && j >= a.cols {
                b.get(i - a.rows, j - a.cols)
            } else {
                0
            }
        })
    }

    /// `row[dst] += c * other.row[src]`.
    #[inline]
    pub(crate) fn row_axpy(&mut self, dst: usize, other: &Self, src: usize, c: u32) {
        debug_assert_eq!(self.stride, other.stride);
        let s = self.stride;
        let (q, pack, cols) = (self.q, self.pack, self.cols);
        let src_words = &other.data[src * s..(src + 1) * s];
        let dst_words = &mut self.data[dst * s..(dst + 1) * s];
        axpy_words(q, pack, cols, dst_words, src_words, c);
    }

    fn row_scale(&mut self, i: usize, c: u32) {
        if self.q == 2 || c == 1 {
            return;
        }
        let (q, pack, cols) = (self.q, self.pack, self.cols);
        let w = self.row_words_mut(i);
        for j in 0..cols {
            let v = pack.get(w, j);
            if v != 0 {
                pack.set(w, j, mul_mod(v, c, q));
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for w in 0..s {
            self.data.swap(a * s + w, b * s + w);
        }
    }

    /// Reduced row-echelon form. Zero rows are kept at the bottom.
    pub fn rref(&self) -> RrefFq {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| a.get(i, c) != 0) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = inv_mod(a.get(r, c), a.q);
            a.row_scale(r, inv);
            let pivot_row = a.row_words(r).to_vec();
            for i in 0..a.rows {
                if i == r {
                    continue;
                }
                let v = a.get(i, c);
                if v != 0 {
                    let (q, pack, cols) = (a.q, a.pack, a.cols);
                    axpy_words(q, pack, cols, a.row_words_mut(i), &pivot_row, q - v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        RrefFq {
            matrix: a,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis (as rows) of `{x : self * x^T = 0}`.
    pub fn right_kernel(&self) -> Self {
        let RrefFq { matrix, pivots, .. } = self.rref();
        kernel_from_rref(&matrix, &pivots)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(self.q, n));
        let r = aug.rref();
        if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.matrix.submatrix(0..n, n..2 * n))
    }

    /// Solves `self * x^T = b^T`. Returns a particular solution and a kernel basis.
    pub fn solve_affine(&self, b: &[u32]) -> Option<(Vec<u32>, Self)> {
        assert_eq!(b.len(), self.rows);
        let bcol = Self::from_fn(self.q, self.rows, 1, |i, _| b[i]);
        let aug = self.hstack(&bcol);
        let RrefFq {
            matrix,
            rank,
            pivots,
        } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (r, &p) in pivots.iter().enumerate().take(rank) {
            x[p] = matrix.get(r, self.cols);
        }
        let kernel = kernel_from_rref(&matrix.submatrix(0..matrix.rows, 0..self.cols), &pivots);
        Some((x, kernel))
    }

    pub fn random<R: Rng + ?Sized>(q: u32, rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(q, rows, cols, |_, _| rng.gen_range(0..q))
    }

    /// Uniform element of `GL_n(F_q)` by rejection sampling.
    pub fn random_gl<R: Rng + ?Sized>(q: u32, n: usize, rng: &mut R) -> Result<Self, LinalgError> {
        for _ in 0..super::SAMPLING_ATTEMPTS {
            let a = Self::random(q, n, n, rng);
            if a.rank() == n {
                return Ok(a);
            }
        }
        Err(LinalgError::SamplingExhausted)
    }
}

pub(crate) fn axpy_words(q: u32, pack: Packing, cols: usize, dst: &mut [u64], src: &[u64], c: u32) {
    let c = c % q;
    if c == 0 {
        return;
    }
    if q == 2 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d ^= *s;
        }
        return;
    }
    for j in 0..cols {
        let v = pack.get(src, j);
        if v != 0 {
            let cur = pack.get(dst, j);
            pack.set(dst, j, add_mod(cur, mul_mod(c, v, q), q));
        }
    }
}

fn kernel_from_rref(r: &MatFq, pivots: &[usize]) -> MatFq {
    let q = r.q;
    let n = r.cols;
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
    let mut k = MatFq::zeros(q, free.len(), n);
    for (row, &f) in free.iter().enumerate() {
        k.set(row, f, 1);
        for (i, &p) in pivots.iter().enumerate() {
            let v = r.get(i, f);
            if v != 0 {
                k.set(row, p, sub_mod(0, v, q));
            }
        }
    }
    k
}

/// Incrementally built echelon basis of a row space over `F_q`.
///
/// Each stored row is normalised so that its leading entry is 1 and no two rows
/// share a leading column.
#[derive(Clone, Debug)]
pub struct EchelonFq {
    q: u32,
    pack: Packing,
    cols: usize,
    stride: usize,
    rows: Vec<Vec<u64>>,
    pivot_of: Vec<Option<usize>>,
}

impl EchelonFq {
    pub fn new(q: u32, cols: usize) -> Self {
        let pack = Packing::for_q(q);
        EchelonFq {
            q,
            pack,
            cols,
            stride: pack.words(cols).max(1),
            rows: Vec::new(),
            pivot_of: vec![None; cols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn leading(&self, w: &[u64], from: usize) -> Option<usize> {
        if self.q == 2 {
            let mut wi = from / 64;
            let mut word = w.get(wi)? & (!0u64 << (from % 64));
            loop {
                if word != 0 {
                    let c = wi * 64 + word.trailing_zeros() as usize;
                    return (c < self.cols).then_some(c);
                }
                wi += 1;
                word = *w.get(wi)?;
            }
        }
        (from..self.cols).find(|&j| self.pack.get(w, j) != 0)
    }

    /// Inserts a packed row (as produced by [`EchelonFq::pack_row`]). Returns
    /// whether the rank grew.
    pub fn insert_packed(&mut self, mut w: Vec<u64>) -> bool {
        debug_assert_eq!(w.len(), self.stride);
        let mut from = 0;
        while let Some(c) = self.leading(&w, from) {
            match self.pivot_of[c] {
                Some(r) => {
                    let v = self.pack.get(&w, c);
                    let q = self.q;
                    axpy_words(q, self.pack, self.cols, &mut w, &self.rows[r], q - v);
                    from = c + 1;
                }
                None => {
                    let v = self.pack.get(&w, c);
                    if v != 1 {
                        let inv = inv_mod(v, self.q);
                        for j in c..self.cols {
                            let x = self.pack.get(&w, j);
                            if x != 0 {
                                self.pack.set(&mut w, j, mul_mod(x, inv, self.q));
                            }
                        }
                    }
                    self.pivot_of[c] = Some(self.rows.len());
                    self.rows.push(w);
                    return true;
                }
            }
        }
        false
    }

    pub fn insert(&mut self, row: &[u32]) -> bool {
        let w = self.pack_row(row);
        self.insert_packed(w)
    }

    pub fn pack_row(&self, row: &[u32]) -> Vec<u64> {
        assert_eq!(row.len(), self.cols);
        let mut w = vec![0u64; self.stride];
        for (j, &v) in row.iter().enumerate() {
            if v != 0 {
                self.pack.set(&mut w, j, v % self.q);
            }
        }
        w
    }

    pub(crate) fn zero_packed(&self) -> Vec<u64> {
        vec![0u64; self.stride]
    }

    pub(crate) fn packing(&self) -> Packing {
        self.pack
    }

    pub fn to_matrix(&self) -> MatFq {
        let mut m = MatFq::zeros(self.q, self.rows.len(), self.cols);
        for (i, w) in self.rows.iter().enumerate() {
            m.row_words_mut(i).copy_from_slice(w);
        }
        m
    }

    /// Basis of the solution space of the homogeneous system spanned so far.
    pub fn kernel(&self) -> MatFq {
        self.to_matrix().right_kernel()
    }
}
