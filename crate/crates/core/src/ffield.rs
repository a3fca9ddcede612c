//! Arithmetic in the prime field `F_q` and in the extension `F_{q^m}`.
//!
//! Elements of `F_{q^m}` are stored in the polynomial basis `1, x, ..., x^{m-1}`
//! as packed base-`q` digits. For `q = 2` a digit is a single bit, so an
//! element is simply a bit vector and addition is XOR.

use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;
use thiserror::Error;

/// Number of 64-bit limbs backing one extension-field element.
pub const MAX_LIMBS: usize = 4;

/// Largest supported base-field characteristic.
pub const MAX_Q: u32 = 1 << 16;

pub(crate) type Limbs = [u64; MAX_LIMBS];

static NEXT_CONTEXT_ID: AtomicU32 = AtomicU32::new(1);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("q = {0} is not a prime below 2^16")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("F_{q}^{m} does not fit in the packed element representation")]
    TooLarge { q: u32, m: usize },
    #[error("modulus must be monic of degree {m} with coefficients below q")]
    BadModulus { m: usize },
    #[error("modulus is reducible over the base field")]
    Reducible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different field contexts")]
    ContextMismatch,
    #[error("invalid element encoding: {0}")]
    Encoding(String),
}

/// Layout of base-`q` digits inside 64-bit words. Digits never straddle a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Packing {
    pub width: u32,
    pub per_word: usize,
    pub mask: u64,
}

impl Packing {
    pub fn for_q(q: u32) -> Self {
        let width = 32 - (q - 1).leading_zeros();
        let per_word = (64 / width) as usize;
        Packing {
            width,
            per_word,
            mask: (1u64 << width) - 1,
        }
    }

    #[inline]
    pub fn words(&self, len: usize) -> usize {
        len.div_ceil(self.per_word)
    }

    #[inline]
    pub fn get(&self, words: &[u64], i: usize) -> u32 {
        let shift = (i % self.per_word) as u32 * self.width;
        ((words[i / self.per_word] >> shift) & self.mask) as u32
    }

    #[inline]
    pub fn set(&self, words: &mut [u64], i: usize, v: u32) {
        let shift = (i % self.per_word) as u32 * self.width;
        let w = &mut words[i / self.per_word];
        *w = (*w & !(self.mask << shift)) | ((v as u64) << shift);
    }
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, q: u32) -> u32 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32, q: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + q - b
    }
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, q: u32) -> u32 {
    ((a as u64 * b as u64) % q as u64) as u32
}

pub(crate) fn inv_mod(a: u32, q: u32) -> u32 {
    debug_assert!(a % q != 0);
    pow_mod(a, q - 2, q)
}

fn pow_mod(mut a: u32, mut e: u32, q: u32) -> u32 {
    let mut r = 1 % q;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, q);
        }
        a = mul_mod(a, a, q);
        e >>= 1;
    }
    r
}

pub(crate) fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of `F_{q^m}`. Carries the id of the context it was created in.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fqm {
    ctx: u32,
    limbs: Limbs,
}

impl Fqm {
    #[inline]
    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&w| w == 0)
    }

    /// Id of the owning [`FieldCtx`].
    #[inline]
    pub fn context_id(&self) -> u32 {
        self.ctx
    }

    #[inline]
    pub(crate) fn limbs(&self) -> &Limbs {
        &self.limbs
    }
}

impl fmt::Debug for Fqm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fqm(")?;
        let top = self.limbs.iter().rposition(|&w| w != 0).unwrap_or(0);
        for i in (0..=top).rev() {
            if i == top {
                write!(f, "{:x}", self.limbs[i])?;
            } else {
                write!(f, "{:016x}", self.limbs[i])?;
            }
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// The fields `F_q` and `F_{q^m} = F_q[x]/(modulus)`.
pub struct FieldCtx {
    id: u32,
    q: u32,
    m: usize,
    modulus: Vec<u32>,
    pack: Packing,
    limbs: usize,
    /// `reduce[j] = x^{m+j} mod modulus`.
    reduce: Vec<Limbs>,
    /// `frob[i][j] = (x^j)^{q^i}` for `0 <= i < m`.
    frob: Vec<Vec<Limbs>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("id", &self.id)
            .field("q", &self.q)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl FieldCtx {
    /// Builds `F_{q^m}` with the least irreducible monic modulus of degree `m`,
    /// ordering candidates `x^m + c(x)` by the base-`q` integer value of `c`.
    pub fn new(q: u32, m: usize) -> Result<Arc<Self>, FieldError> {
        check_sizes(q, m)?;
        let modulus = poly::least_irreducible(q, m);
        Self::with_modulus(q, m, &modulus)
    }

    /// Builds `F_{q^m}` from explicit modulus coefficients, low degree first.
    pub fn with_modulus(q: u32, m: usize, modulus: &[u32]) -> Result<Arc<Self>, FieldError> {
        check_sizes(q, m)?;
        if modulus.len() != m + 1 || modulus[m] != 1 || modulus.iter().any(|&c| c >= q) {
            return Err(FieldError::BadModulus { m });
        }
        if !poly::passes_irreducibility_check(q, modulus) {
            return Err(FieldError::Reducible);
        }
        let pack = Packing::for_q(q);
        let limbs = pack.words(m);
        let mut ctx = FieldCtx {
            id: NEXT_CONTEXT_ID.fetch_add(1, Ordering::Relaxed),
            q,
            m,
            modulus: modulus.to_vec(),
            pack,
            limbs,
            reduce: Vec::new(),
            frob: Vec::new(),
        };
        ctx.reduce = ctx.build_reduction_table();
        ctx.frob = ctx.build_frobenius_tables();
        Ok(Arc::new(ctx))
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Modulus coefficients, low degree first, length `m + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub(crate) fn limb_count(&self) -> usize {
        self.limbs
    }

    /// `q^m` as a float, for size estimates.
    pub fn order_f64(&self) -> f64 {
        (self.q as f64).powi(self.m as i32)
    }

    #[inline]
    pub(crate) fn wrap(&self, limbs: Limbs) -> Fqm {
        Fqm {
            ctx: self.id,
            limbs,
        }
    }

    pub fn zero(&self) -> Fqm {
        self.wrap([0; MAX_LIMBS])
    }

    pub fn one(&self) -> Fqm {
        let mut l = [0; MAX_LIMBS];
        l[0] = 1;
        self.wrap(l)
    }

    /// The class of `x`, i.e. the polynomial-basis generator.
    pub fn generator(&self) -> Fqm {
        let mut c = vec![0u32; self.m];
        if self.m > 1 {
            c[1] = 1;
            self.from_coeffs_unchecked(&c)
        } else {
            // x = -modulus[0] when m = 1
            self.from_base(sub_mod(0, self.modulus[0], self.q))
        }
    }

    /// Embeds `c in F_q`.
    pub fn from_base(&self, c: u32) -> Fqm {
        let mut l = [0; MAX_LIMBS];
        l[0] = (c % self.q) as u64;
        self.wrap(l)
    }

    /// Element with the given polynomial-basis coefficients (low degree first).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fqm, FieldError> {
        if coeffs.len() > self.m || coeffs.iter().any(|&c| c >= self.q) {
            return Err(FieldError::Encoding(format!(
                "expected at most {} digits below {}",
                self.m, self.q
            )));
        }
        Ok(self.from_coeffs_unchecked(coeffs))
    }

    pub(crate) fn from_coeffs_unchecked(&self, coeffs: &[u32]) -> Fqm {
        let mut l = [0; MAX_LIMBS];
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                self.pack.set(&mut l, i, c);
            }
        }
        self.wrap(l)
    }

    /// Element whose coefficient vector is the base-`q` expansion of `v`.
    pub fn from_u64(&self, mut v: u64) -> Fqm {
        let mut c = Vec::with_capacity(self.m);
        for _ in 0..self.m {
            c.push((v % self.q as u64) as u32);
            v /= self.q as u64;
        }
        self.from_coeffs_unchecked(&c)
    }

    #[inline]
    pub fn coeff(&self, a: &Fqm, d: usize) -> u32 {
        self.pack.get(&a.limbs, d)
    }

    pub fn coeffs(&self, a: &Fqm) -> Vec<u32> {
        (0..self.m).map(|d| self.coeff(a, d)).collect()
    }

    #[inline]
    pub fn contains(&self, a: &Fqm) -> bool {
        a.ctx == self.id
    }

    #[inline]
    pub fn add(&self, a: &Fqm, b: &Fqm) -> Fqm {
        debug_assert!(a.ctx == self.id && b.ctx == self.id, "context mismatch");
        if self.q == 2 {
            let mut l = a.limbs;
            for i in 0..self.limbs {
                l[i] ^= b.limbs[i];
            }
            self.wrap(l)
        } else {
            let mut l = [0; MAX_LIMBS];
            for d in 0..self.m {
                let s = add_mod(self.coeff(a, d), self.coeff(b, d), self.q);
                self.pack.set(&mut l, d, s);
            }
            self.wrap(l)
        }
    }

    #[inline]
    pub fn sub(&self, a: &Fqm, b: &Fqm) -> Fqm {
        if self.q == 2 {
            self.add(a, b)
        } else {
            self.add(a, &self.neg(b))
        }
    }

    pub fn neg(&self, a: &Fqm) -> Fqm {
        if self.q == 2 {
            return *a;
        }
        self.scale(a, self.q - 1)
    }

    /// Multiplication by a base-field scalar.
    pub fn scale(&self, a: &Fqm, c: u32) -> Fqm {
        let c = c % self.q;
        match c {
            0 => self.zero(),
            1 => *a,
            _ => {
                let mut l = [0; MAX_LIMBS];
                for d in 0..self.m {
                    let v = self.coeff(a, d);
                    if v != 0 {
                        self.pack.set(&mut l, d, mul_mod(v, c, self.q));
                    }
                }
                self.wrap(l)
            }
        }
    }

    #[inline]
    pub fn mul(&self, a: &Fqm, b: &Fqm) -> Fqm {
        debug_assert!(a.ctx == self.id && b.ctx == self.id, "context mismatch");
        if self.q == 2 {
            self.wrap(self.mul_binary(&a.limbs, &b.limbs))
        } else {
            self.wrap(self.mul_generic(&a.limbs, &b.limbs))
        }
    }

    pub fn square(&self, a: &Fqm) -> Fqm {
        self.mul(a, a)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Fqm) -> Option<Fqm> {
        if a.is_zero() {
            return None;
        }
        // a^{-1} = a^{q + ... + q^{m-1}} / N(a) with N(a) = a^{1 + q + ... + q^{m-1}} in F_q
        let partial = if self.m == 1 {
            self.one()
        } else {
            self.frobenius(&self.norm_chain(a, self.m - 1), 1)
        };
        let norm = self.mul(a, &partial);
        let n0 = self.coeff(&norm, 0);
        debug_assert!(n0 != 0);
        Some(self.scale(&partial, inv_mod(n0, self.q)))
    }

    /// `a^{1 + q + ... + q^{k-1}}` by an addition chain on `k`.
    fn norm_chain(&self, a: &Fqm, k: usize) -> Fqm {
        debug_assert!(k >= 1);
        let bits = usize::BITS - k.leading_zeros();
        let mut beta = *a;
        let mut len = 1usize;
        for b in (0..bits - 1).rev() {
            beta = self.mul(&beta, &self.frobenius(&beta, len as i64));
            len *= 2;
            if (k >> b) & 1 == 1 {
                beta = self.mul(&self.frobenius(&beta, 1), a);
                len += 1;
            }
        }
        debug_assert_eq!(len, k);
        beta
    }

    pub fn div(&self, a: &Fqm, b: &Fqm) -> Result<Fqm, FieldError> {
        let inv = self.inv(b).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(a, &inv))
    }

    /// Checked arithmetic: verifies both operands belong to this context.
    pub fn arith(&self, a: &Fqm, b: &Fqm, op: ArithOp) -> Result<Fqm, FieldError> {
        if a.ctx != self.id || b.ctx != self.id {
            return Err(FieldError::ContextMismatch);
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
        })
    }

    pub fn pow(&self, a: &Fqm, mut e: u128) -> Fqm {
        let mut base = *a;
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        r
    }

    /// `a^{q^i}`; negative `i` is the inverse Frobenius.
    pub fn frobenius(&self, a: &Fqm, i: i64) -> Fqm {
        let i = i.rem_euclid(self.m as i64) as usize;
        if i == 0 {
            return *a;
        }
        self.wrap(self.apply_table(&self.frob[i], &a.limbs))
    }

    /// The matrix of `x -> x^q` in the polynomial basis: entry `(d, j)` is
    /// coefficient `d` of `(x^j)^q`.
    pub fn frobenius_table(&self) -> Vec<Vec<u32>> {
        let cols = if self.m == 1 {
            vec![self.one().limbs]
        } else {
            self.frob[1].clone()
        };
        (0..self.m)
            .map(|d| (0..self.m).map(|j| self.pack.get(&cols[j], d)).collect())
            .collect()
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fqm {
        let mut l = [0; MAX_LIMBS];
        if self.q == 2 {
            for (i, w) in l.iter_mut().enumerate().take(self.limbs) {
                let bits = (self.m - 64 * i).min(64);
                let r: u64 = rng.gen();
                *w = if bits == 64 {
                    r
                } else {
                    r & ((1u64 << bits) - 1)
                };
            }
        } else {
            for d in 0..self.m {
                self.pack.set(&mut l, d, rng.gen_range(0..self.q));
            }
        }
        self.wrap(l)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fqm {
        loop {
            let a = self.random(rng);
            if !a.is_zero() {
                return a;
            }
        }
    }

    /// All field elements in base-`q` integer order. Only sensible for tiny fields.
    pub fn elements(&self) -> impl Iterator<Item = Fqm> + '_ {
        let total = (self.q as u64).pow(self.m as u32);
        (0..total).map(move |v| self.from_u64(v))
    }

    /// Number of hex digits used by [`FieldCtx::to_hex`].
    pub fn hex_width(&self) -> usize {
        let top = BigUint::from(self.q).pow(self.m as u32) - 1u32;
        (top.bits() as usize).div_ceil(4).max(1)
    }

    /// Big-endian hex of the coefficient vector read as a base-`q` integer,
    /// zero padded to [`FieldCtx::hex_width`].
    pub fn to_hex(&self, a: &Fqm) -> String {
        let width = self.hex_width();
        let digits = if self.q == 2 {
            let mut s = String::with_capacity(self.limbs * 16);
            for w in (0..self.limbs).rev() {
                s.push_str(&format!("{:016x}", a.limbs[w]));
            }
            s
        } else {
            let mut v = BigUint::from(0u32);
            for d in (0..self.m).rev() {
                v = v * self.q + self.coeff(a, d);
            }
            v.to_str_radix(16)
        };
        let trimmed = digits.trim_start_matches('0');
        format!("{trimmed:0>width$}")
    }

    pub fn from_hex(&self, s: &str) -> Result<Fqm, FieldError> {
        let bad = || FieldError::Encoding(format!("bad field element {s:?}"));
        let s = s.trim_start_matches("0x");
        let mut v = BigUint::parse_bytes(s.as_bytes(), 16).ok_or_else(bad)?;
        let mut coeffs = Vec::with_capacity(self.m);
        for _ in 0..self.m {
            let r = &v % self.q;
            coeffs.push(r.iter_u32_digits().next().unwrap_or(0));
            v /= self.q;
        }
        if v != BigUint::from(0u32) {
            return Err(bad());
        }
        Ok(self.from_coeffs_unchecked(&coeffs))
    }

    // ---- internals -------------------------------------------------------

    fn apply_table(&self, table: &[Limbs], a: &Limbs) -> Limbs {
        let mut out = [0u64; MAX_LIMBS];
        if self.q == 2 {
            for w in 0..self.limbs {
                let mut bits = a[w];
                while bits != 0 {
                    let j = w * 64 + bits.trailing_zeros() as usize;
                    let col = &table[j];
                    for i in 0..self.limbs {
                        out[i] ^= col[i];
                    }
                    bits &= bits - 1;
                }
            }
        } else {
            let mut acc = vec![0u32; self.m];
            for (j, col) in table.iter().enumerate() {
                let c = self.pack.get(a, j);
                if c == 0 {
                    continue;
                }
                for (d, slot) in acc.iter_mut().enumerate() {
                    let v = self.pack.get(col, d);
                    if v != 0 {
                        *slot = add_mod(*slot, mul_mod(c, v, self.q), self.q);
                    }
                }
            }
            for (d, &v) in acc.iter().enumerate() {
                self.pack.set(&mut out, d, v);
            }
        }
        out
    }

    fn mul_binary(&self, a: &Limbs, b: &Limbs) -> Limbs {
        let n = self.limbs;
        let mut prod = [0u64; 2 * MAX_LIMBS];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                if b[j] == 0 {
                    continue;
                }
                let p = clmul64(a[i], b[j]);
                prod[i + j] ^= p as u64;
                prod[i + j + 1] ^= (p >> 64) as u64;
            }
        }
        let m = self.m;
        let first = m / 64;
        for w in first..2 * n {
            let mut bits = prod[w];
            if w == first {
                bits &= !((1u64 << (m % 64)) - 1);
            }
            while bits != 0 {
                let pos = w * 64 + bits.trailing_zeros() as usize;
                let r = &self.reduce[pos - m];
                for i in 0..n {
                    prod[i] ^= r[i];
                }
                bits &= bits - 1;
            }
        }
        let mut out = [0u64; MAX_LIMBS];
        out[..n].copy_from_slice(&prod[..n]);
        if m % 64 != 0 {
            out[first] &= (1u64 << (m % 64)) - 1;
        }
        out
    }

    fn mul_generic(&self, a: &Limbs, b: &Limbs) -> Limbs {
        let (q, m) = (self.q, self.m);
        let da: Vec<u32> = (0..m).map(|d| self.pack.get(a, d)).collect();
        let db: Vec<u32> = (0..m).map(|d| self.pack.get(b, d)).collect();
        let mut prod = vec![0u64; 2 * m];
        let qq = q as u64;
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = (prod[i + j] + x as u64 * y as u64) % qq;
                }
            }
        }
        let mut low: Vec<u32> = prod[..m].iter().map(|&v| v as u32).collect();
        for j in 0..m.saturating_sub(1) {
            let c = prod[m + j] as u32;
            if c == 0 {
                continue;
            }
            let r = &self.reduce[j];
            for (d, slot) in low.iter_mut().enumerate() {
                let v = self.pack.get(r, d);
                if v != 0 {
                    *slot = add_mod(*slot, mul_mod(c, v, q), q);
                }
            }
        }
        let mut out = [0u64; MAX_LIMBS];
        for (d, &v) in low.iter().enumerate() {
            self.pack.set(&mut out, d, v);
        }
        out
    }

    fn build_reduction_table(&self) -> Vec<Limbs> {
        let (q, m) = (self.q, self.m);
        // cur = x^m mod f = -(f_0 + ... + f_{m-1} x^{m-1})
        let mut cur: Vec<u32> = self.modulus[..m]
            .iter()
            .map(|&c| sub_mod(0, c, q))
            .collect();
        let mut table = Vec::with_capacity(m);
        for _ in 0..m.max(1) {
            let mut l = [0u64; MAX_LIMBS];
            for (d, &v) in cur.iter().enumerate() {
                self.pack.set(&mut l, d, v);
            }
            table.push(l);
            // multiply by x
            let top = cur[m - 1];
            for d in (1..m).rev() {
                cur[d] = cur[d - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for (d, slot) in cur.iter_mut().enumerate() {
                    *slot = sub_mod(*slot, mul_mod(top, self.modulus[d], q), q);
                }
            }
        }
        table
    }

    fn build_frobenius_tables(&self) -> Vec<Vec<Limbs>> {
        let m = self.m;
        let identity: Vec<Limbs> = (0..m)
            .map(|j| {
                let mut l = [0u64; MAX_LIMBS];
                self.pack.set(&mut l, j, 1);
                l
            })
            .collect();
        if m == 1 {
            return vec![identity];
        }
        let x = self.generator();
        let xq = self.pow(&x, self.q as u128);
        let mut first = Vec::with_capacity(m);
        let mut cur = self.one();
        for _ in 0..m {
            first.push(cur.limbs);
            cur = self.mul(&cur, &xq);
        }
        let mut tables = vec![identity, first];
        for i in 2..m {
            let next: Vec<Limbs> = tables[i - 1]
                .iter()
                .map(|col| self.apply_table(&tables[1], col))
                .collect();
            tables.push(next);
        }
        tables
    }
}

fn check_sizes(q: u32, m: usize) -> Result<(), FieldError> {
    if q >= MAX_Q || !is_prime(q) {
        return Err(FieldError::NotPrime(q));
    }
    if m == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let pack = Packing::for_q(q);
    if pack.words(m) > MAX_LIMBS {
        return Err(FieldError::TooLarge { q, m });
    }
    Ok(())
}

/// Carry-less 64x64 -> 128 bit product, 4-bit windowed.
#[inline]
fn clmul64(a: u64, b: u64) -> u128 {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: the required CPU feature was detected at runtime.
            return unsafe { clmul64_pclmul(a, b) };
        }
    }
    clmul64_soft(a, b)
}

#[inline]
fn clmul64_soft(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut table = [0u128; 16];
    table[1] = a;
    for i in 2..16 {
        table[i] = if i & 1 == 0 {
            table[i >> 1] << 1
        } else {
            table[i - 1] ^ a
        };
    }
    let mut r = 0u128;
    for s in (0..16).rev() {
        r = (r << 4) ^ table[((b >> (4 * s)) & 15) as usize];
    }
    r
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq")]
unsafe fn clmul64_pclmul(a: u64, b: u64) -> u128 {
    use std::arch::x86_64::{_mm_clmulepi64_si128, _mm_set_epi64x, _mm_storeu_si128};
    let x = _mm_set_epi64x(0, a as i64);
    let y = _mm_set_epi64x(0, b as i64);
    let r = _mm_clmulepi64_si128(x, y, 0);
    let mut out = [0u64; 2];
    _mm_storeu_si128(out.as_mut_ptr().cast(), r);
    (out[0] as u128) | ((out[1] as u128) << 64)
}

/// Dense polynomials over `F_q`, used only to find and verify moduli.
mod poly {
    use super::{add_mod, inv_mod, mul_mod, sub_mod};

    fn trim(p: &mut Vec<u32>) {
        while p.last() == Some(&0) {
            p.pop();
        }
    }

    fn rem(a: &[u32], f: &[u32], q: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let df = f.len() - 1;
        let lead_inv = inv_mod(f[df], q);
        while r.len() > df {
            let top = r.len() - 1;
            let c = mul_mod(r[top], lead_inv, q);
            let shift = top - df;
            for (i, &fi) in f.iter().enumerate() {
                r[shift + i] = sub_mod(r[shift + i], mul_mod(c, fi, q), q);
            }
            trim(&mut r);
        }
        r
    }

    fn mulmod(a: &[u32], b: &[u32], f: &[u32], q: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut p = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    p[i + j] = add_mod(p[i + j], mul_mod(x, y, q), q);
                }
            }
        }
        rem(&p, f, q)
    }

    fn powmod(a: &[u32], mut e: u64, f: &[u32], q: u32) -> Vec<u32> {
        let mut base = rem(a, f, q);
        let mut r = vec![1u32];
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(&r, &base, f, q);
            }
            base = mulmod(&base, &base, f, q);
            e >>= 1;
        }
        r
    }

    fn gcd(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, q);
            x = y;
            y = r;
        }
        x
    }

    /// `h - x` for a polynomial `h`.
    fn minus_x(h: &[u32], q: u32) -> Vec<u32> {
        let mut d = h.to_vec();
        if d.len() < 2 {
            d.resize(2, 0);
        }
        d[1] = sub_mod(d[1], 1, q);
        trim(&mut d);
        d
    }

    /// Ben-Or: no irreducible factor of degree `<= m/2`.
    fn is_irreducible(q: u32, f: &[u32]) -> bool {
        let m = f.len() - 1;
        if m == 1 {
            return true;
        }
        if f[0] == 0 {
            return false;
        }
        let x = vec![0u32, 1];
        let mut h = x.clone();
        for _ in 1..=m / 2 {
            h = powmod(&h, q as u64, f, q);
            let g = gcd(f, &minus_x(&h, q), q);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }

    /// `x^{q^m} = x mod f` and `gcd(x^{q^d} - x, f) = 1` for each proper divisor `d` of `m`.
    pub fn passes_irreducibility_check(q: u32, f: &[u32]) -> bool {
        let m = f.len() - 1;
        let x = vec![0u32, 1];
        let mut h = rem(&x, f, q);
        let mut ok = true;
        for d in 1..=m {
            h = powmod(&h, q as u64, f, q);
            if d < m && m % d == 0 {
                let g = gcd(f, &minus_x(&h, q), q);
                if g.len() > 1 {
                    ok = false;
                    break;
                }
            }
        }
        ok && rem(&minus_x(&h, q), f, q).is_empty()
    }

    pub fn least_irreducible(q: u32, m: usize) -> Vec<u32> {
        let mut tail = vec![0u32; m];
        loop {
            let mut f = tail.clone();
            f.push(1);
            if is_irreducible(q, &f) {
                return f;
            }
            // increment the base-q counter
            for c in tail.iter_mut() {
                *c += 1;
                if *c < q {
                    break;
                }
                *c = 0;
            }
        }
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn least_irreducible_small_degrees() {
            assert_eq!(least_irreducible(2, 3), vec![1, 1, 0, 1]);
            assert_eq!(least_irreducible(2, 2), vec![1, 1, 1]);
            assert_eq!(least_irreducible(2, 8), vec![1, 1, 0, 1, 1, 0, 0, 0, 1]);
            assert_eq!(least_irreducible(3, 2), vec![1, 0, 1]);
        }

        #[test]
        fn checks_agree_on_all_binary_quartics() {
            for v in 0..16u32 {
                let mut f: Vec<u32> = (0..4).map(|i| (v >> i) & 1).collect();
                f.push(1);
                assert_eq!(
                    is_irreducible(2, &f),
                    passes_irreducibility_check(2, &f),
                    "{f:?}"
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn f8() -> Arc<FieldCtx> {
        FieldCtx::with_modulus(2, 3, &[1, 1, 0, 1]).unwrap()
    }

    #[test]
    fn x_times_x_squared_in_f8() {
        let f = f8();
        let x = f.from_coeffs(&[0, 1, 0]).unwrap();
        let x2 = f.from_coeffs(&[0, 0, 1]).unwrap();
        assert_eq!(f.mul(&x, &x2), f.from_coeffs(&[1, 1, 0]).unwrap());
    }

    #[test]
    fn one_is_multiplicative_identity() {
        let f = FieldCtx::new(2, 104).unwrap();
        assert_eq!(f.mul(&f.one(), &f.one()), f.one());
    }

    #[test]
    fn inverse_law() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for (q, m) in [(2, 1), (2, 7), (2, 104), (2, 192), (3, 5), (5, 4), (7, 1)] {
            let f = FieldCtx::new(q, m).unwrap();
            for _ in 0..50 {
                let a = f.random_nonzero(&mut rng);
                let b = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &b), f.one(), "q={q} m={m}");
            }
        }
    }

    #[test]
    fn division_by_zero_and_context_mismatch() {
        let f = f8();
        let g = f8();
        let a = f.one();
        assert_eq!(
            f.arith(&a, &f.zero(), ArithOp::Div),
            Err(FieldError::DivisionByZero)
        );
        assert_eq!(
            f.arith(&a, &g.one(), ArithOp::Mul),
            Err(FieldError::ContextMismatch)
        );
    }

    #[test]
    fn frobenius_identities() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let f = FieldCtx::new(3, 6).unwrap();
        for _ in 0..20 {
            let a = f.random(&mut rng);
            let b = f.random(&mut rng);
            assert_eq!(f.frobenius(&a, 0), a);
            assert_eq!(f.frobenius(&a, 6), a);
            assert_eq!(f.frobenius(&a, 1), f.pow(&a, 3));
            assert_eq!(
                f.frobenius(&f.add(&a, &b), 1),
                f.add(&f.frobenius(&a, 1), &f.frobenius(&b, 1))
            );
            assert_eq!(f.frobenius(&f.frobenius(&a, -2), 2), a);
        }
    }

    #[test]
    fn frobenius_table_has_order_m() {
        let f = FieldCtx::new(2, 10).unwrap();
        let t = f.frobenius_table();
        let m = f.m();
        let mut acc: Vec<Vec<u32>> = (0..m)
            .map(|i| (0..m).map(|j| (i == j) as u32).collect())
            .collect();
        for _ in 0..m {
            let mut next = vec![vec![0u32; m]; m];
            for i in 0..m {
                for j in 0..m {
                    next[i][j] = (0..m).map(|l| t[i][l] * acc[l][j]).sum::<u32>() % 2;
                }
            }
            acc = next;
        }
        for (i, row) in acc.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v, (i == j) as u32);
            }
        }
    }

    #[test]
    fn rejects_bad_contexts() {
        assert_eq!(FieldCtx::new(4, 3).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(FieldCtx::new(2, 0).unwrap_err(), FieldError::ZeroDegree);
        assert!(matches!(
            FieldCtx::new(2, 257),
            Err(FieldError::TooLarge { .. })
        ));
        assert_eq!(
            FieldCtx::with_modulus(2, 3, &[1, 0, 0, 1]).unwrap_err(),
            FieldError::Reducible
        );
    }

    #[test]
    fn degenerate_field_draws_bits() {
        let f = FieldCtx::new(2, 1).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a = f.random(&mut rng);
            assert!(f.coeff(&a, 0) <= 1);
        }
    }

    #[test]
    fn soft_and_hardware_clmul_agree() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let a: u64 = rng.gen();
            let b: u64 = rng.gen();
            assert_eq!(clmul64(a, b), clmul64_soft(a, b));
        }
    }

    #[test]
    fn hex_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for (q, m) in [(2, 3), (2, 104), (3, 7), (13, 5)] {
            let f = FieldCtx::new(q, m).unwrap();
            for _ in 0..50 {
                let a = f.random(&mut rng);
                let h = f.to_hex(&a);
                assert_eq!(h.len(), f.hex_width());
                assert_eq!(f.from_hex(&h).unwrap(), a);
            }
        }
        let f = f8();
        assert_eq!(f.to_hex(&f.generator()), "2");
        assert!(f.from_hex("8").is_err());
    }
}
