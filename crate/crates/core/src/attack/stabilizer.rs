use crate::fqmlinalg::{inner, EchelonFq, MatFq, MatFqm};
use crate::rankcodes::Code;

/// The algebra `{M over F_q : C M ⊆ C}` of a length-`N` code, as a basis of
/// `N x N` matrices.
#[derive(Clone, Debug)]
pub struct StabilizerAlgebra {
    pub n_total: usize,
    pub basis: Vec<MatFq>,
}

impl StabilizerAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn flat(m: &MatFq) -> Vec<u32> {
        m.to_rows().concat()
    }

    /// Whether `m` lies in the span of the basis.
    pub fn contains(&self, m: &MatFq) -> bool {
        let Some(first) = self.basis.first() else {
            return m.is_zero();
        };
        let q = first.q();
        let mut e = EchelonFq::new(q, self.n_total * self.n_total);
        for b in &self.basis {
            e.insert(&Self::flat(b));
        }
        !e.insert(&Self::flat(m))
    }
}

/// Whether `C M ⊆ C`, checked as `G M H^T = 0`.
pub fn stabilizes(gen: &MatFqm, parity: &MatFqm, m: &MatFq) -> bool {
    let ctx = gen.ctx();
    let gm = gen.mul_fq(m);
    (0..gm.rows())
        .all(|a| (0..parity.rows()).all(|b| inner(ctx, gm.row(a), parity.row(b)).is_zero()))
}

/// Number of consecutive equation blocks without rank growth that triggers a
/// trial solve.
const STALL_BLOCKS: usize = 2;

/// Solves `G M H^T = 0` for `M` over `F_q`.
///
/// The coefficient of `M[u][v]` in equation `(a, b)` is `G[a][u] H[b][v]`; each
/// equation splits into `m` equations over `F_q`. Blocks are fed to an
/// incremental echelon basis. When the rank stops growing, the kernel of the
/// partial system is checked against the full system; a kernel that passes is
/// exactly the solution space, since the partial kernel always contains it.
pub fn stabilizer(code: &Code) -> StabilizerAlgebra {
    let ctx = code.ctx();
    let big_n = code.n();
    let q = ctx.q();
    let m = ctx.m();
    let gen = code.generator();
    let parity = code.dual().generator().clone();
    let unknowns = big_n * big_n;

    if parity.rows() == 0 {
        let basis = (0..unknowns)
            .map(|idx| {
                let mut e = MatFq::zeros(q, big_n, big_n);
                e.set(idx / big_n, idx % big_n, 1);
                e
            })
            .collect();
        return StabilizerAlgebra {
            n_total: big_n,
            basis,
        };
    }

    let mut ech = EchelonFq::new(q, unknowns);
    let pack = ech.packing();
    let mut stalled = 0;
    let mut last_rank = 0;
    let mut solution = None;

    'outer: for a in 0..gen.rows() {
        for b in 0..parity.rows() {
            let mut rows = vec![ech.zero_packed(); m];
            for u in 0..big_n {
                let gu = gen.get(a, u);
                if gu.is_zero() {
                    continue;
                }
                for v in 0..big_n {
                    let hv = parity.get(b, v);
                    if hv.is_zero() {
                        continue;
                    }
                    let prod = ctx.mul(&gu, &hv);
                    let idx = u * big_n + v;
                    if q == 2 {
                        for (w, &limb) in prod.limbs().iter().enumerate() {
                            let mut bits = limb;
                            while bits != 0 {
                                let d = w * 64 + bits.trailing_zeros() as usize;
                                rows[d][idx / 64] |= 1u64 << (idx % 64);
                                bits &= bits - 1;
                            }
                        }
                    } else {
                        for (d, row) in rows.iter_mut().enumerate() {
                            let c = ctx.coeff(&prod, d);
                            if c != 0 {
                                pack.set(row, idx, c);
                            }
                        }
                    }
                }
            }
            for row in rows {
                ech.insert_packed(row);
            }
            if ech.rank() > last_rank {
                last_rank = ech.rank();
                stalled = 0;
                continue;
            }
            stalled += 1;
            if stalled >= STALL_BLOCKS {
                stalled = 0;
                let k = ech.kernel();
                if kernel_solves(gen, &parity, &k, big_n) {
                    solution = Some(k);
                    break 'outer;
                }
            }
        }
    }
    let kernel = solution.unwrap_or_else(|| ech.kernel());
    let basis = (0..kernel.rows())
        .map(|r| {
            let v = kernel.row(r);
            MatFq::from_fn(q, big_n, big_n, |i, j| v[i * big_n + j])
        })
        .collect();
    StabilizerAlgebra {
        n_total: big_n,
        basis,
    }
}

fn kernel_solves(gen: &MatFqm, parity: &MatFqm, k: &MatFq, big_n: usize) -> bool {
    (0..k.rows()).all(|r| {
        let v = k.row(r);
        let mat = MatFq::from_fn(k.q(), big_n, big_n, |i, j| v[i * big_n + j]);
        stabilizes(gen, parity, &mat)
    })
}
