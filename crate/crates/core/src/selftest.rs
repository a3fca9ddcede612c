//! End-to-end checks with fixed parameter sets and pass thresholds.
//!
//! Each check runs a batch of seeded instances and reports one line. The same
//! runners back the `acceptance` test target and the `selftest` command.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use rand::Rng;

use crate::attack::{attack_extension, attack_overbeck, AttackFailure};
use crate::decoder::{brute_force_decode, decode, max_radius};
use crate::ffield::{FieldCtx, Fqm};
use crate::fqmlinalg::{rank_fq, vec_add, vec_mul, vec_mul_fq, vec_sub, MatFq, MatFqm};
use crate::gpt::{
    keygen, keygen_with_twist, random_error, random_message, GptParams, GptPublicKey, GptSecretKey,
};
use crate::qpoly::LinPoly;
use crate::rankcodes::{
    gabidulin, prw_parameters, random_evaluation_vector, twist_with_random_hooks,
    twisted_gabidulin, Code,
};
use crate::rng::{derive_seed, seeded};

pub const CRITERIA: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Run about a tenth of the instances.
    pub quick: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            quick: false,
        }
    }
}

impl SuiteConfig {
    fn count(&self, full: usize) -> usize {
        if self.quick {
            (full / 10).max(1)
        } else {
            full
        }
    }

    fn instance_rng(&self, id: u8, sub: u64, index: usize) -> rand_chacha::ChaCha20Rng {
        let base = derive_seed(self.seed, id as u64 * 1_000_000 + sub * 10_000);
        seeded(derive_seed(base, index as u64))
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} C{} {}: {} [{:.1} s]",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

pub fn name(id: u8) -> &'static str {
    match id {
        1 => "q-sum dimension laws",
        2 => "decoder agrees with support enumeration",
        3 => "Gabidulin GPT round trip",
        4 => "twisted Gabidulin decoding round trip",
        5 => "extension attack on low-rank distortion",
        6 => "classic attack in its regime",
        7 => "extension attack on twisted GPT",
        8 => "stabilizer structure",
        9 => "property suites",
        _ => "unknown",
    }
}

/// At least `num / den` of `total`.
fn at_least(hits: usize, total: usize, num: usize, den: usize) -> bool {
    hits * den >= total * num
}

/// Runs the selected checks in order, printing nothing.
pub fn run(ids: &[u8], cfg: &SuiteConfig) -> Vec<CriterionResult> {
    let mut low_rank: Option<(Vec<LowRankTrial>, f64)> = None;
    let mut out = Vec::new();
    for &id in ids {
        let start = Instant::now();
        let (passed, detail) = match id {
            1 => c1(cfg),
            2 => c2(cfg),
            3 => c3(cfg),
            4 => c4(cfg),
            5 | 8 => {
                let (trials, secs) = low_rank.get_or_insert_with(|| {
                    let t0 = Instant::now();
                    let trials = low_rank_trials(cfg);
                    (trials, t0.elapsed().as_secs_f64())
                });
                let r = if id == 5 { c5(trials) } else { c8(trials) };
                out.push(CriterionResult {
                    id,
                    name: name(id),
                    passed: r.0,
                    detail: r.1,
                    seconds: if id == 5 {
                        *secs
                    } else {
                        start.elapsed().as_secs_f64()
                    },
                });
                continue;
            }
            6 => c6(cfg),
            7 => c7(cfg),
            9 => c9(cfg),
            _ => (false, format!("no criterion {id}")),
        };
        out.push(CriterionResult {
            id,
            name: name(id),
            passed,
            detail,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    out
}

fn c1(cfg: &SuiteConfig) -> (bool, String) {
    let start = Instant::now();
    let ctx = FieldCtx::new(2, 32).unwrap();
    let seeds = cfg.count(100);
    let mut gab_ok = 0;
    let mut rand_ok = 0;
    let mut tw_ok = 0;
    for idx in 0..seeds {
        let mut rng = cfg.instance_rng(1, 0, idx);
        let k = 1 + idx % 29;
        let g = random_evaluation_vector(&ctx, 30, &mut rng).unwrap();
        let prof = gabidulin(&ctx, &g, k).unwrap().dim_profile(6);
        if prof.iter().enumerate().all(|(i, &d)| d == 30.min(k + i)) {
            gab_ok += 1;
        }

        let mut rng = cfg.instance_rng(1, 1, idx);
        if Code::random(&ctx, 30, 5, &mut rng).lambda(1).k() == 10 {
            rand_ok += 1;
        }

        let mut rng = cfg.instance_rng(1, 2, idx);
        let g = random_evaluation_vector(&ctx, 26, &mut rng).unwrap();
        let tw = prw_parameters(&ctx, 26, 18, 2, &mut rng).unwrap();
        let prof = twisted_gabidulin(&ctx, &g, 18, &tw).unwrap().dim_profile(2);
        if prof[1] == 23 && prof[2] == 26 {
            tw_ok += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let passed =
        gab_ok == seeds && at_least(rand_ok, seeds, 99, 100) && tw_ok == seeds && secs < 60.0;
    (
        passed,
        format!("Gabidulin {gab_ok}/{seeds}, random {rand_ok}/{seeds}, twisted {tw_ok}/{seeds}, {secs:.1} s < 60 s"),
    )
}

fn c2(cfg: &SuiteConfig) -> (bool, String) {
    let start = Instant::now();
    let ctx = FieldCtx::new(2, 8).unwrap();
    let per_t = cfg.count(50);
    let mut agree = 0;
    let mut total = 0;
    let mut planted = 0;
    for t in 1..=3usize {
        for idx in 0..per_t {
            let mut rng = cfg.instance_rng(2, t as u64, idx);
            let g = random_evaluation_vector(&ctx, 8, &mut rng).unwrap();
            let code = gabidulin(&ctx, &g, 2).unwrap();
            let c = vec_mul(&ctx, &random_message(&ctx, 2, &mut rng), code.generator());
            let e = random_error(&ctx, 8, t, &mut rng).unwrap();
            let y = vec_add(&ctx, &c, &e);
            let fast = decode(&code, &y, t);
            let slow = brute_force_decode(&code, &y, t).expect("within the enumeration limit");
            total += 1;
            if fast.codeword().is_some() && fast.codeword() == slow.codeword() {
                agree += 1;
            }
            if fast.codeword() == Some(&c[..]) {
                planted += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        agree == total && secs < 300.0,
        format!(
            "agreement {agree}/{total}, planted codeword {planted}/{total}, {secs:.1} s < 300 s"
        ),
    )
}

fn c3(cfg: &SuiteConfig) -> (bool, String) {
    let start = Instant::now();
    let ctx = FieldCtx::new(2, 40).unwrap();
    let seeds = cfg.count(100);
    let params = GptParams::new(ctx.clone(), 36, 16, 4, 2).with_t(10);
    let mut ok = 0;
    for idx in 0..seeds {
        let mut rng = cfg.instance_rng(3, 0, idx);
        let (sk, pk) = keygen(&params, &mut rng).unwrap();
        let msg = random_message(&ctx, 16, &mut rng);
        let ct = pk.encrypt(&msg, &mut rng).unwrap();
        if sk.decrypt(&ct).as_deref() == Ok(&msg[..]) {
            ok += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        ok == seeds && secs < 120.0,
        format!("{ok}/{seeds} decrypted, {secs:.1} s < 120 s"),
    )
}

fn c4(cfg: &SuiteConfig) -> (bool, String) {
    let ctx = FieldCtx::new(2, 104).unwrap();
    let seeds = cfg.count(100);
    let mut ok = 0;
    let mut radii = Vec::new();
    for idx in 0..seeds {
        let mut rng = cfg.instance_rng(4, 0, idx);
        let g = random_evaluation_vector(&ctx, 26, &mut rng).unwrap();
        let tw = prw_parameters(&ctx, 26, 18, 2, &mut rng).unwrap();
        let code = twisted_gabidulin(&ctx, &g, 18, &tw).unwrap();
        let t = max_radius(&code);
        radii.push(t);
        let c = vec_mul(&ctx, &random_message(&ctx, 18, &mut rng), code.generator());
        let e = random_error(&ctx, 26, t, &mut rng).unwrap();
        let y = vec_add(&ctx, &c, &e);
        if decode(&code, &y, t).codeword() == Some(&c[..]) {
            ok += 1;
        }
    }
    radii.sort_unstable();
    radii.dedup();
    (
        at_least(ok, seeds, 95, 100),
        format!("{ok}/{seeds} decoded (need 95%), radius {radii:?}"),
    )
}

struct LowRankTrial {
    recovered: bool,
    overbeck_distortion: bool,
    stab_dim: Option<usize>,
    idempotent_ok: Option<bool>,
    seconds: f64,
}

/// `F^2 = F`, `rank F = n` and `C_pub F = (0 | G_sec) P`.
pub fn idempotent_matches_secret(sk: &GptSecretKey, pk: &GptPublicKey, f: &MatFq) -> bool {
    let p = &sk.params;
    if &f.mul(f) != f || f.rank() != p.n {
        return false;
    }
    let zero = MatFqm::zeros(&p.field, p.k, p.lambda);
    let target = Code::from_generator(&zero.hstack(sk.g_sec()).mul_fq(&sk.p));
    Code::from_generator(&pk.g_pub.mul_fq(f)) == target
}

fn low_rank_trials(cfg: &SuiteConfig) -> Vec<LowRankTrial> {
    let ctx = FieldCtx::new(2, 28).unwrap();
    let params = GptParams::new(ctx.clone(), 24, 12, 6, 1);
    (0..cfg.count(100))
        .map(|idx| {
            let mut rng = cfg.instance_rng(5, 0, idx);
            let (sk, pk) = keygen(&params, &mut rng).unwrap();
            let msg = random_message(&ctx, 12, &mut rng);
            let ct = pk.encrypt(&msg, &mut rng).unwrap();
            let t0 = Instant::now();
            let rep = attack_extension(&pk, &ct, 1);
            let seconds = t0.elapsed().as_secs_f64();
            let recovered = rep.recovered() == Some(&msg[..]);
            let idempotent_ok = recovered.then(|| {
                rep.idempotent
                    .as_ref()
                    .is_some_and(|f| idempotent_matches_secret(&sk, &pk, f))
            });
            let ob = attack_overbeck(&pk, &ct, 1, &mut rng);
            let overbeck_distortion = matches!(
                ob.failure(),
                Some(AttackFailure::DistortionNotEliminated { .. })
            );
            LowRankTrial {
                recovered,
                overbeck_distortion,
                stab_dim: rep.stab_dim,
                idempotent_ok,
                seconds,
            }
        })
        .collect()
}

fn c5(trials: &[LowRankTrial]) -> (bool, String) {
    let n = trials.len();
    let rec = trials.iter().filter(|t| t.recovered).count();
    let ob = trials.iter().filter(|t| t.overbeck_distortion).count();
    let slowest = trials.iter().map(|t| t.seconds).fold(0.0, f64::max);
    (
        at_least(rec, n, 95, 100) && ob == n && slowest < 60.0,
        format!(
            "extension recovered {rec}/{n} (need 95%), classic failed on dual dimension {ob}/{n}, slowest key {slowest:.2} s < 60 s"
        ),
    )
}

fn c8(trials: &[LowRankTrial]) -> (bool, String) {
    let n = trials.len();
    let dim2 = trials.iter().filter(|t| t.stab_dim == Some(2)).count();
    let successes = trials.iter().filter(|t| t.idempotent_ok.is_some()).count();
    let exact = trials
        .iter()
        .filter(|t| t.idempotent_ok == Some(true))
        .count();
    (
        at_least(dim2, n, 90, 100) && exact == successes,
        format!("stabilizer dimension 2 on {dim2}/{n} (need 90%), idempotent checks {exact}/{successes}"),
    )
}

fn c6(cfg: &SuiteConfig) -> (bool, String) {
    let ctx = FieldCtx::new(2, 24).unwrap();
    let params = GptParams::new(ctx.clone(), 20, 9, 2, 1);
    let seeds = cfg.count(100);
    let mut ok = 0;
    for idx in 0..seeds {
        let mut rng = cfg.instance_rng(6, 0, idx);
        let (_, pk) = keygen(&params, &mut rng).unwrap();
        let msg = random_message(&ctx, 9, &mut rng);
        let ct = pk.encrypt(&msg, &mut rng).unwrap();
        if attack_overbeck(&pk, &ct, 1, &mut rng).recovered() == Some(&msg[..]) {
            ok += 1;
        }
    }
    (
        at_least(ok, seeds, 95, 100),
        format!("{ok}/{seeds} recovered (need 95%)"),
    )
}

/// Published twisted GPT parameter sets, all over `F_2`.
#[derive(Clone, Debug)]
pub struct TwistedRow {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub lambda: usize,
    pub s: usize,
    /// Explicit twists for rows where `(n - k - ℓ) / (ℓ + 1)` is not integral.
    pub twists: Option<Vec<usize>>,
}

pub fn twisted_rows() -> [TwistedRow; 3] {
    [
        TwistedRow {
            m: 104,
            n: 26,
            k: 18,
            ell: 2,
            lambda: 6,
            s: 1,
            twists: None,
        },
        TwistedRow {
            m: 132,
            n: 33,
            k: 21,
            ell: 2,
            lambda: 8,
            s: 1,
            twists: Some(vec![4, 8]),
        },
        TwistedRow {
            m: 192,
            n: 48,
            k: 32,
            ell: 2,
            lambda: 12,
            s: 2,
            twists: Some(vec![5, 10]),
        },
    ]
}

/// Runs the extension attack on `keys` fresh keys of a row. Returns the number
/// of recovered plaintexts and the slowest attack in seconds.
pub fn twisted_attack_trials(row: &TwistedRow, keys: usize, seed: u64) -> (usize, f64) {
    let ctx = FieldCtx::new(2, row.m).unwrap();
    let params = GptParams::new(ctx.clone(), row.n, row.k, row.lambda, row.s).twisted(row.ell);
    let mut ok = 0;
    let mut slowest: f64 = 0.0;
    for idx in 0..keys {
        let mut rng = seeded(derive_seed(seed, idx as u64));
        let (_, pk) = match &row.twists {
            None => keygen(&params, &mut rng).unwrap(),
            Some(t) => {
                let tw = twist_with_random_hooks(&ctx, row.k, t.clone(), &mut rng).unwrap();
                keygen_with_twist(&params, tw, &mut rng).unwrap()
            }
        };
        let msg = random_message(&ctx, row.k, &mut rng);
        let ct = pk.encrypt(&msg, &mut rng).unwrap();
        let t0 = Instant::now();
        let rep = attack_extension(&pk, &ct, crate::attack::default_i_max(&pk));
        slowest = slowest.max(t0.elapsed().as_secs_f64());
        if rep.recovered() == Some(&msg[..]) {
            ok += 1;
        }
    }
    (ok, slowest)
}

fn c7(cfg: &SuiteConfig) -> (bool, String) {
    let keys = if cfg.quick { 2 } else { 10 };
    let (ok, slowest) =
        twisted_attack_trials(&twisted_rows()[0], keys, derive_seed(cfg.seed, 7_000_000));
    (
        at_least(ok, keys, 9, 10) && slowest < 3600.0,
        format!("{ok}/{keys} recovered (need 90%), slowest key {slowest:.2} s < 3600 s"),
    )
}

fn random_poly<R: Rng>(ctx: &Arc<FieldCtx>, rng: &mut R) -> LinPoly {
    let len = rng.gen_range(0..5);
    LinPoly::new(ctx, (0..len).map(|_| ctx.random(rng)).collect())
}

/// Small fields cycled through by the property checks.
fn property_fields() -> Vec<Arc<FieldCtx>> {
    [(2, 8), (2, 13), (3, 5), (5, 3), (2, 70)]
        .iter()
        .map(|&(q, m)| FieldCtx::new(q, m).unwrap())
        .collect()
}

/// Runs `checks` seeded trials of `prop`, returning the number of failures.
fn count_failures(
    cfg: &SuiteConfig,
    sub: u64,
    checks: usize,
    mut prop: impl FnMut(&mut rand_chacha::ChaCha20Rng, usize) -> bool,
) -> usize {
    (0..checks)
        .filter(|&idx| {
            let mut rng = cfg.instance_rng(9, sub, idx);
            !prop(&mut rng, idx)
        })
        .count()
}

fn c9(cfg: &SuiteConfig) -> (bool, String) {
    let checks = cfg.count(1000);
    let fields = property_fields();
    let pick = |idx: usize| fields[idx % fields.len()].clone();

    let skew = count_failures(cfg, 0, checks, |rng, idx| {
        let ctx = pick(idx);
        let (a, b, c) = (
            random_poly(&ctx, rng),
            random_poly(&ctx, rng),
            random_poly(&ctx, rng),
        );
        let x = ctx.random(rng);
        a.skew_mul(&b).skew_mul(&c) == a.skew_mul(&b.skew_mul(&c))
            && a.skew_mul(&b.add(&c)) == a.skew_mul(&b).add(&a.skew_mul(&c))
            && a.add(&b).skew_mul(&c) == a.skew_mul(&c).add(&b.skew_mul(&c))
            && a.skew_mul(&b).evaluate(&x) == a.evaluate(&b.evaluate(&x))
    });

    let frob = count_failures(cfg, 1, checks, |rng, idx| {
        let ctx = pick(idx);
        let (a, b) = (ctx.random(rng), ctx.random(rng));
        let i = rng.gen_range(-(ctx.m() as i64)..=ctx.m() as i64);
        let f = |x: &Fqm| ctx.frobenius(x, i);
        f(&ctx.add(&a, &b)) == ctx.add(&f(&a), &f(&b))
            && f(&ctx.mul(&a, &b)) == ctx.mul(&f(&a), &f(&b))
            && ctx.frobenius(&a, ctx.m() as i64) == a
            && ctx.frobenius(&a, 1) == ctx.pow(&a, ctx.q() as u128)
    });

    let iso = count_failures(cfg, 2, checks, |rng, idx| {
        let ctx = pick(idx);
        let n = rng.gen_range(1..=8);
        let x: Vec<Fqm> = (0..n).map(|_| ctx.random(rng)).collect();
        let y: Vec<Fqm> = (0..n).map(|_| ctx.random(rng)).collect();
        let p = MatFq::random_gl(ctx.q(), n, rng).unwrap();
        let d = rank_fq(&ctx, &vec_sub(&ctx, &x, &y));
        let dp = rank_fq(
            &ctx,
            &vec_sub(&ctx, &vec_mul_fq(&ctx, &x, &p), &vec_mul_fq(&ctx, &y, &p)),
        );
        d == dp
    });

    let dual = count_failures(cfg, 3, checks, |rng, idx| {
        let ctx = pick(idx);
        let n = rng.gen_range(1..=8);
        let k = rng.gen_range(0..=n);
        let c = Code::random(&ctx, n, k, rng);
        let d = c.dual();
        d.k() == n - k && d.dual() == c && inner_products_vanish(&ctx, &c, &d)
    });

    let closure = count_failures(cfg, 4, checks, |rng, idx| {
        let ctx = FieldCtx::new(2, 10 + idx % 3).unwrap();
        if idx % 2 == 0 {
            let n = rng.gen_range(2..=8);
            let k = rng.gen_range(1..n);
            let s = rng.gen_range(1..=3);
            let c = Code::random(&ctx, n, k, rng);
            let cl = c.closure(s);
            cl.contains(&c) && cl.lambda(s) == c.lambda(s)
        } else {
            let n = rng.gen_range(3..=ctx.m());
            let k = rng.gen_range(1..n - 1);
            let i = rng.gen_range(1..n - k);
            let g = random_evaluation_vector(&ctx, n, rng).unwrap();
            let c = gabidulin(&ctx, &g, k).unwrap();
            c.closure(i) == c
        }
    });

    let total = skew + frob + iso + dual + closure;
    (
        total == 0,
        format!(
            "{checks} checks each; failures: skew ring {skew}, Frobenius {frob}, isometry {iso}, dual {dual}, closure {closure}"
        ),
    )
}

fn inner_products_vanish(ctx: &FieldCtx, c: &Code, d: &Code) -> bool {
    let (g, h) = (c.generator(), d.generator());
    (0..g.rows())
        .all(|a| (0..h.rows()).all(|b| crate::fqmlinalg::inner(ctx, g.row(a), h.row(b)).is_zero()))
}
