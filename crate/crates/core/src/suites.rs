//! Named batch verifiers. Each suite draws its instances from a seeded
//! stream (instance `i` uses `SplitMix64::new(seed).derive(i)`), checks
//! them independently in parallel and returns one row per instance in
//! instance order, so results do not depend on the worker count.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    check_antiderivative_bound, check_integer_solve_bound, check_level_crossings, check_littlewood_bound,
    check_local_l1_bound, check_sign_change_bound, detect_period, window_rank, BoundForm, ExpSum, TrigPoly, DEFAULT_REL_TOL,
};
use crate::error::{Error, Result};
use crate::families::{enumerate, random_poly, random_selfreciprocal, Family};
use crate::machinery::{
    lcm_upto, nc_ph_bound, totient_table, verify_small_run_bound, verify_support_size_bound, DEFAULT_DEGREE_BUDGET,
};
use crate::oracle::{oracle_count, OracleConfig};
use crate::poly::{CoeffSet, IntPoly};
use crate::rng::SplitMix64;
use crate::zerocount::nz_unimodular;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Cap on `d_m` and `k = d_v`.
    pub degree_budget: u64,
    pub totient_limit: u64,
    /// Relative tolerance of the adaptive quadrature.
    pub quad_tol: f64,
    /// Overrides the default instance count of the random suites.
    pub instances: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 1, degree_budget: DEFAULT_DEGREE_BUDGET, totient_limit: 1_000_000, quad_tol: DEFAULT_REL_TOL, instances: None }
    }
}

impl SuiteConfig {
    fn count(&self, default: usize) -> usize {
        self.instances.unwrap_or(default)
    }

    fn rng(&self, i: usize) -> SplitMix64 {
        SplitMix64::new(self.seed).derive(i as u64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteRow {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub status: Status,
    pub note: String,
}

impl SuiteRow {
    fn new(id: impl Into<String>, lhs: f64, rhs: f64, margin: f64, pass: bool) -> Self {
        let status = if pass { Status::Pass } else { Status::Fail };
        Self { id: id.into(), lhs, rhs, margin, status, note: String::new() }
    }

    fn skipped(id: impl Into<String>, why: impl Into<String>) -> Self {
        Self { id: id.into(), lhs: f64::NAN, rhs: f64::NAN, margin: f64::NAN, status: Status::Skipped, note: why.into() }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub rows: Vec<SuiteRow>,
}

impl SuiteOutcome {
    fn count(&self, s: Status) -> usize {
        self.rows.iter().filter(|r| r.status == s).count()
    }

    pub fn passed(&self) -> usize {
        self.count(Status::Pass)
    }

    pub fn failed(&self) -> usize {
        self.count(Status::Fail)
    }

    pub fn skipped(&self) -> usize {
        self.count(Status::Skipped)
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }
}

pub trait VerificationSuite: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn rows(&self, cfg: &SuiteConfig) -> Result<Vec<SuiteRow>>;

    fn run(&self, cfg: &SuiteConfig) -> Result<SuiteOutcome> {
        Ok(SuiteOutcome { suite: self.name().to_string(), rows: self.rows(cfg)? })
    }
}

fn par_rows<F>(n: usize, f: F) -> Result<Vec<SuiteRow>>
where
    F: Fn(usize) -> Result<SuiteRow> + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Random exponential sum with `1..=64` distinct frequencies in
/// `[-256, 256]` and coefficients `+-1`.
pub fn random_littlewood_expsum(rng: &mut SplitMix64) -> ExpSum {
    let m = 1 + rng.below(64) as usize;
    let mut freqs = std::collections::BTreeSet::new();
    while freqs.len() < m {
        freqs.insert(rng.range_i64(-256, 256));
    }
    let terms: Vec<(i64, f64)> =
        freqs.into_iter().map(|l| (l, if rng.below(2) == 0 { 1.0 } else { -1.0 })).collect();
    ExpSum::from_real(terms).expect("distinct frequencies")
}

/// Self-reciprocal polynomial of even degree `2..=40` over `{-1, 0, 1}` and
/// a window length `k` in `1..=3`.
pub fn random_sr_instance(rng: &mut SplitMix64) -> (IntPoly, usize) {
    let s = CoeffSet::new([-1, 0, 1]).unwrap();
    let n = 1 + rng.below(20) as usize;
    let p = random_selfreciprocal(&s, 2 * n, rng.next_u64()).unwrap();
    (p, 1 + rng.below(3) as usize)
}

/// Trigonometric polynomial of degree `1..=20` and a half-width in `[1/2, pi]`.
pub fn random_trig_instance(rng: &mut SplitMix64) -> (TrigPoly, f64) {
    let deg = 1 + rng.below(20) as usize;
    let mut draw = |len: usize| (0..len).map(|_| 2.0 * rng.unit_f64() - 1.0).collect::<Vec<_>>();
    let cos = draw(deg + 1);
    let mut sin = draw(deg + 1);
    sin[0] = 0.0;
    let delta = 0.5 + rng.unit_f64() * (PI - 0.5);
    (TrigPoly { cos, sin }, delta)
}

type GaussianVec = Vec<Complex<BigRational>>;

/// Invertible integer matrix of size `1..=6` with entries in `[-5, 5]`,
/// and a right-hand side of Gaussian integers in `[-9, 9] + i[-9, 9]`.
pub fn random_invertible_system(rng: &mut SplitMix64) -> (Vec<Vec<i64>>, GaussianVec) {
    let d = 1 + rng.below(6) as usize;
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    loop {
        let a: Vec<Vec<i64>> = (0..d).map(|_| (0..d).map(|_| rng.range_i64(-5, 5)).collect()).collect();
        let b: GaussianVec = (0..d).map(|_| Complex::new(q(rng.range_i64(-9, 9)), q(rng.range_i64(-9, 9)))).collect();
        if !matches!(check_integer_solve_bound(&a, &b), Err(Error::Singular)) {
            return (a, b);
        }
    }
}

/// Deterministic instance set for the verifiers built on `F`: every
/// self-reciprocal Littlewood polynomial of even degree up to 12, a few
/// fixed shapes, and seeded self-reciprocal polynomials over `{-1, 0, 1}`.
pub fn corpus(seed: u64) -> Vec<(String, IntPoly, CoeffSet)> {
    let mut out = Vec::new();
    let lw = CoeffSet::littlewood();
    for n in (2..=12).step_by(2) {
        for (code, p) in enumerate(Family::SelfReciprocalLittlewood, n, u128::MAX).unwrap().enumerate() {
            out.push((format!("sr-littlewood:n={n}:code={code}"), p, lw.clone()));
        }
    }
    for (name, c) in [("ones-3", vec![1, 1, 1]), ("one-three-one", vec![1, 3, 1]), ("ones-7", vec![1; 7])] {
        let p = IntPoly::from_i64s(&c);
        let s = CoeffSet::of_poly(&p).unwrap();
        out.push((name.to_string(), p, s));
    }
    let s = CoeffSet::new([-1, 0, 1]).unwrap();
    let base = SplitMix64::new(seed);
    for i in 0..40u64 {
        let mut rng = base.derive(i);
        let n = 1 + rng.below(8) as usize;
        let p = random_selfreciprocal(&s, 2 * n, rng.next_u64()).unwrap();
        out.push((format!("random:{i}"), p, s.clone()));
    }
    out
}

struct LittlewoodL1;
struct LocalL1;
struct Antiderivative;
struct LevelCrossings;
struct SignChangeBound;
struct IntegerSolve;
struct WindowPeriod;
struct SmallRuns;
struct SupportSize;
struct NcPh;
struct Totient;
struct Lcm;
struct Oracle;

impl VerificationSuite for LittlewoodL1 {
    fn name(&self) -> &'static str {
        "littlewood-l1"
    }
    fn describe(&self) -> &'static str {
        "L1 norm of random +-1 exponential sums against both lower-bound forms"
    }
    /// One row per sum; it passes when both forms hold, and reports the
    /// tighter of the two.
    fn rows(&self, cfg: &SuiteConfig) -> Result<Vec<SuiteRow>> {
        par_rows(cfg.count(200), |i| {
            let f = random_littlewood_expsum(&mut cfg.rng(i));
            let h = check_littlewood_bound(&f, BoundForm::Harmonic, cfg.quad_tol);
            let l = check_littlewood_bound(&f, BoundForm::Logarithmic, cfg.quad_tol);
            let tight = if h.margin <= l.margin { &h } else { &l };
            let note = format!("harmonic_margin={:.6e} log_margin={:.6e}", h.margin, l.margin);
            Ok(SuiteRow::new(format!("{i}:m={}", f.len()), tight.lhs, tight.rhs, tight.margin, h.pass && l.pass)
                .with_note(note))
        })
    }
}

impl VerificationSuite for LocalL1 {
    fn name(&self) -> &'static str {
        "local-l1"
    }
    fn describe(&self) -> &'static str {
        "L1 norm of P on [-delta, delta] against the NC_k lower bound, delta = 1/(2k)"
    }
    fn rows(&self, cfg: &SuiteConfig) -> Result<Vec<SuiteRow>> {
        let s = CoeffSet::new([-1, 0, 1]).unwrap();
        par_rows(cfg.count(100), |i| {
            let (p, k) = random_sr_instance(&mut cfg.rng(i));
            let r = check_local_l1_bound(&p, &s, k, 1.0 / (2.0 * k as f64), None, cfg.quad_tol)?;
            let id = format!("{i}:deg={}:k={k}", p.degree().unwrap());
            let row = SuiteRow::new(id, r.lhs, r.rhs, r.margin, r.pass);
            Ok(if r.degenerate { row.with_note("degenerate") } else { row })
        })
    }
}

impl VerificationSuite for Antiderivative {
    fn name(&self) -> &'static str {
        "antiderivative"
    }
    fn describe(&self) -> &'static str {
        "max |R| on [-1/(2k), 1/(2k)] against 42k(mu+1)M"
    }
    fn rows(&self, cfg: &SuiteConfig) -> Result<Vec<SuiteRow>> {
        par_rows(cfg.count(100), |i| {
            let (p, k) = random_sr_instance(&mut cfg.rng(i));
            let r = check_antiderivative_bound(&p, k, 1.0 / (2.0 * k as f64))?;
            let id = format!("{i}:deg={}:k={k}", p.degree().unwrap());
            Ok(SuiteRow::new(id, r.max_abs_r, r.bound, r.bound - r.max_abs_r, r.pass))
        })
    }
}

impl VerificationSuite for LevelCrossings {
    fn name(&self) -> &'static str {
        "level-crossings"
    }
    fn describe(&self) -> &'static str {
        "best level crossing count of random trigonometric R against floor(L/(2N))"
    }
    fn rows(&self, cfg: &SuiteConfig) -> Result<Vec<SuiteRow>> {
        par_rows(cfg.count(50), |i| {
            let (r, delta) = random_trig_instance(&mut cfg.rng(i));
            let rep = check_level_crossings(&r, delta, cfg.quad_tol);
            let id = format!("{i}:deg={}", r.degree());
            let row = SuiteRow::new(id, rep.crossings as f64, rep.bound as f64, rep.crossings as f64 - rep.bound as f64, rep.pass);
            Ok(row.with_note(format!("grid={}", rep.grid)))
        })
    }
}

impl VerificationSuite for SignChangeBound {
    fn name(&self) -> &'static str {
        "sign-change-bound"
    }
    fn describe(&self) -> &'static str {
        "NZ* against the NC_k-based lower bound on the local-l1 instances"
    }
    fn rows(&self, cfg: &SuiteConfig) -> Result<Vec<SuiteRow>> {
        par_rows(cfg.count(100), |i| {
            let (p, k) = random_sr_instance(&mut cfg.rng(i));
            let r = check_sign_change_bound(&p, k)?;
            let id = format!("{i}:deg={}:k={k}", p.degree().unwrap());
            let note = r.variant_bound.map(|v| format!("variant_bound={v:.6e}")).unwrap_or_default();
            Ok(SuiteRow::new(id, r.nz_star as f64, r.bound, r.nz_star as f64 - r.bound, r.pass).with_note(note))
        })
    }
}

impl VerificationSuite for IntegerSolve {
    fn name(&self) -> &'static str {
        "integer-solve"
    }
    fn describe(&self) -> &'static str {
        "max |x| of A x = b against M^{d-1} d^{d/2} max |b| for random invertible integer A"
    }
    fn rows(&self, cfg: &SuiteConfig) -> Result<Vec<SuiteRow>> {
        par_rows(cfg.count(10_000), |i| {
            let (a, b) = random_invertible_system(&mut cfg.rng(i));
            let r = check_integer_solve_bound(&a, &b)?;
            Ok(SuiteRow::new(format!("{i}:d={}", r.d), r.max_abs_x, r.bound, r.bound - r.max_abs_x, r.pass))
        })
    }
}

impl VerificationSuite for WindowPeriod {
    fn name(&self) -> &'static str {
        "window-period"
    }
    fn describe(&self) -> &'static str {
        "window rank and detected period of eventually periodic coefficient sequences"
    }
    fn rows(&self, cfg: &SuiteConfig) -> Result<Vec<SuiteRow>> {
        let per: Result<Vec<Vec<SuiteRow>>> = (0..cfg.count(50))
            .into_par_iter()
            .map(|i| {
                let mut rng = cfg.rng(i);
                let p = 1 + rng.below(6) as usize;
                let d_m = lcm_upto(p as u64).iter_u64_digits().next().unwrap_or(1) as usize;
                let prefix = rng.below(10) as usize;
                let block: Vec<i64> = (0..p).map(|_| rng.range_i64(-1, 1)).collect();
                let mut a: Vec<i64> = (0..prefix).map(|_| rng.range_i64(-1, 1)).collect();
                a.extend((0..2 * d_m + 40).map(|j| block[j % p]));
                let rank = window_rank(&a[prefix..], p + 2);
                let period = detect_period(&a[prefix..], p).unwrap_or(0);
                // Coefficients of P (z^{d_m} - 1)^2 vanish deep inside the periodic part.
                let beta: Vec<i64> = (prefix + 2 * d_m..a.len()).map(|j| a[j] - 2 * a[j - d_m] + a[j - 2 * d_m]).collect();
                let beta_period = detect_period(&beta, d_m).unwrap_or(0);
                let ok_beta = beta_period > 0 && d_m.is_multiple_of(beta_period);
                Ok(vec![
                    SuiteRow::new(format!("{i}:rank:p={p}"), rank as f64, p as f64, p as f64 - rank as f64, rank <= p),
                    SuiteRow::new(
                        format!("{i}:period:p={p}"),
                        period as f64,
                        p as f64,
                        p as f64 - period as f64,
                        period > 0 && p.is_multiple_of(period),
                    ),
                    SuiteRow::new(format!("{i}:beta:d_m={d_m}"), beta_period as f64, d_m as f64, 0.0, ok_beta),
                ])
            })
            .collect();
        Ok(per?.into_iter().flatten().collect())
    }
}

fn corpus_rows<F>(cfg: &SuiteConfig, f: F) -> Result<Vec<SuiteRow>>
where
    F: Fn(&str, &IntPoly, &CoeffSet) -> Result<SuiteRow> + Sync + Send,
{
    let corpus = corpus(cfg.seed);
    corpus
        .par_iter()
        .map(|(id, p, s)| match f(id, p, s) {
            Err(Error::BudgetExceeded { what, required, budget }) => {
                Ok(SuiteRow::skipped(id.clone(), format!("{what} = {required} exceeds budget {budget}")))
            }
            other => other,
        })
        .collect()
}

impl VerificationSuite for SmallRuns {
    fn name(&self) -> &'static str {
        "small-runs"
    }
    fn describe(&self) -> &'static str {
        "longest run of small coefficients of F = P (z^{d_m} - 1)^2 Q against (|S|+2)^{4m+2} + 6d + 3"
    }
    fn rows(&self, cfg: &SuiteConfig) -> Result<Vec<SuiteRow>> {
        corpus_rows(cfg, |id, p, s| {
            let r = verify_small_run_bound(p, s, cfg.degree_budget)?;
            let run = r.longest_run.map_or(-1.0, |v| v as f64);
            let bound: f64 = r.bound.parse().unwrap_or(f64::INFINITY);
            let note = format!("d={} m={} q={} near_zero={} bits={}", r.d, r.m, r.q, r.near_zero, r.precision_bits);
            Ok(SuiteRow::new(id, run, bound, bound - run, r.pass).with_note(note))
        })
    }
}

impl VerificationSuite for SupportSize {
    fn name(&self) -> &'static str {
        "support-size"
    }
    fn describe(&self) -> &'static str {
        "log log q of F against the log of the support-size bound"
    }
    fn rows(&self, cfg: &SuiteConfig) -> Result<Vec<SuiteRow>> {
        corpus_rows(cfg, |id, p, s| {
            let r = verify_support_size_bound(p, s, cfg.degree_budget)?;
            let lhs = r.log_q.ln();
            let note = format!("d={} m={} q={} near_zero={}", r.d, r.m, r.q, r.near_zero);
            Ok(SuiteRow::new(id, lhs, r.log_bound, r.log_bound - lhs, r.pass).with_note(note))
        })
    }
}

impl VerificationSuite for NcPh {
    fn name(&self) -> &'static str {
        "nc-ph"
    }
    fn describe(&self) -> &'static str {
        "NC(P (z^k - 1)) against (nu+1)(k + |S|^{u+1} + 3(u+1) + 2) for random R of degree u <= 3"
    }
    fn rows(&self, cfg: &SuiteConfig) -> Result<Vec<SuiteRow>> {
        let r_set = CoeffSet::new([-2, -1, 0, 1, 2]).unwrap();
        let corpus = corpus(cfg.seed);
        corpus
            .par_iter()
            .enumerate()
            .map(|(i, (id, p, s))| {
                let mut rng = cfg.rng(i);
                let u = 1 + rng.below(3) as usize;
                let r = random_poly(&r_set, u, rng.next_u64())?;
                let rep = nc_ph_bound(p, &r, s, None, cfg.degree_budget)?;
                let id = format!("{id}:u={u}");
                Ok(match (rep.skipped, rep.nc_ph) {
                    (Some(why), _) => SuiteRow::skipped(id, why),
                    (None, Some(nc)) => {
                        let mu: f64 = rep.mu.parse().unwrap_or(f64::INFINITY);
                        SuiteRow::new(id, nc as f64, mu, mu - nc as f64, rep.pass).with_note(format!("k={}", rep.k))
                    }
                    (None, None) => SuiteRow::skipped(id, "no count"),
                })
            })
            .collect()
    }
}

impl VerificationSuite for Totient {
    fn name(&self) -> &'static str {
        "totient"
    }
    fn describe(&self) -> &'static str {
        "phi(n) >= n / (8 log log n) for 4 <= n <= limit, one row per block of 10^5"
    }
    fn rows(&self, cfg: &SuiteConfig) -> Result<Vec<SuiteRow>> {
        let limit = cfg.totient_limit.max(4);
        let phi = totient_table(limit as usize);
        let block = 100_000u64;
        let starts: Vec<u64> = (0..).map(|b| 4 + b * block).take_while(|&s| s <= limit).collect();
        Ok(starts
            .into_par_iter()
            .map(|lo| {
                let hi = (lo + block - 1).min(limit);
                let (mut worst_n, mut worst) = (lo, f64::INFINITY);
                for n in lo..=hi {
                    let ratio = phi[n as usize] as f64 * 8.0 * (n as f64).ln().ln() / n as f64;
                    if ratio < worst {
                        worst = ratio;
                        worst_n = n;
                    }
                }
                SuiteRow::new(format!("{lo}..{hi}"), worst, 1.0, worst - 1.0, worst >= 1.0)
                    .with_note(format!("tightest n={worst_n}"))
            })
            .collect())
    }
}

impl VerificationSuite for Lcm {
    fn name(&self) -> &'static str {
        "lcm"
    }
    fn describe(&self) -> &'static str {
        "d_m = lcm(1..m) < 3^m for 1 <= m <= 30, compared exactly"
    }
    fn rows(&self, _cfg: &SuiteConfig) -> Result<Vec<SuiteRow>> {
        Ok((1..=30u32)
            .map(|m| {
                let d = lcm_upto(m as u64);
                let three = num_bigint::BigUint::from(3u32).pow(m);
                let ln = |v: &num_bigint::BigUint| v.to_string().parse::<f64>().unwrap().ln();
                let (lhs, rhs) = (ln(&d), ln(&three));
                SuiteRow::new(format!("m={m}"), lhs, rhs, rhs - lhs, d < three).with_note(format!("d_m={d}"))
            })
            .collect())
    }
}

impl VerificationSuite for Oracle {
    fn name(&self) -> &'static str {
        "oracle"
    }
    fn describe(&self) -> &'static str {
        "exact unimodular zero counts against the high-precision numeric oracle, degree <= 30 over {-2..2}"
    }
    fn rows(&self, cfg: &SuiteConfig) -> Result<Vec<SuiteRow>> {
        let s = CoeffSet::new([-2, -1, 0, 1, 2]).unwrap();
        let oc = OracleConfig::hundred_digits();
        par_rows(cfg.count(1000), |i| {
            let mut rng = cfg.rng(i);
            let n = 1 + rng.below(30) as usize;
            let p = random_selfreciprocal(&s, n, rng.next_u64())?;
            let exact = nz_unimodular(&p)?;
            let o = oracle_count(&p, &oc)?;
            let diff = (exact as f64 - o.nz as f64).abs();
            let pass = exact == o.nz && o.is_trustworthy();
            let note = format!("converged={} ambiguous={}", o.converged, o.ambiguous);
            Ok(SuiteRow::new(format!("{i}:deg={n}"), exact as f64, o.nz as f64, -diff, pass).with_note(note))
        })
    }
}

/// Every registered suite, in a fixed order.
pub fn suites() -> Vec<Box<dyn VerificationSuite>> {
    vec![
        Box::new(LittlewoodL1),
        Box::new(LocalL1),
        Box::new(Antiderivative),
        Box::new(LevelCrossings),
        Box::new(SignChangeBound),
        Box::new(IntegerSolve),
        Box::new(WindowPeriod),
        Box::new(SmallRuns),
        Box::new(SupportSize),
        Box::new(NcPh),
        Box::new(Totient),
        Box::new(Lcm),
        Box::new(Oracle),
    ]
}

pub fn suite_names() -> Vec<&'static str> {
    suites().iter().map(|s| s.name()).collect()
}

pub fn suite_by_name(name: &str) -> Result<Box<dyn VerificationSuite>> {
    suites()
        .into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| Error::Invalid(format!("unknown suite {name:?}; expected one of {}", suite_names().join(", "))))
}
