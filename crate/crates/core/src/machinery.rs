//! The companion polynomial of a cosine polynomial, the product
//! `F = P (z^{d_m} - 1)^2 Q`, and instance checks of the run-length,
//! support-size and `NC(PH)` bounds built on it.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hiprec::{arccos_enclosure, Fx};
use crate::poly::{to_cosine, CoeffSet, CosPoly, IntPoly};
use crate::zerocount::{default_isolator, rational_string, unimodular_count, zero_report_with, Interval};

/// Default cap on `d_m` (and on `k = d_v`) for the verifiers.
pub const DEFAULT_DEGREE_BUDGET: u64 = 1_000_000;

/// Coefficients of `F` below this magnitude count as zero.
pub const ZERO_THRESHOLD: f64 = 1e-30;

const Q_BITS: u32 = 256;
const Q_BITS_ESCALATED: u32 = 1024;

/// `d_m = lcm(1, ..., m)`, with `d_0 = 1`.
pub fn lcm_upto(m: u64) -> BigUint {
    (2..=m).fold(BigUint::one(), |acc, j| acc.lcm(&BigUint::from(j)))
}

/// `d_m < 3^m`.
pub fn lcm_below_three_pow(m: u32) -> bool {
    lcm_upto(m as u64) < BigUint::from(3u32).pow(m)
}

fn log_log(x: f64) -> f64 {
    x.ln().ln()
}

/// `floor(32 d log log(2d + 3))`.
pub fn m_of_d(d: usize) -> u64 {
    (32.0 * d as f64 * log_log(2.0 * d as f64 + 3.0)).floor() as u64
}

/// `floor(16 u log log(u + 3))`.
pub fn v_of_u(u: usize) -> u64 {
    (16.0 * u as f64 * log_log(u as f64 + 3.0)).floor() as u64
}

/// A sign change of `T` at `t_j` in `(0, pi)`: `t_j` lies in `[t_lo, t_hi]`
/// and `cos t_j` in `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignChange {
    pub x: Interval,
    pub t_lo: BigRational,
    pub t_hi: BigRational,
}

impl SignChange {
    pub fn contains_t(&self, t: &BigRational) -> bool {
        self.t_lo <= *t && *t <= self.t_hi
    }

    pub fn t_width(&self) -> BigRational {
        &self.t_hi - &self.t_lo
    }
}

impl Serialize for SignChange {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SignChange", 2)?;
        st.serialize_field("t_lo", &rational_string(&self.t_lo))?;
        st.serialize_field("t_hi", &rational_string(&self.t_hi))?;
        st.end()
    }
}

fn sign_changes_at(t: &CosPoly, bits: u32) -> Result<Vec<SignChange>> {
    let report = zero_report_with(t, default_isolator().as_ref(), Some(bits))?;
    let mut out: Vec<SignChange> = report
        .interior
        .into_iter()
        .filter(|r| r.multiplicity % 2 == 1)
        .map(|r| {
            let (t_lo, t_hi) = arccos_enclosure(&r.interval.lo, &r.interval.hi, bits + 16);
            SignChange { x: r.interval, t_lo, t_hi }
        })
        .collect();
    out.sort_by(|a, b| a.t_lo.cmp(&b.t_lo));
    Ok(out)
}

/// The points `t_1 < ... < t_d` of `(0, pi)` where `T` changes sign, each
/// enclosed in an interval narrower than `2^-53`.
pub fn sign_change_points(t: &CosPoly) -> Result<Vec<SignChange>> {
    let limit = BigRational::new(BigInt::one(), BigInt::one() << 53);
    let mut bits = 64;
    loop {
        let pts = sign_changes_at(t, bits)?;
        if pts.iter().all(|p| p.t_width() < limit) || bits >= 1024 {
            return Ok(pts);
        }
        bits *= 2;
    }
}

/// `Q(z) = prod_j (z - e^{i t_j})(z - e^{-i t_j}) = prod_j (z^2 - 2 cos(t_j) z + 1)`
/// together with the sign `(-1)^p` that makes
/// `(-1)^p T(t) e^{-idt} Q(e^{it}) >= 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompanionPoly {
    pub d: usize,
    pub sign_p: u8,
    pub roots: Vec<SignChange>,
    /// Working approximations of `cos t_j`, dyadic.
    #[serde(skip)]
    pub x_hat: Vec<BigRational>,
    /// Coefficients of the monic `Q`, low degree first, as fixed point.
    #[serde(skip)]
    pub coeffs: Vec<Fx>,
    pub precision_bits: u32,
    /// Number of points where the sign condition was checked exactly.
    pub validation_points: usize,
}

impl CompanionPoly {
    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(Fx::to_f64).collect()
    }

    /// Largest `|q_j - q_{2d-j}|`.
    pub fn palindrome_deviation(&self) -> f64 {
        let n = self.coeffs.len();
        (0..n).map(|j| (&self.coeffs[j] - &self.coeffs[n - 1 - j]).abs().to_f64()).fold(0.0, f64::max)
    }

    /// `e^{-idt} Q(e^{it}) = 2^d prod_j (cos t - cos t_j)`, in `f64`.
    pub fn real_form_f64(&self, t: f64) -> f64 {
        let x = t.cos();
        self.x_hat.iter().map(|xj| 2.0 * (x - xj.to_f64().unwrap_or(f64::NAN))).product()
    }
}

fn dyadic_midpoint(iv: &Interval, bits: u32) -> BigRational {
    let mid = (&iv.lo + &iv.hi) / BigRational::from_integer(BigInt::from(2));
    let scale = BigInt::one() << bits;
    let num = (mid.numer() * &scale).div_floor(mid.denom());
    BigRational::new(num, scale)
}

fn companion_at(t: &CosPoly, bits: u32) -> Result<Option<CompanionPoly>> {
    let roots = sign_changes_at(t, bits)?;
    let d = roots.len();
    let x_hat: Vec<BigRational> = roots
        .iter()
        .map(|r| if r.x.is_point() { r.x.lo.clone() } else { dyadic_midpoint(&r.x, bits) })
        .collect();
    // Exact product of the quadratics, then rounded to `bits`.
    let mut q: Vec<BigRational> = vec![BigRational::one()];
    for xj in &x_hat {
        let lin = -(xj * BigRational::from_integer(BigInt::from(2)));
        let mut next = vec![BigRational::zero(); q.len() + 2];
        for (i, c) in q.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c * &lin;
            next[i + 2] += c;
        }
        q = next;
    }
    let coeffs: Vec<Fx> = q.iter().map(|c| Fx::from_rational(c, bits)).collect();

    // Exact sign check of g(x) * prod (x - x_hat_j) at x = cos(t_i).
    let g = t.to_chebyshev_algebraic();
    let deg = t.degree().unwrap_or(0);
    let points = 64 * (deg + 2 * d).max(1);
    let mut seen_pos = false;
    let mut seen_neg = false;
    for i in 0..points {
        let ti = std::f64::consts::PI * (i as f64 + 0.5) / points as f64;
        let x = BigRational::from_float(ti.cos()).expect("finite");
        let mut v = g.eval_rational(&x);
        for xj in &x_hat {
            v *= &x - xj;
        }
        if v.is_positive() {
            seen_pos = true;
        } else if v.is_negative() {
            seen_neg = true;
        }
    }
    if seen_pos && seen_neg {
        return Ok(None);
    }
    Ok(Some(CompanionPoly {
        d,
        sign_p: u8::from(seen_neg),
        roots,
        x_hat,
        coeffs,
        precision_bits: bits,
        validation_points: points,
    }))
}

/// Companion polynomial of `T`, at 256 bits with one escalation to 1024.
pub fn companion(t: &CosPoly) -> Result<CompanionPoly> {
    if t.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    for bits in [Q_BITS, Q_BITS_ESCALATED] {
        if let Some(c) = companion_at(t, bits)? {
            return Ok(c);
        }
    }
    Err(Error::Unresolved("companion sign validation failed at 1024 bits".into()))
}

/// `F = P (z^{d_m} - 1)^2 Q` kept sparse.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FProduct {
    pub d: usize,
    pub m: u64,
    pub d_m: u64,
    pub degree: usize,
    /// Nonzero coefficients `(j, a_j)` of `F`, increasing in `j`.
    #[serde(skip)]
    pub support: Vec<(usize, Fx)>,
    /// Coefficients that were nonzero in working precision but fell
    /// below [`ZERO_THRESHOLD`].
    pub near_zero: usize,
    /// Nonzero count of the integer part `P (z^{d_m} - 1)^2`.
    pub integer_part_nc: usize,
    pub companion: CompanionPoly,
}

impl FProduct {
    pub fn q(&self) -> usize {
        self.support.len()
    }

    pub fn support_indices(&self) -> Vec<usize> {
        self.support.iter().map(|(j, _)| *j).collect()
    }
}

fn budget_error(what: &'static str, required: &BigUint, budget: u64) -> Error {
    Error::BudgetExceeded { what, required: required.to_string(), budget: budget.to_string() }
}

/// Sparse `P (z^{k} - 1)^2`.
fn times_shift_diff_squared(p: &IntPoly, k: usize) -> BTreeMap<usize, BigInt> {
    let mut out: BTreeMap<usize, BigInt> = BTreeMap::new();
    for (j, a) in p.coeffs().iter().enumerate().filter(|(_, a)| !a.is_zero()) {
        *out.entry(j).or_default() += a;
        *out.entry(j + k).or_default() -= a * 2;
        *out.entry(j + 2 * k).or_default() += a;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Builds `F` for a self-reciprocal `P` of even degree.
pub fn build_f(p: &IntPoly, budget: u64) -> Result<FProduct> {
    build_f_at(p, budget, None)
}

fn build_f_at(p: &IntPoly, budget: u64, bits: Option<u32>) -> Result<FProduct> {
    let t = to_cosine(p)?;
    let comp = match bits {
        Some(b) => companion_at(&t, b)?.ok_or_else(|| Error::Unresolved("companion sign validation".into()))?,
        None => companion(&t)?,
    };
    let d = comp.d;
    let m = m_of_d(d);
    let d_m_big = lcm_upto(m);
    let d_m = match d_m_big.to_u64() {
        Some(v) if v <= budget => v,
        _ => return Err(budget_error("d_m", &d_m_big, budget)),
    };
    let h = times_shift_diff_squared(p, d_m as usize);
    let integer_part_nc = h.len();
    let prec = comp.precision_bits;
    let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
    for (j, hj) in &h {
        for (i, qi) in comp.coeffs.iter().enumerate() {
            *acc.entry(j + i).or_default() += hj * &qi.m;
        }
    }
    let degree = p.degree().unwrap_or(0) + 2 * d_m as usize + 2 * d;
    let mut near_zero = 0;
    let support: Vec<(usize, Fx)> = acc
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(j, v)| (j, Fx { m: v, prec }))
        .filter(|(_, v)| {
            let small = v.abs().to_f64() < ZERO_THRESHOLD;
            near_zero += usize::from(small);
            !small
        })
        .collect();
    Ok(FProduct { d, m, d_m, degree, support, near_zero, integer_part_nc, companion: comp })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmallRunReport {
    pub d: usize,
    pub m: u64,
    pub d_m: u64,
    pub q: usize,
    pub near_zero: usize,
    /// `(4M)^{-2d} (2d+1)^{-d-1/2}`.
    pub threshold: f64,
    /// Largest `v - u` over maximal runs of small coefficients.
    pub longest_run: Option<usize>,
    /// `(|S| + 2)^{4m+2} + 6d + 3`, decimal.
    pub bound: String,
    pub precision_bits: u32,
    pub pass: bool,
}

fn run_bound(s_len: usize, m: u64, d: usize) -> BigUint {
    BigUint::from(s_len + 2).pow((4 * m + 2) as u32) + BigUint::from(6 * d + 3)
}

fn longest_small_run(f: &FProduct, threshold: f64) -> Option<usize> {
    let mut best: Option<usize> = None;
    let mut start: Option<usize> = None;
    for (k, (_, a)) in f.support.iter().enumerate() {
        if a.abs().to_f64() < threshold {
            let u = *start.get_or_insert(k);
            best = Some(best.map_or(k - u, |b| b.max(k - u)));
        } else {
            start = None;
        }
    }
    best
}

fn check_in_set(p: &IntPoly, s: &CoeffSet) -> Result<()> {
    if p.coeffs().iter().all(|c| c.to_i64().is_some_and(|v| s.contains(v))) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("coefficients of {p} are not all in {s}")))
    }
}

/// Runs of consecutive support coefficients of `F` below the threshold
/// are shorter than `(|S| + 2)^{4m+2} + 6d + 3`.
pub fn verify_small_run_bound(p: &IntPoly, s: &CoeffSet, budget: u64) -> Result<SmallRunReport> {
    check_in_set(p, s)?;
    let mut report = small_run_at(p, s, budget, None)?;
    if !report.pass {
        report = small_run_at(p, s, budget, Some(Q_BITS_ESCALATED))?;
    }
    Ok(report)
}

fn small_run_at(p: &IntPoly, s: &CoeffSet, budget: u64, bits: Option<u32>) -> Result<SmallRunReport> {
    let f = build_f_at(p, budget, bits)?;
    let mm = s.max_abs() as f64;
    let d = f.d as f64;
    let threshold = (4.0 * mm).powf(-2.0 * d) * (2.0 * d + 1.0).powf(-d - 0.5);
    let longest_run = longest_small_run(&f, threshold);
    let bound = run_bound(s.len(), f.m, f.d);
    let pass = longest_run.is_none_or(|r| BigUint::from(r) < bound);
    Ok(SmallRunReport {
        d: f.d,
        m: f.m,
        d_m: f.d_m,
        q: f.q(),
        near_zero: f.near_zero,
        threshold,
        longest_run,
        bound: bound.to_string(),
        precision_bits: f.companion.precision_bits,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupportSizeReport {
    pub d: usize,
    pub m: u64,
    pub q: usize,
    pub near_zero: usize,
    pub log_q: f64,
    /// Natural log of `60 (4M)^{2d+1} (2d+1)^{d+3/2} ((|S|+2)^{4m+2} + 6d + 3)`.
    pub log_bound: f64,
    pub pass: bool,
}

fn ln_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (v >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `log q <= 60 (4M)^{2d+1} (2d+1)^{d+3/2} ((|S|+2)^{4m+2} + 6d + 3)`,
/// compared after taking one more logarithm of both sides.
pub fn verify_support_size_bound(p: &IntPoly, s: &CoeffSet, budget: u64) -> Result<SupportSizeReport> {
    check_in_set(p, s)?;
    let f = build_f(p, budget)?;
    let d = f.d as f64;
    let mm = s.max_abs() as f64;
    let log_bound = 60f64.ln()
        + (2.0 * d + 1.0) * (4.0 * mm).ln()
        + (d + 1.5) * (2.0 * d + 1.0).ln()
        + ln_big(&run_bound(s.len(), f.m, f.d));
    let log_q = (f.q() as f64).ln();
    let pass = log_q <= 0.0 || log_q.ln() <= log_bound;
    Ok(SupportSizeReport { d: f.d, m: f.m, q: f.q(), near_zero: f.near_zero, log_q, log_bound, pass })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NcPhReport {
    pub u: usize,
    pub nu: usize,
    pub v: u64,
    /// `k = d_v`, decimal.
    pub k: String,
    /// `(nu + 1)(k + |S|^{u+1} + 3(u+1) + 2)`, decimal.
    pub mu: String,
    pub nc_ph: Option<usize>,
    pub skipped: Option<String>,
    pub pass: bool,
}

/// Sparse `NC(P (z^k - 1))`.
pub fn nc_times_shift_diff(p: &IntPoly, k: usize) -> usize {
    let mut out: BTreeMap<usize, BigInt> = BTreeMap::new();
    for (j, a) in p.coeffs().iter().enumerate().filter(|(_, a)| !a.is_zero()) {
        *out.entry(j + k).or_default() += a;
        *out.entry(j).or_default() -= a;
    }
    out.values().filter(|v| !v.is_zero()).count()
}

/// With `NC(P R) <= nu`, `u = deg R`, `v = floor(16u log log(u+3))` and
/// `k = d_v`: `NC(P (z^k - 1)) <= (nu + 1)(k + |S|^{u+1} + 3(u+1) + 2)`.
pub fn nc_ph_bound(p: &IntPoly, r: &IntPoly, s: &CoeffSet, nu: Option<usize>, budget: u64) -> Result<NcPhReport> {
    if r.is_zero() || p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    check_in_set(p, s)?;
    let actual = (p * r).nc();
    let nu = nu.unwrap_or(actual);
    if nu < actual {
        return Err(Error::Invalid(format!("NC(PR) = {actual} exceeds nu = {nu}")));
    }
    let u = r.degree().unwrap();
    let v = v_of_u(u);
    let k = lcm_upto(v);
    let mu = BigUint::from(nu + 1)
        * (&k + BigUint::from(s.len()).pow(u as u32 + 1) + BigUint::from(3 * (u + 1) + 2));
    let base = NcPhReport { u, nu, v, k: k.to_string(), mu: mu.to_string(), nc_ph: None, skipped: None, pass: true };
    let Some(kk) = k.to_u64().filter(|&kk| kk <= budget) else {
        return Ok(NcPhReport { skipped: Some(format!("k = {k} exceeds budget {budget}")), ..base });
    };
    let nc_ph = nc_times_shift_diff(p, kk as usize);
    Ok(NcPhReport { nc_ph: Some(nc_ph), pass: BigUint::from(nc_ph) <= mu, ..base })
}

/// One row of the bound scatter: `NZ*` against `(log log log |P(1)|)^{1-eps}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub poly_id: String,
    pub degree: usize,
    pub abs_p1: String,
    pub nz: usize,
    pub nz_star: usize,
    pub epsilon: f64,
    /// `None` when `|P(1)| <= e^e`.
    pub bound_value: Option<f64>,
    pub nc_1: usize,
    pub nc_2: usize,
    pub nc_3: usize,
}

fn ln_bigint_abs(v: &BigInt) -> f64 {
    ln_big(v.magnitude())
}

/// Fills a [`BoundRow`] for a self-reciprocal `P`; odd degrees go through
/// the `(z + 1) P` lift.
pub fn theorem_bound_report(poly_id: &str, p: &IntPoly, epsilon: f64) -> Result<BoundRow> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Invalid(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_self_reciprocal() {
        return Err(Error::NotSelfReciprocal);
    }
    let count = unimodular_count(p, default_isolator().as_ref(), None)?;
    let p1 = p.eval_at_one();
    let bound_value = if p1.is_zero() {
        None
    } else {
        let lll = ln_bigint_abs(&p1).ln().ln();
        (lll > 0.0).then(|| lll.powf(1.0 - epsilon))
    };
    Ok(BoundRow {
        poly_id: poly_id.to_string(),
        degree: p.degree().unwrap(),
        abs_p1: p1.abs().to_string(),
        nz: count.nz,
        nz_star: count.nz_star.unwrap_or(0),
        epsilon,
        bound_value,
        nc_1: p.nc_k(1),
        nc_2: p.nc_k(2),
        nc_3: p.nc_k(3),
    })
}

/// Euler's totient by trial factorisation.
pub fn totient(n: u64) -> u64 {
    let (mut n_left, mut phi, mut f) = (n, n, 2u64);
    while f * f <= n_left {
        if n_left % f == 0 {
            while n_left % f == 0 {
                n_left /= f;
            }
            phi -= phi / f;
        }
        f += 1;
    }
    if n_left > 1 {
        phi -= phi / n_left;
    }
    phi
}

/// Totients of `0..=limit` by a sieve.
pub fn totient_table(limit: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=limit as u64).collect();
    for p in 2..=limit {
        if phi[p] == p as u64 {
            for k in (p..=limit).step_by(p) {
                phi[k] -= phi[k] / p as u64;
            }
        }
    }
    phi
}

/// `phi(n) >= n / (8 log log n)`, for `n > 3`.
pub fn totient_check(n: u64) -> Result<bool> {
    if n <= 3 {
        return Err(Error::Invalid(format!("need n > 3, got {n}")));
    }
    Ok(totient(n) as f64 >= n as f64 / (8.0 * log_log(n as f64)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TotientSweep {
    pub limit: u64,
    pub checked: u64,
    pub failures: Vec<u64>,
    /// `n` minimising `phi(n) 8 log log n / n`, and that ratio.
    pub tightest: (u64, f64),
}

/// [`totient_check`] for every `4 <= n <= limit`.
pub fn totient_sweep(limit: u64) -> TotientSweep {
    let phi = totient_table(limit as usize);
    let mut failures = Vec::new();
    let mut tightest = (0, f64::INFINITY);
    for n in 4..=limit {
        let ratio = phi[n as usize] as f64 * 8.0 * log_log(n as f64) / n as f64;
        if ratio < 1.0 {
            failures.push(n);
        }
        if ratio < tightest.1 {
            tightest = (n, ratio);
        }
    }
    TotientSweep { limit, checked: limit.saturating_sub(3), failures, tightest }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::counterexample_t;
    use crate::hiprec::pi_fx;

    #[test]
    fn lcm_values() {
        assert_eq!(lcm_upto(0), BigUint::one());
        assert_eq!(lcm_upto(1), BigUint::one());
        assert_eq!(lcm_upto(6), BigUint::from(60u32));
        assert_eq!(lcm_upto(10), BigUint::from(2520u32));
        assert_eq!(lcm_upto(15), BigUint::from(360360u32));
        for m in 1..=30u32 {
            assert!(lcm_below_three_pow(m));
            let (a, b) = (lcm_upto(m as u64), lcm_upto(m as u64 + 1));
            assert!((&b % &a).is_zero());
            let ratio = (&b / &a).to_u64().unwrap();
            assert!(ratio == 1 || crate::families::is_prime(ratio) || prime_power(ratio));
        }
    }

    fn prime_power(v: u64) -> bool {
        let p = (2..=v).find(|p| v.is_multiple_of(*p)).unwrap();
        let mut w = v;
        while w.is_multiple_of(p) {
            w /= p;
        }
        w == 1
    }

    #[test]
    fn parameters() {
        assert_eq!(m_of_d(0), 0);
        assert_eq!(m_of_d(1), 15);
        assert_eq!(v_of_u(1), 5);
        assert_eq!(v_of_u(2), 15);
    }

    #[test]
    fn sign_changes() {
        let t = CosPoly::from_i64s(&[1, 2]);
        let pts = sign_change_points(&t).unwrap();
        assert_eq!(pts.len(), 1);
        let two_pi_3 = pi_fx(128).mul_int(2).to_rational() / BigRational::from_integer(BigInt::from(3));
        let slack = BigRational::new(BigInt::one(), BigInt::one() << 100);
        assert!(pts[0].t_lo <= &two_pi_3 + &slack && &two_pi_3 - &slack <= pts[0].t_hi);
        assert!(sign_change_points(&CosPoly::from_i64s(&[1, 1])).unwrap().is_empty());
        let half_pi = pi_fx(128).to_rational() / BigRational::from_integer(BigInt::from(2));
        for n in [1, 2, 7, 50] {
            let pts = sign_change_points(&counterexample_t(n)).unwrap();
            assert_eq!(pts.len(), 1);
            assert!(pts[0].t_lo <= &half_pi + &slack && &half_pi - &slack <= pts[0].t_hi);
            assert!(pts[0].t_width() < BigRational::new(BigInt::one(), BigInt::one() << 53));
        }
    }

    #[test]
    fn companion_examples() {
        let c = companion(&CosPoly::from_i64s(&[1, 2])).unwrap();
        assert_eq!((c.d, c.sign_p), (1, 0));
        assert_eq!(c.coeffs_f64(), vec![1.0, 1.0, 1.0]);
        let c = companion(&CosPoly::from_i64s(&[-1, -2])).unwrap();
        assert_eq!((c.d, c.sign_p), (1, 1));
        let c = companion(&CosPoly::from_i64s(&[3, 1])).unwrap();
        assert_eq!((c.d, c.sign_p, c.coeffs_f64()), (0, 0, vec![1.0]));
        // Irrational sign changes: palindromic, monic, nonnegative product.
        let t = CosPoly::from_i64s(&[0, 0, 0, 1]);
        let c = companion(&t).unwrap();
        assert_eq!(c.d, 3);
        assert_eq!(c.palindrome_deviation(), 0.0);
        assert_eq!(c.coeffs.first().unwrap().to_f64(), 1.0);
        assert_eq!(c.coeffs.last().unwrap().to_f64(), 1.0);
        let sgn = if c.sign_p == 1 { -1.0 } else { 1.0 };
        for i in 0..2000 {
            let x = -3.1 + 6.2 * i as f64 / 2000.0;
            assert!(sgn * t.eval_f64(x) * c.real_form_f64(x) >= -1e-9);
        }
    }

    #[test]
    fn f_product() {
        let p = IntPoly::from_i64s(&[1, 1, 1]);
        let f = build_f(&p, DEFAULT_DEGREE_BUDGET).unwrap();
        assert_eq!((f.d, f.m, f.d_m), (1, 15, 360360));
        assert_eq!(f.degree, 2 + 2 * 360360 + 2);
        // F(1) = 0 because of the squared factor.
        let sum: f64 = f.support.iter().map(|(_, a)| a.to_f64()).sum();
        assert!(sum.abs() < 1e-60 || sum == 0.0);
        let dense = p.shift_diff(360360).shift_diff(360360);
        assert_eq!(f.integer_part_nc, dense.nc());
        // d = 0: F = P (z - 1)^2.
        let p0 = IntPoly::from_i64s(&[1, 3, 1]);
        let f0 = build_f(&p0, DEFAULT_DEGREE_BUDGET).unwrap();
        assert_eq!((f0.d, f0.m, f0.d_m, f0.q()), (0, 0, 1, 5));
        assert!(matches!(
            build_f(&IntPoly::from_i64s(&[1, 0, 0, 0, 1]), DEFAULT_DEGREE_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn run_and_support_bounds() {
        let s = CoeffSet::littlewood();
        let p = IntPoly::from_i64s(&[1, 1, 1]);
        let r7 = verify_small_run_bound(&p, &s, DEFAULT_DEGREE_BUDGET).unwrap();
        assert!(r7.pass, "{r7:?}");
        let r8 = verify_support_size_bound(&p, &s, DEFAULT_DEGREE_BUDGET).unwrap();
        assert!(r8.pass, "{r8:?}");
        let r1 = verify_support_size_bound(&IntPoly::one(), &CoeffSet::new([1]).unwrap(), DEFAULT_DEGREE_BUDGET).unwrap();
        assert!(r1.pass);
        // One-signed T: d = 0 and the bound is (|S| + 2)^2 + 3.
        let r0 = verify_small_run_bound(&IntPoly::from_i64s(&[1, 1, 1, 1, 1]).shift_diff(1).shift_diff(1), &CoeffSet::new([-2, -1, 0, 1]).unwrap(), DEFAULT_DEGREE_BUDGET);
        assert!(r0.is_err(), "not self-reciprocal");
        let pos = IntPoly::from_i64s(&[1, 3, 1]);
        let r = verify_small_run_bound(&pos, &CoeffSet::new([1, 3]).unwrap(), DEFAULT_DEGREE_BUDGET).unwrap();
        assert_eq!((r.d, r.bound.as_str()), (0, "19"));
        assert!(r.pass);
    }

    #[test]
    fn nc_ph_examples() {
        let s = CoeffSet::new([-1, 0, 1]).unwrap();
        let p = IntPoly::from_i64s(&[1, 1, 1]);
        let r = nc_ph_bound(&p, &IntPoly::from_i64s(&[-1, 1]), &s, None, DEFAULT_DEGREE_BUDGET).unwrap();
        assert_eq!((r.u, r.nu, r.v, r.k.as_str(), r.nc_ph), (1, 2, 5, "60", Some(6)));
        assert!(r.pass);
        let r = nc_ph_bound(&p, &IntPoly::one(), &s, None, DEFAULT_DEGREE_BUDGET).unwrap();
        assert!(r.pass);
        let r = nc_ph_bound(&p, &IntPoly::from_i64s(&[1, 0, 0, 1]), &s, None, DEFAULT_DEGREE_BUDGET).unwrap();
        assert!(r.skipped.is_some() && r.pass);
    }

    #[test]
    fn bound_rows() {
        let p = IntPoly::from_i64s(&[1; 11]);
        let row = theorem_bound_report("ones", &p, 0.5).unwrap();
        assert_eq!((row.nz, row.nz_star, row.abs_p1.as_str()), (10, 10, "11"));
        assert_eq!(row.bound_value, None);
        let big = IntPoly::from_i64s(&[1, 4, 6, 4, 1]);
        let row = theorem_bound_report("binomial", &big, 0.5).unwrap();
        assert_eq!((row.nz, row.nz_star), (4, 0));
        assert!(row.bound_value.is_some());
        assert!(theorem_bound_report("x", &IntPoly::from_i64s(&[1, 2]), 0.5).is_err());
    }

    #[test]
    fn totients() {
        assert_eq!(totient(210), 48);
        assert_eq!(totient(1), 1);
        let table = totient_table(2000);
        for n in 1..=2000u64 {
            assert_eq!(table[n as usize], totient(n));
        }
        assert!(totient_check(4).unwrap() && totient_check(210).unwrap());
        assert!(totient_check(3).is_err());
        let sweep = totient_sweep(100_000);
        assert!(sweep.failures.is_empty());
    }
}
