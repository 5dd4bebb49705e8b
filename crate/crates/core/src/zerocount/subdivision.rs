//! Certified subdivision for cosine polynomials of large degree.
//!
//! Works on `S(x) = sum s_k T_k(x)` over dyadic cells of `(-1, 1)`. With
//! `t = arccos x` and `h` the length of a cell in `t`, a cell is discarded when
//! `S` keeps one sign at its ends and `min |S| > B2 h^2 / 8`, where
//! `B2 = sum k^2 |s_k|` bounds `|d^2 S/dt^2|`. A cell is resolved as holding at
//! most one root when `dS/dt = -sin(t) W(x)` passes the same test with
//! `B3 = sum k^3 |s_k|`, `W = sum k s_k U_{k-1}`. Values come from a double
//! precision Clenshaw recurrence with a running error bound, falling back to
//! exact integer evaluation whenever a sign is not certified.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Interval;
use crate::error::{Error, Result};
use crate::hiprec::big_to_f64_scaled;

const GRID_BITS: u32 = 30;
const MAX_BITS: u32 = 200;
const PI_SQ_UPPER: f64 = 9.8697;
const SAFETY: f64 = 1.0 + 1e-9;

/// Dyadic rational `n / 2^e` with `n` odd or `e == 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Dy {
    n: BigInt,
    e: u32,
}

impl Dy {
    fn new(mut n: BigInt, mut e: u32) -> Self {
        if n.is_zero() {
            return Self { n, e: 0 };
        }
        let tz = n.trailing_zeros().unwrap_or(0).min(e as u64) as u32;
        n >>= tz;
        e -= tz;
        Self { n, e }
    }

    fn int(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    fn at_exp(&self, e: u32) -> BigInt {
        &self.n << (e - self.e)
    }

    fn mid(a: &Dy, b: &Dy) -> Dy {
        let e = a.e.max(b.e);
        Dy::new(a.at_exp(e) + b.at_exp(e), e + 1)
    }

    /// `self + k * 2^-bits`.
    fn offset(&self, k: i64, bits: u32) -> Dy {
        let e = self.e.max(bits);
        Dy::new(self.at_exp(e) + (BigInt::from(k) << (e - bits)), e)
    }

    fn sub_f64(a: &Dy, b: &Dy) -> f64 {
        let e = a.e.max(b.e);
        big_to_f64_scaled(&(a.at_exp(e) - b.at_exp(e)), e as i64)
    }

    fn f64_exact(&self) -> Option<f64> {
        (self.n.bits() <= 53).then(|| big_to_f64_scaled(&self.n, self.e as i64))
    }

    fn to_f64(&self) -> f64 {
        big_to_f64_scaled(&self.n, self.e as i64)
    }

    fn to_rational(&self) -> BigRational {
        BigRational::new(self.n.clone(), BigInt::one() << self.e)
    }

    fn from_f64_rounded(v: f64, bits: u32) -> Dy {
        let n = (v * (1u64 << bits) as f64).round() as i64;
        Dy::new(BigInt::from(n), bits)
    }
}

/// A value known to lie within `err` of `val` (both in scaled units).
#[derive(Clone, Copy, Debug)]
struct Approx {
    val: f64,
    err: f64,
}

impl Approx {
    fn certified_sign(&self) -> Option<i8> {
        if self.val.abs() > self.err {
            Some(if self.val > 0.0 { 1 } else { -1 })
        } else {
            None
        }
    }

    fn lower_abs(&self) -> f64 {
        (self.val.abs() - self.err).max(0.0)
    }
}

pub(crate) struct ChebEval {
    s: Vec<BigInt>,
    /// `W` coefficients in the `U` basis: `w_j = (j + 1) s_{j+1}`.
    w: Vec<BigInt>,
    sf: Vec<f64>,
    wf: Vec<f64>,
    scale: i64,
    b2: f64,
    b3: f64,
}

impl ChebEval {
    pub(crate) fn new(s: &[BigInt]) -> Self {
        let s = s.to_vec();
        let w: Vec<BigInt> = (1..s.len()).map(|k| &s[k] * BigInt::from(k)).collect();
        let scale = s.iter().chain(w.iter()).map(|c| c.bits() as i64).max().unwrap_or(0);
        let sf: Vec<f64> = s.iter().map(|c| big_to_f64_scaled(c, scale)).collect();
        let wf: Vec<f64> = w.iter().map(|c| big_to_f64_scaled(c, scale)).collect();
        let b2 = sf.iter().enumerate().map(|(k, c)| (k * k) as f64 * c.abs()).sum::<f64>() * SAFETY;
        let b3 = sf.iter().enumerate().map(|(k, c)| (k * k * k) as f64 * c.abs()).sum::<f64>() * SAFETY;
        Self { s, w, sf, wf, scale, b2, b3 }
    }

    fn degree(&self) -> usize {
        self.s.len() - 1
    }

    /// Clenshaw with a running bound on the accumulated rounding error; the
    /// error made at step `k` reaches the result with weight at most `k + 1`.
    fn clenshaw_f64(coeffs: &[f64], x: f64, t_series: bool) -> Approx {
        let (mut b1, mut b2) = (0.0f64, 0.0f64);
        let mut acc = 0.0f64;
        let lowest = usize::from(t_series);
        for k in (lowest..coeffs.len()).rev() {
            let t = coeffs[k] + 2.0 * x * b1 - b2;
            acc += (k as f64 + 1.0) * (coeffs[k].abs() + (2.0 * x * b1).abs() + b2.abs() + t.abs());
            b2 = b1;
            b1 = t;
        }
        let val = if t_series {
            let v = coeffs.first().copied().unwrap_or(0.0) + x * b1 - b2;
            acc += coeffs[0].abs() + (x * b1).abs() + b2.abs() + v.abs();
            v
        } else {
            b1
        };
        Approx { val, err: acc * 4.0 * f64::EPSILON + f64::MIN_POSITIVE }
    }

    /// Exact `sum c_k T_k(x)` (or `U_k`) times `2^(e * deg)` at `x = a / 2^e`.
    fn clenshaw_exact(coeffs: &[BigInt], x: &Dy, t_series: bool) -> (BigInt, i64) {
        let n = coeffs.len() - 1;
        let e = x.e as usize;
        let two_a: BigInt = &x.n << 1;
        let (mut b1, mut b2) = (BigInt::zero(), BigInt::zero());
        let lowest = usize::from(t_series);
        for k in (lowest..=n).rev() {
            let t = (&coeffs[k] << (e * (n - k))) + &two_a * &b1 - (&b2 << (2 * e));
            b2 = std::mem::replace(&mut b1, t);
        }
        let val = if t_series {
            (&coeffs[0] << (e * n)) + &x.n * &b1 - (&b2 << (2 * e))
        } else {
            b1
        };
        (val, (e * n) as i64)
    }

    fn eval_series(&self, x: &Dy, t_series: bool) -> Approx {
        let (cf, cb) = if t_series { (&self.sf, &self.s) } else { (&self.wf, &self.w) };
        if cb.is_empty() {
            return Approx { val: 0.0, err: 0.0 };
        }
        if let Some(xf) = x.f64_exact() {
            let a = Self::clenshaw_f64(cf, xf, t_series);
            if a.certified_sign().is_some() {
                return a;
            }
        }
        let (v, shift) = Self::clenshaw_exact(cb, x, t_series);
        let val = big_to_f64_scaled(&v, shift + self.scale);
        if val == 0.0 && !v.is_zero() {
            // Underflow: keep the exact sign with a negligible magnitude.
            let tiny = if v.is_negative() { -f64::MIN_POSITIVE } else { f64::MIN_POSITIVE };
            return Approx { val: tiny, err: 0.0 };
        }
        Approx { val, err: val.abs() * 1e-12 }
    }

    fn value(&self, x: &Dy) -> Approx {
        self.eval_series(x, true)
    }

    fn slope(&self, x: &Dy) -> Approx {
        self.eval_series(x, false)
    }

    /// Exact sign of `S(x)`.
    fn sign(&self, x: &Dy) -> i8 {
        let a = self.value(x);
        match a.certified_sign() {
            Some(s) => s,
            None if a.val == 0.0 && a.err == 0.0 => 0,
            None => unreachable!("exact fallback always certifies"),
        }
    }
}

struct Cell {
    a: Dy,
    b: Dy,
    sa: i8,
    sb: i8,
}

/// Upper bound for the squared `t`-length of the cell `[a, b]`.
fn h_sq(a: &Dy, b: &Dy) -> f64 {
    let w = Dy::sub_f64(b, a);
    let mut bound = PI_SQ_UPPER * w / 2.0;
    let one = Dy::int(1);
    let minus_one = Dy::int(-1);
    if *a != minus_one && *b != one {
        let m = one_minus_sq(a).min(one_minus_sq(b));
        if m > 0.0 {
            bound = bound.min(w * w / m);
        }
    }
    bound * SAFETY
}

/// `1 - x^2 = (1 - x)(1 + x)`, from exact differences.
fn one_minus_sq(x: &Dy) -> f64 {
    let one = Dy::int(1);
    let minus_one = Dy::int(-1);
    Dy::sub_f64(&one, x) * Dy::sub_f64(x, &minus_one) * (1.0 - 1e-12)
}

/// Isolates the roots in `(-1, 1)` of `S = sum s_k T_k` whose values at
/// `x = +-1` are nonzero. `S` must be square-free; a repeated root makes the
/// subdivision run to the depth limit and report `Unresolved`.
pub(crate) fn isolate(s: &[BigInt]) -> Result<Vec<(Interval, Dy, Dy)>> {
    let ev = ChebEval::new(s);
    let n = ev.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    let k = 2 * n + 8;
    let mut pts = vec![Dy::int(-1)];
    for i in (1..k).rev() {
        let x = (i as f64 * std::f64::consts::PI / k as f64).cos();
        pts.push(Dy::from_f64_rounded(x, GRID_BITS));
    }
    pts.push(Dy::int(1));
    pts.dedup();
    let last = pts.len() - 1;
    let mut signs = Vec::with_capacity(pts.len());
    for (i, p) in pts.iter_mut().enumerate() {
        let mut sg = ev.sign(p);
        if sg == 0 && (i == 0 || i == last) {
            return Err(Error::EndpointRoot);
        }
        while sg == 0 {
            *p = p.offset(1, GRID_BITS + 8);
            sg = ev.sign(p);
        }
        signs.push(sg);
    }
    let mut stack: Vec<Cell> = (0..pts.len() - 1)
        .rev()
        .map(|i| Cell { a: pts[i].clone(), b: pts[i + 1].clone(), sa: signs[i], sb: signs[i + 1] })
        .collect();
    let mut out = Vec::new();
    while let Some(c) = stack.pop() {
        let hs = h_sq(&c.a, &c.b);
        let va = ev.value(&c.a);
        let vb = ev.value(&c.b);
        if c.sa == c.sb && va.lower_abs().min(vb.lower_abs()) > ev.b2 * hs / 8.0 {
            continue;
        }
        let wa = ev.slope(&c.a);
        let wb = ev.slope(&c.b);
        if let (Some(x), Some(y)) = (wa.certified_sign(), wb.certified_sign()) {
            let da = one_minus_sq(&c.a).max(0.0).sqrt() * wa.lower_abs();
            let db = one_minus_sq(&c.b).max(0.0).sqrt() * wb.lower_abs();
            if x == y && da.min(db) > ev.b3 * hs / 8.0 {
                if c.sa != c.sb {
                    let iv = Interval::open(c.a.to_rational(), c.b.to_rational());
                    out.push((iv, c.a, c.b));
                }
                continue;
            }
        }
        let e = c.a.e.max(c.b.e);
        if e >= MAX_BITS {
            return Err(Error::Unresolved(format!(
                "cell near x = {:.17} still ambiguous at 2^-{MAX_BITS}",
                c.a.to_f64()
            )));
        }
        let mut m = Dy::mid(&c.a, &c.b);
        let mut sm = ev.sign(&m);
        let mut j = 1;
        while sm == 0 {
            m = Dy::mid(&c.a, &c.b).offset(j, e + 1 + 64);
            sm = ev.sign(&m);
            j += 1;
        }
        stack.push(Cell { a: m.clone(), b: c.b, sa: sm, sb: c.sb });
        stack.push(Cell { a: c.a, b: m, sa: c.sa, sb: sm });
    }
    out.sort_by(|x, y| x.0.lo.cmp(&y.0.lo));
    Ok(out)
}

/// Bisects an isolating cell until its width is below `2^-bits`.
pub(crate) fn refine(s: &[BigInt], a: Dy, b: Dy, bits: u32) -> Interval {
    let ev = ChebEval::new(s);
    let (mut a, mut b) = (a, b);
    let sa = ev.sign(&a);
    loop {
        if Dy::sub_f64(&b, &a) < 2f64.powi(-(bits as i32)) {
            return Interval::open(a.to_rational(), b.to_rational());
        }
        let m = Dy::mid(&a, &b);
        match ev.sign(&m) {
            0 => return Interval::point(m.to_rational()),
            sm if sm == sa => a = m,
            _ => b = m,
        }
    }
}

/// Modular test that the algebraic form of `S` has no repeated factor.
/// `true` is a proof; `false` means no prime settled the question.
pub fn certify_squarefree(s: &[BigInt]) -> bool {
    const PRIMES: [u64; 6] = [2_147_483_647, 2_147_483_629, 1_000_000_007, 998_244_353, 2_147_483_587, 1_000_000_009];
    PRIMES.iter().any(|&p| squarefree_mod(s, p) == Some(true))
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

fn trim_mod(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// `None` when `p` divides the leading coefficient `s_N 2^(N-1)`.
fn squarefree_mod(s: &[BigInt], p: u64) -> Option<bool> {
    let n = s.len() - 1;
    let pb = BigInt::from(p);
    let red: Vec<u64> = s.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    if red[n] == 0 {
        return None;
    }
    if n <= 1 {
        return Some(true);
    }
    // Power-basis coefficients of sum s_k T_k mod p.
    let mut g = vec![0u64; n + 1];
    let mut prev = vec![1u64];
    let mut cur = vec![0u64, 1];
    g[0] = red[0];
    for (k, &rk) in red.iter().enumerate().take(n + 1).skip(1) {
        if k > 1 {
            let mut next = vec![0u64; k + 1];
            for (i, &c) in cur.iter().enumerate() {
                next[i + 1] = (next[i + 1] + 2 * c) % p;
            }
            for (i, &c) in prev.iter().enumerate() {
                next[i] = (next[i] + p - c) % p;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        for (i, &t) in cur.iter().enumerate() {
            g[i] = (g[i] + mulm(rk, t, p)) % p;
        }
    }
    let d: Vec<u64> = (1..=n).map(|i| mulm(g[i], i as u64 % p, p)).collect();
    let mut a = g;
    let mut b = d;
    trim_mod(&mut a);
    trim_mod(&mut b);
    if a.len() != n + 1 || b.len() != n {
        return None;
    }
    while !b.is_empty() {
        let inv = powm(*b.last().unwrap(), p - 2, p);
        while a.len() >= b.len() {
            let f = mulm(*a.last().unwrap(), inv, p);
            let off = a.len() - b.len();
            for (i, &c) in b.iter().enumerate() {
                a[off + i] = (a[off + i] + p - mulm(f, c, p)) % p;
            }
            trim_mod(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    Some(a.len() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::CosPoly;

    fn s(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&v| BigInt::from(v)).collect()
    }

    #[test]
    fn clenshaw_paths_agree() {
        let c = s(&[3, -1, 4, 1, -5, 9, 2, -6]);
        let ev = ChebEval::new(&c);
        let t = CosPoly::new(c.clone());
        for i in -20..=20 {
            let x = Dy::new(BigInt::from(i * 3), 6);
            let xf = x.to_f64();
            let want = t.eval_f64(xf.acos());
            let got = ev.value(&x);
            let scaled = want * 2f64.powi(-(ev.scale as i32));
            assert!((got.val - scaled).abs() <= got.err + 1e-12, "{xf}");
            let (v, sh) = ChebEval::clenshaw_exact(&ev.s, &x, true);
            assert!((big_to_f64_scaled(&v, sh) - want).abs() < 1e-9);
        }
    }

    #[test]
    fn slope_matches_derivative() {
        let c = s(&[1, 2, -3, 1]);
        let ev = ChebEval::new(&c);
        let t = CosPoly::new(c.clone());
        let x = 0.3f64;
        let th = x.acos();
        let h = 1e-6;
        let deriv = (t.eval_f64(th + h) - t.eval_f64(th - h)) / (2.0 * h);
        let w = ev.slope(&Dy::from_f64_rounded(x, 40)).val * 2f64.powi(ev.scale as i32);
        assert!((deriv + th.sin() * w).abs() < 1e-5);
    }

    #[test]
    fn isolates_simple_examples() {
        // 1 + 2cos t + 2cos 2t: roots at x = (-1 +- sqrt 5)/4.
        let roots = isolate(&s(&[1, 2, 2])).unwrap();
        assert_eq!(roots.len(), 2);
        // cos 7t has 7 roots in (-1, 1).
        let mut c = vec![0i64; 8];
        c[7] = 1;
        assert_eq!(isolate(&s(&c)).unwrap().len(), 7);
        // 3 + cos t has none.
        assert!(isolate(&s(&[3, 1])).unwrap().is_empty());
    }

    #[test]
    fn squarefree_certificates() {
        assert!(certify_squarefree(&s(&[1, 2, 2])));
        // (1 + 2cos t)^2 doubled = 2(1 + 4cos t + 4cos^2 t) = 6 + 8cos t + 2cos 2t
        assert!(!certify_squarefree(&s(&[6, 8, 2])));
    }

    #[test]
    fn refine_narrows() {
        let c = s(&[1, 2, 2]);
        let roots = isolate(&c).unwrap();
        for (_, a, b) in roots {
            let iv = refine(&c, a, b, 64);
            assert!(&iv.hi - &iv.lo < BigRational::new(1.into(), BigInt::one() << 64));
        }
    }
}
