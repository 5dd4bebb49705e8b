//! Exact integer polynomials, cosine polynomials and coefficient sets.
//!
//! `IntPoly` is an algebraic polynomial `P(z) = a_0 + a_1 z + ... + a_n z^n`
//! stored low index first in canonical form (no trailing zeros). `CosPoly`
//! is a cosine polynomial `T(t) = c_0 + sum_{j>=1} c_j cos(jt)`.
//!
//! For a self-reciprocal `P` of degree `2n` the two are linked by
//! `T(t) = P(e^{it}) e^{-int}`, which gives `c_0 = a_n` and `c_j = 2 a_{n+j}`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        trim(&mut coeffs);
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c z^k`.
    pub fn monomial(k: usize, c: BigInt) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// `None` for the zero polynomial (degree minus infinity).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn eval_at_minus_one(&self) -> BigInt {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| if j % 2 == 0 { c.clone() } else { -c })
            .sum()
    }

    /// `a_j = a_{n-j}` for all `j`, with `n` the actual degree.
    pub fn is_self_reciprocal(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|j| self.coeffs[j] == self.coeffs[n - 1 - j])
    }

    /// `a_j = -a_{n-j}` for all `j` (never true for the zero polynomial).
    pub fn is_anti_reciprocal(&self) -> bool {
        let n = self.coeffs.len();
        n > 0 && (0..n).all(|j| self.coeffs[j] == -&self.coeffs[n - 1 - j])
    }

    /// `a_j = (-1)^j a_{n-j}` for all `j`.
    pub fn is_skew_reciprocal(&self) -> bool {
        let n = self.coeffs.len();
        (0..n).all(|j| {
            let mirror = &self.coeffs[n - 1 - j];
            if j % 2 == 0 {
                self.coeffs[j] == *mirror
            } else {
                self.coeffs[j] == -mirror
            }
        })
    }

    /// `z^n P(1/z)`.
    pub fn reversed(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        Self::new(v)
    }

    /// Splits `P = z^k P_0` with `P_0(0) != 0`.
    pub fn strip_low_zeros(&self) -> (usize, IntPoly) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (k, Self::new(self.coeffs[k.min(self.coeffs.len())..].to_vec()))
    }

    /// Number of nonzero coefficients.
    pub fn nc(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Number of windows `a_u + ... + a_{u+k-1}` with nonzero sum,
    /// `0 <= u <= n - k + 1`.
    pub fn nc_k(&self, k: usize) -> usize {
        assert!(k >= 1, "window length must be positive");
        let len = self.coeffs.len();
        if k > len {
            return 0;
        }
        let mut window: BigInt = self.coeffs[..k].iter().sum();
        let mut count = usize::from(!window.is_zero());
        for u in 1..=(len - k) {
            window -= &self.coeffs[u - 1];
            window += &self.coeffs[u + k - 1];
            if !window.is_zero() {
                count += 1;
            }
        }
        count
    }

    /// `P(z) (z^k - 1)`, coefficientwise `b_j = a_{j-k} - a_j`.
    pub fn shift_diff(&self, k: usize) -> Self {
        assert!(k >= 1, "shift must be positive");
        if self.is_zero() {
            return Self::zero();
        }
        let n = self.coeffs.len();
        let mut out = vec![BigInt::zero(); n + k];
        for (j, a) in self.coeffs.iter().enumerate() {
            out[j + k] += a;
            out[j] -= a;
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * BigInt::from(j))
                .collect(),
        )
    }

    /// Gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `P(-z)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| if j % 2 == 0 { c.clone() } else { -c })
                .collect(),
        )
    }

    /// Exact value at a rational point.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let (num, den) = (x.numer(), x.denom());
        let (value, den_pow) = self.eval_homogeneous(num, den);
        BigRational::new(value, den_pow)
    }

    /// Returns `(sum a_j p^j q^{n-j}, q^n)`, so that `P(p/q) = first / second`.
    pub fn eval_homogeneous(&self, p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * p + c * &qpow;
            qpow *= q;
        }
        // The loop multiplied q once more than the degree.
        let qn = if self.coeffs.is_empty() {
            BigInt::one()
        } else {
            qpow / q
        };
        (acc, qn)
    }

    /// Sign of `P(x)` at a rational point (`q > 0` is assumed by `BigRational`).
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        let (v, _) = self.eval_homogeneous(x.numer(), x.denom());
        v.sign().cmp_zero()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Pseudo-remainder: `lc(d)^{deg a - deg d + 1} a = q d + r`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("pseudo_rem by zero polynomial");
        let Some(da) = self.degree() else {
            return IntPoly::zero();
        };
        if da < dd {
            return self.clone();
        }
        let lc = d.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        let mut steps = da - dd + 1;
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let t = r.pop().unwrap();
            for c in r.iter_mut() {
                *c *= &lc;
            }
            for (j, dc) in d.coeffs[..dd].iter().enumerate() {
                r[k + j] -= &t * dc;
            }
            trim(&mut r);
            steps -= 1;
            if r.len() <= dd {
                break;
            }
        }
        // Account for the skipped multiplications when degree dropped by more
        // than one in a single step.
        let lc_pow = num_traits::pow(lc, steps);
        IntPoly::new(r.into_iter().map(|c| c * &lc_pow).collect())
    }

    /// Exact division over the integers; `None` when `d` does not divide.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        let Some(da) = self.degree() else {
            return Some(IntPoly::zero());
        };
        if da < dd {
            return None;
        }
        let lc = d.leading().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); da - dd + 1];
        for k in (0..=da - dd).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (quot, rem) = top.div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &quot * dc;
            }
            q[k] = quot;
        }
        if r.iter().all(Zero::is_zero) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Primitive gcd with positive leading coefficient (primitive PRS).
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    /// Multiplicity of `z = 1` (or `z = -1`) as a root, with the cofactor.
    pub fn split_root_at_unit(&self, minus: bool) -> (usize, IntPoly) {
        let lin = if minus {
            IntPoly::from_i64s(&[1, 1])
        } else {
            IntPoly::from_i64s(&[-1, 1])
        };
        let mut m = 0;
        let mut cur = self.clone();
        while !cur.is_zero() {
            let at = if minus {
                cur.eval_at_minus_one()
            } else {
                cur.eval_at_one()
            };
            if !at.is_zero() {
                break;
            }
            cur = cur.div_exact(&lin).expect("root at unit divides exactly");
            m += 1;
        }
        (m, cur)
    }
}

impl<'a> Add<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl<'a> Sub<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl<'a> Mul<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag}z")?,
                (_, true) => write!(f, "z^{j}")?,
                (_, false) => write!(f, "{mag}z^{j}")?,
            }
        }
        Ok(())
    }
}

/// Accepts `"12"` or `12` for each coefficient when reading.
#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Text(String),
    Int(i64),
}

fn parse_coeffs<'de, D: Deserializer<'de>>(raw: Vec<CoeffRepr>) -> std::result::Result<Vec<BigInt>, D::Error> {
    raw.into_iter()
        .map(|c| match c {
            CoeffRepr::Int(v) => Ok(BigInt::from(v)),
            CoeffRepr::Text(s) => s
                .trim()
                .parse::<BigInt>()
                .map_err(|_| de::Error::custom(format!("not an integer: {s:?}"))),
        })
        .collect()
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<CoeffRepr>::deserialize(d)?;
        Ok(IntPoly::new(parse_coeffs::<D>(raw)?))
    }
}

/// `T(t) = c_0 + sum_{j>=1} c_j cos(jt)` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CosPoly {
    coeffs: Vec<BigInt>,
}

impl CosPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        trim(&mut coeffs);
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `c cos(kt)`.
    pub fn cos_term(k: usize, c: BigInt) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `T(0) = sum c_j`.
    pub fn value_at_zero(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// `T(pi) = sum (-1)^j c_j`.
    pub fn value_at_pi(&self) -> BigInt {
        self.reflect().value_at_zero()
    }

    /// `T(pi - t)`: flips the sign of odd frequencies.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| if j % 2 == 0 { c.clone() } else { -c })
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the (positive) content.
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|a| a / &g).collect())
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c.to_f64().unwrap_or(f64::NAN) * (j as f64 * t).cos())
            .sum()
    }

    /// `2 A B`, which stays integral since `2 cos(a) cos(b) = cos(a+b) + cos(a-b)`.
    pub fn mul_doubled(&self, other: &CosPoly) -> CosPoly {
        if self.is_zero() || other.is_zero() {
            return CosPoly::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let p = a * b;
                out[i + j] += &p;
                out[i.abs_diff(j)] += &p;
            }
        }
        CosPoly::new(out)
    }

    /// The algebraic polynomial `g` with `g(cos t) = T(t)`, via the
    /// three-term recurrence `T_{j+1} = 2x T_j - T_{j-1}` in exact integers.
    pub fn to_chebyshev_algebraic(&self) -> IntPoly {
        let Some(n) = self.degree() else {
            return IntPoly::zero();
        };
        let mut out = vec![BigInt::zero(); n + 1];
        let mut prev: Vec<BigInt> = vec![BigInt::one()];
        let mut cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
        out[0] += &self.coeffs[0];
        for j in 1..=n {
            if j > 1 {
                let mut next = vec![BigInt::zero(); j + 1];
                for (i, c) in cur.iter().enumerate() {
                    next[i + 1] += c * 2;
                }
                for (i, c) in prev.iter().enumerate() {
                    next[i] -= c;
                }
                prev = std::mem::replace(&mut cur, next);
            }
            let c = &self.coeffs[j];
            if !c.is_zero() {
                for (i, t) in cur.iter().enumerate() {
                    out[i] += c * t;
                }
            }
        }
        IntPoly::new(out)
    }

    /// The self-reciprocal `P(z) = 2c_0 z^n + sum c_j (z^{n+j} + z^{n-j})`,
    /// which satisfies `P(e^{it}) e^{-int} = 2T(t)`.
    pub fn to_selfreciprocal(&self) -> IntPoly {
        let Some(n) = self.degree() else {
            return IntPoly::zero();
        };
        let mut out = vec![BigInt::zero(); 2 * n + 1];
        out[n] = &self.coeffs[0] * 2;
        for j in 1..=n {
            out[n + j] += &self.coeffs[j];
            out[n - j] += &self.coeffs[j];
        }
        IntPoly::new(out)
    }

    /// Divides by `(1 - cos t)` when `T(0) = 0`. The quotient is returned
    /// multiplied by a positive integer so that it stays integral.
    pub fn div_one_minus_cos(&self) -> Option<CosPoly> {
        let n = self.degree()?;
        if n == 0 || !self.value_at_zero().is_zero() {
            return None;
        }
        let c: Vec<BigRational> = self.coeffs.iter().map(|v| BigRational::from(v.clone())).collect();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let two = BigRational::from(BigInt::from(2));
        // Quotient S of degree n-1, from the coefficient identities
        //   c_j = s_j - s_{j-1}/2 - s_{j+1}/2   (j >= 2)
        //   c_1 = s_1 - s_0 - s_2/2,  c_0 = s_0 - s_1/2.
        let mut s = vec![BigRational::zero(); n + 2];
        if n == 1 {
            s[0] = -c[1].clone();
        } else {
            s[n - 1] = -&c[n] * &two;
            for j in (2..n).rev() {
                s[j - 1] = (&s[j] - &c[j]) * &two - &s[j + 1];
            }
            s[0] = &s[1] - &c[1] - &s[2] * &half;
        }
        debug_assert_eq!(c[0], &s[0] - &s[1] * &half);
        s.truncate(n);
        let lcm = s.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
        let ints: Vec<BigInt> = s.iter().map(|v| (v * BigRational::from(lcm.clone())).to_integer()).collect();
        Some(CosPoly::new(ints).primitive_part())
    }

    /// Divides by `(1 + cos t)` when `T(pi) = 0` (positive integer rescaling).
    pub fn div_one_plus_cos(&self) -> Option<CosPoly> {
        self.reflect().div_one_minus_cos().map(|q| q.reflect())
    }
}

impl fmt::Display for CosPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let m = if mag.is_one() && j > 0 { String::new() } else { mag.to_string() };
            match j {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{m}cos t")?,
                _ => write!(f, "{m}cos {j}t")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CosRepr {
    #[serde(rename = "type")]
    kind: String,
    coeffs: Vec<String>,
}

impl Serialize for CosPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CosRepr {
            kind: "cos".into(),
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CosPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "type")]
            kind: String,
            coeffs: Vec<CoeffRepr>,
        }
        let raw = Raw::deserialize(d)?;
        if raw.kind != "cos" {
            return Err(de::Error::custom(format!("expected type \"cos\", got {:?}", raw.kind)));
        }
        Ok(CosPoly::new(parse_coeffs::<D>(raw.coeffs)?))
    }
}

/// `T(t) = P(e^{it}) e^{-int}` for a self-reciprocal `P` of even degree `2n`.
pub fn to_cosine(p: &IntPoly) -> Result<CosPoly> {
    let Some(deg) = p.degree() else {
        return Ok(CosPoly::default());
    };
    if !p.is_self_reciprocal() {
        return Err(Error::NotSelfReciprocal);
    }
    if deg % 2 == 1 {
        return Err(Error::OddDegree(deg));
    }
    let n = deg / 2;
    let mut c = Vec::with_capacity(n + 1);
    c.push(p.coeffs[n].clone());
    for j in 1..=n {
        c.push(&p.coeffs[n + j] * 2);
    }
    Ok(CosPoly::new(c))
}

/// Finite coefficient set `S` of integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoeffSet {
    elements: BTreeSet<i64>,
}

impl CoeffSet {
    pub fn new(elements: impl IntoIterator<Item = i64>) -> Result<Self> {
        let elements: BTreeSet<i64> = elements.into_iter().collect();
        if elements.is_empty() {
            return Err(Error::Invalid("coefficient set must be nonempty".into()));
        }
        Ok(Self { elements })
    }

    pub fn littlewood() -> Self {
        Self::new([-1, 1]).unwrap()
    }

    /// The set of coefficient values appearing in `p` (positions `0..=deg`).
    pub fn of_poly(p: &IntPoly) -> Result<Self> {
        let vals: Option<Vec<i64>> = p.coeffs().iter().map(ToPrimitive::to_i64).collect();
        let vals = vals.ok_or_else(|| Error::Invalid("coefficient does not fit in i64".into()))?;
        Self::new(vals)
    }

    pub fn elements(&self) -> &BTreeSet<i64> {
        &self.elements
    }

    pub fn as_vec(&self) -> Vec<i64> {
        self.elements.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `M(S) = max |s|`.
    pub fn max_abs(&self) -> u64 {
        self.elements.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn contains(&self, v: i64) -> bool {
        self.elements.contains(&v)
    }

    pub fn nonzero(&self) -> Vec<i64> {
        self.elements.iter().copied().filter(|&v| v != 0).collect()
    }

    /// `S_k = { s_1 + ... + s_k : s_j in S u {0} }`.
    pub fn k_fold_sums(&self, k: usize) -> BTreeSet<i64> {
        let mut base = self.elements.clone();
        base.insert(0);
        let mut acc: BTreeSet<i64> = [0].into();
        for _ in 0..k {
            acc = acc
                .iter()
                .flat_map(|a| base.iter().map(move |b| a + b))
                .collect();
        }
        acc
    }

    /// `min { |z| : z in S_k, z != 0 }`, if any.
    pub fn gamma_k(&self, k: usize) -> Option<u64> {
        self.k_fold_sums(k)
            .into_iter()
            .filter(|&v| v != 0)
            .map(i64::unsigned_abs)
            .min()
    }
}

impl fmt::Display for CoeffSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(i64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub(crate) trait SignExt {
    fn cmp_zero(self) -> Ordering;
}

impl SignExt for Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn cp(c: &[i64]) -> CosPoly {
        CosPoly::from_i64s(c)
    }

    #[test]
    fn reciprocity_predicates() {
        assert!(p(&[1, 1, 1]).is_self_reciprocal());
        assert!(!p(&[1, 2, 3]).is_self_reciprocal());
        assert!(!p(&[1, 1, -1, -1, 1]).is_self_reciprocal());
        assert!(p(&[1, 1, -1, -1, 1]).is_skew_reciprocal());
        assert!(!p(&[1, 1, 1]).is_skew_reciprocal());
        assert!(IntPoly::zero().is_self_reciprocal());
    }

    #[test]
    fn odd_degree_littlewood_is_never_skew() {
        // Exhaustive over self-reciprocal Littlewood polynomials of odd degree <= 9.
        for n in (1..=9usize).step_by(2) {
            let half = n / 2 + 1;
            for code in 0u32..(1 << half) {
                let mut c = vec![0i64; n + 1];
                for j in 0..half {
                    let v = if code >> j & 1 == 1 { -1 } else { 1 };
                    c[j] = v;
                    c[n - j] = v;
                }
                let q = p(&c);
                assert!(q.is_self_reciprocal());
                assert!(!q.is_skew_reciprocal(), "{q}");
            }
        }
    }

    #[test]
    fn cosine_conversion_examples() {
        assert_eq!(to_cosine(&p(&[1, 1, 1])).unwrap(), cp(&[1, 2]));
        assert_eq!(to_cosine(&p(&[1, 1, 1, 1, 1])).unwrap(), cp(&[1, 2, 2]));
        assert_eq!(to_cosine(&p(&[0, 0, 1])), Err(Error::NotSelfReciprocal));
        assert_eq!(to_cosine(&p(&[1, 1])), Err(Error::OddDegree(1)));
    }

    #[test]
    fn cosine_to_selfreciprocal_examples() {
        assert_eq!(cp(&[1, 1]).to_selfreciprocal(), p(&[1, 2, 1]));
        assert_eq!(cp(&[0, 0, 1]).to_selfreciprocal(), p(&[1, 0, 0, 0, 1]));
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(cp(&[1, 2, 2]).to_chebyshev_algebraic(), p(&[-1, 2, 4]));
        assert_eq!(cp(&[0, 0, 0, 1]).to_chebyshev_algebraic(), p(&[0, -3, 0, 4]));
    }

    /// Independent route: evaluate sum c_j T_j(x) with the Chebyshev
    /// recurrence over exact rationals.
    fn chebyshev_sum_at(c: &CosPoly, x: &BigRational) -> BigRational {
        let mut t_prev = BigRational::one();
        let mut t_cur = x.clone();
        let mut acc = BigRational::zero();
        for (j, cj) in c.coeffs().iter().enumerate() {
            let tj = match j {
                0 => BigRational::one(),
                1 => x.clone(),
                _ => {
                    let next = x * &t_cur * BigRational::from(BigInt::from(2)) - &t_prev;
                    t_prev = std::mem::replace(&mut t_cur, next);
                    t_cur.clone()
                }
            };
            acc += BigRational::from(cj.clone()) * tj;
        }
        acc
    }

    #[test]
    fn chebyshev_identity_at_rational_points() {
        let mut rng = crate::rng::SplitMix64::new(99);
        for _ in 0..10 {
            let deg = rng.range_i64(0, 12) as usize;
            let c: Vec<i64> = (0..=deg).map(|_| rng.range_i64(-5, 5)).collect();
            let t = cp(&c);
            let g = t.to_chebyshev_algebraic();
            for _ in 0..10 {
                let x = BigRational::new(
                    BigInt::from(rng.range_i64(-1000, 1000)),
                    BigInt::from(rng.range_i64(1, 1000)),
                );
                assert_eq!(g.eval_rational(&x), chebyshev_sum_at(&t, &x));
            }
        }
    }

    #[test]
    fn nc_examples() {
        assert_eq!(p(&[1, 1, 1, 1, 1]).nc(), 5);
        assert_eq!(p(&[1, 0, 0, 0, 1]).nc(), 2);
        assert_eq!(IntPoly::zero().nc(), 0);
        assert_eq!(p(&[1, 1, 1, 1, 1]).nc_k(2), 4);
        assert_eq!(p(&[1, -1, 1, -1, 1]).nc_k(2), 0);
        assert_eq!(p(&[1, 1]).nc_k(3), 0);
        assert_eq!(IntPoly::zero().nc_k(1), 0);
    }

    #[test]
    fn shift_diff_examples() {
        assert_eq!(p(&[1, 1]).shift_diff(1), p(&[-1, 0, 1]));
        let q = p(&[3, -1, 4, 1, -5]);
        assert!(q.shift_diff(3).eval_at_one().is_zero());
        // b_j = a_{j-k} - a_j
        let b = q.shift_diff(2);
        for j in 0..b.coeffs().len() {
            let prev = if j >= 2 { q.coeff(j - 2) } else { BigInt::zero() };
            assert_eq!(b.coeff(j), prev - q.coeff(j));
        }
    }

    #[test]
    fn period_k_windows_cancel_after_shift_diff() {
        // P = (1 + z)(1 + z^2 + z^4 + ...): multiplying by z^2 - 1 telescopes.
        let geo = p(&[1, 0, 1, 0, 1, 0, 1, 0, 1]);
        let q = &p(&[1, 1]) * &geo;
        assert_eq!(q.shift_diff(2).nc(), 4);
        // Period-k blocks with zero block sum: every k-window cancels and
        // P (z^k - 1) keeps only the first and last block.
        for (block, reps) in [(vec![1, -1], 5), (vec![2, -1, -1], 4), (vec![1, 0, -3, 2], 3)] {
            let k = block.len();
            let c: Vec<i64> = block.iter().cycle().take(k * reps).copied().collect();
            let q = p(&c);
            assert_eq!(q.nc_k(k), 0);
            let h = q.shift_diff(k);
            assert!(h.nc() <= 2 * k);
        }
    }

    #[test]
    fn division_helpers() {
        let a = &p(&[-1, 1]) * &p(&[-1, 1]);
        let b = &a * &p(&[2, 1]);
        assert_eq!(b.div_exact(&p(&[2, 1])), Some(a.clone()));
        assert_eq!(b.div_exact(&p(&[3, 1])), None);
        assert_eq!(b.gcd(&a), a.primitive_part());
        let (m, rest) = b.split_root_at_unit(false);
        assert_eq!((m, rest), (2, p(&[2, 1])));
    }

    #[test]
    fn cos_division_by_one_minus_cos() {
        // (1 - cos t)(1 + 2cos t) = 1 + 2cos t - cos t - 2cos^2 t = -cos 2t + cos t
        let t = cp(&[0, 1, -1]);
        let q = t.div_one_minus_cos().unwrap();
        assert_eq!(q, cp(&[1, 2]));
        assert_eq!(cp(&[1, -1]).div_one_minus_cos().unwrap(), cp(&[1]));
        assert_eq!(cp(&[1, 1]).div_one_plus_cos().unwrap(), cp(&[1]));
        assert!(cp(&[1, 2]).div_one_minus_cos().is_none());
    }

    #[test]
    fn doubled_product() {
        // 2 cos t * cos t = 1 + cos 2t
        assert_eq!(cp(&[0, 1]).mul_doubled(&cp(&[0, 1])), cp(&[1, 0, 1]));
    }

    #[test]
    fn json_shapes() {
        let q = p(&[1, -2, 3]);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"["1","-2","3"]"#);
        assert_eq!(serde_json::from_str::<IntPoly>(&s).unwrap(), q);
        let t = cp(&[1, 2]);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"type":"cos","coeffs":["1","2"]}"#);
        assert_eq!(serde_json::from_str::<CosPoly>(&s).unwrap(), t);
        assert!(serde_json::from_str::<IntPoly>(r#"["1","x"]"#).is_err());
    }

    #[test]
    fn coeff_set_sums() {
        let s = CoeffSet::new([-1, 1]).unwrap();
        assert_eq!(s.max_abs(), 1);
        assert_eq!(s.gamma_k(3), Some(1));
        let s = CoeffSet::new([2, 4]).unwrap();
        assert_eq!(s.gamma_k(2), Some(2));
        assert_eq!(CoeffSet::new([0]).unwrap().gamma_k(2), None);
    }

    proptest! {
        #[test]
        fn roundtrip_doubles(c in proptest::collection::vec(-50i64..50, 1..21)) {
            let t = cp(&c);
            let back = to_cosine(&t.to_selfreciprocal()).unwrap();
            prop_assert_eq!(back, t.scale(&BigInt::from(2)));
        }

        #[test]
        fn mul_matches_schoolbook(a in proptest::collection::vec(-9i64..9, 0..65),
                                  b in proptest::collection::vec(-9i64..9, 0..65)) {
            let mut naive = vec![0i64; a.len() + b.len()];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    naive[i + j] += x * y;
                }
            }
            prop_assert_eq!(&p(&a) * &p(&b), p(&naive));
        }

        #[test]
        fn nc_1_is_nc(c in proptest::collection::vec(-3i64..3, 0..30)) {
            let q = p(&c);
            prop_assert_eq!(q.nc_k(1), q.nc());
        }

        #[test]
        fn cosine_matches_circle_values(half in proptest::collection::vec(-5i64..5, 1..10), t in -3.1f64..3.1) {
            let mut c = half.clone();
            c.extend(half.iter().rev().skip(1));
            let q = p(&c);
            prop_assume!(!q.is_zero() && q.is_self_reciprocal() && q.degree().unwrap().is_multiple_of(2));
            let n = q.degree().unwrap() / 2;
            let cos = to_cosine(&q).unwrap();
            let z = num_complex::Complex64::from_polar(1.0, t);
            let val: num_complex::Complex64 = q.coeffs().iter().enumerate()
                .map(|(j, a)| z.powu(j as u32) * a.to_f64().unwrap()).sum::<num_complex::Complex64>()
                * num_complex::Complex64::from_polar(1.0, -(n as f64) * t);
            prop_assert!((val.re - cos.eval_f64(t)).abs() < 1e-9);
            prop_assert!(val.im.abs() < 1e-9);
        }
    }
}
