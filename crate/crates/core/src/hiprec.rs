//! Binary fixed-point arithmetic on `BigInt` mantissas.
//!
//! A value `m` at precision `p` stands for `m / 2^p`. Products are truncated
//! toward minus infinity, so every operation carries an absolute error of at
//! most one unit in the last place.

use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fx {
    pub m: BigInt,
    pub prec: u32,
}

impl Fx {
    pub fn zero(prec: u32) -> Self {
        Self { m: BigInt::zero(), prec }
    }

    pub fn one(prec: u32) -> Self {
        Self { m: BigInt::one() << prec, prec }
    }

    pub fn from_int(v: &BigInt, prec: u32) -> Self {
        Self { m: v << prec, prec }
    }

    /// Exact conversion of a finite double (rounded toward minus infinity when
    /// it has more fractional bits than `prec`).
    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite());
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        let mut m = BigInt::from(mant) * sign;
        let shift = e + prec as i64;
        if shift >= 0 {
            m <<= shift as usize;
        } else {
            m >>= (-shift) as usize;
        }
        Self { m, prec }
    }

    /// Rounds `p/q` toward minus infinity.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let num: BigInt = r.numer() << prec;
        Self { m: num.div_floor(r.denom()), prec }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.m.clone(), BigInt::one() << self.prec)
    }

    pub fn to_f64(&self) -> f64 {
        big_to_f64_scaled(&self.m, self.prec as i64)
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        debug_assert_eq!(self.prec, o.prec);
        Fx { m: (&self.m * &o.m) >> self.prec, prec: self.prec }
    }

    pub fn mul_int(&self, k: i64) -> Fx {
        Fx { m: &self.m * k, prec: self.prec }
    }

    pub fn div(&self, o: &Fx) -> Fx {
        assert!(!o.m.is_zero(), "fixed-point division by zero");
        Fx { m: (&self.m << self.prec).div_floor(&o.m), prec: self.prec }
    }

    pub fn shr(&self, k: u32) -> Fx {
        Fx { m: &self.m >> k, prec: self.prec }
    }

    pub fn abs(&self) -> Fx {
        Fx { m: self.m.abs(), prec: self.prec }
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    /// Changes the number of fractional bits (truncating when lowering).
    pub fn with_prec(&self, prec: u32) -> Fx {
        let m = if prec >= self.prec {
            &self.m << (prec - self.prec)
        } else {
            &self.m >> (self.prec - prec)
        };
        Fx { m, prec }
    }
}

impl Add for &Fx {
    type Output = Fx;
    fn add(self, o: &Fx) -> Fx {
        Fx { m: &self.m + &o.m, prec: self.prec }
    }
}

impl Sub for &Fx {
    type Output = Fx;
    fn sub(self, o: &Fx) -> Fx {
        Fx { m: &self.m - &o.m, prec: self.prec }
    }
}

impl Neg for &Fx {
    type Output = Fx;
    fn neg(self) -> Fx {
        Fx { m: -&self.m, prec: self.prec }
    }
}

/// `m * 2^-shift` as a double, correct to a few ulps for any magnitude.
pub fn big_to_f64_scaled(m: &BigInt, shift: i64) -> f64 {
    if m.is_zero() {
        return 0.0;
    }
    let bits = m.bits() as i64;
    let drop = (bits - 60).max(0);
    let top = (m >> drop as usize).to_f64().unwrap_or(0.0);
    let e = drop - shift;
    top * 2f64.powi(e.clamp(-2000, 2000) as i32)
}

/// Complex fixed-point number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFx {
    pub re: Fx,
    pub im: Fx,
}

impl CFx {
    pub fn zero(prec: u32) -> Self {
        Self { re: Fx::zero(prec), im: Fx::zero(prec) }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self { re: Fx::from_f64(re, prec), im: Fx::from_f64(im, prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec
    }

    pub fn add(&self, o: &CFx) -> CFx {
        CFx { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &CFx) -> CFx {
        CFx { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &CFx) -> CFx {
        let p = self.prec();
        let re = (&self.re.m * &o.re.m - &self.im.m * &o.im.m) >> p;
        let im = (&self.re.m * &o.im.m + &self.im.m * &o.re.m) >> p;
        CFx { re: Fx { m: re, prec: p }, im: Fx { m: im, prec: p } }
    }

    /// Adds an integer to the real part.
    pub fn add_int(&self, v: &BigInt) -> CFx {
        let p = self.prec();
        CFx { re: Fx { m: &self.re.m + (v << p), prec: p }, im: self.im.clone() }
    }

    /// `|z|^2` as an exact integer at precision `2p`.
    pub fn norm_sqr_raw(&self) -> BigInt {
        &self.re.m * &self.re.m + &self.im.m * &self.im.m
    }

    /// Division through exact integer arithmetic, so tiny divisors do not
    /// lose relative accuracy.
    pub fn div(&self, o: &CFx) -> CFx {
        let p = self.prec();
        let den = o.norm_sqr_raw();
        assert!(!den.is_zero(), "complex fixed-point division by zero");
        let re = (&self.re.m * &o.re.m + &self.im.m * &o.im.m) << p;
        let im = (&self.im.m * &o.re.m - &self.re.m * &o.im.m) << p;
        CFx {
            re: Fx { m: re.div_floor(&den), prec: p },
            im: Fx { m: im.div_floor(&den), prec: p },
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// `(cos t, sin t)` at precision `prec`, absolute error below `2^-(prec - 4)`.
pub fn cos_sin(t: &Fx) -> (Fx, Fx) {
    let prec = t.prec;
    // Halve until |u| < 2^-8, then use the double-angle formulas.
    let mag = t.m.bits() as i64 - prec as i64;
    let k = (mag + 8).max(0) as u32;
    let wp = prec + 2 * k + 24;
    let u = t.with_prec(wp).shr(k);
    let one = Fx::one(wp);
    let u2 = u.mul(&u);
    let mut c = one.clone();
    let mut s = u.clone();
    let mut term_c = one.clone();
    let mut term_s = u.clone();
    let mut n = 1i64;
    loop {
        term_c = (-&term_c.mul(&u2)).div(&Fx::from_int(&BigInt::from((2 * n - 1) * (2 * n)), wp));
        term_s = (-&term_s.mul(&u2)).div(&Fx::from_int(&BigInt::from((2 * n) * (2 * n + 1)), wp));
        if term_c.m.is_zero() && term_s.m.is_zero() {
            break;
        }
        c = &c + &term_c;
        s = &s + &term_s;
        n += 1;
    }
    for _ in 0..k {
        let new_s = s.mul(&c).mul_int(2);
        let new_c = &c.mul(&c).mul_int(2) - &one;
        c = new_c;
        s = new_s;
    }
    (c.with_prec(prec), s.with_prec(prec))
}

/// Enclosure `[lo, hi]` of `arccos x` for every `x` in `[a, b] ⊂ [-1, 1]`,
/// dyadic with `prec` fractional bits. The enclosure is checked against
/// `cos` evaluated with a known error bound.
pub fn arccos_enclosure(a: &BigRational, b: &BigRational, prec: u32) -> (BigRational, BigRational) {
    let lo = arccos_approx(b, prec);
    let hi = arccos_approx(a, prec);
    let mut margin = BigInt::one() << 8;
    loop {
        let t_lo = Fx { m: &lo.m - &margin, prec };
        let t_hi = Fx { m: &hi.m + &margin, prec };
        let err = BigRational::new(BigInt::from(16), BigInt::one() << prec);
        // cos is decreasing on [0, pi]: need cos(t_lo) >= b and cos(t_hi) <= a.
        let ok_lo = t_lo.m.is_negative() || cos_sin(&t_lo).0.to_rational() - &err >= *b;
        let pi_hi = pi_fx(prec).m + BigInt::from(1);
        let ok_hi = t_hi.m > pi_hi || cos_sin(&t_hi).0.to_rational() + &err <= *a;
        if ok_lo && ok_hi {
            let lo_q = if t_lo.m.is_negative() { BigRational::zero() } else { t_lo.to_rational() };
            let hi_q = if t_hi.m > pi_hi {
                Fx { m: pi_hi, prec }.to_rational()
            } else {
                t_hi.to_rational()
            };
            return (lo_q, hi_q);
        }
        margin <<= 16;
    }
}

/// Approximation of `arccos x` by Newton's method on `cos t - x`.
fn arccos_approx(x: &BigRational, prec: u32) -> Fx {
    let wp = prec + 32;
    let one = BigRational::one();
    // Start from 2 asin(sqrt((1 - x)/2)), accurate near both ends.
    let y = ((&one - x) / BigRational::from(BigInt::from(2))).to_f64().unwrap_or(0.0).clamp(0.0, 1.0);
    let start = 2.0 * y.sqrt().asin();
    let xf = Fx::from_rational(x, wp);
    let mut t = Fx::from_f64(start, wp);
    for _ in 0..200 {
        let (c, s) = cos_sin(&t);
        if s.m.is_zero() {
            break;
        }
        let step = (&c - &xf).div(&s);
        t = &t + &step;
        if step.m.bits() as i64 <= 8 {
            break;
        }
    }
    t.with_prec(prec)
}

/// `pi` rounded down at precision `prec` (Machin's formula).
pub fn pi_fx(prec: u32) -> Fx {
    let wp = prec + 32;
    let atan_inv = |k: i64| {
        // atan(1/k) = sum (-1)^n / ((2n+1) k^{2n+1})
        let mut power = Fx::one(wp).div(&Fx::from_int(&BigInt::from(k), wp));
        let k2 = BigInt::from(k * k);
        let mut sum = Fx::zero(wp);
        let mut n = 0i64;
        while !power.m.is_zero() {
            let term = Fx { m: &power.m / (2 * n + 1), prec: wp };
            sum = if n % 2 == 0 { &sum + &term } else { &sum - &term };
            power = Fx { m: &power.m / &k2, prec: wp };
            n += 1;
        }
        sum
    };
    let v = &atan_inv(5).mul_int(16) - &atan_inv(239).mul_int(4);
    v.with_prec(prec)
}
