//! Polynomial families: Littlewood enumerations, Fekete polynomials, the
//! eventually periodic cosine counterexample and seeded random polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{CoeffSet, CosPoly, IntPoly};
use crate::rng::SplitMix64;
use crate::zerocount::{unimodular_count, RootIsolator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    #[serde(rename = "sr-littlewood")]
    SelfReciprocalLittlewood,
    #[serde(rename = "skew-littlewood")]
    SkewReciprocalLittlewood,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::SelfReciprocalLittlewood, Family::SkewReciprocalLittlewood];

    pub fn name(self) -> &'static str {
        match self {
            Family::SelfReciprocalLittlewood => "sr-littlewood",
            Family::SkewReciprocalLittlewood => "skew-littlewood",
        }
    }

    /// Number of members of degree `n`.
    pub fn count(self, n: usize) -> u128 {
        match self {
            Family::SelfReciprocalLittlewood => 1u128 << (n / 2 + 1),
            Family::SkewReciprocalLittlewood if n.is_multiple_of(4) => 1u128 << (n / 2 + 1),
            Family::SkewReciprocalLittlewood => 0,
        }
    }

    /// Number of free coefficients `a_0..a_{free-1}`.
    fn free_len(self, n: usize) -> usize {
        n / 2 + 1
    }

    /// Member with the given free-half code: bit `j` set means `a_j = -1`.
    pub fn member(self, n: usize, code: u64) -> IntPoly {
        let mut c = vec![0i64; n + 1];
        for j in 0..self.free_len(n) {
            let v = if code >> j & 1 == 1 { -1 } else { 1 };
            c[j] = v;
            c[n - j] = match self {
                Family::SelfReciprocalLittlewood => v,
                Family::SkewReciprocalLittlewood if j % 2 == 0 => v,
                Family::SkewReciprocalLittlewood => -v,
            };
        }
        IntPoly::from_i64s(&c)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sr-littlewood" | "self-reciprocal-littlewood" => Ok(Family::SelfReciprocalLittlewood),
            "skew-littlewood" | "skew-reciprocal-littlewood" => Ok(Family::SkewReciprocalLittlewood),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

fn check_budget(family: Family, n: usize, budget: u128) -> Result<()> {
    if n == 0 || n > 127 {
        return Err(Error::Invalid(format!("degree {n} outside 1..=127")));
    }
    let required = family.count(n);
    if required > budget {
        return Err(Error::BudgetExceeded {
            what: "enumeration",
            required: required.to_string(),
            budget: budget.to_string(),
        });
    }
    Ok(())
}

/// Every self-reciprocal Littlewood polynomial of degree `n`, in code order.
pub fn enumerate_selfreciprocal_littlewood(n: usize, budget: u128) -> Result<impl Iterator<Item = IntPoly>> {
    enumerate(Family::SelfReciprocalLittlewood, n, budget)
}

pub fn enumerate(family: Family, n: usize, budget: u128) -> Result<impl Iterator<Item = IntPoly>> {
    check_budget(family, n, budget)?;
    let count = family.count(n) as u64;
    Ok((0..count).map(move |code| family.member(n, code)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumSummary {
    pub family: Family,
    pub n: usize,
    pub count: u128,
    pub min_nz: Option<usize>,
    pub max_nz: Option<usize>,
    /// Smallest-code member attaining `min_nz`.
    pub argmin: Option<IntPoly>,
    #[serde(serialize_with = "ser_ratio")]
    pub avg_nz: Option<BigRational>,
    pub histogram: BTreeMap<usize, u128>,
}

fn ser_ratio<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(q) => s.serialize_str(&format!("{}/{}", q.numer(), q.denom())),
        None => s.serialize_none(),
    }
}

impl EnumSummary {
    /// Sum of all counted `NZ` values.
    pub fn total_nz(&self) -> u128 {
        self.histogram.iter().map(|(k, v)| *k as u128 * v).sum()
    }
}

/// Exact `NZ` statistics over a whole family. `P` and `-P` share their
/// zeros, so only codes with bit 0 clear are counted, each twice.
pub fn census(family: Family, n: usize, budget: u128, iso: &dyn RootIsolator) -> Result<EnumSummary> {
    check_budget(family, n, budget)?;
    let count = family.count(n);
    let half = (count / 2) as u64;
    let per_code: Vec<Result<usize>> = (0..half)
        .into_par_iter()
        .map(|k| unimodular_count(&family.member(n, k << 1), iso, None).map(|c| c.nz))
        .collect();
    let mut histogram: BTreeMap<usize, u128> = BTreeMap::new();
    let mut argmin: Option<(usize, u64)> = None;
    for (k, r) in per_code.into_iter().enumerate() {
        let nz = r?;
        *histogram.entry(nz).or_default() += 2;
        if argmin.is_none_or(|(m, _)| nz < m) {
            argmin = Some((nz, (k as u64) << 1));
        }
    }
    let total: u128 = histogram.iter().map(|(k, v)| *k as u128 * v).sum();
    Ok(EnumSummary {
        family,
        n,
        count,
        min_nz: histogram.keys().next().copied(),
        max_nz: histogram.keys().next_back().copied(),
        argmin: argmin.map(|(_, code)| family.member(n, code)),
        avg_nz: (count > 0).then(|| BigRational::new(BigInt::from(total), BigInt::from(count))),
        histogram,
    })
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Legendre symbol `(k | p)` for an odd prime `p`.
pub fn legendre(k: u64, p: u64) -> i64 {
    let k = k % p;
    if k == 0 {
        return 0;
    }
    let (mut base, mut e, mut r) = (k as u128, (p - 1) / 2, 1u128);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// `f_p(z) = sum_{k<p} (k|p) z^k`.
pub fn fekete(p: u64) -> Result<IntPoly> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(IntPoly::from_i64s(&(0..p).map(|k| legendre(k, p)).collect::<Vec<_>>()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeketeCount {
    pub p: u64,
    /// Zeros of `f_p` on the unit circle (the same as for `f_p / z`).
    pub nz: usize,
    /// How the exact count was reduced to a cosine polynomial.
    pub route: String,
    #[serde(serialize_with = "ser_plain_ratio")]
    pub fraction: BigRational,
    /// `nz / (p - 2)`, normalised by the degree of `f_p / z`.
    #[serde(serialize_with = "ser_plain_ratio")]
    pub fraction_reduced: BigRational,
}

fn ser_plain_ratio<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
}

impl FeketeCount {
    pub fn fraction_f64(&self) -> f64 {
        self.fraction.to_f64().unwrap_or(f64::NAN)
    }
}

/// Exact unimodular zero count of `f_p`. For `p = 1 (mod 4)`, `f_p / z` is
/// self-reciprocal of odd degree; for `p = 3 (mod 4)` it is anti-reciprocal
/// and `f_p / (z (z - 1))` is self-reciprocal.
pub fn fekete_count(p: u64, iso: &dyn RootIsolator) -> Result<FeketeCount> {
    let f = fekete(p)?;
    let c = unimodular_count(&f, iso, None)?;
    Ok(FeketeCount {
        p,
        nz: c.nz,
        route: c.route.to_string(),
        fraction: BigRational::new(BigInt::from(c.nz), BigInt::from(p)),
        fraction_reduced: BigRational::new(BigInt::from(c.nz), BigInt::from(p.saturating_sub(2).max(1))),
    })
}

/// `T_n(t) = cos t + cos((4n+1)t) + sum_{k<n} (cos((4k+1)t) - cos((4k+3)t))`.
pub fn counterexample_t(n: usize) -> CosPoly {
    assert!(n >= 1);
    let mut c = vec![BigInt::zero(); 4 * n + 2];
    c[1] += 1;
    c[4 * n + 1] += 1;
    for k in 0..n {
        c[4 * k + 1] += 1;
        c[4 * k + 3] -= 1;
    }
    CosPoly::new(c)
}

/// Checks `(2 cos t)(T_n(t) - cos t) = 1 + cos((4n+2)t)` coefficientwise.
pub fn counterexample_identity_holds(n: usize) -> bool {
    let t = counterexample_t(n);
    let cos_t = CosPoly::from_i64s(&[0, 1]);
    let rest = CosPoly::new(
        t.coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| if j == 1 { c - 1 } else { c.clone() })
            .collect(),
    );
    let lhs = cos_t.mul_doubled(&rest);
    let mut rhs = vec![BigInt::zero(); 4 * n + 3];
    rhs[0] = BigInt::from(1);
    rhs[4 * n + 2] = BigInt::from(1);
    lhs == CosPoly::new(rhs)
}

fn nonzero_or_err(s: &CoeffSet) -> Result<Vec<i64>> {
    let nz = s.nonzero();
    if nz.is_empty() {
        return Err(Error::Invalid("coefficient set has no nonzero element".into()));
    }
    Ok(nz)
}

/// Degree-`n` polynomial with coefficients drawn uniformly from `S` (the
/// sorted elements, index `next % |S|`); the leading coefficient is drawn
/// from the nonzero elements.
pub fn random_poly(s: &CoeffSet, n: usize, seed: u64) -> Result<IntPoly> {
    let elems = s.as_vec();
    let lead = nonzero_or_err(s)?;
    let mut rng = SplitMix64::new(seed);
    let mut c: Vec<i64> = (0..n).map(|_| *rng.choose(&elems)).collect();
    c.push(*rng.choose(&lead));
    Ok(IntPoly::from_i64s(&c))
}

/// Self-reciprocal variant: draws `a_0` from the nonzero elements and
/// `a_1..a_{floor(n/2)}` from `S`, then mirrors.
pub fn random_selfreciprocal(s: &CoeffSet, n: usize, seed: u64) -> Result<IntPoly> {
    let elems = s.as_vec();
    let lead = nonzero_or_err(s)?;
    let mut rng = SplitMix64::new(seed);
    let mut c = vec![0i64; n + 1];
    c[0] = *rng.choose(&lead);
    for cj in &mut c[1..=n / 2] {
        *cj = *rng.choose(&elems);
    }
    for j in 0..=n / 2 {
        c[n - j] = c[j];
    }
    Ok(IntPoly::from_i64s(&c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zerocount::{default_isolator, zero_report};

    #[test]
    fn enumeration_counts() {
        let v: Vec<_> = enumerate_selfreciprocal_littlewood(1, 1 << 20).unwrap().collect();
        assert_eq!(v, vec![IntPoly::from_i64s(&[1, 1]), IntPoly::from_i64s(&[-1, -1])]);
        assert_eq!(enumerate_selfreciprocal_littlewood(2, 1 << 20).unwrap().count(), 4);
        assert_eq!(enumerate_selfreciprocal_littlewood(11, 1 << 20).unwrap().count(), 64);
        assert!(matches!(
            enumerate_selfreciprocal_littlewood(40, 1000).map(|_| ()),
            Err(Error::BudgetExceeded { .. })
        ));
        for n in 1..=12 {
            let all: Vec<_> = enumerate(Family::SelfReciprocalLittlewood, n, 1 << 20).unwrap().collect();
            assert!(all.iter().all(|p| p.is_self_reciprocal() && p.degree() == Some(n)));
            let distinct: std::collections::BTreeSet<String> = all.iter().map(|p| p.to_string()).collect();
            assert_eq!(distinct.len(), all.len());
            let skew: Vec<_> = enumerate(Family::SkewReciprocalLittlewood, n, 1 << 20).unwrap().collect();
            assert!(skew.iter().all(|p| p.is_skew_reciprocal() && p.degree() == Some(n)));
        }
    }

    #[test]
    fn skew_family_nonempty_only_for_multiples_of_four() {
        // Brute force over all Littlewood polynomials of small degree.
        for n in 1..=12usize {
            let brute = (0u32..(1 << (n + 1)))
                .filter(|code| {
                    let c: Vec<i64> = (0..=n).map(|j| if code >> j & 1 == 1 { -1 } else { 1 }).collect();
                    IntPoly::from_i64s(&c).is_skew_reciprocal()
                })
                .count() as u128;
            assert_eq!(brute, Family::SkewReciprocalLittlewood.count(n), "n = {n}");
        }
    }

    #[test]
    fn census_small_degrees() {
        let iso = default_isolator();
        let s = census(Family::SelfReciprocalLittlewood, 7, 1 << 20, iso.as_ref()).unwrap();
        assert_eq!(s.min_nz, Some(3));
        assert_eq!(s.argmin, Some(IntPoly::from_i64s(&[1, -1, 1, 1, 1, 1, -1, 1])));
        assert_eq!(s.histogram.values().sum::<u128>(), s.count);
        let k = census(Family::SkewReciprocalLittlewood, 4, 1 << 20, iso.as_ref()).unwrap();
        assert_eq!((k.min_nz, k.max_nz), (Some(0), Some(0)));
        let e = census(Family::SkewReciprocalLittlewood, 6, 1 << 20, iso.as_ref()).unwrap();
        assert_eq!(e.count, 0);
        assert_eq!(e.min_nz, None);
    }

    #[test]
    fn fekete_examples() {
        assert_eq!(fekete(3).unwrap(), IntPoly::from_i64s(&[0, 1, -1]));
        assert_eq!(fekete(5).unwrap(), IntPoly::from_i64s(&[0, 1, -1, -1, 1]));
        assert_eq!(fekete(9), Err(Error::NotOddPrime(9)));
        assert_eq!(fekete(2), Err(Error::NotOddPrime(2)));
        for p in [7u64, 11, 13, 101] {
            let f = fekete(p).unwrap();
            let plus = f.coeffs().iter().filter(|c| **c == BigInt::from(1)).count() as u64;
            let minus = f.coeffs().iter().filter(|c| **c == BigInt::from(-1)).count() as u64;
            assert_eq!((plus, minus), ((p - 1) / 2, (p - 1) / 2));
            assert!(f.eval_at_one().is_zero());
        }
    }

    #[test]
    fn fekete_fractions_in_unit_interval() {
        let iso = default_isolator();
        let c5 = fekete_count(5, iso.as_ref()).unwrap();
        // f_5 = z (1 - z)(1 - z^2)(-1)... has zeros 0, 1 (double), -1.
        assert_eq!(c5.nz, 3);
        let c13 = fekete_count(13, iso.as_ref()).unwrap();
        assert!(c13.fraction_f64() > 0.0 && c13.fraction_f64() < 1.0);
        let c7 = fekete_count(7, iso.as_ref()).unwrap();
        assert_eq!(c7.route, "anti-reciprocal");
    }

    #[test]
    fn counterexample_family() {
        let t1 = counterexample_t(1);
        assert_eq!(t1, CosPoly::from_i64s(&[0, 2, 0, -1, 0, 1]));
        for n in 1..=12 {
            assert!(counterexample_identity_holds(n));
            let r = zero_report(&counterexample_t(n)).unwrap();
            assert_eq!((r.nz, r.nz_star), (2, 2));
        }
    }

    #[test]
    fn random_polys_are_reproducible_and_in_set() {
        let s = CoeffSet::new([-2, -1, 0, 1, 2]).unwrap();
        let a = random_poly(&s, 20, 42).unwrap();
        assert_eq!(a, random_poly(&s, 20, 42).unwrap());
        assert_ne!(a, random_poly(&s, 20, 43).unwrap());
        assert_eq!(a.degree(), Some(20));
        assert!(a.coeffs().iter().all(|c| s.contains(c.to_i64().unwrap())));
        let b = random_selfreciprocal(&s, 15, 9).unwrap();
        assert!(b.is_self_reciprocal() && b.degree() == Some(15));
    }

    #[test]
    fn random_frequencies_are_uniform() {
        let s = CoeffSet::new([-2, -1, 0, 1, 2]).unwrap();
        let mut counts = BTreeMap::<i64, u64>::new();
        let draws = 100_000usize;
        let p = random_poly(&s, draws, 1).unwrap();
        for c in &p.coeffs()[..draws] {
            *counts.entry(c.to_i64().unwrap()).or_default() += 1;
        }
        let expect = draws as f64 / 5.0;
        for v in counts.values() {
            assert!((*v as f64 - expect).abs() / expect < 0.05);
        }
    }
}
