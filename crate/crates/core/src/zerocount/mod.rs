//! Exact counting of the zeros of cosine polynomials in a period and of the
//! unimodular zeros of integer polynomials.
//!
//! A cosine polynomial `T` is read through `g(cos t) = T(t)`. A root `x_0` of
//! `g` inside `(-1, 1)` with multiplicity `m` gives the two zeros
//! `t = +-arccos x_0`, each of multiplicity `m`, so it adds `2m` to `NZ` and,
//! when `m` is odd, two sign changes to `NZ*`. A root of `g` at `x = 1` (or
//! `x = -1`) of multiplicity `m` is a zero of `T` at `t = 0` (or `t = pi`) of
//! multiplicity `2m`, because `1 - cos t` vanishes to second order; it adds
//! `2m` to `NZ` and no sign change. With this convention `NZ(T)` equals the
//! number of zeros of the matching self-reciprocal polynomial on the circle.

mod squarefree;
mod sturm;
mod subdivision;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{to_cosine, CosPoly, IntPoly};

pub use squarefree::squarefree_decompose;
pub use sturm::{count_roots_in, isolate_squarefree, SturmChain};
pub use subdivision::certify_squarefree;

/// Default width, in bits, of reported isolating intervals.
pub const REPORT_BITS: u32 = 64;

/// Isolating interval in `x = cos t`: either the open interval `(lo, hi)`
/// or, when `lo == hi`, the exact rational root `lo`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn open(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo < hi);
        Self { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        if self.is_point() {
            *x == self.lo
        } else {
            self.lo < *x && *x < self.hi
        }
    }

    /// Disjointness as sets (open intervals may share an endpoint).
    pub fn overlaps(&self, o: &Interval) -> bool {
        let (a, b) = if self.lo <= o.lo { (self, o) } else { (o, self) };
        if b.is_point() && !a.is_point() {
            return a.contains(&b.lo);
        }
        if a.is_point() {
            return b.contains(&a.lo) || (b.is_point() && a.lo == b.lo);
        }
        a.hi > b.lo
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        ((&self.lo + &self.hi) / BigRational::from(BigInt::from(2))).to_f64().unwrap_or(f64::NAN)
    }
}

pub fn rational_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteriorRoot {
    pub interval: Interval,
    pub multiplicity: u32,
}

impl Serialize for InteriorRoot {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("InteriorRoot", 3)?;
        st.serialize_field("lo", &rational_string(&self.interval.lo))?;
        st.serialize_field("hi", &rational_string(&self.interval.hi))?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroReport {
    pub interior: Vec<InteriorRoot>,
    pub mult_at_plus1: u32,
    pub mult_at_minus1: u32,
    pub nz: usize,
    pub nz_star: usize,
}

impl ZeroReport {
    fn assemble(interior: Vec<InteriorRoot>, plus: u32, minus: u32) -> Self {
        let inner: usize = interior.iter().map(|r| r.multiplicity as usize).sum();
        let odd = interior.iter().filter(|r| r.multiplicity % 2 == 1).count();
        Self {
            nz: 2 * inner + 2 * (plus + minus) as usize,
            nz_star: 2 * odd,
            interior,
            mult_at_plus1: plus,
            mult_at_minus1: minus,
        }
    }
}

/// Root isolation on `(-1, 1)` for a cosine polynomial that does not vanish
/// at `t = 0` or `t = pi`.
pub trait RootIsolator: Send + Sync {
    fn name(&self) -> &'static str;

    /// Isolating intervals with multiplicities, sorted and pairwise
    /// disjoint. With `refine_bits`, each interval is narrowed below
    /// `2^-refine_bits`.
    fn isolate(&self, t: &CosPoly, refine_bits: Option<u32>) -> Result<Vec<InteriorRoot>>;
}

/// Square-free decomposition plus Sturm sequences on the algebraic form.
#[derive(Debug, Default, Clone, Copy)]
pub struct SturmIsolator;

/// Certified subdivision in the Chebyshev basis; needs a square-free input
/// and hands anything else to [`SturmIsolator`].
#[derive(Debug, Default, Clone, Copy)]
pub struct SubdivisionIsolator;

/// Sturm up to a degree threshold, subdivision above it.
#[derive(Debug, Clone, Copy)]
pub struct AutoIsolator {
    pub sturm_max_degree: usize,
}

impl Default for AutoIsolator {
    fn default() -> Self {
        Self { sturm_max_degree: 40 }
    }
}

fn unit_endpoints() -> (BigRational, BigRational) {
    (BigRational::from(BigInt::from(-1)), BigRational::from(BigInt::from(1)))
}

impl RootIsolator for SturmIsolator {
    fn name(&self) -> &'static str {
        "sturm"
    }

    fn isolate(&self, t: &CosPoly, refine_bits: Option<u32>) -> Result<Vec<InteriorRoot>> {
        let g = t.to_chebyshev_algebraic();
        let (lo, hi) = unit_endpoints();
        let mut found: Vec<(Interval, usize, u32)> = Vec::new();
        let factors = squarefree_decompose(&g)?;
        for (fi, (f, m)) in factors.iter().enumerate() {
            for mut iv in isolate_squarefree(f, &lo, &hi)? {
                if let Some(bits) = refine_bits {
                    sturm::refine(f, &mut iv, bits);
                }
                found.push((iv, fi, *m));
            }
        }
        // Intervals of different factors may overlap; narrow until they do not.
        loop {
            found.sort_by(|a, b| a.0.lo.cmp(&b.0.lo));
            let clash = (1..found.len()).find(|&i| found[i - 1].0.overlaps(&found[i].0));
            let Some(i) = clash else { break };
            for j in [i - 1, i] {
                let (iv, fi, _) = &mut found[j];
                if !iv.is_point() {
                    let w = iv.width();
                    let bits = (w.denom().bits() as i64 - w.numer().bits() as i64 + 2).max(1) as u32;
                    sturm::refine(&factors[*fi].0, iv, bits);
                }
            }
        }
        Ok(found
            .into_iter()
            .map(|(interval, _, multiplicity)| InteriorRoot { interval, multiplicity })
            .collect())
    }
}

impl RootIsolator for SubdivisionIsolator {
    fn name(&self) -> &'static str {
        "subdivision"
    }

    fn isolate(&self, t: &CosPoly, refine_bits: Option<u32>) -> Result<Vec<InteriorRoot>> {
        if t.degree().unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        if !certify_squarefree(t.coeffs()) {
            return SturmIsolator.isolate(t, refine_bits);
        }
        let cells = subdivision::isolate(t.coeffs())?;
        Ok(cells
            .into_iter()
            .map(|(iv, a, b)| InteriorRoot {
                interval: match refine_bits {
                    Some(bits) => subdivision::refine(t.coeffs(), a, b, bits),
                    None => iv,
                },
                multiplicity: 1,
            })
            .collect())
    }
}

impl RootIsolator for AutoIsolator {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn isolate(&self, t: &CosPoly, refine_bits: Option<u32>) -> Result<Vec<InteriorRoot>> {
        if t.degree().unwrap_or(0) <= self.sturm_max_degree {
            SturmIsolator.isolate(t, refine_bits)
        } else {
            SubdivisionIsolator.isolate(t, refine_bits)
        }
    }
}

/// Names accepted by [`isolator_by_name`].
pub const ISOLATORS: [&str; 3] = ["auto", "sturm", "subdivision"];

pub fn isolator_by_name(name: &str) -> Result<Arc<dyn RootIsolator>> {
    match name {
        "auto" => Ok(Arc::new(AutoIsolator::default())),
        "sturm" => Ok(Arc::new(SturmIsolator)),
        "subdivision" => Ok(Arc::new(SubdivisionIsolator)),
        other => Err(Error::Invalid(format!(
            "unknown isolator {other:?}; expected one of {}",
            ISOLATORS.join(", ")
        ))),
    }
}

pub fn default_isolator() -> Arc<dyn RootIsolator> {
    Arc::new(AutoIsolator::default())
}

/// Removes the roots at `x = 1` and `x = -1`, returning their multiplicities.
pub fn strip_unit_roots(t: &CosPoly) -> (CosPoly, u32, u32) {
    let mut cur = t.primitive_part();
    let mut plus = 0;
    while cur.degree().is_some_and(|d| d > 0) && cur.value_at_zero().is_zero() {
        cur = cur.div_one_minus_cos().expect("vanishing at t = 0 implies divisibility");
        plus += 1;
    }
    let mut minus = 0;
    while cur.degree().is_some_and(|d| d > 0) && cur.value_at_pi().is_zero() {
        cur = cur.div_one_plus_cos().expect("vanishing at t = pi implies divisibility");
        minus += 1;
    }
    (cur, plus, minus)
}

/// Zeros of `T` over one period, intervals refined below `2^-64`.
pub fn zero_report(t: &CosPoly) -> Result<ZeroReport> {
    zero_report_with(t, default_isolator().as_ref(), Some(REPORT_BITS))
}

pub fn zero_report_with(t: &CosPoly, iso: &dyn RootIsolator, refine_bits: Option<u32>) -> Result<ZeroReport> {
    if t.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (core, plus, minus) = strip_unit_roots(t);
    let interior = iso.isolate(&core, refine_bits)?;
    Ok(ZeroReport::assemble(interior, plus, minus))
}

/// How a polynomial was reduced to a cosine polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Self-reciprocal of even degree.
    Cosine,
    /// Self-reciprocal of odd degree, counted through `(z + 1) P`.
    Lift,
    /// `a_j = -a_{n-j}`: divided by `z - 1`, which leaves a self-reciprocal factor.
    AntiReciprocal,
    /// Any other shape, counted through the self-reciprocal `P(z) z^n P(1/z)`.
    Product,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Route::Cosine => "cosine",
            Route::Lift => "lift",
            Route::AntiReciprocal => "anti-reciprocal",
            Route::Product => "product",
        };
        f.write_str(s)
    }
}

/// Unimodular zero count of an integer polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnimodularCount {
    pub nz: usize,
    /// Sign changes of the associated cosine polynomial, when the route keeps
    /// them meaningful (cosine and lift).
    pub nz_star: Option<usize>,
    pub route: Route,
    /// Report for the cosine polynomial the count was read from.
    pub report: ZeroReport,
}

/// Counts zeros on `|z| = 1` with multiplicity, for any nonzero `P`.
pub fn unimodular_count(p: &IntPoly, iso: &dyn RootIsolator, refine_bits: Option<u32>) -> Result<UnimodularCount> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (_, core) = p.strip_low_zeros();
    let deg = core.degree().unwrap();
    if core.is_self_reciprocal() {
        if deg % 2 == 0 {
            let report = zero_report_with(&to_cosine(&core)?, iso, refine_bits)?;
            return Ok(UnimodularCount { nz: report.nz, nz_star: Some(report.nz_star), route: Route::Cosine, report });
        }
        let lifted = &core * &IntPoly::from_i64s(&[1, 1]);
        let report = zero_report_with(&to_cosine(&lifted)?, iso, refine_bits)?;
        return Ok(UnimodularCount { nz: report.nz - 1, nz_star: Some(report.nz_star), route: Route::Lift, report });
    }
    if core.is_anti_reciprocal() {
        let q = core.div_exact(&IntPoly::from_i64s(&[-1, 1])).expect("anti-reciprocal polynomials vanish at 1");
        let inner = unimodular_count(&q, iso, refine_bits)?;
        return Ok(UnimodularCount { nz: inner.nz + 1, nz_star: None, route: Route::AntiReciprocal, report: inner.report });
    }
    let prod = &core * &core.reversed();
    let report = zero_report_with(&to_cosine(&prod)?, iso, refine_bits)?;
    debug_assert!(report.nz % 2 == 0);
    Ok(UnimodularCount { nz: report.nz / 2, nz_star: None, route: Route::Product, report })
}

/// `NZ(P)` for a self-reciprocal or skew-reciprocal `P`.
pub fn nz_unimodular(p: &IntPoly) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (_, core) = p.strip_low_zeros();
    if !core.is_self_reciprocal() && !core.is_skew_reciprocal() {
        return Err(Error::NotSelfReciprocal);
    }
    Ok(unimodular_count(&core, default_isolator().as_ref(), None)?.nz)
}

/// `NZ(P)` for any nonzero `P`.
pub fn nz_general(p: &IntPoly) -> Result<usize> {
    Ok(unimodular_count(p, default_isolator().as_ref(), None)?.nz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn cp(c: &[i64]) -> CosPoly {
        CosPoly::from_i64s(c)
    }

    #[test]
    fn report_examples() {
        let r = zero_report(&cp(&[1, 2, 2])).unwrap();
        assert_eq!((r.nz, r.nz_star), (4, 4));
        let r = zero_report(&cp(&[1, 1])).unwrap();
        assert_eq!((r.nz, r.nz_star, r.mult_at_minus1), (2, 0, 1));
        assert_eq!(zero_report(&CosPoly::default()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn nz_examples() {
        assert_eq!(nz_unimodular(&p(&[1, 1, 1])), Ok(2));
        assert_eq!(nz_unimodular(&p(&[1, 1, 1, 1, 1])), Ok(4));
        assert_eq!(nz_unimodular(&p(&[1, 1, -1, -1, 1])), Ok(0));
        assert_eq!(nz_unimodular(&p(&[1, 2, 3])), Err(Error::NotSelfReciprocal));
        assert_eq!(nz_unimodular(&p(&[1, 1])), Ok(1));
        assert_eq!(nz_general(&p(&[0, 0, 1, 2])), Ok(0));
        assert_eq!(nz_general(&p(&[-1, 0, 1])), Ok(2));
    }

    #[test]
    fn selfreciprocal_littlewood_always_has_a_unimodular_zero() {
        for n in 1..=8usize {
            let half = n / 2 + 1;
            for code in 0u32..(1 << half) {
                let mut c = vec![0i64; n + 1];
                for j in 0..half {
                    let v = if code >> j & 1 == 1 { -1 } else { 1 };
                    c[j] = v;
                    c[n - j] = v;
                }
                assert!(nz_unimodular(&p(&c)).unwrap() >= 1);
            }
        }
    }

    /// Product of cyclotomic-type factors with known unimodular content.
    #[test]
    fn constructed_ground_truth() {
        let phi3 = p(&[1, 1, 1]);
        let phi4 = p(&[1, 0, 1]);
        let zp1 = p(&[1, 1]);
        let off = p(&[2, 5, 2]); // roots -2 and -1/2
        let cases = [
            (&(&phi3 * &phi3) * &phi4, 6),
            (&(&zp1 * &zp1) * &(&zp1 * &off), 3),
            (&(&phi4 * &phi4) * &(&phi4 * &off), 6),
            (&(&p(&[-1, 1]) * &p(&[-1, 1])) * &phi3, 4),
        ];
        for (q, want) in cases {
            assert_eq!(nz_general(&q), Ok(want), "{q}");
            assert_eq!(nz_general(&-&q), Ok(want));
        }
    }

    #[test]
    fn nz_star_is_even_and_bounded_by_nz() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..200 {
            let d = rng.range_i64(0, 12) as usize;
            let c: Vec<i64> = (0..=d).map(|_| rng.range_i64(-3, 3)).collect();
            let t = cp(&c);
            if t.is_zero() {
                continue;
            }
            let r = zero_report(&t).unwrap();
            assert_eq!(r.nz_star % 2, 0);
            assert!(r.nz_star <= r.nz);
            for w in r.interior.windows(2) {
                assert!(!w[0].interval.overlaps(&w[1].interval));
            }
        }
    }

    #[test]
    fn isolators_agree() {
        let mut rng = SplitMix64::new(77);
        for _ in 0..100 {
            let d = rng.range_i64(1, 25) as usize;
            let c: Vec<i64> = (0..=d).map(|_| rng.range_i64(-2, 2)).collect();
            let t = cp(&c);
            if t.is_zero() {
                continue;
            }
            let a = zero_report_with(&t, &SturmIsolator, None).unwrap();
            let b = zero_report_with(&t, &SubdivisionIsolator, None).unwrap();
            assert_eq!((a.nz, a.nz_star), (b.nz, b.nz_star), "{t}");
        }
    }

    #[test]
    fn json_uses_rational_strings() {
        let r = zero_report(&cp(&[0, 1])).unwrap();
        let js = serde_json::to_value(&r).unwrap();
        assert_eq!(js["interior"][0]["lo"], "0/1");
        assert_eq!(js["nz"], 2);
    }

    #[test]
    fn registry_lookup() {
        for name in ISOLATORS {
            assert_eq!(isolator_by_name(name).unwrap().name(), name);
        }
        assert!(isolator_by_name("newton").is_err());
    }
}
