//! Numeric root finder used only to cross-check the exact counts.
//!
//! Roots at `0` and `+-1` are removed exactly first. The rest are located by
//! the Aberth iteration in double precision and then either carried to high
//! precision with the same iteration in fixed-point arithmetic (small
//! degree), or polished by Newton steps in double-double arithmetic (large
//! degree). Approximations closer than `cluster_tol` are merged, and a
//! cluster counts as unimodular when its centroid satisfies
//! `||c| - 1| < unit_tol`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hiprec::{CFx, Fx};
use crate::poly::IntPoly;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Refinement {
    /// Aberth iteration in fixed point with this many fractional bits.
    FixedPoint { bits: u32 },
    /// Newton polishing in double-double arithmetic (about 32 digits).
    DoubleDouble,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub refinement: Refinement,
    pub cluster_tol: f64,
    pub unit_tol: f64,
    /// Centroids with `unit_tol <= ||c| - 1| < ambiguous_tol` are flagged.
    pub ambiguous_tol: f64,
}

impl OracleConfig {
    /// About 150 significant digits, well beyond the 100 the checks need.
    pub fn hundred_digits() -> Self {
        Self {
            refinement: Refinement::FixedPoint { bits: 512 },
            cluster_tol: 1e-30,
            unit_tol: 1e-40,
            ambiguous_tol: 1e-20,
        }
    }

    /// For degrees in the hundreds or more.
    pub fn large_degree() -> Self {
        Self {
            refinement: Refinement::DoubleDouble,
            cluster_tol: 1e-18,
            unit_tol: 1e-20,
            ambiguous_tol: 1e-12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCount {
    /// Unimodular zeros with multiplicity.
    pub nz: usize,
    pub mult_at_plus1: usize,
    pub mult_at_minus1: usize,
    pub clusters: usize,
    /// Clusters whose distance to the circle fell in the ambiguous band.
    pub ambiguous: usize,
    /// Smallest `||c| - 1|` over clusters classified off the circle.
    pub min_off_circle: f64,
    pub converged: bool,
}

impl OracleCount {
    pub fn is_trustworthy(&self) -> bool {
        self.converged && self.ambiguous == 0
    }
}

pub fn oracle_count(p: &IntPoly, cfg: &OracleConfig) -> Result<OracleCount> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (_, core) = p.strip_low_zeros();
    let (plus, core) = core.split_root_at_unit(false);
    let (minus, core) = core.split_root_at_unit(true);
    let mut out = OracleCount {
        nz: plus + minus,
        mult_at_plus1: plus,
        mult_at_minus1: minus,
        clusters: 0,
        ambiguous: 0,
        min_off_circle: f64::INFINITY,
        converged: true,
    };
    let n = core.degree().unwrap();
    if n == 0 {
        return Ok(out);
    }
    let (start, ok) = aberth_f64(&core);
    out.converged &= ok;
    let clusters: Vec<(Vec<usize>, f64)> = match cfg.refinement {
        Refinement::FixedPoint { bits } => {
            let (roots, ok) = aberth_fixed(&core, &start, bits);
            out.converged &= ok;
            cluster_fixed(&roots, cfg.cluster_tol)
        }
        Refinement::DoubleDouble => {
            let roots: Vec<(dd::Cdd, bool)> = start.iter().map(|z| dd::newton_polish(&core, *z)).collect();
            out.converged &= roots.iter().all(|r| r.1);
            let pts: Vec<dd::Cdd> = roots.into_iter().map(|r| r.0).collect();
            cluster_dd(&pts, cfg.cluster_tol)
        }
    };
    for (members, dist) in &clusters {
        if *dist < cfg.unit_tol {
            out.nz += members.len();
        } else {
            out.min_off_circle = out.min_off_circle.min(*dist);
            if *dist < cfg.ambiguous_tol {
                out.ambiguous += 1;
            }
        }
    }
    out.clusters = clusters.len();
    Ok(out)
}

fn to_f64_coeffs(p: &IntPoly) -> Vec<f64> {
    p.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}

/// `P(z) / P'(z)`, evaluated through the reversed polynomial when `|z| > 1`.
fn newton_ratio_f64(c: &[f64], z: Complex64) -> Complex64 {
    let n = c.len() - 1;
    if z.norm_sqr() <= 1.0 {
        let (mut p, mut d) = (Complex64::new(c[n], 0.0), Complex64::zero());
        for k in (0..n).rev() {
            d = d * z + p;
            p = p * z + c[k];
        }
        p / d
    } else {
        // P(z) = z^n R(w), w = 1/z; P'(z) = z^{n-1} (n R(w) - w R'(w)).
        let w = z.inv();
        let (mut r, mut dr) = (Complex64::new(c[0], 0.0), Complex64::zero());
        for &ck in &c[1..=n] {
            dr = dr * w + r;
            r = r * w + ck;
        }
        z * r / (r * n as f64 - w * dr)
    }
}

/// Simultaneous Aberth iteration in double precision.
fn aberth_f64(p: &IntPoly) -> (Vec<Complex64>, bool) {
    let c = to_f64_coeffs(p);
    let n = c.len() - 1;
    let r = (c[0].abs() / c[n].abs()).powf(1.0 / n as f64);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut best = f64::INFINITY;
    let mut stall = 0;
    for _ in 0..2000 {
        let mut worst = 0.0f64;
        for i in 0..n {
            let ratio = newton_ratio_f64(&c, z[i]);
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if worst < 1e-14 {
            return (z, true);
        }
        // Multiple roots stall well above 1e-14 in double precision.
        if worst < best {
            best = worst;
            stall = 0;
        } else {
            stall += 1;
            if stall >= 30 {
                return (z, best < 1e-3);
            }
        }
    }
    (z, false)
}

fn horner_fixed(p: &IntPoly, z: &CFx) -> (CFx, CFx) {
    let c = p.coeffs();
    let n = c.len() - 1;
    let prec = z.prec();
    let mut v = CFx::zero(prec).add_int(&c[n]);
    let mut d = CFx::zero(prec);
    for k in (0..n).rev() {
        d = d.mul(z).add(&v);
        v = v.mul(z).add_int(&c[k]);
    }
    (v, d)
}

/// Aberth iteration in fixed point until corrections fall to the working
/// precision or stop shrinking (as they do at multiple roots).
fn aberth_fixed(p: &IntPoly, start: &[Complex64], bits: u32) -> (Vec<CFx>, bool) {
    let prec = bits + 32;
    let n = start.len();
    let mut z: Vec<CFx> = start.iter().map(|s| CFx::from_f64(s.re, s.im, prec)).collect();
    let one = CFx::zero(prec).add_int(&BigInt::from(1));
    let tiny_bits = 32u64 + 8;
    let mut best = u64::MAX;
    let mut stall = 0;
    for _ in 0..3000 {
        let mut worst_bits = 0u64;
        for i in 0..n {
            let (v, d) = horner_fixed(p, &z[i]);
            if v.norm_sqr_raw().is_zero() {
                continue;
            }
            if d.norm_sqr_raw().is_zero() {
                continue;
            }
            let ratio = v.div(&d);
            let mut s = CFx::zero(prec);
            for j in 0..n {
                if j != i {
                    let diff = z[i].sub(&z[j]);
                    if !diff.norm_sqr_raw().is_zero() {
                        s = s.add(&one.div(&diff));
                    }
                }
            }
            let den = one.sub(&ratio.mul(&s));
            if den.norm_sqr_raw().is_zero() {
                continue;
            }
            let w = ratio.div(&den);
            worst_bits = worst_bits.max(w.re.m.abs().bits().max(w.im.m.abs().bits()));
            z[i] = z[i].sub(&w);
        }
        if worst_bits <= tiny_bits {
            return (z, true);
        }
        if worst_bits < best {
            best = worst_bits;
            stall = 0;
        } else {
            stall += 1;
            if stall >= 12 {
                // Stagnation at a multiple root: the cluster centroid is still
                // accurate, so this counts as converged.
                return (z, true);
            }
        }
    }
    (z, false)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[i] = r;
        r
    }

    fn groups(mut self, n: usize) -> Vec<Vec<usize>> {
        let mut map: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = self.find(i);
            map.entry(r).or_default().push(i);
        }
        map.into_values().collect()
    }
}

/// Clusters with `||centroid| - 1|` for each.
fn cluster_fixed(z: &[CFx], tol: f64) -> Vec<(Vec<usize>, f64)> {
    let n = z.len();
    let prec = z[0].prec();
    let tol_sq = Fx::from_f64(tol * tol, 2 * prec).m;
    let mut uf = UnionFind((0..n).collect());
    for i in 0..n {
        for j in i + 1..n {
            if z[i].sub(&z[j]).norm_sqr_raw() < tol_sq {
                let (a, b) = (uf.find(i), uf.find(j));
                uf.0[a] = b;
            }
        }
    }
    uf.groups(n)
        .into_iter()
        .map(|g| {
            let mut c = CFx::zero(prec);
            for &i in &g {
                c = c.add(&z[i]);
            }
            let k = BigInt::from(g.len());
            let c = CFx {
                re: Fx { m: &c.re.m / &k, prec },
                im: Fx { m: &c.im.m / &k, prec },
            };
            // ||c| - 1| ~ ||c|^2 - 1| / 2 near the circle.
            let n2 = c.norm_sqr_raw() - (BigInt::from(1) << (2 * prec));
            let dist = crate::hiprec::big_to_f64_scaled(&n2.abs(), 2 * prec as i64) / 2.0;
            (g, dist)
        })
        .collect()
}

fn cluster_dd(z: &[dd::Cdd], tol: f64) -> Vec<(Vec<usize>, f64)> {
    let n = z.len();
    let mut uf = UnionFind((0..n).collect());
    // Sort by angle so that only nearby candidates are compared.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| z[a].approx().arg().total_cmp(&z[b].approx().arg()));
    for w in 0..n {
        for v in 1..=8.min(n - 1) {
            let (i, j) = (order[w], order[(w + v) % n]);
            if z[i].sub(&z[j]).approx().norm() < tol {
                let (a, b) = (uf.find(i), uf.find(j));
                uf.0[a] = b;
            }
        }
    }
    uf.groups(n)
        .into_iter()
        .map(|g| {
            let mut c = dd::Cdd::zero();
            for &i in &g {
                c = c.add(&z[i]);
            }
            let c = c.scale(1.0 / g.len() as f64);
            let dist = (c.norm_sqr().sub_f64(1.0)).hi.abs() / 2.0;
            (g, dist)
        })
        .collect()
}

/// Double-double arithmetic: values `hi + lo` with `|lo| <= ulp(hi) / 2`.
mod dd {
    use num_complex::Complex64;

    use crate::poly::IntPoly;
    use num_traits::ToPrimitive;

    #[derive(Clone, Copy, Debug, PartialEq)]
    pub struct Dd {
        pub hi: f64,
        pub lo: f64,
    }

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        (s, b - (s - a))
    }

    impl Dd {
        pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

        pub fn from(v: f64) -> Dd {
            Dd { hi: v, lo: 0.0 }
        }

        pub fn add(self, o: Dd) -> Dd {
            let (s, e) = two_sum(self.hi, o.hi);
            let (t, f) = two_sum(self.lo, o.lo);
            let (s, e) = quick_two_sum(s, e + t);
            let (hi, lo) = quick_two_sum(s, e + f);
            Dd { hi, lo }
        }

        pub fn neg(self) -> Dd {
            Dd { hi: -self.hi, lo: -self.lo }
        }

        pub fn sub(self, o: Dd) -> Dd {
            self.add(o.neg())
        }

        pub fn sub_f64(self, v: f64) -> Dd {
            self.add(Dd::from(-v))
        }

        pub fn mul(self, o: Dd) -> Dd {
            let p = self.hi * o.hi;
            let e = self.hi.mul_add(o.hi, -p);
            let e = e + (self.hi * o.lo + self.lo * o.hi);
            let (hi, lo) = quick_two_sum(p, e);
            Dd { hi, lo }
        }

        pub fn div(self, o: Dd) -> Dd {
            let q1 = self.hi / o.hi;
            let r = self.sub(o.mul(Dd::from(q1)));
            let q2 = r.hi / o.hi;
            let r = r.sub(o.mul(Dd::from(q2)));
            let q3 = r.hi / o.hi;
            let (hi, lo) = quick_two_sum(q1, q2);
            Dd { hi, lo }.add(Dd::from(q3))
        }
    }

    #[derive(Clone, Copy, Debug, PartialEq)]
    pub struct Cdd {
        pub re: Dd,
        pub im: Dd,
    }

    impl Cdd {
        pub fn zero() -> Cdd {
            Cdd { re: Dd::ZERO, im: Dd::ZERO }
        }

        pub fn from_c64(z: Complex64) -> Cdd {
            Cdd { re: Dd::from(z.re), im: Dd::from(z.im) }
        }

        pub fn approx(&self) -> Complex64 {
            Complex64::new(self.re.hi + self.re.lo, self.im.hi + self.im.lo)
        }

        pub fn add(&self, o: &Cdd) -> Cdd {
            Cdd { re: self.re.add(o.re), im: self.im.add(o.im) }
        }

        pub fn sub(&self, o: &Cdd) -> Cdd {
            Cdd { re: self.re.sub(o.re), im: self.im.sub(o.im) }
        }

        pub fn add_real(&self, v: f64) -> Cdd {
            Cdd { re: self.re.add(Dd::from(v)), im: self.im }
        }

        pub fn mul(&self, o: &Cdd) -> Cdd {
            Cdd {
                re: self.re.mul(o.re).sub(self.im.mul(o.im)),
                im: self.re.mul(o.im).add(self.im.mul(o.re)),
            }
        }

        pub fn scale(&self, v: f64) -> Cdd {
            Cdd { re: self.re.mul(Dd::from(v)), im: self.im.mul(Dd::from(v)) }
        }

        pub fn norm_sqr(&self) -> Dd {
            self.re.mul(self.re).add(self.im.mul(self.im))
        }

        pub fn div(&self, o: &Cdd) -> Cdd {
            let den = o.norm_sqr();
            let re = self.re.mul(o.re).add(self.im.mul(o.im));
            let im = self.im.mul(o.re).sub(self.re.mul(o.im));
            Cdd { re: re.div(den), im: im.div(den) }
        }
    }

    /// `P(z) / P'(z)` in double-double, reversed when `|z| > 1`.
    fn ratio(c: &[f64], z: &Cdd) -> Cdd {
        let n = c.len() - 1;
        if z.approx().norm_sqr() <= 1.0 {
            let (mut p, mut d) = (Cdd::zero().add_real(c[n]), Cdd::zero());
            for k in (0..n).rev() {
                d = d.mul(z).add(&p);
                p = p.mul(z).add_real(c[k]);
            }
            p.div(&d)
        } else {
            let one = Cdd::zero().add_real(1.0);
            let w = one.div(z);
            let (mut r, mut dr) = (Cdd::zero().add_real(c[0]), Cdd::zero());
            for &ck in &c[1..] {
                dr = dr.mul(&w).add(&r);
                r = r.mul(&w).add_real(ck);
            }
            let den = r.scale(n as f64).sub(&w.mul(&dr));
            z.mul(&r).div(&den)
        }
    }

    pub fn newton_polish(p: &IntPoly, start: Complex64) -> (Cdd, bool) {
        let c: Vec<f64> = p.coeffs().iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
        let mut z = Cdd::from_c64(start);
        for _ in 0..8 {
            let step = ratio(&c, &z);
            let size = step.approx().norm();
            if !size.is_finite() {
                return (z, false);
            }
            z = z.sub(&step);
            if size < 1e-30 * z.approx().norm().max(1.0) {
                return (z, true);
            }
        }
        // A few more steps cannot help once the evaluation error dominates;
        // accept if the last correction was already tiny.
        let last = ratio(&c, &z).approx().norm();
        (z, last < 1e-24)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use crate::zerocount::nz_general;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn simple_counts() {
        let cfg = OracleConfig::hundred_digits();
        assert_eq!(oracle_count(&p(&[1, 1, 1, 1, 1]), &cfg).unwrap().nz, 4);
        assert_eq!(oracle_count(&p(&[1, 1, 1]), &cfg).unwrap().nz, 2);
        assert_eq!(oracle_count(&p(&[1, 1, -1, -1, 1]), &cfg).unwrap().nz, 0);
        assert_eq!(oracle_count(&p(&[2, 5, 2]), &cfg).unwrap().nz, 0);
    }

    #[test]
    fn multiple_roots_cluster() {
        let phi3 = p(&[1, 1, 1]);
        let q = &(&phi3 * &phi3) * &(&phi3 * &p(&[2, 5, 2]));
        let r = oracle_count(&q, &OracleConfig::hundred_digits()).unwrap();
        assert_eq!(r.nz, 6);
        assert!(r.is_trustworthy(), "{r:?}");
    }

    #[test]
    fn agrees_with_exact_on_random_small_inputs() {
        let mut rng = SplitMix64::new(31);
        for _ in 0..30 {
            let half = rng.range_i64(1, 8) as usize;
            let mut c: Vec<i64> = (0..half).map(|_| rng.range_i64(-2, 2)).collect();
            c[0] = 1;
            let mirror: Vec<i64> = c.iter().rev().skip(1).copied().collect();
            c.extend(mirror);
            let q = p(&c);
            let r = oracle_count(&q, &OracleConfig::hundred_digits()).unwrap();
            assert!(r.is_trustworthy(), "{q} {r:?}");
            assert_eq!(r.nz, nz_general(&q).unwrap(), "{q}");
        }
    }

    #[test]
    fn double_double_mode_on_moderate_degree() {
        let mut rng = SplitMix64::new(8);
        let n = 120;
        let c: Vec<i64> = (0..=n).map(|_| if rng.below(2) == 0 { 1 } else { -1 }).collect();
        let mut sym = c[..=n / 2].to_vec();
        let mirror: Vec<i64> = sym.iter().rev().skip(1).copied().collect();
        sym.extend(mirror);
        let q = p(&sym);
        let r = oracle_count(&q, &OracleConfig::large_degree()).unwrap();
        assert!(r.is_trustworthy(), "{r:?}");
        assert_eq!(r.nz, nz_general(&q).unwrap());
    }
}
