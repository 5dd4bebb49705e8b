use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Interval;
use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Sturm sequence `g_0 = g, g_1 = g', g_{i+1} = -rem(g_{i-1}, g_i)`, each
/// entry scaled by a positive rational so the coefficients stay integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmChain {
    polys: Vec<IntPoly>,
}

/// Divides by the positive content, keeping the sign of the polynomial.
fn positive_primitive(p: &IntPoly) -> IntPoly {
    let c = p.content();
    if c.is_zero() || c.is_one() {
        return p.clone();
    }
    IntPoly::new(p.coeffs().iter().map(|a| a / &c).collect())
}

impl SturmChain {
    pub fn new(g: &IntPoly) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut polys = vec![positive_primitive(g)];
        let d = positive_primitive(&g.derivative());
        if !d.is_zero() {
            polys.push(d);
        }
        while polys.len() >= 2 {
            let n = polys.len();
            let (a, b) = (&polys[n - 2], &polys[n - 1]);
            if b.degree() == Some(0) {
                break;
            }
            // prem = lc(b)^(delta+1) * rem, so the true remainder has the sign
            // of prem times sign(lc(b))^(delta+1).
            let delta = a.degree().unwrap() - b.degree().unwrap();
            let prem = a.pseudo_rem(b);
            if prem.is_zero() {
                break;
            }
            let flip = b.leading().unwrap().is_negative() && (delta + 1) % 2 == 1;
            let next = if flip { prem } else { -&prem };
            polys.push(positive_primitive(&next));
        }
        Ok(Self { polys })
    }

    pub fn polys(&self) -> &[IntPoly] {
        &self.polys
    }

    /// Number of sign variations at a rational point, zeros skipped.
    pub fn variations_at(&self, x: &BigRational) -> usize {
        let signs = self.polys.iter().map(|p| p.sign_at(x));
        count_variations(signs)
    }

    /// Number of distinct real roots in the open interval `(lo, hi)`.
    pub fn count_in(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations_at(lo).saturating_sub(self.variations_at(hi))
    }
}

fn count_variations(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut v = 0;
    for s in signs.filter(|s| *s != Ordering::Equal) {
        if last != Ordering::Equal && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Exact count of distinct real roots of a square-free `g` in `(lo, hi)`.
pub fn count_roots_in(g: &IntPoly, lo: &BigRational, hi: &BigRational) -> Result<usize> {
    if g.sign_at(lo) == Ordering::Equal || g.sign_at(hi) == Ordering::Equal {
        return Err(Error::EndpointRoot);
    }
    Ok(SturmChain::new(g)?.count_in(lo, hi))
}

pub(crate) fn dyadic(num: i64, bits: u32) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::one() << bits)
}

/// Isolating intervals for the roots of a square-free `f` in `(lo, hi)`;
/// `f` must not vanish at either endpoint.
pub fn isolate_squarefree(f: &IntPoly, lo: &BigRational, hi: &BigRational) -> Result<Vec<Interval>> {
    let chain = SturmChain::new(f)?;
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone(), chain.count_in(lo, hi))];
    let two = BigRational::from(BigInt::from(2));
    while let Some((a, b, count)) = stack.pop() {
        match count {
            0 => {}
            1 => out.push(Interval::open(a, b)),
            _ => {
                let mut mid = (&a + &b) / &two;
                let mut j = 1;
                while f.sign_at(&mid) == Ordering::Equal {
                    mid = (&a + &b) / &two + (&b - &a) * dyadic(j, 64);
                    j += 1;
                }
                let left = chain.count_in(&a, &mid);
                stack.push((mid.clone(), b, count - left));
                stack.push((a, mid, left));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}

/// Bisects an isolating interval of a square-free `f` until its width is
/// below `2^-bits`, or until the root is hit exactly.
pub fn refine(f: &IntPoly, iv: &mut Interval, bits: u32) {
    let target = dyadic(1, bits);
    let two = BigRational::from(BigInt::from(2));
    let sign_lo = f.sign_at(&iv.lo);
    while !iv.is_point() && &iv.hi - &iv.lo >= target {
        let mid = (&iv.lo + &iv.hi) / &two;
        let s = f.sign_at(&mid);
        if s == Ordering::Equal {
            *iv = Interval::point(mid);
        } else if s == sign_lo {
            iv.lo = mid;
        } else {
            iv.hi = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn chain_degrees_strictly_decrease() {
        let chain = SturmChain::new(&p(&[-1, 2, 4])).unwrap();
        let degs: Vec<_> = chain.polys().iter().map(|p| p.degree().unwrap()).collect();
        assert_eq!(degs, vec![2, 1, 0]);
    }

    #[test]
    fn counts_on_unit_interval() {
        assert_eq!(count_roots_in(&p(&[-1, 2, 4]), &q(-1, 1), &q(1, 1)), Ok(2));
        assert_eq!(count_roots_in(&p(&[1, 0, 1]), &q(-1, 1), &q(1, 1)), Ok(0));
        assert_eq!(count_roots_in(&p(&[-1, 1]), &q(-1, 1), &q(1, 1)), Err(Error::EndpointRoot));
    }

    #[test]
    fn counts_factored_constructions() {
        // Roots at k/7 for k = -6..6 step 2 plus a complex pair.
        let mut g = p(&[1, 0, 1]);
        for k in (-6..=6).step_by(2) {
            g = &g * &p(&[-k, 7]);
        }
        assert_eq!(count_roots_in(&g, &q(-1, 1), &q(1, 1)), Ok(7));
        assert_eq!(count_roots_in(&g, &q(-1, 2), &q(1, 2)), Ok(3));
        let ivs = isolate_squarefree(&g, &q(-1, 1), &q(1, 1)).unwrap();
        assert_eq!(ivs.len(), 7);
        for (iv, k) in ivs.iter().zip((-6..=6).step_by(2)) {
            assert!(iv.contains(&q(k, 7)));
        }
    }

    #[test]
    fn refine_hits_exact_and_irrational_roots() {
        let g = p(&[-1, 2, 4]);
        let mut ivs = isolate_squarefree(&g, &q(-1, 1), &q(1, 1)).unwrap();
        for iv in &mut ivs {
            refine(&g, iv, 64);
            assert!(&iv.hi - &iv.lo < dyadic(1, 64));
        }
        // (sqrt 5 - 1)/4 = 0.30901699...
        let hi = &ivs[1];
        assert!(hi.lo < q(309017, 1000000) && hi.hi > q(309016, 1000000));
        let mut half = Interval::open(q(0, 1), q(1, 1));
        refine(&p(&[-1, 2]), &mut half, 64);
        assert!(half.is_point() && half.lo == q(1, 2));
    }
}
