//! Numeric and exact instance checks for L1 lower bounds, antiderivative
//! bounds, level crossings, integer linear systems and window ranks.

mod bounds;
mod linalg;
mod quadrature;

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::poly::{CosPoly, IntPoly};

pub use bounds::{
    antiderivative_max, check_local_l1_bound, check_antiderivative_bound, check_level_crossings, check_sign_change_bound, check_littlewood_bound,
    BoundForm, LocalL1Report, AntiderivativeReport, LevelCrossingReport, SignChangeBoundReport, LittlewoodCheck,
};
pub use linalg::{check_integer_solve_bound, detect_period, window_rank, SolveReport};
pub use quadrature::{integrate, integrate_abs, QuadratureResult, DEFAULT_REL_TOL};

/// `sum_j a_j e^{i lambda_j t}` with distinct integer frequencies.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpSum {
    terms: Vec<(i64, Complex64)>,
}

impl ExpSum {
    /// Sorts by frequency and drops zero coefficients; repeated frequencies
    /// are rejected.
    pub fn new(terms: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        let mut terms: Vec<_> = terms.into_iter().filter(|(_, a)| *a != Complex64::new(0.0, 0.0)).collect();
        terms.sort_by_key(|(l, _)| *l);
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Invalid("repeated frequency".into()));
        }
        Ok(Self { terms })
    }

    pub fn from_real(terms: impl IntoIterator<Item = (i64, f64)>) -> Result<Self> {
        Self::new(terms.into_iter().map(|(l, a)| (l, Complex64::new(a, 0.0))))
    }

    /// `P(e^{it})` for an integer polynomial.
    pub fn from_poly(p: &IntPoly) -> Self {
        let terms = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
            .map(|(j, c)| (j as i64, Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)))
            .collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[(i64, Complex64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `max lambda - min lambda`; `|f|` only depends on frequency differences.
    pub fn spread(&self) -> i64 {
        match (self.terms.first(), self.terms.last()) {
            (Some(a), Some(b)) => b.0 - a.0,
            _ => 0,
        }
    }

    pub fn abs_at(&self, t: f64) -> f64 {
        let base = self.terms.first().map_or(0, |x| x.0);
        let mut re = 0.0;
        let mut im = 0.0;
        for (l, a) in &self.terms {
            let (s, c) = (((l - base) as f64) * t).sin_cos();
            re += a.re * c - a.im * s;
            im += a.re * s + a.im * c;
        }
        re.hypot(im)
    }
}

/// `int_0^{2 pi} |f(t)| dt`.
pub fn l1_circle(f: &ExpSum, rel_tol: f64) -> QuadratureResult {
    l1_arc(f, 0.0, 2.0 * PI, rel_tol)
}

/// `int_a^b |f(t)| dt`.
pub fn l1_arc(f: &ExpSum, a: f64, b: f64, rel_tol: f64) -> QuadratureResult {
    integrate_abs(|t| f.abs_at(t), a, b, f.spread() as f64, rel_tol)
}

/// Real trigonometric polynomial `c_0 + sum_j (a_j cos jx + b_j sin jx)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct TrigPoly {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigPoly {
    pub fn degree(&self) -> usize {
        self.cos.len().max(self.sin.len()).saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let c: f64 = self.cos.iter().enumerate().map(|(j, a)| a * (j as f64 * x).cos()).sum();
        let s: f64 = self.sin.iter().enumerate().map(|(j, b)| b * (j as f64 * x).sin()).sum();
        c + s
    }

    pub fn derivative(&self) -> TrigPoly {
        let n = self.cos.len().max(self.sin.len());
        let mut cos = vec![0.0; n];
        let mut sin = vec![0.0; n];
        for (j, a) in self.cos.iter().enumerate() {
            sin[j] -= j as f64 * a;
        }
        for (j, b) in self.sin.iter().enumerate() {
            cos[j] += j as f64 * b;
        }
        TrigPoly { cos, sin }
    }
}

impl From<&CosPoly> for TrigPoly {
    fn from(t: &CosPoly) -> Self {
        TrigPoly { cos: t.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect(), sin: vec![] }
    }
}

/// Evenly spaced samples of `f` on `[a, b]`, endpoints included.
pub fn sample<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, points: usize) -> Vec<f64> {
    let points = points.max(2);
    let h = (b - a) / (points - 1) as f64;
    (0..points).map(|i| f(if i + 1 == points { b } else { a + i as f64 * h })).collect()
}

/// `max |f|` on `[a, b]` from `points` samples, with each sampled local
/// maximum polished by bisecting a sign change of `df`.
pub fn max_abs_on<F, D>(f: F, df: D, a: f64, b: f64, points: usize) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let points = points.max(3);
    let h = (b - a) / (points - 1) as f64;
    let xs: Vec<f64> = (0..points).map(|i| if i + 1 == points { b } else { a + i as f64 * h }).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x).abs()).collect();
    let mut best = vals.iter().cloned().fold(0.0, f64::max);
    for i in 1..points - 1 {
        if vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] {
            let (mut lo, mut hi) = (xs[i - 1], xs[i + 1]);
            let (mut dlo, dhi) = (df(lo), df(hi));
            if dlo.signum() == dhi.signum() {
                continue;
            }
            for _ in 0..80 {
                let mid = (lo + hi) / 2.0;
                let dm = df(mid);
                if dm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if dm.signum() == dlo.signum() {
                    lo = mid;
                    dlo = dm;
                } else {
                    hi = mid;
                }
            }
            best = best.max(f((lo + hi) / 2.0).abs());
        }
    }
    best
}

/// Level `eta` maximising the strict sign changes of `samples - eta`,
/// together with that count. Each counted sign change certifies a distinct
/// zero of a continuous function between adjacent sample points.
pub fn best_level_crossings(samples: &[f64]) -> (f64, usize) {
    let Some(&first) = samples.first() else {
        return (0.0, 0);
    };
    // Segment i contributes for eta strictly between its endpoints.
    let mut events: Vec<(f64, i32)> = Vec::new();
    for w in samples.windows(2) {
        let (lo, hi) = if w[0] < w[1] { (w[0], w[1]) } else { (w[1], w[0]) };
        if lo < hi {
            events.push((lo, 1));
            events.push((hi, -1));
        }
    }
    if events.is_empty() {
        return (first, 0);
    }
    // Closing events sort first at equal positions so the sweep only
    // counts strict containment.
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let (mut cur, mut best, mut eta) = (0i64, 0i64, first);
    for i in 0..events.len() - 1 {
        cur += events[i].1 as i64;
        let (x0, x1) = (events[i].0, events[i + 1].0);
        if x0 < x1 && cur > best {
            best = cur;
            eta = x0 + (x1 - x0) / 2.0;
        }
    }
    (eta, best as usize)
}
