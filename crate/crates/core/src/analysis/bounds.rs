use std::f64::consts::PI;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::{best_level_crossings, integrate_abs, l1_arc, l1_circle, max_abs_on, sample, ExpSum, TrigPoly};
use crate::error::{Error, Result};
use crate::poly::{to_cosine, CoeffSet, CosPoly, IntPoly};
use crate::zerocount::zero_report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundForm {
    /// `(1/30) sum_j |a_j| / j`, terms ordered by frequency.
    Harmonic,
    /// `(gamma/30) log m` with `gamma = min |a_j|`.
    Logarithmic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LittlewoodCheck {
    pub form: BoundForm,
    pub lhs: f64,
    pub rhs: f64,
    pub error_bound: f64,
    pub margin: f64,
    pub pass: bool,
}

pub fn check_littlewood_bound(f: &ExpSum, form: BoundForm, rel_tol: f64) -> LittlewoodCheck {
    let q = l1_circle(f, rel_tol);
    let rhs = match form {
        BoundForm::Harmonic => f.terms().iter().enumerate().map(|(j, (_, a))| a.norm() / (j + 1) as f64).sum::<f64>() / 30.0,
        BoundForm::Logarithmic => {
            let gamma = f.terms().iter().map(|(_, a)| a.norm()).fold(f64::INFINITY, f64::min);
            if f.is_empty() {
                0.0
            } else {
                gamma / 30.0 * (f.len() as f64).ln()
            }
        }
    };
    let margin = q.value - rhs - q.error_bound;
    LittlewoodCheck { form, lhs: q.value, rhs, error_bound: q.error_bound, margin, pass: margin >= 0.0 }
}

fn require_in_set(p: &IntPoly, s: &CoeffSet) -> Result<()> {
    let ok = p.coeffs().iter().all(|c| c.to_i64().is_some_and(|v| s.contains(v)));
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid(format!("coefficients of {p} are not all in {s}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalL1Report {
    pub k: usize,
    pub delta: f64,
    pub mu: usize,
    pub nc_k: usize,
    pub gamma: Option<u64>,
    pub m: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub error_bound: f64,
    pub margin: f64,
    /// `S_k` has no nonzero element, so the bound says nothing.
    pub degenerate: bool,
    pub pass: bool,
}

/// `int_{-delta}^{delta} |P(e^{it})| dt > (gamma/30) log NC_k(P) - pi^2 mu M / delta`.
/// When `mu` is not supplied it is taken to be `NC(P (z^k - 1))`.
pub fn check_local_l1_bound(p: &IntPoly, s: &CoeffSet, k: usize, delta: f64, mu: Option<usize>, rel_tol: f64) -> Result<LocalL1Report> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if k == 0 || !(delta > 0.0 && delta < PI) {
        return Err(Error::Invalid(format!("need k >= 1 and 0 < delta < pi, got k = {k}, delta = {delta}")));
    }
    require_in_set(p, s)?;
    let actual = p.shift_diff(k).nc();
    let mu = mu.unwrap_or(actual);
    if mu < actual {
        return Err(Error::Invalid(format!("NC(P (z^{k} - 1)) = {actual} exceeds mu = {mu}")));
    }
    let nc_k = p.nc_k(k);
    let gamma = s.gamma_k(k);
    let m = s.max_abs();
    let q = l1_arc(&ExpSum::from_poly(p), -delta, delta, rel_tol);
    let penalty = PI * PI * mu as f64 * m as f64 / delta;
    let rhs = match (gamma, nc_k) {
        (_, 0) | (None, _) => f64::NEG_INFINITY,
        (Some(g), n) => g as f64 / 30.0 * (n as f64).ln() - penalty,
    };
    let margin = q.value + q.error_bound - rhs;
    Ok(LocalL1Report {
        k,
        delta,
        mu,
        nc_k,
        gamma,
        m,
        lhs: q.value,
        rhs,
        error_bound: q.error_bound,
        margin,
        degenerate: gamma.is_none(),
        pass: gamma.is_none() || margin > 0.0,
    })
}

/// `max_{|x| <= delta} |R(x)|` for `R(x) = c_0 x + sum_j (c_j / j) sin(jx)`,
/// the antiderivative of `T` vanishing at 0.
pub fn antiderivative_max(t: &CosPoly, delta: f64) -> f64 {
    let c: Vec<f64> = t.coeffs().iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
    let r = |x: f64| {
        let mut acc = c.first().copied().unwrap_or(0.0) * x;
        for (j, cj) in c.iter().enumerate().skip(1) {
            acc += cj / j as f64 * (j as f64 * x).sin();
        }
        acc
    };
    let deg = t.degree().unwrap_or(0).max(1);
    let points = (64 * deg * (1 + (delta / PI).ceil() as usize)).max(1025);
    max_abs_on(r, |x| t.eval_f64(x), -delta, delta, points)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AntiderivativeReport {
    pub k: usize,
    pub delta: f64,
    pub mu: usize,
    pub m: u64,
    pub max_abs_r: f64,
    pub bound: f64,
    pub pass: bool,
}

/// `max_{|x| <= delta} |R(x)| < 42 k (mu + 1) M` for self-reciprocal `P`,
/// `mu = NC(P (z^k - 1))` and `0 < delta <= 1/(2k)`.
pub fn check_antiderivative_bound(p: &IntPoly, k: usize, delta: f64) -> Result<AntiderivativeReport> {
    if k == 0 || !(delta > 0.0 && delta <= 1.0 / (2.0 * k as f64)) {
        return Err(Error::Invalid(format!("need 0 < delta <= 1/(2k), got k = {k}, delta = {delta}")));
    }
    let t = to_cosine(p)?;
    let m = CoeffSet::of_poly(p)?.max_abs();
    let mu = p.shift_diff(k).nc();
    let max_abs_r = antiderivative_max(&t, delta);
    let bound = 42.0 * k as f64 * (mu as f64 + 1.0) * m as f64;
    Ok(AntiderivativeReport { k, delta, mu, m, max_abs_r, bound, pass: max_abs_r < bound })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelCrossingReport {
    pub delta: f64,
    /// `int |R'|` over `[-delta, delta]`.
    pub l: f64,
    /// `max |R|` over `[-delta, delta]`.
    pub n: f64,
    /// `floor(L / (2N))`.
    pub bound: usize,
    pub eta: f64,
    pub crossings: usize,
    /// Sample count of the grid the crossings were read from.
    pub grid: usize,
    pub pass: bool,
}

/// Some level `eta` in `[-N, N]` is crossed at least `floor(L / (2N))` times.
/// A failing grid is doubled twice before the failure is reported.
pub fn check_level_crossings(r: &TrigPoly, delta: f64, rel_tol: f64) -> LevelCrossingReport {
    let dr = r.derivative();
    let deg = r.degree().max(1);
    let l = integrate_abs(|x| dr.eval(x), -delta, delta, deg as f64, rel_tol);
    let n = max_abs_on(|x| r.eval(x), |x| dr.eval(x), -delta, delta, 64 * deg * (1 + delta.ceil() as usize));
    // The ratio is rounded with the quadrature tolerance before flooring.
    let bound = if n > 0.0 { (l.value / (2.0 * n) * (1.0 + 1e-9)).floor() as usize } else { 0 };
    let mut grid = 64 * deg * (1 + delta.ceil() as usize) + 1;
    let mut last = (0.0, 0);
    for _ in 0..3 {
        last = best_level_crossings(&sample(|x| r.eval(x), -delta, delta, grid));
        if last.1 >= bound {
            break;
        }
        grid = 2 * grid - 1;
    }
    LevelCrossingReport { delta, l: l.value, n, bound, eta: last.0, crossings: last.1, grid, pass: last.1 >= bound }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignChangeBoundReport {
    pub k: usize,
    pub mu: usize,
    pub nc_k: usize,
    pub nz_star: usize,
    pub bound: f64,
    /// Same numerator over `84 k (mu + 1) k M (2d)` with `2d = NZ*`;
    /// informational only.
    pub variant_bound: Option<f64>,
    pub pass: bool,
}

/// `NZ*(T) >= ((gamma/30) log NC_k(P) - 2 k pi^2 mu M) / (84 k (mu + 1) M)`.
pub fn check_sign_change_bound(p: &IntPoly, k: usize) -> Result<SignChangeBoundReport> {
    if k == 0 {
        return Err(Error::Invalid("k must be positive".into()));
    }
    let t = to_cosine(p)?;
    let s = CoeffSet::of_poly(p)?;
    let m = s.max_abs() as f64;
    let mu = p.shift_diff(k).nc();
    let nc_k = p.nc_k(k);
    let nz_star = zero_report(&t)?.nz_star;
    let numer = match (s.gamma_k(k), nc_k) {
        (Some(g), n) if n > 0 => g as f64 / 30.0 * (n as f64).ln() - 2.0 * k as f64 * PI * PI * mu as f64 * m,
        _ => f64::NEG_INFINITY,
    };
    let kf = k as f64;
    let bound = numer / (84.0 * kf * (mu as f64 + 1.0) * m);
    let variant_bound = (nz_star > 0).then(|| numer / (84.0 * kf * (mu as f64 + 1.0) * kf * m * nz_star as f64));
    Ok(SignChangeBoundReport { k, mu, nc_k, nz_star, bound, variant_bound, pass: nz_star as f64 >= bound })
}
