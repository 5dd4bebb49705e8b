//! Adaptive composite Gauss-Legendre quadrature for integrands with
//! isolated kinks, such as `|f(t)|` for a trigonometric polynomial `f`.

use std::sync::OnceLock;

use serde::Serialize;

const ORDER: usize = 12;
const MAX_DEPTH: u32 = 48;

/// Relative tolerance used when a caller has no preference.
pub const DEFAULT_REL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_bound: f64,
}

fn gauss_legendre() -> &'static ([f64; ORDER], [f64; ORDER]) {
    static RULE: OnceLock<([f64; ORDER], [f64; ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut x = [0.0; ORDER];
        let mut w = [0.0; ORDER];
        for i in 0..n {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        (x, w)
    })
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (x, w) = gauss_legendre();
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    half * x.iter().zip(w).map(|(xi, wi)| wi * f(mid + half * xi)).sum::<f64>()
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32, acc: &mut (f64, f64, f64)) {
    let m = (a + b) / 2.0;
    let (l, r) = (panel(f, a, m), panel(f, m, b));
    let diff = (l + r - whole).abs();
    if diff <= tol || depth >= MAX_DEPTH {
        acc.0 += l + r;
        acc.1 += diff;
        acc.2 += l.abs() + r.abs();
        return;
    }
    adapt(f, a, m, l, tol / 2.0, depth + 1, acc);
    adapt(f, m, b, r, tol / 2.0, depth + 1, acc);
}

/// Integrates `f` over `[a, b]` starting from `panels` equal panels, each
/// bisected until the two-half rule agrees with the whole-panel rule to a
/// share of `rel_tol * (1 + |I|)`. The reported bound sums those
/// disagreements plus a rounding allowance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, rel_tol: f64) -> QuadratureResult {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let coarse: Vec<f64> = (0..panels).map(|i| panel(&f, a + i as f64 * h, a + (i + 1) as f64 * h)).collect();
    let estimate: f64 = coarse.iter().map(|v| v.abs()).sum();
    let tol = rel_tol * (1.0 + estimate) / 8.0 / panels as f64;
    let mut acc = (0.0, 0.0, 0.0);
    for (i, whole) in coarse.into_iter().enumerate() {
        let lo = a + i as f64 * h;
        let hi = if i + 1 == panels { b } else { lo + h };
        adapt(&f, lo, hi, whole, tol, 0, &mut acc);
    }
    QuadratureResult { value: acc.0, error_bound: acc.1 + 64.0 * f64::EPSILON * acc.2 }
}

/// `int_a^b |f|`, with the panel count scaled to the oscillation
/// frequency `freq` of `f`.
pub fn integrate_abs<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, freq: f64, rel_tol: f64) -> QuadratureResult {
    let panels = ((b - a) * (freq + 1.0) / 2.0).ceil().max(8.0) as usize;
    integrate(|t| f(t).abs(), a, b, panels, rel_tol)
}
