use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub d: usize,
    pub m: u64,
    pub max_abs_x: f64,
    pub max_abs_b: f64,
    /// `M^{d-1} d^{d/2} max |b|`.
    pub bound: f64,
    pub pass: bool,
}

/// Solves `A x = b` exactly and checks
/// `max |x(i)| <= M^{d-1} d^{d/2} max |b(i)|`, `M = max |A_ij|`.
/// The comparison is done on squares in exact arithmetic.
pub fn check_integer_solve_bound(a: &[Vec<i64>], b: &[Complex<BigRational>]) -> Result<SolveReport> {
    let d = a.len();
    if d == 0 || b.len() != d || a.iter().any(|row| row.len() != d) {
        return Err(Error::Invalid("need a square d x d matrix and a length-d vector".into()));
    }
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut rows: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().map(|&v| q(v)).chain([bi.re.clone(), bi.im.clone()]).collect())
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| !rows[r][col].is_zero()).ok_or(Error::Singular)?;
        rows.swap(col, piv);
        let inv = rows[col][col].recip();
        for v in rows[col].iter_mut() {
            *v *= &inv;
        }
        let prow = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
    }
    let norm2 = |re: &BigRational, im: &BigRational| re * re + im * im;
    let max_x2 = rows.iter().map(|r| norm2(&r[d], &r[d + 1])).max().unwrap();
    let max_b2 = b.iter().map(|z| norm2(&z.re, &z.im)).max().unwrap();
    let m = a.iter().flatten().map(|v| v.unsigned_abs()).max().unwrap();
    // (M^{d-1} d^{d/2})^2 = M^{2(d-1)} d^d.
    let factor2 = BigInt::from(m).pow(2 * (d as u32 - 1)) * BigInt::from(d).pow(d as u32);
    let bound2 = BigRational::from_integer(factor2) * &max_b2;
    let to_f = |v: &BigRational| v.to_f64().unwrap_or(f64::INFINITY).sqrt();
    Ok(SolveReport {
        d,
        m,
        max_abs_x: to_f(&max_x2),
        max_abs_b: to_f(&max_b2),
        bound: to_f(&bound2),
        pass: max_x2 <= bound2,
    })
}

/// Rank over the rationals of the contiguous length-`dim` windows of `x`,
/// by fraction-free elimination.
pub fn window_rank(x: &[i64], dim: usize) -> usize {
    if dim == 0 || x.len() < dim {
        return 0;
    }
    // Echelon basis: (pivot column, row), pivots strictly increasing.
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for w in x.windows(dim) {
        let mut row: Vec<BigInt> = w.iter().map(|&v| BigInt::from(v)).collect();
        for (pc, brow) in &basis {
            if row[*pc].is_zero() {
                continue;
            }
            let (f, g) = (brow[*pc].clone(), row[*pc].clone());
            for (r, bv) in row.iter_mut().zip(brow) {
                *r = &*r * &f - &g * bv;
            }
        }
        let Some(pc) = row.iter().position(|v| !v.is_zero()) else {
            continue;
        };
        let content = row.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if !content.is_one() {
            for v in row.iter_mut() {
                *v = &*v / &content;
            }
        }
        // Rows have zeros left of their pivot, so insertion keeps the echelon form.
        let at = basis.partition_point(|(c, _)| *c < pc);
        basis.insert(at, (pc, row));
        if basis.len() == dim {
            break;
        }
    }
    basis.len()
}

/// Smallest `p <= max_period`, `p < len`, with `x[r + p] == x[r]` for all
/// valid `r`.
pub fn detect_period<T: PartialEq>(x: &[T], max_period: usize) -> Option<usize> {
    (1..=max_period.min(x.len().saturating_sub(1))).find(|&p| (0..x.len() - p).all(|r| x[r + p] == x[r]))
}
