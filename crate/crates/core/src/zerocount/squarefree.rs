use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Square-free decomposition `g = c * prod f_i^{m_i}` over the integers.
///
/// Factors are primitive with positive leading coefficient, pairwise coprime,
/// and listed with strictly increasing multiplicity. Constant factors are
/// omitted, so a constant input yields an empty list.
pub fn squarefree_decompose(g: &IntPoly) -> Result<Vec<(IntPoly, u32)>> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = g.primitive_part();
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let mut rest = p.gcd(&p.derivative());
    let mut s = p.div_exact(&rest).expect("gcd divides");
    let mut out = Vec::new();
    let mut i = 1u32;
    while s.degree().is_some_and(|d| d > 0) {
        let next = s.gcd(&rest);
        let factor = s.div_exact(&next).expect("gcd divides");
        if factor.degree().is_some_and(|d| d > 0) {
            out.push((factor.primitive_part(), i));
        }
        rest = rest.div_exact(&next).expect("gcd divides");
        s = next;
        i += 1;
    }
    debug_assert!(rest.degree() == Some(0) && !rest.coeff(0).is_zero());
    Ok(out)
}
