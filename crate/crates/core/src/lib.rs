//! Exact tools for zeros of self-reciprocal integer polynomials on the unit
//! circle, plus instance verifiers for the inequalities used to bound them.

pub mod analysis;
pub mod error;
pub mod families;
pub mod hiprec;
pub mod machinery;
pub mod oracle;
pub mod poly;
pub mod rng;
pub mod suites;
pub mod zerocount;

pub use error::{Error, Result};
pub use poly::{to_cosine, CoeffSet, CosPoly, IntPoly};
