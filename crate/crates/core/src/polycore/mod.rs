//! Exact polynomial arithmetic in `z, z̄, u` (and holomorphic `z, w`),
//! graded by weight: `z, z̄` have weight 1, `u, v, w` weight 2.

mod holo;
pub mod json;
mod poly;
mod rational;
mod real;
mod zw;

use std::sync::Arc;

pub use holo::HoloPoly;
pub use poly::{Exponents, Poly, Truncation};
pub use rational::{parse_rational, rat, CRational};
pub use real::{RealPoly, Term};
pub(crate) use real::{conj_raw, eval_raw_f64, format_key};
pub use zw::ZwPoly;

/// Highest weighted truncation order accepted anywhere in the crate.
pub const MAX_TRUNCATION: u32 = 8;

pub(crate) fn real_weights(n: usize) -> Arc<[u32]> {
    let mut w = vec![1; 2 * n];
    w.push(2);
    w.into()
}

pub(crate) fn holo_weights(n: usize) -> Arc<[u32]> {
    let mut w = vec![1; n];
    w.push(2);
    w.into()
}

/// `(z, z̄, w, w̄)` or equivalently `(z, z̄, u, v)`.
pub(crate) fn pair_weights(n: usize) -> Arc<[u32]> {
    let mut w = vec![1; 2 * n];
    w.extend([2, 2]);
    w.into()
}

pub(crate) fn check_truncation(d: u32) -> crate::Result<()> {
    if d > MAX_TRUNCATION {
        Err(crate::Error::TruncationTooHigh(d))
    } else {
        Ok(())
    }
}
