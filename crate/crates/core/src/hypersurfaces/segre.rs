use serde_json::{json, Value};

use super::AlgebraicHypersurface;
use crate::error::{Error, Result};
use crate::polycore::json::{crational_json, holo_poly_to_json};
use crate::polycore::{holo_weights, CRational, HoloPoly, Poly};

/// `Q_p = {Z : ρ(Z, p̄) = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegreVariety {
    pub p: Vec<CRational>,
    pub poly: HoloPoly,
}

impl SegreVariety {
    /// Exact membership test `ρ(q, p̄) = 0`.
    pub fn contains(&self, q: &[CRational]) -> Result<bool> {
        let n = self.poly.n();
        if q.len() != n + 1 {
            return Err(Error::DimensionMismatch { expected: n + 1, got: q.len() });
        }
        let mut acc = CRational::zero();
        for (alpha, m, c) in self.poly.terms() {
            let mut t = c;
            for (j, &a) in alpha.iter().enumerate() {
                t = &t * &q[j].pow(a as u32);
            }
            acc += &(&t * &q[n].pow(m as u32));
        }
        Ok(acc.is_zero())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p.iter().map(crational_json).collect::<Vec<_>>(),
            "terms": holo_poly_to_json(&self.poly),
        })
    }
}

/// Complexify `ρ` and freeze the conjugate slot at `p̄`.
pub fn segre_variety(h: &AlgebraicHypersurface, p: &[CRational]) -> Result<SegreVariety> {
    let nv = h.n() + 1;
    if p.len() != nv {
        return Err(Error::DimensionMismatch { expected: nv, got: p.len() });
    }
    let pbar: Vec<CRational> = p.iter().map(CRational::conj).collect();
    let mut out = Poly::zero(holo_weights(h.n()));
    for t in h.rho().terms() {
        let mut c = t.coeff.clone();
        for (j, &b) in t.beta.iter().enumerate() {
            if b > 0 {
                c = &c * &pbar[j].pow(b as u32);
            }
        }
        if !c.is_zero() {
            out.add_term(t.alpha.clone(), c);
        }
    }
    let poly = HoloPoly::from_poly(h.n(), out);
    if poly.is_zero() {
        return Err(Error::DegenerateSegre);
    }
    Ok(SegreVariety { p: p.to_vec(), poly })
}
