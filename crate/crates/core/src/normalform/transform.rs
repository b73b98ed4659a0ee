//! Holomorphic jets and their action on graph-form hypersurfaces
//! `v = −P(z, z̄, u)`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hermitian::Signature;
use crate::polycore::json::{holo_poly_from_json, holo_poly_to_json};
use crate::polycore::{check_truncation, conj_raw, real_weights, CRational, HoloPoly, Poly, RealPoly, Truncation};

const MAX_INVERSION_ROUNDS: usize = 64;

/// A polynomial map `(z, w) ↦ (f(z, w), g(z, w))` fixing the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoloJet {
    sig: Signature,
    f: Vec<HoloPoly>,
    g: HoloPoly,
}

impl HoloJet {
    pub fn identity(sig: &Signature) -> Self {
        let n = sig.n();
        HoloJet { sig: *sig, f: (0..n).map(|j| HoloPoly::z(n, j)).collect(), g: HoloPoly::w(n) }
    }

    /// Requires `f(0) = 0`, `g(0) = 0` and no `z`-linear terms in `g`.
    pub fn new(sig: &Signature, f: Vec<HoloPoly>, g: HoloPoly) -> Result<Self> {
        let n = sig.n();
        if f.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: f.len() });
        }
        if f.iter().chain(std::iter::once(&g)).any(|p| p.n() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: f.iter().map(HoloPoly::n).find(|&m| m != n).unwrap_or(g.n()) });
        }
        if f.iter().any(|p| p.min_weight() == Some(0)) || g.min_weight().is_some_and(|w| w < 2) {
            return Err(Error::JetNotTangent);
        }
        Ok(HoloJet { sig: *sig, f, g })
    }

    /// `z ↦ z + f̂`, `w ↦ w + ĝ`.
    pub fn from_increments(sig: &Signature, f_hat: Vec<HoloPoly>, g_hat: HoloPoly) -> Result<Self> {
        let n = sig.n();
        let f = f_hat.into_iter().enumerate().map(|(j, p)| p.add(&HoloPoly::z(n, j))).collect();
        let jet = HoloJet::new(sig, f, g_hat.add(&HoloPoly::w(n)))?;
        if !jet.is_tangent_to_identity() {
            return Err(Error::JetNotTangent);
        }
        Ok(jet)
    }

    /// `z ↦ λz`, `w ↦ λ²w`.
    pub fn scaling(sig: &Signature, lambda: &CRational) -> Self {
        let n = sig.n();
        HoloJet {
            sig: *sig,
            f: (0..n).map(|j| HoloPoly::z(n, j).scale(lambda)).collect(),
            g: HoloPoly::w(n).scale(&lambda.pow(2)),
        }
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn f(&self) -> &[HoloPoly] {
        &self.f
    }

    pub fn g(&self) -> &HoloPoly {
        &self.g
    }

    /// `f = z + O_wt(2)` and `g = w + O_wt(3)`.
    pub fn is_tangent_to_identity(&self) -> bool {
        let n = self.sig.n();
        self.f.iter().enumerate().all(|(j, p)| p.sub(&HoloPoly::z(n, j)).min_weight().is_none_or(|w| w >= 2))
            && self.g.sub(&HoloPoly::w(n)).min_weight().is_none_or(|w| w >= 3)
    }

    pub fn is_identity(&self) -> bool {
        *self == HoloJet::identity(&self.sig)
    }

    /// `self ∘ inner`, truncated.
    pub fn after(&self, inner: &HoloJet, t: &Truncation) -> HoloJet {
        let f = self.f.iter().map(|p| p.compose(&inner.f, &inner.g, Some(t))).collect();
        let g = self.g.compose(&inner.f, &inner.g, Some(t));
        HoloJet { sig: self.sig, f, g }
    }

    pub fn truncate(&self, t: &Truncation) -> HoloJet {
        HoloJet { sig: self.sig, f: self.f.iter().map(|p| p.truncate(t)).collect(), g: self.g.truncate(t) }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "f": self.f.iter().map(holo_poly_to_json).collect::<Vec<_>>(),
            "g": holo_poly_to_json(&self.g),
        })
    }

    pub fn from_json(sig: &Signature, v: &Value) -> Result<Self> {
        let n = sig.n();
        let fs = v.get("f").and_then(Value::as_array).ok_or_else(|| Error::Shape { what: "jet field 'f'".into() })?;
        let f = fs.iter().map(|x| holo_poly_from_json(n, x)).collect::<Result<Vec<_>>>()?;
        let g = holo_poly_from_json(n, v.get("g").ok_or_else(|| Error::Shape { what: "jet field 'g'".into() })?)?;
        HoloJet::new(sig, f, g)
    }

    /// Images of `f` and `g` over the `(z, z̄, u)` layout with `w ↦ w_img`.
    fn on_real_layout(&self, w_img: &Poly, t: &Truncation) -> (Vec<Poly>, Poly) {
        let n = self.sig.n();
        let rw = real_weights(n);
        let mut images: Vec<Poly> = (0..n).map(|j| Poly::var(rw.clone(), j)).collect();
        images.push(w_img.clone());
        let fo = self.f.iter().map(|p| p.substitute_raw(&images, Some(t))).collect();
        let go = self.g.substitute_raw(&images, Some(t));
        (fo, go)
    }
}

fn i_times(p: &Poly) -> Poly {
    p.scale(&CRational::i())
}

/// Pullback `P(f, f̄, Re g)` restricted to the model `w = u + i|z|²_ℓ`,
/// truncated to weighted degree `d`.
pub fn compose_truncated(p: &RealPoly, jet: &HoloJet, d: u32) -> Result<RealPoly> {
    check_truncation(d)?;
    let n = jet.sig.n();
    if p.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.n() });
    }
    let t = Truncation::weighted(d);
    let u = RealPoly::u(n).into_poly();
    let w_img = u.add(&i_times(jet.sig.levi_poly().poly()));
    let (fo, go) = jet.on_real_layout(&w_img, &t);
    let mut images = fo.clone();
    images.extend(fo.iter().map(|x| conj_raw(n, x)));
    images.push(RealPoly::real_part_of(n, &go).into_poly());
    let out = p.poly().substitute(&images, &real_weights(n), Some(&t));
    RealPoly::from_poly(n, out).map_err(|_| Error::Internal("pullback lost reality".into()))
}

/// The hypersurface `v = −P` pushed forward by `jet`, again in graph form
/// `v = −P'`. Exact on every coefficient kept by `t`.
pub fn transform_hypersurface(p: &RealPoly, jet: &HoloJet, t: &Truncation) -> Result<RealPoly> {
    if !jet.is_tangent_to_identity() {
        return Err(Error::JetNotTangent);
    }
    let n = jet.sig.n();
    if p.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.n() });
    }
    let rw = real_weights(n);
    let p = p.truncate(t);
    let u = RealPoly::u(n).into_poly();
    // parametrize M by (z, u): w = u − iP
    let w_img = u.sub(&i_times(p.poly()));
    let (fo, go) = jet.on_real_layout(&w_img, t);
    let re_g = RealPoly::real_part_of(n, &go).into_poly();
    let im_g = RealPoly::imag_part_of(n, &go).into_poly();

    // Ψ(z, u) = (f∘, Re g∘) = id + h; invert by X ← id − h(X).
    let ids: Vec<Poly> = (0..=2 * n).map(|i| Poly::var(rw.clone(), i)).collect();
    let h_z: Vec<Poly> = (0..n).map(|j| fo[j].sub(&ids[j])).collect();
    let h_u = re_g.sub(&ids[2 * n]);
    let mut x = ids.clone();
    let mut converged = false;
    for _ in 0..MAX_INVERSION_ROUNDS {
        let mut next: Vec<Poly> = Vec::with_capacity(2 * n + 1);
        let xz: Vec<Poly> = (0..n).map(|j| ids[j].sub(&h_z[j].substitute(&x, &rw, Some(t)))).collect();
        next.extend(xz.iter().cloned());
        next.extend(xz.iter().map(|p| conj_raw(n, p)));
        next.push(ids[2 * n].sub(&h_u.substitute(&x, &rw, Some(t))));
        if next == x {
            converged = true;
            break;
        }
        x = next;
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_INVERSION_ROUNDS));
    }
    let out = im_g.substitute(&x, &rw, Some(t)).neg();
    RealPoly::from_poly(n, out).map_err(|_| Error::Internal("transformed defining function lost reality".into()))
}
