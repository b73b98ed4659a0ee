//! Fourth-order normal form: from `v = |z|²_ℓ − A(z, z̄, u)` with `A` of
//! weight at least 3, to `v = |z|²_ℓ − s/4 − R` with `s` a Δ_ℓ-harmonic
//! (2,2) form and `R` of weight ≥ 5 and ordinary degree ≥ 5.
//!
//! Inputs are stored as `P = −|z|²_ℓ + A`, i.e. the defining function is
//! `r = v + P`.

mod transform;

use serde_json::{json, Value};

pub use transform::{compose_truncated, transform_hypersurface, HoloJet};

use crate::cmw::CMWTensor;
use crate::error::{Error, Result};
use crate::hermitian::{harmonic_residual_split, laplacian_l, Signature};
use crate::polycore::json::real_poly_to_json;
use crate::polycore::{format_key, holo_weights, real_weights, CRational, HoloPoly, Poly, RealPoly, Truncation};

/// Result of [`normalize_to_order4`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm4 {
    pub sig: Signature,
    /// The trace-free quartic; the normal form reads `P = −|z|²_ℓ + s/4 + R`.
    pub s: RealPoly,
    /// Composite map taking the input hypersurface to the normal form.
    pub jet: HoloJet,
    /// `R`, as far as the truncation resolves it.
    pub residual: RealPoly,
    pub truncation: Truncation,
}

impl NormalForm4 {
    /// The normalized defining polynomial `−|z|²_ℓ + s/4 + R`.
    pub fn normalized(&self) -> RealPoly {
        let quarter = crate::polycore::rat(1, 4);
        self.sig.levi_poly().neg().add(&self.s.scale(&quarter)).add(&self.residual)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "s": real_poly_to_json(&self.s),
            "jet": self.jet.to_json(),
            "residual": real_poly_to_json(&self.residual),
            "truncation": { "max_weight": self.truncation.max_weight, "max_degree": self.truncation.max_degree },
        })
    }
}

/// `A = P + |z|²_ℓ` as a raw polynomial.
fn a_part(p: &RealPoly, sig: &Signature) -> Poly {
    p.poly().add(sig.levi_poly().poly())
}

fn bidegree(p: &Poly, n: usize, want: (u32, u32, u32)) -> Poly {
    p.filter(|e| {
        let a: u32 = e[..n].iter().map(|&x| x as u32).sum();
        let b: u32 = e[n..2 * n].iter().map(|&x| x as u32).sum();
        (a, b, e[2 * n] as u32) == want
    })
}

/// Lowers the `u`-exponent of every term by one (all terms must carry `u`).
fn strip_u(p: &Poly, n: usize) -> Poly {
    let mut out = Poly::zero(p.weights().clone());
    for (e, c) in p.terms() {
        debug_assert!(e[2 * n] > 0);
        let mut f = e.clone();
        f[2 * n] -= 1;
        out.add_term(f, c.clone());
    }
    out
}

/// Reads a `z̄`-free polynomial over `(z, z̄, u)` as a holomorphic one,
/// `u ↦ w`.
fn holo_of(p: &Poly, n: usize) -> Result<HoloPoly> {
    let mut out = Poly::zero(holo_weights(n));
    for (e, c) in p.terms() {
        if e[n..2 * n].iter().any(|&x| x > 0) {
            return Err(Error::Internal("antiholomorphic term in a holomorphic slot".into()));
        }
        let mut f = e[..n].to_vec();
        f.push(e[2 * n]);
        out.add_term(f, c.clone());
    }
    Ok(HoloPoly::from_poly(n, out))
}

fn dbar(p: &Poly, n: usize, j: usize) -> Poly {
    p.derivative(n + j)
}

fn times(p: &Poly, k: &CRational) -> Poly {
    p.scale(k)
}

fn two_i() -> CRational {
    CRational::from_ratios(0, 1, 2, 1)
}

/// Checks the input has the model quadratic part: no terms of weight
/// below 2, and weight-2 part exactly `−|z|²_ℓ`.
pub fn validate_prenormal(p: &RealPoly, sig: &Signature) -> Result<()> {
    let n = sig.n();
    if p.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.n() });
    }
    let low = p.filter(|e| p.poly().weight_of(e) <= 2);
    let diff = low.add(&sig.levi_poly());
    if !diff.is_zero() {
        let keys: Vec<String> = diff.poly().terms().iter().map(|(e, c)| format!("{} (off by {c})", format_key(n, e))).collect();
        return Err(Error::NotPrenormal(format!(
            "weight ≤ 2 part must be exactly −|z|²_ℓ with l = {}; offending coefficients: {}",
            sig.l(),
            keys.join("; ")
        )));
    }
    Ok(())
}

/// `Im(ĝ − 2i Σ δ_j f̂_j z̄_j)` on the model `w = u + i|z|²_ℓ`: the first-order
/// change of `A` under `z ↦ z + f̂`, `w ↦ w + ĝ` is minus this.
fn linear_action(sig: &Signature, f_hat: &[HoloPoly], g_hat: &HoloPoly) -> RealPoly {
    let n = sig.n();
    let rw = real_weights(n);
    let mut images: Vec<Poly> = (0..n).map(|j| Poly::var(rw.clone(), j)).collect();
    images.push(RealPoly::u(n).into_poly().add(&sig.levi_poly().poly().scale(&CRational::i())));
    let mut x = g_hat.substitute_raw(&images, None);
    for (j, f) in f_hat.iter().enumerate() {
        let fj = f.substitute_raw(&images, None).mul(&Poly::var(rw.clone(), n + j), None);
        x = x.sub(&fj.scale(&two_i().scale(&sig.delta_rat(j).re)));
    }
    RealPoly::imag_part_of(n, &x)
}

fn zero_increments(n: usize) -> (Vec<HoloPoly>, HoloPoly) {
    (vec![HoloPoly::zero(n); n], HoloPoly::zero(n))
}

/// Removes the weight-3 part of `A`. Returns the jet used and the
/// transformed polynomial.
pub fn kill_wt3(p: &RealPoly, sig: &Signature) -> Result<(HoloJet, RealPoly)> {
    kill_wt3_with(p, sig, &Truncation::normal_form())
}

fn kill_wt3_with(p: &RealPoly, sig: &Signature, t: &Truncation) -> Result<(HoloJet, RealPoly)> {
    validate_prenormal(p, sig)?;
    let n = sig.n();
    let a = a_part(p, sig);
    let w3 = a.filter(|e| a.weight_of(e) == 3);
    if w3.is_zero() {
        return Ok((HoloJet::identity(sig), p.truncate(t)));
    }
    let t300 = bidegree(&w3, n, (3, 0, 0));
    let t210 = bidegree(&w3, n, (2, 1, 0));
    let t101 = bidegree(&w3, n, (1, 0, 1));
    // ĝ = c(z) + a(z) w with c = 2i T^(3,0), a w = 2i T^(1,0,1)|_{u→w}
    let g_hat = holo_of(&times(&t300.add(&t101), &two_i()), n)?;
    let a_lin = times(&strip_u(&t101, n), &two_i());
    let half = CRational::real(crate::polycore::rat(1, 2));
    let r21 = t210.sub(&a_lin.mul(sig.levi_poly().poly(), None).scale(&half));
    let f_hat = (0..n)
        .map(|j| holo_of(&dbar(&r21, n, j).scale(&(-sig.delta_rat(j))), n))
        .collect::<Result<Vec<_>>>()?;
    let jet = HoloJet::from_increments(sig, f_hat, g_hat)?;
    let out = transform_hypersurface(p, &jet, t)?;
    if !out.weighted_component(3).is_zero() || out.add(&sig.levi_poly()).filter(|e| out.poly().weight_of(e) <= 2).len() != 0 {
        return Err(Error::Internal("weight-3 terms survived".into()));
    }
    Ok((jet, out))
}

/// Normalizes the weight-4 part of `A` to `s/4` with `Δ_ℓ s = 0`.
/// Requires a vanishing weight-3 part. Returns `(jet, s, P')`.
pub fn normalize_wt4(p: &RealPoly, sig: &Signature) -> Result<(HoloJet, RealPoly, RealPoly)> {
    normalize_wt4_with(p, sig, &Truncation::normal_form())
}

fn normalize_wt4_with(p: &RealPoly, sig: &Signature, t: &Truncation) -> Result<(HoloJet, RealPoly, RealPoly)> {
    validate_prenormal(p, sig)?;
    if !p.weighted_component(3).is_zero() {
        return Err(Error::NotPrenormal("weight-3 terms must be removed first".into()));
    }
    let n = sig.n();
    let l = sig.levi_poly();
    let a = a_part(p, sig);
    let w4 = a.filter(|e| a.weight_of(e) == 4);
    let t400 = bidegree(&w4, n, (4, 0, 0));
    let t310 = bidegree(&w4, n, (3, 1, 0));
    let t220 = bidegree(&w4, n, (2, 2, 0));
    let t201 = bidegree(&w4, n, (2, 0, 1));
    let t111 = bidegree(&w4, n, (1, 1, 1));
    let t002 = bidegree(&w4, n, (0, 0, 2));
    let b0 = t002.coeff(&RealPoly::zero(n).key(&vec![0; n], &vec![0; n], 2));

    // ĝ = B4 + B2 w + B0 w², B4 = 2i T^(4,0), B2 w = 2i T^(2,0,1), B0 = i T^(0,0,2)
    let g_hat = holo_of(&times(&t400.add(&t201), &two_i()).add(&t002.scale(&CRational::i())), n)?;

    // D = T^(2,2) + T^(0,0,2)·L² = h2·L + h4
    let d = RealPoly::from_poly(n, t220)?.add(&l.mul(&l).scale(&b0.re));
    let (h2, h4) = harmonic_residual_split(&d, sig)?;

    // F3_j = δ_j ∂_{z̄_j}(B2·L/2 − T^(3,1)); K = −T^(1,1,1)/(2u) + i·h2/2
    let half = CRational::real(crate::polycore::rat(1, 2));
    let b2 = times(&strip_u(&t201, n), &two_i());
    let r31 = b2.mul(l.poly(), None).scale(&half).sub(&t310);
    let k = strip_u(&t111, n).scale(&(-&half)).add(&h2.poly().scale(&CRational::from_ratios(0, 1, 1, 2)));
    let w = HoloPoly::w(n);
    let f_hat = (0..n)
        .map(|j| {
            let dj = sig.delta_rat(j);
            let f3 = holo_of(&dbar(&r31, n, j).scale(&dj), n)?;
            let zj = holo_of(&dbar(&k, n, j).scale(&dj), n)?;
            Ok(f3.add(&zj.mul(&w, None)))
        })
        .collect::<Result<Vec<_>>>()?;
    let jet = HoloJet::from_increments(sig, f_hat, g_hat)?;
    let out = transform_hypersurface(p, &jet, t)?;
    let s = h4.scale(&crate::polycore::rat(4, 1));
    let quarter = crate::polycore::rat(1, 4);
    if out.add(&l).weighted_component(4) != s.scale(&quarter) || !out.weighted_component(3).is_zero() {
        return Err(Error::Internal("weight-4 normalization left non-normal terms".into()));
    }
    Ok((jet, s, out))
}

/// Increments removing the `(α, β, k)`-terms of a real polynomial `x`
/// to first order. Conjugate classes are handled by their representative.
fn match_terms(sig: &Signature, x: &RealPoly, f_hat: &mut [HoloPoly], g_hat: &mut HoloPoly) {
    for term in x.terms() {
        let p: u16 = term.alpha.iter().sum();
        let q: u16 = term.beta.iter().sum();
        let c = &term.coeff;
        if p == 0 && q == 0 {
            g_hat.add_assign(&HoloPoly::monomial(&term.alpha, term.k, c.mul_i()));
        } else if q == 0 {
            g_hat.add_assign(&HoloPoly::monomial(&term.alpha, term.k, c * &two_i()));
        } else if q == 1 && p >= 1 {
            let j = term.beta.iter().position(|&b| b == 1).expect("one z̄ factor");
            let coef = if p == 1 { c.scale(&crate::polycore::rat(1, 2)) } else { c.clone() };
            let coef = -&(&coef * &sig.delta_rat(j));
            f_hat[j].add_assign(&HoloPoly::monomial(&term.alpha, term.k, coef));
        }
        // (p = 0, q ≥ 1) and (p = 1, q ≥ 2) are mirrors of the cases above.
    }
}

fn low_degree_at_weight(p: &RealPoly, d: u32) -> RealPoly {
    p.filter(|e| p.poly().weight_of(e) == d && Poly::degree_of(e) <= 4)
}

/// Removes every term of weight ≥ 5 and ordinary degree ≤ 4 from `A`
/// (pure `u`-powers, `u`-multiples of holomorphic and of `(·,1)` terms),
/// one weight at a time. Weight ≤ 4 is untouched.
pub fn cleanup_low_order(p: &RealPoly, sig: &Signature) -> Result<(HoloJet, RealPoly)> {
    cleanup_with(p, sig, &Truncation::normal_form())
}

fn cleanup_with(p: &RealPoly, sig: &Signature, t: &Truncation) -> Result<(HoloJet, RealPoly)> {
    validate_prenormal(p, sig)?;
    let n = sig.n();
    let l = sig.levi_poly();
    let mut cur = p.truncate(t);
    let mut total = HoloJet::identity(sig);
    for d in 5..=8u32 {
        let target = low_degree_at_weight(&cur.add(&l), d);
        if target.is_zero() {
            continue;
        }
        let (mut f_hat, mut g_hat) = zero_increments(n);
        let mut rest = target.clone();
        // the model substitution w = u + i|z|²_ℓ raises degree at fixed
        // weight, so this terminates after at most four rounds
        for _ in 0..8 {
            match_terms(sig, &rest, &mut f_hat, &mut g_hat);
            let lin = linear_action(sig, &f_hat, &g_hat);
            rest = low_degree_at_weight(&target.sub(&lin), d);
            if rest.is_zero() {
                break;
            }
        }
        if !rest.is_zero() {
            return Err(Error::Internal(format!("cleanup matching did not close at weight {d}")));
        }
        let jet = HoloJet::from_increments(sig, f_hat, g_hat)?.truncate(t);
        cur = transform_hypersurface(&cur, &jet, t)?;
        if !low_degree_at_weight(&cur.add(&l), d).is_zero() {
            return Err(Error::Internal(format!("cleanup left terms at weight {d}")));
        }
        total = jet.after(&total, t);
    }
    Ok((total, cur))
}

/// Options for [`normalize_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalizeConfig {
    /// Must keep every term of ordinary degree ≤ 4 and weight ≤ 4;
    /// raising `max_weight` (≤ 8) resolves more of the residual.
    pub truncation: Truncation,
}

impl Default for NormalizeConfig {
    fn default() -> Self {
        NormalizeConfig { truncation: Truncation::normal_form() }
    }
}

/// The full pipeline with the default truncation.
pub fn normalize_to_order4(p: &RealPoly, sig: &Signature) -> Result<NormalForm4> {
    normalize_with(p, sig, &NormalizeConfig::default())
}

pub fn normalize_with(p: &RealPoly, sig: &Signature, cfg: &NormalizeConfig) -> Result<NormalForm4> {
    let t = cfg.truncation;
    crate::polycore::check_truncation(t.max_weight)?;
    if t.max_weight < 4 || t.max_degree.is_none_or(|d| d < 4) && t.max_weight < 8 {
        return Err(Error::Parameter("truncation must keep weight ≤ 4 and degree ≤ 4".into()));
    }
    let (j3, p3) = kill_wt3_with(p, sig, &t)?;
    let (j4, s, p4) = normalize_wt4_with(&p3, sig, &t)?;
    let (jc, pc) = cleanup_with(&p4, sig, &t)?;
    let jet = jc.after(&j4.after(&j3, &t), &t);
    let quarter = crate::polycore::rat(1, 4);
    let residual = pc.add(&sig.levi_poly()).sub(&s.scale(&quarter));
    if !residual.is_zero_below_weight(4) || !residual.low_degree_part(4).is_zero() || !laplacian_l(&s, sig).is_zero() {
        return Err(Error::Internal("normal form invariants violated".into()));
    }
    Ok(NormalForm4 { sig: *sig, s, jet, residual, truncation: t })
}

/// The CMW tensor at the base point, read off the normal form.
pub fn extract_cmw(nf: &NormalForm4) -> Result<CMWTensor> {
    CMWTensor::from_quartic(&nf.s, &nf.sig)
}
