//! Concrete hypersurfaces: the model quadric, a local chart of a perturbed
//! generalized sphere, and a compact Kohn-Nirenberg type domain boundary.

mod kohn_nirenberg;
mod scan;
mod segre;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

pub use kohn_nirenberg::{kohn_nirenberg_rho, segre_interior_witness, verify_witness, KNParams, SegreWitness};
pub use scan::{pseudoconvexity_scan, ScanReport};
pub use segre::{segre_variety, SegreVariety};

use crate::error::{Error, Result};
use crate::hermitian::{levi_form, Signature};
use crate::polycore::json::real_poly_to_json;
use crate::polycore::{conj_raw, pair_weights, real_weights, CRational, Poly, RealPoly, Truncation};

/// `{ρ = 0}` for a real polynomial `ρ` in `Z = (z₁, …, zₙ, w)` and `Z̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicHypersurface {
    n: usize,
    rho: RealPoly,
}

impl AlgebraicHypersurface {
    pub fn new(n: usize, rho: RealPoly) -> Result<Self> {
        if rho.n() != n + 1 {
            return Err(Error::DimensionMismatch { expected: n + 1, got: rho.n() });
        }
        if !rho.is_u_free() {
            return Err(Error::Shape { what: "a defining polynomial in Z and Z̄ only".into() });
        }
        if rho.terms().all(|t| t.alpha.iter().chain(&t.beta).all(|&x| x == 0)) {
            return Err(Error::Shape { what: "a nonconstant defining polynomial".into() });
        }
        Ok(AlgebraicHypersurface { n, rho })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> &RealPoly {
        &self.rho
    }

    /// `ρ(p, p̄)`, exact.
    pub fn eval(&self, p: &[CRational]) -> Result<BigRational> {
        if p.len() != self.n + 1 {
            return Err(Error::DimensionMismatch { expected: self.n + 1, got: p.len() });
        }
        Ok(self.rho.eval_exact(p, &BigRational::zero()).re)
    }

    pub fn to_json(&self) -> Value {
        json!({ "N": self.n + 1, "terms": real_poly_to_json(&self.rho) })
    }
}

/// `ρ = |z|²_ℓ − Im w`.
pub fn hyperquadric(sig: &Signature) -> AlgebraicHypersurface {
    let n = sig.n();
    let mut rho = RealPoly::zero(n + 1);
    for j in 0..n {
        let mut a = vec![0; n + 1];
        a[j] = 1;
        rho.add_real_pair(&a, &a, 0, &sig.delta_rat(j));
    }
    let mut w = vec![0; n + 1];
    w[n] = 1;
    // −Im w = (i/2) w − (i/2) w̄
    rho.add_real_pair(&w, &vec![0; n + 1], 0, &CRational::from_ratios(0, 1, 1, 2));
    AlgebraicHypersurface { n, rho }
}

fn check_sphere_params(n: usize, l: usize, eps: &BigRational) -> Result<Signature> {
    let sig = Signature::new(n, l)?;
    if l < 2 {
        return Err(Error::Parameter("the perturbed sphere chart needs 1 < ℓ ≤ n/2".into()));
    }
    if eps.is_negative() || *eps >= BigRational::from_integer(1.into()) {
        return Err(Error::Parameter("ε must lie in [0, 1)".into()));
    }
    Ok(sig)
}

/// The perturbed generalized sphere
/// `|ζ|²(−Σ_{j≤ℓ}|ζ_j|² + Σ_{j>ℓ}|ζ_j|²) + ε(|ζ₁|⁴ − |ζ_{n+1}|⁴) = 0` in
/// the affine chart `ζ = (1+σ, η₁, …, η_ℓ, 1−σ, η_{ℓ+1}, …, ηₙ)`,
/// `σ = −iw/4`, halved so that `ρ = −v + |η|²_ℓ + O(3)`.
pub fn sphere_perturbation_chart(n: usize, l: usize, eps: &BigRational) -> Result<AlgebraicHypersurface> {
    check_sphere_params(n, l, eps)?;
    let nv = n + 1;
    let ws = real_weights(nv);
    let one = Poly::constant(ws.clone(), CRational::one());
    let sigma = Poly::var(ws.clone(), n).scale(&CRational::from_ratios(0, 1, -1, 4));
    let eta = |j: usize| Poly::var(ws.clone(), j);
    let mut zeta: Vec<Poly> = vec![one.add(&sigma)];
    zeta.extend((0..l).map(eta));
    zeta.push(one.sub(&sigma));
    zeta.extend((l..n).map(eta));
    let abs2: Vec<Poly> = zeta.iter().map(|z| z.mul(&conj_raw(nv, z), None)).collect();
    let mut total = Poly::zero(ws.clone());
    let mut form = Poly::zero(ws.clone());
    for (j, a) in abs2.iter().enumerate() {
        total.add_assign(a);
        if j <= l {
            form = form.sub(a);
        } else {
            form.add_assign(a);
        }
    }
    let quartic = abs2[1].mul(&abs2[1], None).sub(&abs2[n + 1].mul(&abs2[n + 1], None));
    let e = total.mul(&form, None).add(&quartic.scale(&CRational::real(eps.clone())));
    let rho = RealPoly::from_poly(nv, e.scale(&CRational::from_ratios(1, 2, 0, 1)))?;
    AlgebraicHypersurface::new(n, rho)
}

const GRAPH_ROUNDS: usize = 16;

/// Local pre-normal defining function of the perturbed sphere at the chart
/// origin, `r = v + P` with `P = −|η|²_ℓ − a(|η₁|⁴ − |ηₙ|⁴) + …` to
/// weighted degree 4, together with `a`.
pub fn sphere_perturbation_local(n: usize, l: usize, eps: &BigRational) -> Result<(RealPoly, BigRational)> {
    let sig = check_sphere_params(n, l, eps)?;
    let chart = sphere_perturbation_chart(n, l, eps)?;
    let origin = vec![nalgebra::Complex::new(0.0, 0.0); n + 1];
    let levi = levi_form(&chart, &origin)?;
    if levi.zero > 0 {
        return Err(Error::LeviDegenerate { zero: levi.zero });
    }

    // (η, η̄, u, v) layout; w = u + iv
    let ws = pair_weights(n);
    let var = |i: usize| Poly::var(ws.clone(), i);
    let u = var(2 * n);
    let iv = var(2 * n + 1).scale(&CRational::i());
    let mut images: Vec<Poly> = (0..n).map(var).collect();
    images.push(u.add(&iv));
    images.extend((0..n).map(|j| var(n + j)));
    images.push(u.sub(&iv));
    // the unused u-slot of the chart layout
    images.push(Poly::zero(ws.clone()));
    let t = Truncation::weighted(4);
    let rho = chart.rho().poly().substitute(&images, &ws, Some(&t));

    // ρ = c·v + H(η, u, v); solve v = −H/c by iteration
    let mut v_key = vec![0u16; 2 * n + 2];
    v_key[2 * n + 1] = 1;
    let c = rho.coeff(&v_key);
    let c_inv = c.inv().ok_or(Error::Internal("chart is not a graph over v".into()))?;
    let mut h = rho.clone();
    h.add_term(v_key, -c.clone());
    let minus_h = h.scale(&-c_inv);
    let mut sol = Poly::zero(ws.clone());
    let mut ids: Vec<Poly> = (0..=2 * n).map(var).collect();
    ids.push(sol.clone());
    let mut converged = false;
    for _ in 0..GRAPH_ROUNDS {
        ids[2 * n + 1] = sol.clone();
        let next = minus_h.substitute(&ids, &ws, Some(&t));
        if next == sol {
            converged = true;
            break;
        }
        sol = next;
    }
    if !converged {
        return Err(Error::NoConvergence(GRAPH_ROUNDS));
    }
    // v = sol(η, u), so P = −sol
    let mut map: Vec<usize> = (0..=2 * n).collect();
    map.push(2 * n);
    let p = RealPoly::from_poly(n, sol.neg().relabel(real_weights(n), &map))?;
    if p.weighted_component(2) != sig.levi_poly().neg() {
        return Err(Error::Internal("chart quadratic part is not −|η|²_ℓ".into()));
    }
    let mut e1 = vec![0u16; n];
    e1[0] = 2;
    let a = -p.coeff(&e1, &e1, 0).re;
    Ok((p, a))
}

/// `X₁ = e₁ + e_{ℓ+1}` and `X₂ = e₂ + eₙ`, both null for `ℓ ≥ 2`.
pub fn sphere_perturbation_test_vectors(sig: &Signature) -> (Vec<CRational>, Vec<CRational>) {
    let n = sig.n();
    let unit = |a: usize, b: usize| -> Vec<CRational> {
        (0..n).map(|j| if j == a || j == b { CRational::one() } else { CRational::zero() }).collect()
    };
    (unit(0, sig.l()), unit(1, n - 1))
}
