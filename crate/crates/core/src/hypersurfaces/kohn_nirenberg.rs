use std::ops::{Add, Mul};

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::{segre_variety, AlgebraicHypersurface};
use crate::error::{Error, Result};
use crate::polycore::json::crational_json;
use crate::polycore::{rat, CRational, RealPoly};

/// `ρ_ε = ε₀(|z|⁸ + c·Re(|z|²z⁶)) + |w|² + |z|¹⁰ + ε|z|² − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KNParams {
    pub eps0: BigRational,
    pub c: BigRational,
    pub eps: BigRational,
}

impl Default for KNParams {
    fn default() -> Self {
        KNParams { eps0: rat(1, 1000), c: rat(21, 10), eps: rat(1, 10000) }
    }
}

impl KNParams {
    pub fn validate(&self) -> Result<()> {
        if !self.eps0.is_positive() {
            return Err(Error::Parameter("ε₀ must be positive".into()));
        }
        if self.c <= rat(2, 1) || self.c >= rat(16, 7) {
            return Err(Error::Parameter("c must satisfy 2 < c < 16/7".into()));
        }
        if self.eps.is_negative() || self.eps >= BigRational::one() {
            return Err(Error::Parameter("ε must lie in [0, 1)".into()));
        }
        Ok(())
    }

    pub fn with_eps(&self, eps: BigRational) -> Self {
        KNParams { eps, ..self.clone() }
    }

    /// `φ(λ, ε) = ε₀λ⁸(1 − c) + λ¹⁰ + ελ²` as a function of `t = λ²`.
    pub fn phi(&self, t: &BigRational, eps: &BigRational) -> BigRational {
        let t4 = t * t * t * t;
        &self.eps0 * &t4 * (BigRational::one() - &self.c) + &t4 * t + eps * t
    }
}

pub fn kohn_nirenberg_rho(params: &KNParams) -> Result<AlgebraicHypersurface> {
    params.validate()?;
    let mut rho = RealPoly::zero(2);
    let r = |x: &BigRational| CRational::real(x.clone());
    rho.add_real_pair(&[4, 0], &[4, 0], 0, &r(&params.eps0));
    // c·Re(z⁷z̄) = (c/2)(z⁷z̄ + z z̄⁷)
    rho.add_real_pair(&[7, 0], &[1, 0], 0, &r(&(&params.eps0 * &params.c / rat(2, 1))));
    rho.add_real_pair(&[0, 1], &[0, 1], 0, &CRational::one());
    rho.add_real_pair(&[5, 0], &[5, 0], 0, &CRational::one());
    rho.add_real_pair(&[1, 0], &[1, 0], 0, &r(&params.eps));
    rho.add_real_pair(&[0, 0], &[0, 0], 0, &CRational::from_int(-1));
    AlgebraicHypersurface::new(1, rho)
}

/// Interior point `q = (μ₀, 1)` on the Segre variety of `p₀ = (0, 1)`, with
/// `μ₀ = λ′e^{iπ/6}` and `λ′² = ε₀(c − 1)/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegreWitness {
    pub params: KNParams,
    pub p0: Vec<CRational>,
    pub lambda_sq: BigRational,
    pub eps_tilde: BigRational,
    pub psi: BigRational,
    pub phi: BigRational,
    pub rho_at_q: BigRational,
    pub on_segre: bool,
}

impl SegreWitness {
    pub fn in_domain(&self) -> bool {
        self.rho_at_q.is_negative()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "params": {
                "eps0": self.params.eps0.to_string(),
                "c": self.params.c.to_string(),
                "eps": self.params.eps.to_string(),
            },
            "p0": self.p0.iter().map(crational_json).collect::<Vec<_>>(),
            "q": {
                "z": { "modulus_squared": self.lambda_sq.to_string(), "argument": "pi/6" },
                "w": crational_json(&CRational::one()),
            },
            "lambda_prime_squared": self.lambda_sq.to_string(),
            "lambda_prime_approx": self.lambda_sq.to_f64().unwrap_or(f64::NAN).sqrt(),
            "eps_tilde": self.eps_tilde.to_string(),
            "psi": self.psi.to_string(),
            "phi": self.phi.to_string(),
            "rho_at_q": self.rho_at_q.to_string(),
            "on_segre": self.on_segre,
            "in_domain": self.in_domain(),
        })
    }
}

const MAX_HALVINGS: u32 = 4096;

/// Largest `1/2^k` with `φ(λ′, 1/2^k) < 0`.
fn eps_tilde(params: &KNParams, t: &BigRational) -> Result<BigRational> {
    let mut e = BigRational::one();
    for _ in 0..MAX_HALVINGS {
        if params.phi(t, &e).is_negative() {
            return Ok(e);
        }
        e /= rat(2, 1);
    }
    Err(Error::Internal("no admissible ε̃ found".into()))
}

pub fn segre_interior_witness(params: &KNParams) -> Result<SegreWitness> {
    params.validate()?;
    let t = &params.eps0 * (&params.c - BigRational::one()) / rat(2, 1);
    let et = eps_tilde(params, &t)?;
    if params.eps > et {
        return Err(Error::NoWitness { eps: params.eps.to_string(), threshold: et.to_string() });
    }
    let phi = params.phi(&t, &params.eps);
    // |μ₀|⁸ = t⁴, Re(|μ₀|²μ₀⁶) = −t⁴, |μ₀|¹⁰ = t⁵, |μ₀|² = t
    let t4 = &t * &t * &t * &t;
    let psi = &params.eps0 * (&t4 - &params.c * &t4) + &t4 * &t + &params.eps * &t;
    let p0 = vec![CRational::zero(), CRational::one()];
    let mut w = SegreWitness {
        params: params.clone(),
        p0,
        lambda_sq: t,
        eps_tilde: et,
        psi,
        phi,
        rho_at_q: BigRational::zero(),
        on_segre: false,
    };
    let (rho_at_q, on_segre) = evaluate_at_witness(&w)?;
    w.rho_at_q = rho_at_q;
    w.on_segre = on_segre;
    if w.psi != w.phi || w.rho_at_q != w.psi || !w.on_segre || !w.in_domain() {
        return Err(Error::Internal("witness failed exact verification".into()));
    }
    Ok(w)
}

/// Re-checks a witness from scratch: evaluates `ρ_ε` at `q` in `ℚ(√3, i)`
/// and the Segre polynomial of `p₀` at `q`.
pub fn verify_witness(w: &SegreWitness) -> Result<bool> {
    let (rho, seg) = evaluate_at_witness(w)?;
    Ok(seg && rho.is_negative() && rho == w.rho_at_q && rho == w.psi)
}

fn evaluate_at_witness(w: &SegreWitness) -> Result<(BigRational, bool)> {
    let h = kohn_nirenberg_rho(&w.params)?;
    let t = &w.lambda_sq;
    // ω = e^{iπ/6} = √3/2 + i/2
    let omega = Q3i { re: Q3::new(rat(0, 1), rat(1, 2)), im: Q3::new(rat(1, 2), rat(0, 1)) };
    let omega_bar = omega.conj();
    let mut rho = Q3i::zero();
    for term in h.rho().terms() {
        let (a, b) = (term.alpha[0] as u32, term.beta[0] as u32);
        if (a + b) % 2 == 1 {
            return Err(Error::Internal("odd total z-degree in ρ".into()));
        }
        let modulus = t.pow(((a + b) / 2) as i32);
        let c = Q3i::from_crational(&term.coeff).scale(&modulus);
        rho = rho + c * omega.pow(a) * omega_bar.pow(b);
    }
    if !rho.im.is_zero() || !rho.re.b.is_zero() {
        return Err(Error::Internal("ρ at the witness is not rational".into()));
    }
    // Segre polynomial at q: split by parity of the z-degree (factor √t)
    let seg = segre_variety(&h, &w.p0)?;
    let mut even = Q3i::zero();
    let mut odd = Q3i::zero();
    for (alpha, _m, c) in seg.poly.terms() {
        let a = alpha[0] as u32;
        let val = Q3i::from_crational(&c).scale(&t.pow((a / 2) as i32)) * omega.pow(a);
        if a % 2 == 0 {
            even = even + val;
        } else {
            odd = odd + val;
        }
    }
    Ok((rho.re.a, even.is_zero() && odd.is_zero()))
}

/// `a + b√3`
#[derive(Clone, Debug, PartialEq, Eq)]
struct Q3 {
    a: BigRational,
    b: BigRational,
}

impl Q3 {
    fn new(a: BigRational, b: BigRational) -> Self {
        Q3 { a, b }
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn scale(&self, k: &BigRational) -> Q3 {
        Q3::new(&self.a * k, &self.b * k)
    }
}

impl Add for Q3 {
    type Output = Q3;
    fn add(self, o: Q3) -> Q3 {
        Q3::new(self.a + o.a, self.b + o.b)
    }
}

impl Mul for &Q3 {
    type Output = Q3;
    fn mul(self, o: &Q3) -> Q3 {
        Q3::new(&self.a * &o.a + rat(3, 1) * &self.b * &o.b, &self.a * &o.b + &self.b * &o.a)
    }
}

/// `x + iy` with `x, y ∈ ℚ(√3)`
#[derive(Clone, Debug, PartialEq, Eq)]
struct Q3i {
    re: Q3,
    im: Q3,
}

impl Q3i {
    fn zero() -> Self {
        Q3i { re: Q3::new(rat(0, 1), rat(0, 1)), im: Q3::new(rat(0, 1), rat(0, 1)) }
    }

    fn one() -> Self {
        Q3i { re: Q3::new(rat(1, 1), rat(0, 1)), im: Q3::new(rat(0, 1), rat(0, 1)) }
    }

    fn from_crational(c: &CRational) -> Self {
        Q3i { re: Q3::new(c.re.clone(), rat(0, 1)), im: Q3::new(c.im.clone(), rat(0, 1)) }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn conj(&self) -> Self {
        Q3i { re: self.re.clone(), im: self.im.scale(&rat(-1, 1)) }
    }

    fn scale(&self, k: &BigRational) -> Self {
        Q3i { re: self.re.scale(k), im: self.im.scale(k) }
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Q3i::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Add for Q3i {
    type Output = Q3i;
    fn add(self, o: Q3i) -> Q3i {
        Q3i { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Mul for Q3i {
    type Output = Q3i;
    fn mul(self, o: Q3i) -> Q3i {
        let re = &self.re * &o.re + (&self.im * &o.im).scale(&rat(-1, 1));
        let im = &self.re * &o.im + &self.im * &o.re;
        Q3i { re, im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_has_order_twelve() {
        let omega = Q3i { re: Q3::new(rat(0, 1), rat(1, 2)), im: Q3::new(rat(1, 2), rat(0, 1)) };
        assert_eq!(omega.pow(6), Q3i::one().scale(&rat(-1, 1)));
        assert_eq!(omega.pow(12), Q3i::one());
        assert_eq!(omega.clone() * omega.conj(), Q3i::one());
    }

    #[test]
    fn parameter_ranges() {
        assert!(KNParams::default().validate().is_ok());
        assert!(KNParams { c: rat(2, 1), ..KNParams::default() }.validate().is_err());
        assert!(KNParams { c: rat(16, 7), ..KNParams::default() }.validate().is_err());
        assert!(KNParams { eps0: rat(0, 1), ..KNParams::default() }.validate().is_err());
        assert!(KNParams::default().with_eps(rat(1, 1)).validate().is_err());
    }
}
