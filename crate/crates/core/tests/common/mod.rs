#![allow(dead_code)]

use cmw_core::polycore::{rat, CRational, RealPoly};
use cmw_core::Signature;
use rand::Rng;

pub fn small_rational<R: Rng>(rng: &mut R) -> CRational {
    CRational::from_ratios(rng.random_range(-4..=4), rng.random_range(1..=3), rng.random_range(-4..=4), rng.random_range(1..=3))
}

fn random_exponents<R: Rng>(rng: &mut R, n: usize, deg: u32) -> Vec<u16> {
    let mut e = vec![0u16; n];
    for _ in 0..deg {
        e[rng.random_range(0..n)] += 1;
    }
    e
}

/// `−|z|²_ℓ` plus `terms` random real terms of weight 3..=`max_weight`
/// and ordinary degree ≤ 4.
pub fn random_prenormal<R: Rng>(rng: &mut R, sig: &Signature, terms: usize, max_weight: u32) -> RealPoly {
    let n = sig.n();
    let mut p = sig.levi_poly().neg();
    let mut added = 0;
    while added < terms {
        let k = rng.random_range(0..=2u32);
        let p_deg = rng.random_range(0..=4u32);
        let q_deg = rng.random_range(0..=4u32);
        let w = p_deg + q_deg + 2 * k;
        let d = p_deg + q_deg + k;
        if !(3..=max_weight).contains(&w) || d > 4 {
            continue;
        }
        let a = random_exponents(rng, n, p_deg);
        let b = random_exponents(rng, n, q_deg);
        let c = small_rational(rng);
        p.add_real_pair(&a, &b, k as u16, &c);
        added += 1;
    }
    p
}

/// Random real (2,2) form with small rational coefficients.
pub fn random_quartic<R: Rng>(rng: &mut R, n: usize, terms: usize) -> RealPoly {
    let mut p = RealPoly::zero(n);
    for _ in 0..terms {
        let a = random_exponents(rng, n, 2);
        let b = random_exponents(rng, n, 2);
        p.add_real_pair(&a, &b, 0, &small_rational(rng));
    }
    p
}

pub fn half() -> num_rational::BigRational {
    rat(1, 2)
}

/// Defining function of the image of `v = −P` under `(z, w) ↦ (λzU, λ²w)`:
/// `P̃(z, u) = λ² P(λ⁻¹ z U⁻¹, λ⁻² u)`.
pub fn linear_image(p: &RealPoly, lambda: &num_rational::BigRational, u: &cmw_core::linalg::CMatrix) -> RealPoly {
    use cmw_core::polycore::Poly;
    let n = p.n();
    let ws = p.poly().weights().clone();
    let uinv = u.inverse().unwrap();
    let li = CRational::real(lambda.recip());
    let mut images: Vec<Poly> = (0..n)
        .map(|a| {
            let mut acc = Poly::zero(ws.clone());
            for j in 0..n {
                acc = acc.add(&Poly::var(ws.clone(), j).scale(&(&uinv[(j, a)] * &li)));
            }
            acc
        })
        .collect();
    let bars: Vec<Poly> = (0..n)
        .map(|a| {
            let mut acc = Poly::zero(ws.clone());
            for j in 0..n {
                acc = acc.add(&Poly::var(ws.clone(), n + j).scale(&(&uinv[(j, a)] * &li).conj()));
            }
            acc
        })
        .collect();
    images.extend(bars);
    images.push(Poly::var(ws.clone(), 2 * n).scale(&li.pow(2)));
    let out = p.poly().substitute(&images, &ws, None).scale(&CRational::real(lambda * lambda));
    RealPoly::from_poly(n, out).unwrap()
}

pub fn random_lambda<R: Rng>(rng: &mut R) -> num_rational::BigRational {
    rat(rng.random_range(1..=5), rng.random_range(1..=4))
}
