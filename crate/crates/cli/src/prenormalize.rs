use cmw_core::polycore::json::real_poly_to_json;
use cmw_core::polycore::{rat, CRational, Poly, RealPoly, Term};
use cmw_core::{Error, Result, Signature};
use nalgebra::{Complex, DMatrix};
use serde_json::{json, Value};

/// Bits kept when a floating transform entry is turned into a dyadic
/// rational.
const DYADIC_BITS: i32 = 48;

/// A floating-point prenormalization of `r = v + P`: the Levi matrix is
/// diagonalized and scaled so that the quadratic part becomes `−|ζ|²_ℓ`.
#[derive(Clone, Debug)]
pub struct Prenormalized {
    pub sig: Signature,
    pub p: RealPoly,
    /// `z = ζM`
    pub transform: Vec<Vec<(f64, f64)>>,
    pub flipped_w: bool,
    pub levi_eigenvalues: Vec<f64>,
    pub max_quadratic_deviation: f64,
}

impl Prenormalized {
    pub fn to_json(&self) -> Value {
        json!({
            "exact": false,
            "n": self.sig.n(),
            "l": self.sig.l(),
            "terms": real_poly_to_json(&self.p),
            "transform": { "z_from_zeta": self.transform, "w_sign": if self.flipped_w { -1 } else { 1 } },
            "levi_eigenvalues": self.levi_eigenvalues,
            "max_quadratic_deviation": self.max_quadratic_deviation,
        })
    }
}

fn dyadic(x: f64) -> f64 {
    let s = 2f64.powi(DYADIC_BITS);
    (x * s).round() / s
}

fn is_11(t: &Term) -> bool {
    t.k == 0 && t.alpha.iter().sum::<u16>() == 1 && t.beta.iter().sum::<u16>() == 1
}

pub fn prenormalize(p: &RealPoly, tol: f64) -> Result<Prenormalized> {
    let n = p.n();
    for t in p.terms() {
        let w = t.alpha.iter().chain(&t.beta).map(|&x| x as u32).sum::<u32>() + 2 * t.k as u32;
        if w <= 2 && !is_11(&t) {
            return Err(Error::Parameter(format!(
                "only a (1,1) quadratic part is handled; found alpha={:?} beta={:?} k={}",
                t.alpha, t.beta, t.k
            )));
        }
    }
    let levi = |p: &RealPoly| -> DMatrix<Complex<f64>> {
        DMatrix::from_fn(n, n, |j, k| {
            let mut a = vec![0u16; n];
            let mut b = vec![0u16; n];
            a[j] = 1;
            b[k] = 1;
            let (re, im) = p.coeff(&a, &b, 0).to_f64_pair();
            -Complex::new(re, im)
        })
    };
    let mut p = p.clone();
    let mut eig = levi(&p).symmetric_eigen();
    let scale = eig.eigenvalues.iter().fold(1f64, |m, x| m.max(x.abs()));
    let zero = eig.eigenvalues.iter().filter(|x| x.abs() <= tol * scale).count();
    if zero > 0 {
        return Err(Error::LeviDegenerate { zero });
    }
    let neg = eig.eigenvalues.iter().filter(|&&x| x < 0.0).count();
    let flipped_w = 2 * neg > n;
    if flipped_w {
        // w ↦ −w: P(z, u) ↦ −P(z, −u)
        let terms = p.terms().map(|t| {
            let sign = if t.k % 2 == 0 { -1 } else { 1 };
            Term { coeff: t.coeff.scale(&rat(sign, 1)), ..t }
        });
        p = RealPoly::from_terms(n, terms.collect::<Vec<_>>())?;
        eig = levi(&p).symmetric_eigen();
    }
    let l = eig.eigenvalues.iter().filter(|&&x| x < 0.0).count();
    let sig = Signature::new(n, l)?;

    // negative directions first; ties by the dominant coordinate
    let mut order: Vec<(bool, usize, usize)> = (0..n)
        .map(|c| {
            let col = eig.eigenvectors.column(c);
            let dom = (0..n).max_by(|&a, &b| col[a].norm().partial_cmp(&col[b].norm()).unwrap().then(b.cmp(&a))).unwrap();
            (eig.eigenvalues[c] > 0.0, dom, c)
        })
        .collect();
    order.sort();

    // M = S V*, rows indexed by ζ
    let mut m = vec![vec![(0.0, 0.0); n]; n];
    for (row, &(_, dom, c)) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(c);
        let phase = col[dom] / col[dom].norm();
        let s = 1.0 / eig.eigenvalues[c].abs().sqrt();
        for a in 0..n {
            let x = (col[a] / phase).conj() * s;
            m[row][a] = (dyadic(x.re), dyadic(x.im));
        }
    }
    let mq: Vec<Vec<CRational>> = m
        .iter()
        .map(|r| r.iter().map(|&(re, im)| CRational::from_f64_pair(re, im).expect("finite")).collect())
        .collect();

    let ws = p.poly().weights().clone();
    let mut images: Vec<Poly> = Vec::with_capacity(2 * n + 1);
    for conj in [false, true] {
        for a in 0..n {
            let mut acc = Poly::zero(ws.clone());
            for (j, row) in mq.iter().enumerate() {
                let c = if conj { row[a].conj() } else { row[a].clone() };
                let v = if conj { n + j } else { j };
                acc.add_assign(&Poly::var(ws.clone(), v).scale(&c));
            }
            images.push(acc);
        }
    }
    images.push(Poly::var(ws.clone(), 2 * n));
    let mut out = RealPoly::from_poly(n, p.poly().substitute(&images, &ws, None))?;

    let model = sig.levi_poly().neg();
    let quad = out.filter(|e| e[2 * n] == 0 && e[..n].iter().sum::<u16>() == 1 && e[n..2 * n].iter().sum::<u16>() == 1);
    let dev = quad.sub(&model).max_abs_coeff_f64();
    if dev <= tol {
        out = out.sub(&quad).add(&model);
    }
    let mut evs: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(Prenormalized { sig, p: out, transform: m, flipped_w, levi_eigenvalues: evs, max_quadratic_deviation: dev })
}
