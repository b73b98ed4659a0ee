//! Signature-ℓ Hermitian algebra: the form `⟨·,·⟩_ℓ`, the signed Laplacian,
//! null-cone sampling and the harmonic split of (2,2) forms.

mod levi;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use levi::{levi_form, LeviReport};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::polycore::{real_weights, CRational, Poly, RealPoly};

/// `n` complex variables, the first `l` of which carry a minus sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    n: usize,
    l: usize,
}

impl Signature {
    pub fn new(n: usize, l: usize) -> Result<Self> {
        if n < 2 || 2 * l > n {
            return Err(Error::InvalidSignature { n, l });
        }
        Ok(Signature { n, l })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// `δ_j`: −1 for the first `l` indices, +1 after.
    pub fn delta(&self, j: usize) -> i64 {
        if j < self.l {
            -1
        } else {
            1
        }
    }

    pub fn delta_rat(&self, j: usize) -> CRational {
        CRational::from_int(self.delta(j))
    }

    /// `|z|²_ℓ = Σ δ_j |z_j|²`
    pub fn levi_poly(&self) -> RealPoly {
        let mut p = RealPoly::zero(self.n);
        for j in 0..self.n {
            let mut a = vec![0; self.n];
            a[j] = 1;
            p.add_real_pair(&a, &a, 0, &self.delta_rat(j));
        }
        p
    }

    /// The model metric `diag(δ_1, …, δ_n)`.
    pub fn g0(&self) -> HermitianMatrix {
        let d: Vec<CRational> = (0..self.n).map(|j| self.delta_rat(j)).collect();
        HermitianMatrix(CMatrix::diagonal(&d))
    }
}

/// `⟨a, b̄⟩_ℓ = Σ δ_j a_j b̄_j`
pub fn inner_l(a: &[CRational], b: &[CRational], sig: &Signature) -> Result<CRational> {
    for v in [a, b] {
        if v.len() != sig.n {
            return Err(Error::DimensionMismatch { expected: sig.n, got: v.len() });
        }
    }
    let mut acc = CRational::zero();
    for j in 0..sig.n {
        let t = &a[j] * &b[j].conj();
        if sig.delta(j) < 0 {
            acc -= &t;
        } else {
            acc += &t;
        }
    }
    Ok(acc)
}

/// `Δ_ℓ = Σ δ_j ∂²/∂z_j∂z̄_j` on a raw polynomial over `(z, z̄, u)`.
pub(crate) fn laplacian_raw(p: &Poly, sig: &Signature) -> Poly {
    let n = sig.n;
    let mut out = Poly::zero(p.weights().clone());
    for j in 0..n {
        let d = p.derivative(j).derivative(n + j);
        if sig.delta(j) < 0 {
            out = out.sub(&d);
        } else {
            out.add_assign(&d);
        }
    }
    out
}

pub fn laplacian_l(p: &RealPoly, sig: &Signature) -> RealPoly {
    RealPoly::from_poly_unchecked(p.n(), laplacian_raw(p.poly(), sig))
}

/// All exponent pairs `(α, β)` with `|α| = p`, `|β| = q`, in lexicographic
/// order of the combined key.
pub fn bidegree_monomials(n: usize, p: u32, q: u32) -> Vec<(Vec<u16>, Vec<u16>)> {
    let alphas = compositions(n, p);
    let betas = compositions(n, q);
    let mut out = Vec::with_capacity(alphas.len() * betas.len());
    for a in &alphas {
        for b in &betas {
            out.push((a.clone(), b.clone()));
        }
    }
    out
}

/// Exponent vectors of length `n` summing to `d`, lexicographically
/// descending.
pub fn compositions(n: usize, d: u32) -> Vec<Vec<u16>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if prefix.len() == n - 1 {
            prefix.push(d as u16);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in (0..=d).rev() {
            prefix.push(x as u16);
            rec(n, d - x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, d, &mut Vec::new(), &mut out);
    }
    out
}

/// A Hermitian matrix with exact entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_hermitian() {
            return Err(Error::Shape { what: "a Hermitian matrix".into() });
        }
        Ok(HermitianMatrix(m))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn entry(&self, a: usize, b: usize) -> &CRational {
        &self.0[(a, b)]
    }

    pub fn inverse(&self) -> Result<HermitianMatrix> {
        Ok(HermitianMatrix(self.0.inverse()?))
    }
}

/// A vector with `⟨v, v⟩_ℓ = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullVector(Vec<CRational>);

impl NullVector {
    pub fn new(v: Vec<CRational>, sig: &Signature) -> Result<Self> {
        if !inner_l(&v, &v, sig)?.is_zero() {
            return Err(Error::Parameter("vector is not in the null cone".into()));
        }
        Ok(NullVector(v))
    }

    pub fn as_slice(&self) -> &[CRational] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<CRational> {
        self.0
    }
}

fn small_gaussian<R: Rng>(rng: &mut R, r: i64) -> CRational {
    CRational::from_ratios(rng.random_range(-r..=r), 1, rng.random_range(-r..=r), 1)
}

/// A random exact unitary of size `k` (Cayley transform of a small rational
/// skew-Hermitian matrix).
pub(crate) fn random_unitary<R: Rng>(rng: &mut R, k: usize) -> CMatrix {
    let g = vec![1i64; k];
    random_pseudo_unitary(rng, &g)
}

/// Random `U` with `U G U* = G`, `G = diag(g)`.
pub(crate) fn random_pseudo_unitary<R: Rng>(rng: &mut R, g: &[i64]) -> CMatrix {
    let k = g.len();
    let gm = CMatrix::diagonal(&g.iter().map(|&x| CRational::from_int(x)).collect::<Vec<_>>());
    loop {
        let mut s = CMatrix::zeros(k, k);
        for i in 0..k {
            s[(i, i)] = CRational::from_ratios(0, 1, rng.random_range(-3..=3), rng.random_range(1..=4));
            for j in i + 1..k {
                let x = CRational::from_ratios(rng.random_range(-3..=3), rng.random_range(1..=4), rng.random_range(-3..=3), rng.random_range(1..=4));
                s[(j, i)] = -&x.conj();
                s[(i, j)] = x;
            }
        }
        let kmat = s.mul(&gm).expect("square");
        if let Ok(u) = CMatrix::cayley(&kmat) {
            return u;
        }
    }
}

fn row_times(v: &[CRational], u: &CMatrix) -> Vec<CRational> {
    (0..u.cols())
        .map(|j| {
            let mut acc = CRational::zero();
            for (i, x) in v.iter().enumerate() {
                acc += &(x * &u[(i, j)]);
            }
            acc
        })
        .collect()
}

/// Deterministic exact samples of the null cone `⟨v, v⟩_ℓ = 0`.
///
/// The first samples are the coordinate vectors `e_i + e_j` with `i` on the
/// negative side and `j` on the positive side; the rest pair a random
/// Gaussian-integer vector `a` on the negative side with a copy of `a` on the
/// positive side, each side rotated by its own random rational unitary.
pub fn null_cone_samples(sig: &Signature, m: usize, seed: u64) -> Result<Vec<NullVector>> {
    let (n, l) = (sig.n, sig.l);
    if l == 0 {
        return Err(Error::EmptyNullCone);
    }
    if m == 0 {
        return Err(Error::Parameter("sample count must be positive".into()));
    }
    let mut out = Vec::with_capacity(m);
    'canon: for i in 0..l {
        for j in l..n {
            if out.len() == m {
                break 'canon;
            }
            let mut v = vec![CRational::zero(); n];
            v[i] = CRational::one();
            v[j] = CRational::one();
            out.push(NullVector(v));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < m {
        let a: Vec<CRational> = (0..l).map(|_| small_gaussian(&mut rng, 3)).collect();
        if a.iter().all(CRational::is_zero) {
            continue;
        }
        let mut b = vec![CRational::zero(); n - l];
        b[..l].clone_from_slice(&a);
        let ua = random_unitary(&mut rng, l);
        let ub = random_unitary(&mut rng, n - l);
        let mut v = row_times(&a, &ua);
        v.extend(row_times(&b, &ub));
        out.push(NullVector::new(v, sig).map_err(|_| Error::Internal("null sample left the cone".into()))?);
    }
    Ok(out)
}

/// `Q = N + A·|z|²_ℓ` with `Δ_ℓ N = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FischerSplit {
    pub harmonic: RealPoly,
    pub multiplier: RealPoly,
}

fn check_pure_22(q: &RealPoly, sig: &Signature) -> Result<()> {
    if q.n() != sig.n {
        return Err(Error::DimensionMismatch { expected: sig.n, got: q.n() });
    }
    for t in q.terms() {
        let p: u16 = t.alpha.iter().sum();
        let r: u16 = t.beta.iter().sum();
        if p != 2 || r != 2 || t.k != 0 {
            return Err(Error::Shape { what: "a u-free form of bidegree (2,2)".into() });
        }
    }
    Ok(())
}

/// Splits a (2,2) form by solving `Δ_ℓ(A·|z|²_ℓ) = Δ_ℓ Q` for the (1,1)
/// coefficients of `A` exactly.
pub fn fischer_split_22(q: &RealPoly, sig: &Signature) -> Result<FischerSplit> {
    check_pure_22(q, sig)?;
    let n = sig.n;
    let basis = bidegree_monomials(n, 1, 1);
    let l = sig.levi_poly();
    let rw = real_weights(n);
    let key = |a: &[u16], b: &[u16]| {
        let mut e = a.to_vec();
        e.extend_from_slice(b);
        e.push(0);
        e
    };
    let mut m = CMatrix::zeros(basis.len(), basis.len());
    for (col, (a, b)) in basis.iter().enumerate() {
        let mut mono = Poly::zero(rw.clone());
        mono.add_term(key(a, b), CRational::one());
        let img = laplacian_raw(&mono.mul(l.poly(), None), sig);
        for (row, (ra, rb)) in basis.iter().enumerate() {
            m[(row, col)] = img.coeff(&key(ra, rb));
        }
    }
    let rhs_poly = laplacian_raw(q.poly(), sig);
    let rhs: Vec<CRational> = basis.iter().map(|(a, b)| rhs_poly.coeff(&key(a, b))).collect();
    let x = m.solve(&rhs).ok_or_else(|| Error::Internal("harmonic split system inconsistent".into()))?;
    let mut a_poly = Poly::zero(rw);
    for ((a, b), c) in basis.iter().zip(x) {
        a_poly.add_term(key(a, b), c);
    }
    let multiplier = RealPoly::from_poly(n, a_poly).map_err(|_| Error::Internal("harmonic split produced a non-real multiplier".into()))?;
    let harmonic = q.sub(&multiplier.mul(&l));
    if !laplacian_l(&harmonic, sig).is_zero() {
        return Err(Error::Internal("harmonic part is not harmonic".into()));
    }
    Ok(FischerSplit { harmonic, multiplier })
}

/// `H = h2·|z|²_ℓ + h4` with `Δ_ℓ h4 = 0`; returns `(h2, h4)`.
pub fn harmonic_residual_split(h: &RealPoly, sig: &Signature) -> Result<(RealPoly, RealPoly)> {
    let s = fischer_split_22(h, sig)?;
    Ok((s.multiplier, s.harmonic))
}

/// Dimension of the space of Δ_ℓ-harmonic (2,2) forms:
/// `(n(n+1)/2)² − n²`.
pub fn harmonic_22_dimension(n: usize) -> usize {
    let s = n * (n + 1) / 2;
    s * s - n * n
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn c(a: i64) -> CRational {
        CRational::from_int(a)
    }

    #[test]
    fn inner_examples() {
        let s = Signature::new(2, 1).unwrap();
        assert!(inner_l(&[c(1), c(1)], &[c(1), c(1)], &s).unwrap().is_zero());
        let s4 = Signature::new(4, 2).unwrap();
        let x = [c(1), c(0), c(1), c(0)];
        assert!(inner_l(&x, &x, &s4).unwrap().is_zero());
        let s0 = Signature::new(2, 0).unwrap();
        assert_eq!(inner_l(&[c(1), c(2)], &[c(3), CRational::i()], &s0).unwrap(), CRational::from_ratios(3, 1, -2, 1));
        assert!(inner_l(&[c(1)], &[c(1)], &s0).is_err());
    }

    #[test]
    fn laplacian_examples() {
        let s = Signature::new(3, 1).unwrap();
        let l = s.levi_poly();
        assert_eq!(laplacian_l(&l, &s), RealPoly::constant(3, BigRational::from_integer(3.into())));
        let s2 = Signature::new(2, 1).unwrap();
        let p = RealPoly::abs_sq(2, 0).mul(&RealPoly::abs_sq(2, 1));
        let expect = RealPoly::abs_sq(2, 0).sub(&RealPoly::abs_sq(2, 1));
        assert_eq!(laplacian_l(&p, &s2), expect);
    }

    #[test]
    fn signature_bounds() {
        assert!(Signature::new(1, 0).is_err());
        assert!(Signature::new(4, 3).is_err());
        assert!(Signature::new(4, 2).is_ok());
    }

    #[test]
    fn null_samples_lie_on_cone() {
        let s = Signature::new(4, 2).unwrap();
        let v = null_cone_samples(&s, 12, 7).unwrap();
        assert_eq!(v.len(), 12);
        assert_eq!(v[0].as_slice()[0], c(1));
        assert_eq!(v[0].as_slice()[2], c(1));
        for x in &v {
            assert!(inner_l(x.as_slice(), x.as_slice(), &s).unwrap().is_zero());
        }
        assert_eq!(null_cone_samples(&Signature::new(3, 0).unwrap(), 3, 0), Err(Error::EmptyNullCone));
    }

    #[test]
    fn split_of_harmonic_is_trivial() {
        let s = Signature::new(2, 0).unwrap();
        let mut q = RealPoly::zero(2);
        q.add_real_pair(&[2, 0], &[0, 2], 0, &c(1));
        let f = fischer_split_22(&q, &s).unwrap();
        assert!(f.multiplier.is_zero());
        assert_eq!(f.harmonic, q);
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2).len(), 6);
        assert_eq!(bidegree_monomials(4, 2, 2).len(), 100);
        assert_eq!(harmonic_22_dimension(4), 84);
    }
}
