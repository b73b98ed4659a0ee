use num_rational::BigRational;
use num_traits::{One, Signed};

use super::is_pseudo_unitary;
use crate::error::{Error, Result};
use crate::hermitian::Signature;
use crate::linalg::CMatrix;
use crate::polycore::{conj_raw, real_weights, CRational, HoloPoly, Poly, RealPoly};

/// Linear data `z̃ = λzU + a w + …`, `w̃ = σλ²w + …` of a map between
/// hypersurfaces in normal form, plus `r₀ = ½ Re g''_ww(0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusParams {
    pub sig: Signature,
    pub lambda: BigRational,
    pub u: CMatrix,
    pub a: Vec<CRational>,
    pub r0: BigRational,
    /// `−1` is allowed only for `ℓ = n/2`; the normalizer is then built for
    /// the map precomposed with [`tau_half`], so `σ` does not enter `T`.
    pub sigma: i8,
}

impl MoebiusParams {
    pub fn validate(&self) -> Result<()> {
        let n = self.sig.n();
        if !self.lambda.is_positive() {
            return Err(Error::Parameter("λ must be positive".into()));
        }
        if self.a.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.a.len() });
        }
        if !is_pseudo_unitary(&self.u, &self.sig) {
            return Err(Error::NotPseudoUnitary);
        }
        match self.sigma {
            1 => Ok(()),
            -1 if 2 * self.sig.l() == n => Ok(()),
            -1 => Err(Error::Parameter("σ = −1 requires ℓ = n/2".into())),
            _ => Err(Error::Parameter("σ must be ±1".into())),
        }
    }
}

/// `T(z̃, w̃) = (λ⁻¹(z̃ − λ⁻²a w̃)U⁻¹, λ⁻²w̃) / q(z̃, w̃)` with
/// `q = 1 + 2i⟨z̃, λ⁻²ā⟩_ℓ + λ⁻⁴(r₀ − i|a|²_ℓ) w̃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusMap {
    pub sig: Signature,
    pub z_num: Vec<HoloPoly>,
    pub w_num: HoloPoly,
    pub q: HoloPoly,
}

impl MoebiusMap {
    pub fn new(p: &MoebiusParams) -> Result<Self> {
        p.validate()?;
        let sig = p.sig;
        let n = sig.n();
        let uinv = p.u.inverse()?;
        let li = CRational::real(p.lambda.recip());
        let li2 = li.pow(2);
        let li4 = li.pow(4);
        let w = HoloPoly::w(n);
        // z̃ − λ⁻² a w̃
        let shifted: Vec<HoloPoly> = (0..n).map(|j| HoloPoly::z(n, j).sub(&w.scale(&(&li2 * &p.a[j])))).collect();
        let z_num = (0..n)
            .map(|k| {
                let mut acc = HoloPoly::zero(n);
                for (j, s) in shifted.iter().enumerate() {
                    acc.add_assign(&s.scale(&(&uinv[(j, k)] * &li)));
                }
                acc
            })
            .collect();
        let w_num = w.scale(&li2);
        let mut q = HoloPoly::constant(n, CRational::one());
        let two_i = CRational::from_ratios(0, 1, 2, 1);
        let mut norm_a = CRational::zero();
        for j in 0..n {
            let d = sig.delta_rat(j);
            // ⟨z̃, λ⁻²ā⟩_ℓ = Σ δ_j z̃_j λ⁻² ā_j
            q.add_assign(&HoloPoly::z(n, j).scale(&(&(&two_i * &d) * &(&li2 * &p.a[j].conj()))));
            norm_a += &(&d * &CRational::real(p.a[j].norm_sqr()));
        }
        let wc = &CRational::real(p.r0.clone()) - &norm_a.mul_i();
        q.add_assign(&w.scale(&(&li4 * &wc)));
        Ok(MoebiusMap { sig, z_num, w_num, q })
    }

    /// `Im(w_num · q̄) − |z_num|²_ℓ` on `w̃ = ũ + i|z̃|²_ℓ`; vanishes exactly
    /// iff `T` maps the model hypersurface into itself (away from `q = 0`).
    pub fn hyperquadric_defect(&self) -> RealPoly {
        let n = self.sig.n();
        let rw = real_weights(n);
        let mut images: Vec<Poly> = (0..n).map(|j| Poly::var(rw.clone(), j)).collect();
        images.push(RealPoly::u(n).into_poly().add(&self.sig.levi_poly().poly().scale(&CRational::i())));
        let wn = self.w_num.substitute_raw(&images, None);
        let q = self.q.substitute_raw(&images, None);
        let im = RealPoly::imag_part_of(n, &wn.mul(&conj_raw(n, &q), None));
        let mut l = Poly::zero(rw);
        for (j, z) in self.z_num.iter().enumerate() {
            let zj = z.substitute_raw(&images, None);
            l.add_assign(&zj.mul(&conj_raw(n, &zj), None).scale(&self.sig.delta_rat(j)));
        }
        im.sub(&RealPoly::real_part_of(n, &l))
    }

    /// Linear part of `T ∘ F` with `F(z, w) = (f, g)`, computed to first
    /// order: `(z_num, w_num)` applied to the linear parts of `f, g`.
    pub fn linear_part_after(&self, f: &[HoloPoly], g: &HoloPoly) -> (Vec<HoloPoly>, HoloPoly) {
        let lin = |p: &HoloPoly| -> HoloPoly {
            let n = p.n();
            let mut out = HoloPoly::zero(n);
            for (alpha, m, c) in p.terms() {
                let deg: u16 = alpha.iter().sum::<u16>() + m;
                if deg == 1 {
                    out.add_assign(&HoloPoly::monomial(&alpha, m, c));
                }
            }
            out
        };
        let fl: Vec<HoloPoly> = f.iter().map(lin).collect();
        let gl = lin(g);
        let z = self.z_num.iter().map(|p| lin(p).compose(&fl, &gl, None)).collect();
        (z, lin(&self.w_num).compose(&fl, &gl, None))
    }
}

/// `τ(z', z'', w) = (z'', z', −w)` for `ℓ = n/2`; maps `Im w = |z|²_ℓ` to
/// itself and flips the sign `σ`.
pub fn tau_half(sig: &Signature) -> Result<(Vec<HoloPoly>, HoloPoly)> {
    let n = sig.n();
    if 2 * sig.l() != n {
        return Err(Error::Parameter("τ needs ℓ = n/2".into()));
    }
    let h = n / 2;
    let f = (0..n).map(|j| HoloPoly::z(n, (j + h) % n)).collect();
    Ok((f, HoloPoly::w(n).scale(&CRational::from_int(-1))))
}

impl MoebiusParams {
    /// `λ = 1, U = I, a = 0, r₀ = 0, σ = 1`.
    pub fn trivial(sig: &Signature) -> Self {
        MoebiusParams {
            sig: *sig,
            lambda: BigRational::one(),
            u: CMatrix::identity(sig.n()),
            a: vec![CRational::zero(); sig.n()],
            r0: BigRational::from_integer(0.into()),
            sigma: 1,
        }
    }
}
