//! The Chern-Moser-Weyl tensor as a value: symmetries, traces, frame
//! changes, the Möbius normalizer and null-cone sign tests.

mod moebius;
mod obstruction;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub use moebius::{tau_half, MoebiusMap, MoebiusParams};
pub use obstruction::{null_cone_definiteness, null_cone_zero_test, null_sample_rank, ObstructionReport, Verdict, Witness};

use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, Signature};
use crate::linalg::CMatrix;
use crate::polycore::{real_weights, CRational, Poly, RealPoly};

/// `s_{αβ̄γδ̄}`, stored densely with index order `(α, β, γ, δ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMWTensor {
    sig: Signature,
    s: Vec<CRational>,
}

fn multiplicity(pair: &[u16]) -> i64 {
    if pair.iter().any(|&x| x == 2) {
        1
    } else {
        2
    }
}

fn index_pair(e: &[u16]) -> (usize, usize) {
    let mut idx = Vec::with_capacity(2);
    for (j, &x) in e.iter().enumerate() {
        for _ in 0..x {
            idx.push(j);
        }
    }
    (idx[0], idx[1])
}

impl CMWTensor {
    pub fn zero(sig: &Signature) -> Self {
        let n = sig.n();
        CMWTensor { sig: *sig, s: vec![CRational::zero(); n * n * n * n] }
    }

    fn idx(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        let n = self.sig.n();
        ((a * n + b) * n + c) * n + d
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> &CRational {
        &self.s[self.idx(a, b, c, d)]
    }

    /// The unique array with the index symmetries whose quartic
    /// `Σ s z_α z̄_β z_γ z̄_δ` equals `s`. Trace-freeness is not required
    /// here; see [`CMWTensor::check_invariants`].
    pub fn from_quartic(q: &RealPoly, sig: &Signature) -> Result<Self> {
        let n = sig.n();
        if q.n() != n {
            return Err(Error::DimensionMismatch { expected: n, got: q.n() });
        }
        let mut t = CMWTensor::zero(sig);
        for term in q.terms() {
            let p: u16 = term.alpha.iter().sum();
            let r: u16 = term.beta.iter().sum();
            if p != 2 || r != 2 || term.k != 0 {
                return Err(Error::Shape { what: "a u-free quartic of bidegree (2,2)".into() });
            }
            let (a, c) = index_pair(&term.alpha);
            let (b, d) = index_pair(&term.beta);
            let m = multiplicity(&term.alpha) * multiplicity(&term.beta);
            let v = term.coeff.scale(&crate::polycore::rat(1, m));
            for (x, z) in [(a, c), (c, a)] {
                for (y, w) in [(b, d), (d, b)] {
                    let i = t.idx(x, y, z, w);
                    t.s[i] = v.clone();
                }
            }
        }
        Ok(t)
    }

    /// `s(z, z̄) = Σ s_{αβ̄γδ̄} z_α z̄_β z_γ z̄_δ`.
    pub fn quartic(&self) -> RealPoly {
        let n = self.sig.n();
        let mut p = Poly::zero(real_weights(n));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut e = vec![0u16; 2 * n + 1];
                        e[a] += 1;
                        e[c] += 1;
                        e[n + b] += 1;
                        e[n + d] += 1;
                        p.add_term(e, self.get(a, b, c, d).clone());
                    }
                }
            }
        }
        RealPoly::from_poly_unchecked(n, p)
    }

    /// `Σ s_{αβ̄γδ̄} X_α Ȳ_β Z_γ W̄_δ`.
    pub fn evaluate(&self, x: &[CRational], y: &[CRational], z: &[CRational], w: &[CRational]) -> Result<CRational> {
        let n = self.sig.n();
        for v in [x, y, z, w] {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
        }
        let yb: Vec<CRational> = y.iter().map(CRational::conj).collect();
        let wb: Vec<CRational> = w.iter().map(CRational::conj).collect();
        let mut acc = CRational::zero();
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if yb[b].is_zero() {
                    continue;
                }
                let xy = &x[a] * &yb[b];
                for c in 0..n {
                    if z[c].is_zero() {
                        continue;
                    }
                    let xyz = &xy * &z[c];
                    for d in 0..n {
                        let s = self.get(a, b, c, d);
                        if s.is_zero() || wb[d].is_zero() {
                            continue;
                        }
                        acc += &(&(&xyz * &wb[d]) * s);
                    }
                }
            }
        }
        Ok(acc)
    }

    /// `s(v) = S(v, v, v, v)`, real.
    pub fn value_at(&self, v: &[CRational]) -> Result<num_rational::BigRational> {
        Ok(self.evaluate(v, v, v, v)?.re)
    }

    /// `C_{γδ̄} = Σ g^{β̄α} s_{αβ̄γδ̄}`; also confirms `Δ_g s = 4·Σ C z_γ z̄_δ`.
    pub fn contract_trace(&self, g: &HermitianMatrix) -> Result<CMatrix> {
        let n = self.sig.n();
        let ginv = g.inverse()?;
        let mut out = CMatrix::zeros(n, n);
        for c in 0..n {
            for d in 0..n {
                let mut acc = CRational::zero();
                for a in 0..n {
                    for b in 0..n {
                        let h = ginv.entry(b, a);
                        if !h.is_zero() {
                            acc += &(h * self.get(a, b, c, d));
                        }
                    }
                }
                out[(c, d)] = acc;
            }
        }
        let lhs = g_laplacian(&self.quartic(), &ginv, n);
        let mut rhs = Poly::zero(real_weights(n));
        for c in 0..n {
            for d in 0..n {
                let mut e = vec![0u16; 2 * n + 1];
                e[c] += 1;
                e[n + d] += 1;
                rhs.add_term(e, out[(c, d)].scale(&crate::polycore::rat(4, 1)));
            }
        }
        if lhs != rhs {
            return Err(Error::Internal("trace contraction disagrees with the Laplacian".into()));
        }
        Ok(out)
    }

    /// Violations of the index symmetries, reality and trace-freeness with
    /// respect to the model metric; empty when all hold.
    pub fn check_invariants(&self) -> Vec<String> {
        let n = self.sig.n();
        let mut bad = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let s = self.get(a, b, c, d);
                        if s != self.get(c, b, a, d) {
                            bad.push(format!("s[{a}{b}{c}{d}] != s[{c}{b}{a}{d}]"));
                        }
                        if s != self.get(c, d, a, b) {
                            bad.push(format!("s[{a}{b}{c}{d}] != s[{c}{d}{a}{b}]"));
                        }
                        if s.conj() != *self.get(b, a, d, c) {
                            bad.push(format!("conj s[{a}{b}{c}{d}] != s[{b}{a}{d}{c}]"));
                        }
                    }
                }
            }
        }
        match self.contract_trace(&self.sig.g0()) {
            Ok(tr) => {
                for c in 0..n {
                    for d in 0..n {
                        if !tr[(c, d)].is_zero() {
                            bad.push(format!("trace[{c}{d}] = {}", tr[(c, d)]));
                        }
                    }
                }
            }
            Err(e) => bad.push(e.to_string()),
        }
        bad
    }

    pub fn is_zero(&self) -> bool {
        self.s.iter().all(CRational::is_zero)
    }

    pub fn scale(&self, k: &CRational) -> CMWTensor {
        CMWTensor { sig: self.sig, s: self.s.iter().map(|x| x * k).collect() }
    }

    /// `s_{abcd} = λ² Σ s̃_{klmn} U_{ak} Ū_{bl} U_{cm} Ū_{dn}`: the tensor
    /// whose quartic is `λ⁻² s̃(λzU)`.
    pub fn transform_frame(&self, lambda: &num_rational::BigRational, u: &CMatrix) -> Result<CMWTensor> {
        if !is_pseudo_unitary(u, &self.sig) {
            return Err(Error::NotPseudoUnitary);
        }
        use num_traits::Signed;
        if !lambda.is_positive() {
            return Err(Error::Parameter("λ must be positive".into()));
        }
        let cur = self.change_basis(u)?;
        let l2 = CRational::real(lambda * lambda);
        Ok(cur.scale(&l2))
    }

    /// `Σ s_{klmn} A_{ak} Ā_{bl} A_{cm} Ā_{dn}` for an arbitrary square `A`:
    /// the tensor of the quartic `s(zA)`.
    pub fn change_basis(&self, a: &CMatrix) -> Result<CMWTensor> {
        let n = self.sig.n();
        if a.rows() != n || a.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.rows() });
        }
        let abar = a.conj();
        // contract one index at a time
        let mut cur = self.s.clone();
        for slot in 0..4 {
            let m = if slot % 2 == 0 { a } else { &abar };
            let mut next = vec![CRational::zero(); cur.len()];
            for i0 in 0..n {
                for i1 in 0..n {
                    for i2 in 0..n {
                        for i3 in 0..n {
                            let mut idx = [i0, i1, i2, i3];
                            let out_i = ((i0 * n + i1) * n + i2) * n + i3;
                            let row = idx[slot];
                            let mut acc = CRational::zero();
                            for k in 0..n {
                                let coeff = &m[(row, k)];
                                if coeff.is_zero() {
                                    continue;
                                }
                                idx[slot] = k;
                                let src = &cur[((idx[0] * n + idx[1]) * n + idx[2]) * n + idx[3]];
                                if !src.is_zero() {
                                    acc += &(coeff * src);
                                }
                            }
                            next[out_i] = acc;
                        }
                    }
                }
            }
            cur = next;
        }
        Ok(CMWTensor { sig: self.sig, s: cur })
    }

    pub fn to_json(&self) -> Value {
        let n = self.sig.n();
        let mut entries = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let s = self.get(a, b, c, d);
                        if !s.is_zero() {
                            entries.push(json!({ "index": [a + 1, b + 1, c + 1, d + 1], "re": s.re.to_string(), "im": s.im.to_string() }));
                        }
                    }
                }
            }
        }
        json!({ "n": n, "l": self.sig.l(), "entries": entries })
    }
}

/// `Σ g^{β̄α} ∂_α ∂̄_β`
fn g_laplacian(p: &RealPoly, ginv: &HermitianMatrix, n: usize) -> Poly {
    let mut out = Poly::zero(real_weights(n));
    for a in 0..n {
        for b in 0..n {
            let h = ginv.entry(b, a);
            if h.is_zero() {
                continue;
            }
            out.add_assign(&p.poly().derivative(a).derivative(n + b).scale(h));
        }
    }
    out
}

/// `U G₀ U* = G₀`, i.e. `⟨zU, wU⟩_ℓ = ⟨z, w⟩_ℓ`.
pub fn is_pseudo_unitary(u: &CMatrix, sig: &Signature) -> bool {
    let n = sig.n();
    if u.rows() != n || u.cols() != n {
        return false;
    }
    let g = sig.g0();
    let lhs = u.mul(g.matrix()).and_then(|x| x.mul(&u.adjoint()));
    lhs.is_ok_and(|m| m == *g.matrix())
}

/// Cayley transform `(I + K)⁻¹(I − K)` with `K = S·G₀` for a skew-Hermitian
/// `S`.
pub fn cayley_pseudo_unitary(sig: &Signature, s: &CMatrix) -> Result<CMatrix> {
    if s.add(&s.adjoint()) != CMatrix::zeros(s.rows(), s.cols()) {
        return Err(Error::Shape { what: "a skew-Hermitian matrix".into() });
    }
    CMatrix::cayley(&s.mul(sig.g0().matrix())?)
}

/// A seeded random exact element of `U(n, ℓ)`.
pub fn generate_pseudo_unitary(sig: &Signature, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g: Vec<i64> = (0..sig.n()).map(|j| sig.delta(j)).collect();
    crate::hermitian::random_pseudo_unitary(&mut rng, &g)
}
