use nalgebra::{Complex, DMatrix};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypersurfaces::AlgebraicHypersurface;
use crate::polycore::Poly;

/// Relative tolerance for counting zero eigenvalues.
pub const LEVI_TOL: f64 = 1e-9;

/// The Levi form at a point in an orthonormal basis of `T^{1,0}`.
#[derive(Clone, Debug, Serialize)]
pub struct LeviReport {
    pub matrix: Vec<Vec<(f64, f64)>>,
    pub eigenvalues: Vec<f64>,
    pub negative: usize,
    pub positive: usize,
    pub zero: usize,
}

impl LeviReport {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn eval(p: &Poly, nv: usize, z: &[Complex<f64>]) -> Complex<f64> {
    crate::polycore::eval_raw_f64(nv, p, z, 0.0)
}

/// Complex Hessian `∂²ρ/∂ζ_j∂ζ̄_k` restricted to the complex tangent space
/// at `p`, with inertia counted in floating point.
pub fn levi_form(m: &AlgebraicHypersurface, p: &[Complex<f64>]) -> Result<LeviReport> {
    let nv = m.n() + 1;
    if p.len() != nv {
        return Err(Error::DimensionMismatch { expected: nv, got: p.len() });
    }
    let rho = m.rho().poly();
    let grad: Vec<Complex<f64>> = (0..nv).map(|j| eval(&rho.derivative(j), nv, p)).collect();
    let gnorm = grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
    if !(gnorm > 1e-12) {
        return Err(Error::SingularPoint);
    }
    let hess = DMatrix::from_fn(nv, nv, |j, k| eval(&rho.derivative(j).derivative(nv + k), nv, p));

    // T^{1,0} = { X : Σ X_j ∂_jρ = 0 } = orthogonal complement of conj(∂ρ).
    let normal: Vec<Complex<f64>> = grad.iter().map(|g| g.conj() / gnorm).collect();
    let mut basis: Vec<Vec<Complex<f64>>> = Vec::with_capacity(nv - 1);
    let dot = |a: &[Complex<f64>], b: &[Complex<f64>]| -> Complex<f64> { a.iter().zip(b).map(|(x, y)| x * y.conj()).sum() };
    let mut cands: Vec<usize> = (0..nv).collect();
    cands.sort_by(|&a, &b| normal[a].norm().partial_cmp(&normal[b].norm()).unwrap());
    for &e in &cands {
        let mut v = vec![Complex::new(0.0, 0.0); nv];
        v[e] = Complex::new(1.0, 0.0);
        for q in std::iter::once(&normal).chain(basis.iter()) {
            let c = dot(&v, q);
            for (x, y) in v.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
        let norm = dot(&v, &v).re.sqrt();
        if norm > 1e-8 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
        if basis.len() == nv - 1 {
            break;
        }
    }
    let dim = basis.len();
    let lm = DMatrix::from_fn(dim, dim, |a, b| {
        let mut acc = Complex::new(0.0, 0.0);
        for j in 0..nv {
            for k in 0..nv {
                acc += basis[a][j] * hess[(j, k)] * basis[b][k].conj();
            }
        }
        acc
    });
    let lm = (&lm + lm.adjoint()).scale(0.5);
    let eig = lm.clone().symmetric_eigen();
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let scale = eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let tol = LEVI_TOL * scale.max(f64::MIN_POSITIVE);
    let negative = eigenvalues.iter().filter(|&&x| x < -tol).count();
    let positive = eigenvalues.iter().filter(|&&x| x > tol).count();
    let zero = dim - negative - positive;
    let matrix = (0..dim).map(|a| (0..dim).map(|b| (lm[(a, b)].re, lm[(a, b)].im)).collect()).collect();
    Ok(LeviReport { matrix, eigenvalues, negative, positive, zero })
}
