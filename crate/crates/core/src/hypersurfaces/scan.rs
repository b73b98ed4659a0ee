use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::AlgebraicHypersurface;
use crate::error::{Error, Result};
use crate::hermitian::levi_form;

const BRACKET_DOUBLINGS: usize = 64;
const BISECTIONS: usize = 200;

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub requested: usize,
    pub samples: usize,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub negative_samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl ScanReport {
    pub fn strongly_pseudoconvex(&self) -> bool {
        self.samples > 0 && self.min_eigenvalue > self.tol
    }
}

/// Samples `m` points of `{ρ = 0}` along random real rays from the origin
/// (which must satisfy `ρ(0) < 0`) and records the Levi eigenvalues there.
/// Rays that never leave `{ρ < 0}` are skipped.
pub fn pseudoconvexity_scan(h: &AlgebraicHypersurface, m: usize, tol: f64, seed: u64) -> Result<ScanReport> {
    let nv = h.n() + 1;
    let rho = h.rho();
    let at = |x: &[Complex<f64>]| rho.eval_f64(x, 0.0).re;
    let origin = vec![Complex::new(0.0, 0.0); nv];
    if !(at(&origin) < 0.0) {
        return Err(Error::Parameter("the scan starts from the origin, which must satisfy ρ < 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report =
        ScanReport { requested: m, samples: 0, min_eigenvalue: f64::INFINITY, max_eigenvalue: f64::NEG_INFINITY, negative_samples: 0, tol, seed };
    let point = |d: &[Complex<f64>], s: f64| -> Vec<Complex<f64>> { d.iter().map(|x| x * s).collect() };
    for _ in 0..m {
        let d = loop {
            let v: Vec<Complex<f64>> = (0..nv).map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-3 && norm <= 1.0 {
                break v.into_iter().map(|x| x / norm).collect::<Vec<_>>();
            }
        };
        let mut hi = 1.0;
        let mut found = false;
        for _ in 0..BRACKET_DOUBLINGS {
            if at(&point(&d, hi)) > 0.0 {
                found = true;
                break;
            }
            hi *= 2.0;
        }
        if !found {
            continue;
        }
        let mut lo = 0.0;
        for _ in 0..BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if at(&point(&d, mid)) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        let p = point(&d, 0.5 * (lo + hi));
        let levi = levi_form(h, &p)?;
        let lo_ev = levi.min_eigenvalue();
        report.samples += 1;
        report.min_eigenvalue = report.min_eigenvalue.min(lo_ev);
        report.max_eigenvalue = report.max_eigenvalue.max(levi.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        if lo_ev < -tol {
            report.negative_samples += 1;
        }
    }
    if report.samples == 0 {
        return Err(Error::Sampling);
    }
    Ok(report)
}
