use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::CMWTensor;
use crate::error::{Error, Result};
use crate::hermitian::{bidegree_monomials, harmonic_22_dimension, laplacian_raw, null_cone_samples, Signature};
use crate::linalg::CMatrix;
use crate::polycore::json::crational_json;
use crate::polycore::{real_weights, CRational, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Obstructed,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Obstructed => "obstructed",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub v: Vec<CRational>,
    pub value: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub samples: usize,
    pub seed: u64,
}

impl ObstructionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.as_str(),
            "witnesses": self.witnesses.iter().map(|w| json!({
                "v": w.v.iter().map(crational_json).collect::<Vec<_>>(),
                "value": w.value.to_string(),
            })).collect::<Vec<_>>(),
            "samples": self.samples,
            "seed": self.seed,
        })
    }
}

/// Sign test of `S(v, v̄, v, v̄)` on exact null-cone samples.
///
/// For `ℓ < n/2` a strictly positive value is an exact obstruction. For
/// `ℓ = n/2` the sign convention is ambiguous, so the verdict is
/// "obstructed" only when both a positive and a negative value occur.
/// "consistent" means no violation among the samples, not a proof.
pub fn null_cone_definiteness(s: &CMWTensor, sig: &Signature, m: usize, seed: u64) -> Result<ObstructionReport> {
    if s.sig() != sig {
        return Err(Error::DimensionMismatch { expected: sig.n(), got: s.sig().n() });
    }
    let samples = null_cone_samples(sig, m, seed)?;
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for v in samples {
        let value = s.value_at(v.as_slice())?;
        if value.is_positive() {
            pos.push(Witness { v: v.into_vec(), value });
        } else if value.is_negative() {
            neg.push(Witness { v: v.into_vec(), value });
        }
    }
    let balanced = 2 * sig.l() == sig.n();
    let (verdict, witnesses) = if balanced {
        if !pos.is_empty() && !neg.is_empty() {
            pos.extend(neg);
            (Verdict::Obstructed, pos)
        } else if pos.is_empty() && neg.is_empty() && !s.is_zero() {
            (Verdict::Inconclusive, Vec::new())
        } else {
            (Verdict::Consistent, Vec::new())
        }
    } else if !pos.is_empty() {
        (Verdict::Obstructed, pos)
    } else if neg.is_empty() && !s.is_zero() {
        (Verdict::Inconclusive, Vec::new())
    } else {
        (Verdict::Consistent, Vec::new())
    };
    Ok(ObstructionReport { verdict, witnesses, samples: m, seed })
}

/// Rank of the null-sample evaluation functionals restricted to the
/// Δ_ℓ-harmonic (2,2) forms, together with that space's dimension.
///
/// The rank is first computed over `F_p[i]`, a lower bound for the rank
/// over `ℚ(i)`; only if that falls short is the exact elimination run.
pub fn null_sample_rank(sig: &Signature, m: usize, seed: u64) -> Result<(usize, usize)> {
    let n = sig.n();
    let basis = bidegree_monomials(n, 2, 2);
    let rows11 = bidegree_monomials(n, 1, 1);
    let rw = real_weights(n);
    let key = |a: &[u16], b: &[u16]| {
        let mut e = a.to_vec();
        e.extend_from_slice(b);
        e.push(0);
        e
    };
    let mut lap = CMatrix::zeros(rows11.len(), basis.len());
    for (col, (a, b)) in basis.iter().enumerate() {
        let mut mono = Poly::zero(rw.clone());
        mono.add_term(key(a, b), CRational::one());
        let img = laplacian_raw(&mono, sig);
        for (row, (ra, rb)) in rows11.iter().enumerate() {
            lap[(row, col)] = img.coeff(&key(ra, rb));
        }
    }
    let lap_rank = lap.rank();
    let samples = null_cone_samples(sig, m, seed)?;
    let mut rows: Vec<Vec<CRational>> = Vec::with_capacity(samples.len() + rows11.len());
    for v in &samples {
        let v = v.as_slice();
        let vb: Vec<CRational> = v.iter().map(CRational::conj).collect();
        rows.push(
            basis
                .iter()
                .map(|(a, b)| {
                    let mut acc = CRational::one();
                    for j in 0..n {
                        acc = &(&acc * &v[j].pow(a[j] as u32)) * &vb[j].pow(b[j] as u32);
                    }
                    acc
                })
                .collect(),
        );
    }
    for r in 0..rows11.len() {
        rows.push(lap.row(r).to_vec());
    }
    let stacked = CMatrix::from_rows(rows)?;
    let dim = harmonic_22_dimension(n);
    let full = basis.len();
    let rank = match stacked.rank_mod_p() {
        Some(r) if r == full => r,
        _ => stacked.rank(),
    };
    Ok((rank - lap_rank, dim))
}

/// Decides `S ≡ 0` from null-cone values alone (exact). Enlarges the
/// sample set until the evaluation functionals span the trace-free space.
pub fn null_cone_zero_test(s: &CMWTensor, sig: &Signature) -> Result<bool> {
    if sig.l() == 0 {
        return Err(Error::EmptyNullCone);
    }
    if !s.check_invariants().is_empty() {
        return Err(Error::Parameter("tensor is not a trace-free CMW tensor".into()));
    }
    let dim = harmonic_22_dimension(sig.n());
    let mut m = 2 * dim;
    let mut last = 0;
    for _ in 0..4 {
        let (rank, needed) = null_sample_rank(sig, m, 0)?;
        last = rank;
        if rank == needed {
            let samples = null_cone_samples(sig, m, 0)?;
            for v in samples {
                if !s.value_at(v.as_slice())?.is_zero() {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        m *= 2;
    }
    Err(Error::RankDeficient { rank: last, needed: dim })
}
