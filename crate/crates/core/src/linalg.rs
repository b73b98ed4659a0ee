//! Dense exact matrices over complex rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::polycore::CRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<CRational>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![CRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = CRational::one();
        }
        m
    }

    pub fn diagonal(d: &[CRational]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: row.len() });
            }
            data.extend(row);
        }
        Ok(CMatrix { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[CRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, o: &CMatrix) -> Result<CMatrix> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: o.rows });
        }
        let mut out = CMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, k: &CRational) -> CMatrix {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn transpose(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(CRational::conj).collect() }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        self.transpose().conj()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (CMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let d = &f * &m[(r, j)];
                    m[(i, j)] -= &d;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// One solution of `self · x = b`, with free variables set to zero.
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &[CRational]) -> Option<Vec<CRational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = CMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![CRational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        let mut aug = CMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = CRational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(out)
    }

    /// Basis of the right kernel.
    pub fn nullspace(&self) -> Vec<Vec<CRational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![CRational::zero(); self.cols];
                v[f] = CRational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(i, f)];
                }
                v
            })
            .collect()
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }

    /// Cayley transform `(I + K)⁻¹(I − K)`.
    ///
    /// With `K = S·G`, `S` skew-Hermitian and `G = diag(±1)`, the result
    /// satisfies `U G U* = G`.
    pub fn cayley(k: &CMatrix) -> Result<CMatrix> {
        let id = CMatrix::identity(k.rows);
        id.add(k).inverse()?.mul(&id.sub(k))
    }
}

const RANK_PRIME: u64 = 2_147_483_647; // 2³¹ − 1 ≡ 3 (mod 4): i² = −1 has no root, so F_p[i] is a field

fn mod_p(x: &BigRational) -> Option<u64> {
    let p = BigInt::from(RANK_PRIME);
    let num = x.numer().mod_floor(&p).to_u64()?;
    let den = x.denom().mod_floor(&p).to_u64()?;
    if den == 0 {
        return None;
    }
    Some(num * pow_mod(den, RANK_PRIME - 2) % RANK_PRIME)
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    b %= RANK_PRIME;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    acc
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % RANK_PRIME as u128) as u64
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct Gf2(u64, u64);

impl Gf2 {
    fn is_zero(self) -> bool {
        self.0 == 0 && self.1 == 0
    }
    fn mul(self, o: Gf2) -> Gf2 {
        let p = RANK_PRIME;
        let re = (mul_mod(self.0, o.0) + p - mul_mod(self.1, o.1)) % p;
        let im = (mul_mod(self.0, o.1) + mul_mod(self.1, o.0)) % p;
        Gf2(re, im)
    }
    fn sub(self, o: Gf2) -> Gf2 {
        let p = RANK_PRIME;
        Gf2((self.0 + p - o.0) % p, (self.1 + p - o.1) % p)
    }
    fn inv(self) -> Gf2 {
        let p = RANK_PRIME;
        let n = (mul_mod(self.0, self.0) + mul_mod(self.1, self.1)) % p;
        let ni = pow_mod(n, p - 2);
        Gf2(mul_mod(self.0, ni), mul_mod((p - self.1) % p, ni))
    }
}

impl CMatrix {
    /// Rank over `F_p[i]` for a fixed prime `p ≡ 3 (mod 4)`; `None` if some
    /// denominator vanishes mod `p`. This is a lower bound for the rank over
    /// `ℚ(i)`, so reaching the column count certifies full column rank.
    pub fn rank_mod_p(&self) -> Option<usize> {
        let mut m: Vec<Vec<Gf2>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row = self.row(i).iter().map(|c| Some(Gf2(mod_p(&c.re)?, mod_p(&c.im)?))).collect::<Option<Vec<_>>>()?;
            m.push(row);
        }
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(rank, p);
            let inv = m[rank][c].inv();
            let pivot_row: Vec<Gf2> = m[rank].iter().map(|x| x.mul(inv)).collect();
            for row in m.iter_mut().skip(rank + 1) {
                let f = row[c];
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    row[j] = row[j].sub(f.mul(pivot_row[j]));
                }
            }
            m[rank] = pivot_row;
            rank += 1;
        }
        Some(rank)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = CRational;
    fn index(&self, (i, j): (usize, usize)) -> &CRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut CRational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
