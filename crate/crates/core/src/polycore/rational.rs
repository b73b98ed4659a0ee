//! Exact complex rationals `re + i·im` over `BigRational`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CRational {
    pub re: BigRational,
    pub im: BigRational,
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"-0.125"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad rational '{s}'")));
        }
        let digits = format!("{whole}{frac}");
        let num = BigInt::from_str(&digits).map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(num, den));
    }
    BigRational::from_str(s).map_err(|_| Error::Parse(format!("bad rational '{s}'")))
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl CRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CRational { re, im }
    }

    pub fn zero() -> Self {
        CRational { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Self::real(BigRational::one())
    }

    pub fn i() -> Self {
        CRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn real(re: BigRational) -> Self {
        CRational { re, im: BigRational::zero() }
    }

    pub fn from_int(v: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(v)))
    }

    /// `(a/b) + i(c/d)`
    pub fn from_ratios(a: i64, b: i64, c: i64, d: i64) -> Self {
        CRational { re: rat(a, b), im: rat(c, d) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|x|²`, always a non-negative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        CRational { re: &self.re * k, im: &self.im * k }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        CRational { re: -self.im.clone(), im: self.re.clone() }
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(CRational { re: &self.re / &n, im: -&self.im / &n })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// Exact dyadic conversion of a finite float pair.
    pub fn from_f64_pair(re: f64, im: f64) -> Option<Self> {
        Some(CRational { re: BigRational::from_float(re)?, im: BigRational::from_float(im)? })
    }

    pub fn parse(re: &str, im: &str) -> Result<Self> {
        Ok(CRational { re: parse_rational(re)?, im: parse_rational(im)? })
    }
}

impl fmt::Display for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, -self.im.clone())
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl From<BigRational> for CRational {
    fn from(re: BigRational) -> Self {
        CRational::real(re)
    }
}

impl From<i64> for CRational {
    fn from(v: i64) -> Self {
        CRational::from_int(v)
    }
}

impl<'a> Add<&'a CRational> for &'a CRational {
    type Output = CRational;
    fn add(self, o: &CRational) -> CRational {
        CRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a CRational> for &'a CRational {
    type Output = CRational;
    fn sub(self, o: &CRational) -> CRational {
        CRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a CRational> for &'a CRational {
    type Output = CRational;
    fn mul(self, o: &CRational) -> CRational {
        if self.im.is_zero() && o.im.is_zero() {
            return CRational::real(&self.re * &o.re);
        }
        CRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a CRational> for &'a CRational {
    type Output = CRational;
    fn div(self, o: &CRational) -> CRational {
        self * &o.inv().expect("division by zero")
    }
}

impl Add for CRational {
    type Output = CRational;
    fn add(self, o: CRational) -> CRational {
        &self + &o
    }
}

impl Sub for CRational {
    type Output = CRational;
    fn sub(self, o: CRational) -> CRational {
        &self - &o
    }
}

impl Mul for CRational {
    type Output = CRational;
    fn mul(self, o: CRational) -> CRational {
        &self * &o
    }
}

impl Div for CRational {
    type Output = CRational;
    fn div(self, o: CRational) -> CRational {
        &self / &o
    }
}

impl Neg for CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        CRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        CRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&CRational> for CRational {
    fn add_assign(&mut self, o: &CRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&CRational> for CRational {
    fn sub_assign(&mut self, o: &CRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&CRational> for CRational {
    fn mul_assign(&mut self, o: &CRational) {
        *self = &*self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7, 1));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert!(parse_rational("1/0x").is_err());
    }

    #[test]
    fn field_ops() {
        let a = CRational::from_ratios(1, 2, -3, 4);
        let b = CRational::from_ratios(2, 1, 1, 3);
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(a.conj().conj(), a);
        assert_eq!((&a * &a.conj()).im, BigRational::zero());
        assert_eq!(CRational::i().mul_i(), CRational::from_int(-1));
    }
}
