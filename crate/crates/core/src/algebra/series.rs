use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{int, Rational};
use crate::error::{Error, Result};

/// Truncated power series `c_0 + c_1 z + ... + c_N z^N`; everything above `N` is discarded.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    /// Coefficients beyond `order` are dropped, missing ones are zero.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        Series { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        Series { coeffs: (0..=order).map(f).collect() }
    }

    /// The series `c z^k`.
    pub fn monomial(c: Rational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff_ref(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, c: Rational) {
        if k <= self.order() {
            self.coeffs[k] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Series::new(self.coeffs.clone(), order)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Series { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiply by `z^k`, keeping the truncation order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        Series::from_fn(n, |i| if i >= k { self.coeffs[i - k].clone() } else { Rational::zero() })
    }

    /// `f(c z)`.
    pub fn rescale_var(&self, c: &Rational) -> Self {
        let mut p = Rational::one();
        let mut out = self.clone();
        for x in out.coeffs.iter_mut() {
            *x *= &p;
            p *= c;
        }
        out
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.order(), other.order()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self * other)
    }

    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = c0.recip();
        let n = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out.push(-acc * &inv0);
        }
        Ok(Series { coeffs: out })
    }

    /// Split `f(z) = E(z) + O(z)` with `E` even and `O` odd.
    pub fn even_odd(&self) -> (Self, Self) {
        let n = self.order();
        let pick = |parity: usize| {
            Series::from_fn(n, |k| if k % 2 == parity { self.coeffs[k].clone() } else { Rational::zero() })
        };
        (pick(0), pick(1))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Series::one(self.order());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `exp(f)` for `f` with vanishing constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Unsupported("exp of a series with nonzero constant term".into()));
        }
        let n = self.order();
        let mut out = vec![Rational::one()];
        for m in 1..=n {
            let mut acc = Rational::zero();
            for k in 1..=m {
                acc += int(k as i64) * &self.coeffs[k] * &out[m - k];
            }
            out.push(acc / int(m as i64));
        }
        Ok(Series { coeffs: out })
    }

    /// `log(f)` for `f` with constant term one.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Unsupported("log of a series with constant term other than 1".into()));
        }
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        for m in 1..=n {
            let mut acc = int(m as i64) * &self.coeffs[m];
            for k in 1..m {
                acc -= int(k as i64) * &out[k] * &self.coeffs[m - k];
            }
            out[m] = acc / int(m as i64);
        }
        Ok(Series { coeffs: out })
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * z + super::rational::to_f64(c))
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        Series::from_fn(n, |k| &self.coeffs[k] + &other.coeffs[k])
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        Series::from_fn(n, |k| &self.coeffs[k] - &other.coeffs[k])
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Series { coeffs: out }
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn s(v: &[i64], n: usize) -> Series {
        Series::new(v.iter().map(|&x| int(x)).collect(), n)
    }

    #[test]
    fn geometric_inverse() {
        let f = s(&[1, -1], 6);
        assert_eq!(f.inverse().unwrap(), s(&[1, 1, 1, 1, 1, 1, 1], 6));
        assert_eq!(s(&[0, 1], 3).inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn exp_log_roundtrip() {
        let f = Series::from_fn(8, |k| if k == 0 { int(0) } else { rat(1, k as i64 + 1) });
        let e = f.exp().unwrap();
        assert_eq!(e.log().unwrap(), f);
        // exp(z) coefficients are 1/k!
        let z = s(&[0, 1], 5);
        assert_eq!(z.exp().unwrap().coeff(4), rat(1, 24));
    }

    #[test]
    fn order_mismatch_is_an_error() {
        assert_eq!(s(&[1], 2).try_mul(&s(&[1], 3)), Err(Error::OrderMismatch(2, 3)));
    }

    #[test]
    fn even_odd_split() {
        let (e, o) = s(&[1, 2, 3, 4], 3).even_odd();
        assert_eq!(e, s(&[1, 0, 3, 0], 3));
        assert_eq!(o, s(&[0, 2, 0, 4], 3));
    }
}
