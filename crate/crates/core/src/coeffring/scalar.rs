//! Gaussian rationals `a + b i` with `a, b` exact big rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Scalar::int(1)
    }

    pub fn i() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn int(n: i64) -> Self {
        Scalar { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator in Scalar::ratio");
        Scalar {
            re: BigRational::new(BigInt::from(n), BigInt::from(d)),
            im: BigRational::zero(),
        }
    }

    pub fn real(re: BigRational) -> Self {
        Scalar { re, im: BigRational::zero() }
    }

    pub fn complex(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.im.is_zero() && self.re.is_one()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if self.im.is_zero() {
            return Ok(Scalar::real(self.re.recip()));
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Ok(Scalar { re: &self.re / &norm, im: -(&self.im / &norm) })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Sign used to decide whether a printed term gets a leading minus.
    pub(crate) fn is_negative_lead(&self) -> bool {
        if self.re.is_zero() {
            self.im.is_negative()
        } else {
            self.re.is_negative() && self.im.is_zero()
        }
    }
}

fn fmt_rat(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    /// Grammar-compatible form: `3/2`, `-i`, `2*i`, `(1/2+3*i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_rat(&self.re, f),
            (true, false) => {
                if self.im.is_one() {
                    f.write_str("i")
                } else if (-&self.im).is_one() {
                    f.write_str("-i")
                } else {
                    fmt_rat(&self.im, f)?;
                    f.write_str("*i")
                }
            }
            (false, false) => {
                f.write_str("(")?;
                fmt_rat(&self.re, f)?;
                if self.im.is_negative() {
                    f.write_str("-")?;
                    let a = -&self.im;
                    if !a.is_one() {
                        fmt_rat(&a, f)?;
                        f.write_str("*")?;
                    }
                } else {
                    f.write_str("+")?;
                    if !self.im.is_one() {
                        fmt_rat(&self.im, f)?;
                        f.write_str("*")?;
                    }
                }
                f.write_str("i)")
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::real(q)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar::real(&self.re * &o.re);
        }
        Scalar {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero scalar")
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -&self.re, im: -&self.im }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.re += &o.re;
        if !o.im.is_zero() {
            self.im += &o.im;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.re -= &o.re;
        if !o.im.is_zero() {
            self.im -= &o.im;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = Scalar::i();
        assert_eq!(&i * &i, Scalar::int(-1));
    }

    #[test]
    fn inverse_of_gaussian() {
        let z = Scalar::complex(BigRational::from_integer(1.into()), BigRational::from_integer(2.into()));
        let w = z.inv().unwrap();
        assert!((&z * &w).is_one());
        assert_eq!(Scalar::zero().inv(), Err(Error::ZeroDenominator));
    }

    #[test]
    fn canonical_zero_and_reduced_fractions() {
        let a = Scalar::ratio(2, 4);
        assert_eq!(a, Scalar::ratio(1, 2));
        assert_eq!(*a.re.denom(), BigInt::from(2));
        let z = &a - &a;
        assert_eq!(*z.re.denom(), BigInt::from(1));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::ratio(-3, 2).to_string(), "-3/2");
        assert_eq!(Scalar::i().to_string(), "i");
        assert_eq!((-Scalar::i()).to_string(), "-i");
        let z = Scalar::complex(BigRational::new(1.into(), 2.into()), BigRational::from_integer((-3).into()));
        assert_eq!(z.to_string(), "(1/2-3*i)");
    }
}
