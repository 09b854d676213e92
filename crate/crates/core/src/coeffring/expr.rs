//! Reduced rational functions `num / den` over Q(i).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::gcd::{cofactors, gcd};
use super::poly::MultiPoly;
use super::scalar::Scalar;
use super::var::Var;
use crate::error::{Error, Result};

/// A rational function with `gcd(num, den) = 1` and monic `den`.
///
/// This is the coefficient type of every operator. Polynomial values carry
/// `den = 1` and never touch the gcd machinery.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

pub type Expr = RationalFunction;

impl Default for RationalFunction {
    fn default() -> Self {
        RationalFunction::zero()
    }
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction { num: MultiPoly::zero(), den: MultiPoly::one() }
    }

    pub fn one() -> Self {
        RationalFunction { num: MultiPoly::one(), den: MultiPoly::one() }
    }

    pub fn int(n: i64) -> Self {
        Self::poly(MultiPoly::int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(Scalar::ratio(n, d))
    }

    pub fn constant(c: Scalar) -> Self {
        Self::poly(MultiPoly::constant(c))
    }

    pub fn i() -> Self {
        Self::constant(Scalar::i())
    }

    pub fn var(v: Var) -> Self {
        Self::poly(MultiPoly::var(v))
    }

    pub fn poly(p: MultiPoly) -> Self {
        RationalFunction { num: p, den: MultiPoly::one() }
    }

    /// Builds and normalizes `num / den`.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.constant_value() {
            let inv = c.inv().expect("nonzero denominator");
            return RationalFunction { num: num.scale(&inv), den: MultiPoly::one() };
        }
        let (_, n, d) = cofactors(&num, &den);
        Self::with_monic_den(n, d)
    }

    fn with_monic_den(num: MultiPoly, den: MultiPoly) -> Self {
        let lc = den.leading().expect("nonzero").1.clone();
        if lc.is_one() {
            return RationalFunction { num, den };
        }
        let inv = lc.inv().expect("nonzero");
        RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
    }

    /// Assembles an already-reduced pair; used by the adjunct reducer.
    pub(crate) fn from_reduced(num: MultiPoly, den: MultiPoly) -> Self {
        Self::normalized(num, den)
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_real(&self) -> bool {
        self.num.is_real() && self.den.is_real()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.num.contains(v) || self.den.contains(v)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs = self.num.variables();
        for v in self.den.variables() {
            if !vs.contains(&v) {
                vs.push(v);
            }
        }
        vs.sort();
        vs
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let e = e as u32;
        Ok(RationalFunction { num: self.num.pow(e), den: self.den.pow(e) })
    }

    /// Formal partial derivative treating every symbol as independent.
    pub fn diff(&self, v: Var) -> Self {
        if self.den.is_one() {
            return Self::poly(self.num.diff(v));
        }
        let dn = self.num.diff(v);
        let dd = self.den.diff(v);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        // (n' d - n d') / d^2, cancel one power of d first
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::normalized(num, &self.den * &self.den)
    }

    /// Simultaneous substitution of symbols by rational functions.
    pub fn substitute(&self, bindings: &[(Var, Expr)]) -> Result<Self> {
        if bindings.iter().all(|(_, e)| e.is_poly()) {
            let pb: Vec<(Var, MultiPoly)> = bindings.iter().map(|(v, e)| (*v, e.num.clone())).collect();
            return Self::new(self.num.substitute(&pb), self.den.substitute(&pb));
        }
        let n = subst_poly(&self.num, bindings)?;
        let d = subst_poly(&self.den, bindings)?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        n.checked_div(&d)
    }

    pub fn real_part(&self) -> Self {
        if self.den.is_real() {
            Self::normalized(self.num.real_part(), self.den.clone())
        } else {
            let n = &self.num * &self.den.conj();
            let d = &self.den * &self.den.conj();
            Self::normalized(n.real_part(), d.real_part())
        }
    }

    pub fn imag_part(&self) -> Self {
        if self.den.is_real() {
            Self::normalized(self.num.imag_part(), self.den.clone())
        } else {
            let n = &self.num * &self.den.conj();
            let d = &self.den * &self.den.conj();
            Self::normalized(n.imag_part(), d.real_part())
        }
    }

    /// Sum of many terms with a shared-denominator fast path.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Expr>) -> Expr {
        let mut acc_poly = super::poly::Accumulator::new();
        let mut rest: Option<Expr> = None;
        for e in items {
            if e.den.is_one() {
                acc_poly.add_poly(&e.num);
            } else {
                rest = Some(match rest {
                    None => e.clone(),
                    Some(r) => &r + e,
                });
            }
        }
        let p = Expr::poly(acc_poly.finish());
        match rest {
            None => p,
            Some(r) => &p + &r,
        }
    }
}

fn subst_poly(p: &MultiPoly, bindings: &[(Var, Expr)]) -> Result<Expr> {
    let mut total = Expr::zero();
    for (m, c) in p.terms() {
        let mut rest = *m;
        let mut factor = Expr::constant(c.clone());
        for (v, val) in bindings {
            let e = m.exp(*v);
            if e > 0 {
                rest = rest.with_exp(*v, 0);
                factor = &factor * &val.pow(e as i32)?;
            }
        }
        factor = &factor * &Expr::poly(MultiPoly::term(rest, Scalar::one()));
        total = &total + &factor;
    }
    Ok(total)
}

impl<'a> Add<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn add(self, o: &Expr) -> Expr {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return Expr::poly(&self.num + &o.num);
            }
            return Expr::normalized(&self.num + &o.num, self.den.clone());
        }
        if self.den.is_one() {
            return Expr { num: &(&self.num * &o.den) + &o.num, den: o.den.clone() };
        }
        if o.den.is_one() {
            return Expr { num: &self.num + &(&o.num * &self.den), den: self.den.clone() };
        }
        let (_, bd, dd) = cofactors(&self.den, &o.den);
        let num = &(&self.num * &dd) + &(&o.num * &bd);
        Expr::normalized(num, &self.den * &dd)
    }
}

impl<'a> Sub<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn sub(self, o: &Expr) -> Expr {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn mul(self, o: &Expr) -> Expr {
        if self.is_zero() || o.is_zero() {
            return Expr::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Expr::poly(&self.num * &o.num);
        }
        let (n1, d2) = if o.den.is_one() { (self.num.clone(), o.den.clone()) } else { cancel(&self.num, &o.den) };
        let (n2, d1) = if self.den.is_one() { (o.num.clone(), self.den.clone()) } else { cancel(&o.num, &self.den) };
        let den = &d1 * &d2;
        Expr::with_monic_den(&n1 * &n2, den)
    }
}

fn cancel(n: &MultiPoly, d: &MultiPoly) -> (MultiPoly, MultiPoly) {
    let g = gcd(n, d);
    if g.is_one() {
        (n.clone(), d.clone())
    } else {
        (n.div_exact(&g).expect("gcd divides"), d.div_exact(&g).expect("gcd divides"))
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $f(self, o: Expr) -> Expr {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a Expr> for Expr {
            type Output = Expr;
            fn $f(self, o: &Expr) -> Expr {
                (&self).$f(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl From<MultiPoly> for Expr {
    fn from(p: MultiPoly) -> Self {
        Expr::poly(p)
    }
}

impl From<Var> for Expr {
    fn from(v: Var) -> Self {
        Expr::var(v)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Scalar> for Expr {
    fn from(c: Scalar) -> Self {
        Expr::constant(c)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: Var) -> Expr {
        Expr::var(x)
    }

    #[test]
    fn self_division_is_one() {
        let f = &(&v(Var::R) * &v(Var::R)) - &v(Var::U);
        assert_eq!(f.checked_div(&f).unwrap(), Expr::one());
    }

    #[test]
    fn common_factor_cancels() {
        let f = &(&v(Var::R) * &v(Var::R)) - &v(Var::U);
        let q = (&v(Var::U) * &f).checked_div(&v(Var::U)).unwrap();
        assert_eq!(q, f);
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert_eq!(Expr::new(MultiPoly::one(), MultiPoly::zero()), Err(Error::ZeroDenominator));
        assert!(v(Var::R).checked_div(&Expr::zero()).is_err());
    }

    #[test]
    fn denominators_are_monic() {
        let e = Expr::new(MultiPoly::int(3), MultiPoly::var(Var::R).scale(&Scalar::int(6))).unwrap();
        assert_eq!(e.den(), &MultiPoly::var(Var::R));
        assert_eq!(e.num(), &MultiPoly::constant(Scalar::ratio(1, 2)));
    }

    #[test]
    fn quotient_rule() {
        // d/dr (1/(r^2-u)) = -2r/(r^2-u)^2
        let f = &(&v(Var::R) * &v(Var::R)) - &v(Var::U);
        let g = f.inv().unwrap().diff(Var::R);
        let expected = (&v(Var::R) * &Expr::int(-2)).checked_div(&(&f * &f)).unwrap();
        assert_eq!(g, expected);
    }

    #[test]
    fn rational_substitution() {
        // E -> -beta^2/2 in -2E gives beta^2
        let e = &Expr::int(-2) * &v(Var::E);
        let b2 = (&v(Var::Beta) * &v(Var::Beta)).scale(&Scalar::ratio(-1, 2));
        assert_eq!(e.substitute(&[(Var::E, b2)]).unwrap(), &v(Var::Beta) * &v(Var::Beta));
        let w = v(Var::U).inv().unwrap().substitute(&[(Var::U, &v(Var::Rho) * &v(Var::Rho))]).unwrap();
        assert_eq!(w, (&v(Var::Rho) * &v(Var::Rho)).inv().unwrap());
    }
}
