//! Sparse multivariate polynomials over the Gaussian rationals.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::Scalar;
use super::var::{Var, NVARS};

/// Exponent vector over the global symbol table.
///
/// The derived ordering compares total degree first and then the exponent
/// vector lexicographically, i.e. graded-lex with `Var::X` largest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    deg: u16,
    exps: [u8; NVARS],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var, e: u8) -> Self {
        let mut m = Monomial::one();
        m.exps[v.index()] = e;
        m.deg = e as u16;
        m
    }

    pub fn from_exps(pairs: &[(Var, u8)]) -> Self {
        let mut m = Monomial::one();
        for &(v, e) in pairs {
            m.exps[v.index()] += e;
            m.deg += e as u16;
        }
        m
    }

    pub fn exp(&self, v: Var) -> u8 {
        self.exps[v.index()]
    }

    pub fn degree(&self) -> u16 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn with_exp(&self, v: Var, e: u8) -> Self {
        let mut m = *self;
        m.deg = m.deg - m.exps[v.index()] as u16 + e as u16;
        m.exps[v.index()] = e;
        m
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = *self;
        for i in 0..NVARS {
            m.exps[i] = m.exps[i].checked_add(o.exps[i]).expect("exponent overflow");
        }
        m.deg += o.deg;
        m
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        (0..NVARS).all(|i| self.exps[i] <= o.exps[i])
    }

    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        if !o.divides(self) {
            return None;
        }
        let mut m = *self;
        for i in 0..NVARS {
            m.exps[i] -= o.exps[i];
        }
        m.deg -= o.deg;
        Some(m)
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut m = Monomial::one();
        for i in 0..NVARS {
            m.exps[i] = self.exps[i].min(o.exps[i]);
            m.deg += m.exps[i] as u16;
        }
        m
    }

    pub fn vars(&self) -> impl Iterator<Item = (Var, u8)> + '_ {
        (0..NVARS).filter(|&i| self.exps[i] > 0).map(|i| (Var::from_index(i), self.exps[i]))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.vars() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial as a list of `(monomial, nonzero coefficient)` pairs sorted
/// by decreasing monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: Vec<(Monomial, Scalar)>,
}

pub(crate) struct Accumulator {
    map: HashMap<Monomial, Scalar>,
}

impl Accumulator {
    pub fn new() -> Self {
        Accumulator { map: HashMap::new() }
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        match self.map.get_mut(&m) {
            Some(acc) => *acc += &c,
            None => {
                self.map.insert(m, c);
            }
        }
    }

    pub fn add_poly(&mut self, p: &MultiPoly) {
        for (m, c) in &p.terms {
            match self.map.get_mut(m) {
                Some(acc) => *acc += c,
                None => {
                    self.map.insert(*m, c.clone());
                }
            }
        }
    }

    pub fn finish(self) -> MultiPoly {
        let mut terms: Vec<_> = self.map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { terms }
    }
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        MultiPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        if c.is_zero() {
            MultiPoly::zero()
        } else {
            MultiPoly { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn int(n: i64) -> Self {
        MultiPoly::constant(Scalar::int(n))
    }

    pub fn var(v: Var) -> Self {
        MultiPoly { terms: vec![(Monomial::var(v, 1), Scalar::one())] }
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        if c.is_zero() {
            MultiPoly::zero()
        } else {
            MultiPoly { terms: vec![(m, c)] }
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut acc = Accumulator::new();
        for (m, c) in terms {
            acc.add_term(m, c);
        }
        acc.finish()
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(Scalar::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Scalar {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Scalar::zero(),
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Scalar::zero())
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_real())
    }

    pub fn real_part(&self) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, Scalar::real(c.re.clone()))))
    }

    pub fn imag_part(&self) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, Scalar::real(c.im.clone()))))
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) > 0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v) as u32).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree() as u32).max().unwrap_or(0)
    }

    /// Variables occurring in the polynomial, in declaration order.
    pub fn variables(&self) -> Vec<Var> {
        let mut seen = [false; NVARS];
        for (m, _) in &self.terms {
            for (v, _) in m.vars() {
                seen[v.index()] = true;
            }
        }
        (0..NVARS).filter(|&i| seen[i]).map(Var::from_index).collect()
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(),
            Some((first, _)) => it.fold(*first, |g, (m, _)| g.gcd(m)),
        }
    }

    pub fn scale(&self, k: &Scalar) -> MultiPoly {
        if k.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect() }
    }

    pub fn mul_term(&self, mono: &Monomial, k: &Scalar) -> MultiPoly {
        if k.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c * k)).collect() }
    }

    /// Divides every monomial by `mono`; panics if some term is not divisible.
    pub fn div_monomial(&self, mono: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.div(mono).expect("monomial not divisible"), c.clone()))
                .collect(),
        }
    }

    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => MultiPoly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to the symbol `v`.
    pub fn diff(&self, v: Var) -> MultiPoly {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e > 0 {
                terms.push((m.with_exp(v, e - 1), c * &Scalar::int(e as i64)));
            }
        }
        // lowering the same exponent by one preserves grlex order
        MultiPoly { terms }
    }

    /// Simultaneous substitution of symbols by polynomials.
    pub fn substitute(&self, bindings: &[(Var, MultiPoly)]) -> MultiPoly {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut cache: HashMap<(usize, u8), MultiPoly> = HashMap::new();
        let mut acc = Accumulator::new();
        for (m, c) in &self.terms {
            let mut rest = *m;
            let mut factor = MultiPoly::one();
            for (bi, (v, p)) in bindings.iter().enumerate() {
                let e = m.exp(*v);
                if e == 0 {
                    continue;
                }
                rest = rest.with_exp(*v, 0);
                let pw = cache.entry((bi, e)).or_insert_with(|| p.pow(e as u32)).clone();
                factor = &factor * &pw;
            }
            for (fm, fc) in factor.terms {
                acc.add_term(fm.mul(&rest), &fc * c);
            }
        }
        acc.finish()
    }

    /// Coefficients with respect to `v`: entry `k` multiplies `v^k`.
    pub fn coefficients_in(&self, v: Var) -> Vec<MultiPoly> {
        let d = self.degree_in(v) as usize;
        let mut accs: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            accs[m.exp(v) as usize].push((m.with_exp(v, 0), c.clone()));
        }
        accs.into_iter()
            .map(|mut t| {
                t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                MultiPoly { terms: t }
            })
            .collect()
    }

    pub fn from_coefficients_in(v: Var, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut acc = Accumulator::new();
        for (k, c) in coeffs.iter().enumerate() {
            let vk = Monomial::var(v, k as u8);
            for (m, s) in &c.terms {
                acc.add_term(m.mul(&vk), s.clone());
            }
        }
        acc.finish()
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (lm, lc) = d.leading()?.clone();
        if d.is_monomial() {
            let inv = lc.inv().ok()?;
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                terms.push((m.div(&lm)?, c * &inv));
            }
            return Some(MultiPoly { terms });
        }
        let inv = lc.inv().ok()?;
        let mut rem = self.clone();
        let mut quot = Accumulator::new();
        while let Some((m, c)) = rem.leading().cloned() {
            let qm = m.div(&lm)?;
            let qc = &c * &inv;
            rem = &rem - &d.mul_term(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot.finish())
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn conj(&self) -> MultiPoly {
        self.map_coefficients(Scalar::conj)
    }

    fn merge(&self, o: &MultiPoly, negate: bool) -> MultiPoly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &o.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0, c));
        }
        MultiPoly { terms: out }
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        self.merge(o, false)
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self.merge(o, true)
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        if self.is_zero() || o.is_zero() {
            return MultiPoly::zero();
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        let mut acc = Accumulator::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                acc.add_term(m1.mul(m2), c1 * c2);
            }
        }
        acc.finish()
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, o: MultiPoly) -> MultiPoly {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, o: &MultiPoly) -> MultiPoly {
                (&self).$f(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl From<Var> for MultiPoly {
    fn from(v: Var) -> Self {
        MultiPoly::var(v)
    }
}

impl From<i64> for MultiPoly {
    fn from(n: i64) -> Self {
        MultiPoly::int(n)
    }
}

impl fmt::Display for MultiPoly {
    /// Canonical grammar-compatible printing, terms in decreasing grlex order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative_lead();
            let a = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: Var) -> MultiPoly {
        MultiPoly::var(x)
    }

    #[test]
    fn grlex_order_is_degree_first() {
        let a = Monomial::var(Var::Lambda, 2);
        let b = Monomial::var(Var::X, 1);
        assert!(a > b);
        let c = Monomial::from_exps(&[(Var::X, 1), (Var::Y, 1)]);
        let d = Monomial::from_exps(&[(Var::Y, 2)]);
        assert!(c > d);
    }

    #[test]
    fn product_and_exact_division() {
        let p = &v(Var::R) * &v(Var::R) - v(Var::U);
        let q = &v(Var::U) * &p;
        assert_eq!(q.div_exact(&v(Var::U)).unwrap(), p);
        assert_eq!(q.div_exact(&p).unwrap(), v(Var::U));
        assert!(p.div_exact(&v(Var::U)).is_none());
    }

    #[test]
    fn substitution_is_simultaneous() {
        // x -> y, y -> x swaps
        let p = &v(Var::X) * &v(Var::X) + v(Var::Y);
        let s = p.substitute(&[(Var::X, v(Var::Y)), (Var::Y, v(Var::X))]);
        assert_eq!(s, &v(Var::Y) * &v(Var::Y) + v(Var::X));
    }

    #[test]
    fn coefficients_roundtrip() {
        let p = &(&v(Var::R) * &v(Var::U)) + &(&v(Var::U).pow(3) * &v(Var::Beta)) + MultiPoly::int(4);
        let cs = p.coefficients_in(Var::U);
        assert_eq!(cs.len(), 4);
        assert_eq!(MultiPoly::from_coefficients_in(Var::U, &cs), p);
    }

    #[test]
    fn printing() {
        let p = &(&v(Var::R) * &v(Var::R)).scale(&Scalar::int(2)) - &v(Var::U).scale(&Scalar::ratio(1, 2));
        assert_eq!(p.to_string(), "2*r^2 - 1/2*u");
        assert_eq!(MultiPoly::zero().to_string(), "0");
    }
}
