//! Adjoined square roots and the derivations acting on them.

use std::fmt;

use super::expr::Expr;
use super::poly::{Accumulator, MultiPoly};
use super::scalar::Scalar;
use super::var::Var;
use crate::error::{Error, Result};

/// A symbol `s` subject to `s^2 = square`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjunct {
    pub symbol: Var,
    pub square: MultiPoly,
}

/// The action of `d/d coord` on the symbols of the ring.
///
/// Symbols without an entry are constants, except `coord` itself whose
/// derivative defaults to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub coord: Var,
    pub images: Vec<(Var, Expr)>,
}

impl Derivation {
    pub fn image(&self, s: Var) -> Option<Expr> {
        if let Some((_, e)) = self.images.iter().find(|(v, _)| *v == s) {
            return Some(e.clone());
        }
        if s == self.coord {
            Some(Expr::one())
        } else {
            None
        }
    }

    fn is_trivial(&self) -> bool {
        self.images.is_empty()
    }
}

/// Coefficient ring `Q(i)(symbols)` modulo a list of square-root relations.
///
/// Every element has a unique reduced form: numerator of degree at most one
/// in each adjunct, denominator free of adjuncts, coprime and monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicContext {
    name: String,
    adjuncts: Vec<Adjunct>,
    derivations: Vec<Derivation>,
}

impl AlgebraicContext {
    /// Flat coordinates, no relations.
    pub fn flat(name: &str, coords: &[Var]) -> Self {
        AlgebraicContext {
            name: name.to_string(),
            adjuncts: Vec::new(),
            derivations: coords.iter().map(|&c| Derivation { coord: c, images: Vec::new() }).collect(),
        }
    }

    pub fn new(name: &str, adjuncts: Vec<Adjunct>, derivations: Vec<Derivation>) -> Result<Self> {
        for (k, a) in adjuncts.iter().enumerate() {
            for later in &adjuncts[k..] {
                if a.square.contains(later.symbol) {
                    return Err(Error::Invalid(format!(
                        "adjunct {} uses {} which is not an earlier symbol",
                        a.symbol, later.symbol
                    )));
                }
            }
        }
        let ctx = AlgebraicContext { name: name.to_string(), adjuncts, derivations };
        ctx.check_derivations()?;
        Ok(ctx)
    }

    /// Cartesian `(x, y, z)` with the radius `r`, `r^2 = x^2 + y^2 + z^2`.
    ///
    /// The relation is oriented as `z^2 -> r^2 - x^2 - y^2` so that `r` stays
    /// a base symbol: `1/r` is then a monomial denominator.
    pub fn cartesian3d() -> Self {
        let (x, y, z, r) = (Expr::var(Var::X), Expr::var(Var::Y), Expr::var(Var::Z), Expr::var(Var::R));
        let rinv = r.inv().expect("r != 0");
        let adj = Adjunct {
            symbol: Var::Z,
            square: &(&MultiPoly::var(Var::R).pow(2) - &MultiPoly::var(Var::X).pow(2)) - &MultiPoly::var(Var::Y).pow(2),
        };
        let der = |c: Var, num: &Expr| Derivation { coord: c, images: vec![(Var::R, num * &rinv)] };
        AlgebraicContext::new("cartesian3d", vec![adj], vec![der(Var::X, &x), der(Var::Y, &y), der(Var::Z, &z)])
            .expect("consistent")
    }

    /// Ambient Cartesian space carrying the cylindrical quantities
    /// `rho^2 = x^2 + y^2`, `z^2 = r^2 - rho^2` and the angle `phi`.
    pub fn cylindrical_ambient() -> Self {
        let (x, y, z) = (Expr::var(Var::X), Expr::var(Var::Y), Expr::var(Var::Z));
        let rinv = Expr::var(Var::R).inv().expect("nonzero");
        let rhoinv = Expr::var(Var::Rho).inv().expect("nonzero");
        let rho2inv = rhoinv.pow(2).expect("nonzero");
        let mp = MultiPoly::var;
        let adjuncts = vec![
            Adjunct { symbol: Var::Y, square: &mp(Var::Rho).pow(2) - &mp(Var::X).pow(2) },
            Adjunct { symbol: Var::Z, square: &mp(Var::R).pow(2) - &mp(Var::Rho).pow(2) },
        ];
        let derivations = vec![
            Derivation {
                coord: Var::X,
                images: vec![(Var::R, &x * &rinv), (Var::Rho, &x * &rhoinv), (Var::Phi, &(-&y) * &rho2inv)],
            },
            Derivation {
                coord: Var::Y,
                images: vec![(Var::R, &y * &rinv), (Var::Rho, &y * &rhoinv), (Var::Phi, &x * &rho2inv)],
            },
            Derivation { coord: Var::Z, images: vec![(Var::R, &z * &rinv)] },
        ];
        AlgebraicContext::new("cylindrical-ambient", adjuncts, derivations).expect("consistent")
    }

    /// Chart `(r, u)` with `rho = sqrt(u)` adjoined; used to map operators
    /// back from `(r, rho)`.
    pub fn ru_with_rho() -> Self {
        let rho = Expr::var(Var::Rho);
        let adj = Adjunct { symbol: Var::Rho, square: MultiPoly::var(Var::U) };
        // d rho / du = 1/(2 rho) = rho/(2u)
        let drho = (&rho * &Expr::var(Var::U).inv().expect("nonzero")).scale(&Scalar::ratio(1, 2));
        AlgebraicContext::new(
            "ru+rho",
            vec![adj],
            vec![
                Derivation { coord: Var::R, images: Vec::new() },
                Derivation { coord: Var::U, images: vec![(Var::Rho, drho)] },
            ],
        )
        .expect("consistent")
    }

    /// Coordinates `(theta, phi)` with `sin`/`cos` of theta as symbols.
    pub fn sphere_chart() -> Self {
        let adj = Adjunct {
            symbol: Var::CosTheta,
            square: &MultiPoly::one() - &MultiPoly::var(Var::SinTheta).pow(2),
        };
        AlgebraicContext::new(
            "sphere",
            vec![adj],
            vec![
                Derivation {
                    coord: Var::Theta,
                    images: vec![(Var::SinTheta, Expr::var(Var::CosTheta)), (Var::CosTheta, -Expr::var(Var::SinTheta))],
                },
                Derivation { coord: Var::Phi, images: Vec::new() },
            ],
        )
        .expect("consistent")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn adjuncts(&self) -> &[Adjunct] {
        &self.adjuncts
    }

    pub fn derivations(&self) -> &[Derivation] {
        &self.derivations
    }

    pub fn has_adjuncts(&self) -> bool {
        !self.adjuncts.is_empty()
    }

    pub fn is_adjunct(&self, v: Var) -> bool {
        self.adjuncts.iter().any(|a| a.symbol == v)
    }

    /// Derivative rule `d_v s = (d_v f) / (2 s)` for an adjunct `s^2 = f`
    /// whose square is expressed in base symbols.
    pub fn adjunct_rule(&self, s: Var, coord: Var) -> Result<Expr> {
        let a = self
            .adjuncts
            .iter()
            .find(|a| a.symbol == s)
            .ok_or_else(|| Error::UnknownVariable(s.to_string()))?;
        let df = self.derivative(&Expr::poly(a.square.clone()), coord)?;
        df.checked_div(&Expr::var(s).scale(&Scalar::int(2))).and_then(|e| self.reduce(&e))
    }

    fn derivation(&self, coord: Var) -> Result<&Derivation> {
        self.derivations
            .iter()
            .find(|d| d.coord == coord)
            .ok_or_else(|| Error::UnknownVariable(coord.to_string()))
    }

    fn check_derivations(&self) -> Result<()> {
        for d in &self.derivations {
            for a in &self.adjuncts {
                // d(s^2 - f) must vanish in the quotient ring
                let rel = &MultiPoly::var(a.symbol).pow(2) - &a.square;
                let dr = self.derivative(&Expr::poly(rel), d.coord)?;
                if !dr.is_zero() {
                    return Err(Error::Invalid(format!(
                        "derivation d/d{} does not respect {}^2 = {}",
                        d.coord, a.symbol, a.square
                    )));
                }
            }
        }
        Ok(())
    }

    /// Applies `s^2 -> f` to a polynomial until every adjunct has degree <= 1.
    pub fn reduce_poly(&self, p: &MultiPoly) -> MultiPoly {
        let mut cur = p.clone();
        for a in self.adjuncts.iter().rev() {
            if cur.degree_in(a.symbol) < 2 {
                continue;
            }
            let mut acc = Accumulator::new();
            let mut powers: Vec<MultiPoly> = vec![MultiPoly::one()];
            for (m, c) in cur.terms() {
                let e = m.exp(a.symbol);
                if e < 2 {
                    acc.add_term(*m, c.clone());
                    continue;
                }
                let k = (e / 2) as usize;
                while powers.len() <= k {
                    let next = powers.last().expect("nonempty") * &a.square;
                    powers.push(next);
                }
                let base = m.with_exp(a.symbol, e % 2);
                for (fm, fc) in powers[k].terms() {
                    acc.add_term(fm.mul(&base), fc * c);
                }
            }
            cur = acc.finish();
        }
        cur
    }

    /// Canonical reduced form of `e` in the quotient fraction field.
    pub fn reduce(&self, e: &Expr) -> Result<Expr> {
        if self.adjuncts.is_empty() {
            return Ok(e.clone());
        }
        let mut num = self.reduce_poly(e.num());
        let mut den = self.reduce_poly(e.den());
        // rationalize: multiply by the conjugate in each adjunct occurring in den
        for a in self.adjuncts.iter().rev() {
            if !den.contains(a.symbol) {
                continue;
            }
            let parts = den.coefficients_in(a.symbol);
            let lo = parts[0].clone();
            let hi = parts.get(1).cloned().unwrap_or_default();
            let s_hi = &hi * &MultiPoly::var(a.symbol);
            let conj = &lo - &s_hi;
            num = self.reduce_poly(&(&num * &conj));
            den = self.reduce_poly(&(&den * &conj));
        }
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Expr::zero());
        }
        Ok(Expr::from_reduced(num, den))
    }

    /// `d/d coord` of `e`, reduced.
    pub fn derivative(&self, e: &Expr, coord: Var) -> Result<Expr> {
        let d = self.derivation(coord)?;
        if d.is_trivial() {
            return self.reduce(&e.diff(coord));
        }
        let raw = if e.is_poly() {
            self.derive_poly(e.num(), d)?
        } else {
            let dn = self.derive_poly(e.num(), d)?;
            let dd = self.derive_poly(e.den(), d)?;
            let den = Expr::poly(e.den().clone());
            let n = Expr::poly(e.num().clone());
            (&(&dn * &den) - &(&n * &dd)).checked_div(&(&den * &den))?
        };
        self.reduce(&raw)
    }

    fn derive_poly(&self, p: &MultiPoly, d: &Derivation) -> Result<Expr> {
        let mut parts = Vec::new();
        for v in p.variables() {
            if let Some(img) = d.image(v) {
                if img.is_zero() {
                    continue;
                }
                parts.push(&Expr::poly(p.diff(v)) * &img);
            }
        }
        Ok(Expr::sum(parts.iter()))
    }

    /// Simultaneous substitution followed by reduction.
    pub fn substitute(&self, e: &Expr, bindings: &[(Var, Expr)]) -> Result<Expr> {
        let s = e.substitute(bindings)?;
        self.reduce(&s)
    }

    pub fn mul(&self, a: &Expr, b: &Expr) -> Result<Expr> {
        self.reduce(&(a * b))
    }
}

impl fmt::Display for AlgebraicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        for a in &self.adjuncts {
            write!(f, " [{}^2 = {}]", a.symbol, a.square)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: Var) -> Expr {
        Expr::var(x)
    }

    #[test]
    fn radius_relation_reduces_to_r_squared() {
        let ctx = AlgebraicContext::cartesian3d();
        let s = &(&(&v(Var::X) * &v(Var::X)) + &(&v(Var::Y) * &v(Var::Y))) + &(&v(Var::Z) * &v(Var::Z));
        assert_eq!(ctx.reduce(&s).unwrap(), &v(Var::R) * &v(Var::R));
    }

    #[test]
    fn chain_rule_on_radius() {
        let ctx = AlgebraicContext::cartesian3d();
        let d = ctx.derivative(&v(Var::R), Var::X).unwrap();
        assert_eq!(d, v(Var::X).checked_div(&v(Var::R)).unwrap());
        // d/dz (1/r) = -z/r^3
        let d = ctx.derivative(&v(Var::R).inv().unwrap(), Var::Z).unwrap();
        assert_eq!(d, (-v(Var::Z)).checked_div(&v(Var::R).pow(3).unwrap()).unwrap());
    }

    #[test]
    fn unknown_coordinate_is_an_error() {
        let ctx = AlgebraicContext::flat("ru", &[Var::R, Var::U]);
        assert_eq!(ctx.derivative(&v(Var::R), Var::X), Err(Error::UnknownVariable("x".into())));
    }

    #[test]
    fn flat_derivatives() {
        let ctx = AlgebraicContext::flat("rrho", &[Var::R, Var::Rho]);
        let e = &(&v(Var::Beta) * &v(Var::R)) * &v(Var::R);
        assert_eq!(ctx.derivative(&e, Var::R).unwrap(), (&v(Var::Beta) * &v(Var::R)).scale(&Scalar::int(2)));
        let e = &(&v(Var::R) * &v(Var::R)) - &(&v(Var::Rho) * &v(Var::Rho));
        assert_eq!(ctx.derivative(&e, Var::Rho).unwrap(), v(Var::Rho).scale(&Scalar::int(-2)));
    }

    #[test]
    fn adjunct_rule_matches_table() {
        let ctx = AlgebraicContext::cylindrical_ambient();
        // z^2 = r^2 - rho^2: d_x z = (d_x (r^2 - rho^2)) / (2z) = 0
        assert!(ctx.adjunct_rule(Var::Z, Var::X).unwrap().is_zero());
        // y^2 = rho^2 - x^2: d_x y = 0 as well
        assert!(ctx.adjunct_rule(Var::Y, Var::X).unwrap().is_zero());
        let ctx = AlgebraicContext::ru_with_rho();
        let d = ctx.adjunct_rule(Var::Rho, Var::U).unwrap();
        assert_eq!(d, ctx.derivative(&v(Var::Rho), Var::U).unwrap());
    }

    #[test]
    fn rationalizes_adjunct_denominators() {
        let ctx = AlgebraicContext::ru_with_rho();
        // 1/rho = rho/u
        let e = ctx.reduce(&v(Var::Rho).inv().unwrap()).unwrap();
        assert_eq!(e, v(Var::Rho).checked_div(&v(Var::U)).unwrap());
    }

    #[test]
    fn inconsistent_derivation_rejected() {
        let adj = Adjunct { symbol: Var::Rho, square: MultiPoly::var(Var::U) };
        let bad = AlgebraicContext::new(
            "bad",
            vec![adj],
            vec![Derivation { coord: Var::U, images: vec![(Var::Rho, Expr::one())] }],
        );
        assert!(bad.is_err());
    }
}
