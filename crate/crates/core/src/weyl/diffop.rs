//! Normal-ordered differential operators `sum_a c_a(x) d^a`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use super::spec::{same_spec, VariableSpec, MAX_SPACE};
use crate::coeffring::{Expr, Scalar, Var};
use crate::error::{Error, Result};

/// Derivative multi-index, ordered by total order then lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DerivIndex {
    order: u8,
    exps: [u8; MAX_SPACE],
}

impl DerivIndex {
    pub fn zero() -> Self {
        DerivIndex::default()
    }

    pub fn new(exps: &[u8]) -> Self {
        let mut d = DerivIndex::default();
        for (i, &e) in exps.iter().enumerate() {
            d.exps[i] = e;
            d.order += e;
        }
        d
    }

    pub fn unit(i: usize) -> Self {
        let mut d = DerivIndex::default();
        d.exps[i] = 1;
        d.order = 1;
        d
    }

    pub fn order(&self) -> u32 {
        self.order as u32
    }

    pub fn get(&self, i: usize) -> u8 {
        self.exps[i]
    }

    pub fn exps(&self) -> &[u8; MAX_SPACE] {
        &self.exps
    }

    pub fn add(&self, o: &DerivIndex) -> DerivIndex {
        let mut d = *self;
        for i in 0..MAX_SPACE {
            d.exps[i] += o.exps[i];
        }
        d.order += o.order;
        d
    }

    pub fn checked_sub(&self, o: &DerivIndex) -> Option<DerivIndex> {
        let mut d = *self;
        for i in 0..MAX_SPACE {
            d.exps[i] = d.exps[i].checked_sub(o.exps[i])?;
        }
        d.order -= o.order;
        Some(d)
    }

    pub fn with(&self, i: usize, e: u8) -> DerivIndex {
        let mut d = *self;
        d.order = d.order - d.exps[i] + e;
        d.exps[i] = e;
        d
    }

    /// All `g <= self` componentwise.
    pub fn sub_indices(&self) -> Vec<DerivIndex> {
        let mut out = vec![DerivIndex::zero()];
        for i in 0..MAX_SPACE {
            let mut next = Vec::with_capacity(out.len() * (self.exps[i] as usize + 1));
            for g in &out {
                for e in 0..=self.exps[i] {
                    next.push(g.with(i, e));
                }
            }
            out = next;
        }
        out
    }

    /// `prod_i C(self_i, g_i)`.
    pub fn binomial(&self, g: &DerivIndex) -> i64 {
        (0..MAX_SPACE).map(|i| binom(self.exps[i] as i64, g.exps[i] as i64)).product()
    }
}

fn binom(n: i64, k: i64) -> i64 {
    let mut c = 1i64;
    for j in 0..k {
        c = c * (n - j) / (j + 1);
    }
    c
}

/// A differential operator in normal order: coefficients to the left of all
/// derivatives, no zero coefficients stored.
#[derive(Clone, Debug)]
pub struct DiffOp {
    spec: Arc<VariableSpec>,
    terms: BTreeMap<DerivIndex, Expr>,
}

impl PartialEq for DiffOp {
    fn eq(&self, o: &Self) -> bool {
        same_spec(&self.spec, &o.spec).is_ok() && self.terms == o.terms
    }
}

impl DiffOp {
    pub fn zero(spec: &Arc<VariableSpec>) -> Self {
        DiffOp { spec: spec.clone(), terms: BTreeMap::new() }
    }

    pub fn identity(spec: &Arc<VariableSpec>) -> Self {
        DiffOp::mult(spec, Expr::one())
    }

    /// Multiplication by a function.
    pub fn mult(spec: &Arc<VariableSpec>, f: impl Into<Expr>) -> Self {
        let f = f.into();
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(DerivIndex::zero(), f);
        }
        DiffOp { spec: spec.clone(), terms }
    }

    /// `d/dv`.
    pub fn d(spec: &Arc<VariableSpec>, v: Var) -> Result<Self> {
        let i = spec.position(v)?;
        Ok(DiffOp::term(spec, DerivIndex::unit(i), Expr::one()))
    }

    /// `d^k/dv^k`.
    pub fn d_pow(spec: &Arc<VariableSpec>, v: Var, k: u8) -> Result<Self> {
        let i = spec.position(v)?;
        Ok(DiffOp::term(spec, DerivIndex::zero().with(i, k), Expr::one()))
    }

    /// `coeff * d^index`.
    pub fn term(spec: &Arc<VariableSpec>, index: DerivIndex, coeff: Expr) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(index, coeff);
        }
        DiffOp { spec: spec.clone(), terms }
    }

    /// `coeff * prod d_v^k`, e.g. `monomial(spec, c, &[(R, 2), (U, 1)])`.
    pub fn monomial(spec: &Arc<VariableSpec>, coeff: impl Into<Expr>, derivs: &[(Var, u8)]) -> Result<Self> {
        let mut idx = DerivIndex::zero();
        for &(v, k) in derivs {
            let i = spec.position(v)?;
            idx = idx.with(i, idx.get(i) + k);
        }
        Ok(DiffOp::term(spec, idx, coeff.into()))
    }

    pub fn from_terms(spec: &Arc<VariableSpec>, terms: impl IntoIterator<Item = (DerivIndex, Expr)>) -> Self {
        let mut groups: BTreeMap<DerivIndex, Vec<Expr>> = BTreeMap::new();
        for (i, c) in terms {
            groups.entry(i).or_default().push(c);
        }
        let terms = groups
            .into_iter()
            .map(|(i, cs)| (i, Expr::sum(cs.iter())))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        DiffOp { spec: spec.clone(), terms }
    }

    /// Sum of operators on one chart, reduced once per coefficient.
    pub fn sum(spec: &Arc<VariableSpec>, ops: &[DiffOp]) -> Result<DiffOp> {
        let mut groups: BTreeMap<DerivIndex, Vec<&Expr>> = BTreeMap::new();
        for op in ops {
            same_spec(spec, &op.spec)?;
            for (i, c) in &op.terms {
                groups.entry(*i).or_default().push(c);
            }
        }
        let mut terms = BTreeMap::new();
        for (i, cs) in groups {
            let c = if cs.len() == 1 { cs[0].clone() } else { spec.ctx().reduce(&Expr::sum(cs))? };
            if !c.is_zero() {
                terms.insert(i, c);
            }
        }
        Ok(DiffOp { spec: spec.clone(), terms })
    }

    pub fn spec(&self) -> &Arc<VariableSpec> {
        &self.spec
    }

    pub fn terms(&self) -> &BTreeMap<DerivIndex, Expr> {
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

    /// Highest total derivative order; 0 for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|i| i.order()).max().unwrap_or(0)
    }

    pub fn coeff(&self, index: &DerivIndex) -> Expr {
        self.terms.get(index).cloned().unwrap_or_default()
    }

    /// Coefficient of `prod d_v^k`.
    pub fn coeff_of(&self, derivs: &[(Var, u8)]) -> Result<Expr> {
        let mut idx = DerivIndex::zero();
        for &(v, k) in derivs {
            let i = self.spec.position(v)?;
            idx = idx.with(i, idx.get(i) + k);
        }
        Ok(self.coeff(&idx))
    }

    /// Terms of total order exactly `k`.
    pub fn homogeneous_part(&self, k: u32) -> DiffOp {
        DiffOp {
            spec: self.spec.clone(),
            terms: self.terms.iter().filter(|(i, _)| i.order() == k).map(|(i, c)| (*i, c.clone())).collect(),
        }
    }

    /// Terms of total order at most `k`.
    pub fn truncate(&self, k: u32) -> DiffOp {
        DiffOp {
            spec: self.spec.clone(),
            terms: self.terms.iter().filter(|(i, _)| i.order() <= k).map(|(i, c)| (*i, c.clone())).collect(),
        }
    }

    pub fn add(&self, o: &DiffOp) -> Result<DiffOp> {
        same_spec(&self.spec, &o.spec)?;
        let mut terms = self.terms.clone();
        for (i, c) in &o.terms {
            match terms.get_mut(i) {
                Some(t) => {
                    let s = &*t + c;
                    if s.is_zero() {
                        terms.remove(i);
                    } else {
                        *t = self.spec.ctx().reduce(&s)?;
                    }
                }
                None => {
                    terms.insert(*i, c.clone());
                }
            }
        }
        Ok(DiffOp { spec: self.spec.clone(), terms })
    }

    pub fn sub(&self, o: &DiffOp) -> Result<DiffOp> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp { spec: self.spec.clone(), terms: self.terms.iter().map(|(i, c)| (*i, -c)).collect() }
    }

    pub fn scale(&self, k: &Scalar) -> DiffOp {
        if k.is_zero() {
            return DiffOp::zero(&self.spec);
        }
        DiffOp { spec: self.spec.clone(), terms: self.terms.iter().map(|(i, c)| (*i, c.scale(k))).collect() }
    }

    /// Left multiplication by a function: `f * A`.
    pub fn lmul(&self, f: &Expr) -> Result<DiffOp> {
        let ctx = self.spec.ctx();
        let mut terms = BTreeMap::new();
        for (i, c) in &self.terms {
            let p = ctx.reduce(&(f * c))?;
            if !p.is_zero() {
                terms.insert(*i, p);
            }
        }
        Ok(DiffOp { spec: self.spec.clone(), terms })
    }

    /// Applies `g` to every coefficient and re-normalizes.
    pub fn map_coeffs(&self, g: impl Fn(&Expr) -> Result<Expr>) -> Result<DiffOp> {
        let ctx = self.spec.ctx();
        let mut terms = BTreeMap::new();
        for (i, c) in &self.terms {
            let p = ctx.reduce(&g(c)?)?;
            if !p.is_zero() {
                terms.insert(*i, p);
            }
        }
        Ok(DiffOp { spec: self.spec.clone(), terms })
    }

    /// Substitutes symbols (normally parameters) in every coefficient.
    pub fn substitute(&self, bindings: &[(Var, Expr)]) -> Result<DiffOp> {
        for (v, _) in bindings {
            if self.spec.space().contains(v) {
                return Err(Error::Invalid(format!("cannot substitute space variable `{v}` coefficientwise")));
            }
        }
        self.map_coeffs(|c| c.substitute(bindings))
    }

    /// Sum of `coefficient * d^index` over `other` mapped into this chart.
    pub fn derivative_table(&self, f: &Expr, max: &DerivIndex) -> Result<HashMap<DerivIndex, Expr>> {
        let mut table = HashMap::new();
        table.insert(DerivIndex::zero(), f.clone());
        for g in max.sub_indices() {
            self.derivative_of(&g, &mut table)?;
        }
        Ok(table)
    }

    fn derivative_of(&self, g: &DerivIndex, table: &mut HashMap<DerivIndex, Expr>) -> Result<Expr> {
        if let Some(e) = table.get(g) {
            return Ok(e.clone());
        }
        let k = (0..MAX_SPACE).find(|&k| g.get(k) > 0).expect("nonzero index");
        let prev = g.with(k, g.get(k) - 1);
        let base = self.derivative_of(&prev, table)?;
        let d = self.spec.ctx().derivative(&base, self.spec.space()[k])?;
        table.insert(*g, d.clone());
        Ok(d)
    }

    /// Operator product `self o other`, normal ordered by the Leibniz rule.
    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp> {
        same_spec(&self.spec, &other.spec)?;
        if self.is_zero() || other.is_zero() {
            return Ok(DiffOp::zero(&self.spec));
        }
        // componentwise max over the left operator's indices bounds every
        // derivative of the right coefficients we need
        let mut max = DerivIndex::zero();
        for i in self.terms.keys() {
            for k in 0..MAX_SPACE {
                if i.get(k) > max.get(k) {
                    max = max.with(k, i.get(k));
                }
            }
        }
        let mut out: BTreeMap<DerivIndex, Vec<Expr>> = BTreeMap::new();
        for (bi, b) in &other.terms {
            let table = self.derivative_table(b, &max)?;
            for (ai, a) in &self.terms {
                for g in ai.sub_indices() {
                    let db = &table[&g];
                    if db.is_zero() {
                        continue;
                    }
                    let c = ai.binomial(&g);
                    let idx = ai.checked_sub(&g).expect("g <= ai").add(bi);
                    let prod = a * db;
                    let prod = if c == 1 { prod } else { prod.scale(&Scalar::int(c)) };
                    out.entry(idx).or_default().push(prod);
                }
            }
        }
        let ctx = self.spec.ctx();
        let mut terms = BTreeMap::new();
        for (i, parts) in out {
            let s = ctx.reduce(&Expr::sum(parts.iter()))?;
            if !s.is_zero() {
                terms.insert(i, s);
            }
        }
        Ok(DiffOp { spec: self.spec.clone(), terms })
    }

    /// `[self, other] = self o other - other o self`.
    pub fn commutator(&self, other: &DiffOp) -> Result<DiffOp> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// Product of a sequence of operators, left to right.
    pub fn product(ops: &[&DiffOp]) -> Result<DiffOp> {
        let (first, rest) = ops.split_first().ok_or_else(|| Error::Invalid("empty product".into()))?;
        let mut acc = (*first).clone();
        for op in rest {
            acc = acc.compose(op)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, k: u32) -> Result<DiffOp> {
        let mut acc = DiffOp::identity(&self.spec);
        for _ in 0..k {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// `A f`.
    pub fn apply(&self, f: &Expr) -> Result<Expr> {
        let mut max = DerivIndex::zero();
        for i in self.terms.keys() {
            for k in 0..MAX_SPACE {
                if i.get(k) > max.get(k) {
                    max = max.with(k, i.get(k));
                }
            }
        }
        let table = self.derivative_table(f, &max)?;
        let parts: Vec<Expr> = self.terms.iter().map(|(i, c)| c * &table[i]).collect();
        self.spec.ctx().reduce(&Expr::sum(parts.iter()))
    }

    /// Whether every coefficient is a polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.terms.values().all(Expr::is_poly)
    }

    /// Number of coefficient monomials across all terms.
    pub fn size(&self) -> usize {
        self.terms.values().map(|c| c.num().len()).sum()
    }

    /// Moves the operator to another chart with identical space variables
    /// (e.g. a richer coefficient context).
    pub fn rehome(&self, spec: &Arc<VariableSpec>) -> Result<DiffOp> {
        if spec.space() != self.spec.space() {
            return Err(Error::SpecMismatch(self.spec.name().into(), spec.name().into()));
        }
        let ctx = spec.ctx();
        let mut terms = BTreeMap::new();
        for (i, c) in &self.terms {
            let p = ctx.reduce(c)?;
            if !p.is_zero() {
                terms.insert(*i, p);
            }
        }
        Ok(DiffOp { spec: spec.clone(), terms })
    }

    /// Printed `D[..]` factor for an index.
    pub fn index_string(&self, i: &DerivIndex) -> String {
        let mut parts = Vec::new();
        for (k, v) in self.spec.space().iter().enumerate() {
            match i.get(k) {
                0 => {}
                1 => parts.push(format!("D[{v}]")),
                e => parts.push(format!("D[{v}]^{e}")),
            }
        }
        parts.join("*")
    }

    /// Individual printed terms, highest derivative first.
    pub fn term_strings(&self) -> Vec<String> {
        self.terms
            .iter()
            .rev()
            .map(|(i, c)| {
                let d = self.index_string(i);
                let cs = coeff_string(c);
                if d.is_empty() {
                    cs
                } else if c.is_one() {
                    d
                } else if (-c).is_one() {
                    format!("-{d}")
                } else {
                    format!("{cs}*{d}")
                }
            })
            .collect()
    }
}

/// Products `prod_k F_k^(i_k)` of pairwise commuting operators, memoized by
/// multi-index.
pub(crate) struct CommutingPowers {
    spec: Arc<VariableSpec>,
    factors: Vec<DiffOp>,
    cache: HashMap<DerivIndex, DiffOp>,
}

impl CommutingPowers {
    pub(crate) fn new(spec: &Arc<VariableSpec>, factors: Vec<DiffOp>) -> Self {
        CommutingPowers { spec: spec.clone(), factors, cache: HashMap::new() }
    }

    pub(crate) fn get(&mut self, idx: &DerivIndex) -> Result<DiffOp> {
        if let Some(p) = self.cache.get(idx) {
            return Ok(p.clone());
        }
        let p = match (0..MAX_SPACE).rev().find(|&k| idx.get(k) > 0) {
            None => DiffOp::identity(&self.spec),
            Some(k) => {
                let prev = idx.with(k, idx.get(k) - 1);
                self.get(&prev)?.compose(&self.factors[k])?
            }
        };
        self.cache.insert(*idx, p.clone());
        Ok(p)
    }
}

fn coeff_string(c: &Expr) -> String {
    let s = c.to_string();
    if c.is_poly() && c.num().len() == 1 {
        s
    } else if c.is_poly() {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for DiffOp {
    /// Canonical text in the operator grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ts = self.term_strings();
        if ts.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in ts.iter().enumerate() {
            if k == 0 {
                f.write_str(t)?;
            } else if let Some(rest) = t.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {t}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ru() -> Arc<VariableSpec> {
        VariableSpec::r_u()
    }

    fn v(x: Var) -> Expr {
        Expr::var(x)
    }

    #[test]
    fn canonical_commutation() {
        let s = ru();
        let dr = DiffOp::d(&s, Var::R).unwrap();
        let r = DiffOp::mult(&s, v(Var::R));
        let expected = DiffOp::monomial(&s, v(Var::R), &[(Var::R, 1)]).unwrap().add(&DiffOp::identity(&s)).unwrap();
        assert_eq!(dr.compose(&r).unwrap(), expected);
        assert_eq!(dr.commutator(&r).unwrap(), DiffOp::identity(&s));
    }

    #[test]
    fn compose_with_square() {
        let s = ru();
        let du = DiffOp::d(&s, Var::U).unwrap();
        let u2 = DiffOp::mult(&s, &v(Var::U) * &v(Var::U));
        let expected = DiffOp::monomial(&s, &v(Var::U) * &v(Var::U), &[(Var::U, 1)])
            .unwrap()
            .add(&DiffOp::mult(&s, v(Var::U).scale(&Scalar::int(2))))
            .unwrap();
        assert_eq!(du.compose(&u2).unwrap(), expected);
    }

    #[test]
    fn compose_mixed_hand_expansion() {
        // (u d_r^2)(r d_u) = r u d_r^2 d_u + 2 u d_r d_u
        let s = ru();
        let a = DiffOp::monomial(&s, v(Var::U), &[(Var::R, 2)]).unwrap();
        let b = DiffOp::monomial(&s, v(Var::R), &[(Var::U, 1)]).unwrap();
        let expected = DiffOp::monomial(&s, &v(Var::R) * &v(Var::U), &[(Var::R, 2), (Var::U, 1)])
            .unwrap()
            .add(&DiffOp::monomial(&s, v(Var::U).scale(&Scalar::int(2)), &[(Var::R, 1), (Var::U, 1)]).unwrap())
            .unwrap();
        assert_eq!(a.compose(&b).unwrap(), expected);
    }

    #[test]
    fn commutator_examples() {
        let s = ru();
        let a = DiffOp::monomial(&s, v(Var::R), &[(Var::R, 1)]).unwrap();
        assert!(a.commutator(&a).unwrap().is_zero());
        let b = DiffOp::monomial(&s, v(Var::U), &[(Var::U, 1)]).unwrap();
        assert!(a.commutator(&b).unwrap().is_zero());
    }

    #[test]
    fn mismatched_specs_error() {
        let a = DiffOp::d(&ru(), Var::R).unwrap();
        let b = DiffOp::d(&VariableSpec::r_rho(), Var::R).unwrap();
        assert!(matches!(a.compose(&b), Err(Error::SpecMismatch(_, _))));
    }

    #[test]
    fn unknown_derivative_variable() {
        assert!(matches!(DiffOp::d(&ru(), Var::X), Err(Error::NotASpaceVariable(Var::X, _))));
    }

    #[test]
    fn apply_is_leibniz_consistent() {
        let s = ru();
        let a = DiffOp::monomial(&s, v(Var::U), &[(Var::R, 2)]).unwrap();
        let b = DiffOp::monomial(&s, v(Var::R), &[(Var::U, 1)]).unwrap();
        let f = &(&v(Var::R).pow(3).unwrap() * &v(Var::U).pow(2).unwrap()) + &v(Var::U);
        let lhs = a.compose(&b).unwrap().apply(&f).unwrap();
        let rhs = a.apply(&b.apply(&f).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn printing_is_canonical() {
        let s = ru();
        let a = DiffOp::monomial(&s, v(Var::U).scale(&Scalar::int(-2)), &[(Var::R, 1), (Var::U, 1)])
            .unwrap()
            .add(&DiffOp::d_pow(&s, Var::U, 2).unwrap())
            .unwrap()
            .add(&DiffOp::mult(&s, &v(Var::Beta) + &Expr::int(1)))
            .unwrap();
        assert_eq!(a.to_string(), "-2*u*D[r]*D[u] + D[u]^2 + (beta + 1)");
    }
}
