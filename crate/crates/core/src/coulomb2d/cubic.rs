//! The cubic polynomial algebra generated by `h_a, l_a, b_a, c`.
//!
//! `[c, l_a]` and `[c, b_a]` are expanded over ordered monomials
//! `h^i l^j b^k c^m` of degree at most three. Coefficients are found by
//! exact solves at integer parameter points, interpolated, and the result
//! is checked symbolically.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::coeffring::{Expr, Scalar, Var};
use crate::decompose::{
    interpolate, monomial_label, ordered_monomials, reconstruct, solve_scalar, OrderedMonomial, ProductCache,
};
use crate::error::{Error, Result};
use crate::opexpr::parse_function;
use crate::report::{timed, CheckReport};
use crate::weyl::{DiffOp, VariableSpec};

use super::named::{b_a, c, h_a, l_a};
use super::parity::{modulo_parity, op_modulo_parity};

pub const GENERATOR_NAMES: [&str; 4] = ["h_a", "l_a", "b_a", "c"];
const H: usize = 0;
const L: usize = 1;
const B: usize = 2;
const C: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubicTarget {
    /// `[c, l_a]`
    L,
    /// `[c, b_a]`
    B,
}

impl CubicTarget {
    pub fn label(self) -> &'static str {
        match self {
            CubicTarget::L => "[c, l_a]",
            CubicTarget::B => "[c, b_a]",
        }
    }

    pub fn check_name(self) -> &'static str {
        match self {
            CubicTarget::L => "2d.cubic.l",
            CubicTarget::B => "2d.cubic.b",
        }
    }

    /// Right-hand side as printed: coefficient text and factors left to right.
    pub fn printed(self) -> &'static [(&'static str, &'static [usize])] {
        match self {
            CubicTarget::L => &[
                ("2", &[L, H, H]),
                ("-8", &[L, B]),
                ("-4*beta^2", &[L, L]),
                ("-8*beta*(3*mu+2*p+7)", &[L, H]),
                ("-(mu+1)*(2*mu+2*p-1)", &[H, H]),
                ("2*beta^2*(11*mu^2+mu*(20*p+38)+(p+1)*(9*p+26))", &[L]),
                ("-4", &[C]),
                ("(2*mu+2*p-1)*(2*mu+2*p+3)", &[B]),
                ("beta*(2*mu+2*p-1)*(2*mu+2*p+3)*(3*mu+2*p+7)", &[H]),
                ("-beta^2*(2*mu+2*p-1)*(mu*(mu*(5*mu+14*p+26)+62*p+41)+66*p+20)", &[]),
            ],
            CubicTarget::B => &[
                ("-4*beta^2", &[L, H, H]),
                ("-2", &[B, H, H]),
                ("-2*beta*(3*mu+2*p+7)", &[H, H, H]),
                ("4", &[B, B]),
                ("8*beta*(3*mu+2*p+7)", &[B, H]),
                ("8*beta^2", &[L, B]),
                ("8*beta^3*(3*mu+2*p+7)", &[L, H]),
                ("2*beta^2*(mu*(21*mu+30*p+94)+76*p+105)", &[H, H]),
                ("-2*beta^2*(mu*(11*mu+20*p+38)+44*p+26)", &[B]),
                ("4*beta^2", &[C]),
                ("-2*beta^3*(mu*(mu*(33*mu+82*p+191)+4*(97*p+86))+448*p+182)", &[H]),
                ("-4*beta^4*(5*mu^2+2*mu*(4*p+9)+4*(p+1)*(p+3))", &[L]),
                (
                    "2*beta^4*(mu+p+1)*(15*mu^3+mu^2*(39*p+89)+3*mu*(p*(74-11*p)+54)+p*(293-p*(8*p+65))+84)",
                    &[],
                ),
            ],
        }
    }

    fn generator(self) -> DiffOp {
        match self {
            CubicTarget::L => l_a(),
            CubicTarget::B => b_a(),
        }
    }
}

pub fn generators() -> Vec<DiffOp> {
    vec![h_a(), l_a(), b_a(), c()]
}

/// `[c, l_a]` or `[c, b_a]`.
pub fn cubic_target(t: CubicTarget) -> Result<DiffOp> {
    c().commutator(&t.generator())
}

fn parse_coeff(text: &str) -> Result<Expr> {
    parse_function(text, &VariableSpec::r_u())
}

/// The printed right-hand side, each product composed in the printed order.
pub fn printed_rhs(t: CubicTarget) -> Result<DiffOp> {
    let gens = generators();
    let spec = gens[0].spec().clone();
    let parts: Vec<DiffOp> = t
        .printed()
        .par_iter()
        .map(|(coeff, factors)| {
            let mut p = DiffOp::identity(&spec);
            for &f in factors.iter() {
                p = p.compose(&gens[f])?;
            }
            p.lmul(&parse_coeff(coeff)?)
        })
        .collect::<Result<_>>()?;
    DiffOp::sum(&spec, &parts)
}

/// Printed coefficients keyed by sorted (canonical) monomial. Only `h_a`
/// is moved past other factors, which commutes with everything modulo
/// `p^2 = p`.
pub fn printed_table(t: CubicTarget) -> Result<BTreeMap<OrderedMonomial, Expr>> {
    let mut out: BTreeMap<OrderedMonomial, Expr> = BTreeMap::new();
    for (coeff, factors) in t.printed() {
        let mut m = factors.to_vec();
        m.sort();
        let e = parse_coeff(coeff)?;
        let slot = out.entry(m).or_default();
        *slot = &*slot + &e;
    }
    Ok(out)
}

/// How parity enters the solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityMode {
    /// `p` interpolated like the other parameters.
    Symbolic,
    /// `p` sampled at 0 and 1 only; identities hold modulo `p^2 = p`.
    Ring,
}

#[derive(Clone, Debug)]
pub struct CubicDecomposition {
    pub target: CubicTarget,
    pub mode: ParityMode,
    pub monomials: Vec<OrderedMonomial>,
    pub coefficients: Vec<Expr>,
    /// `target - sum coeff * monomial`, reduced modulo `p^2 = p` in ring mode.
    pub residual: DiffOp,
    pub rank: usize,
    /// Grid points where the linear system had no solution.
    pub inconsistent_points: Vec<String>,
}

impl CubicDecomposition {
    pub fn exists(&self) -> bool {
        self.inconsistent_points.is_empty() && self.residual.is_zero()
    }

    pub fn coefficient_of(&self, m: &[usize]) -> Expr {
        self.monomials.iter().position(|x| x == m).map(|k| self.coefficients[k].clone()).unwrap_or_default()
    }

    pub fn table(&self) -> Vec<(String, String)> {
        self.monomials
            .iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (monomial_label(m, &GENERATOR_NAMES), c.to_string()))
            .collect()
    }
}

pub const GENERATOR_ORDERS: [u32; 4] = [2, 2, 4, 5];

/// Canonical monomials of degree `<= 3` no higher in order than the target.
pub fn cubic_monomials(target_order: u32) -> Vec<OrderedMonomial> {
    ordered_monomials(&GENERATOR_ORDERS, 3, target_order)
}

/// Interpolates values on a tensor grid, one variable at a time.
fn interpolate_grid(vars: &[(Var, Vec<Scalar>)], values: &[Expr]) -> Expr {
    match vars.split_first() {
        None => values[0].clone(),
        Some(((v, nodes), rest)) => {
            let stride = values.len() / nodes.len();
            let pts: Vec<(Scalar, Expr)> = nodes
                .iter()
                .enumerate()
                .map(|(k, x)| (x.clone(), interpolate_grid(rest, &values[k * stride..(k + 1) * stride])))
                .collect();
            interpolate(*v, &pts)
        }
    }
}

/// Runs the grid solve, interpolation and symbolic verification.
///
/// `degree` bounds the degree of every coefficient in each of `beta`, `mu`
/// (and `p` in symbolic mode).
pub fn decompose_cubic(t: CubicTarget, degree: usize, mode: ParityMode) -> Result<CubicDecomposition> {
    let target = cubic_target(t)?;
    let monomials = cubic_monomials(target.order());
    let nodes: Vec<Scalar> = (0..=degree as i64).map(|k| Scalar::int(k + 1)).collect();
    let mu_nodes: Vec<Scalar> = (0..=degree as i64).map(Scalar::int).collect();
    let p_nodes: Vec<Scalar> = match mode {
        ParityMode::Symbolic => (0..=degree as i64).map(Scalar::int).collect(),
        ParityMode::Ring => vec![Scalar::zero(), Scalar::one()],
    };
    // grid order: p outermost, then mu, then beta (matches interpolate_grid)
    let grid_vars = vec![(Var::P, p_nodes.clone()), (Var::Mu, mu_nodes.clone()), (Var::Beta, nodes.clone())];
    let mut points = Vec::new();
    for p in &p_nodes {
        for m in &mu_nodes {
            for b in &nodes {
                points.push(vec![(Var::Beta, b.clone()), (Var::Mu, m.clone()), (Var::P, p.clone())]);
            }
        }
    }
    let gens = generators();
    let solutions: Vec<(Vec<Scalar>, usize, bool)> = points
        .par_iter()
        .map(|pt| {
            let bind: Vec<(Var, Expr)> = pt.iter().map(|(v, s)| (*v, Expr::constant(s.clone()))).collect();
            let g: Vec<DiffOp> = gens.iter().map(|g| g.substitute(&bind)).collect::<Result<_>>()?;
            let tgt = target.substitute(&bind)?;
            let spec = g[0].spec().clone();
            let mut cache = ProductCache::new(&spec, &g);
            let products: Vec<DiffOp> = monomials.iter().map(|m| cache.get(m)).collect::<Result<_>>()?;
            let sol = solve_scalar(&tgt, &products)?;
            Ok((sol.x, sol.rank, sol.consistent))
        })
        .collect::<Result<_>>()?;
    let rank = solutions.iter().map(|s| s.1).min().unwrap_or(0);
    let inconsistent_points: Vec<String> = points
        .iter()
        .zip(&solutions)
        .filter(|(_, s)| !s.2)
        .map(|(pt, _)| pt.iter().map(|(v, s)| format!("{v}={s}")).collect::<Vec<_>>().join(","))
        .collect();
    let coefficients: Vec<Expr> = (0..monomials.len())
        .into_par_iter()
        .map(|k| {
            let vals: Vec<Expr> = solutions.iter().map(|s| Expr::constant(s.0[k].clone())).collect();
            let e = interpolate_grid(&grid_vars, &vals);
            match mode {
                ParityMode::Symbolic => Ok(e),
                ParityMode::Ring => modulo_parity(&e),
            }
        })
        .collect::<Result<_>>()?;
    let spec: Arc<VariableSpec> = target.spec().clone();
    let mut cache = ProductCache::new(&spec, &gens);
    let products: Vec<DiffOp> = monomials.iter().map(|m| cache.get(m)).collect::<Result<_>>()?;
    let mut residual = target.sub(&reconstruct(&spec, &products, &coefficients)?)?;
    if mode == ParityMode::Ring {
        residual = op_modulo_parity(&residual)?;
    }
    Ok(CubicDecomposition { target: t, mode, monomials, coefficients, residual, rank, inconsistent_points })
}

/// Per-monomial difference between a decomposition and the printed table,
/// modulo `p^2 = p` (where the printed orderings agree with the canonical
/// one).
pub fn table_discrepancies(d: &CubicDecomposition) -> Result<Vec<(String, Expr)>> {
    let printed = printed_table(d.target)?;
    let mut keys: Vec<OrderedMonomial> = d.monomials.clone();
    for k in printed.keys() {
        if !keys.contains(k) {
            keys.push(k.clone());
        }
    }
    let mut out = Vec::new();
    for k in keys {
        let ours = d.coefficient_of(&k);
        let theirs = printed.get(&k).cloned().unwrap_or_default();
        let diff = modulo_parity(&(&ours - &theirs))?;
        if !diff.is_zero() {
            out.push((monomial_label(&k, &GENERATOR_NAMES), diff));
        }
    }
    Ok(out)
}

/// Default coefficient degree bound per parameter.
pub const DEFAULT_DEGREE: usize = 4;

pub fn verify_cubic(t: CubicTarget) -> CheckReport {
    verify_cubic_with(t, DEFAULT_DEGREE)
}

pub fn verify_cubic_with(t: CubicTarget, degree: usize) -> CheckReport {
    timed(t.check_name(), |rep| {
        let target = cubic_target(t)?;
        let printed = target.sub(&printed_rhs(t)?)?;
        if printed.is_zero() {
            rep.note("printed right-hand side agrees exactly");
        } else {
            let reduced = op_modulo_parity(&printed)?;
            rep.note(format!(
                "printed right-hand side leaves {} terms for symbolic p, {} modulo p^2 = p",
                printed.len(),
                reduced.len()
            ));
            for line in reduced.term_strings().into_iter().take(4) {
                rep.note(format!("printed residual: {line}"));
            }
        }
        let mut d = decompose_cubic(t, degree, ParityMode::Symbolic)?;
        if !d.exists() {
            rep.note(format!(
                "no decomposition with symbolic p ({} inconsistent grid points, {} residual terms); retrying modulo p^2 = p",
                d.inconsistent_points.len(),
                d.residual.len()
            ));
            d = decompose_cubic(t, degree, ParityMode::Ring)?;
        }
        for p in d.inconsistent_points.iter().take(3) {
            rep.witness(format!("inconsistent at {p}"));
        }
        rep.require("grid solve", d.inconsistent_points.is_empty(), "linear system inconsistent");
        rep.residual(&format!("{} - decomposition", t.label()), &d.residual);
        if d.rank < d.monomials.len() {
            rep.note(format!("{} of {} monomials dependent", d.monomials.len() - d.rank, d.monomials.len()));
        }
        let diffs = table_discrepancies(&d)?;
        if diffs.is_empty() {
            rep.note("coefficient table agrees with the printed one modulo p^2 = p");
        }
        for (m, e) in diffs {
            rep.note(format!("coefficient of {m} differs from printed by {e}"));
        }
        Ok(())
    })
}

/// Rejects a target label outside `l_a`, `b_a`.
pub fn parse_target(s: &str) -> Result<CubicTarget> {
    match s {
        "l" | "l_a" => Ok(CubicTarget::L),
        "b" | "b_a" => Ok(CubicTarget::B),
        _ => Err(Error::Invalid(format!("unknown cubic target `{s}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flagrep::{matrix_of, OperatorMatrix};

    #[test]
    fn monomial_sets() {
        // [c, l_a] has order 6
        let ms = cubic_monomials(6);
        assert_eq!(ms.len(), 14);
        assert!(ms.contains(&vec![L, B]));
        assert!(!ms.contains(&vec![B, B]));
    }

    #[test]
    fn printed_table_sorts_factors() {
        let t = printed_table(CubicTarget::B).unwrap();
        assert!(t.contains_key(&vec![H, H, B]));
        assert_eq!(t[&vec![C]], parse_coeff("4*beta^2").unwrap());
    }

    fn point() -> Vec<(Var, Expr)> {
        vec![(Var::Beta, Expr::ratio(3, 7)), (Var::Mu, Expr::ratio(5, 2)), (Var::P, Expr::int(1))]
    }

    fn matrix(op: &DiffOp, n: usize) -> OperatorMatrix {
        matrix_of(&op.substitute(&point()).unwrap(), n).unwrap()
    }

    fn matrix_product(m: &[usize], mats: &[OperatorMatrix], n: usize) -> OperatorMatrix {
        m.iter().fold(OperatorMatrix::identity(n), |acc, &k| acc.mul(&mats[k]).unwrap())
    }

    fn scaled(m: &OperatorMatrix, e: &Expr) -> OperatorMatrix {
        m.scale(&e.substitute(&point()).unwrap().constant_value().unwrap())
    }

    // Independent of operator composition: products are taken as matrices
    // on the invariant flag spaces.
    #[test]
    fn decomposition_holds_as_matrices() {
        let d = decompose_cubic(CubicTarget::L, DEFAULT_DEGREE, ParityMode::Ring).unwrap();
        assert!(d.exists());
        assert_eq!(d.coefficient_of(&[C]), Expr::int(-4));
        assert_eq!(d.coefficient_of(&[L, B]), Expr::int(-8));
        for n in 0..=4 {
            let mats: Vec<_> = generators().iter().map(|g| matrix(g, n)).collect();
            let lhs = mats[C].commutator(&mats[L]).unwrap();
            let mut rhs = OperatorMatrix::zero(n);
            for (m, c) in d.monomials.iter().zip(&d.coefficients) {
                if !c.is_zero() {
                    rhs = rhs.sub(&scaled(&matrix_product(m, &mats, n), &-c)).unwrap();
                }
            }
            assert!(lhs.sub(&rhs).unwrap().is_zero(), "n = {n}");
        }
    }

    #[test]
    fn printed_right_hand_side_differs_as_matrices() {
        let n = 3;
        let mats: Vec<_> = generators().iter().map(|g| matrix(g, n)).collect();
        let lhs = mats[C].commutator(&mats[L]).unwrap();
        let mut rhs = OperatorMatrix::zero(n);
        for (coeff, factors) in CubicTarget::L.printed() {
            rhs = rhs.sub(&scaled(&matrix_product(factors, &mats, n), &-parse_coeff(coeff).unwrap())).unwrap();
        }
        assert!(!lhs.sub(&rhs).unwrap().is_zero());
    }
}
