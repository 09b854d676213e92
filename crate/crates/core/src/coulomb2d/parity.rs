//! Reduction modulo `p^2 = p` for the parity parameter `p in {0, 1}`.

use crate::coeffring::{Expr, Monomial, MultiPoly, Var};
use crate::error::Result;
use crate::weyl::DiffOp;

fn cap(p: &MultiPoly) -> MultiPoly {
    MultiPoly::from_terms(p.terms().iter().map(|(m, c)| {
        let m: Monomial = if m.exp(Var::P) > 1 { m.with_exp(Var::P, 1) } else { *m };
        (m, c.clone())
    }))
}

/// Image of `e` in the ring where `p^2 = p`.
pub fn modulo_parity(e: &Expr) -> Result<Expr> {
    if !e.contains(Var::P) {
        return Ok(e.clone());
    }
    Expr::new(cap(e.num()), cap(e.den()))
}

pub fn op_modulo_parity(a: &DiffOp) -> Result<DiffOp> {
    a.map_coeffs(modulo_parity)
}

/// Specializes `p` to 0 or 1.
pub fn at_parity(a: &DiffOp, parity: i64) -> Result<DiffOp> {
    a.substitute(&[(Var::P, Expr::int(parity))])
}
