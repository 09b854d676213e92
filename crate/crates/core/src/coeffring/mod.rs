//! Exact coefficient arithmetic: Gaussian rationals, sparse multivariate
//! polynomials, reduced rational functions and square-root adjuncts.

mod context;
mod expr;
pub mod gcd;
pub mod matrix;
mod poly;
mod scalar;
mod var;

pub use context::{Adjunct, AlgebraicContext, Derivation};
pub use expr::{Expr, RationalFunction};
pub use poly::{Monomial, MultiPoly};
pub use scalar::Scalar;
pub use var::{Var, NVARS};


/// `reduce(num, den)` in a context: the canonical form of `num / den`.
pub fn reduce(num: &MultiPoly, den: &MultiPoly, ctx: &AlgebraicContext) -> crate::Result<Expr> {
    let den = ctx.reduce_poly(den);
    if den.is_zero() {
        return Err(crate::Error::ZeroDenominator);
    }
    ctx.reduce(&Expr::new(num.clone(), den)?)
}
