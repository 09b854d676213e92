//! Small dense matrices over the coefficient field (Jacobians, metrics).

use super::context::AlgebraicContext;
use super::expr::Expr;
use crate::error::{Error, Result};

pub type ExprMatrix = Vec<Vec<Expr>>;

pub fn identity(n: usize) -> ExprMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Expr::one() } else { Expr::zero() }).collect()).collect()
}

/// Determinant by cofactor expansion; sizes here never exceed 3.
pub fn det(m: &ExprMatrix, ctx: &AlgebraicContext) -> Result<Expr> {
    let n = m.len();
    match n {
        0 => Ok(Expr::one()),
        1 => Ok(m[0][0].clone()),
        2 => ctx.reduce(&(&(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]))),
        _ => {
            let mut parts = Vec::with_capacity(n);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor = minor(m, 0, j);
                let d = &m[0][j] * &det(&minor, ctx)?;
                parts.push(if j % 2 == 0 { d } else { -d });
            }
            ctx.reduce(&Expr::sum(parts.iter()))
        }
    }
}

fn minor(m: &ExprMatrix, row: usize, col: usize) -> ExprMatrix {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, e)| e.clone()).collect())
        .collect()
}

/// `(m^-1, det m)` via the adjugate.
pub fn inverse(m: &ExprMatrix, ctx: &AlgebraicContext) -> Result<(ExprMatrix, Expr)> {
    let n = m.len();
    let d = det(m, ctx)?;
    if d.is_zero() {
        return Err(Error::Singular);
    }
    let dinv = d.inv()?;
    if n == 1 {
        return Ok((vec![vec![dinv]], d));
    }
    let mut inv = vec![vec![Expr::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let c = det(&minor(m, j, i), ctx)?;
            let c = if (i + j) % 2 == 0 { c } else { -c };
            inv[i][j] = ctx.reduce(&(&c * &dinv))?;
        }
    }
    Ok((inv, d))
}

pub fn mul(a: &ExprMatrix, b: &ExprMatrix, ctx: &AlgebraicContext) -> Result<ExprMatrix> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Expr::zero(); m]; n];
    for i in 0..n {
        for j in 0..m {
            let parts: Vec<Expr> = (0..b.len()).map(|k| &a[i][k] * &b[k][j]).collect();
            out[i][j] = ctx.reduce(&Expr::sum(parts.iter()))?;
        }
    }
    Ok(out)
}

pub fn transpose(a: &ExprMatrix) -> ExprMatrix {
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Var;

    #[test]
    fn inverse_times_matrix_is_identity() {
        let ctx = AlgebraicContext::flat("ru", &[Var::R, Var::U]);
        let r = Expr::var(Var::R);
        let u = Expr::var(Var::U);
        let m = vec![vec![r.scale(&crate::coeffring::Scalar::ratio(1, 2)), u.clone()], vec![u.clone(), (&r * &u).scale(&crate::coeffring::Scalar::int(2))]];
        let (inv, d) = inverse(&m, &ctx).unwrap();
        assert_eq!(d, &u * &(&(&r * &r) - &u));
        assert_eq!(mul(&m, &inv, &ctx).unwrap(), identity(2));
    }

    #[test]
    fn three_by_three_det() {
        let ctx = AlgebraicContext::flat("xyz", &[Var::X]);
        let x = Expr::var(Var::X);
        let m = vec![
            vec![Expr::int(2), Expr::zero(), Expr::one()],
            vec![x.clone(), Expr::one(), Expr::zero()],
            vec![Expr::zero(), Expr::int(3), Expr::one()],
        ];
        // 2*(1) - 0 + 1*(3x)
        assert_eq!(det(&m, &ctx).unwrap(), &Expr::int(2) + &x.scale(&crate::coeffring::Scalar::int(3)));
        let singular = vec![vec![x.clone(), x.clone()], vec![Expr::one(), Expr::one()]];
        assert!(matches!(inverse(&singular, &ctx), Err(Error::Singular)));
    }
}
