//! Moving operators between charts and separating the angular sector.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::diffop::{CommutingPowers, DerivIndex, DiffOp};
use super::spec::VariableSpec;
use crate::coeffring::{matrix, Expr, Var};
use crate::error::{Error, Result};

/// Rewrites `a` in the chart `target`.
///
/// `mapping` expresses every source space variable through the target
/// variables, e.g. `u -> rho^2`. Source derivatives become
/// `d_s = sum_t ((J^T)^-1)_{s t} d_t` with `J_{s t} = d s / d t`.
pub fn change_variables(a: &DiffOp, target: &Arc<VariableSpec>, mapping: &[(Var, Expr)]) -> Result<DiffOp> {
    let source = a.spec();
    if source.dim() != target.dim() {
        return Err(Error::SingularJacobian);
    }
    let image = |s: Var| -> Expr {
        mapping.iter().find(|(v, _)| *v == s).map(|(_, e)| e.clone()).unwrap_or_else(|| Expr::var(s))
    };
    let tctx = target.ctx();
    let mut jac = Vec::with_capacity(source.dim());
    for &s in source.space() {
        let e = tctx.reduce(&image(s))?;
        let row: Vec<Expr> = target.space().iter().map(|&t| tctx.derivative(&e, t)).collect::<Result<_>>()?;
        jac.push(row);
    }
    let (m, _) = matrix::inverse(&matrix::transpose(&jac), tctx).map_err(|e| match e {
        Error::Singular => Error::SingularJacobian,
        other => other,
    })?;
    let factors: Vec<DiffOp> = m
        .iter()
        .map(|row| {
            DiffOp::from_terms(target, row.iter().enumerate().map(|(j, c)| (DerivIndex::unit(j), c.clone())))
        })
        .collect();
    let mut powers = CommutingPowers::new(target, factors);
    let bindings: Vec<(Var, Expr)> = source.space().iter().map(|&s| (s, image(s))).collect();
    let mut parts = Vec::with_capacity(a.len());
    for (idx, c) in a.terms() {
        let c = tctx.substitute(c, &bindings)?;
        parts.push(powers.get(idx)?.lmul(&c)?);
    }
    DiffOp::sum(target, &parts)
}

/// Replaces `d_phi` by the constant `charge` and drops `phi` from the chart.
///
/// Fails if a coefficient still depends on `phi` or if the result is not
/// real, both symptoms of a wrong gauge.
pub fn project_angular(a: &DiffOp, phi: Var, charge: &Expr, target: &Arc<VariableSpec>) -> Result<DiffOp> {
    let source = a.spec();
    let k = source.position(phi)?;
    let kept: Vec<usize> = (0..source.dim()).filter(|&j| j != k).collect();
    let kept_vars: Vec<Var> = kept.iter().map(|&j| source.space()[j]).collect();
    if kept_vars != target.space() {
        return Err(Error::SpecMismatch(source.name().into(), target.name().into()));
    }
    let mut terms: BTreeMap<DerivIndex, Vec<Expr>> = BTreeMap::new();
    for (idx, c) in a.terms() {
        if c.contains(phi) {
            return Err(Error::ResidualDependence(phi, "angular projection"));
        }
        let factor = charge.pow(idx.get(k) as i32)?;
        let exps: Vec<u8> = kept.iter().map(|&j| idx.get(j)).collect();
        terms.entry(DerivIndex::new(&exps)).or_default().push(c * &factor);
    }
    let mut out = BTreeMap::new();
    for (i, cs) in terms {
        let c = target.ctx().reduce(&Expr::sum(cs.iter()))?;
        if !c.is_zero() {
            if !c.is_real() {
                return Err(Error::ImaginaryResidual);
            }
            out.insert(i, c);
        }
    }
    Ok(DiffOp::from_terms(target, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Scalar;

    fn rho_chart() -> Arc<VariableSpec> {
        VariableSpec::r_rho()
    }

    fn u_to_rho() -> Vec<(Var, Expr)> {
        vec![(Var::U, Expr::var(Var::Rho).pow(2).unwrap())]
    }

    #[test]
    fn first_order_chain_rule() {
        let s = VariableSpec::r_u();
        let a = DiffOp::monomial(&s, Expr::var(Var::U), &[(Var::U, 1)]).unwrap();
        let got = change_variables(&a, &rho_chart(), &u_to_rho()).unwrap();
        let half_rho = Expr::var(Var::Rho).scale(&Scalar::ratio(1, 2));
        assert_eq!(got, DiffOp::monomial(&rho_chart(), half_rho, &[(Var::Rho, 1)]).unwrap());
        let got2 = change_variables(&a.scale(&Scalar::int(2)), &rho_chart(), &u_to_rho()).unwrap();
        assert_eq!(got2, DiffOp::monomial(&rho_chart(), Expr::var(Var::Rho), &[(Var::Rho, 1)]).unwrap());
    }

    #[test]
    fn second_order_chain_rule() {
        let s = VariableSpec::r_u();
        let u = Expr::var(Var::U);
        let a = DiffOp::monomial(&s, (&u * &u).scale(&Scalar::int(4)), &[(Var::U, 2)])
            .unwrap()
            .add(&DiffOp::monomial(&s, u.scale(&Scalar::int(2)), &[(Var::U, 1)]).unwrap())
            .unwrap();
        let got = change_variables(&a, &rho_chart(), &u_to_rho()).unwrap();
        let rho2 = Expr::var(Var::Rho).pow(2).unwrap();
        assert_eq!(got, DiffOp::monomial(&rho_chart(), rho2, &[(Var::Rho, 2)]).unwrap());
    }

    #[test]
    fn round_trip_through_sqrt_chart() {
        // forward to (r, rho) then back with rho = sqrt(u) adjoined
        let s = VariableSpec::r_u();
        let r = Expr::var(Var::R);
        let u = Expr::var(Var::U);
        let a = DiffOp::monomial(&s, &r * &u, &[(Var::R, 1), (Var::U, 1)])
            .unwrap()
            .add(&DiffOp::monomial(&s, u.clone(), &[(Var::U, 2)]).unwrap())
            .unwrap();
        let fwd = change_variables(&a, &rho_chart(), &u_to_rho()).unwrap();
        let ru_rho = VariableSpec::r_u_with_rho();
        let back = change_variables(&fwd, &ru_rho, &[(Var::Rho, Expr::var(Var::Rho))]).unwrap();
        assert_eq!(back, a.rehome(&ru_rho).unwrap());
    }

    #[test]
    fn singular_mapping() {
        let s = VariableSpec::r_u();
        let a = DiffOp::d(&s, Var::U).unwrap();
        let bad = vec![(Var::U, Expr::var(Var::R))];
        assert!(matches!(change_variables(&a, &rho_chart(), &bad), Err(Error::SingularJacobian)));
    }

    #[test]
    fn angular_projection() {
        let p = VariableSpec::polar();
        let mu = Expr::var(Var::Mu);
        let im = &Expr::i() * &mu;
        let rho2inv = Expr::var(Var::Rho).pow(-2).unwrap();
        let a = DiffOp::monomial(&p, rho2inv.clone(), &[(Var::Phi, 2)]).unwrap();
        let got = project_angular(&a, Var::Phi, &im, &rho_chart()).unwrap();
        assert_eq!(got, DiffOp::mult(&rho_chart(), -(&(&mu * &mu) * &rho2inv)));

        let plain = DiffOp::d(&p, Var::R).unwrap();
        assert_eq!(project_angular(&plain, Var::Phi, &im, &rho_chart()).unwrap(), DiffOp::d(&rho_chart(), Var::R).unwrap());

        let dphi = DiffOp::d(&p, Var::Phi).unwrap();
        assert!(matches!(project_angular(&dphi, Var::Phi, &im, &rho_chart()), Err(Error::ImaginaryResidual)));
    }
}
