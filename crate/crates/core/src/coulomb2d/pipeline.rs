//! From the 3D Sturm operator to the algebraic operator on `(r, u)`.

use crate::coeffring::{Expr, Scalar, Var};
use crate::diffgeo::{laplace_beltrami, polar_cometric};
use crate::error::Result;
use crate::report::{timed, CheckReport};
use crate::weyl::{change_variables, conjugate, project_angular, DiffOp, GaugeData, VariableSpec};

use super::named::{h, h_a};
use super::parity::at_parity;

/// `K = -(r/2) Laplacian - E r` on `(r, rho, phi)`.
pub fn sturm_operator_polar() -> Result<DiffOp> {
    let spec = VariableSpec::polar();
    let lap = laplace_beltrami(&polar_cometric()?)?;
    let r = Expr::var(Var::R);
    let e = Expr::var(Var::E);
    lap.lmul(&r.scale(&Scalar::ratio(-1, 2)))?.add(&DiffOp::mult(&spec, -(&e * &r)))
}

/// `d log` of `rho^mu exp(-beta r) z^p exp(i mu phi)` with `z^2 = r^2 - rho^2`.
///
/// `with_exponential = false` drops the `exp(-beta r)` factor (a negative
/// control).
pub fn sturm_gauge(parity: i64, with_exponential: bool) -> Result<GaugeData> {
    let r = Expr::var(Var::R);
    let rho = Expr::var(Var::Rho);
    let mu = Expr::var(Var::Mu);
    let beta = Expr::var(Var::Beta);
    let z2 = &(&r * &r) - &(&rho * &rho);
    let p = Expr::int(parity);
    let mut wr = (&p * &r).checked_div(&z2)?;
    if with_exponential {
        wr = &wr - &beta;
    }
    let wrho = &mu.checked_div(&rho)? - &(&p * &rho).checked_div(&z2)?;
    Ok(GaugeData::new(vec![(Var::R, wr), (Var::Rho, wrho)]).with_angular(Var::Phi, &Expr::i() * &mu))
}

/// `G^-1 K G` with `E = -beta^2/2`, angular sector projected, on `(r, rho)`.
pub fn derive_h(gauge: &GaugeData) -> Result<DiffOp> {
    let k = sturm_operator_polar()?;
    let rotated = conjugate(&k, gauge)?;
    let beta = Expr::var(Var::Beta);
    let on_shell = rotated.substitute(&[(Var::E, (&beta * &beta).scale(&Scalar::ratio(-1, 2)))])?;
    let (phi, charge) = gauge.angular_charge().cloned().unwrap_or((Var::Phi, Expr::zero()));
    project_angular(&on_shell, phi, &charge, &VariableSpec::r_rho())
}

/// Gauge pipeline at a literal parity, compared with the transcribed `h`.
pub fn derive_h_pipeline(parity: i64) -> CheckReport {
    timed(&format!("2d.pipeline.p{parity}"), |rep| {
        let got = derive_h(&sturm_gauge(parity, true)?)?;
        let expected = at_parity(&h(), parity)?;
        rep.residual("G^-1 K G - h", &got.sub(&expected)?);
        Ok(())
    })
}

/// Same pipeline without the exponential factor; must leave a residual.
pub fn tampered_pipeline() -> Result<DiffOp> {
    let got = derive_h(&sturm_gauge(0, false)?)?;
    got.sub(&at_parity(&h(), 0)?)
}

/// `u = rho^2` applied to `h_a`, compared with `h` (symbolic parity).
pub fn relate_h_ha_with(ha: &DiffOp) -> Result<DiffOp> {
    let mapped = change_variables(ha, &VariableSpec::r_rho(), &[(Var::U, Expr::var(Var::Rho).pow(2)?)])?;
    mapped.sub(&h())
}

pub fn relate_h_ha() -> CheckReport {
    timed("2d.h_a.chart", |rep| {
        rep.residual("h_a(u = rho^2) - h", &relate_h_ha_with(&h_a())?);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opexpr::parse_operator;

    #[test]
    fn polar_laplacian_structure() {
        let lap = laplace_beltrami(&polar_cometric().unwrap()).unwrap();
        let expected = parse_operator(
            "D[r]^2 + D[rho]^2 + 2*rho/r*D[r]*D[rho] + 1/rho^2*D[phi]^2 + 2/r*D[r] + 1/rho*D[rho]",
            &VariableSpec::polar(),
        )
        .unwrap();
        assert_eq!(lap, expected);
    }

    #[test]
    fn pipeline_both_parities() {
        assert!(derive_h_pipeline(0).passed());
        assert!(derive_h_pipeline(1).passed());
        assert!(!tampered_pipeline().unwrap().is_zero());
    }

    #[test]
    fn algebraic_form_matches_chart_change() {
        assert!(relate_h_ha().passed());
        let broken = h_a().sub(&parse_operator("-2*u*D[r]*D[u]", &VariableSpec::r_u()).unwrap()).unwrap();
        assert!(!relate_h_ha_with(&broken).unwrap().is_zero());
    }
}
