//! Gauge rotations `G^-1 A G` driven by the logarithmic gradient of `G`.

use super::diffop::{CommutingPowers, DiffOp};
use super::spec::VariableSpec;
use crate::coeffring::{Expr, Var};
use crate::error::{Error, Result};

/// `d log G` for a gauge factor `G`, one entry per space variable.
///
/// `angular_charge` is the constant `i m` of an `exp(i m phi)` factor; it is
/// kept apart so that the angular sector can be projected afterwards.
#[derive(Clone, Debug)]
pub struct GaugeData {
    log_gradient: Vec<(Var, Expr)>,
    angular_charge: Option<(Var, Expr)>,
}

impl GaugeData {
    pub fn new(log_gradient: Vec<(Var, Expr)>) -> Self {
        GaugeData { log_gradient, angular_charge: None }
    }

    pub fn with_angular(mut self, phi: Var, charge: Expr) -> Self {
        self.angular_charge = Some((phi, charge));
        self
    }

    pub fn log_gradient(&self) -> &[(Var, Expr)] {
        &self.log_gradient
    }

    pub fn angular_charge(&self) -> Option<&(Var, Expr)> {
        self.angular_charge.as_ref()
    }

    /// Component for `v`, zero when absent.
    pub fn component(&self, v: Var) -> Expr {
        self.log_gradient.iter().find(|(w, _)| *w == v).map(|(_, e)| e.clone()).unwrap_or_default()
    }

    /// Checks `d_u w_v = d_v w_u` for every pair of space variables.
    pub fn check_closed(&self, spec: &VariableSpec) -> Result<()> {
        for (v, _) in &self.log_gradient {
            spec.position(*v)?;
        }
        let space = spec.space();
        for (a, &u) in space.iter().enumerate() {
            for &v in &space[a + 1..] {
                let duv = spec.ctx().derivative(&self.component(v), u)?;
                let dvu = spec.ctx().derivative(&self.component(u), v)?;
                if duv != dvu {
                    return Err(Error::NonClosedGauge(u, v));
                }
            }
        }
        Ok(())
    }
}

/// `G^-1 A G`: every `d_v` becomes `d_v + w_v`, then normal ordering.
///
/// The angular charge, if any, is not applied here; see
/// [`super::chart::project_angular`].
pub fn conjugate(a: &DiffOp, g: &GaugeData) -> Result<DiffOp> {
    let spec = a.spec().clone();
    g.check_closed(&spec)?;
    let shifted: Vec<DiffOp> = spec
        .space()
        .iter()
        .map(|&v| DiffOp::d(&spec, v)?.add(&DiffOp::mult(&spec, g.component(v))))
        .collect::<Result<_>>()?;
    let mut powers = CommutingPowers::new(&spec, shifted);
    let mut parts = Vec::with_capacity(a.len());
    for (idx, c) in a.terms() {
        let p = powers.get(idx)?;
        parts.push(p.lmul(c)?);
    }
    DiffOp::sum(&spec, &parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Scalar;

    fn beta() -> Expr {
        Expr::var(Var::Beta)
    }

    #[test]
    fn exponential_gauge_shifts_derivative() {
        let s = VariableSpec::r_u();
        let g = GaugeData::new(vec![(Var::R, -beta())]);
        let got = conjugate(&DiffOp::d(&s, Var::R).unwrap(), &g).unwrap();
        let expected = DiffOp::d(&s, Var::R).unwrap().add(&DiffOp::mult(&s, -beta())).unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn power_gauge_in_u() {
        let s = VariableSpec::r_u();
        let mu = Expr::var(Var::Mu);
        let w = (&(&Expr::one() + &mu.scale(&Scalar::int(2))) * &Expr::var(Var::U).inv().unwrap())
            .scale(&Scalar::ratio(-1, 4));
        let g = GaugeData::new(vec![(Var::U, w.clone())]);
        let got = conjugate(&DiffOp::d(&s, Var::U).unwrap(), &g).unwrap();
        let expected = DiffOp::d(&s, Var::U).unwrap().add(&DiffOp::mult(&s, w)).unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn second_order_exponential() {
        let s = VariableSpec::r_u();
        let g = GaugeData::new(vec![(Var::R, -beta())]);
        let got = conjugate(&DiffOp::d_pow(&s, Var::R, 2).unwrap(), &g).unwrap();
        let expected = DiffOp::d_pow(&s, Var::R, 2)
            .unwrap()
            .add(&DiffOp::monomial(&s, beta().scale(&Scalar::int(-2)), &[(Var::R, 1)]).unwrap())
            .unwrap()
            .add(&DiffOp::mult(&s, &beta() * &beta()))
            .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn non_closed_gauge_is_rejected() {
        let s = VariableSpec::r_u();
        let g = GaugeData::new(vec![(Var::R, Expr::var(Var::U))]);
        assert!(matches!(
            conjugate(&DiffOp::d(&s, Var::R).unwrap(), &g),
            Err(Error::NonClosedGauge(_, _))
        ));
    }
}
