//! Commutation with `h_a` and the displayed part of `c = [b_a, l_a]`.

use crate::error::Result;
use crate::opexpr::parse_operator;
use crate::report::{timed, CheckReport};
use crate::weyl::{DiffOp, VariableSpec};

use super::named::{b_a, c, h_a, l_a, C_LEADING_TEXT};
use super::parity::{at_parity, op_modulo_parity};

/// `[h_a, x]` for `x` in `l_a, b_a, c`, with labels.
pub fn integral_commutators() -> Result<Vec<(&'static str, DiffOp)>> {
    let h = h_a();
    Ok(vec![
        ("[h_a, l_a]", h.commutator(&l_a())?),
        ("[h_a, b_a]", h.commutator(&b_a())?),
        ("[h_a, c]", h.commutator(&c())?),
    ])
}

/// Symbolic parity first; a residual that vanishes modulo `p^2 = p` is
/// reported as such and the check passes on the parity ring.
pub fn verify_integrals() -> CheckReport {
    timed("2d.integrals", |rep| {
        for (label, comm) in integral_commutators()? {
            if comm.is_zero() {
                continue;
            }
            let reduced = op_modulo_parity(&comm)?;
            rep.residual(&format!("{label} mod p^2=p"), &reduced);
            if reduced.is_zero() {
                rep.note(format!(
                    "{label} has {} nonzero terms for symbolic p, all vanishing modulo p^2 = p",
                    comm.len()
                ));
            }
            for parity in [0, 1] {
                rep.residual(&format!("{label} at p={parity}"), &at_parity(&comm, parity)?);
            }
        }
        Ok(())
    })
}

/// Difference between the computed `c` and its displayed terms, restricted
/// to differential orders 4 and 5.
pub fn leading_discrepancy(computed: &DiffOp) -> Result<DiffOp> {
    let displayed = parse_operator(C_LEADING_TEXT, &VariableSpec::r_u())?;
    let top = computed.homogeneous_part(5).add(&computed.homogeneous_part(4))?;
    top.sub(&displayed)
}

pub fn compute_c_and_verify_leading() -> CheckReport {
    timed("2d.c.leading", |rep| {
        let cc = c();
        rep.require("order", cc.order() == 5, format!("order {}", cc.order()));
        rep.residual("c - displayed", &leading_discrepancy(&cc)?);
        rep.note(format!("{} terms of order <= 3 recorded, not compared", cc.truncate(3).len()));
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{Expr, Scalar, Var};
    use crate::weyl::DerivIndex;

    #[test]
    fn h_a_commutes_with_l_a_symbolically() {
        assert!(h_a().commutator(&l_a()).unwrap().is_zero());
    }

    #[test]
    fn integrals_pass_on_parity_ring() {
        let rep = verify_integrals();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn c_leading_terms() {
        let rep = compute_c_and_verify_leading();
        assert!(rep.passed(), "{rep}");
        let s = VariableSpec::r_u();
        let u = Expr::var(Var::U);
        let r = Expr::var(Var::R);
        let du5 = DerivIndex::new(&[0, 5]);
        let expected = (&u.pow(3).unwrap() * &(&(&r * &r) - &u)).scale(&Scalar::int(8));
        assert_eq!(c().coeff(&du5), expected);
        // tampering one displayed coefficient must show up
        let bumped = c().add(&parse_operator("u*D[u]*D[r]^4", &s).unwrap()).unwrap();
        assert!(!leading_discrepancy(&bumped).unwrap().is_zero());
    }
}
