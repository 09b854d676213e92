//! The operators of the two-dimensional reduction, transcribed in the
//! operator grammar. `mu` stands for `|m|` throughout.

use std::sync::OnceLock;

use crate::opexpr::parse_operator;
use crate::weyl::{DiffOp, VariableSpec};

/// Gauge-rotated Sturm operator on `(r, rho)`.
pub const H_TEXT: &str = "-1/2*r*D[r]^2 - 1/2*r*D[rho]^2 - rho*D[r]*D[rho] \
    - ((1+2*mu)*r - 2*beta*rho^2)/(2*rho)*D[rho] \
    - (1+p+mu-beta*r)*D[r] + beta*(1+p+mu)";

/// Algebraic form on `(r, u = rho^2)`.
pub const H_A_TEXT: &str = "-1/2*r*D[r]^2 - 2*r*u*D[u]^2 - 2*u*D[r]*D[u] \
    - 2*((1+mu)*r - beta*u)*D[u] \
    - (1+p+mu-beta*r)*D[r] + beta*(1+p+mu)";

/// Second-order integral.
pub const L_A_TEXT: &str = "2*u*(r^2-u)*D[u]^2 - (u*(1+2*p) - 2*(1+mu)*(r^2-u))*D[u]";

/// Twice the fourth-order integral.
pub const TWO_B_A_TEXT: &str = "1/4*u*D[r]^4 + 4*u^3*D[u]^4 + 2*u*(2*r^2+u)*D[u]^2*D[r]^2 \
    + 2*r*u*D[r]^3*D[u] + 8*r*u^2*D[u]^3*D[r] + ((mu+1)*r - beta*u)*D[r]^3 \
    + 8*u^2*(mu+p+3-beta*r)*D[u]^3 \
    + (2*u*(mu+p-3*beta*r+3) + 4*(mu+1)*r^2)*D[r]^2*D[u] \
    + 4*u*(r*(3*mu+2*p-2*beta*r+7) - beta*u)*D[u]^2*D[r] \
    + ((mu+1)*(mu+p+1) - 3*beta*(mu+1)*r + beta^2*u)*D[r]^2 \
    + (4*r*((mu+1)*(mu+2*p+3) + beta^2*u) - 4*beta*u*(mu+p+3) - 8*beta*(mu+1)*r^2)*D[r]*D[u] \
    + 4*u*(mu^2 + 3*mu*(p-beta*r+2) + p*(7-2*beta*r) + beta*r*(beta*r-7) + 7)*D[u]^2 \
    - 2*beta*(mu+1)*(mu+p+1-beta*r)*D[r] \
    + (4*(mu+1)*(p+1)*(mu+p+1) - 4*beta*(mu+1)*r*(mu+2*p+3) + 2*beta^2*(2*(mu+1)*r^2+u))*D[u]";

/// Displayed fifth- and fourth-order part of `c = [b_a, l_a]`.
pub const C_LEADING_TEXT: &str = "8*u^3*(r^2-u)*D[u]^5 + 8*r*u^2*(r^2-u)*D[u]^4*D[r] \
    + 2*r*u*(u-r^2)*D[u]^2*D[r]^3 + 1/2*u*(u-r^2)*D[u]*D[r]^4 \
    + 2*u^2*(2*r^2*(5*mu+2*p+17) - 10*u*(mu+p) - 4*beta*r^3 + 4*beta*r*u - 37*u)*D[u]^4 \
    + 8*r*u*(-2*u*(mu+p) + 2*(mu+2)*r^2 - 5*u)*D[u]^3*D[r] \
    + 3*u*(-2*(p+1)*r^2 + 2*beta*r^3 - 2*beta*r*u + u)*D[u]^2*D[r]^2 \
    - 2*(r^2-u)*(mu*r + r - beta*u)*D[u]*D[r]^3 \
    + 1/8*(2*u*(mu+p) - 2*(mu+1)*r^2 + 3*u)*D[r]^4";

fn ru(text: &str) -> DiffOp {
    parse_operator(text, &VariableSpec::r_u()).expect("built-in operator text parses")
}

macro_rules! cached {
    ($name:ident, $body:expr) => {
        pub fn $name() -> DiffOp {
            static C: OnceLock<DiffOp> = OnceLock::new();
            C.get_or_init(|| $body).clone()
        }
    };
}

cached!(h, parse_operator(H_TEXT, &VariableSpec::r_rho()).expect("built-in operator text parses"));
cached!(h_a, ru(H_A_TEXT));
cached!(l_a, ru(L_A_TEXT));
cached!(b_a, ru(TWO_B_A_TEXT).scale(&crate::coeffring::Scalar::ratio(1, 2)));
cached!(c_leading, ru(C_LEADING_TEXT));
cached!(c, b_a().commutator(&l_a()).expect("same chart"));

/// The named family `(h, h_a, l_a, b_a, c)`.
#[derive(Clone, Debug)]
pub struct NamedOperators {
    pub h: DiffOp,
    pub h_a: DiffOp,
    pub l_a: DiffOp,
    pub b_a: DiffOp,
    pub c: DiffOp,
}

pub fn build_named() -> NamedOperators {
    NamedOperators { h: h(), h_a: h_a(), l_a: l_a(), b_a: b_a(), c: c() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{Expr, Var};
    use crate::opexpr::parse_function;

    fn f(text: &str) -> Expr {
        parse_function(text, &VariableSpec::r_u()).unwrap()
    }

    #[test]
    fn transcription_spot_checks() {
        assert_eq!(h_a().coeff_of(&[]).unwrap(), f("beta*(1+p+mu)"));
        assert_eq!(l_a().coeff_of(&[(Var::U, 2)]).unwrap(), f("2*u*(r^2-u)"));
        assert_eq!(b_a().coeff_of(&[(Var::R, 4)]).unwrap(), f("u/8"));
        assert_eq!([h_a().order(), l_a().order(), b_a().order()], [2, 2, 4]);
        assert_eq!(h().order(), 2);
    }

    #[test]
    fn hand_applications() {
        let one = Expr::one();
        let r = Expr::var(Var::R);
        let u = Expr::var(Var::U);
        assert_eq!(h_a().apply(&one).unwrap(), f("beta*(1+p+mu)"));
        assert_eq!(h_a().apply(&r).unwrap(), f("-(1+p+mu) + beta*(2+p+mu)*r"));
        assert_eq!(l_a().apply(&u).unwrap(), f("2*(1+mu)*r^2 - (3+2*p+2*mu)*u"));
    }
}
