//! Multivariate gcd over Q(i) by recursive content / primitive-part
//! decomposition and primitive pseudo-remainder sequences.

use super::poly::MultiPoly;
use super::var::Var;

/// Monic greatest common divisor. `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    if a.is_monomial() || b.is_monomial() {
        let g = a.monomial_content().gcd(&b.monomial_content());
        return MultiPoly::term(g, super::Scalar::one());
    }
    // pull out monomial content first; keeps the PRS small
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a = if ma.is_one() { a.clone() } else { a.div_monomial(&ma) };
    let b = if mb.is_one() { b.clone() } else { b.div_monomial(&mb) };
    let g = gcd_nonmonomial(&a, &b);
    if mg.is_one() {
        g
    } else {
        g.mul_term(&mg, &super::Scalar::one())
    }
}

fn gcd_nonmonomial(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a == b {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    let va = a.variables();
    let vb = b.variables();
    // main variable: first one occurring in both
    let main = match va.iter().find(|v| vb.contains(v)) {
        Some(v) => *v,
        None => return MultiPoly::one(),
    };
    // a variable present in only one argument can only contribute through content
    if let Some(v) = va.iter().find(|v| !vb.contains(v)) {
        return gcd(&content(a, *v), b);
    }
    if let Some(v) = vb.iter().find(|v| !va.contains(v)) {
        return gcd(a, &content(b, *v));
    }
    let ca = content(a, main);
    let cb = content(b, main);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let gc = gcd(&ca, &cb);
    let gp = primitive_prs_gcd(pa, pb, main);
    (&gc * &gp).monic()
}

/// gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content(p: &MultiPoly, v: Var) -> MultiPoly {
    let mut coeffs: Vec<MultiPoly> = p.coefficients_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    // smallest first tends to terminate the fold early
    coeffs.sort_by_key(|c| c.len());
    let mut g = MultiPoly::zero();
    for c in coeffs {
        g = gcd(&g, &c);
        if g.is_constant() {
            return MultiPoly::one();
        }
    }
    g
}

fn primitive_part(p: &MultiPoly, v: Var) -> MultiPoly {
    let c = content(p, v);
    if c.is_one() {
        p.clone()
    } else {
        p.div_exact(&c).expect("content divides")
    }
}

fn degree(coeffs: &[MultiPoly]) -> usize {
    coeffs.len() - 1
}

/// Pseudo-remainder of `a` by `b` (dense coefficient lists in the main variable).
fn prem(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let db = degree(b);
    let lb = &b[db];
    let mut r: Vec<MultiPoly> = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        // r <- lb * r - lr * x^shift * b
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (k, bk) in b.iter().enumerate() {
            let t = &lr * bk;
            r[k + shift] = &r[k + shift] - &t;
        }
        while let Some(last) = r.last() {
            if last.is_zero() {
                r.pop();
            } else {
                break;
            }
        }
    }
    r
}

fn primitive_prs_gcd(a: MultiPoly, b: MultiPoly, v: Var) -> MultiPoly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        if b.is_zero() {
            return primitive_part(&a, v).monic();
        }
        if b.degree_in(v) == 0 {
            return MultiPoly::one();
        }
        let ac = a.coefficients_in(v);
        let bc = b.coefficients_in(v);
        let r = prem(&ac, &bc);
        let r = if r.is_empty() {
            MultiPoly::zero()
        } else {
            // normalizing the scalar unit keeps coefficient growth in check
            primitive_part(&MultiPoly::from_coefficients_in(v, &r), v).monic()
        };
        a = b;
        b = r;
    }
}

/// `(g, a/g, b/g)` with `g` monic.
pub fn cofactors(a: &MultiPoly, b: &MultiPoly) -> (MultiPoly, MultiPoly, MultiPoly) {
    let g = gcd(a, b);
    if g.is_one() {
        return (g, a.clone(), b.clone());
    }
    let ca = a.div_exact(&g).expect("gcd divides");
    let cb = b.div_exact(&g).expect("gcd divides");
    (g, ca, cb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Scalar;

    fn v(x: Var) -> MultiPoly {
        MultiPoly::var(x)
    }

    #[test]
    fn gcd_of_products() {
        let f = &(&v(Var::R) * &v(Var::R)) - &v(Var::U);
        let g = &v(Var::R) + &v(Var::Beta);
        let h = &v(Var::U) + &MultiPoly::int(1);
        let a = &f * &g;
        let b = &f * &h;
        assert_eq!(gcd(&a, &b), f.monic());
        assert_eq!(gcd(&g, &h), MultiPoly::one());
    }

    #[test]
    fn gcd_with_powers_and_scaling() {
        let f = &v(Var::X) + &v(Var::Y);
        let a = f.pow(3).scale(&Scalar::int(6));
        let b = (&f.pow(2) * &(&v(Var::X) - &v(Var::Y))).scale(&Scalar::ratio(3, 4));
        assert_eq!(gcd(&a, &b), f.pow(2));
    }

    #[test]
    fn gcd_with_monomial_factor() {
        let a = &v(Var::U) * &(&v(Var::R) + &MultiPoly::int(2));
        let b = &v(Var::U) * &v(Var::U);
        assert_eq!(gcd(&a, &b), v(Var::U));
    }

    #[test]
    fn gcd_three_variables() {
        let f = &(&v(Var::X) * &v(Var::Y)) + &v(Var::Z);
        let g = &(&v(Var::X) * &v(Var::Z)) - &MultiPoly::int(1);
        let h = &v(Var::Y) - &v(Var::Z);
        let a = &(&f * &g) * &h;
        let b = &(&f * &h) * &(&v(Var::X) + &MultiPoly::int(3));
        assert_eq!(gcd(&a, &b), (&f * &h).monic());
    }

    use proptest::prelude::*;

    fn poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec((0u8..=2, 0u8..=2, -4i64..=4), 1..=3).prop_map(|ts| {
            MultiPoly::from_terms(
                ts.into_iter().map(|(a, b, c)| (crate::coeffring::Monomial::from_exps(&[(Var::R, a), (Var::U, b)]), Scalar::int(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn gcd_divides_and_contains_common_factor(a in poly(), b in poly(), c in poly()) {
            prop_assume!(!c.is_zero() && !(a.is_zero() && b.is_zero()));
            let (ac, bc) = (&a * &c, &b * &c);
            prop_assume!(!ac.is_zero() || !bc.is_zero());
            let g = gcd(&ac, &bc);
            prop_assert!(ac.div_exact(&g).is_some());
            prop_assert!(bc.div_exact(&g).is_some());
            prop_assert!(g.div_exact(&c).is_some());
        }
    }
}
