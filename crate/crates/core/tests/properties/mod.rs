//! Randomized algebraic properties, run through proptest's `TestRunner`
//! with a fixed seed so failures reproduce.

use std::sync::Arc;

use opcalc::coeffring::{Expr, Monomial, MultiPoly, Scalar, Var};
use opcalc::flagrep::{equality_oracle, oracle_bound};
use opcalc::opexpr::{parse_operator, print_operator};
use opcalc::weyl::{conjugate, DerivIndex, DiffOp, GaugeData, VariableSpec};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const CASES: u32 = 1000;

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn spec() -> Arc<VariableSpec> {
    VariableSpec::r_u()
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Scalar::ratio(n, d))
}

/// Polynomial in `r, u, beta` with small degrees.
fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((0u8..=2, 0u8..=2, 0u8..=1, scalar()), 0..=3).prop_map(|ts| {
        MultiPoly::from_terms(
            ts.into_iter()
                .map(|(a, b, c, s)| (Monomial::from_exps(&[(Var::R, a), (Var::U, b), (Var::Beta, c)]), s)),
        )
    })
}

/// Operator on `(r, u)` of order `<= 2` with polynomial coefficients.
pub fn op() -> impl Strategy<Value = DiffOp> {
    prop::collection::vec((0u8..=2, 0u8..=2, poly()), 0..=3).prop_map(|ts| {
        DiffOp::from_terms(
            &spec(),
            ts.into_iter().filter(|(i, j, _)| i + j <= 2).map(|(i, j, p)| (DerivIndex::new(&[i, j]), Expr::poly(p))),
        )
    })
}

/// Closed log-gradient `grad f + (k/r, m/u)` with `f` polynomial.
fn gauge() -> impl Strategy<Value = GaugeData> {
    (poly(), scalar(), scalar()).prop_map(|(f, k, m)| {
        let f = Expr::poly(f);
        let r = Expr::var(Var::R);
        let u = Expr::var(Var::U);
        let wr = &f.diff(Var::R) + &Expr::constant(k).checked_div(&r).expect("r != 0");
        let wu = &f.diff(Var::U) + &Expr::constant(m).checked_div(&u).expect("u != 0");
        GaugeData::new(vec![(Var::R, wr), (Var::U, wu)])
    })
}

fn fail(e: impl std::fmt::Display) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

pub fn jacobi(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(op(), op(), op()), |(a, b, c)| {
            let s = a
                .commutator(&b.commutator(&c).map_err(fail)?)
                .and_then(|x| x.add(&b.commutator(&c.commutator(&a)?)?))
                .and_then(|x| x.add(&c.commutator(&a.commutator(&b)?)?))
                .map_err(fail)?;
            check(s.is_zero(), || format!("Jacobi sum {s}"))
        })
        .map_err(|e| e.to_string())
}

pub fn associativity(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(op(), op(), op()), |(a, b, c)| {
            let left = a.compose(&b).and_then(|x| x.compose(&c)).map_err(fail)?;
            let right = b.compose(&c).and_then(|x| a.compose(&x)).map_err(fail)?;
            check(left == right, || format!("(ab)c - a(bc) = {}", left.sub(&right).unwrap()))
        })
        .map_err(|e| e.to_string())
}

/// Conjugation by a gauge factor respects products.
pub fn homomorphism(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(op(), op(), gauge()), |(a, b, g)| {
            let ab = conjugate(&a.compose(&b).map_err(fail)?, &g).map_err(fail)?;
            let split = conjugate(&a, &g).and_then(|x| x.compose(&conjugate(&b, &g)?)).map_err(fail)?;
            check(ab == split, || format!("residual {}", ab.sub(&split).unwrap()))
        })
        .map_err(|e| e.to_string())
}

/// `equality_oracle` at its conclusive bound agrees with term equality.
pub fn oracle_agreement(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(op(), op(), any::<bool>()), |(a, delta, same)| {
            let b = if same { a.clone() } else { a.add(&delta).map_err(fail)? };
            let by_oracle = equality_oracle(&a, &b, oracle_bound(&a, &b)).map_err(fail)?;
            check(by_oracle == (a == b), || format!("oracle says {by_oracle} for {a} vs {b}"))
        })
        .map_err(|e| e.to_string())
}

/// Printing then parsing gives back the operator, and printing is stable.
pub fn print_parse_roundtrip(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&op(), |a| {
            let text = print_operator(&a);
            let back = parse_operator(&text, a.spec()).map_err(fail)?;
            check(back == a, || format!("`{text}` reparsed as {back}"))?;
            check(print_operator(&back) == text, || format!("`{text}` reprinted differently"))
        })
        .map_err(|e| e.to_string())
}
