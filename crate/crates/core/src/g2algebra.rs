//! The eleven-generated algebra g(2) acting on `(r, u)`, its sl(2) slice,
//! and decompositions in its enveloping algebra.
//!
//! Generators carry a mark `n`; at a literal mark they preserve the flag
//! space `P_n`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::coeffring::{Expr, Scalar, Var};
use crate::coulomb2d::{b_a, c, h_a, l_a};
use crate::decompose::{decompose_param_free, monomial_label, ordered_monomials, solve_scalar, Decomposition};
use crate::error::Result;
use crate::flagrep::{equality_oracle, invariance_witness, oracle_bound};
use crate::opexpr::parse_operator;
use crate::report::{timed, CheckReport};
use crate::weyl::{DiffOp, VariableSpec};

pub const GENERATOR_NAMES: [&str; 11] = ["J0~", "J1", "J2", "J3", "J4", "R0", "R1", "R2", "T0", "T1", "T2"];

/// Marks at which flag invariance is checked by default.
pub const FLAG_MARKS: [i64; 5] = [0, 1, 2, 3, 5];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mark {
    Literal(i64),
    Symbolic,
}

impl Mark {
    pub fn expr(self) -> Expr {
        match self {
            Mark::Literal(k) => Expr::int(k),
            Mark::Symbolic => Expr::var(Var::N),
        }
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mark::Literal(k) => write!(f, "{k}"),
            Mark::Symbolic => f.write_str("n"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subset {
    /// `J0~, J1..J4, R0..R2`.
    LoweringGl2,
    /// `T0, T1, T2`.
    Raising,
    All,
}

impl Subset {
    pub fn range(self) -> std::ops::Range<usize> {
        match self {
            Subset::LoweringGl2 => 0..8,
            Subset::Raising => 8..11,
            Subset::All => 0..11,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Subset::LoweringGl2 => "lowering+gl2",
            Subset::Raising => "raising",
            Subset::All => "all",
        }
    }

    pub fn parse(s: &str) -> Option<Subset> {
        match s {
            "lowering+gl2" | "lowering" => Some(Subset::LoweringGl2),
            "raising" => Some(Subset::Raising),
            "all" => Some(Subset::All),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub mark: Mark,
    pub ops: Vec<DiffOp>,
}

impl GeneratorSet {
    pub fn get(&self, name: &str) -> Option<&DiffOp> {
        GENERATOR_NAMES.iter().position(|g| *g == name).map(|k| &self.ops[k])
    }

    pub fn subset(&self, s: Subset) -> (Vec<&'static str>, Vec<DiffOp>) {
        let r = s.range();
        (GENERATOR_NAMES[r.clone()].to_vec(), self.ops[r].to_vec())
    }
}

fn ru(text: &str) -> DiffOp {
    parse_operator(text, &VariableSpec::r_u()).expect("built-in operator text parses")
}

fn at_mark(op: DiffOp, mark: Mark) -> Result<DiffOp> {
    match mark {
        Mark::Symbolic => Ok(op),
        Mark::Literal(_) => op.substitute(&[(Var::N, mark.expr())]),
    }
}

/// `r D_r + 2 u D_u - n`.
pub fn euler_cartan(mark: Mark) -> Result<DiffOp> {
    at_mark(ru("r*D[r] + 2*u*D[u] - n"), mark)
}

pub fn build_generators(mark: Mark) -> Result<GeneratorSet> {
    let spec = VariableSpec::r_u();
    let j0 = euler_cartan(mark)?;
    let j0_shift = j0.add(&DiffOp::identity(&spec))?;
    let u = DiffOp::mult(&spec, Expr::var(Var::U));
    let mut ops = vec![j0.clone()];
    for text in ["D[r]", "r*D[r] - n/3", "2*u*D[u] - n/3", "r^2*D[r] + 2*r*u*D[u] - n*r", "D[u]", "r*D[u]", "r^2*D[u]"] {
        ops.push(at_mark(ru(text), mark)?);
    }
    ops.push(ru("u*D[r]^2"));
    ops.push(ru("u*D[r]").compose(&j0)?);
    ops.push(u.compose(&j0)?.compose(&j0_shift)?);
    Ok(GeneratorSet { mark, ops })
}

/// First generator with mark `n` that leaves `P_n`, with the witness.
pub fn flag_violation(gens: &GeneratorSet, n: usize) -> Result<Option<(&'static str, String)>> {
    for (name, op) in GENERATOR_NAMES.iter().zip(&gens.ops) {
        if let Some(w) = invariance_witness(op, n)? {
            return Ok(Some((name, w.to_string())));
        }
    }
    Ok(None)
}

pub fn verify_flag_invariance(n: i64) -> CheckReport {
    timed(&format!("g2.flag.n{n}"), |rep| {
        let gens = build_generators(Mark::Literal(n))?;
        let v = flag_violation(&gens, n as usize)?;
        rep.require("flag", v.is_none(), v.map(|(g, w)| format!("{g}: {w}")).unwrap_or_default());
        Ok(())
    })
}

/// `J4` with mark 0 acting on `P_2`: must leave the space.
pub fn mismatched_mark_control() -> CheckReport {
    timed("g2.flag.mismatch", |rep| {
        let j4 = build_generators(Mark::Literal(0))?.get("J4").cloned().expect("J4");
        match invariance_witness(&j4, 2)? {
            Some(w) => {
                rep.note(format!("J4 with mark 0 on P_2: {w}"));
            }
            None => {
                rep.require("leaves P_2", false, "J4 with mark 0 preserved P_2");
            }
        }
        Ok(())
    })
}

/// Solves `target = sum_k x_k basis[k]` with each `x_k` a polynomial of
/// degree `<= deg` in `param`. Coefficients of `param` in the basis are
/// allowed.
pub fn span_solve(target: &DiffOp, basis: &[DiffOp], param: Var, deg: u8) -> Result<(Vec<Expr>, DiffOp)> {
    let spec = target.spec().clone();
    let mut cols = Vec::new();
    let mut scaled = Vec::new();
    for (k, b) in basis.iter().enumerate() {
        for j in 0..=deg {
            let pj = Expr::var(param).pow(j as i32)?;
            scaled.push(b.lmul(&pj)?);
            cols.push((k, pj));
        }
    }
    let sol = solve_scalar(target, &scaled)?;
    let mut coeffs = vec![Vec::new(); basis.len()];
    for ((k, pj), x) in cols.iter().zip(&sol.x) {
        if !x.is_zero() {
            coeffs[*k].push(pj.scale(x));
        }
    }
    let coeffs: Vec<Expr> = coeffs.iter().map(|cs| Expr::sum(cs.iter())).collect();
    let parts: Vec<DiffOp> = basis.iter().zip(&coeffs).map(|(b, c)| b.lmul(c)).collect::<Result<_>>()?;
    let residual = target.sub(&DiffOp::sum(&spec, &parts)?)?;
    Ok((coeffs, residual))
}

/// Commutators `[g_i, g_j]`, `i < j`, expanded over `{1, g_1, ...}`.
#[derive(Clone, Debug)]
pub struct StructureTable {
    pub names: Vec<String>,
    pub entries: Vec<StructureEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureEntry {
    pub left: String,
    pub right: String,
    /// Coefficients over `1` followed by the generators; empty if not closed.
    pub coefficients: Vec<String>,
    pub residual_terms: usize,
    #[serde(skip)]
    pub exprs: Vec<Expr>,
    #[serde(skip)]
    pub residual: Option<DiffOp>,
}

impl StructureTable {
    pub fn closes(&self) -> bool {
        self.entries.iter().all(|e| e.residual_terms == 0)
    }

    pub fn first_open(&self) -> Option<&StructureEntry> {
        self.entries.iter().find(|e| e.residual_terms > 0)
    }

    pub fn entry(&self, a: &str, b: &str) -> Option<&StructureEntry> {
        self.entries.iter().find(|e| e.left == a && e.right == b)
    }
}

impl fmt::Display for StructureTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut basis = vec!["1".to_string()];
        basis.extend(self.names.iter().cloned());
        for e in &self.entries {
            write!(f, "[{}, {}] = ", e.left, e.right)?;
            if e.residual_terms > 0 {
                writeln!(f, "not in the span ({} residual terms)", e.residual_terms)?;
                continue;
            }
            let parts: Vec<String> = e
                .coefficients
                .iter()
                .zip(&basis)
                .filter(|(c, _)| c.as_str() != "0")
                .map(|(c, b)| match (c.as_str(), b.as_str()) {
                    (_, "1") => c.clone(),
                    ("1", _) => b.clone(),
                    ("-1", _) => format!("-{b}"),
                    _ if !c.contains(' ') => format!("{c}*{b}"),
                    _ => format!("({c})*{b}"),
                })
                .collect();
            writeln!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })?;
        }
        Ok(())
    }
}

/// Pairwise commutators of named operators sharing a chart, each solved
/// in the linear span of the set and the identity. The mark enters
/// coefficients polynomially (degree `<= 2`).
pub fn structure_table(names: &[&str], ops: &[DiffOp]) -> Result<StructureTable> {
    let spec = ops[0].spec().clone();
    let mut basis = vec![DiffOp::identity(&spec)];
    basis.extend(ops.iter().cloned());
    let mut entries = Vec::new();
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            let comm = ops[i].commutator(&ops[j])?;
            let (coeffs, residual) = span_solve(&comm, &basis, Var::N, 2)?;
            let closed = residual.is_zero();
            entries.push(StructureEntry {
                left: names[i].into(),
                right: names[j].into(),
                coefficients: if closed { coeffs.iter().map(|c| c.to_string()).collect() } else { Vec::new() },
                exprs: if closed { coeffs } else { Vec::new() },
                residual_terms: residual.len(),
                residual: (!closed).then_some(residual),
            });
        }
    }
    Ok(StructureTable { names: names.iter().map(|s| s.to_string()).collect(), entries })
}

pub fn generator_table(subset: Subset, mark: Mark) -> Result<StructureTable> {
    let (names, ops) = build_generators(mark)?.subset(subset);
    structure_table(&names, &ops)
}

/// The eight lowering and gl(2) generators span a Lie algebra.
pub fn verify_closure() -> CheckReport {
    timed("g2.structure.gl2", |rep| {
        let t = generator_table(Subset::LoweringGl2, Mark::Symbolic)?;
        if let Some(e) = t.first_open() {
            rep.require("closure", false, format!("[{}, {}] leaves the span", e.left, e.right));
        }
        let jac = jacobi_defects(&build_generators(Mark::Symbolic)?.subset(Subset::LoweringGl2).1)?;
        rep.require("jacobi", jac == 0, format!("{jac} triples violate Jacobi"));
        Ok(())
    })
}

/// Adding `T0, T1, T2` leaves the linear span: g(2) is not finite dimensional.
pub fn verify_raising_nonclosure() -> CheckReport {
    timed("g2.structure.all", |rep| {
        let t = generator_table(Subset::All, Mark::Symbolic)?;
        match t.first_open() {
            Some(e) => {
                let open = t.entries.iter().filter(|e| e.residual_terms > 0).count();
                rep.note(format!("{open} commutators leave the span, first [{}, {}]", e.left, e.right));
            }
            None => {
                rep.require("non-closure", false, "all eleven generators close linearly");
            }
        }
        Ok(())
    })
}

/// Number of triples `(a, b, c)` with a nonzero Jacobi sum.
pub fn jacobi_defects(ops: &[DiffOp]) -> Result<usize> {
    let mut bad = 0;
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            for k in j + 1..ops.len() {
                let (a, b, c) = (&ops[i], &ops[j], &ops[k]);
                let s = a
                    .commutator(&b.commutator(c)?)?
                    .add(&b.commutator(&c.commutator(a)?)?)?
                    .add(&c.commutator(&a.commutator(b)?)?)?;
                if !s.is_zero() {
                    bad += 1;
                }
            }
        }
    }
    Ok(bad)
}

/// `J+ = r^2 D_r - n r`, `J0 = 2 r D_r - n`, `J- = D_r` on the line.
pub fn sl2_generators(mark: Mark) -> Result<Vec<DiffOp>> {
    let s = VariableSpec::line_r();
    ["r^2*D[r] - n*r", "2*r*D[r] - n", "D[r]"]
        .iter()
        .map(|t| {
            let op = parse_operator(t, &s)?;
            match mark {
                Mark::Symbolic => Ok(op),
                Mark::Literal(_) => op.substitute(&[(Var::N, mark.expr())]),
            }
        })
        .collect()
}

pub const SL2_NAMES: [&str; 3] = ["J+", "J0", "J-"];

/// The sl(2) table is computed, then checked to have the standard shape:
/// `J0` acts on `J+` and `J-` with opposite nonzero eigenvalues and
/// `[J+, J-]` is a nonzero multiple of `J0`.
pub fn verify_sl2() -> CheckReport {
    timed("g2.sl2", |rep| {
        let t = structure_table(&SL2_NAMES, &sl2_generators(Mark::Symbolic)?)?;
        rep.require("closure", t.closes(), "sl(2) set does not close");
        if !t.closes() {
            return Ok(());
        }
        let coeff = |a: &str, b: &str, k: usize| -> Scalar {
            t.entry(a, b).expect("entry").exprs[k].constant_value().unwrap_or_else(Scalar::zero)
        };
        // basis order: 1, J+, J0, J-
        let plus = coeff("J+", "J0", 1);
        let minus = coeff("J0", "J-", 3);
        let pm = coeff("J+", "J-", 2);
        rep.require("[J+, J0] ~ J+", !plus.is_zero(), "zero");
        rep.require("[J0, J-] ~ J-", !minus.is_zero(), "zero");
        rep.require("opposite weights", plus == minus, format!("{plus} vs {minus}"));
        rep.require("[J+, J-] ~ J0", !pm.is_zero(), "zero");
        rep.note(format!("[J0, J+] = {} J+, [J0, J-] = {} J-, [J+, J-] = {pm} J0", -&plus, minus));
        Ok(())
    })
}

/// Generator combination giving `h_a`; `with_euler = false` drops the
/// `beta J0~(0)` term.
pub fn h_a_lie_form(with_euler: bool) -> Result<DiffOp> {
    let spec = VariableSpec::r_u();
    let g = build_generators(Mark::Literal(0))?;
    let op = |n: &str| g.get(n).cloned().expect("generator");
    let f = |t: &str| crate::opexpr::parse_function(t, &spec);
    let mut parts = vec![
        op("J2").compose(&op("J1"))?.scale(&Scalar::ratio(-1, 2)),
        op("J3").compose(&op("R1"))?.neg(),
        op("J3").compose(&op("J1"))?.neg(),
        op("J1").lmul(&f("-(1+p+mu)")?)?,
        op("R1").lmul(&f("-2*(1+mu)")?)?,
        DiffOp::mult(&spec, f("beta*(1+p+mu)")?),
    ];
    if with_euler {
        parts.push(op("J0~").lmul(&Expr::var(Var::Beta))?);
    }
    DiffOp::sum(&spec, &parts)
}

pub fn l_a_lie_form() -> Result<DiffOp> {
    let spec = VariableSpec::r_u();
    let g = build_generators(Mark::Literal(0))?;
    let op = |n: &str| g.get(n).cloned().expect("generator");
    let f = |t: &str| crate::opexpr::parse_function(t, &spec);
    DiffOp::sum(
        &spec,
        &[
            op("J3").compose(&op("R2"))?,
            op("J3").compose(&op("J3"))?.scale(&Scalar::ratio(-1, 2)),
            op("J3").lmul(&f("-(1+2*p+2*mu)/2")?)?,
            op("R2").lmul(&f("2*(1+mu)")?)?,
        ],
    )
}

pub fn verify_lie_forms() -> CheckReport {
    timed("g2.lie", |rep| {
        rep.residual("h_a form - h_a", &h_a_lie_form(true)?.sub(&h_a())?);
        rep.residual("l_a form - l_a", &l_a_lie_form()?.sub(&l_a())?);
        let control = h_a_lie_form(false)?.sub(&h_a())?;
        let expected = ru("-beta*(r*D[r] + 2*u*D[u])");
        rep.require("negative control", control == expected, format!("dropping beta J0~ leaves {control}"));
        Ok(())
    })
}

/// Range of `deg_u(coefficient term) - (order in D_u)` over all terms.
///
/// Every product of `J0~, J1..J4, R0..R2` has this weight `<= 0`, so an
/// operator with a positive-weight term is outside their enveloping
/// algebra.
pub fn u_weight_range(op: &DiffOp) -> Option<(i32, i32)> {
    let iu = op.spec().position(Var::U).ok()?;
    let mut lo = i32::MAX;
    let mut hi = i32::MIN;
    for (idx, c) in op.terms() {
        let poly = c.as_poly()?;
        for (m, _) in poly.terms() {
            let w = m.exp(Var::U) as i32 - idx.get(iu) as i32;
            lo = lo.min(w);
            hi = hi.max(w);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

pub const DECOMPOSE_PARAMS: [Var; 3] = [Var::Beta, Var::Mu, Var::P];

/// Enveloping-algebra decomposition with generators at mark 0.
///
/// Ordered monomials of degree `<= degree` in the chosen subset whose
/// differential order does not exceed `max_order` (default: the target's
/// order when every generator has order 1, otherwise unbounded) are tried.
/// Coefficients are polynomials in `(beta, mu, p)` of degree
/// `<= param_degree`; a target needing more is reported in the notes.
pub fn decompose(
    name: &str,
    target: &DiffOp,
    subset: Subset,
    degree: usize,
    param_degree: u32,
    max_order: Option<u32>,
) -> Result<Decomposition> {
    let gens = build_generators(Mark::Literal(0))?;
    let (names, ops) = gens.subset(subset);
    let orders: Vec<u32> = ops.iter().map(DiffOp::order).collect();
    let cap = max_order.unwrap_or_else(|| orders.iter().max().copied().unwrap_or(1) * degree as u32);
    let monomials = ordered_monomials(&orders, degree, cap);
    let mut d = decompose_param_free(name, target, &names, &ops, monomials, &DECOMPOSE_PARAMS)?;
    let pdeg = crate::decompose::split_by_params(target, &DECOMPOSE_PARAMS)?
        .keys()
        .map(|m| DECOMPOSE_PARAMS.iter().map(|v| m.exp(*v) as u32).sum::<u32>())
        .max()
        .unwrap_or(0);
    if pdeg > param_degree {
        d.notes.push(format!("target has parameter degree {pdeg} > bound {param_degree}"));
        d.residual = target.clone();
        d.coefficients.iter_mut().for_each(|c| *c = Expr::zero());
    }
    if !d.succeeded() {
        if let Some((_, hi)) = u_weight_range(target) {
            if hi > 0 && subset == Subset::LoweringGl2 {
                d.notes.push(format!(
                    "target has a term of u-weight {hi}; every product of the lowering and gl(2) generators has u-weight <= 0"
                ));
            }
        }
        let top = orders.iter().max().copied().unwrap_or(1) * degree as u32;
        if target.order() > top {
            d.notes.push(format!("target order {} exceeds the reachable order {top}", target.order()));
        }
    }
    Ok(d)
}

/// Label of an ordered monomial over the full generator list.
pub fn label(m: &[usize], subset: Subset) -> String {
    monomial_label(&m.to_vec(), &GENERATOR_NAMES[subset.range()])
}

/// Named target operators for decomposition.
pub fn named_target(name: &str) -> Option<DiffOp> {
    match name {
        "h_a" => Some(h_a()),
        "l_a" => Some(l_a()),
        "b_a" => Some(b_a()),
        "c" => Some(c()),
        _ => None,
    }
}

pub const DEFAULT_DECOMPOSE_DEGREE: usize = 4;
pub const DEFAULT_PARAM_DEGREE: u32 = 4;

fn decomposition_report(check: &str, name: &str, subset: Subset, degree: usize) -> CheckReport {
    timed(check, |rep| {
        let target = named_target(name).expect("known target");
        let d = decompose(name, &target, subset, degree, DEFAULT_PARAM_DEGREE, None)?;
        rep.residual(&format!("{name} - reconstruction"), &d.residual);
        for n in &d.notes {
            rep.note(n.clone());
        }
        if d.succeeded() {
            let spec: Arc<VariableSpec> = target.spec().clone();
            let gens = build_generators(Mark::Literal(0))?.subset(subset).1;
            let mut cache = crate::decompose::ProductCache::new(&spec, &gens);
            let products: Vec<DiffOp> = d.monomials.iter().map(|m| cache.get(m)).collect::<Result<_>>()?;
            let recon = crate::decompose::reconstruct(&spec, &products, &d.coefficients)?;
            let ok = equality_oracle(&recon, &target, oracle_bound(&recon, &target))?;
            rep.require("oracle", ok, "reconstruction differs on monomials");
            rep.note(format!("{} nonzero coefficients", d.table().len()));
        }
        Ok(())
    })
}

/// `h_a` in degree 2 over the lowering and gl(2) generators.
pub fn verify_decompose_h_a() -> CheckReport {
    decomposition_report("g2.decompose.h_a", "h_a", Subset::LoweringGl2, 2)
}

pub fn verify_decompose_l_a() -> CheckReport {
    decomposition_report("g2.decompose.l_a", "l_a", Subset::LoweringGl2, 2)
}

pub fn verify_decompose_b_a() -> CheckReport {
    decomposition_report("g2.decompose.b_a", "b_a", Subset::LoweringGl2, DEFAULT_DECOMPOSE_DEGREE)
}

pub fn verify_decompose_c() -> CheckReport {
    decomposition_report("g2.decompose.c", "c", Subset::LoweringGl2, DEFAULT_DECOMPOSE_DEGREE)
}

/// Same targets over all eleven generators.
pub fn verify_decompose_full(name: &str) -> CheckReport {
    decomposition_report(&format!("g2.decompose.{name}.all"), name, Subset::All, DEFAULT_DECOMPOSE_DEGREE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flagrep::{is_invariant, matrix_of};

    #[test]
    fn generators_transcribed() {
        let g = build_generators(Mark::Symbolic).unwrap();
        let spec = VariableSpec::r_u();
        let j0 = g.get("J0~").unwrap();
        assert_eq!(*g.get("R2").unwrap(), ru("r^2*D[u]"));
        assert_eq!(*g.get("T0").unwrap(), ru("u*D[r]^2"));
        let r = DiffOp::mult(&spec, Expr::var(Var::R));
        assert_eq!(*g.get("J4").unwrap(), r.compose(j0).unwrap());
        let shifted = j0.substitute(&[(Var::N, parse_operator_fn("n-1"))]).unwrap();
        let u = DiffOp::mult(&spec, Expr::var(Var::U));
        assert_eq!(*g.get("T2").unwrap(), u.compose(j0).unwrap().compose(&shifted).unwrap());
    }

    fn parse_operator_fn(t: &str) -> Expr {
        crate::opexpr::parse_function(t, &VariableSpec::r_u()).unwrap()
    }

    #[test]
    fn flag_invariance_and_matrices() {
        for n in FLAG_MARKS {
            assert!(verify_flag_invariance(n).passed());
            let g = build_generators(Mark::Literal(n)).unwrap();
            for op in &g.ops {
                assert!(matrix_of(op, n as usize).is_ok());
            }
        }
        let g = build_generators(Mark::Literal(3)).unwrap();
        assert!(is_invariant(g.get("J4").unwrap(), 3).unwrap());
        let g2 = build_generators(Mark::Literal(2)).unwrap();
        assert!(is_invariant(g2.get("T1").unwrap(), 2).unwrap());
    }

    #[test]
    fn mismatched_mark_leaves_flag() {
        let rep = mismatched_mark_control();
        assert!(rep.passed(), "{rep}");
        let j4 = build_generators(Mark::Literal(0)).unwrap().ops[4].clone();
        assert!(matrix_of(&j4, 2).is_err());
    }

    #[test]
    fn lowering_subset_closes() {
        let t = generator_table(Subset::LoweringGl2, Mark::Symbolic).unwrap();
        assert!(t.closes(), "{t}");
        // [J1, J4] = 2 r D_r + 2 u D_u - n lies in span{1, J1..J3}
        let e = t.entry("J1", "J4").unwrap();
        assert_eq!(e.residual_terms, 0);
        assert!(verify_closure().passed());
    }

    #[test]
    fn table_is_antisymmetric() {
        let g = build_generators(Mark::Symbolic).unwrap().subset(Subset::LoweringGl2).1;
        for a in &g {
            for b in &g {
                assert_eq!(a.commutator(b).unwrap(), b.commutator(a).unwrap().neg());
            }
        }
    }

    #[test]
    fn raising_generators_leave_span() {
        let rep = verify_raising_nonclosure();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn sl2_relations() {
        let rep = verify_sl2();
        assert!(rep.passed(), "{rep}");
        let g = sl2_generators(Mark::Symbolic).unwrap();
        let (jp, j0, jm) = (&g[0], &g[1], &g[2]);
        assert_eq!(j0.commutator(jp).unwrap(), jp.scale(&Scalar::int(2)));
        assert_eq!(j0.commutator(jm).unwrap(), jm.scale(&Scalar::int(-2)));
    }

    #[test]
    fn lie_forms_reproduce_operators() {
        let rep = verify_lie_forms();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn small_decompositions() {
        assert!(verify_decompose_h_a().passed());
        assert!(verify_decompose_l_a().passed());
    }

    #[test]
    fn lowering_products_have_nonpositive_u_weight() {
        let g = build_generators(Mark::Literal(0)).unwrap().subset(Subset::LoweringGl2).1;
        for a in &g {
            for b in &g {
                let (_, hi) = u_weight_range(&a.compose(b).unwrap()).unwrap();
                assert!(hi <= 0);
            }
        }
        assert_eq!(u_weight_range(&b_a()).unwrap().1, 1);
    }
}
