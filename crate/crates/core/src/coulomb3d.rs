//! The three-dimensional Coulomb operators in Cartesian coordinates, with
//! `r` adjoined through `r^2 = x^2 + y^2 + z^2`.
//!
//! Units: reduced mass 1, hbar 1, so `p = -i grad`.

use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::coeffring::{Expr, Scalar, Var};
use crate::error::Result;
use crate::report::{timed, CheckReport};
use crate::weyl::{DiffOp, VariableSpec};

pub type VectorOp = [DiffOp; 3];

const AXES: [&str; 3] = ["x", "y", "z"];
const COORDS: [Var; 3] = [Var::X, Var::Y, Var::Z];

fn spec() -> Arc<VariableSpec> {
    VariableSpec::cartesian3d()
}

/// `eps_{ijk}` as `(k, sign)` for `i != j`.
fn levi(i: usize, j: usize) -> Option<(usize, i64)> {
    if i == j {
        return None;
    }
    let k = 3 - i - j;
    let sign = if (i + 1) % 3 == j { 1 } else { -1 };
    Some((k, sign))
}

fn cross(a: &VectorOp, b: &VectorOp) -> Result<VectorOp> {
    let comp = |i: usize| -> Result<DiffOp> {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        a[j].compose(&b[k])?.sub(&a[k].compose(&b[j])?)
    };
    Ok([comp(0)?, comp(1)?, comp(2)?])
}

fn dot(a: &VectorOp, b: &VectorOp) -> Result<DiffOp> {
    let parts: Vec<DiffOp> = (0..3).map(|i| a[i].compose(&b[i])).collect::<Result<_>>()?;
    DiffOp::sum(&spec(), &parts)
}

fn x(i: usize) -> Expr {
    Expr::var(COORDS[i])
}

fn r() -> Expr {
    Expr::var(Var::R)
}

/// `p_i = -i d_i`.
pub fn momentum() -> VectorOp {
    let s = spec();
    let c = |i: usize| DiffOp::d(&s, COORDS[i]).expect("space variable").scale(&-Scalar::i());
    [c(0), c(1), c(2)]
}

fn laplacian() -> DiffOp {
    let s = spec();
    let parts: Vec<DiffOp> = COORDS.iter().map(|&v| DiffOp::d_pow(&s, v, 2).expect("space variable")).collect();
    DiffOp::sum(&s, &parts).expect("same chart")
}

/// The scalar operators `H = -Delta/2 - alpha/r` and `K = -(r/2) Delta - E r`.
#[derive(Clone, Debug)]
pub struct ScalarOpSet {
    pub h: DiffOp,
    pub k: DiffOp,
}

/// Orderings tried for the potential term of `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BOrdering {
    /// `(alpha x_i / r) H`
    PrintedRight,
    /// `H (alpha x_i / r)`
    PrintedLeft,
    /// average of the two above
    PrintedSymmetric,
    /// `(x_i / r) K`: the coupling constant of `A` replaced by `K`
    MetamorphosisRight,
    /// `K (x_i / r)`
    MetamorphosisLeft,
    /// average of the two above
    MetamorphosisSymmetric,
}

impl BOrdering {
    pub const ALL: [BOrdering; 6] = [
        BOrdering::PrintedRight,
        BOrdering::PrintedLeft,
        BOrdering::PrintedSymmetric,
        BOrdering::MetamorphosisRight,
        BOrdering::MetamorphosisLeft,
        BOrdering::MetamorphosisSymmetric,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BOrdering::PrintedRight => "alpha-x-over-r-H",
            BOrdering::PrintedLeft => "H-alpha-x-over-r",
            BOrdering::PrintedSymmetric => "alpha-x-over-r-H-sym",
            BOrdering::MetamorphosisRight => "x-over-r-K",
            BOrdering::MetamorphosisLeft => "K-x-over-r",
            BOrdering::MetamorphosisSymmetric => "x-over-r-K-sym",
        }
    }
}

/// Everything the identity checks need, built once.
#[derive(Clone, Debug)]
pub struct Coulomb3d {
    pub scalars: ScalarOpSet,
    pub l: VectorOp,
    pub a: VectorOp,
    /// `(p x L - L x p) / 2`, shared by `A` and every `B` candidate.
    pub cross_part: VectorOp,
    pub b: Vec<(BOrdering, VectorOp)>,
}

pub fn build_all() -> Result<Coulomb3d> {
    let s = spec();
    let p = momentum();
    let alpha = Expr::var(Var::Alpha);
    let e = Expr::var(Var::E);
    let rr = r();
    let lap = laplacian();
    let h = lap.scale(&Scalar::ratio(-1, 2)).sub(&DiffOp::mult(&s, alpha.checked_div(&rr)?))?;
    let k = lap.lmul(&rr.scale(&Scalar::ratio(-1, 2)))?.sub(&DiffOp::mult(&s, &e * &rr))?;
    let xs: VectorOp = [DiffOp::mult(&s, x(0)), DiffOp::mult(&s, x(1)), DiffOp::mult(&s, x(2))];
    let l = cross(&xs, &p)?;
    let pl = cross(&p, &l)?;
    let lp = cross(&l, &p)?;
    let half = Scalar::ratio(1, 2);
    let cross_part: VectorOp = [
        pl[0].sub(&lp[0])?.scale(&half),
        pl[1].sub(&lp[1])?.scale(&half),
        pl[2].sub(&lp[2])?.scale(&half),
    ];
    let unit = |i: usize| -> Result<DiffOp> { Ok(DiffOp::mult(&s, x(i).checked_div(&rr)?)) };
    let mut a_vec = Vec::new();
    for i in 0..3 {
        a_vec.push(cross_part[i].sub(&unit(i)?.lmul(&alpha)?)?);
    }
    let a: VectorOp = a_vec.try_into().expect("three components");
    let b = BOrdering::ALL
        .par_iter()
        .map(|&ord| {
            let mut comps = Vec::new();
            for i in 0..3 {
                let n = unit(i)?;
                let pot = match ord {
                    BOrdering::PrintedRight => n.lmul(&alpha)?.compose(&h)?,
                    BOrdering::PrintedLeft => h.compose(&n.lmul(&alpha)?)?,
                    BOrdering::PrintedSymmetric => {
                        let na = n.lmul(&alpha)?;
                        na.compose(&h)?.add(&h.compose(&na)?)?.scale(&half)
                    }
                    BOrdering::MetamorphosisRight => n.compose(&k)?,
                    BOrdering::MetamorphosisLeft => k.compose(&n)?,
                    BOrdering::MetamorphosisSymmetric => n.compose(&k)?.add(&k.compose(&n)?)?.scale(&half),
                };
                comps.push(cross_part[i].sub(&pot)?);
            }
            Ok((ord, comps.try_into().expect("three components")))
        })
        .collect::<Result<_>>()?;
    Ok(Coulomb3d { scalars: ScalarOpSet { h, k }, l, a, cross_part, b })
}

/// Cached [`build_all`].
pub fn operators() -> &'static Coulomb3d {
    static OPS: OnceLock<Coulomb3d> = OnceLock::new();
    OPS.get_or_init(|| build_all().expect("built-in operators"))
}

/// `V^2 - c^2 - 2 s (L^2 + 1)` for the pairs `(A, alpha, H)` and `(B, K, E)`.
fn square_relation(v: &VectorOp, c: &DiffOp, s: &DiffOp, l: &VectorOp) -> Result<DiffOp> {
    let sp = spec();
    let l2_plus_1 = dot(l, l)?.add(&DiffOp::identity(&sp))?;
    dot(v, v)?.sub(&c.compose(c)?)?.sub(&s.compose(&l2_plus_1)?.scale(&Scalar::int(2)))
}

/// `[V_i, W_j] - i eps_{ijk} U_k` for all `i, j`, where
/// `rhs(k)` supplies `U_k` already multiplied by any factor.
fn commutator_table(
    rep: &mut CheckReport,
    name: &str,
    v: &VectorOp,
    w: &VectorOp,
    rhs: impl Fn(usize) -> Result<DiffOp>,
) -> Result<()> {
    for i in 0..3 {
        for j in 0..3 {
            let comm = v[i].commutator(&w[j])?;
            let expected = match levi(i, j) {
                Some((k, sign)) => rhs(k)?.scale(&(&Scalar::i() * &Scalar::int(sign))),
                None => DiffOp::zero(&spec()),
            };
            rep.residual(&format!("[{name}]_{}{}", AXES[i], AXES[j]), &comm.sub(&expected)?);
        }
    }
    Ok(())
}

pub fn verify_eq4() -> CheckReport {
    timed("3d.eq4", |rep| {
        let o = operators();
        let alpha = DiffOp::mult(&spec(), Expr::var(Var::Alpha));
        let rel = square_relation(&o.a, &alpha, &o.scalars.h, &o.l)?;
        rep.residual("A^2 - alpha^2 - 2H(L^2+1)", &rel);
        Ok(())
    })
}

pub fn verify_eq5() -> CheckReport {
    timed("3d.eq5", |rep| {
        let o = operators();
        rep.residual("L.A", &dot(&o.l, &o.a)?);
        rep.residual("A.L", &dot(&o.a, &o.l)?);
        Ok(())
    })
}

pub fn verify_eq6_ll() -> CheckReport {
    timed("3d.eq6.LL", |rep| {
        let o = operators();
        commutator_table(rep, "L,L", &o.l, &o.l, |k| Ok(o.l[k].clone()))
    })
}

pub fn verify_eq6_al() -> CheckReport {
    timed("3d.eq6.AL", |rep| {
        let o = operators();
        commutator_table(rep, "A,L", &o.a, &o.l, |k| Ok(o.a[k].clone()))
    })
}

pub fn verify_eq6_aa() -> CheckReport {
    timed("3d.eq6.AA", |rep| {
        let o = operators();
        commutator_table(rep, "A,A", &o.a, &o.a, |k| o.l[k].compose(&o.scalars.h).map(|x| x.scale(&Scalar::int(-2))))
    })
}

/// `[L, H] = [A, H] = 0`.
pub fn verify_h_integrals() -> CheckReport {
    timed("3d.H.integrals", |rep| {
        let o = operators();
        for i in 0..3 {
            rep.residual(&format!("[L_{}, H]", AXES[i]), &o.l[i].commutator(&o.scalars.h)?);
            rep.residual(&format!("[A_{}, H]", AXES[i]), &o.a[i].commutator(&o.scalars.h)?);
        }
        Ok(())
    })
}

/// `r (H - E) - (K - alpha) = 0`.
pub fn verify_eq7() -> CheckReport {
    timed("3d.eq7", |rep| {
        let o = operators();
        let s = spec();
        let lhs = o.scalars.h.sub(&DiffOp::mult(&s, Expr::var(Var::E)))?.lmul(&r())?;
        let rhs = o.scalars.k.sub(&DiffOp::mult(&s, Expr::var(Var::Alpha)))?;
        rep.residual("r(H-E) - (K-alpha)", &lhs.sub(&rhs)?);
        Ok(())
    })
}

pub fn verify_lk() -> CheckReport {
    timed("3d.LK", |rep| {
        let o = operators();
        for i in 0..3 {
            rep.residual(&format!("[L_{}, K]", AXES[i]), &o.l[i].commutator(&o.scalars.k)?);
        }
        Ok(())
    })
}

/// All `B` identities for one ordering.
pub fn verify_b_candidate(ord: BOrdering) -> CheckReport {
    timed(&format!("3d.B.{}", ord.label()), |rep| {
        let o = operators();
        let b = &o.b.iter().find(|(x, _)| *x == ord).expect("all orderings built").1;
        let e_op = DiffOp::mult(&spec(), Expr::var(Var::E));
        for i in 0..3 {
            rep.residual(&format!("[B_{}, K]", AXES[i]), &b[i].commutator(&o.scalars.k)?);
        }
        rep.residual("B^2 - K^2 - 2E(L^2+1)", &square_relation(b, &o.scalars.k, &e_op, &o.l)?);
        rep.residual("L.B", &dot(&o.l, b)?);
        rep.residual("B.L", &dot(b, &o.l)?);
        commutator_table(rep, "B,L", b, &o.l, |k| Ok(b[k].clone()))?;
        commutator_table(rep, "B,B", b, b, |k| o.l[k].compose(&e_op).map(|x| x.scale(&Scalar::int(-2))))?;
        Ok(())
    })
}

/// Every ordering's report, in [`BOrdering::ALL`] order.
pub fn verify_b_relations() -> Vec<CheckReport> {
    BOrdering::ALL.par_iter().map(|&o| verify_b_candidate(o)).collect()
}

/// Summary: passes when some ordering satisfies all `B` identities.
pub fn verify_b_summary() -> CheckReport {
    timed("3d.B", |rep| {
        let reports = verify_b_relations();
        let passing: Vec<&str> =
            BOrdering::ALL.iter().zip(&reports).filter(|(_, r)| r.passed()).map(|(o, _)| o.label()).collect();
        for (o, r) in BOrdering::ALL.iter().zip(&reports) {
            rep.note(format!("{}: {} ({} residual terms)", o.label(), r.status, r.residual_terms));
        }
        rep.require("some ordering passes", !passing.is_empty(), "no ordering satisfies all identities");
        Ok(())
    })
}

/// First ordering (in [`BOrdering::ALL`] order) passing every `B` identity.
pub fn passing_ordering() -> Option<BOrdering> {
    BOrdering::ALL.iter().copied().zip(verify_b_relations()).find(|(_, r)| r.passed()).map(|(o, _)| o)
}

/// `E = -beta^2/2`, `B~ = B / beta`: `{L, B~}` close into so(4).
pub fn verify_so4() -> CheckReport {
    timed("3d.so4", |rep| {
        let Some(ord) = passing_ordering() else {
            rep.require("ordering", false, "no B ordering passes; so(4) not attempted");
            return Ok(());
        };
        rep.note(format!("using ordering {}", ord.label()));
        let o = operators();
        let beta = Expr::var(Var::Beta);
        let shell = [(Var::E, (&beta * &beta).scale(&Scalar::ratio(-1, 2)))];
        let b = &o.b.iter().find(|(x, _)| *x == ord).expect("built").1;
        let inv_beta = beta.inv()?;
        let bt: Vec<DiffOp> =
            b.iter().map(|c| c.substitute(&shell)?.lmul(&inv_beta)).collect::<Result<_>>()?;
        let bt: VectorOp = bt.try_into().expect("three components");
        let l = o.l.clone();
        commutator_table(rep, "L,L", &l, &l, |k| Ok(l[k].clone()))?;
        commutator_table(rep, "B~,L", &bt, &l, |k| Ok(bt[k].clone()))?;
        commutator_table(rep, "B~,B~", &bt, &bt, |k| Ok(l[k].clone()))?;
        Ok(())
    })
}

/// The criterion-level suite, in a fixed order.
pub fn all_reports() -> Vec<CheckReport> {
    let mut out = vec![
        verify_eq4(),
        verify_eq5(),
        verify_eq6_ll(),
        verify_eq6_al(),
        verify_eq6_aa(),
        verify_eq7(),
        verify_h_integrals(),
        verify_lk(),
    ];
    out.extend(verify_b_relations());
    out.push(verify_so4());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opexpr::parse_operator;

    fn op(text: &str) -> DiffOp {
        parse_operator(text, &spec()).unwrap()
    }

    #[test]
    fn angular_momentum_z() {
        assert_eq!(operators().l[2], op("-i*(x*D[y] - y*D[x])"));
    }

    #[test]
    fn hamiltonian_shape() {
        let h = &operators().scalars.h;
        assert_eq!(*h, op("-1/2*(D[x]^2 + D[y]^2 + D[z]^2) - alpha/r"));
    }

    #[test]
    fn lrl_at_zero_coupling_is_cross_part() {
        let o = operators();
        for i in 0..3 {
            let a0 = o.a[i].substitute(&[(Var::Alpha, Expr::zero())]).unwrap();
            assert_eq!(a0, o.cross_part[i]);
        }
    }

    #[test]
    fn l_relations() {
        assert!(verify_eq6_ll().passed());
        assert!(verify_lk().passed());
        assert!(verify_eq7().passed());
    }

    #[test]
    fn commutator_antisymmetry() {
        let o = operators();
        let xy = o.a[0].commutator(&o.a[1]).unwrap();
        let yx = o.a[1].commutator(&o.a[0]).unwrap();
        assert!(xy.add(&yx).unwrap().is_zero());
    }

    #[test]
    fn levi_civita() {
        assert_eq!(levi(0, 1), Some((2, 1)));
        assert_eq!(levi(1, 0), Some((2, -1)));
        assert_eq!(levi(2, 0), Some((1, 1)));
        assert_eq!(levi(1, 1), None);
    }
}
