//! Named checks, selectable by glob, and the named operators the command
//! line can show or export.

use rayon::prelude::*;

use crate::coeffring::{Expr, Scalar, Var};
use crate::coulomb2d::cubic::CubicTarget;
use crate::coulomb2d;
use crate::coulomb3d::{self, BOrdering};
use crate::error::{Error, Result};
use crate::opexpr::parse_scalar;
use crate::report::CheckReport;
use crate::weyl::{DiffOp, VariableSpec};
use crate::{diffgeo, flagrep, g2algebra};

/// Numeric parameter bindings from `name=value` pairs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params(pub Vec<(Var, Scalar)>);

impl Params {
    pub fn parse(pairs: &[String]) -> Result<Params> {
        let mut out: Vec<(Var, Scalar)> = Vec::new();
        for pair in pairs {
            let (name, value) =
                pair.split_once('=').ok_or_else(|| Error::Invalid(format!("expected name=value, got `{pair}`")))?;
            let var = Var::from_name(name.trim()).ok_or_else(|| Error::UnknownVariable(name.trim().into()))?;
            let val = parse_scalar(value.trim())?;
            out.retain(|(v, _)| *v != var);
            out.push((var, val));
        }
        Ok(Params(out))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: Var) -> Option<&Scalar> {
        self.0.iter().find(|(w, _)| *w == v).map(|(_, s)| s)
    }

    /// `base` with any bound entries replaced.
    pub fn over(&self, base: Vec<(Var, Scalar)>) -> Vec<(Var, Scalar)> {
        let mut out: Vec<(Var, Scalar)> =
            base.into_iter().map(|(v, s)| (v, self.get(v).cloned().unwrap_or(s))).collect();
        for (v, s) in &self.0 {
            if !out.iter().any(|(w, _)| w == v) {
                out.push((*v, s.clone()));
            }
        }
        out
    }

    pub fn bindings(&self) -> Vec<(Var, Expr)> {
        self.0.iter().map(|(v, s)| (*v, Expr::constant(s.clone()))).collect()
    }
}

type Runner = Box<dyn Fn(&Params) -> CheckReport + Send + Sync>;

pub struct Check {
    pub name: String,
    /// Whether `--param` values change what the check computes.
    pub uses_params: bool,
    run: Runner,
}

impl Check {
    fn symbolic(name: impl Into<String>, f: impl Fn() -> CheckReport + Send + Sync + 'static) -> Check {
        Check { name: name.into(), uses_params: false, run: Box::new(move |_| f()) }
    }

    pub fn run(&self, params: &Params) -> CheckReport {
        let mut rep = (self.run)(params);
        if !params.is_empty() && !self.uses_params {
            rep.note("parameters ignored: the check is fully symbolic");
        }
        rep
    }
}

/// Every registered check, sorted by name.
pub fn registry() -> Vec<Check> {
    let mut v = vec![
        Check::symbolic("3d.eq4", coulomb3d::verify_eq4),
        Check::symbolic("3d.eq5", coulomb3d::verify_eq5),
        Check::symbolic("3d.eq6.LL", coulomb3d::verify_eq6_ll),
        Check::symbolic("3d.eq6.AL", coulomb3d::verify_eq6_al),
        Check::symbolic("3d.eq6.AA", coulomb3d::verify_eq6_aa),
        Check::symbolic("3d.eq7", coulomb3d::verify_eq7),
        Check::symbolic("3d.H.integrals", coulomb3d::verify_h_integrals),
        Check::symbolic("3d.LK", coulomb3d::verify_lk),
        Check::symbolic("3d.B", coulomb3d::verify_b_summary),
        Check::symbolic("3d.so4", coulomb3d::verify_so4),
        Check::symbolic("2d.pipeline.p0", || coulomb2d::derive_h_pipeline(0)),
        Check::symbolic("2d.pipeline.p1", || coulomb2d::derive_h_pipeline(1)),
        Check::symbolic("2d.h_a.chart", coulomb2d::relate_h_ha),
        Check::symbolic("2d.integrals", coulomb2d::verify_integrals),
        Check::symbolic("2d.c.leading", coulomb2d::compute_c_and_verify_leading),
        Check::symbolic("2d.cubic.l", || coulomb2d::cubic::verify_cubic(CubicTarget::L)),
        Check::symbolic("2d.cubic.b", || coulomb2d::cubic::verify_cubic(CubicTarget::B)),
        Check::symbolic("geo.det", diffgeo::verify_det),
        Check::symbolic("geo.curvature", diffgeo::verify_curvature),
        Check::symbolic("geo.schrodinger", diffgeo::verify_schrodinger_form),
        Check::symbolic("geo.lb.selfadjoint", diffgeo::verify_self_adjoint),
        Check::symbolic("g2.flag.mismatch", g2algebra::mismatched_mark_control),
        Check::symbolic("g2.structure.gl2", g2algebra::verify_closure),
        Check::symbolic("g2.structure.all", g2algebra::verify_raising_nonclosure),
        Check::symbolic("g2.sl2", g2algebra::verify_sl2),
        Check::symbolic("g2.lie", g2algebra::verify_lie_forms),
        Check::symbolic("g2.decompose.h_a", g2algebra::verify_decompose_h_a),
        Check::symbolic("g2.decompose.l_a", g2algebra::verify_decompose_l_a),
        Check::symbolic("g2.decompose.b_a", g2algebra::verify_decompose_b_a),
        Check::symbolic("g2.decompose.c", g2algebra::verify_decompose_c),
        Check::symbolic("g2.decompose.b_a.all", || g2algebra::verify_decompose_full("b_a")),
        Check::symbolic("g2.decompose.c.all", || g2algebra::verify_decompose_full("c")),
    ];
    for ord in BOrdering::ALL {
        v.push(Check::symbolic(format!("3d.B.{}", ord.label()), move || coulomb3d::verify_b_candidate(ord)));
    }
    for n in 0..=8 {
        v.push(Check {
            name: format!("2d.spectrum.n{n}"),
            uses_params: true,
            run: Box::new(move |p| flagrep::verify_spectrum_at(n, &p.over(flagrep::generic_point()))),
        });
    }
    for n in g2algebra::FLAG_MARKS {
        v.push(Check::symbolic(format!("g2.flag.n{n}"), move || g2algebra::verify_flag_invariance(n)));
    }
    v.sort_by(|a, b| a.name.cmp(&b.name));
    v
}

/// Checks whose names match a shell-style glob.
pub fn select(pattern: &str) -> Result<Vec<Check>> {
    let pat = glob::Pattern::new(pattern).map_err(|e| Error::Invalid(format!("bad pattern `{pattern}`: {e}")))?;
    Ok(registry().into_iter().filter(|c| pat.matches(&c.name)).collect())
}

/// Runs checks on a pool of `jobs` threads; reports come back in the
/// order of `checks`.
pub fn run_checks(checks: &[Check], params: &Params, jobs: usize) -> Vec<CheckReport> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    pool.install(|| checks.par_iter().map(|c| c.run(params)).collect())
}

/// Names accepted by [`named_operator`].
pub fn operator_names() -> Vec<String> {
    let mut v: Vec<String> = ["identity", "h", "h_a", "l_a", "b_a", "c", "c_leading", "H", "K"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for axis in ["x", "y", "z"] {
        for vec in ["L", "A", "B"] {
            v.push(format!("{vec}_{axis}"));
        }
    }
    v.extend(g2algebra::GENERATOR_NAMES.iter().map(|s| s.to_string()));
    v
}

/// A built-in operator by name; g(2) generators carry a symbolic mark `n`,
/// `B` uses the first ordering that passes its identities.
pub fn named_operator(name: &str) -> Result<DiffOp> {
    let unknown = || Error::Invalid(format!("unknown operator `{name}`; known: {}", operator_names().join(" ")));
    let op = match name {
        "identity" => DiffOp::identity(&VariableSpec::r_u()),
        "h" => coulomb2d::h(),
        "h_a" => coulomb2d::h_a(),
        "l_a" => coulomb2d::l_a(),
        "b_a" => coulomb2d::b_a(),
        "c" => coulomb2d::c(),
        "c_leading" => coulomb2d::c_leading(),
        "H" => coulomb3d::operators().scalars.h.clone(),
        "K" => coulomb3d::operators().scalars.k.clone(),
        _ => {
            if let Some(g) = g2algebra::build_generators(g2algebra::Mark::Symbolic)?.get(name) {
                return Ok(g.clone());
            }
            let (vec, axis) = name.split_once('_').ok_or_else(unknown)?;
            let i = ["x", "y", "z"].iter().position(|a| *a == axis).ok_or_else(unknown)?;
            let o = coulomb3d::operators();
            match vec {
                "L" => o.l[i].clone(),
                "A" => o.a[i].clone(),
                "B" => {
                    let ord = coulomb3d::passing_ordering().unwrap_or(BOrdering::MetamorphosisRight);
                    o.b.iter().find(|(x, _)| *x == ord).expect("all orderings built").1[i].clone()
                }
                _ => return Err(unknown()),
            }
        }
    };
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_sorted() {
        let names: Vec<String> = registry().into_iter().map(|c| c.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(names, sorted);
    }

    #[test]
    fn glob_selection() {
        assert_eq!(select("2d.spectrum.n*").unwrap().len(), 9);
        assert_eq!(select("3d.eq6.LL").unwrap().len(), 1);
        assert!(select("nosuch.*").unwrap().is_empty());
    }

    #[test]
    fn params_parse_and_override() {
        let p = Params::parse(&["beta=3/2".into(), "mu=2".into()]).unwrap();
        let pt = p.over(flagrep::generic_point());
        assert_eq!(pt[0], (Var::Beta, Scalar::ratio(3, 2)));
        assert_eq!(pt[1], (Var::Mu, Scalar::int(2)));
        assert!(Params::parse(&["q=1".into()]).is_err());
        assert!(Params::parse(&["beta".into()]).is_err());
    }

    #[test]
    fn every_operator_name_resolves() {
        for n in operator_names() {
            assert!(named_operator(&n).is_ok(), "{n}");
        }
        assert!(named_operator("nope").is_err());
    }
}
