//! Cometrics, Laplace-Beltrami operators and curvature of 2D/3D metrics.

use std::sync::{Arc, OnceLock};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Deserialize;

use crate::coeffring::matrix::{self, ExprMatrix};
use crate::coeffring::{AlgebraicContext, Expr, Scalar, Var};
use crate::coulomb2d::h_a;
use crate::coulomb2d::parity::op_modulo_parity;
use crate::error::{Error, Result};
use crate::opexpr::parse_function;
use crate::report::{timed, CheckReport};
use crate::weyl::{conjugate, DerivIndex, DiffOp, GaugeData, VariableSpec};

/// Symmetric matrix `g^{mu nu}` over the coordinates of a chart.
#[derive(Clone, Debug, PartialEq)]
pub struct CoMetric {
    spec: Arc<VariableSpec>,
    entries: ExprMatrix,
}

impl CoMetric {
    pub fn new(spec: &Arc<VariableSpec>, entries: ExprMatrix) -> Result<Self> {
        let n = spec.dim();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(format!("cometric must be {n}x{n} on chart `{}`", spec.name())));
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::Invalid("cometric is not symmetric".into()));
                }
            }
        }
        if matrix::det(&entries, spec.ctx())?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(CoMetric { spec: spec.clone(), entries })
    }

    pub fn spec(&self) -> &Arc<VariableSpec> {
        &self.spec
    }

    pub fn entries(&self) -> &ExprMatrix {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Expr {
        &self.entries[i][j]
    }

    /// Reads `{"chart": "r-u", "entries": [["r/2", "u"], ["u", "2*r*u"]]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            chart: String,
            entries: Vec<Vec<String>>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("cometric JSON: {e}")))?;
        let spec = VariableSpec::by_name(&raw.chart)?;
        let entries = raw
            .entries
            .iter()
            .map(|row| row.iter().map(|t| parse_function(t, &spec)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        CoMetric::new(&spec, entries)
    }

    /// Cometric `(r/2, u; u, 2ru)` of the two-dimensional reduction.
    pub fn coulomb_ru() -> Self {
        static G: OnceLock<CoMetric> = OnceLock::new();
        G.get_or_init(|| {
            let r = Expr::var(Var::R);
            let u = Expr::var(Var::U);
            let entries =
                vec![vec![r.scale(&Scalar::ratio(1, 2)), u.clone()], vec![u.clone(), (&r * &u).scale(&Scalar::int(2))]];
            CoMetric::new(&VariableSpec::r_u(), entries).expect("nondegenerate")
        })
        .clone()
    }
}

/// `g^{ab} = grad q_a . grad q_b` in a flat ambient space.
///
/// `coords` are the new coordinate symbols, whose ambient derivatives are
/// supplied by `ambient`; the result must be expressible through the
/// target chart's symbols.
pub fn cometric_from_embedding(
    ambient: &AlgebraicContext,
    ambient_coords: &[Var],
    coords: &[Expr],
    target: &Arc<VariableSpec>,
) -> Result<CoMetric> {
    let grads: Vec<Vec<Expr>> = coords
        .iter()
        .map(|q| ambient_coords.iter().map(|&x| ambient.derivative(q, x)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let n = coords.len();
    let mut entries = vec![vec![Expr::zero(); n]; n];
    for a in 0..n {
        for b in a..n {
            let parts: Vec<Expr> = (0..ambient_coords.len()).map(|k| &grads[a][k] * &grads[b][k]).collect();
            let e = ambient.reduce(&Expr::sum(parts.iter()))?;
            for v in e.variables() {
                if !target.allows_symbol(v) {
                    return Err(Error::ResidualDependence(v, "pulling the cometric back to the chart"));
                }
            }
            entries[a][b] = e.clone();
            entries[b][a] = e;
        }
    }
    CoMetric::new(target, entries)
}

/// Cometric of `(r, rho, phi)` on flat 3-space.
pub fn polar_cometric() -> Result<CoMetric> {
    cometric_from_embedding(
        &AlgebraicContext::cylindrical_ambient(),
        &[Var::X, Var::Y, Var::Z],
        &[Expr::var(Var::R), Expr::var(Var::Rho), Expr::var(Var::Phi)],
        &VariableSpec::polar(),
    )
}

/// `(1/sqrt g) d_mu sqrt g g^{mu nu} d_nu`, with `d log sqrt g` taken as
/// `-(1/2) d log det(g^{..})` so no square root appears.
pub fn laplace_beltrami(g: &CoMetric) -> Result<DiffOp> {
    let spec = g.spec();
    let ctx = spec.ctx();
    let n = spec.dim();
    let space = spec.space();
    let det = matrix::det(&g.entries, ctx)?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let dlog: Vec<Expr> =
        space.iter().map(|&v| ctx.reduce(&ctx.derivative(&det, v)?.checked_div(&det)?)).collect::<Result<_>>()?;
    let mut terms = Vec::new();
    for mu in 0..n {
        for nu in 0..n {
            let idx = DerivIndex::unit(mu).add(&DerivIndex::unit(nu));
            terms.push((idx, g.entries[mu][nu].clone()));
        }
    }
    for nu in 0..n {
        let mut parts = Vec::new();
        for mu in 0..n {
            parts.push(ctx.derivative(&g.entries[mu][nu], space[mu])?);
            parts.push((&g.entries[mu][nu] * &dlog[mu]).scale(&Scalar::ratio(-1, 2)));
        }
        terms.push((DerivIndex::unit(nu), ctx.reduce(&Expr::sum(parts.iter()))?));
    }
    let op = DiffOp::from_terms(spec, terms);
    op.map_coeffs(|c| Ok(c.clone()))
}

/// `(g_{mu nu}, det g^{mu nu})`.
pub fn invert_and_det(g: &CoMetric) -> Result<(ExprMatrix, Expr)> {
    matrix::inverse(&g.entries, g.spec.ctx())
}

/// Christoffel symbols `Gamma^k_{ij}` of a metric.
fn christoffel(metric: &ExprMatrix, spec: &VariableSpec) -> Result<Vec<Vec<Vec<Expr>>>> {
    let ctx = spec.ctx();
    let n = spec.dim();
    let (inv, _) = matrix::inverse(metric, ctx)?;
    let mut dg = vec![vec![vec![Expr::zero(); n]; n]; n]; // dg[k][i][j] = d_k g_ij
    for (k, &v) in spec.space().iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                dg[k][i][j] = ctx.derivative(&metric[i][j], v)?;
            }
        }
    }
    let mut gam = vec![vec![vec![Expr::zero(); n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let parts: Vec<Expr> =
                    (0..n).map(|l| &inv[k][l] * &(&(&dg[i][l][j] + &dg[j][l][i]) - &dg[l][i][j])).collect();
                gam[k][i][j] = ctx.reduce(&Expr::sum(parts.iter()).scale(&Scalar::ratio(1, 2)))?;
            }
        }
    }
    Ok(gam)
}

/// Ricci scalar of a metric, normalized so the unit 2-sphere has `R = 2`.
pub fn scalar_curvature(metric: &ExprMatrix, spec: &VariableSpec) -> Result<Expr> {
    let ctx = spec.ctx();
    let n = spec.dim();
    let space = spec.space();
    let (inv, _) = matrix::inverse(metric, ctx)?;
    let gam = christoffel(metric, spec)?;
    // Ricci_{s v} = R^p_{s p v}
    //   = d_p G^p_{v s} - d_v G^p_{p s} + G^p_{p l} G^l_{v s} - G^p_{v l} G^l_{p s}
    let mut ricci = vec![vec![Expr::zero(); n]; n];
    for s in 0..n {
        for v in 0..n {
            let mut parts = Vec::new();
            for p in 0..n {
                parts.push(ctx.derivative(&gam[p][v][s], space[p])?);
                parts.push(-ctx.derivative(&gam[p][p][s], space[v])?);
                for l in 0..n {
                    parts.push(&gam[p][p][l] * &gam[l][v][s]);
                    parts.push(-(&gam[p][v][l] * &gam[l][p][s]));
                }
            }
            ricci[s][v] = ctx.reduce(&Expr::sum(parts.iter()))?;
        }
    }
    let parts: Vec<Expr> = (0..n).flat_map(|s| (0..n).map(move |v| (s, v))).map(|(s, v)| &inv[s][v] * &ricci[s][v]).collect();
    ctx.reduce(&Expr::sum(parts.iter()))
}

/// Gaussian curvature of `E du^2 + 2F du dv + G dv^2` by the Brioschi
/// formula; the scalar curvature is twice this.
pub fn brioschi_gaussian_curvature(metric: &ExprMatrix, spec: &VariableSpec) -> Result<Expr> {
    if spec.dim() != 2 {
        return Err(Error::Invalid("Brioschi formula needs a 2D chart".into()));
    }
    let ctx = spec.ctx();
    let (s, t) = (spec.space()[0], spec.space()[1]);
    let d = |e: &Expr, v: Var| ctx.derivative(e, v);
    let (e, f, g) = (&metric[0][0], &metric[0][1], &metric[1][1]);
    let (e_s, e_t) = (d(e, s)?, d(e, t)?);
    let (f_s, f_t) = (d(f, s)?, d(f, t)?);
    let (g_s, g_t) = (d(g, s)?, d(g, t)?);
    let e_tt = d(&e_t, t)?;
    let f_st = d(&f_s, t)?;
    let g_ss = d(&g_s, s)?;
    let half = Scalar::ratio(1, 2);
    let m = |rows: Vec<Vec<Expr>>| matrix::det(&rows, ctx);
    let corner = &(&e_tt.scale(&Scalar::ratio(-1, 2)) + &f_st) - &g_ss.scale(&half);
    let first = m(vec![
        vec![corner, e_s.scale(&half), &f_s - &e_t.scale(&half)],
        vec![&f_t - &g_s.scale(&half), e.clone(), f.clone()],
        vec![g_t.scale(&half), f.clone(), g.clone()],
    ])?;
    let second = m(vec![
        vec![Expr::zero(), e_t.scale(&half), g_s.scale(&half)],
        vec![e_t.scale(&half), e.clone(), f.clone()],
        vec![g_s.scale(&half), f.clone(), g.clone()],
    ])?;
    let eg_f2 = ctx.reduce(&(&(e * g) - &(f * f)))?;
    ctx.reduce(&(&first - &second).checked_div(&(&eg_f2 * &eg_f2))?)
}

/// Round 2-sphere `dtheta^2 + sin^2(theta) dphi^2`.
pub fn round_sphere_metric() -> ExprMatrix {
    let s = Expr::var(Var::SinTheta);
    vec![vec![Expr::one(), Expr::zero()], vec![Expr::zero(), &s * &s]]
}

/// `V_eff = (4 mu^2 - 1) r / (8u) + beta^2 r / 2`.
pub fn effective_potential() -> Expr {
    let r = Expr::var(Var::R);
    let u = Expr::var(Var::U);
    let mu = Expr::var(Var::Mu);
    let beta = Expr::var(Var::Beta);
    let a = (&(&(&mu * &mu).scale(&Scalar::int(4)) - &Expr::one()) * &r)
        .checked_div(&u.scale(&Scalar::int(8)))
        .expect("u != 0");
    &a + &(&(&beta * &beta) * &r).scale(&Scalar::ratio(1, 2))
}

/// Formal adjoint of `a` with respect to the weight `w`, given `d log w`:
/// `f -> w^-1 sum (-d)^alpha (w a_alpha f)`.
pub fn formal_adjoint(a: &DiffOp, dlog_weight: &GaugeData) -> Result<DiffOp> {
    let spec = a.spec();
    let parts: Vec<DiffOp> = a
        .terms()
        .iter()
        .map(|(idx, c)| {
            let mut d = DiffOp::term(spec, *idx, Expr::one());
            if idx.order() % 2 == 1 {
                d = d.neg();
            }
            d.compose(&DiffOp::mult(spec, c.clone()))
        })
        .collect::<Result<_>>()?;
    conjugate(&DiffOp::sum(spec, &parts)?, dlog_weight)
}

/// `L - L*` for the volume weight `sqrt(det g_{..}) = det(g^{..})^(-1/2)`;
/// zero for a Laplace-Beltrami operator.
pub fn self_adjointness_defect(g: &CoMetric) -> Result<DiffOp> {
    let lb = laplace_beltrami(g)?;
    let ctx = g.spec.ctx();
    let det = matrix::det(&g.entries, ctx)?;
    let grad: Vec<(Var, Expr)> = g
        .spec
        .space()
        .iter()
        .map(|&v| Ok((v, ctx.reduce(&ctx.derivative(&det, v)?.checked_div(&det)?.scale(&Scalar::ratio(-1, 2)))?)))
        .collect::<Result<_>>()?;
    let adj = formal_adjoint(&lb, &GaugeData::new(grad))?;
    lb.sub(&adj)?.map_coeffs(|c| ctx.reduce(c))
}

/// `R = r(4u-1) / (2u(r^2-u)^2)`.
pub fn printed_curvature() -> Expr {
    parse_function("r*(4*u-1)/(2*u*(r^2-u)^2)", &VariableSpec::r_u()).expect("fixed text")
}

pub fn verify_det() -> CheckReport {
    timed("geo.det", |rep| {
        let (_, det) = invert_and_det(&CoMetric::coulomb_ru())?;
        let expected = parse_function("u*(r^2-u)", &VariableSpec::r_u())?;
        rep.require("det g^{mu nu}", det == expected, &det);
        Ok(())
    })
}

/// Curvature of the reduced cometric's matrix read as a metric, checked
/// against the closed form and the Brioschi formula. The metric obtained by
/// inverting the cometric is flat; that value is reported as a note.
pub fn verify_curvature() -> CheckReport {
    timed("geo.curvature", |rep| {
        let g = CoMetric::coulomb_ru();
        let spec = g.spec().clone();
        let r = scalar_curvature(g.entries(), &spec)?;
        rep.require("R", r == printed_curvature(), &r);
        let k = brioschi_gaussian_curvature(g.entries(), &spec)?;
        rep.require("R = 2K (Brioschi)", r == k.scale(&Scalar::int(2)), &k);
        let (metric, _) = invert_and_det(&g)?;
        let r_inv = scalar_curvature(&metric, &spec)?;
        rep.note(format!("curvature of the inverse of the cometric: {r_inv}"));
        let sphere = scalar_curvature(&round_sphere_metric(), &VariableSpec::sphere())?;
        rep.require("unit sphere R = 2", sphere == Expr::int(2), &sphere);
        for (k, m) in random_diagonal_metrics(3, 7).iter().enumerate() {
            let rr = scalar_curvature(m, &spec)?;
            let kk = brioschi_gaussian_curvature(m, &spec)?;
            rep.require(&format!("random metric {k}"), rr == kk.scale(&Scalar::int(2)), &rr);
        }
        Ok(())
    })
}

/// Diagonal metrics with entries `a + b r + c u^2` and `d + e u + f r^2`
/// (positive integer coefficients), from a fixed seed.
pub fn random_diagonal_metrics(count: usize, seed: u64) -> Vec<ExprMatrix> {
    let mut rng = StdRng::seed_from_u64(seed);
    let s = VariableSpec::r_u();
    (0..count)
        .map(|_| {
            let mut c = || rng.gen_range(1..6i64);
            let e = parse_function(&format!("{} + {}*r + {}*u^2", c(), c(), c()), &s).expect("fixed shape");
            let g = parse_function(&format!("{} + {}*u + {}*r^2", c(), c(), c()), &s).expect("fixed shape");
            vec![vec![e, Expr::zero()], vec![Expr::zero(), g]]
        })
        .collect()
}

/// Log-gradient of `exp(beta r) (r^2-u)^(-p/2) u^(-(1+2mu)/4)`;
/// `with_u_power = false` drops the last factor (a negative control).
pub fn gamma_a_gauge(with_u_power: bool) -> Result<GaugeData> {
    let s = VariableSpec::r_u();
    let wr = parse_function("beta - p*r/(r^2-u)", &s)?;
    let wu = if with_u_power {
        parse_function("p/(2*(r^2-u)) - (1+2*mu)/(4*u)", &s)?
    } else {
        parse_function("p/(2*(r^2-u))", &s)?
    };
    Ok(GaugeData::new(vec![(Var::R, wr), (Var::U, wu)]))
}

/// `Gamma_a^-1 h_a Gamma_a - (-Delta_LB + V_eff)`.
pub fn schrodinger_residual(gauge: &GaugeData) -> Result<DiffOp> {
    let lhs = conjugate(&h_a(), gauge)?;
    let lb = laplace_beltrami(&CoMetric::coulomb_ru())?;
    let rhs = lb.neg().add(&DiffOp::mult(&VariableSpec::r_u(), effective_potential()))?;
    lhs.sub(&rhs)
}

/// Passes when the residual vanishes modulo `p^2 = p`; a symbolic-`p`
/// remainder is reported as a note.
pub fn verify_schrodinger_form() -> CheckReport {
    timed("geo.schrodinger", |rep| {
        let res = schrodinger_residual(&gamma_a_gauge(true)?)?;
        if !res.is_zero() {
            rep.note(format!("residual for symbolic p: {res}"));
        }
        rep.residual("modulo p^2 = p", &op_modulo_parity(&res)?);
        Ok(())
    })
}

pub fn verify_self_adjoint() -> CheckReport {
    timed("geo.lb.selfadjoint", |rep| {
        rep.residual("L - L*", &self_adjointness_defect(&CoMetric::coulomb_ru())?);
        rep.residual("L - L* (polar)", &self_adjointness_defect(&polar_cometric()?)?);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartesian_cometric_is_identity() {
        let ctx = AlgebraicContext::cartesian3d();
        let xyz = [Var::X, Var::Y, Var::Z];
        let coords: Vec<Expr> = xyz.iter().map(|&v| Expr::var(v)).collect();
        let g = cometric_from_embedding(&ctx, &xyz, &coords, &VariableSpec::cartesian3d()).unwrap();
        assert_eq!(g.entries(), &matrix::identity(3));
        let scaled = vec![Expr::var(Var::X).scale(&Scalar::int(2)), Expr::var(Var::Y), Expr::var(Var::Z)];
        let g2 = cometric_from_embedding(&ctx, &xyz, &scaled, &VariableSpec::cartesian3d()).unwrap();
        assert_eq!(g2.get(0, 0), &Expr::int(4));
    }

    #[test]
    fn polar_cometric_entries() {
        let g = polar_cometric().unwrap();
        let r = Expr::var(Var::R);
        let rho = Expr::var(Var::Rho);
        assert_eq!(g.get(0, 0), &Expr::one());
        assert_eq!(g.get(1, 1), &Expr::one());
        assert_eq!(g.get(0, 1), &rho.checked_div(&r).unwrap());
        assert_eq!(g.get(2, 2), &rho.pow(-2).unwrap());
        assert!(g.get(0, 2).is_zero() && g.get(1, 2).is_zero());
    }

    #[test]
    fn flat_laplacian() {
        let s = VariableSpec::r_u();
        let g = CoMetric::new(&s, matrix::identity(2)).unwrap();
        let lb = laplace_beltrami(&g).unwrap();
        let expected = DiffOp::d_pow(&s, Var::R, 2).unwrap().add(&DiffOp::d_pow(&s, Var::U, 2).unwrap()).unwrap();
        assert_eq!(lb, expected);
    }

    #[test]
    fn determinant_and_inverse_of_reduced_cometric() {
        let g = CoMetric::coulomb_ru();
        let (inv, det) = invert_and_det(&g).unwrap();
        let r = Expr::var(Var::R);
        let u = Expr::var(Var::U);
        let d = &u * &(&(&r * &r) - &u);
        assert_eq!(det, d);
        let dinv = d.inv().unwrap();
        assert_eq!(inv[0][0], &(&r * &u).scale(&Scalar::int(2)) * &dinv);
        assert_eq!(inv[0][1], &(-&u) * &dinv);
        assert_eq!(inv[1][1], &r.scale(&Scalar::ratio(1, 2)) * &dinv);
    }

    #[test]
    fn sphere_has_curvature_two() {
        let s = VariableSpec::sphere();
        let m = round_sphere_metric();
        assert_eq!(scalar_curvature(&m, &s).unwrap(), Expr::int(2));
        assert_eq!(brioschi_gaussian_curvature(&m, &s).unwrap(), Expr::one());
    }

    #[test]
    fn flat_metric_has_no_curvature() {
        let s = VariableSpec::r_u();
        assert!(scalar_curvature(&matrix::identity(2), &s).unwrap().is_zero());
    }

    #[test]
    fn determinant_and_curvature_checks() {
        for rep in [verify_det(), verify_curvature()] {
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn schrodinger_form_and_control() {
        let rep = verify_schrodinger_form();
        assert!(rep.passed(), "{rep}");
        let bad = schrodinger_residual(&gamma_a_gauge(false).unwrap()).unwrap();
        let bad = op_modulo_parity(&bad).unwrap();
        assert!(bad.terms().iter().any(|(_, c)| c.den().contains(Var::U) && !c.den().contains(Var::R)));
    }

    #[test]
    fn potential_at_half() {
        let v = effective_potential().substitute(&[(Var::Mu, Expr::ratio(1, 2))]).unwrap();
        assert_eq!(v, parse_function("beta^2*r/2", &VariableSpec::r_u()).unwrap());
    }

    #[test]
    fn laplace_beltrami_is_self_adjoint() {
        assert!(verify_self_adjoint().passed());
        // a first-order perturbation breaks it
        let g = CoMetric::coulomb_ru();
        let lb = laplace_beltrami(&g).unwrap().add(&DiffOp::d(g.spec(), Var::R).unwrap()).unwrap();
        let dlog = GaugeData::new(vec![]);
        assert!(!lb.sub(&formal_adjoint(&lb, &dlog).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn cometric_json() {
        let g = CoMetric::from_json(r#"{"chart": "r-u", "entries": [["r/2", "u"], ["u", "2*r*u"]]}"#).unwrap();
        assert_eq!(g, CoMetric::coulomb_ru());
        assert!(CoMetric::from_json(r#"{"chart": "r-u", "entries": [["1", "u"], ["r", "1"]]}"#).is_err());
        assert!(CoMetric::from_json(r#"{"chart": "nowhere", "entries": []}"#).is_err());
    }
}
